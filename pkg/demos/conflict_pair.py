# Shared toy network for the demos: two flights contesting one arrival
# slot at a hub, small enough for exhaustive polyhedral analysis.

from fractions import Fraction

from tfmp import CapacityProfile, Flight, Instance, derive_time_windows, validate_instance


def make_conflict_pair(hold: int = 2) -> Instance:
    cheap = Flight(
        id="CHEAP",
        path=("West", "Hub"),
        scheduled_departure=2,
        scheduled_arrival=3,
        ground_cost=Fraction(100),
        air_cost=Fraction(300),
        transit_times=(1,),
    )
    dear = Flight(
        id="DEAR",
        path=("East", "Hub"),
        scheduled_departure=2,
        scheduled_arrival=3,
        ground_cost=Fraction(400),
        air_cost=Fraction(900),
        transit_times=(1,),
    )
    inst = Instance(
        sectors=("West", "East", "Hub"),
        flights=(cheap, dear),
        horizon=8,
        capacities=CapacityProfile(arrival={("Hub", t): 1 for t in range(1, 9)}),
    )
    return validate_instance(derive_time_windows(inst, hold))
