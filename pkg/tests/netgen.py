"""Seeded random networks small enough for the exhaustive oracle."""
import random

from wlanlb.topology import AccessPoint, MobileStation, NetworkState


def random_network(seed: int, max_aps: int = 4, max_stations: int = 8) -> NetworkState:
    rng = random.Random(seed)
    n_ap = rng.randint(2, max_aps)
    aps = [AccessPoint(f"ap{i}") for i in range(n_ap)]
    stations = []
    for j in range(rng.randint(1, max_stations)):
        k = rng.randint(1, n_ap)
        reach = {f"ap{i}": float(rng.choice([5, 10, 20, 30, 40, 50, 60, 80]))
                 for i in sorted(rng.sample(range(n_ap), k))}
        assoc = max(reach, key=lambda a: (reach[a], a))
        stations.append(MobileStation(
            f"s{j}", reach, assoc,
            float(rng.choice([0, 50, 100, 200, 400, 800, 1600])),
            float(rng.choice([0, 0, 100, 300])),
        ))
    return NetworkState(tuple(aps), tuple(stations))
