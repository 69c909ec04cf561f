import random

import pytest

from regionlogic.geometry import HalfSpace, Hyperplane, hyperplane
from regionlogic.regions import Region, _canonicalize
from regionlogic import arrangements


def random_plane_pool(rng: random.Random, dim: int, size: int) -> list[Hyperplane]:
    """Distinct hyperplanes with small integer data."""
    pool: list[Hyperplane] = []
    seen = set()
    while len(pool) < size:
        normal = [rng.randint(-3, 3) for _ in range(dim)]
        if not any(normal):
            continue
        plane = hyperplane(normal, rng.randint(-3, 3))
        if plane not in seen:
            seen.add(plane)
            pool.append(plane)
    return pool


def random_region(rng: random.Random, dim: int, pool: list[Hyperplane],
                  max_supports: int = 6) -> Region:
    """A canonical region over a random subset of the pool."""
    k = rng.randint(0, min(max_supports, len(pool)))
    planes = sorted(rng.sample(pool, k), key=Hyperplane.sort_key)
    feasible = list(arrangements.enumerate_cells(tuple(planes)))
    members = {sigma for sigma in feasible if rng.random() < 0.5}
    return _canonicalize(dim, planes, members)


def random_convex_region(rng: random.Random, dim: int, pool: list[Hyperplane],
                         max_supports: int = 4) -> Region:
    """A random nonempty product of half-spaces from the pool."""
    from regionlogic.regions import region_from_halfspaces

    while True:
        k = rng.randint(1, min(max_supports, len(pool)))
        cell = [HalfSpace(p, rng.choice((1, -1))) for p in rng.sample(pool, k)]
        region = region_from_halfspaces(dim, [cell])
        if not region.is_empty():
            return region


@pytest.fixture
def rng():
    return random.Random(20260809)
