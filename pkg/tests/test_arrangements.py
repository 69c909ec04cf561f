import itertools
import random

import pytest

from regionlogic.arrangements import cell_count, clear_cache, enumerate_cells
from regionlogic.geometry import (
    DegenerateGeometry,
    HalfSpace,
    feasible_interior,
    hyperplane,
)


def brute_force_cells(planes):
    """All feasible sign vectors via exhaustive feasibility checks."""
    out = set()
    for signs in itertools.product((1, -1), repeat=len(planes)):
        constraints = [HalfSpace(p, s) for p, s in zip(planes, signs)]
        if feasible_interior(constraints) is not None:
            out.add(signs)
    return out


def axes(dim):
    def e(i):
        v = [0] * dim
        v[i] = 1
        return v

    return [hyperplane(e(i), 0) for i in range(dim)]


def test_empty_arrangement_single_cell():
    assert enumerate_cells(()) == {(): enumerate_cells(())[()]}
    assert cell_count(axes(3)[:1]) == 2


def test_corner_prism_fan_counts():
    x, y, _ = axes(3)
    assert cell_count([x, y, axes(3)[2]]) == 8
    assert cell_count([x, y, hyperplane([1, 1, 0], 0)]) == 6
    assert cell_count([x, y, hyperplane([1, 1, 0], 1)]) == 7


def test_parallel_planes_stack():
    planes = [hyperplane([1, 0], k) for k in range(4)]
    assert cell_count(planes) == 5


def test_generic_line_arrangement_count():
    # 4 lines in general position: 1 + 4 + C(4,2) = 11 cells
    planes = [
        hyperplane([1, 0], 0),
        hyperplane([0, 1], 0),
        hyperplane([1, 1], 1),
        hyperplane([1, -1], 3),
    ]
    assert cell_count(planes) == 11


def test_witness_points_lie_in_their_cells():
    planes = [
        hyperplane([1, 0, 0], 0),
        hyperplane([0, 1, 0], 0),
        hyperplane([1, 1, 1], 1),
        hyperplane([1, -1, 0], 2),
    ]
    for sigma, point in enumerate_cells(planes).items():
        for plane, s in zip(planes, sigma):
            assert plane.side_of(point) == s


def test_duplicate_planes_rejected():
    p = hyperplane([1, 0], 0)
    with pytest.raises(DegenerateGeometry):
        enumerate_cells([p, hyperplane([2, 0], 0)])


def test_matches_brute_force_on_random_arrangements():
    rng = random.Random(4242)
    for _ in range(40):
        dim = rng.choice([1, 2, 3])
        planes = []
        seen = set()
        for _ in range(rng.randint(1, 5)):
            normal = [rng.randint(-3, 3) for _ in range(dim)]
            if not any(normal):
                normal[rng.randrange(dim)] = 1
            p = hyperplane(normal, rng.randint(-2, 2))
            if p not in seen:
                seen.add(p)
                planes.append(p)
        cells = enumerate_cells(tuple(planes))
        assert set(cells) == brute_force_cells(planes)
        for sigma, point in cells.items():
            assert tuple(p.side_of(point) for p in planes) == sigma


def test_degenerate_concurrent_planes_match_brute_force():
    # many planes through one point, plus parallels
    planes = [
        hyperplane([1, 0, 0], 0),
        hyperplane([0, 1, 0], 0),
        hyperplane([1, 1, 0], 0),
        hyperplane([1, -1, 0], 0),
        hyperplane([1, 0, 0], 1),
    ]
    cells = enumerate_cells(tuple(planes))
    assert set(cells) == brute_force_cells(planes)


def test_subset_projection_consistency():
    clear_cache()
    big = [
        hyperplane([1, 0, 0], 0),
        hyperplane([0, 1, 0], 0),
        hyperplane([0, 0, 1], 0),
        hyperplane([1, 1, 1], 1),
    ]
    enumerate_cells(tuple(big))
    sub = (big[0], big[3])
    derived = enumerate_cells(sub)
    clear_cache()
    direct = enumerate_cells(sub)
    assert set(derived) == set(direct)
    for sigma, point in derived.items():
        assert tuple(p.side_of(point) for p in sub) == sigma
