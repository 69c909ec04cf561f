import random
from fractions import Fraction

import pytest

from conftest import random_plane_pool, random_region
from regionlogic.geometry import (
    AffineMap,
    DegenerateGeometry,
    DimensionMismatch,
    HalfSpace,
    Matrix,
    halfspace,
    hyperplane,
    vec,
)
from regionlogic.regions import (
    BudgetExceeded,
    Region,
    apply_affine_region,
    complement,
    count_cells,
    equals,
    halfspace_region,
    is_bounded,
    is_convex,
    is_empty,
    leq,
    product,
    region_from_halfspaces,
    region_sum,
    set_hyperplane_budget,
)


def interval(dim, axis, lo=None, hi=None):
    """Axis-aligned slab constraints."""
    normal = [0] * dim
    normal[axis] = 1
    cell = []
    if lo is not None:
        cell.append(halfspace(normal, lo, ">"))
    if hi is not None:
        cell.append(halfspace(normal, hi, "<"))
    return cell


def square2():
    return region_from_halfspaces(2, [interval(2, 0, 0, 1) + interval(2, 1, 0, 1)])


def test_single_halfspace_region():
    r = region_from_halfspaces(1, [[halfspace([1], 0, ">")]])
    assert r == halfspace_region(halfspace([1], 0, ">"))
    assert not r.is_empty()


def test_infeasible_cell_drops_to_bottom():
    r = region_from_halfspaces(1, [[halfspace([1], 0, ">"), halfspace([1], 0, "<")]])
    assert r.is_empty()
    assert r == Region.empty(1)


def test_redundant_support_pruned():
    r = region_from_halfspaces(
        1, [[halfspace([1], 0, ">")], [halfspace([1], "1/2", ">")]]
    )
    assert r == halfspace_region(halfspace([1], 0, ">"))
    assert len(r.supports) == 1


def test_product_examples():
    right = halfspace_region(halfspace([1, 0], 0, ">"))
    left = halfspace_region(halfspace([1, 0], 0, "<"))
    top = halfspace_region(halfspace([0, 1], 0, ">"))
    assert product(right, left).is_empty()
    assert product(right, Region.full(2)) == right
    quadrant = product(right, top)
    assert quadrant == region_from_halfspaces(
        2, [[halfspace([1, 0], 0, ">"), halfspace([0, 1], 0, ">")]]
    )
    rng = random.Random(5)
    for _ in range(50):
        p = vec(Fraction(rng.randint(-20, 20), 3), Fraction(rng.randint(-20, 20), 3))
        expected = right.contains(p) and top.contains(p)
        assert quadrant.contains(p) == expected


def test_sum_absorbs_shared_boundary():
    right = halfspace_region(halfspace([1], 0, ">"))
    left = halfspace_region(halfspace([1], 0, "<"))
    assert region_sum(right, left).is_full()
    assert region_sum(right, Region.empty(1)) == right


def test_sum_of_overlapping_squares_absorbs_seam():
    a = region_from_halfspaces(2, [interval(2, 0, 0, 2) + interval(2, 1, 0, 1)])
    b = region_from_halfspaces(2, [interval(2, 0, 1, 3) + interval(2, 1, 0, 1)])
    s = region_sum(a, b)
    expected = region_from_halfspaces(2, [interval(2, 0, 0, 3) + interval(2, 1, 0, 1)])
    assert equals(s, expected)
    assert s == expected
    # the seam x = 1 is interior to the sum
    assert s.contains(vec(1, "1/2"))
    rng = random.Random(6)
    for _ in range(80):
        p = vec(Fraction(rng.randint(-10, 40), 7), Fraction(rng.randint(-10, 20), 7))
        naive = a.contains(p) or b.contains(p)
        if naive:
            assert s.contains(p)


def test_complement_examples():
    right = halfspace_region(halfspace([1], 0, ">"))
    assert complement(right) == halfspace_region(halfspace([1], 0, "<"))
    assert complement(Region.full(2)) == Region.empty(2)
    assert complement(Region.empty(2)) == Region.full(2)


def test_complement_of_unit_square():
    sq = square2()
    outside = complement(sq)
    # sign-vector form keeps all four lines and the eight surrounding cells
    assert len(outside.supports) == 4
    assert len(outside.cells) == 8
    assert complement(outside) == sq
    for p, inside in [
        (vec("1/2", "1/2"), True),
        (vec(2, 2), False),
        (vec("-1/2", "1/2"), False),
    ]:
        assert sq.contains(p) == inside
        if not sq.contains(p):
            assert outside.contains(p)


def test_leq_examples():
    sq = square2()
    right = halfspace_region(halfspace([1, 0], 0, ">"))
    assert leq(Region.empty(2), sq)
    assert leq(
        halfspace_region(halfspace([1, 0], 1, ">")),
        halfspace_region(halfspace([1, 0], 0, ">")),
    )
    assert leq(sq, right)
    assert not leq(right, sq)


def test_equals_across_decompositions():
    # the same L-shape assembled from different cell splits
    horizontal = interval(2, 0, 0, 2) + interval(2, 1, 0, 1)
    vertical = interval(2, 0, 0, 1) + interval(2, 1, 0, 2)
    upper = interval(2, 0, 0, 1) + interval(2, 1, 1, 2)
    a = region_from_halfspaces(2, [horizontal, vertical])
    b = region_from_halfspaces(2, [horizontal, upper])
    assert equals(a, b)
    assert a == b


def test_is_empty_triangle_product():
    tri = region_from_halfspaces(
        2,
        [[
            halfspace([1, 0], 0, ">"),
            halfspace([0, 1], 0, ">"),
            halfspace([1, 1], 1, "<"),
        ]],
    )
    assert not is_empty(tri)
    assert is_empty(Region.empty(2))
    assert not is_empty(Region.full(2))


def test_is_convex_examples():
    assert is_convex(halfspace_region(halfspace([1, 0, 0], 0, ">")))
    assert is_convex(Region.empty(2))
    assert is_convex(Region.full(2))
    assert is_convex(square2())
    lshape = region_from_halfspaces(
        2,
        [
            interval(2, 0, 0, 2) + interval(2, 1, 0, 1),
            interval(2, 0, 0, 1) + interval(2, 1, 0, 2),
        ],
    )
    assert not is_convex(lshape)


def interior_battery(r):
    """Interior sample points: cell witnesses plus points toward cell vertices."""
    import itertools

    from regionlogic import arrangements
    from regionlogic.geometry import solve_square

    cells = arrangements.enumerate_cells(r.supports)
    points = [cells[sigma] for sigma in sorted(r.cells)]
    for sigma in sorted(r.cells):
        witness = cells[sigma]
        for subset in itertools.combinations(range(len(r.supports)), r.dim):
            planes = [r.supports[i] for i in subset]
            vertex = solve_square(
                [p.normal.coords for p in planes], [p.offset for p in planes]
            )
            if vertex is None:
                continue
            if all(
                r.supports[i].side_of(vertex) in (0, sigma[i])
                for i in range(len(r.supports))
            ):
                # points on [witness, vertex) stay inside the open cell
                points.append((witness.scale(3) + vertex).scale(Fraction(1, 4)))
    return points


def find_violating_pair(r):
    """Exact search for interior points whose midpoint leaves the region.

    For member cells K1, K2 and a non-member cell M, the condition
    p in K1, q in K2, (p+q)/2 in M is a strict linear system in (p, q);
    the region is non-convex exactly when some such system is feasible.
    """
    from regionlogic import arrangements
    from regionlogic.geometry import fm_feasible, vec

    dim = r.dim
    feasible = arrangements.enumerate_cells(r.supports)
    members = sorted(r.cells)
    nonmembers = sorted(set(feasible) - set(r.cells))

    def cell_rows(sigma, offset_p, offset_q, doubled):
        rows = []
        for plane, side in zip(r.supports, sigma):
            n = plane.normal.coords
            c = plane.offset
            coeffs = [Fraction(0)] * (2 * dim)
            for i, x in enumerate(n):
                if offset_p:
                    coeffs[i] += side * x
                if offset_q:
                    coeffs[dim + i] += side * x
            rhs = side * (2 * c if doubled else c)
            rows.append((tuple(coeffs), Fraction(rhs), True))
        return rows

    for k1 in members:
        for k2 in members:
            base = cell_rows(k1, True, False, False) + cell_rows(k2, False, True, False)
            for m in nonmembers:
                rows = base + cell_rows(m, True, True, True)
                witness = fm_feasible(rows, 2 * dim)
                if witness is not None:
                    p = vec(*witness[:dim])
                    q = vec(*witness[dim:])
                    return p, q
    return None


def test_is_convex_midpoint_soundness(rng):
    pool = random_plane_pool(rng, 2, 8)
    confirmed_nonconvex = 0
    for _ in range(40):
        r = random_region(rng, 2, pool, max_supports=5)
        if r.is_empty() or r.is_full():
            continue
        points = interior_battery(r)
        assert all(r.contains(p) for p in points)
        pair = find_violating_pair(r)
        if is_convex(r):
            # open convex sets contain every midpoint of interior points
            for p in points:
                for q in points:
                    assert r.contains((p + q).scale(Fraction(1, 2)))
            assert pair is None
        else:
            assert pair is not None
            p, q = pair
            assert r.contains(p) and r.contains(q)
            assert not r.contains((p + q).scale(Fraction(1, 2)))
            confirmed_nonconvex += 1
    assert confirmed_nonconvex >= 5


def exact_hull_region(dim, vertices):
    """Interior of the convex hull via brute facet search; test oracle."""
    import itertools

    from regionlogic.geometry import solve_square

    facets = []
    for subset in itertools.combinations(range(len(vertices)), dim):
        pts = [vertices[i] for i in subset]
        # find a normal orthogonal to the spanned directions
        if dim == 2:
            d = pts[1] - pts[0]
            normal = vec(-d[1], d[0])
        else:
            from regionlogic.geometry import cross

            normal = cross(pts[1] - pts[0], pts[2] - pts[0])
        if normal.is_zero():
            continue
        offset = normal.dot(pts[0])
        sides = set()
        for v in vertices:
            val = normal.dot(v) - offset
            if val != 0:
                sides.add(1 if val > 0 else -1)
        if len(sides) == 1:
            facets.append(halfspace(normal.coords, offset, ">" if sides.pop() == 1 else "<"))
    if not facets:
        return Region.empty(dim)
    return region_from_halfspaces(dim, [facets])


def region_vertices(r):
    """All support intersections lying in the closure of the region."""
    import itertools

    from regionlogic.geometry import solve_square

    verts = []
    for subset in itertools.combinations(r.supports, r.dim):
        point = solve_square(
            [p.normal.coords for p in subset], [p.offset for p in subset]
        )
        if point is None:
            continue
        signs = tuple(p.side_of(point) for p in r.supports)
        for sigma in r.cells:
            if all(s == 0 or s == m for s, m in zip(signs, sigma)):
                verts.append(point)
                break
    return verts


def test_bounded_convexity_agrees_with_hull_oracle(rng):
    pool = random_plane_pool(rng, 2, 7)
    box = region_from_halfspaces(2, [interval(2, 0, -4, 4) + interval(2, 1, -4, 4)])
    checked = 0
    for _ in range(60):
        r = product(random_region(rng, 2, pool, max_supports=4), box)
        if r.is_empty() or not is_bounded(r):
            continue
        checked += 1
        hull = exact_hull_region(2, region_vertices(r))
        assert is_convex(r) == equals(r, hull)
    assert checked >= 10


def test_count_cells_examples():
    assert count_cells([hyperplane([1, 0, 0], 0)]) == 2
    corner = [
        hyperplane([1, 0, 0], 0),
        hyperplane([0, 1, 0], 0),
        hyperplane([0, 0, 1], 0),
    ]
    assert count_cells(corner) == 8
    fan = corner[:2] + [hyperplane([1, 1, 0], 0)]
    assert count_cells(fan) == 6
    prism = corner[:2] + [hyperplane([1, 1, 0], 1)]
    assert count_cells(prism) == 7
    with pytest.raises(DegenerateGeometry):
        count_cells([corner[0], hyperplane([2, 0, 0], 0)])


def test_boolean_algebra_laws(rng):
    for dim in (2, 3):
        pool = random_plane_pool(rng, dim, 8)
        regions = [random_region(rng, dim, pool, max_supports=4) for _ in range(24)]
        zero = Region.empty(dim)
        one = Region.full(dim)
        for i in range(len(regions)):
            a = regions[i]
            b = regions[(i + 1) % len(regions)]
            c = regions[(i + 2) % len(regions)]
            assert product(a, b) == product(b, a)
            assert region_sum(a, b) == region_sum(b, a)
            assert product(a, product(b, c)) == product(product(a, b), c)
            assert region_sum(a, region_sum(b, c)) == region_sum(region_sum(a, b), c)
            assert product(a, region_sum(b, c)) == region_sum(product(a, b), product(a, c))
            assert region_sum(a, product(b, c)) == product(region_sum(a, b), region_sum(a, c))
            assert complement(product(a, b)) == region_sum(complement(a), complement(b))
            assert complement(region_sum(a, b)) == product(complement(a), complement(b))
            assert product(a, complement(a)) == zero
            assert region_sum(a, complement(a)) == one
            assert complement(complement(a)) == a
            assert leq(a, b) == (product(a, b) == a)
            assert equals(a, b) == (a == b)


def test_canonicalization_idempotent(rng):
    pool = random_plane_pool(rng, 2, 8)
    for _ in range(30):
        r = random_region(rng, 2, pool)
        rebuilt = region_from_halfspaces(
            r.dim, [sorted(c.constraints, key=HalfSpace.sort_key) for c in r.convex_cells()]
        )
        assert rebuilt == r


def test_apply_affine_region_transports_membership(rng):
    pool = random_plane_pool(rng, 2, 7)
    swap = AffineMap(
        Matrix(((Fraction(0), Fraction(1)), (Fraction(1), Fraction(0)))), vec(1, -1)
    )
    for _ in range(20):
        r = random_region(rng, 2, pool)
        image = apply_affine_region(swap, r)
        for _ in range(20):
            p = vec(
                Fraction(rng.randint(-30, 30), 7), Fraction(rng.randint(-30, 30), 7)
            )
            assert r.contains(p) == image.contains(swap.apply(p))
        # canonical form is preserved by the structural transport
        rebuilt = region_from_halfspaces(
            2, [sorted(c.constraints, key=HalfSpace.sort_key) for c in image.convex_cells()]
        )
        assert rebuilt == image


def test_dimension_mismatch_rejected():
    with pytest.raises(DimensionMismatch):
        product(Region.full(2), Region.full(3))


def test_budget_guard():
    set_hyperplane_budget(3)
    try:
        planes = [hyperplane([1, 0], k) for k in range(4)]
        with pytest.raises(BudgetExceeded):
            region_from_halfspaces(
                2, [[HalfSpace(p, 1) for p in planes]]
            )
    finally:
        set_hyperplane_budget(20)


def test_is_bounded():
    assert is_bounded(square2())
    assert not is_bounded(halfspace_region(halfspace([1, 0], 0, ">")))
    assert is_bounded(Region.empty(2))
    assert not is_bounded(Region.full(2))
    slab = region_from_halfspaces(2, [interval(2, 0, 0, 1)])
    assert not is_bounded(slab)
