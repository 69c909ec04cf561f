"""Geometric deciders for the relations definable over half-space regions.

These work directly on exact coordinates. The formula layer reaches the same
relations by evaluating expanded definitions over the region algebra; tests
hold the two routes against each other.

Lines in space are carried indirectly, as the intersection of a reference
plane with a second, transversal plane. All in-plane relations (coincidence,
parallelism, meeting in a point, concurrency) are decided in exact 2-D
coordinates of the reference plane.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from .geometry import (
    DegenerateGeometry,
    DimensionMismatch,
    GeometryError,
    HalfSpace,
    Hyperplane,
    Vector,
    flat_parameterization,
    intersect_planes,
    solve_square,
)
from .regions import Region, complement, count_cells, is_convex

LINE_COINCIDENT = "coincident"
LINE_PARALLEL = "parallel"
LINE_MEET = "meet"


class TripleKind(Enum):
    FAN = "fan"
    PRISM = "prism"
    CORNER = "corner"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class TripleClass:
    """How three planes partition space: 6, 7, or 8 cells."""

    kind: TripleKind
    cell_count: int


@dataclass(frozen=True)
class LineInPlane:
    """A line represented as reference plane meets cutter plane."""

    reference: Hyperplane
    cutter: Hyperplane

    def __post_init__(self) -> None:
        if self.reference.dim != 3 or self.cutter.dim != 3:
            raise DimensionMismatch("lines in a plane live in dimension 3")
        if self.reference.normal == self.cutter.normal:
            raise DegenerateGeometry(
                "cutter is parallel to the reference plane; no line results"
            )


@dataclass(frozen=True)
class FrameWitness:
    """A validated coordinate frame: corner, unit plane, origin, axes, units."""

    halfspaces: tuple[HalfSpace, HalfSpace, HalfSpace, HalfSpace]
    origin: Vector
    axes: tuple[LineInPlane, LineInPlane, LineInPlane]
    units: tuple[Vector, Vector, Vector]

    def plane(self, index: int) -> Hyperplane:
        """Planes are numbered 1..3 for the corner, 4 for the unit plane."""
        return self.halfspaces[index - 1].plane

    def axis_in_plane(self, plane_index: int, axis_index: int) -> LineInPlane:
        """The given axis as a line of the given reference plane.

        Axis j is the intersection of the two corner planes other than j,
        so it lies in reference plane p exactly when p != j.
        """
        if plane_index == axis_index:
            raise GeometryError(f"axis {axis_index} does not lie in plane {plane_index}")
        if not (1 <= plane_index <= 3 and 1 <= axis_index <= 3):
            raise GeometryError("plane and axis indices range over 1..3")
        other = ({1, 2, 3} - {plane_index, axis_index}).pop()
        return LineInPlane(self.plane(plane_index), self.plane(other))

    def unit_line(self, plane_index: int) -> LineInPlane:
        """Where the unit plane crosses the given reference plane."""
        if not 1 <= plane_index <= 3:
            raise GeometryError("reference planes are numbered 1..3")
        return LineInPlane(self.plane(plane_index), self.plane(4))


@lru_cache(maxsize=None)
def _plane_chart(plane: Hyperplane) -> tuple[Vector, Vector, Vector]:
    origin, dirs = flat_parameterization(plane.normal.coords, plane.offset)
    return Vector(origin), Vector(dirs[0]), Vector(dirs[1])


@lru_cache(maxsize=None)
def _line_coords(reference: Hyperplane, cutter: Hyperplane) -> tuple[Fraction, ...]:
    """The cutter as a canonical 2-D line in the reference plane's chart."""
    origin, d1, d2 = _plane_chart(reference)
    a1 = cutter.normal.dot(d1)
    a2 = cutter.normal.dot(d2)
    c = cutter.offset - cutter.normal.dot(origin)
    leading = a1 if a1 != 0 else a2
    return (a1 / leading, a2 / leading, c / leading)


def _chart_point(reference: Hyperplane, t1: Fraction, t2: Fraction) -> Vector:
    origin, d1, d2 = _plane_chart(reference)
    return origin + d1.scale(t1) + d2.scale(t2)


def is_halfspace_region(r: Region) -> bool:
    """Whether both the region and its complement are convex and nontrivial."""
    if r.is_empty() or r.is_full():
        return False
    return is_convex(r) and is_convex(complement(r))


def hs_distinct(regions: Sequence[Region]) -> bool:
    """All are half-space regions, pairwise distinct and non-complementary."""
    from .regions import bounding_halfspace

    halves = []
    for r in regions:
        if not is_halfspace_region(r):
            return False
        halves.append(bounding_halfspace(r))
    for i in range(len(halves)):
        for j in range(i + 1, len(halves)):
            if halves[i] == halves[j] or halves[i] == halves[j].complement():
                return False
    return True


def _require_hs2(a: HalfSpace, b: HalfSpace) -> None:
    if a.dim != b.dim:
        raise DimensionMismatch("half-spaces of different dimensions")
    if a.plane == b.plane:
        raise GeometryError("half-spaces must have distinct bounding planes")


def planes_parallel(a: HalfSpace, b: HalfSpace) -> bool:
    """Distinct bounding planes that never meet."""
    _require_hs2(a, b)
    return a.plane.normal == b.plane.normal


def planes_meet_in_line(a: HalfSpace, b: HalfSpace) -> bool:
    """Distinct bounding planes meeting in a single line."""
    _require_hs2(a, b)
    if a.dim != 3:
        raise DimensionMismatch("meeting in a line is a dimension-3 relation")
    return a.plane.normal != b.plane.normal


def classify_triple(a: HalfSpace, b: HalfSpace, c: HalfSpace) -> TripleClass:
    """Fan, prism, or corner by the cell count of the three bounding planes."""
    for hs in (a, b, c):
        if hs.dim != 3:
            raise DimensionMismatch("triple classification works in dimension 3")
    planes = [a.plane, b.plane, c.plane]
    distinct = sorted(set(planes), key=Hyperplane.sort_key)
    pairwise_transversal = len(distinct) == 3 and all(
        p.normal != q.normal
        for i, p in enumerate(distinct)
        for q in distinct[i + 1 :]
    )
    count = count_cells(distinct)
    if not pairwise_transversal:
        return TripleClass(TripleKind.DEGENERATE, count)
    kind = {6: TripleKind.FAN, 7: TripleKind.PRISM, 8: TripleKind.CORNER}[count]
    return TripleClass(kind, count)


def frame_formula_holds(
    h1: HalfSpace, h2: HalfSpace, h3: HalfSpace, h4: HalfSpace
) -> bool:
    """Corner plus the unit plane meeting each corner plane in a line."""
    if classify_triple(h1, h2, h3).kind is not TripleKind.CORNER:
        return False
    for h in (h1, h2, h3):
        if h4.plane == h.plane or h4.plane.normal == h.plane.normal:
            return False
    return True


def check_frame(
    h1: HalfSpace, h2: HalfSpace, h3: HalfSpace, h4: HalfSpace
) -> Optional[FrameWitness]:
    """Validate a coordinate frame and compute origin, axes, and units.

    Beyond the corner-and-three-lines condition this requires the unit
    plane to miss the origin and to cross each axis in a single point;
    otherwise some unit of measurement would not exist.
    """
    if not frame_formula_holds(h1, h2, h3, h4):
        return None
    p1, p2, p3, p4 = h1.plane, h2.plane, h3.plane, h4.plane
    origin = intersect_planes(p1, p2, p3)
    if origin is None or p4.side_of(origin) == 0:
        return None
    corner = (p1, p2, p3)
    units = []
    for j in range(3):
        others = [corner[k] for k in range(3) if k != j]
        unit = intersect_planes(others[0], others[1], p4)
        if unit is None:
            return None
        units.append(unit)
    axes = (
        LineInPlane(p2, p3),
        LineInPlane(p1, p3),
        LineInPlane(p1, p2),
    )
    return FrameWitness((h1, h2, h3, h4), origin, axes, tuple(units))


def canonical_frame() -> FrameWitness:
    """The frame on the coordinate octant with unit plane x + y + z = 1."""
    witness = check_frame(
        HalfSpace.from_inequality([1, 0, 0], 0, ">"),
        HalfSpace.from_inequality([0, 1, 0], 0, ">"),
        HalfSpace.from_inequality([0, 0, 1], 0, ">"),
        HalfSpace.from_inequality([1, 1, 1], 1, "<"),
    )
    assert witness is not None
    return witness


def classify_lines_in_plane(
    l1: LineInPlane, l2: LineInPlane
) -> tuple[str, Optional[Vector]]:
    """Coincident, parallel, or meeting in a single exact point."""
    if l1.reference != l2.reference:
        raise GeometryError("lines lie in different reference planes")
    r1 = _line_coords(l1.reference, l1.cutter)
    r2 = _line_coords(l2.reference, l2.cutter)
    if r1 == r2:
        return LINE_COINCIDENT, None
    if r1[:2] == r2[:2]:
        return LINE_PARALLEL, None
    solution = solve_square([r1[:2], r2[:2]], [r1[2], r2[2]])
    assert solution is not None
    return LINE_MEET, _chart_point(l1.reference, solution[0], solution[1])


def concurrent_in_plane(l1: LineInPlane, l2: LineInPlane, l3: LineInPlane) -> bool:
    """Whether the three lines have exactly one point in common.

    Coincident pairs are tolerated: two coincident lines and a third
    crossing them still share exactly one point.
    """
    for other in (l2, l3):
        if l1.reference != other.reference:
            raise GeometryError("lines lie in different reference planes")
    coords = [
        _line_coords(line.reference, line.cutter) for line in (l1, l2, l3)
    ]
    distinct = []
    for c in coords:
        if c not in distinct:
            distinct.append(c)
    if len(distinct) == 1:
        return False
    first, second = distinct[0], distinct[1]
    if first[:2] == second[:2]:
        return False
    point = solve_square([first[:2], second[:2]], [first[2], second[2]])
    return all(
        a1 * point[0] + a2 * point[1] == c for a1, a2, c in distinct[2:]
    )


def line_through_points(reference: Hyperplane, p: Vector, q: Vector) -> LineInPlane:
    """The in-plane line through two distinct points of the reference plane."""
    if not (reference.contains(p) and reference.contains(q)):
        raise GeometryError("points must lie on the reference plane")
    if p == q:
        raise DegenerateGeometry("two distinct points are needed")
    lifted = p + reference.normal
    from .geometry import plane_through

    return LineInPlane(reference, plane_through(p, q, lifted))


def line_parallel_through(
    reference: Hyperplane, base: LineInPlane, p: Vector
) -> LineInPlane:
    """The in-plane line through ``p`` parallel or coincident to ``base``."""
    if base.reference != reference:
        raise GeometryError("base line lies in a different reference plane")
    if not reference.contains(p):
        raise GeometryError("point must lie on the reference plane")
    a1, a2, _ = _line_coords(reference, base.cutter)
    origin, d1, d2 = _plane_chart(reference)
    direction = d1.scale(-a2) + d2.scale(a1)
    from .geometry import plane_through

    return LineInPlane(reference, plane_through(p, p + direction, p + reference.normal))


def point_on_line(line: LineInPlane, point: Vector) -> bool:
    return line.reference.contains(point) and line.cutter.contains(point)
