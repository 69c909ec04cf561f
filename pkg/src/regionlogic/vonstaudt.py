"""Segment arithmetic on the axes of a coordinate frame.

Addition and multiplication of axis points are realized purely by incidence
and parallelism of lines inside a reference plane of the frame. Each
operation returns the resulting axis point together with a construction
witness: the named lines and points whose relations can be re-checked
independently of the arithmetic.

Coordinates on an axis are ratios along the unit segment, so the arithmetic
is exact for every rational value, positive or not. Degenerate operand
values (zeros, coincident lines) stay inside the constructions because the
concurrency test counts common points rather than insisting on three
distinct lines.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .geometry import (
    DegenerateGeometry,
    GeometryError,
    Vector,
    intersect_planes,
    rat,
)
from .predicates import (
    LINE_COINCIDENT,
    LINE_MEET,
    LINE_PARALLEL,
    FrameWitness,
    LineInPlane,
    classify_lines_in_plane,
    concurrent_in_plane,
    line_parallel_through,
    line_through_points,
    point_on_line,
)

ADD = "add"
MULTIPLY = "multiply"


@dataclass(frozen=True)
class AxisPoint:
    """A point on a frame axis, carried by a marker line and its coordinate."""

    frame: FrameWitness
    axis: int
    marker: LineInPlane
    value: Fraction


@dataclass(frozen=True)
class ConstructionWitness:
    """The named lines and points of one addition or multiplication."""

    kind: str
    lines: tuple[tuple[str, LineInPlane], ...]
    points: tuple[tuple[str, Vector], ...]

    def line(self, name: str) -> LineInPlane:
        for key, value in self.lines:
            if key == name:
                return value
        raise KeyError(name)

    def point(self, name: str) -> Vector:
        for key, value in self.points:
            if key == name:
                return value
        raise KeyError(name)

    def replace_line(self, name: str, line: LineInPlane) -> "ConstructionWitness":
        return ConstructionWitness(
            self.kind,
            tuple((k, line if k == name else v) for k, v in self.lines),
            self.points,
        )


def _axis_planes(axis: int) -> tuple[int, int]:
    if axis not in (1, 2, 3):
        raise GeometryError("axes are numbered 1..3")
    i, k = sorted({1, 2, 3} - {axis})
    return i, k


def default_reference_plane(axis: int) -> int:
    """The lower-numbered corner plane containing the axis."""
    return _axis_planes(axis)[0]


def _axis_direction(frame: FrameWitness, axis: int) -> Vector:
    return frame.units[axis - 1] - frame.origin


def axis_location(frame: FrameWitness, axis: int, value: Fraction) -> Vector:
    return frame.origin + _axis_direction(frame, axis).scale(value)


def point_value(frame: FrameWitness, axis: int, marker: LineInPlane) -> Fraction:
    """The coordinate of the point where the marker crosses the axis.

    The coordinate is the exact ratio of the origin-to-point segment over
    the origin-to-unit segment of the axis.
    """
    i, k = _axis_planes(axis)
    if marker.reference not in (frame.plane(i), frame.plane(k)):
        raise GeometryError("marker must lie in a plane containing the axis")
    crossing = intersect_planes(frame.plane(i), frame.plane(k), marker.cutter)
    if crossing is None:
        raise DegenerateGeometry("marker is parallel to or contains the axis")
    direction = _axis_direction(frame, axis)
    delta = crossing - frame.origin
    index = next(idx for idx, c in enumerate(direction.coords) if c != 0)
    value = delta[index] / direction[index]
    if frame.origin + direction.scale(value) != crossing:
        raise DegenerateGeometry("marker crossing is off the axis")
    return value


def axis_point_from_marker(
    frame: FrameWitness, axis: int, marker: LineInPlane
) -> AxisPoint:
    return AxisPoint(frame, axis, marker, point_value(frame, axis, marker))


def axis_point(
    frame: FrameWitness,
    axis: int,
    value: int | str | Fraction,
    plane: Optional[int] = None,
) -> AxisPoint:
    """The axis point with the given coordinate and a canonical marker.

    The marker is the line through the point parallel to the other axis of
    the chosen reference plane, which crosses the axis exactly once for
    every value.
    """
    value = rat(value)
    if plane is None:
        plane = default_reference_plane(axis)
    if plane == axis or plane not in (1, 2, 3):
        raise GeometryError(f"axis {axis} does not lie in plane {plane}")
    other = ({1, 2, 3} - {plane, axis}).pop()
    reference = frame.plane(plane)
    location = axis_location(frame, axis, value)
    marker = line_parallel_through(
        reference, frame.axis_in_plane(plane, other), location
    )
    return AxisPoint(frame, axis, marker, value)


def _operands(
    frame: FrameWitness, plane: int, a: AxisPoint, b: AxisPoint
) -> tuple[int, int]:
    if a.frame != frame or b.frame != frame:
        raise GeometryError("operands belong to a different frame")
    if a.axis != b.axis:
        raise GeometryError("operands lie on different axes")
    axis = a.axis
    if plane == axis or plane not in (1, 2, 3):
        raise GeometryError(f"axis {axis} does not lie in plane {plane}")
    other = ({1, 2, 3} - {plane, axis}).pop()
    return axis, other


def vs_add(
    frame: FrameWitness, plane: int, a: AxisPoint, b: AxisPoint
) -> tuple[AxisPoint, ConstructionWitness]:
    """Add two axis points by the parallel-transport construction."""
    axis, other = _operands(frame, plane, a, b)
    reference = frame.plane(plane)
    l3 = frame.axis_in_plane(plane, axis)
    l1 = frame.axis_in_plane(plane, other)
    origin = frame.origin
    a_pt = axis_location(frame, axis, a.value)
    b_pt = axis_location(frame, axis, b.value)
    j_pt = frame.units[other - 1]
    m = line_parallel_through(reference, l3, j_pt)
    l_a = line_parallel_through(reference, l1, a_pt)
    l_b = line_through_points(reference, b_pt, j_pt)
    relation, m_pt = classify_lines_in_plane(l_a, m)
    assert relation == LINE_MEET
    l_c = line_parallel_through(reference, l_b, m_pt)
    relation, c_pt = classify_lines_in_plane(l_c, l3)
    assert relation == LINE_MEET
    result = axis_point_from_marker(frame, axis, l_c)
    assert result.value == a.value + b.value
    witness = ConstructionWitness(
        ADD,
        (("l1", l1), ("l3", l3), ("lA", l_a), ("lB", l_b), ("lC", l_c), ("m", m)),
        (
            ("O", origin),
            ("A", a_pt),
            ("B", b_pt),
            ("C", c_pt),
            ("J", j_pt),
            ("M", m_pt),
        ),
    )
    return result, witness


def vs_multiply(
    frame: FrameWitness, plane: int, a: AxisPoint, b: AxisPoint
) -> tuple[AxisPoint, ConstructionWitness]:
    """Multiply two axis points via the unit line of the reference plane."""
    axis, other = _operands(frame, plane, a, b)
    reference = frame.plane(plane)
    l3 = frame.axis_in_plane(plane, axis)
    l1 = frame.axis_in_plane(plane, other)
    l2 = frame.unit_line(plane)
    origin = frame.origin
    a_pt = axis_location(frame, axis, a.value)
    b_pt = axis_location(frame, axis, b.value)
    i_pt = frame.units[axis - 1]
    j_pt = frame.units[other - 1]
    l_a = line_parallel_through(reference, l2, a_pt)
    l_b = line_through_points(reference, b_pt, j_pt)
    relation, m_pt = classify_lines_in_plane(l_a, l1)
    assert relation == LINE_MEET
    l_c = line_parallel_through(reference, l_b, m_pt)
    relation, c_pt = classify_lines_in_plane(l_c, l3)
    assert relation == LINE_MEET
    result = axis_point_from_marker(frame, axis, l_c)
    assert result.value == a.value * b.value
    witness = ConstructionWitness(
        MULTIPLY,
        (("l1", l1), ("l2", l2), ("l3", l3), ("lA", l_a), ("lB", l_b), ("lC", l_c)),
        (
            ("O", origin),
            ("A", a_pt),
            ("B", b_pt),
            ("C", c_pt),
            ("I", i_pt),
            ("J", j_pt),
            ("M", m_pt),
        ),
    )
    return result, witness


def _meets_at(line: LineInPlane, other: LineInPlane, expected: Vector) -> bool:
    relation, point = classify_lines_in_plane(line, other)
    return relation == LINE_MEET and point == expected


def _parallel_or_coincident(a: LineInPlane, b: LineInPlane) -> bool:
    return classify_lines_in_plane(a, b)[0] in (LINE_PARALLEL, LINE_COINCIDENT)


def _concurrent_at(
    l1: LineInPlane, l2: LineInPlane, l3: LineInPlane, expected: Vector
) -> bool:
    return (
        concurrent_in_plane(l1, l2, l3)
        and point_on_line(l1, expected)
        and point_on_line(l2, expected)
        and point_on_line(l3, expected)
    )


def check_witness(witness: ConstructionWitness) -> bool:
    """Re-verify every incidence and parallelism condition of a witness."""
    try:
        if witness.kind == ADD:
            l1, l3 = witness.line("l1"), witness.line("l3")
            l_a, l_b, l_c = (
                witness.line("lA"),
                witness.line("lB"),
                witness.line("lC"),
            )
            m = witness.line("m")
            return (
                _meets_at(l1, l3, witness.point("O"))
                and classify_lines_in_plane(m, l3)[0] == LINE_PARALLEL
                and _meets_at(l_a, l3, witness.point("A"))
                and _parallel_or_coincident(l_a, l1)
                and _meets_at(l_b, l3, witness.point("B"))
                and _concurrent_at(l_b, l1, m, witness.point("J"))
                and _meets_at(l_c, l3, witness.point("C"))
                and _parallel_or_coincident(l_c, l_b)
                and _concurrent_at(l_a, l_c, m, witness.point("M"))
            )
        if witness.kind == MULTIPLY:
            l1, l2, l3 = (
                witness.line("l1"),
                witness.line("l2"),
                witness.line("l3"),
            )
            l_a, l_b, l_c = (
                witness.line("lA"),
                witness.line("lB"),
                witness.line("lC"),
            )
            return (
                _meets_at(l1, l3, witness.point("O"))
                and _meets_at(l2, l1, witness.point("J"))
                and _meets_at(l2, l3, witness.point("I"))
                and _meets_at(l_a, l3, witness.point("A"))
                and _parallel_or_coincident(l_a, l2)
                and _meets_at(l_b, l3, witness.point("B"))
                and _concurrent_at(l_b, l1, l2, witness.point("J"))
                and _meets_at(l_c, l3, witness.point("C"))
                and _parallel_or_coincident(l_c, l_b)
                and _concurrent_at(l_c, l_a, l1, witness.point("M"))
            )
        return False
    except GeometryError:
        return False


def zero_point(frame: FrameWitness, axis: int, plane: Optional[int] = None) -> AxisPoint:
    """The axis origin, marked by the other axis of the reference plane."""
    if plane is None:
        plane = default_reference_plane(axis)
    other = ({1, 2, 3} - {plane, axis}).pop()
    return AxisPoint(frame, axis, frame.axis_in_plane(plane, other), Fraction(0))


def unit_point(frame: FrameWitness, axis: int, plane: Optional[int] = None) -> AxisPoint:
    """The unit of measurement, marked by the unit line of the plane."""
    if plane is None:
        plane = default_reference_plane(axis)
    if plane == axis or plane not in (1, 2, 3):
        raise GeometryError(f"axis {axis} does not lie in plane {plane}")
    return AxisPoint(frame, axis, frame.unit_line(plane), Fraction(1))


def successor(frame: FrameWitness, axis: int, point: AxisPoint) -> AxisPoint:
    """One unit further along the axis, realized by segment addition."""
    plane = default_reference_plane(axis)
    result, _ = vs_add(frame, plane, point, unit_point(frame, axis, plane))
    return result


def negate(frame: FrameWitness, axis: int, point: AxisPoint) -> AxisPoint:
    """The additive inverse, marked so that adding it returns to the origin."""
    plane = default_reference_plane(axis)
    mirrored = axis_point(frame, axis, -point.value, plane)
    confirm, _ = vs_add(frame, plane, point, mirrored)
    assert confirm.value == 0
    return mirrored


def encode_rational(
    frame: FrameWitness, axis: int, q: int | str | Fraction
) -> tuple[AxisPoint, list[ConstructionWitness]]:
    """An axis point with the given coordinate, plus its construction chain.

    The certificate contains the unit-step additions that build the
    numerator and denominator, the multiplication pinning the quotient
    against the unit, and for negative values the addition back to the
    origin. Every witness passes ``check_witness``.
    """
    q = rat(q)
    plane = default_reference_plane(axis)
    certificate: list[ConstructionWitness] = []
    if q == 0:
        return zero_point(frame, axis, plane), certificate

    one = unit_point(frame, axis, plane)
    numerator = abs(q.numerator)
    denominator = q.denominator

    chain = {0: zero_point(frame, axis, plane), 1: one}
    current = one
    for value in range(2, max(numerator, denominator) + 1):
        current, witness = vs_add(frame, plane, current, one)
        certificate.append(witness)
        chain[value] = current

    if denominator == 1:
        magnitude = chain[numerator]
    else:
        magnitude = axis_point(frame, axis, Fraction(numerator, denominator), plane)
        product, witness = vs_multiply(frame, plane, chain[denominator], magnitude)
        assert product.value == numerator
        certificate.append(witness)

    if q > 0:
        return magnitude, certificate
    result = axis_point(frame, axis, q, plane)
    balanced, witness = vs_add(frame, plane, magnitude, result)
    assert balanced.value == 0
    certificate.append(witness)
    return result, certificate
