import random
from fractions import Fraction

import pytest

from regionlogic.geometry import (
    AffineMap,
    DegenerateGeometry,
    GeometryError,
    Matrix,
    apply_affine,
    apply_affine_plane,
    hyperplane,
    vec,
)
from regionlogic.predicates import LineInPlane, canonical_frame, check_frame
from regionlogic.vonstaudt import (
    AxisPoint,
    ConstructionWitness,
    axis_point,
    axis_point_from_marker,
    check_witness,
    default_reference_plane,
    encode_rational,
    negate,
    point_value,
    successor,
    unit_point,
    vs_add,
    vs_multiply,
    zero_point,
)


@pytest.fixture(scope="module")
def frame():
    return canonical_frame()


def test_point_value_examples(frame):
    axis = 1
    assert point_value(frame, axis, unit_point(frame, axis).marker) == 1
    assert point_value(frame, axis, zero_point(frame, axis).marker) == 0
    marker = LineInPlane(hyperplane([0, 1, 0], 0), hyperplane([1, 2, 0], 6))
    assert point_value(frame, axis, marker) == 6


def test_point_value_rejects_marker_along_axis(frame):
    # cutter containing the x axis leaves the crossing undetermined
    marker = LineInPlane(hyperplane([0, 1, 0], 0), hyperplane([0, 1, 1], 0))
    with pytest.raises(DegenerateGeometry):
        point_value(frame, 1, marker)


def test_vs_add_examples(frame):
    plane, axis = 2, 1
    cases = [(0, 0, 0), (2, 3, 5), (Fraction(1, 2), Fraction(-1, 2), 0), (-4, 7, 3)]
    for a, b, expected in cases:
        pa = axis_point(frame, axis, a, plane)
        pb = axis_point(frame, axis, b, plane)
        result, witness = vs_add(frame, plane, pa, pb)
        assert result.value == expected
        assert point_value(frame, axis, result.marker) == expected
        assert check_witness(witness)


def test_vs_multiply_examples(frame):
    plane, axis = 2, 1
    cases = [
        (1, Fraction(7, 3), Fraction(7, 3)),
        (2, 3, 6),
        (0, 5, 0),
        (5, 0, 0),
        (0, 0, 0),
        (Fraction(-3, 2), Fraction(4, 5), Fraction(-6, 5)),
    ]
    for a, b, expected in cases:
        pa = axis_point(frame, axis, a, plane)
        pb = axis_point(frame, axis, b, plane)
        result, witness = vs_multiply(frame, plane, pa, pb)
        assert result.value == expected
        assert point_value(frame, axis, result.marker) == expected
        assert check_witness(witness)


def test_check_witness_rejects_perturbed_result(frame):
    plane, axis = 2, 1
    pa = axis_point(frame, axis, 2, plane)
    pb = axis_point(frame, axis, 3, plane)
    _, witness = vs_add(frame, plane, pa, pb)
    # move the result line one unit along the axis: condition on C fails
    decoy = axis_point(frame, axis, 6, plane).marker
    assert not check_witness(witness.replace_line("lC", decoy))


def test_check_witness_rejects_skewed_auxiliary(frame):
    plane, axis = 2, 1
    pa = axis_point(frame, axis, 2, plane)
    pb = axis_point(frame, axis, 3, plane)
    _, witness = vs_add(frame, plane, pa, pb)
    skew = LineInPlane(frame.plane(plane), hyperplane([1, 0, -2], 1))
    assert not check_witness(witness.replace_line("m", skew))


def test_successor_examples(frame):
    axis = 3
    for start, expected in [(0, 1), (4, 5), (-1, 0)]:
        point = axis_point(frame, axis, start)
        assert successor(frame, axis, point).value == expected


def test_negate_examples(frame):
    axis = 2
    for value in [0, 3, Fraction(-5, 2)]:
        point = axis_point(frame, axis, value)
        negated = negate(frame, axis, point)
        assert negated.value == -Fraction(value)
        roundtrip, witness = vs_add(
            frame, default_reference_plane(axis), point, negated
        )
        assert roundtrip.value == 0
        assert check_witness(witness)


def test_encode_rational_roundtrip(frame):
    axis = 1
    for q in [0, 1, Fraction(5, 3), -2, Fraction(-7, 4), 10]:
        point, certificate = encode_rational(frame, axis, q)
        assert point.value == Fraction(q)
        assert point_value(frame, axis, point.marker) == Fraction(q)
        assert all(check_witness(w) for w in certificate)
        if q == 0:
            assert certificate == []


def test_homomorphism_small_grid(frame):
    plane, axis = 2, 1
    values = [Fraction(p, q) for p in range(-3, 4) for q in (1, 2, 3)]
    encoded = {v: axis_point(frame, axis, v, plane) for v in set(values)}
    for a in set(values):
        for b in set(values):
            total, add_w = vs_add(frame, plane, encoded[a], encoded[b])
            assert total.value == a + b
            assert check_witness(add_w)
            prod, mul_w = vs_multiply(frame, plane, encoded[a], encoded[b])
            assert prod.value == a * b
            assert check_witness(mul_w)


def test_operations_work_in_every_reference_plane(frame):
    for plane in (1, 2, 3):
        for axis in sorted({1, 2, 3} - {plane}):
            pa = axis_point(frame, axis, Fraction(3, 2), plane)
            pb = axis_point(frame, axis, -2, plane)
            total, w1 = vs_add(frame, plane, pa, pb)
            prod, w2 = vs_multiply(frame, plane, pa, pb)
            assert total.value == Fraction(-1, 2)
            assert prod.value == -3
            assert check_witness(w1) and check_witness(w2)


def random_invertible_map(rng):
    while True:
        try:
            return AffineMap(
                Matrix(
                    tuple(
                        tuple(Fraction(rng.randint(-3, 3)) for _ in range(3))
                        for _ in range(3)
                    )
                ),
                vec(*(rng.randint(-2, 2) for _ in range(3))),
            )
        except DegenerateGeometry:
            continue


def transform_witness(m, witness):
    return ConstructionWitness(
        witness.kind,
        tuple(
            (
                name,
                LineInPlane(
                    apply_affine_plane(m, line.reference),
                    apply_affine_plane(m, line.cutter),
                ),
            )
            for name, line in witness.lines
        ),
        tuple((name, m.apply(point)) for name, point in witness.points),
    )


def test_witness_checking_is_affine_invariant(frame):
    rng = random.Random(23)
    plane, axis = 2, 1
    pa = axis_point(frame, axis, Fraction(5, 2), plane)
    pb = axis_point(frame, axis, Fraction(-1, 3), plane)
    _, add_w = vs_add(frame, plane, pa, pb)
    _, mul_w = vs_multiply(frame, plane, pa, pb)
    for _ in range(12):
        m = random_invertible_map(rng)
        mapped_frame = check_frame(*(apply_affine(m, h) for h in frame.halfspaces))
        assert mapped_frame is not None
        assert check_witness(transform_witness(m, add_w))
        assert check_witness(transform_witness(m, mul_w))


def test_operand_validation(frame):
    pa = axis_point(frame, 1, 1)
    pb = axis_point(frame, 2, 1)
    with pytest.raises(GeometryError):
        vs_add(frame, 2, pa, pb)
    with pytest.raises(GeometryError):
        vs_add(frame, 1, pa, pa)


def test_axis_point_from_marker_matches_value(frame):
    marker = LineInPlane(hyperplane([0, 1, 0], 0), hyperplane([1, 2, 0], 6))
    point = axis_point_from_marker(frame, 1, marker)
    assert point.value == 6
