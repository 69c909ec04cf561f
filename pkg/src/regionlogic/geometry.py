"""Exact rational vectors, matrices, hyperplanes, and open half-spaces.

Everything in this module computes over arbitrary-precision rationals;
no operation rounds. Dimension is a runtime attribute of values, checked
wherever values are combined, so planar and spatial work share one kernel.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Iterator, Optional, Sequence

Rational = Fraction

_RATIONAL_RE = re.compile(r"[+-]?\d+(?:/[1-9]\d*)?")


class GeometryError(ValueError):
    """A geometric precondition was violated."""


class DimensionMismatch(GeometryError):
    """Operands live in different ambient dimensions."""


class DegenerateGeometry(GeometryError):
    """A configuration is singular where independence is required."""


def rat(value: int | str | Fraction) -> Fraction:
    """Coerce an int, Fraction, or ``p/q`` string to an exact rational.

    Floats are rejected: they would smuggle rounding into the kernel.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not _RATIONAL_RE.fullmatch(text):
            raise GeometryError(f"not a rational literal: {value!r}")
        return Fraction(text)
    raise GeometryError(f"cannot interpret {value!r} as an exact rational")


def format_rational(q: Fraction) -> str:
    """Render ``p/q``, or plain ``p`` for integers."""
    return str(q)


@dataclass(frozen=True)
class Vector:
    """A point or direction with exact rational coordinates."""

    coords: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coords", tuple(rat(c) for c in self.coords))

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.coords)

    def __getitem__(self, i: int) -> Fraction:
        return self.coords[i]

    def __add__(self, other: "Vector") -> "Vector":
        _same_dim(self, other)
        return Vector(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Vector") -> "Vector":
        _same_dim(self, other)
        return Vector(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "Vector":
        return Vector(tuple(-a for a in self.coords))

    def scale(self, k: int | str | Fraction) -> "Vector":
        k = rat(k)
        return Vector(tuple(k * a for a in self.coords))

    def dot(self, other: "Vector") -> Fraction:
        _same_dim(self, other)
        return sum((a * b for a, b in zip(self.coords, other.coords)), Fraction(0))

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coords)

    def __repr__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


def vec(*coords: int | str | Fraction) -> Vector:
    return Vector(tuple(rat(c) for c in coords))


def zero_vector(dim: int) -> Vector:
    return Vector((Fraction(0),) * dim)


def unit_vector(dim: int, axis: int) -> Vector:
    coords = [Fraction(0)] * dim
    coords[axis] = Fraction(1)
    return Vector(tuple(coords))


def cross(u: Vector, v: Vector) -> Vector:
    if u.dim != 3 or v.dim != 3:
        raise DimensionMismatch("cross product requires dimension 3")
    return vec(
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def _same_dim(a, b) -> None:
    if a.dim != b.dim:
        raise DimensionMismatch(f"dimension mismatch: {a.dim} vs {b.dim}")


@dataclass(frozen=True)
class Matrix:
    """A square matrix of exact rationals."""

    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(rat(x) for x in row) for row in self.rows)
        n = len(rows)
        if any(len(row) != n for row in rows):
            raise GeometryError("matrix must be square")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(
            tuple(
                tuple(Fraction(1 if i == j else 0) for j in range(n))
                for i in range(n)
            )
        )

    @classmethod
    def from_columns(cls, columns: Sequence[Vector]) -> "Matrix":
        n = len(columns)
        if any(c.dim != n for c in columns):
            raise GeometryError("columns do not form a square matrix")
        return cls(tuple(tuple(columns[j][i] for j in range(n)) for i in range(n)))

    @property
    def size(self) -> int:
        return len(self.rows)

    def transpose(self) -> "Matrix":
        n = self.size
        return Matrix(tuple(tuple(self.rows[j][i] for j in range(n)) for i in range(n)))

    def matvec(self, v: Vector) -> Vector:
        if v.dim != self.size:
            raise DimensionMismatch("matrix/vector size mismatch")
        return Vector(
            tuple(
                sum((a * b for a, b in zip(row, v.coords)), Fraction(0))
                for row in self.rows
            )
        )

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.size != other.size:
            raise DimensionMismatch("matrix size mismatch")
        n = self.size
        cols = other.transpose().rows
        return Matrix(
            tuple(
                tuple(
                    sum((a * b for a, b in zip(row, col)), Fraction(0))
                    for col in cols
                )
                for row in self.rows
            )
        )

    def det(self) -> Fraction:
        n = self.size
        work = [list(row) for row in self.rows]
        result = Fraction(1)
        for col in range(n):
            pivot = next((r for r in range(col, n) if work[r][col] != 0), None)
            if pivot is None:
                return Fraction(0)
            if pivot != col:
                work[col], work[pivot] = work[pivot], work[col]
                result = -result
            result *= work[col][col]
            inv = 1 / work[col][col]
            for r in range(col + 1, n):
                factor = work[r][col] * inv
                if factor == 0:
                    continue
                for c in range(col, n):
                    work[r][c] -= factor * work[col][c]
        return result

    def inverse(self) -> "Matrix":
        n = self.size
        work = [list(row) + [Fraction(1 if i == j else 0) for j in range(n)]
                for i, row in enumerate(self.rows)]
        for col in range(n):
            pivot = next((r for r in range(col, n) if work[r][col] != 0), None)
            if pivot is None:
                raise DegenerateGeometry("matrix is singular")
            work[col], work[pivot] = work[pivot], work[col]
            inv = 1 / work[col][col]
            work[col] = [x * inv for x in work[col]]
            for r in range(n):
                if r == col or work[r][col] == 0:
                    continue
                factor = work[r][col]
                work[r] = [x - factor * y for x, y in zip(work[r], work[col])]
        return Matrix(tuple(tuple(row[n:]) for row in work))


def solve_square(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> Optional[Vector]:
    """Solve a square linear system exactly; None when singular."""
    n = len(rows)
    work = [[rat(x) for x in row] + [rat(rhs[i])] for i, row in enumerate(rows)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if work[r][col] != 0), None)
        if pivot is None:
            return None
        work[col], work[pivot] = work[pivot], work[col]
        inv = 1 / work[col][col]
        work[col] = [x * inv for x in work[col]]
        for r in range(n):
            if r == col or work[r][col] == 0:
                continue
            factor = work[r][col]
            work[r] = [x - factor * y for x, y in zip(work[r], work[col])]
    return Vector(tuple(work[i][n] for i in range(n)))


@dataclass(frozen=True)
class AffineMap:
    """An invertible map x -> Ax + b."""

    linear: Matrix
    translation: Vector

    def __post_init__(self) -> None:
        if self.linear.size != self.translation.dim:
            raise DimensionMismatch("linear part and translation disagree")
        if self.linear.det() == 0:
            raise DegenerateGeometry("affine map must be invertible")

    @classmethod
    def identity(cls, n: int) -> "AffineMap":
        return cls(Matrix.identity(n), zero_vector(n))

    @property
    def dim(self) -> int:
        return self.translation.dim

    def apply(self, point: Vector) -> Vector:
        return self.linear.matvec(point) + self.translation

    def compose(self, inner: "AffineMap") -> "AffineMap":
        """self after inner: (self.compose(inner))(x) == self(inner(x))."""
        if self.dim != inner.dim:
            raise DimensionMismatch("composing maps of different dimensions")
        return AffineMap(
            self.linear @ inner.linear,
            self.linear.matvec(inner.translation) + self.translation,
        )

    def inverse(self) -> "AffineMap":
        inv = self.linear.inverse()
        return AffineMap(inv, -inv.matvec(self.translation))


@dataclass(frozen=True)
class Hyperplane:
    """The solution set of ``normal . x = offset`` in canonical form.

    Canonical scaling divides through by the first nonzero normal
    coordinate, so structural equality coincides with geometric equality.
    """

    normal: Vector
    offset: Fraction

    def __post_init__(self) -> None:
        normal = self.normal if isinstance(self.normal, Vector) else Vector(tuple(self.normal))
        offset = rat(self.offset)
        leading = next((c for c in normal.coords if c != 0), None)
        if leading is None:
            raise DegenerateGeometry("hyperplane normal must be nonzero")
        if leading != 1:
            normal = normal.scale(1 / leading)
            offset = offset / leading
        object.__setattr__(self, "normal", normal)
        object.__setattr__(self, "offset", offset)

    @property
    def dim(self) -> int:
        return self.normal.dim

    def eval(self, point: Vector) -> Fraction:
        return self.normal.dot(point) - self.offset

    def side_of(self, point: Vector) -> int:
        value = self.eval(point)
        return 0 if value == 0 else (1 if value > 0 else -1)

    def contains(self, point: Vector) -> bool:
        return self.eval(point) == 0

    def sort_key(self):
        return (self.dim, self.normal.coords, self.offset)

    def integer_form(self) -> tuple[tuple[int, ...], int]:
        """Scaled copy with coprime integer coefficients, leading one positive."""
        denominators = [c.denominator for c in self.normal.coords] + [self.offset.denominator]
        m = lcm(*denominators)
        nums = [int(c * m) for c in self.normal.coords]
        off = int(self.offset * m)
        g = gcd(*nums, off)
        if g > 1:
            nums = [x // g for x in nums]
            off //= g
        return tuple(nums), off

    def __repr__(self) -> str:
        return f"Hyperplane({self.normal!r} = {self.offset})"


def hyperplane(normal: Iterable[int | str | Fraction], offset: int | str | Fraction) -> Hyperplane:
    return Hyperplane(Vector(tuple(rat(c) for c in normal)), rat(offset))


@dataclass(frozen=True)
class HalfSpace:
    """An open side of a hyperplane.

    ``side == +1`` selects ``normal . x > offset`` and ``side == -1`` the
    opposite strict inequality; both sets are open and regular.
    """

    plane: Hyperplane
    side: int

    def __post_init__(self) -> None:
        if self.side not in (1, -1):
            raise GeometryError(f"side must be +1 or -1, got {self.side!r}")

    @classmethod
    def from_inequality(
        cls,
        normal: Iterable[int | str | Fraction],
        offset: int | str | Fraction,
        op: str = ">",
    ) -> "HalfSpace":
        if op not in (">", "<"):
            raise GeometryError(f"relation must be '>' or '<', got {op!r}")
        raw = Vector(tuple(rat(c) for c in normal))
        leading = next((c for c in raw.coords if c != 0), None)
        if leading is None:
            raise DegenerateGeometry("half-space normal must be nonzero")
        side = 1 if op == ">" else -1
        if leading < 0:
            side = -side
        return cls(Hyperplane(raw, rat(offset)), side)

    @property
    def dim(self) -> int:
        return self.plane.dim

    def contains(self, point: Vector) -> bool:
        return self.plane.side_of(point) == self.side

    def complement(self) -> "HalfSpace":
        return HalfSpace(self.plane, -self.side)

    def sort_key(self):
        return (*self.plane.sort_key(), self.side)

    def __repr__(self) -> str:
        rel = ">" if self.side == 1 else "<"
        return f"HalfSpace({self.plane.normal!r} {rel} {self.plane.offset})"


def halfspace(
    normal: Iterable[int | str | Fraction],
    offset: int | str | Fraction,
    op: str = ">",
) -> HalfSpace:
    return HalfSpace.from_inequality(normal, offset, op)


# --- Fourier-Motzkin elimination over exact rationals -----------------------
#
# Rows are (coefficients, rhs, strict) meaning ``coeffs . x > rhs`` when
# strict and ``coeffs . x >= rhs`` otherwise. Eliminating a variable combines
# every lower bound with every upper bound; strictness is inherited whenever
# either parent is strict, which is exactly what makes the procedure a
# decision method for open polyhedra.

Row = tuple[tuple[Fraction, ...], Fraction, bool]


def _reduce_rows(rows: Iterable[Row]) -> Optional[list[Row]]:
    """Drop satisfied constant rows, merge parallel rows, spot contradictions."""
    strongest: dict[tuple[Fraction, ...], tuple[Fraction, bool]] = {}
    for coeffs, rhs, strict in rows:
        leading = next((c for c in coeffs if c != 0), None)
        if leading is None:
            if rhs > 0 or (strict and rhs == 0):
                return None
            continue
        scale = abs(leading)
        if scale != 1:
            coeffs = tuple(c / scale for c in coeffs)
            rhs = rhs / scale
        held = strongest.get(coeffs)
        if held is None or rhs > held[0]:
            strongest[coeffs] = (rhs, strict)
        elif rhs == held[0]:
            strongest[coeffs] = (rhs, strict or held[1])
    return [(c, r, s) for c, (r, s) in strongest.items()]


def fm_feasible(rows: Sequence[Row], dim: int) -> Optional[list[Fraction]]:
    """Decide a system of rational linear inequalities; return a witness.

    The witness strictly satisfies every strict row and weakly satisfies
    every weak one. None certifies that the system has no solution.
    """
    active = _reduce_rows(rows)
    if active is None:
        return None
    levels: list[tuple[int, list[Row]]] = []
    remaining = list(range(dim))
    while remaining:
        if len(remaining) == 1:
            var = remaining[0]
        else:
            def cost(k: int) -> tuple[int, int]:
                pos = sum(1 for c, _, _ in active if c[k] > 0)
                neg = sum(1 for c, _, _ in active if c[k] < 0)
                return (pos * neg, k)

            var = min(remaining, key=cost)
        levels.append((var, active))
        lowers = [row for row in active if row[0][var] > 0]
        uppers = [row for row in active if row[0][var] < 0]
        others = [row for row in active if row[0][var] == 0]
        combined: list[Row] = list(others)
        for lc, lr, ls in lowers:
            for uc, ur, us in uppers:
                a, b = lc[var], -uc[var]
                coeffs = tuple(b * x + a * y for x, y in zip(lc, uc))
                combined.append((coeffs, b * lr + a * ur, ls or us))
        active = _reduce_rows(combined)
        if active is None:
            return None
        remaining.remove(var)

    values: dict[int, Fraction] = {}
    for var, rows_here in reversed(levels):
        lower: Optional[tuple[Fraction, bool]] = None
        upper: Optional[tuple[Fraction, bool]] = None
        for coeffs, rhs, strict in rows_here:
            a = coeffs[var]
            if a == 0:
                continue
            rest = rhs - sum(
                (coeffs[j] * values[j] for j in values if coeffs[j] != 0),
                Fraction(0),
            )
            bound = rest / a
            if a > 0:
                if lower is None or bound > lower[0] or (bound == lower[0] and strict):
                    lower = (bound, strict)
            else:
                if upper is None or bound < upper[0] or (bound == upper[0] and strict):
                    upper = (bound, strict)
        if lower is None and upper is None:
            values[var] = Fraction(0)
        elif lower is None:
            values[var] = upper[0] - 1
        elif upper is None:
            values[var] = lower[0] + 1
        elif lower[0] == upper[0]:
            values[var] = lower[0]
        else:
            values[var] = (lower[0] + upper[0]) / 2
    return [values[j] for j in range(dim)]


def strict_rows(constraints: Sequence[HalfSpace]) -> list[Row]:
    rows: list[Row] = []
    for hs in constraints:
        n = hs.plane.normal.coords
        c = hs.plane.offset
        if hs.side == 1:
            rows.append((n, c, True))
        else:
            rows.append((tuple(-x for x in n), -c, True))
    return rows


def feasible_interior(
    constraints: Sequence[HalfSpace], *, dim: Optional[int] = None
) -> Optional[Vector]:
    """An exact rational point strictly inside every half-space, or None.

    Emptiness of the open intersection is decided by Fourier-Motzkin
    elimination, which handles strict inequalities directly.
    """
    if constraints:
        dims = {hs.dim for hs in constraints}
        if len(dims) > 1:
            raise DimensionMismatch(f"mixed dimensions: {sorted(dims)}")
        inferred = dims.pop()
        if dim is not None and dim != inferred:
            raise DimensionMismatch(f"constraints have dimension {inferred}, not {dim}")
        dim = inferred
    elif dim is None:
        raise GeometryError("empty constraint list needs an explicit dimension")
    witness = fm_feasible(strict_rows(constraints), dim)
    if witness is None:
        return None
    point = Vector(tuple(witness))
    assert all(hs.contains(point) for hs in constraints)
    return point


def affine_from_simplex(src: Sequence[Vector], dst: Sequence[Vector]) -> AffineMap:
    """The unique affine map sending each src vertex to its dst partner.

    Both tuples must contain n+1 affinely independent points of dimension n.
    """
    if len(src) != len(dst):
        raise GeometryError("source and destination simplex sizes differ")
    n = len(src) - 1
    if n < 1:
        raise GeometryError("simplex needs at least two points")
    for p in (*src, *dst):
        if p.dim != n:
            raise DimensionMismatch("simplex size does not match point dimension")
    s_cols = [src[i + 1] - src[0] for i in range(n)]
    d_cols = [dst[i + 1] - dst[0] for i in range(n)]
    s_mat = Matrix.from_columns(s_cols)
    if s_mat.det() == 0:
        raise DegenerateGeometry("source points are affinely dependent")
    d_mat = Matrix.from_columns(d_cols)
    if d_mat.det() == 0:
        raise DegenerateGeometry("destination points are affinely dependent")
    linear = d_mat @ s_mat.inverse()
    translation = dst[0] - linear.matvec(src[0])
    return AffineMap(linear, translation)


def apply_affine(transform: AffineMap, hs: HalfSpace) -> HalfSpace:
    """Image of an open half-space under an invertible affine map."""
    if transform.dim != hs.dim:
        raise DimensionMismatch("map and half-space dimensions differ")
    inv = transform.linear.inverse()
    normal = inv.transpose().matvec(hs.plane.normal)
    offset = hs.plane.offset + normal.dot(transform.translation)
    leading = next(c for c in normal.coords if c != 0)
    side = hs.side if leading > 0 else -hs.side
    return HalfSpace(Hyperplane(normal, offset), side)


def apply_affine_plane(transform: AffineMap, plane: Hyperplane) -> Hyperplane:
    return apply_affine(transform, HalfSpace(plane, 1)).plane


# --- small constructions used by the frame and segment-arithmetic layers ----


def intersect_planes(p1: Hyperplane, p2: Hyperplane, p3: Hyperplane) -> Optional[Vector]:
    """The single common point of three planes in dimension 3, if unique."""
    for p in (p1, p2, p3):
        if p.dim != 3:
            raise DimensionMismatch("plane intersection requires dimension 3")
    return solve_square(
        [p1.normal.coords, p2.normal.coords, p3.normal.coords],
        [p1.offset, p2.offset, p3.offset],
    )


def plane_through(a: Vector, b: Vector, c: Vector) -> Hyperplane:
    """The plane spanned by three affinely independent points in 3-space."""
    normal = cross(b - a, c - a)
    if normal.is_zero():
        raise DegenerateGeometry("points are collinear")
    return Hyperplane(normal, normal.dot(a))


def flat_parameterization(
    coeffs: tuple[Fraction, ...], offset: Fraction
) -> tuple[tuple[Fraction, ...], list[tuple[Fraction, ...]]]:
    """A point on ``coeffs . x = offset`` plus spanning directions.

    Works in any dimension; the directions are the coordinate directions
    adjusted to stay inside the flat.
    """
    d = len(coeffs)
    pivot = next((i for i, c in enumerate(coeffs) if c != 0), None)
    if pivot is None:
        raise DegenerateGeometry("zero normal has no flat")
    origin = [Fraction(0)] * d
    origin[pivot] = offset / coeffs[pivot]
    dirs = []
    for j in range(d):
        if j == pivot:
            continue
        direction = [Fraction(0)] * d
        direction[j] = Fraction(1)
        direction[pivot] = -coeffs[j] / coeffs[pivot]
        dirs.append(tuple(direction))
    return tuple(origin), dirs
