"""Exact enumeration of the full-dimensional cells of a hyperplane arrangement.

A cell is identified by its sign vector: the tuple of strict sides it takes
against each hyperplane, in the order the hyperplanes were given. The
enumerator returns one exact rational interior point per cell, so feasibility
of a sign vector and a witness for it come out of the same computation.

The method samples each cell through one of its facets. Every cell of a
nonempty arrangement has a facet on some hyperplane; the relatively open
pieces that hyperplane is cut into by the others are found recursively
(restricting the arrangement to the flat drops a dimension), and each piece
is pushed off both sides by an exactly computed clearance. No floating point
and no linear programming are involved.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from .geometry import DegenerateGeometry, Hyperplane, Vector, flat_parameterization

SignVector = tuple[int, ...]

_ZERO = Fraction(0)

# Arrangements already enumerated this process, keyed by the exact plane
# tuple. Sub-arrangements are answered by projecting a cached superset,
# which is what makes repeated region operations over a shared pool cheap.
_CACHE: dict[tuple[Hyperplane, ...], dict[SignVector, Vector]] = {}


def clear_cache() -> None:
    _CACHE.clear()


def _restrict(
    line: tuple[tuple[Fraction, ...], Fraction],
    origin: tuple[Fraction, ...],
    dirs: list[tuple[Fraction, ...]],
) -> Optional[tuple[tuple[Fraction, ...], Fraction]]:
    """Rewrite a hyperplane in the coordinates of a flat; None if parallel."""
    coeffs, offset = line
    restricted = tuple(
        sum((c * d for c, d in zip(coeffs, direction)), _ZERO) for direction in dirs
    )
    if all(c == 0 for c in restricted):
        return None
    shifted = offset - sum((c * o for c, o in zip(coeffs, origin)), _ZERO)
    return restricted, shifted


def _canonical_line(
    line: tuple[tuple[Fraction, ...], Fraction]
) -> tuple[tuple[Fraction, ...], Fraction]:
    coeffs, offset = line
    leading = next(c for c in coeffs if c != 0)
    if leading == 1:
        return line
    return tuple(c / leading for c in coeffs), offset / leading


def _embed(
    point: tuple[Fraction, ...],
    origin: tuple[Fraction, ...],
    dirs: list[tuple[Fraction, ...]],
) -> tuple[Fraction, ...]:
    coords = list(origin)
    for t, direction in zip(point, dirs):
        if t == 0:
            continue
        for i, d in enumerate(direction):
            coords[i] += t * d
    return tuple(coords)


def _flat_samples(
    lines: list[tuple[tuple[Fraction, ...], Fraction]], dim: int
) -> list[tuple[Fraction, ...]]:
    """Interior points hitting every cell of an arrangement in ``dim`` coords."""
    if not lines:
        return [(_ZERO,) * dim]
    if dim == 1:
        values = sorted({offset / coeffs[0] for coeffs, offset in lines})
        samples = [(values[0] - 1,)]
        samples.extend(((a + b) / 2,) for a, b in zip(values, values[1:]))
        samples.append((values[-1] + 1,))
        return samples

    samples: list[tuple[Fraction, ...]] = []
    for i, (coeffs, offset) in enumerate(lines):
        origin, dirs = flat_parameterization(coeffs, offset)
        seen: dict[tuple[tuple[Fraction, ...], Fraction], None] = {}
        for j, other in enumerate(lines):
            if j == i:
                continue
            restricted = _restrict(other, origin, dirs)
            if restricted is not None:
                seen.setdefault(_canonical_line(restricted))
        for local in _flat_samples(list(seen), dim - 1):
            on_plane = _embed(local, origin, dirs)
            clearance = Fraction(1)
            for j, (jc, jo) in enumerate(lines):
                if j == i:
                    continue
                speed = sum((a * b for a, b in zip(jc, coeffs)), _ZERO)
                if speed == 0:
                    continue
                gap = (jo - sum((a * b for a, b in zip(jc, on_plane)), _ZERO)) / speed
                if gap != 0 and abs(gap) < clearance:
                    clearance = abs(gap)
            step = clearance / 2
            for sign in (1, -1):
                samples.append(
                    tuple(x + sign * step * c for x, c in zip(on_plane, coeffs))
                )
    return samples


def _enumerate_direct(planes: tuple[Hyperplane, ...]) -> dict[SignVector, Vector]:
    dim = planes[0].dim
    rows = [(p.normal.coords, p.offset) for p in planes]
    cells: dict[SignVector, Vector] = {}
    for sample in _flat_samples(rows, dim):
        signs = []
        for coeffs, offset in rows:
            value = sum((a * b for a, b in zip(coeffs, sample)), _ZERO) - offset
            if value == 0:
                raise AssertionError("sample landed on a hyperplane")
            signs.append(1 if value > 0 else -1)
        cells.setdefault(tuple(signs), Vector(sample))
    return cells


def enumerate_cells(planes: Sequence[Hyperplane]) -> dict[SignVector, Vector]:
    """Map each feasible sign vector of the arrangement to an interior point.

    The planes must be distinct (canonical form makes this structural) and
    share one dimension. An empty arrangement has the single cell ``()``.
    """
    key = tuple(planes)
    if not key:
        return {(): Vector(())}
    dims = {p.dim for p in key}
    if len(dims) > 1:
        raise DegenerateGeometry(f"planes of mixed dimensions: {sorted(dims)}")
    if len(set(key)) != len(key):
        raise DegenerateGeometry("duplicate hyperplanes in arrangement")

    cached = _CACHE.get(key)
    if cached is not None:
        return cached

    as_set = set(key)
    for other_key, other_cells in _CACHE.items():
        if len(other_key) > len(key) and as_set.issubset(other_key):
            positions = [other_key.index(p) for p in key]
            projected: dict[SignVector, Vector] = {}
            for sigma, point in other_cells.items():
                restricted = tuple(sigma[i] for i in positions)
                projected.setdefault(restricted, point)
            _CACHE[key] = projected
            return projected

    cells = _enumerate_direct(key)
    _CACHE[key] = cells
    return cells


def cell_count(planes: Sequence[Hyperplane]) -> int:
    return len(enumerate_cells(planes))
