"""Canonical regular open regions and their exact Boolean algebra.

A region is stored as the set of full-dimensional arrangement cells it
contains, written as sign vectors over a sorted tuple of supporting
hyperplanes. Canonical form prunes every hyperplane whose removal leaves
membership unchanged across it, which is precisely what absorbs
lower-dimensional seams: the regularized union of two cells sharing a facet
keeps the facet interior. With that invariant, structural equality of the
stored form equals equality of the regular open sets.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from . import arrangements
from .geometry import (
    AffineMap,
    DegenerateGeometry,
    DimensionMismatch,
    GeometryError,
    HalfSpace,
    Hyperplane,
    Vector,
    apply_affine,
    feasible_interior,
    fm_feasible,
)

SignVector = arrangements.SignVector

DEFAULT_HYPERPLANE_BUDGET = 20

_budget = DEFAULT_HYPERPLANE_BUDGET


class BudgetExceeded(RuntimeError):
    """An operation would enumerate more hyperplanes than the budget allows."""


def hyperplane_budget() -> int:
    return _budget


def set_hyperplane_budget(limit: int) -> None:
    """Cap the number of supporting hyperplanes any operation may combine."""
    global _budget
    if limit < 1:
        raise ValueError("budget must be positive")
    _budget = limit


def _check_budget(count: int) -> None:
    if count > _budget:
        raise BudgetExceeded(
            f"{count} supporting hyperplanes exceed the budget of {_budget}"
        )


@dataclass(frozen=True)
class ConvexCell:
    """An open intersection of half-spaces with nonempty interior."""

    constraints: frozenset[HalfSpace]

    @classmethod
    def make(cls, constraints: Iterable[HalfSpace]) -> "ConvexCell":
        frozen = frozenset(constraints)
        if not frozen:
            raise GeometryError("a cell needs at least one constraint")
        if feasible_interior(sorted(frozen, key=HalfSpace.sort_key)) is None:
            raise DegenerateGeometry("cell has empty interior")
        return cls(frozen)

    @property
    def dim(self) -> int:
        return next(iter(self.constraints)).dim

    def contains(self, point: Vector) -> bool:
        return all(hs.contains(point) for hs in self.constraints)


@dataclass(frozen=True)
class Region:
    """A canonical regular open rational polytope.

    ``cells`` holds the member sign vectors over ``supports``. The empty
    cell set is the bottom region; the single empty sign vector over no
    supports is the top region.
    """

    dim: int
    supports: tuple[Hyperplane, ...]
    cells: frozenset[SignVector]

    @classmethod
    def empty(cls, dim: int) -> "Region":
        return cls(dim, (), frozenset())

    @classmethod
    def full(cls, dim: int) -> "Region":
        return cls(dim, (), frozenset({()}))

    def is_empty(self) -> bool:
        return not self.cells

    def is_full(self) -> bool:
        return not self.supports and bool(self.cells)

    def contains(self, point: Vector) -> bool:
        """Membership of an exact point; boundary points are outside."""
        if point.dim != self.dim:
            raise DimensionMismatch("point dimension differs from region")
        signs = []
        for plane in self.supports:
            s = plane.side_of(point)
            if s == 0:
                return False
            signs.append(s)
        return tuple(signs) in self.cells

    def convex_cells(self) -> list[ConvexCell]:
        """The member cells as explicit half-space intersections."""
        out = []
        for sigma in sorted(self.cells):
            out.append(
                ConvexCell(
                    frozenset(
                        HalfSpace(plane, side)
                        for plane, side in zip(self.supports, sigma)
                    )
                )
            )
        return out

    def witness_point(self) -> Optional[Vector]:
        """An exact interior point, when the region is nonempty."""
        if not self.cells:
            return None
        if not self.supports:
            return Vector((Fraction(0),) * self.dim)
        feasible = arrangements.enumerate_cells(self.supports)
        sigma = min(self.cells)
        return feasible[sigma]

    def __repr__(self) -> str:
        return f"Region(dim={self.dim}, supports={len(self.supports)}, cells={len(self.cells)})"


def _canonicalize(
    dim: int, supports: Sequence[Hyperplane], members: set[SignVector]
) -> Region:
    """Prune hyperplanes that no longer separate members from non-members."""
    planes = list(supports)
    feasible = set(arrangements.enumerate_cells(tuple(planes)))
    members = set(members)
    while planes:
        for idx in range(len(planes)):
            if _is_redundant(idx, feasible, members):
                planes.pop(idx)
                feasible = {s[:idx] + s[idx + 1 :] for s in feasible}
                members = {s[:idx] + s[idx + 1 :] for s in members}
                break
        else:
            break
    if not members:
        return Region.empty(dim)
    if not planes:
        return Region.full(dim)
    return Region(dim, tuple(planes), frozenset(members))


def _is_redundant(idx: int, feasible: set[SignVector], members: set[SignVector]) -> bool:
    for sigma in feasible:
        if sigma[idx] == 1:
            partner = sigma[:idx] + (-1,) + sigma[idx + 1 :]
            if partner in feasible and ((sigma in members) != (partner in members)):
                return False
    return True


def region_from_halfspaces(
    dim: int, cells: Sequence[Sequence[HalfSpace]]
) -> Region:
    """The regularized union of the given open cells, in canonical form.

    Input need not be canonical: infeasible cells drop out, overlapping
    cells merge, and shared facets are absorbed.
    """
    for cell in cells:
        for hs in cell:
            if hs.dim != dim:
                raise DimensionMismatch(
                    f"half-space of dimension {hs.dim} in dimension-{dim} region"
                )
    planes = sorted(
        {hs.plane for cell in cells for hs in cell}, key=Hyperplane.sort_key
    )
    _check_budget(len(planes))
    feasible = arrangements.enumerate_cells(tuple(planes))
    index = {plane: i for i, plane in enumerate(planes)}
    members: set[SignVector] = set()
    for sigma in feasible:
        for cell in cells:
            if all(sigma[index[hs.plane]] == hs.side for hs in cell):
                members.add(sigma)
                break
    return _canonicalize(dim, planes, members)


def halfspace_region(hs: HalfSpace) -> Region:
    return Region(hs.dim, (hs.plane,), frozenset({(hs.side,)}))


def _refine(
    a: Region, b: Region
) -> tuple[tuple[Hyperplane, ...], dict, Callable, Callable]:
    if a.dim != b.dim:
        raise DimensionMismatch(f"regions of dimensions {a.dim} and {b.dim}")
    union = sorted(set(a.supports) | set(b.supports), key=Hyperplane.sort_key)
    _check_budget(len(union))
    feasible = arrangements.enumerate_cells(tuple(union))
    pos_a = [union.index(p) for p in a.supports]
    pos_b = [union.index(p) for p in b.supports]

    def in_a(sigma: SignVector) -> bool:
        return tuple(sigma[i] for i in pos_a) in a.cells

    def in_b(sigma: SignVector) -> bool:
        return tuple(sigma[i] for i in pos_b) in b.cells

    return tuple(union), feasible, in_a, in_b


def product(a: Region, b: Region) -> Region:
    """Greatest lower bound; coincides with set intersection."""
    union, feasible, in_a, in_b = _refine(a, b)
    members = {s for s in feasible if in_a(s) and in_b(s)}
    return _canonicalize(a.dim, union, members)


def region_sum(a: Region, b: Region) -> Region:
    """Least upper bound: the interior of the closure of the union."""
    union, feasible, in_a, in_b = _refine(a, b)
    members = {s for s in feasible if in_a(s) or in_b(s)}
    return _canonicalize(a.dim, union, members)


def complement(a: Region) -> Region:
    """The regular open complement: the interior of the set difference."""
    _check_budget(len(a.supports))
    feasible = arrangements.enumerate_cells(a.supports)
    members = {s for s in feasible if s not in a.cells}
    return _canonicalize(a.dim, a.supports, members)


def leq(a: Region, b: Region) -> bool:
    """Inclusion of regular open sets."""
    _, feasible, in_a, in_b = _refine(a, b)
    return all(in_b(s) for s in feasible if in_a(s))


def equals(a: Region, b: Region) -> bool:
    _, feasible, in_a, in_b = _refine(a, b)
    return all(in_a(s) == in_b(s) for s in feasible)


def is_empty(a: Region) -> bool:
    return a.is_empty()


def is_convex(a: Region) -> bool:
    """Whether the region equals the product of its containing half-spaces.

    For polytopal regular open sets this is exactly convexity: the boundary
    lies in the supporting hyperplanes, so a convex region is the open
    intersection of the half-spaces on those planes that contain it.
    """
    if a.is_empty() or a.is_full():
        return True
    fixed: dict[int, int] = {}
    for i in range(len(a.supports)):
        sides = {sigma[i] for sigma in a.cells}
        if len(sides) == 1:
            fixed[i] = sides.pop()
    feasible = arrangements.enumerate_cells(a.supports)
    hull = {
        sigma
        for sigma in feasible
        if all(sigma[i] == side for i, side in fixed.items())
    }
    return hull == set(a.cells)


def count_cells(planes: Sequence[Hyperplane]) -> int:
    """Number of full-dimensional cells of the arrangement."""
    if not planes:
        raise GeometryError("cell counting needs at least one hyperplane")
    if len(set(planes)) != len(planes):
        raise DegenerateGeometry("duplicate hyperplanes after canonicalization")
    dims = {p.dim for p in planes}
    if len(dims) > 1:
        raise DimensionMismatch(f"planes of mixed dimensions: {sorted(dims)}")
    _check_budget(len(planes))
    return arrangements.cell_count(tuple(planes))


def apply_affine_region(transform: AffineMap, region: Region) -> Region:
    """The image region; exact and purely structural on the canonical form."""
    if transform.dim != region.dim:
        raise DimensionMismatch("map and region dimensions differ")
    images = [apply_affine(transform, HalfSpace(p, 1)) for p in region.supports]
    order = sorted(range(len(images)), key=lambda i: images[i].plane.sort_key())
    supports = tuple(images[i].plane for i in order)
    cells = frozenset(
        tuple(sigma[i] * images[i].side for i in order) for sigma in region.cells
    )
    return Region(region.dim, supports, cells)


def bounding_halfspace(region: Region) -> Optional[HalfSpace]:
    """The unique half-space equal to the region, when there is one."""
    if len(region.supports) == 1 and len(region.cells) == 1:
        (sigma,) = region.cells
        return HalfSpace(region.supports[0], sigma[0])
    return None


def _recession_rows(cell_constraints: Sequence[HalfSpace]):
    rows = []
    for hs in cell_constraints:
        coeffs = hs.plane.normal.coords
        if hs.side == -1:
            coeffs = tuple(-c for c in coeffs)
        rows.append((coeffs, Fraction(0), False))
    return rows


def is_bounded(region: Region) -> bool:
    """Whether the region fits in some box; decided via recession directions."""
    if region.is_empty():
        return True
    if region.is_full():
        return False
    dim = region.dim
    for cell in region.convex_cells():
        constraints = sorted(cell.constraints, key=HalfSpace.sort_key)
        base = _recession_rows(constraints)
        for axis in range(dim):
            for direction in (1, -1):
                probe = [Fraction(0)] * dim
                probe[axis] = Fraction(direction)
                rows = base + [(tuple(probe), Fraction(0), True)]
                if fm_feasible(rows, dim) is not None:
                    return False
    return True
