"""Frame-relative descriptors that pin half-spaces and regions uniquely.

A half-space descriptor is the canonical equation of the bounding plane in
the coordinate system that sends a frame to the canonical one, plus the side
bit. Per frame, exactly one half-space matches a descriptor, which makes the
descriptor-and-matcher pair an exact fixing device. A region descriptor adds
a Boolean combination tree over the fixed half-spaces; it is satisfied only
by tuples that are affine images of the original decomposition, and the
image tuple rebuilds exactly the image region.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .geometry import (
    AffineMap,
    DegenerateGeometry,
    DimensionMismatch,
    GeometryError,
    HalfSpace,
    Hyperplane,
    Vector,
    affine_from_simplex,
    apply_affine,
    solve_square,
    unit_vector,
    zero_vector,
)
from .predicates import FrameWitness, canonical_frame
from .regions import (
    Region,
    apply_affine_region,
    complement,
    halfspace_region,
    is_bounded,
    is_convex,
    product,
    region_sum,
)

# --- Boolean combination trees ----------------------------------------------


@dataclass(frozen=True)
class Atom:
    index: int


@dataclass(frozen=True)
class Negation:
    operand: "BoolExpr"


@dataclass(frozen=True)
class Conjunction:
    left: "BoolExpr"
    right: "BoolExpr"


@dataclass(frozen=True)
class Disjunction:
    left: "BoolExpr"
    right: "BoolExpr"


@dataclass(frozen=True)
class Constant:
    value: bool


BoolExpr = Union[Atom, Negation, Conjunction, Disjunction, Constant]


def evaluate_combination(
    expr: BoolExpr, halfspaces: Sequence[HalfSpace], dim: int
) -> Region:
    """Build the region the combination denotes over the given half-spaces."""
    if isinstance(expr, Atom):
        return halfspace_region(halfspaces[expr.index])
    if isinstance(expr, Negation):
        return complement(evaluate_combination(expr.operand, halfspaces, dim))
    if isinstance(expr, Conjunction):
        return product(
            evaluate_combination(expr.left, halfspaces, dim),
            evaluate_combination(expr.right, halfspaces, dim),
        )
    if isinstance(expr, Disjunction):
        return region_sum(
            evaluate_combination(expr.left, halfspaces, dim),
            evaluate_combination(expr.right, halfspaces, dim),
        )
    if isinstance(expr, Constant):
        return Region.full(dim) if expr.value else Region.empty(dim)
    raise TypeError(f"not a combination node: {expr!r}")


def print_combination(expr: BoolExpr) -> str:
    def render(node: BoolExpr, parent: int) -> str:
        if isinstance(node, Constant):
            return "true" if node.value else "false"
        if isinstance(node, Atom):
            return f"h{node.index}"
        if isinstance(node, Negation):
            return "!" + render(node.operand, 3)
        if isinstance(node, Conjunction):
            text = f"{render(node.left, 2)} & {render(node.right, 2)}"
            return f"({text})" if parent > 2 else text
        if isinstance(node, Disjunction):
            text = f"{render(node.left, 1)} | {render(node.right, 1)}"
            return f"({text})" if parent > 1 else text
        raise TypeError(f"not a combination node: {node!r}")

    return render(expr, 0)


def parse_combination(text: str) -> BoolExpr:
    tokens: list[str] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "!&|()":
            tokens.append(ch)
            i += 1
        else:
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            if j == i:
                raise GeometryError(f"bad combination syntax at {text[i:]!r}")
            tokens.append(text[i:j])
            i = j
    pos = 0

    def peek() -> Optional[str]:
        return tokens[pos] if pos < len(tokens) else None

    def take(expected: Optional[str] = None) -> str:
        nonlocal pos
        if pos >= len(tokens):
            raise GeometryError("combination ended unexpectedly")
        token = tokens[pos]
        if expected is not None and token != expected:
            raise GeometryError(f"expected {expected!r}, found {token!r}")
        pos += 1
        return token

    def parse_or() -> BoolExpr:
        node = parse_and()
        while peek() == "|":
            take()
            node = Disjunction(node, parse_and())
        return node

    def parse_and() -> BoolExpr:
        node = parse_unary()
        while peek() == "&":
            take()
            node = Conjunction(node, parse_unary())
        return node

    def parse_unary() -> BoolExpr:
        if peek() == "!":
            take()
            return Negation(parse_unary())
        if peek() == "(":
            take()
            node = parse_or()
            take(")")
            return node
        token = take()
        if token == "true":
            return Constant(True)
        if token == "false":
            return Constant(False)
        if token.startswith("h") and token[1:].isdigit():
            return Atom(int(token[1:]))
        raise GeometryError(f"unknown combination token {token!r}")

    node = parse_or()
    if pos != len(tokens):
        raise GeometryError(f"trailing combination input: {tokens[pos:]}")
    return node


# --- descriptors -------------------------------------------------------------


@dataclass(frozen=True)
class HalfSpaceDescriptor:
    """Canonical frame-relative plane equation, side bit, and axis traces."""

    normal: tuple[Fraction, Fraction, Fraction]
    offset: Fraction
    side: int
    intercepts: tuple[Optional[Fraction], Optional[Fraction], Optional[Fraction]]
    through_origin: bool


@dataclass(frozen=True)
class RegionDescriptor:
    """Fixed half-spaces plus the Boolean combination that rebuilds a region."""

    dim: int
    halfspaces: tuple[HalfSpaceDescriptor, ...]
    combination: BoolExpr


def frame_to_canonical_map(frame: FrameWitness) -> AffineMap:
    """The affine map sending origin and units onto the coordinate simplex."""
    source = [frame.origin, *frame.units]
    target = [zero_vector(3), unit_vector(3, 0), unit_vector(3, 1), unit_vector(3, 2)]
    return affine_from_simplex(source, target)


def describe_halfspace(frame: FrameWitness, hs: HalfSpace) -> HalfSpaceDescriptor:
    """The frame-relative descriptor of a half-space."""
    if hs.dim != 3:
        raise DimensionMismatch("descriptors are built over dimension 3")
    image = apply_affine(frame_to_canonical_map(frame), hs)
    normal = image.plane.normal.coords
    offset = image.plane.offset
    intercepts = tuple(
        offset / c if c != 0 else None for c in normal
    )
    return HalfSpaceDescriptor(normal, offset, image.side, intercepts, offset == 0)


def matches_halfspace(
    frame: FrameWitness, descriptor: HalfSpaceDescriptor, candidate: HalfSpace
) -> bool:
    """Whether the candidate is the one half-space fixed by the descriptor."""
    return describe_halfspace(frame, candidate) == descriptor


def halfspace_decomposition(r: Region) -> tuple[list[HalfSpace], BoolExpr]:
    """The region as a Boolean combination of its supporting half-spaces.

    The half-spaces are the positive sides of the supports; the combination
    is the disjunction of the region's cells as sign conjunctions.
    """
    halfspaces = [HalfSpace(plane, 1) for plane in r.supports]
    if r.is_empty():
        return halfspaces, Constant(False)
    if r.is_full():
        return halfspaces, Constant(True)
    cells = []
    for sigma in sorted(r.cells):
        literals = [
            Atom(i) if side == 1 else Negation(Atom(i))
            for i, side in enumerate(sigma)
        ]
        node: BoolExpr = literals[0]
        for lit in literals[1:]:
            node = Conjunction(node, lit)
        cells.append(node)
    combined: BoolExpr = cells[0]
    for node in cells[1:]:
        combined = Disjunction(combined, node)
    return halfspaces, combined


def affine_complete_descriptor(r: Region) -> RegionDescriptor:
    """Descriptor over the canonical frame whose satisfying tuples rebuild r."""
    if r.dim != 3:
        raise DimensionMismatch("affine-complete descriptors live in dimension 3")
    halfspaces, combination = halfspace_decomposition(r)
    base = canonical_frame()
    return RegionDescriptor(
        r.dim,
        tuple(describe_halfspace(base, hs) for hs in halfspaces),
        combination,
    )


def satisfies_descriptor(
    frame: FrameWitness,
    halfspaces: Sequence[HalfSpace],
    descriptor: RegionDescriptor,
) -> Optional[Region]:
    """The region the tuple rebuilds, if every member matches its descriptor."""
    if len(halfspaces) != len(descriptor.halfspaces):
        raise GeometryError("tuple length does not match the descriptor")
    for hs, fixed in zip(halfspaces, descriptor.halfspaces):
        if not matches_halfspace(frame, fixed, hs):
            return None
    return evaluate_combination(descriptor.combination, halfspaces, descriptor.dim)


def recover_affine(source: FrameWitness, target: FrameWitness) -> AffineMap:
    """The unique map carrying one frame's origin and units to the other's."""
    return affine_from_simplex(
        [source.origin, *source.units], [target.origin, *target.units]
    )


# --- affine equivalence ------------------------------------------------------


@dataclass(frozen=True)
class Equivalent:
    transform: AffineMap


@dataclass(frozen=True)
class NotEquivalent:
    reason: str


@dataclass(frozen=True)
class Unknown:
    reason: str


EquivalenceResult = Union[Equivalent, NotEquivalent, Unknown]


def _triple_point(planes: Sequence[Hyperplane]) -> Optional[Vector]:
    return solve_square(
        [p.normal.coords for p in planes], [p.offset for p in planes]
    )


def _affinely_independent(points: Sequence[Vector]) -> bool:
    if len(points) < 2:
        return True
    rows = [list((p - points[0]).coords) for p in points[1:]]
    rank = 0
    cols = len(rows[0])
    for col in range(cols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = 1 / rows[rank][col]
        rows[rank] = [x * inv for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                factor = rows[r][col]
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank == len(points) - 1


def _anchor_simplex(
    region: Region,
) -> Optional[tuple[list[Vector], list[tuple[Hyperplane, ...]]]]:
    """Affinely independent arrangement vertices, each tagged by its planes."""
    import itertools

    dim = region.dim
    candidates = []
    for triple in itertools.combinations(region.supports, dim):
        point = _triple_point(triple)
        if point is not None:
            candidates.append((point.coords, point, triple))
    candidates.sort(key=lambda item: item[0])
    chosen_points: list[Vector] = []
    chosen_triples: list[tuple[Hyperplane, ...]] = []
    seen = set()
    for _, point, triple in candidates:
        if point.coords in seen:
            continue
        if _affinely_independent(chosen_points + [point]):
            seen.add(point.coords)
            chosen_points.append(point)
            chosen_triples.append(triple)
            if len(chosen_points) == dim + 1:
                return chosen_points, chosen_triples
    return None


def _halfspace_map(h1: HalfSpace, h2: HalfSpace) -> AffineMap:
    """Some affine map carrying one open half-space onto another."""
    from .geometry import flat_parameterization

    def chart(hs: HalfSpace):
        origin, dirs = flat_parameterization(hs.plane.normal.coords, hs.plane.offset)
        base = Vector(origin)
        inward = hs.plane.normal.scale(hs.side)
        return [base] + [base + Vector(d) for d in dirs] + [base + inward]

    return affine_from_simplex(chart(h1), chart(h2))


def are_affine_equivalent(
    r1: Region, r2: Region, budget: int = 10000
) -> EquivalenceResult:
    """Search for an exact affine map carrying one region onto the other.

    A positive answer always comes with a verified certificate map; a
    negative one cites an affine-invariant discriminator. The search
    enumerates ordered plane tuples defining candidate simplex maps and
    reports Unknown when the budget runs out or no simplex exists.
    """
    if r1.dim != r2.dim:
        raise DimensionMismatch("regions live in different dimensions")
    dim = r1.dim
    identity = AffineMap.identity(dim)
    if r1 == r2:
        return Equivalent(identity)
    for name, invariant in (
        ("emptiness", Region.is_empty),
        ("totality", Region.is_full),
    ):
        if invariant(r1) != invariant(r2):
            return NotEquivalent(f"{name} differs")
    if len(r1.supports) != len(r2.supports):
        return NotEquivalent("support counts differ")
    if len(r1.cells) != len(r2.cells):
        return NotEquivalent("cell counts differ")
    if is_convex(r1) != is_convex(r2):
        return NotEquivalent("convexity differs")
    if is_bounded(r1) != is_bounded(r2):
        return NotEquivalent("boundedness differs")

    if len(r1.supports) == 1:
        (sigma1,) = r1.cells
        (sigma2,) = r2.cells
        transform = _halfspace_map(
            HalfSpace(r1.supports[0], sigma1[0]), HalfSpace(r2.supports[0], sigma2[0])
        )
        if apply_affine_region(transform, r1) == r2:
            return Equivalent(transform)
        return Unknown("half-space correspondence failed")

    if len(r1.supports) < dim:
        return Unknown("too few supporting planes for a correspondence search")

    import itertools

    anchor = _anchor_simplex(r1)
    if anchor is None:
        return Unknown("supporting planes span no simplex of vertices")
    source_points, source_triples = anchor
    involved: list[Hyperplane] = []
    for triple in source_triples:
        for plane in triple:
            if plane not in involved:
                involved.append(plane)
    triple_indices = [
        tuple(involved.index(p) for p in triple) for triple in source_triples
    ]

    examined = 0
    for images in itertools.permutations(r2.supports, len(involved)):
        examined += 1
        if examined > budget:
            return Unknown("budget exhausted")
        target_points = []
        for indices in triple_indices:
            point = _triple_point([images[i] for i in indices])
            if point is None:
                break
            target_points.append(point)
        else:
            try:
                transform = affine_from_simplex(source_points, target_points)
            except DegenerateGeometry:
                continue
            if apply_affine_region(transform, r1) == r2:
                return Equivalent(transform)
    return Unknown("no correspondence found within the enumerated tuples")
