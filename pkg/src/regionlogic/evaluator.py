"""Three-valued evaluation of formulas over regions of one dimension.

Atoms are decided exactly by the region algebra. A quantifier whose bound
variable is syntactically confined to a finite disjunction of equalities is
discharged exactly over those terms; this covers every guarded block the
macro layer produces. Any other quantifier is searched over a deterministic
pool generated from the assignment, and the verdict degrades to Unknown
rather than guess: an existential can only be confirmed, a universal only
refuted, so definite verdicts are always sound even though the domain is
infinite.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .geometry import DimensionMismatch, HalfSpace
from .macros import expand_macros
from .regions import (
    Region,
    complement,
    equals,
    halfspace_region,
    is_convex,
    is_empty,
    leq,
    product,
    region_from_halfspaces,
    region_sum,
)
from .syntax import (
    And,
    Conv,
    Eq,
    Exists,
    Forall,
    Formula,
    Implies,
    Leq,
    Macro,
    Neg,
    Not,
    One,
    Or,
    Prod,
    Sum,
    Term,
    Var,
    Zero,
    free_variables,
)

TRUE = "true"
FALSE = "false"
UNKNOWN = "unknown"

Assignment = dict[str, Region]


@dataclass
class Verdict:
    """Outcome of an evaluation; definite values are exact.

    The witness binds quantified variables: the satisfying choices for a
    confirmed existential, the counterexample for a refuted universal.
    """

    value: str
    witness: Optional[Assignment] = None
    budget_exhausted: bool = False

    def __bool__(self) -> bool:
        return self.value == TRUE


class _OutOfBudget(Exception):
    pass


@dataclass
class _Search:
    dim: int
    remaining: int
    pool: Optional[list[Region]] = None
    pool_seed: Optional[Assignment] = None
    pool_cap: int = 64

    def charge(self) -> None:
        if self.remaining <= 0:
            raise _OutOfBudget()
        self.remaining -= 1

    def candidates(self) -> list[Region]:
        if self.pool is None:
            self.pool = candidate_pool(self.dim, self.pool_seed or {}, self.pool_cap)
        return self.pool


def candidate_pool(dim: int, assignment: Assignment, cap: int = 64) -> list[Region]:
    """Deterministic candidate regions: assignment values and 0 and 1,
    closed under complement, product, and sum to depth two, capped.

    Assignment values come first so that searches over tuples of candidates
    reach combinations of the given regions before derived ones.
    """
    pool: list[Region] = []

    def push(region: Region) -> bool:
        if len(pool) >= cap:
            return False
        if region not in pool:
            pool.append(region)
        return True

    for name in sorted(assignment):
        push(assignment[name])
    push(Region.empty(dim))
    push(Region.full(dim))
    level_end = len(pool)
    for _ in range(2):
        snapshot = pool[:level_end]
        for region in snapshot:
            if not push(complement(region)):
                return pool
        for i, left in enumerate(snapshot):
            for right in snapshot[i:]:
                if not push(product(left, right)) or not push(region_sum(left, right)):
                    return pool
        level_end = len(pool)
    return pool


def _eval_term(term: Term, env: Assignment, dim: int) -> Region:
    if isinstance(term, Var):
        return env[term.name]
    if isinstance(term, Zero):
        return Region.empty(dim)
    if isinstance(term, One):
        return Region.full(dim)
    if isinstance(term, Neg):
        return complement(_eval_term(term.operand, env, dim))
    if isinstance(term, Prod):
        return product(
            _eval_term(term.left, env, dim), _eval_term(term.right, env, dim)
        )
    if isinstance(term, Sum):
        return region_sum(
            _eval_term(term.left, env, dim), _eval_term(term.right, env, dim)
        )
    raise TypeError(f"not a term node: {term!r}")


def _flatten_and(f: Formula) -> list[Formula]:
    if isinstance(f, And):
        return _flatten_and(f.left) + _flatten_and(f.right)
    return [f]


def _rebuild_and(parts: list[Formula]) -> Optional[Formula]:
    if not parts:
        return None
    node = parts[0]
    for part in parts[1:]:
        node = And(node, part)
    return node


def _guard_terms(var: str, f: Formula) -> Optional[list[Term]]:
    """The terms of a disjunctive equality guard for the variable, if any."""
    disjuncts: list[Formula] = []

    def flatten(node: Formula) -> None:
        if isinstance(node, Or):
            flatten(node.left)
            flatten(node.right)
        else:
            disjuncts.append(node)

    flatten(f)
    terms = []
    for node in disjuncts:
        if not isinstance(node, Eq):
            return None
        if node.left == Var(var) and var not in _term_variables(node.right):
            terms.append(node.right)
        elif node.right == Var(var) and var not in _term_variables(node.left):
            terms.append(node.left)
        else:
            return None
    return terms


def _term_variables(term: Term) -> set[str]:
    from .syntax import _term_vars

    return _term_vars(term)


def _split_guard(
    var: str, body: Formula
) -> Optional[tuple[list[Term], Optional[Formula]]]:
    """Extract a finite guard for the variable from the quantifier body.

    Handles a guard conjunct at any depth of the conjunction, including
    under inner quantifiers when no capture occurs, which is the shape the
    guarded triple blocks take.
    """
    direct = _guard_terms(var, body)
    if direct is not None:
        return direct, None
    if isinstance(body, And):
        parts = _flatten_and(body)
        for i, part in enumerate(parts):
            terms = _guard_terms(var, part)
            if terms is not None:
                return terms, _rebuild_and(parts[:i] + parts[i + 1 :])
    if isinstance(body, Exists):
        inner = _split_guard(var, body.body)
        if inner is not None:
            terms, rest = inner
            if all(body.var not in _term_variables(t) for t in terms):
                return terms, Exists(body.var, rest) if rest is not None else None
    return None


def evaluate(
    dim: int,
    formula: Formula,
    assignment: Optional[Assignment] = None,
    budget: int = 200000,
) -> Verdict:
    """Evaluate a formula under an assignment of regions of one dimension."""
    if budget <= 0:
        raise ValueError("budget must be positive")
    assignment = dict(assignment or {})
    for name, region in assignment.items():
        if region.dim != dim:
            raise DimensionMismatch(
                f"assignment for {name!r} has dimension {region.dim}, not {dim}"
            )
    missing = free_variables(formula) - set(assignment)
    if missing:
        raise ValueError(f"unassigned free variables: {sorted(missing)}")
    search = _Search(dim=dim, remaining=budget, pool_seed=assignment)
    try:
        value, witness = _eval(formula, assignment, search)
        return Verdict(value, witness)
    except _OutOfBudget:
        return Verdict(UNKNOWN, None, budget_exhausted=True)


def _eval(
    f: Formula, env: Assignment, search: _Search
) -> tuple[str, Optional[Assignment]]:
    dim = search.dim
    if isinstance(f, Macro):
        return _eval(expand_macros(f), env, search)
    if isinstance(f, Conv):
        return (TRUE if is_convex(_eval_term(f.term, env, dim)) else FALSE), None
    if isinstance(f, Leq):
        left = _eval_term(f.left, env, dim)
        right = _eval_term(f.right, env, dim)
        return (TRUE if leq(left, right) else FALSE), None
    if isinstance(f, Eq):
        left = _eval_term(f.left, env, dim)
        right = _eval_term(f.right, env, dim)
        return (TRUE if equals(left, right) else FALSE), None
    if isinstance(f, Not):
        value, witness = _eval(f.operand, env, search)
        if value == TRUE:
            return FALSE, witness
        if value == FALSE:
            return TRUE, witness
        return UNKNOWN, None
    if isinstance(f, And):
        left, lw = _eval(f.left, env, search)
        if left == FALSE:
            return FALSE, lw
        right, rw = _eval(f.right, env, search)
        if right == FALSE:
            return FALSE, rw
        if left == TRUE and right == TRUE:
            return TRUE, _merge(lw, rw)
        return UNKNOWN, None
    if isinstance(f, Or):
        left, lw = _eval(f.left, env, search)
        if left == TRUE:
            return TRUE, lw
        right, rw = _eval(f.right, env, search)
        if right == TRUE:
            return TRUE, rw
        if left == FALSE and right == FALSE:
            return FALSE, None
        return UNKNOWN, None
    if isinstance(f, Implies):
        return _eval(Or(Not(f.left), f.right), env, search)
    if isinstance(f, Exists):
        return _eval_exists(f, env, search)
    if isinstance(f, Forall):
        return _eval_forall(f, env, search)
    raise TypeError(f"not a formula node: {f!r}")


def _merge(a: Optional[Assignment], b: Optional[Assignment]) -> Optional[Assignment]:
    if a is None:
        return b
    if b is None:
        return a
    merged = dict(a)
    merged.update(b)
    return merged


def _eval_exists(
    f: Exists, env: Assignment, search: _Search
) -> tuple[str, Optional[Assignment]]:
    split = _split_guard(f.var, f.body)
    if split is not None:
        guard_terms, rest = split
        saw_unknown = False
        for term in guard_terms:
            search.charge()
            value = _eval_term(term, env, search.dim)
            inner_env = dict(env)
            inner_env[f.var] = value
            if rest is None:
                verdict, witness = TRUE, None
            else:
                verdict, witness = _eval(rest, inner_env, search)
            if verdict == TRUE:
                return TRUE, _merge({f.var: value}, witness)
            if verdict == UNKNOWN:
                saw_unknown = True
        return (UNKNOWN if saw_unknown else FALSE), None
    for candidate in search.candidates():
        if candidate.dim != search.dim:
            continue
        search.charge()
        inner_env = dict(env)
        inner_env[f.var] = candidate
        verdict, witness = _eval(f.body, inner_env, search)
        if verdict == TRUE:
            return TRUE, _merge({f.var: candidate}, witness)
    return UNKNOWN, None


def _eval_forall(
    f: Forall, env: Assignment, search: _Search
) -> tuple[str, Optional[Assignment]]:
    if isinstance(f.body, Implies):
        guard_terms = _guard_terms(f.var, f.body.left)
        if guard_terms is not None:
            saw_unknown = False
            for term in guard_terms:
                search.charge()
                value = _eval_term(term, env, search.dim)
                inner_env = dict(env)
                inner_env[f.var] = value
                verdict, witness = _eval(f.body.right, inner_env, search)
                if verdict == FALSE:
                    return FALSE, _merge({f.var: value}, witness)
                if verdict == UNKNOWN:
                    saw_unknown = True
            return (UNKNOWN if saw_unknown else TRUE), None
    for candidate in search.candidates():
        if candidate.dim != search.dim:
            continue
        search.charge()
        inner_env = dict(env)
        inner_env[f.var] = candidate
        verdict, witness = _eval(f.body, inner_env, search)
        if verdict == FALSE:
            return FALSE, _merge({f.var: candidate}, witness)
    return UNKNOWN, None


# --- concrete families for the separation results ----------------------------


def helly_witness(n: int) -> list[Region]:
    """n + 2 convex regions in dimension n + 1 whose every (n+1)-subset
    meets while the whole family does not."""
    if n < 1:
        raise ValueError("the parameter must be at least 1")
    dim = n + 1
    regions = []
    for axis in range(dim):
        normal = [0] * dim
        normal[axis] = 1
        regions.append(halfspace_region(HalfSpace.from_inequality(normal, 0, "<")))
    regions.append(
        halfspace_region(HalfSpace.from_inequality([1] * dim, 1, ">"))
    )
    return regions


def check_helly_instance(
    regions: Sequence[Region], subset_size: Optional[int] = None
) -> bool:
    """Whether pairwise-style overlap forces a common region, exactly.

    By default the hypothesis ranges over the (n+1)-element subsets for n
    the ambient dimension, where the implication is a theorem; passing a
    smaller ``subset_size`` evaluates the same implication with hypothesis
    indices sized for a lower dimension, which can fail. Inputs must all be
    convex.
    """
    import itertools

    if not regions:
        return True
    dims = {r.dim for r in regions}
    if len(dims) > 1:
        raise DimensionMismatch(f"regions of mixed dimensions: {sorted(dims)}")
    dim = dims.pop()
    for r in regions:
        if not is_convex(r):
            raise ValueError("the overlap principle applies to convex regions only")
    if subset_size is None:
        subset_size = dim + 1
    if len(regions) < subset_size:
        return True

    def total(parts: Sequence[Region]) -> Region:
        out = parts[0]
        for part in parts[1:]:
            out = product(out, part)
        return out

    for subset in itertools.combinations(regions, subset_size):
        if is_empty(total(subset)):
            return True
    return not is_empty(total(list(regions)))


def random_convex_family(
    rng: random.Random, dim: int, size: int
) -> list[Region]:
    """Seeded random nonempty convex regions with small rational data."""
    family = []
    while len(family) < size:
        cell = []
        for _ in range(rng.randint(1, dim + 1)):
            normal = [rng.randint(-2, 2) for _ in range(dim)]
            if not any(normal):
                normal[rng.randrange(dim)] = 1
            cell.append(
                HalfSpace.from_inequality(
                    normal, rng.choice([-2, -1, 0, 1, 2]), rng.choice("><")
                )
            )
        region = region_from_halfspaces(dim, [cell])
        if not region.is_empty():
            family.append(region)
    return family


@dataclass
class HellySuiteReport:
    """Outcome of a sampling sweep plus the separation certificate."""

    dim: int
    count: int
    samples: int
    hypothesis_hits: int
    counterexamples: int
    rows: list[tuple[int, bool, bool]] = field(default_factory=list)


def helly_sampling_suite(dim: int, count: int, samples: int, seed: int) -> HellySuiteReport:
    """Sample convex families in the given dimension and look for violations.

    Each row records whether the overlap hypothesis held and whether the
    family nevertheless had empty total intersection; a row with both flags
    set would falsify the sentence in that dimension.
    """
    import itertools

    rng = random.Random(seed)
    report = HellySuiteReport(dim, count, samples, 0, 0)
    for index in range(samples):
        family = random_convex_family(rng, dim, count)
        subset_size = dim + 1
        hypothesis = all(
            not is_empty(_product_all(subset))
            for subset in itertools.combinations(family, subset_size)
        )
        conclusion = not is_empty(_product_all(family))
        if hypothesis:
            report.hypothesis_hits += 1
            if not conclusion:
                report.counterexamples += 1
        report.rows.append((index, hypothesis, hypothesis and not conclusion))
    return report


def _product_all(parts: Sequence[Region]) -> Region:
    out = parts[0]
    for part in parts[1:]:
        out = product(out, part)
    return out
