"""Expansion of the named abbreviations into core first-order formulas.

Each macro unfolds to the quantifier-and-guard shape of its definition:
half-space-hood is convexity of a region and its complement, parallelism and
line-meeting are sign patterns of the four products of two half-spaces and
their complements, and the fan, prism, and corner cases count how many of
the guarded sign triples have empty product: two, one, or none. The counting
blocks quantify bound variables over the finite guard sets, so evaluation
discharges them exactly.
"""

from __future__ import annotations

import itertools
from typing import Sequence

from .syntax import (
    And,
    Conv,
    Eq,
    Exists,
    Forall,
    Formula,
    Implies,
    Macro,
    Neg,
    Not,
    Or,
    Prod,
    Term,
    Var,
    ZERO,
    _term_vars,
    macro_arity,
)


def conjoin(parts: Sequence[Formula]) -> Formula:
    node = parts[0]
    for part in parts[1:]:
        node = And(node, part)
    return node


def disjoin(parts: Sequence[Formula]) -> Formula:
    node = parts[0]
    for part in parts[1:]:
        node = Or(node, part)
    return node


def product_term(terms: Sequence[Term]) -> Term:
    node = terms[0]
    for term in terms[1:]:
        node = Prod(node, term)
    return node


def _nonzero(term: Term) -> Formula:
    return Not(Eq(term, ZERO))


def _all_variables(f: Formula) -> set[str]:
    from .syntax import Leq

    if isinstance(f, Conv):
        return _term_vars(f.term)
    if isinstance(f, (Eq, Leq)):
        return _term_vars(f.left) | _term_vars(f.right)
    if isinstance(f, (And, Or, Implies)):
        return _all_variables(f.left) | _all_variables(f.right)
    if isinstance(f, Not):
        return _all_variables(f.operand)
    if isinstance(f, (Exists, Forall)):
        return _all_variables(f.body) | {f.var}
    if isinstance(f, Macro):
        out: set[str] = set()
        for arg in f.args:
            if not isinstance(arg, int):
                out |= _term_vars(arg)
        return out
    raise TypeError(f"not a formula node: {f!r}")


def _fresh_names(used: set[str], count: int) -> list[str]:
    names = []
    index = 0
    while len(names) < count:
        index += 1
        candidate = f"w{index}"
        if candidate not in used:
            used.add(candidate)
            names.append(candidate)
    return names


def _halfspace_clause(term: Term) -> Formula:
    return And(Conv(term), Conv(Neg(term)))


def _expand_hs(args: Sequence[Term]) -> Formula:
    parts: list[Formula] = [_halfspace_clause(arg) for arg in args]
    for i, j in itertools.combinations(range(len(args)), 2):
        parts.append(Not(Eq(args[i], args[j])))
        parts.append(Not(Eq(args[i], Neg(args[j]))))
    return conjoin(parts)


def _empty_product_cases(x: Term, y: Term) -> Formula:
    return Or(
        Or(Eq(Prod(x, y), ZERO), Eq(Prod(x, Neg(y)), ZERO)),
        Or(Eq(Prod(Neg(x), y), ZERO), Eq(Prod(Neg(x), Neg(y)), ZERO)),
    )


def _expand_parallel(x: Term, y: Term) -> Formula:
    return And(_expand_hs([x, y]), _empty_product_cases(x, y))


def _expand_line(x: Term, y: Term) -> Formula:
    return And(_expand_hs([x, y]), Not(_empty_product_cases(x, y)))


def _pairwise_lines(args: Sequence[Term]) -> Formula:
    return conjoin(
        [
            _expand_line(args[i], args[j])
            for i, j in itertools.combinations(range(len(args)), 2)
        ]
    )


def _sign_guard(var: str, source: Term) -> Formula:
    return Or(Eq(Var(var), source), Eq(Var(var), Neg(source)))


def _guarded_triple(
    names: Sequence[str], sources: Sequence[Term], body: Formula
) -> Formula:
    """E n1. E n2. E n3. ((guards) & body) with each ni ranging over a sign pair."""
    guard = conjoin([_sign_guard(n, s) for n, s in zip(names, sources)])
    node: Formula = And(guard, body)
    for name in reversed(names):
        node = Exists(name, node)
    return node


def _triples_differ(first: Sequence[str], second: Sequence[str]) -> Formula:
    return disjoin([Not(Eq(Var(a), Var(b))) for a, b in zip(first, second)])


def _expand_corner(args: Sequence[Term], used: set[str]) -> Formula:
    names = _fresh_names(used, 3)
    block = Not(
        _guarded_triple(names, args, Eq(product_term([Var(n) for n in names]), ZERO))
    )
    return And(_pairwise_lines(args), block)


def _expand_prism(args: Sequence[Term], used: set[str]) -> Formula:
    first = _fresh_names(used, 3)
    second = _fresh_names(used, 3)
    no_other = Not(
        _guarded_triple(
            second,
            args,
            And(
                _triples_differ(first, second),
                Eq(product_term([Var(n) for n in second]), ZERO),
            ),
        )
    )
    block = _guarded_triple(
        first,
        args,
        And(Eq(product_term([Var(n) for n in first]), ZERO), no_other),
    )
    return And(_pairwise_lines(args), block)


def _expand_fan(args: Sequence[Term], used: set[str]) -> Formula:
    first = _fresh_names(used, 3)
    second = _fresh_names(used, 3)
    third = _fresh_names(used, 3)
    no_third = Not(
        _guarded_triple(
            third,
            args,
            And(
                And(
                    _triples_differ(first, third),
                    _triples_differ(second, third),
                ),
                Eq(product_term([Var(n) for n in third]), ZERO),
            ),
        )
    )
    inner = _guarded_triple(
        second,
        args,
        And(
            And(
                _triples_differ(first, second),
                Eq(product_term([Var(n) for n in second]), ZERO),
            ),
            no_third,
        ),
    )
    block = _guarded_triple(
        first,
        args,
        And(Eq(product_term([Var(n) for n in first]), ZERO), inner),
    )
    return And(_pairwise_lines(args), block)


def _expand_frame(args: Sequence[Term], used: set[str]) -> Formula:
    y1, y2, y3, unit = args
    return conjoin(
        [
            _expand_corner([y1, y2, y3], used),
            _expand_line(y1, unit),
            _expand_line(y2, unit),
            _expand_line(y3, unit),
        ]
    )


def _coincident_tail(y1: Term, y2: Term) -> Formula:
    return Or(Eq(y1, y2), Eq(y1, Neg(y2)))


def _expand_coincident2(args: Sequence[Term]) -> Formula:
    y1, y2, ref = args
    return conjoin(
        [_expand_line(y1, ref), _expand_line(y2, ref), _coincident_tail(y1, y2)]
    )


def _expand_parallel2(args: Sequence[Term]) -> Formula:
    y1, y2, ref = args
    four_products = disjoin(
        [
            Eq(Prod(y1, y2), ZERO),
            Eq(Prod(y1, Neg(y2)), ZERO),
            Eq(Prod(Neg(y1), y2), ZERO),
            Eq(Prod(Neg(y1), Neg(y2)), ZERO),
        ]
    )
    return conjoin(
        [
            _expand_line(y1, ref),
            _expand_line(y2, ref),
            Not(_coincident_tail(y1, y2)),
            four_products,
        ]
    )


def _expand_point2(args: Sequence[Term]) -> Formula:
    y1, y2, ref = args
    return conjoin(
        [
            _expand_line(y1, ref),
            _expand_line(y2, ref),
            Not(_expand_coincident2(args)),
            Not(_expand_parallel2(args)),
        ]
    )


def helly_formula(n: int, big_n: int) -> Formula:
    """The closed sentence: pairwise-style overlap of convex regions forces
    a common region, with the overlap hypothesis over (n+1)-element subsets.
    """
    if n < 1:
        raise ValueError("the dimension parameter must be at least 1")
    if big_n < n + 1:
        raise ValueError("the family size must be at least n + 1")
    names = [f"x{i}" for i in range(1, big_n + 1)]
    variables = [Var(name) for name in names]
    hypothesis_parts: list[Formula] = [
        _nonzero(product_term([variables[i] for i in subset]))
        for subset in itertools.combinations(range(big_n), n + 1)
    ]
    hypothesis_parts.extend(Conv(v) for v in variables)
    conclusion = _nonzero(product_term(variables))
    body: Formula = Implies(conjoin(hypothesis_parts), conclusion)
    for name in reversed(names):
        body = Forall(name, body)
    return body


def expand_macros(f: Formula) -> Formula:
    """Replace every macro by its definition; the result is macro-free."""
    used = _all_variables(f)
    return _expand(f, set(used))


def _expand(f: Formula, used: set[str]) -> Formula:
    if isinstance(f, Macro):
        return _expand(_expand_macro(f, used), used)
    if isinstance(f, Not):
        return Not(_expand(f.operand, used))
    if isinstance(f, And):
        return And(_expand(f.left, used), _expand(f.right, used))
    if isinstance(f, Or):
        return Or(_expand(f.left, used), _expand(f.right, used))
    if isinstance(f, Implies):
        return Implies(_expand(f.left, used), _expand(f.right, used))
    if isinstance(f, Exists):
        return Exists(f.var, _expand(f.body, used | {f.var}))
    if isinstance(f, Forall):
        return Forall(f.var, _expand(f.body, used | {f.var}))
    return f


def _expand_macro(f: Macro, used: set[str]) -> Formula:
    name, args = f.name, list(f.args)
    if name == "helly":
        return helly_formula(args[0], args[1])
    if name.startswith("hs") and macro_arity(name) == len(args):
        return _expand_hs(args)
    if name == "parallel":
        return _expand_parallel(args[0], args[1])
    if name == "line":
        return _expand_line(args[0], args[1])
    if name == "corner":
        return _expand_corner(args, used)
    if name == "prism":
        return _expand_prism(args, used)
    if name == "fan":
        return _expand_fan(args, used)
    if name == "frame":
        return _expand_frame(args, used)
    if name == "coincident2":
        return _expand_coincident2(args)
    if name == "parallel2":
        return _expand_parallel2(args)
    if name == "point2":
        return _expand_point2(args)
    raise ValueError(f"unknown macro {name!r}")
