"""First-order formulas over region variables: AST, parser, printer.

Terms denote regions (variables, 0, 1, complement, product, sum); atoms are
inclusion, equality, and convexity. Quantifiers take maximal scope. Macro
calls stay unexpanded in the AST so they print by name; expansion lives in
the macros module.

Concrete syntax: variables are lowercase identifiers; ``E v. f`` and
``A v. f`` quantify; ``!``, ``&``, ``|``, ``->`` connect with decreasing
binding strength; terms use ``-``, ``*``, ``+`` with the usual precedence.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Optional, Union


class FormulaSyntaxError(ValueError):
    """Input text outside the formula grammar, with a position."""

    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} (at position {position})")
        self.position = position


# --- terms -------------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Zero:
    pass


@dataclass(frozen=True)
class One:
    pass


@dataclass(frozen=True)
class Neg:
    operand: "Term"


@dataclass(frozen=True)
class Prod:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Sum:
    left: "Term"
    right: "Term"


Term = Union[Var, Zero, One, Neg, Prod, Sum]

ZERO = Zero()
ONE = One()


# --- formulas ----------------------------------------------------------------


@dataclass(frozen=True)
class Conv:
    term: Term


@dataclass(frozen=True)
class Leq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Not:
    operand: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Macro:
    """A named abbreviation; ``helly`` takes two integers, the rest terms."""

    name: str
    args: tuple

    def __post_init__(self) -> None:
        arity = macro_arity(self.name)
        if arity is None:
            raise FormulaSyntaxError(f"unknown macro {self.name!r}", 0)
        if arity >= 0 and len(self.args) != arity:
            raise FormulaSyntaxError(
                f"macro {self.name!r} takes {arity} arguments, got {len(self.args)}", 0
            )
        if self.name == "helly" and not all(isinstance(a, int) for a in self.args):
            raise FormulaSyntaxError("helly takes integer arguments", 0)


Formula = Union[Conv, Leq, Eq, Not, And, Or, Implies, Exists, Forall, Macro]

_FIXED_MACROS = {
    "line": 2,
    "parallel": 2,
    "fan": 3,
    "prism": 3,
    "corner": 3,
    "frame": 4,
    "coincident2": 3,
    "parallel2": 3,
    "point2": 3,
    "helly": 2,
}

_HS_PATTERN = re.compile(r"hs([1-9]\d*)")

_RESERVED = set(_FIXED_MACROS) | {"conv"}


def macro_arity(name: str) -> Optional[int]:
    if name in _FIXED_MACROS:
        return _FIXED_MACROS[name]
    match = _HS_PATTERN.fullmatch(name)
    if match:
        return int(match.group(1))
    return None


def is_reserved(name: str) -> bool:
    return name in _RESERVED or _HS_PATTERN.fullmatch(name) is not None


def free_variables(f: Formula) -> set[str]:
    if isinstance(f, (Conv,)):
        return _term_vars(f.term)
    if isinstance(f, (Leq, Eq)):
        return _term_vars(f.left) | _term_vars(f.right)
    if isinstance(f, Not):
        return free_variables(f.operand)
    if isinstance(f, (And, Or, Implies)):
        return free_variables(f.left) | free_variables(f.right)
    if isinstance(f, (Exists, Forall)):
        return free_variables(f.body) - {f.var}
    if isinstance(f, Macro):
        out: set[str] = set()
        for arg in f.args:
            if not isinstance(arg, int):
                out |= _term_vars(arg)
        return out
    raise TypeError(f"not a formula node: {f!r}")


def _term_vars(t: Term) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, (Zero, One)):
        return set()
    if isinstance(t, Neg):
        return _term_vars(t.operand)
    if isinstance(t, (Prod, Sum)):
        return _term_vars(t.left) | _term_vars(t.right)
    raise TypeError(f"not a term node: {t!r}")


# --- tokenizer ---------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<arrow>->)|(?P<leq><=)|(?P<sym>[()=,.!&|*+-])"
    r"|(?P<num>\d+)|(?P<quant>[EA])|(?P<name>[a-z][a-z0-9_]*))"
)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    position: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise FormulaSyntaxError(
                f"unexpected character {stripped[0]!r}", len(text) - len(stripped)
            )
        if match.end() == pos and not text[pos:].strip():
            break
        for kind in ("arrow", "leq", "sym", "num", "quant", "name"):
            value = match.group(kind)
            if value is not None:
                tokens.append(_Token(kind, value, match.start(kind)))
                break
        pos = match.end()
        if match.end() == match.start() and text[pos:].strip():
            raise FormulaSyntaxError(f"unexpected input {text[pos:]!r}", pos)
    return tokens


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> Optional[_Token]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> _Token:
        token = self.peek()
        if token is None:
            raise FormulaSyntaxError("unexpected end of input", len(self.text))
        self.pos += 1
        return token

    def expect(self, text: str) -> _Token:
        token = self.next()
        if token.text != text:
            raise FormulaSyntaxError(
                f"expected {text!r}, found {token.text!r}", token.position
            )
        return token

    # formulas, loosest binding first

    def formula(self) -> Formula:
        token = self.peek()
        if token is not None and token.kind == "quant":
            return self.quantifier()
        left = self.disjunction()
        token = self.peek()
        if token is not None and token.kind == "arrow":
            self.next()
            return Implies(left, self.formula())
        return left

    def quantifier(self) -> Formula:
        token = self.next()
        var = self.next()
        if var.kind != "name" or is_reserved(var.text):
            raise FormulaSyntaxError("expected a variable name", var.position)
        self.expect(".")
        body = self.formula()
        return Exists(var.text, body) if token.text == "E" else Forall(var.text, body)

    def disjunction(self) -> Formula:
        node = self.conjunction()
        while (token := self.peek()) is not None and token.text == "|":
            self.next()
            node = Or(node, self.conjunction())
        return node

    def conjunction(self) -> Formula:
        node = self.negation()
        while (token := self.peek()) is not None and token.text == "&":
            self.next()
            node = And(node, self.negation())
        return node

    def negation(self) -> Formula:
        token = self.peek()
        if token is not None and token.text == "!":
            self.next()
            return Not(self.negation())
        if token is not None and token.kind == "quant":
            return self.quantifier()
        return self.primary()

    def primary(self) -> Formula:
        token = self.peek()
        if token is None:
            raise FormulaSyntaxError("unexpected end of input", len(self.text))
        if token.kind == "name" and token.text == "conv":
            self.next()
            self.expect("(")
            term = self.term()
            self.expect(")")
            return Conv(term)
        if token.kind == "name" and macro_arity(token.text) is not None:
            return self.macro()
        saved = self.pos
        try:
            left = self.term()
            comparator = self.peek()
            if comparator is not None and comparator.text in ("<=", "="):
                self.next()
                right = self.term()
                return Leq(left, right) if comparator.text == "<=" else Eq(left, right)
            raise FormulaSyntaxError("expected a comparison", token.position)
        except FormulaSyntaxError:
            self.pos = saved
        if token.text == "(":
            self.next()
            inner = self.formula()
            self.expect(")")
            return inner
        raise FormulaSyntaxError(f"cannot parse {token.text!r} here", token.position)

    def macro(self) -> Formula:
        name = self.next().text
        self.expect("(")
        args: list = []
        if name == "helly":
            for index in range(2):
                if index:
                    self.expect(",")
                number = self.next()
                if number.kind != "num":
                    raise FormulaSyntaxError(
                        "helly takes integer arguments", number.position
                    )
                args.append(int(number.text))
        else:
            arity = macro_arity(name)
            for index in range(arity):
                if index:
                    self.expect(",")
                args.append(self.term())
        self.expect(")")
        return Macro(name, tuple(args))

    # terms

    def term(self) -> Term:
        node = self.term_product()
        while (token := self.peek()) is not None and token.text == "+":
            self.next()
            node = Sum(node, self.term_product())
        return node

    def term_product(self) -> Term:
        node = self.term_unary()
        while (token := self.peek()) is not None and token.text == "*":
            self.next()
            node = Prod(node, self.term_unary())
        return node

    def term_unary(self) -> Term:
        token = self.peek()
        if token is not None and token.text == "-":
            self.next()
            return Neg(self.term_unary())
        return self.term_primary()

    def term_primary(self) -> Term:
        token = self.next()
        if token.kind == "num":
            if token.text == "0":
                return ZERO
            if token.text == "1":
                return ONE
            raise FormulaSyntaxError(
                f"only 0 and 1 are term constants, found {token.text!r}",
                token.position,
            )
        if token.kind == "name":
            if is_reserved(token.text):
                raise FormulaSyntaxError(
                    f"{token.text!r} is reserved and not a variable", token.position
                )
            return Var(token.text)
        if token.text == "(":
            node = self.term()
            self.expect(")")
            return node
        raise FormulaSyntaxError(f"cannot parse term at {token.text!r}", token.position)


def parse(text: str) -> Formula:
    """Parse one formula; raises FormulaSyntaxError with a position."""
    parser = _Parser(text)
    node = parser.formula()
    leftover = parser.peek()
    if leftover is not None:
        raise FormulaSyntaxError(
            f"trailing input {leftover.text!r}", leftover.position
        )
    return node


# --- printer -----------------------------------------------------------------

_TERM_SUM, _TERM_PROD, _TERM_NEG, _TERM_ATOM = 1, 2, 3, 4


def _print_term(t: Term, level: int) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Zero):
        return "0"
    if isinstance(t, One):
        return "1"
    if isinstance(t, Neg):
        return "-" + _print_term(t.operand, _TERM_NEG)
    if isinstance(t, Prod):
        text = f"{_print_term(t.left, _TERM_PROD)} * {_print_term(t.right, _TERM_PROD + 1)}"
        return f"({text})" if level > _TERM_PROD else text
    if isinstance(t, Sum):
        text = f"{_print_term(t.left, _TERM_SUM)} + {_print_term(t.right, _TERM_SUM + 1)}"
        return f"({text})" if level > _TERM_SUM else text
    raise TypeError(f"not a term node: {t!r}")


_F_IMPLIES, _F_OR, _F_AND, _F_NOT = 1, 2, 3, 4


def _print_formula(f: Formula, level: int) -> str:
    if isinstance(f, Conv):
        return f"conv({_print_term(f.term, _TERM_SUM)})"
    if isinstance(f, Leq):
        return f"{_print_term(f.left, _TERM_SUM)} <= {_print_term(f.right, _TERM_SUM)}"
    if isinstance(f, Eq):
        return f"{_print_term(f.left, _TERM_SUM)} = {_print_term(f.right, _TERM_SUM)}"
    if isinstance(f, Not):
        return f"!({_print_formula(f.operand, 0)})"
    if isinstance(f, And):
        text = f"{_print_formula(f.left, _F_AND)} & {_print_formula(f.right, _F_AND + 1)}"
        return f"({text})" if level > _F_AND else text
    if isinstance(f, Or):
        text = f"{_print_formula(f.left, _F_OR)} | {_print_formula(f.right, _F_OR + 1)}"
        return f"({text})" if level > _F_OR else text
    if isinstance(f, Implies):
        text = f"{_print_formula(f.left, _F_OR)} -> {_print_formula(f.right, _F_IMPLIES)}"
        return f"({text})" if level > _F_IMPLIES else text
    if isinstance(f, (Exists, Forall)):
        quant = "E" if isinstance(f, Exists) else "A"
        text = f"{quant} {f.var}. {_print_formula(f.body, _F_IMPLIES)}"
        return f"({text})" if level > _F_IMPLIES else text
    if isinstance(f, Macro):
        rendered = [
            str(a) if isinstance(a, int) else _print_term(a, _TERM_SUM)
            for a in f.args
        ]
        return f"{f.name}({', '.join(rendered)})"
    raise TypeError(f"not a formula node: {f!r}")


def print_formula(f: Formula) -> str:
    """Canonical text; parsing it reproduces the same AST."""
    return _print_formula(f, 0)
