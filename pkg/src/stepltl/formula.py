"""AST, concrete syntax and step-term algebra for LTL with step quantifiers.

Concrete syntax (ASCII)::

    formula := "true" | "false" | IDENT | "!" formula | "(" formula ")"
             | formula "&" formula | formula "|" formula
             | formula "->" formula | formula "<->" formula
             | "X" formula | "X" "[" term "]" formula
             | formula "U" formula | formula "R" formula
             | "E" IDENT "." formula | "A" IDENT "." formula
    term    := addend ("+" addend)*
    addend  := NAT | NAT "*" IDENT | IDENT

Binding strength, tightest first: ``!``/``X``, ``U``/``R`` (right
associative), ``&``, ``|``, ``->`` (right associative), ``<->``.
Quantifier bodies extend as far right as possible.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping

__all__ = [
    "StepTerm", "normalize_term", "FreshSource", "ParseError", "ScopeError",
    "Formula", "Top", "Bot", "Atom", "NegAtom", "And", "Or", "Next", "StepNext",
    "Until", "Release", "Exists", "Forall", "Not", "Implies", "Iff", "Pred",
    "TRUE", "FALSE", "parse_formula", "parse_term", "render_formula", "render_term",
    "to_pnf", "substitute_term", "free_step_vars", "step_vars", "is_pnf",
    "conj", "disj", "formula_size",
]


def _name_key(name: str):
    # natural order so that _g2 sorts before _g10
    return tuple(int(p) if p.isdigit() else p for p in re.split(r"(\d+)", name))


@dataclass(frozen=True)
class StepTerm:
    """Linear expression ``constant + sum(coeff * var)`` over step variables.

    Always kept canonical: positive coefficients only, variables sorted by
    name.  Build instances with :meth:`of`, :meth:`var` or arithmetic.
    """

    constant: int = 0
    coefficients: tuple[tuple[str, int], ...] = ()

    @classmethod
    def of(cls, constant: int = 0, coefficients: Mapping[str, int] | Iterable = ()) -> StepTerm:
        items = coefficients.items() if isinstance(coefficients, Mapping) else coefficients
        acc: dict[str, int] = {}
        for name, c in items:
            acc[name] = acc.get(name, 0) + c
        if constant < 0 or any(c < 0 for c in acc.values()):
            raise ValueError("step terms are natural-valued; negative parts are not allowed")
        coeffs = tuple(sorted(((n, c) for n, c in acc.items() if c), key=lambda nc: _name_key(nc[0])))
        return cls(constant, coeffs)

    @classmethod
    def var(cls, name: str, coefficient: int = 1) -> StepTerm:
        return cls.of(0, {name: coefficient})

    @classmethod
    def const(cls, n: int) -> StepTerm:
        return cls.of(n)

    @classmethod
    def coerce(cls, value: StepTerm | int | str) -> StepTerm:
        if isinstance(value, StepTerm):
            return value
        if isinstance(value, int):
            return cls.const(value)
        return cls.var(value)

    def __add__(self, other) -> StepTerm:
        other = StepTerm.coerce(other)
        return StepTerm.of(self.constant + other.constant, self.coefficients + other.coefficients)

    __radd__ = __add__

    def __mul__(self, n: int) -> StepTerm:
        if not isinstance(n, int):
            return NotImplemented
        return StepTerm.of(self.constant * n, [(v, c * n) for v, c in self.coefficients])

    __rmul__ = __mul__

    @property
    def variables(self) -> frozenset[str]:
        return frozenset(v for v, _ in self.coefficients)

    def is_constant(self) -> bool:
        return not self.coefficients

    def value(self, valuation: Mapping[str, int]) -> int:
        return self.constant + sum(c * valuation[v] for v, c in self.coefficients)

    def substitute(self, name: str, term: StepTerm) -> StepTerm:
        coeff = dict(self.coefficients).pop(name, 0)
        if not coeff:
            return self
        rest = [(v, c) for v, c in self.coefficients if v != name]
        return StepTerm.of(self.constant, rest) + term * coeff

    def __str__(self) -> str:
        return render_term(self)


def normalize_term(t: StepTerm) -> StepTerm:
    """Canonical form of ``t`` (idempotent)."""
    return StepTerm.of(t.constant, t.coefficients)


class FreshSource:
    """Caller-owned counter producing names ``_g0, _g1, ...``."""

    def __init__(self, counter: int = 0, avoid: Iterable[str] = ()):
        self.counter = counter
        self.avoid = set(avoid)

    def next(self, avoid: Iterable[str] = ()) -> str:
        avoid = self.avoid.union(avoid)
        while True:
            name = f"_g{self.counter}"
            self.counter += 1
            if name not in avoid:
                return name


# --------------------------------------------------------------------------- AST


@dataclass(frozen=True)
class Formula:
    span: tuple[int, int] | None = field(default=None, compare=False, repr=False, kw_only=True)

    def __str__(self) -> str:
        return render_formula(self)


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Bot(Formula):
    pass


@dataclass(frozen=True)
class Atom(Formula):
    prop: str


@dataclass(frozen=True)
class NegAtom(Formula):
    prop: str


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Next(Formula):
    operand: Formula


@dataclass(frozen=True)
class StepNext(Formula):
    term: StepTerm
    operand: Formula


@dataclass(frozen=True)
class Until(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Release(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


# sugar, eliminated by to_pnf


@dataclass(frozen=True)
class Not(Formula):
    operand: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Pred(Formula):
    """Named macro application; ``body`` is its expansion.

    Transparent for semantics and for the default renderer; ``to_pnf``
    unfolds it.
    """

    name: str
    args: tuple[StepTerm, ...]
    body: Formula


TRUE = Top()
FALSE = Bot()

_BINARY = (And, Or, Until, Release, Implies, Iff)
_QUANT = (Exists, Forall)


def conj(*fs: Formula) -> Formula:
    """Left-nested conjunction; ``true`` when empty."""
    if not fs:
        return TRUE
    out = fs[0]
    for f in fs[1:]:
        out = And(out, f)
    return out


def disj(*fs: Formula) -> Formula:
    if not fs:
        return FALSE
    out = fs[0]
    for f in fs[1:]:
        out = Or(out, f)
    return out


def formula_size(f: Formula) -> int:
    if isinstance(f, _BINARY):
        return 1 + formula_size(f.left) + formula_size(f.right)
    if isinstance(f, (Next, StepNext, Not)):
        return 1 + formula_size(f.operand)
    if isinstance(f, _QUANT):
        return 1 + formula_size(f.body)
    if isinstance(f, Pred):
        return formula_size(f.body)
    return 1


# ---------------------------------------------------------------- variables


def free_step_vars(f: Formula) -> frozenset[str]:
    if isinstance(f, StepNext):
        return f.term.variables | free_step_vars(f.operand)
    if isinstance(f, _BINARY):
        return free_step_vars(f.left) | free_step_vars(f.right)
    if isinstance(f, (Next, Not)):
        return free_step_vars(f.operand)
    if isinstance(f, _QUANT):
        return free_step_vars(f.body) - {f.var}
    if isinstance(f, Pred):
        return free_step_vars(f.body)
    return frozenset()


def step_vars(f: Formula) -> frozenset[str]:
    """Every step variable name occurring in ``f``, free or bound."""
    if isinstance(f, StepNext):
        return f.term.variables | step_vars(f.operand)
    if isinstance(f, _BINARY):
        return step_vars(f.left) | step_vars(f.right)
    if isinstance(f, (Next, Not)):
        return step_vars(f.operand)
    if isinstance(f, _QUANT):
        return step_vars(f.body) | {f.var}
    if isinstance(f, Pred):
        return step_vars(f.body).union(*(a.variables for a in f.args))
    return frozenset()


def substitute_term(f: Formula, k: str, t: StepTerm | int | str,
                    fresh: FreshSource | None = None) -> Formula:
    """Replace free occurrences of step variable ``k`` by ``t``.

    Bound variables that would capture a variable of ``t`` are renamed with
    names drawn from ``fresh``.
    """
    t = StepTerm.coerce(t)
    if fresh is None:
        fresh = FreshSource(avoid=step_vars(f) | t.variables | {k})
    return _subst(f, k, t, fresh)


def _subst(f: Formula, k: str, t: StepTerm, fresh: FreshSource) -> Formula:
    if isinstance(f, StepNext):
        return StepNext(f.term.substitute(k, t), _subst(f.operand, k, t, fresh))
    if isinstance(f, _BINARY):
        return type(f)(_subst(f.left, k, t, fresh), _subst(f.right, k, t, fresh))
    if isinstance(f, (Next, Not)):
        return type(f)(_subst(f.operand, k, t, fresh))
    if isinstance(f, _QUANT):
        if f.var == k:
            return f
        var, body = f.var, f.body
        if var in t.variables:
            new = fresh.next(avoid=step_vars(body) | t.variables | {k})
            body = _subst(body, var, StepTerm.var(new), fresh)
            var = new
        return type(f)(var, _subst(body, k, t, fresh))
    if isinstance(f, Pred):
        return Pred(f.name, tuple(a.substitute(k, t) for a in f.args), _subst(f.body, k, t, fresh))
    return f


# ---------------------------------------------------------------------- PNF


def to_pnf(f: Formula) -> Formula:
    """Positive normal form: negation only on atoms, no ->, <-> or macros."""
    return _pnf(f, False)


def _pnf(f: Formula, neg: bool) -> Formula:
    if isinstance(f, Top):
        return FALSE if neg else TRUE
    if isinstance(f, Bot):
        return TRUE if neg else FALSE
    if isinstance(f, Atom):
        return NegAtom(f.prop) if neg else Atom(f.prop)
    if isinstance(f, NegAtom):
        return Atom(f.prop) if neg else NegAtom(f.prop)
    if isinstance(f, Not):
        return _pnf(f.operand, not neg)
    if isinstance(f, And):
        op = Or if neg else And
        return op(_pnf(f.left, neg), _pnf(f.right, neg))
    if isinstance(f, Or):
        op = And if neg else Or
        return op(_pnf(f.left, neg), _pnf(f.right, neg))
    if isinstance(f, Implies):
        if neg:
            return And(_pnf(f.left, False), _pnf(f.right, True))
        return Or(_pnf(f.left, True), _pnf(f.right, False))
    if isinstance(f, Iff):
        if neg:
            return Or(And(_pnf(f.left, False), _pnf(f.right, True)),
                      And(_pnf(f.left, True), _pnf(f.right, False)))
        return Or(And(_pnf(f.left, False), _pnf(f.right, False)),
                  And(_pnf(f.left, True), _pnf(f.right, True)))
    if isinstance(f, Next):
        return Next(_pnf(f.operand, neg))
    if isinstance(f, StepNext):
        return StepNext(f.term, _pnf(f.operand, neg))
    if isinstance(f, Until):
        op = Release if neg else Until
        return op(_pnf(f.left, neg), _pnf(f.right, neg))
    if isinstance(f, Release):
        op = Until if neg else Release
        return op(_pnf(f.left, neg), _pnf(f.right, neg))
    if isinstance(f, Exists):
        return (Forall if neg else Exists)(f.var, _pnf(f.body, neg))
    if isinstance(f, Forall):
        return (Exists if neg else Forall)(f.var, _pnf(f.body, neg))
    if isinstance(f, Pred):
        return _pnf(f.body, neg)
    raise TypeError(f"not a formula: {f!r}")


def is_pnf(f: Formula) -> bool:
    if isinstance(f, (Not, Implies, Iff, Pred)):
        return False
    if isinstance(f, _BINARY):
        return is_pnf(f.left) and is_pnf(f.right)
    if isinstance(f, (Next, StepNext)):
        return is_pnf(f.operand)
    if isinstance(f, _QUANT):
        return is_pnf(f.body)
    return True


# ------------------------------------------------------------------- parser


class ParseError(ValueError):
    def __init__(self, message: str, text: str = "", offset: int = 0):
        self.line = text.count("\n", 0, offset) + 1
        self.column = offset - (text.rfind("\n", 0, offset) + 1) + 1
        self.offset = offset
        super().__init__(f"{message} at line {self.line}, column {self.column}")


class ScopeError(ParseError):
    pass


_TOKEN = re.compile(r"\s*(?:(?P<nat>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
                    r"|(?P<sym><->|->|[!&|()\[\]+*.]))")
KEYWORDS = frozenset({"true", "false", "X", "U", "R", "E", "A"})


def tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        value = m.group(kind)
        start = m.start(kind)
        if kind == "ident" and value in KEYWORDS:
            kind = "kw"
        tokens.append((kind, value, start))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, bound: Iterable[str] | None):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        self.scope: list[str] = []
        self.allowed = None if bound is None else set(bound)

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def at(self, value: str) -> bool:
        kind, v, _ = self.peek()
        return kind in ("sym", "kw") and v == value

    def expect(self, value: str):
        if not self.at(value):
            self.error(f"expected {value!r}")
        return self.advance()

    def error(self, message: str, offset: int | None = None):
        kind, v, pos = self.peek()
        if offset is None:
            offset = pos
            message = f"{message}, found {v!r}" if kind != "eof" else f"{message}, found end of input"
        raise ParseError(message, self.text, offset)

    def parse(self) -> Formula:
        f = self.formula()
        if self.peek()[0] != "eof":
            self.error("unexpected token")
        return f

    def formula(self) -> Formula:
        return self.iff()

    def iff(self) -> Formula:
        start = self.peek()[2]
        left = self.implies()
        while self.at("<->"):
            self.advance()
            left = Iff(left, self.implies(), span=(start, self.peek()[2]))
        return left

    def implies(self) -> Formula:
        start = self.peek()[2]
        left = self.disjunction()
        if self.at("->"):
            self.advance()
            return Implies(left, self.implies(), span=(start, self.peek()[2]))
        return left

    def disjunction(self) -> Formula:
        start = self.peek()[2]
        left = self.conjunction()
        while self.at("|"):
            self.advance()
            left = Or(left, self.conjunction(), span=(start, self.peek()[2]))
        return left

    def conjunction(self) -> Formula:
        start = self.peek()[2]
        left = self.binary_temporal()
        while self.at("&"):
            self.advance()
            left = And(left, self.binary_temporal(), span=(start, self.peek()[2]))
        return left

    def binary_temporal(self) -> Formula:
        start = self.peek()[2]
        left = self.unary()
        for op, cls in (("U", Until), ("R", Release)):
            if self.at(op):
                self.advance()
                return cls(left, self.binary_temporal(), span=(start, self.peek()[2]))
        return left

    def unary(self) -> Formula:
        kind, value, start = self.peek()
        if self.at("!"):
            self.advance()
            if self.peek()[0] == "ident":
                _, name, _ = self.advance()
                return NegAtom(name, span=(start, self.peek()[2]))
            return Not(self.unary(), span=(start, self.peek()[2]))
        if self.at("X"):
            self.advance()
            if self.at("["):
                self.advance()
                term = self.term()
                self.expect("]")
                return StepNext(term, self.unary(), span=(start, self.peek()[2]))
            return Next(self.unary(), span=(start, self.peek()[2]))
        if self.at("E") or self.at("A"):
            self.advance()
            kind, name, _ = self.peek()
            if kind != "ident":
                self.error("expected step variable")
            self.advance()
            self.expect(".")
            self.scope.append(name)
            try:
                body = self.formula()
            finally:
                self.scope.pop()
            cls = Exists if value == "E" else Forall
            return cls(name, body, span=(start, self.peek()[2]))
        if self.at("("):
            self.advance()
            f = self.formula()
            self.expect(")")
            return f
        if self.at("true"):
            self.advance()
            return Top(span=(start, self.peek()[2]))
        if self.at("false"):
            self.advance()
            return Bot(span=(start, self.peek()[2]))
        if kind == "ident":
            self.advance()
            return Atom(value, span=(start, self.peek()[2]))
        self.error("expected a formula")

    def term(self) -> StepTerm:
        total = self.addend()
        while self.at("+"):
            self.advance()
            total = total + self.addend()
        return total

    def addend(self) -> StepTerm:
        kind, value, pos = self.peek()
        if kind == "nat":
            self.advance()
            n = int(value)
            if self.at("*"):
                self.advance()
                kind, name, vpos = self.peek()
                if kind != "ident":
                    self.error("expected step variable after '*' (only constant * variable is allowed)")
                self.advance()
                if self.at("*"):
                    self.error("products of step variables are not allowed")
                return StepTerm.var(self.use(name, vpos), n)
            return StepTerm.const(n)
        if kind == "ident":
            self.advance()
            if self.at("*"):
                self.error("products must be written NAT * IDENT")
            return StepTerm.var(self.use(value, pos))
        self.error("expected a step term")

    def use(self, name: str, pos: int) -> str:
        if self.allowed is not None and name not in self.scope and name not in self.allowed:
            raise ScopeError(f"unbound step variable {name!r}", self.text, pos)
        return name


def parse_formula(text: str, bound: Iterable[str] | None = None) -> Formula:
    """Parse ``text`` into a (possibly sugared) formula.

    If ``bound`` is given, step variables that are neither quantified nor
    listed in ``bound`` raise :class:`ScopeError`; pass ``()`` to require a
    closed formula.
    """
    return _Parser(text, bound).parse()


def parse_term(text: str) -> StepTerm:
    p = _Parser(text, None)
    t = p.term()
    if p.peek()[0] != "eof":
        p.error("unexpected token")
    return t


# ------------------------------------------------------------------- render


def render_term(t: StepTerm) -> str:
    parts = [name if c == 1 else f"{c}*{name}" for name, c in t.coefficients]
    if t.constant or not parts:
        parts.append(str(t.constant))
    return " + ".join(parts)


# loosest first
_LEVEL = {Exists: 0, Forall: 0, Iff: 1, Implies: 2, Or: 3, And: 4, Until: 5, Release: 5}
_UNARY = 6
_SYMBOL = {Iff: "<->", Implies: "->", Or: "|", And: "&", Until: "U", Release: "R"}
_RIGHT_ASSOC = (Implies, Until, Release)


def render_formula(f: Formula, macros: bool = False) -> str:
    """Render ``f`` in the concrete syntax accepted by :func:`parse_formula`.

    With ``macros=True`` named macros print as ``L_eq(a, b)`` instead of
    their expansion (display only; not parseable).
    """
    return _render(f, 0, macros)


def _render(f: Formula, need: int, macros: bool) -> str:
    if isinstance(f, Pred):
        if macros:
            return f"{f.name}({', '.join(render_term(a) for a in f.args)})" if f.args else f.name
        return _render(f.body, need, macros)
    if isinstance(f, _QUANT):
        level = 0
        q = "E" if isinstance(f, Exists) else "A"
        s = f"{q} {f.var}. {_render(f.body, 0, macros)}"
    elif isinstance(f, _BINARY):
        level = _LEVEL[type(f)]
        if isinstance(f, _RIGHT_ASSOC):
            left, right = level + 1, level
        else:
            left, right = level, level + 1
        s = f"{_render(f.left, left, macros)} {_SYMBOL[type(f)]} {_render(f.right, right, macros)}"
    else:
        level = _UNARY
        if isinstance(f, Top):
            s = "true"
        elif isinstance(f, Bot):
            s = "false"
        elif isinstance(f, Atom):
            s = f.prop
        elif isinstance(f, NegAtom):
            s = f"!{f.prop}"
        elif isinstance(f, Not):
            inner = f.operand
            while isinstance(inner, Pred) and not macros:
                inner = inner.body
            if isinstance(inner, Atom):
                s = f"!({inner.prop})"
            else:
                s = "!" + _render(f.operand, _UNARY, macros)
        elif isinstance(f, Next):
            s = "X " + _render(f.operand, _UNARY, macros)
        elif isinstance(f, StepNext):
            s = f"X[{render_term(f.term)}] " + _render(f.operand, _UNARY, macros)
        else:
            raise TypeError(f"not a formula: {f!r}")
    return f"({s})" if level < need else s
