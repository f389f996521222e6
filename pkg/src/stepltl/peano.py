"""Translation of first-order arithmetic (+, *, <) into the core fragment.

Pipeline: parse -> flatten composite terms into relational atoms over
variables -> replace each relation by its step-LTL template -> PNF.

The templates, with ``p``/``q`` fixed propositions::

    L_p            = A k1. A k2. !A k3. (X[k1+k3] p <-> X[k1+k2+k3+1] p)
    L_eq(a, b)     = L_p & A k. (X[a+k] p <-> X[b+k] p)
    L_lt(a, b)     = E k. L_eq(a+k+1, b)
    L_plus(a,b,c)  = L_eq(a+b, c)
    L_q            = q & X q & (A k1. E k2. X[k1+k2] q)
                     & A k1. A k2. A k3. (X[k1] q & X[k2] q & X[k3] q
                         & L_lt(k1,k2) & L_lt(k2,k3)
                         & A k4. (L_lt(k1,k4) & L_lt(k4,k2) | L_lt(k2,k4) & L_lt(k4,k3) -> !X[k4] q)
                         -> E k5. E k6. (L_plus(k5,k1,k2) & L_plus(k6,k2,k3) & L_plus(2,k5,k6)))
    L_sq(a, b)     = L_q & X[b] q & X[b+2a+1] q
                     & !E k3. (L_lt(b,k3) & L_lt(k3, 2a+b+1) & X[k3] q)
    L_times(a,b,c) = E k4. E k5. E k6. (L_sq(a,k4) & L_sq(b,k5) & L_sq(a+b,k6)
                                        & L_eq(k4+k5+2c, k6))

Bound variables are drawn from a :class:`FreshSource`; each template takes
its own binders first (in order of appearance), then builds nested
templates left to right.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from . import formula as fm
from .formula import FreshSource, ParseError, StepTerm

__all__ = [
    "Var", "Const", "Plus", "Times", "Eq", "Lt", "Not", "And", "Or", "Implies", "Iff",
    "Exists", "Forall", "EqV", "LtV", "PlusV", "TimesV", "ConstV",
    "parse_peano", "render_peano", "flatten", "build_predicate", "translate", "PREDICATES",
    "peano_vars",
]


# -------------------------------------------------------------------- terms


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    value: int


@dataclass(frozen=True)
class Plus:
    left: object
    right: object


@dataclass(frozen=True)
class Times:
    left: object
    right: object


# ----------------------------------------------------------------- formulas


@dataclass(frozen=True)
class Eq:
    left: object
    right: object


@dataclass(frozen=True)
class Lt:
    left: object
    right: object


@dataclass(frozen=True)
class Not:
    operand: object


@dataclass(frozen=True)
class And:
    left: object
    right: object


@dataclass(frozen=True)
class Or:
    left: object
    right: object


@dataclass(frozen=True)
class Implies:
    left: object
    right: object


@dataclass(frozen=True)
class Iff:
    left: object
    right: object


@dataclass(frozen=True)
class Exists:
    var: str
    body: object


@dataclass(frozen=True)
class Forall:
    var: str
    body: object


# primitive relational atoms over variables


@dataclass(frozen=True)
class EqV:
    a: str
    b: str


@dataclass(frozen=True)
class LtV:
    a: str
    b: str


@dataclass(frozen=True)
class PlusV:
    a: str
    b: str
    c: str


@dataclass(frozen=True)
class TimesV:
    a: str
    b: str
    c: str


@dataclass(frozen=True)
class ConstV:
    a: str
    n: int


_PRIMITIVES = (EqV, LtV, PlusV, TimesV, ConstV)


# ------------------------------------------------------------------- parser

_TOKEN = re.compile(r"\s*(?:(?P<nat>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
                    r"|(?P<sym><->|->|[!&|()+*=<.]))")
_KEYWORDS = {"exists", "forall", "true", "false"}


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = []
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
            if kind == "ident" and value in _KEYWORDS:
                kind = "kw"
            elif kind == "ident" and value in fm.KEYWORDS:
                raise ParseError(f"{value!r} is reserved in step formulas", text, start)
            self.tokens.append((kind, value, start))
            pos = m.end()
        self.tokens.append(("eof", "", len(text)))
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def at(self, value):
        kind, v, _ = self.peek()
        return kind in ("sym", "kw") and v == value

    def expect(self, value):
        if not self.at(value):
            self.error(f"expected {value!r}")
        self.i += 1

    def error(self, message):
        kind, v, pos = self.peek()
        found = "end of input" if kind == "eof" else repr(v)
        raise ParseError(f"{message}, found {found}", self.text, pos)

    def parse(self):
        f = self.iff()
        if self.peek()[0] != "eof":
            self.error("unexpected token")
        return f

    def iff(self):
        left = self.implies()
        while self.at("<->"):
            self.i += 1
            left = Iff(left, self.implies())
        return left

    def implies(self):
        left = self.disj()
        if self.at("->"):
            self.i += 1
            return Implies(left, self.implies())
        return left

    def disj(self):
        left = self.conj()
        while self.at("|"):
            self.i += 1
            left = Or(left, self.conj())
        return left

    def conj(self):
        left = self.unary()
        while self.at("&"):
            self.i += 1
            left = And(left, self.unary())
        return left

    def unary(self):
        if self.at("!"):
            self.i += 1
            return Not(self.unary())
        if self.at("exists") or self.at("forall"):
            q = self.peek()[1]
            self.i += 1
            kind, name, _ = self.peek()
            if kind != "ident":
                self.error("expected variable")
            self.i += 1
            self.expect(".")
            body = self.iff()
            return Exists(name, body) if q == "exists" else Forall(name, body)
        if self.at("true"):
            self.i += 1
            return Eq(Const(0), Const(0))
        if self.at("false"):
            self.i += 1
            return Lt(Const(0), Const(0))
        if self.at("("):
            # '(' opens either a formula or a term; try the atom reading first
            save = self.i
            try:
                return self.atom()
            except ParseError:
                self.i = save
            self.i += 1
            f = self.iff()
            self.expect(")")
            return f
        return self.atom()

    def atom(self):
        left = self.term()
        if self.at("="):
            self.i += 1
            return Eq(left, self.term())
        if self.at("<"):
            self.i += 1
            return Lt(left, self.term())
        self.error("expected '=' or '<'")

    def term(self):
        left = self.product()
        while self.at("+"):
            self.i += 1
            left = Plus(left, self.product())
        return left

    def product(self):
        left = self.factor()
        while self.at("*"):
            self.i += 1
            left = Times(left, self.factor())
        return left

    def factor(self):
        kind, value, _ = self.peek()
        if kind == "nat":
            self.i += 1
            return Const(int(value))
        if kind == "ident":
            self.i += 1
            return Var(value)
        if self.at("("):
            self.i += 1
            t = self.term()
            self.expect(")")
            return t
        self.error("expected a term")


def parse_peano(text: str):
    """Parse an arithmetic formula (``exists x. forall y. x < y + 1`` ...)."""
    return _Parser(text).parse()


def _render_term(t) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Const):
        return str(t.value)
    # both operators associate to the left, so a right operand of equal or
    # looser precedence needs parentheses
    if isinstance(t, Plus):
        right = _render_term(t.right)
        if isinstance(t.right, Plus):
            right = f"({right})"
        return f"{_render_term(t.left)} + {right}"
    if isinstance(t, Times):
        left, right = _render_term(t.left), _render_term(t.right)
        if isinstance(t.left, Plus):
            left = f"({left})"
        if isinstance(t.right, (Plus, Times)):
            right = f"({right})"
        return f"{left} * {right}"
    raise TypeError(t)


def render_peano(f, nested: bool = False) -> str:
    """Fully parenthesized rendering (also used for flattened formulas)."""
    if isinstance(f, Eq):
        return f"{_render_term(f.left)} = {_render_term(f.right)}"
    if isinstance(f, Lt):
        return f"{_render_term(f.left)} < {_render_term(f.right)}"
    if isinstance(f, Not):
        return f"!({render_peano(f.operand)})"
    for cls, sym in ((And, "&"), (Or, "|"), (Implies, "->"), (Iff, "<->")):
        if isinstance(f, cls):
            return f"({render_peano(f.left, True)} {sym} {render_peano(f.right, True)})"
    if isinstance(f, (Exists, Forall)):
        q = "exists" if isinstance(f, Exists) else "forall"
        text = f"{q} {f.var}. {render_peano(f.body)}"
        return f"({text})" if nested else text
    if isinstance(f, EqV):
        return f"EqV({f.a}, {f.b})"
    if isinstance(f, LtV):
        return f"LtV({f.a}, {f.b})"
    if isinstance(f, PlusV):
        return f"PlusV({f.a}, {f.b}, {f.c})"
    if isinstance(f, TimesV):
        return f"TimesV({f.a}, {f.b}, {f.c})"
    if isinstance(f, ConstV):
        return f"ConstV({f.a}, {f.n})"
    raise TypeError(f)


def peano_vars(f) -> set[str]:
    """All variable names (free or bound) in a Peano formula or term."""
    if isinstance(f, Var):
        return {f.name}
    if isinstance(f, Const):
        return set()
    if isinstance(f, (Exists, Forall)):
        return {f.var} | peano_vars(f.body)
    if isinstance(f, Not):
        return peano_vars(f.operand)
    if isinstance(f, (EqV, LtV)):
        return {f.a, f.b}
    if isinstance(f, (PlusV, TimesV)):
        return {f.a, f.b, f.c}
    if isinstance(f, ConstV):
        return {f.a}
    return peano_vars(f.left) | peano_vars(f.right)


# ------------------------------------------------------------------ flatten


def _conj(parts):
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def _disj(parts):
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def _name(t, fresh: FreshSource, defs: list, names: list) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Const):
        g = fresh.next()
        names.append(g)
        defs.append(ConstV(g, t.value))
        return g
    a = _name(t.left, fresh, defs, names)
    b = _name(t.right, fresh, defs, names)
    g = fresh.next()
    names.append(g)
    defs.append((PlusV if isinstance(t, Plus) else TimesV)(a, b, g))
    return g


def flatten(f, fresh: FreshSource | None = None):
    """Rewrite into negation normal form over primitive relational atoms.

    A positive atom with composite terms becomes ``E g... (defs & rel)``; a
    negated one becomes ``A g... (!defs | !rel)``, so every introduced
    variable is pinned by its definitions in both polarities.
    """
    if fresh is None:
        fresh = FreshSource(avoid=peano_vars(f))
    return _flat(f, False, fresh)


def _flat(f, neg: bool, fresh: FreshSource):
    if isinstance(f, (Eq, Lt)):
        defs: list = []
        names: list = []
        a = _name(f.left, fresh, defs, names)
        b = _name(f.right, fresh, defs, names)
        rel = EqV(a, b) if isinstance(f, Eq) else LtV(a, b)
        if neg:
            body = _disj([Not(d) for d in defs] + [Not(rel)])
            wrap = Forall
        else:
            body = _conj(defs + [rel])
            wrap = Exists
        for g in reversed(names):
            body = wrap(g, body)
        return body
    if isinstance(f, Not):
        return _flat(f.operand, not neg, fresh)
    if isinstance(f, And):
        op = Or if neg else And
        return op(_flat(f.left, neg, fresh), _flat(f.right, neg, fresh))
    if isinstance(f, Or):
        op = And if neg else Or
        return op(_flat(f.left, neg, fresh), _flat(f.right, neg, fresh))
    if isinstance(f, Implies):
        return _flat(Or(Not(f.left), f.right), neg, fresh)
    if isinstance(f, Iff):
        both = And(f.left, f.right)
        neither = And(Not(f.left), Not(f.right))
        return _flat(Or(both, neither), neg, fresh)
    if isinstance(f, Exists):
        return (Forall if neg else Exists)(f.var, _flat(f.body, neg, fresh))
    if isinstance(f, Forall):
        return (Exists if neg else Forall)(f.var, _flat(f.body, neg, fresh))
    raise TypeError(f"not a Peano formula: {f!r}")


# ---------------------------------------------------------------- templates

PREDICATES = {"L_p": 0, "L_eq": 2, "L_lt": 2, "L_plus": 3, "L_q": 0, "L_sq": 2, "L_times": 3}

_P = fm.Atom("p")
_Q = fm.Atom("q")


def _x(term: StepTerm, f: fm.Formula) -> fm.Formula:
    return fm.StepNext(term, f)


class _Templates:
    def __init__(self, fresh: FreshSource, hoist: bool):
        self.fresh = fresh
        self.hoist = hoist

    def var(self) -> tuple[str, StepTerm]:
        name = self.fresh.next()
        return name, StepTerm.var(name)

    def L_p(self):
        n1, k1 = self.var()
        n2, k2 = self.var()
        n3, k3 = self.var()
        inner = fm.Iff(_x(k1 + k3, _P), _x(k1 + k2 + k3 + 1, _P))
        body = fm.Forall(n1, fm.Forall(n2, fm.Not(fm.Forall(n3, inner))))
        return fm.Pred("L_p", (), body)

    def L_eq(self, a, b):
        n, k = self.var()
        shift = fm.Forall(n, fm.Iff(_x(a + k, _P), _x(b + k, _P)))
        body = shift if self.hoist else fm.And(self.L_p(), shift)
        return fm.Pred("L_eq", (a, b), body)

    def L_lt(self, a, b):
        n, k = self.var()
        return fm.Pred("L_lt", (a, b), fm.Exists(n, self.L_eq(a + k + 1, b)))

    def L_plus(self, a, b, c):
        return fm.Pred("L_plus", (a, b, c), self.L_eq(a + b, c))

    def L_q(self):
        m1, j1 = self.var()
        m2, j2 = self.var()
        names, ks = zip(*(self.var() for _ in range(6)))
        k1, k2, k3, k4, k5, k6 = ks
        lt = self.L_lt
        antecedent = fm.conj(
            _x(k1, _Q), _x(k2, _Q), _x(k3, _Q), lt(k1, k2), lt(k2, k3),
            fm.Forall(names[3], fm.Implies(
                fm.Or(fm.And(lt(k1, k4), lt(k4, k2)), fm.And(lt(k2, k4), lt(k4, k3))),
                fm.Not(_x(k4, _Q)))),
        )
        consequent = fm.Exists(names[4], fm.Exists(names[5], fm.conj(
            self.L_plus(k5, k1, k2), self.L_plus(k6, k2, k3),
            self.L_plus(StepTerm.const(2), k5, k6))))
        spacing = fm.Forall(names[0], fm.Forall(names[1], fm.Forall(names[2],
                            fm.Implies(antecedent, consequent))))
        body = fm.conj(_Q, fm.Next(_Q), fm.Forall(m1, fm.Exists(m2, _x(j1 + j2, _Q))), spacing)
        return fm.Pred("L_q", (), body)

    def L_sq(self, a, b):
        n3, k3 = self.var()
        nxt = b + 2 * a + 1
        gap = fm.Not(fm.Exists(n3, fm.conj(self.L_lt(b, k3), self.L_lt(k3, nxt), _x(k3, _Q))))
        parts = [_x(b, _Q), _x(nxt, _Q), gap]
        if not self.hoist:
            parts.insert(0, self.L_q())
        return fm.Pred("L_sq", (a, b), fm.conj(*parts))

    def L_times(self, a, b, c):
        n4, k4 = self.var()
        n5, k5 = self.var()
        n6, k6 = self.var()
        body = fm.conj(self.L_sq(a, k4), self.L_sq(b, k5), self.L_sq(a + b, k6),
                       self.L_eq(k4 + k5 + 2 * c, k6))
        return fm.Pred("L_times", (a, b, c), fm.Exists(n4, fm.Exists(n5, fm.Exists(n6, body))))


def build_predicate(which: str, args: Sequence[StepTerm | int | str] = (),
                    fresh: FreshSource | None = None, hoist: bool = False) -> fm.Pred:
    """Instantiate one of the relational templates.

    ``args`` may mix step terms, variable names and natural constants.  With
    ``hoist=True`` the embedded ``L_p``/``L_q`` conjuncts are left out (the
    caller asserts them once elsewhere).
    """
    if which not in PREDICATES:
        raise ValueError(f"unknown predicate {which!r}; expected one of {sorted(PREDICATES)}")
    if len(args) != PREDICATES[which]:
        raise ValueError(f"{which} takes {PREDICATES[which]} arguments, got {len(args)}")
    terms = [StepTerm.coerce(a) for a in args]
    if fresh is None:
        fresh = FreshSource()
    used = set().union(*(t.variables for t in terms)) if terms else set()
    fresh.avoid |= used
    return getattr(_Templates(fresh, hoist), which)(*terms)


# ---------------------------------------------------------------- translate


def translate(f, hoist: bool = False, fresh: FreshSource | None = None,
              keep_macros: bool = False) -> fm.Formula:
    """Core-fragment formula equisatisfiable (on template-respecting words) with ``f``.

    The result is in PNF unless ``keep_macros`` is set, in which case the
    sugared tree with named templates is returned (useful for display).
    With ``hoist=True``, ``L_p`` and ``L_q`` are asserted once at the top
    instead of inside every relation.
    """
    if fresh is None:
        fresh = FreshSource(avoid=peano_vars(f))
    flat = flatten(f, fresh)
    templates = _Templates(fresh, hoist)
    uses = set()
    body = _map(flat, templates, uses)
    if hoist:
        glob = []
        if uses:
            glob.append(templates.L_p())
        if TimesV in uses:
            glob.append(templates.L_q())
        body = fm.conj(*glob, body)
    return body if keep_macros else fm.to_pnf(body)


def _map(f, t: _Templates, uses: set) -> fm.Formula:
    v = StepTerm.var
    if isinstance(f, _PRIMITIVES):
        uses.add(type(f))
    if isinstance(f, EqV):
        return t.L_eq(v(f.a), v(f.b))
    if isinstance(f, LtV):
        return t.L_lt(v(f.a), v(f.b))
    if isinstance(f, PlusV):
        return t.L_plus(v(f.a), v(f.b), v(f.c))
    if isinstance(f, TimesV):
        return t.L_times(v(f.a), v(f.b), v(f.c))
    if isinstance(f, ConstV):
        return t.L_eq(v(f.a), StepTerm.const(f.n))
    if isinstance(f, Not):
        return fm.Not(_map(f.operand, t, uses))
    if isinstance(f, And):
        return fm.And(_map(f.left, t, uses), _map(f.right, t, uses))
    if isinstance(f, Or):
        return fm.Or(_map(f.left, t, uses), _map(f.right, t, uses))
    if isinstance(f, Exists):
        return fm.Exists(f.var, _map(f.body, t, uses))
    if isinstance(f, Forall):
        return fm.Forall(f.var, _map(f.body, t, uses))
    raise TypeError(f"not a flattened formula: {f!r}")
