"""Linear integer arithmetic with divisibility atoms and Cooper elimination.

Variables range over the integers.  Producers that need naturals add the
``x >= 0`` guards themselves.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Mapping

__all__ = [
    "PATerm", "PAFormula", "TrueC", "FalseC", "Leq", "Eq", "Divides", "PNot", "PAnd", "POr",
    "PExists", "PForall", "TRUE_C", "FALSE_C", "pa_and", "pa_or", "pa_not", "le", "lt", "ge", "eq",
    "evaluate_pa", "eliminate_var", "decide_sentence", "quantifier_free", "pa_free_vars",
    "nnf", "simplify", "to_smtlib", "pa_size", "UnassignedVariable", "NotClosed",
]


class UnassignedVariable(ValueError):
    pass


class NotClosed(ValueError):
    pass


@dataclass(frozen=True, slots=True)
class PATerm:
    """``constant + sum(c * v)``; coefficients nonzero and sorted by name."""

    constant: int = 0
    coefficients: tuple[tuple[str, int], ...] = ()

    @staticmethod
    def of(constant: int = 0, coefficients: Mapping[str, int] | Iterable = ()) -> PATerm:
        items = coefficients.items() if isinstance(coefficients, Mapping) else coefficients
        acc: dict[str, int] = {}
        for v, c in items:
            acc[v] = acc.get(v, 0) + c
        return PATerm(constant, tuple(sorted((v, c) for v, c in acc.items() if c)))

    @staticmethod
    def var(name: str, c: int = 1) -> PATerm:
        return PATerm(0, ((name, c),)) if c else PATerm(0)

    @staticmethod
    def coerce(value) -> PATerm:
        if isinstance(value, PATerm):
            return value
        if isinstance(value, int):
            return PATerm(value)
        if isinstance(value, str):
            return PATerm.var(value)
        raise TypeError(f"cannot make a term from {value!r}")

    def __add__(self, other) -> PATerm:
        other = PATerm.coerce(other)
        if not other.coefficients:
            return PATerm(self.constant + other.constant, self.coefficients)
        return PATerm.of(self.constant + other.constant, self.coefficients + other.coefficients)

    __radd__ = __add__

    def __neg__(self) -> PATerm:
        return PATerm(-self.constant, tuple((v, -c) for v, c in self.coefficients))

    def __sub__(self, other) -> PATerm:
        return self + (-PATerm.coerce(other))

    def __rsub__(self, other) -> PATerm:
        return PATerm.coerce(other) - self

    def __mul__(self, n: int) -> PATerm:
        if not isinstance(n, int):
            return NotImplemented
        if n == 0:
            return PATerm(0)
        return PATerm(self.constant * n, tuple((v, c * n) for v, c in self.coefficients))

    __rmul__ = __mul__

    def coeff(self, name: str) -> int:
        for v, c in self.coefficients:
            if v == name:
                return c
        return 0

    def drop(self, name: str) -> PATerm:
        return PATerm(self.constant, tuple((v, c) for v, c in self.coefficients if v != name))

    def substitute(self, name: str, term: PATerm) -> PATerm:
        c = self.coeff(name)
        if not c:
            return self
        return self.drop(name) + term * c

    @property
    def variables(self) -> frozenset[str]:
        return frozenset(v for v, _ in self.coefficients)

    def value(self, env: Mapping[str, int]) -> int:
        total = self.constant
        for v, c in self.coefficients:
            try:
                total += c * env[v]
            except KeyError:
                raise UnassignedVariable(f"no value for variable {v!r}") from None
        return total

    def __str__(self) -> str:
        parts = []
        for v, c in self.coefficients:
            parts.append(v if c == 1 else f"-{v}" if c == -1 else f"{c}*{v}")
        if self.constant or not parts:
            parts.append(str(self.constant))
        return " + ".join(parts).replace("+ -", "- ")


class PAFormula:
    __slots__ = ()

    def __str__(self) -> str:
        return _show(self)


@dataclass(frozen=True, slots=True)
class TrueC(PAFormula):
    pass


@dataclass(frozen=True, slots=True)
class FalseC(PAFormula):
    pass


@dataclass(frozen=True, slots=True)
class Leq(PAFormula):
    lhs: PATerm
    rhs: PATerm


@dataclass(frozen=True, slots=True)
class Eq(PAFormula):
    lhs: PATerm
    rhs: PATerm


@dataclass(frozen=True, slots=True)
class Divides(PAFormula):
    modulus: int
    term: PATerm

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("divisibility modulus must be >= 1")


@dataclass(frozen=True, slots=True)
class PNot(PAFormula):
    operand: PAFormula


@dataclass(frozen=True, slots=True)
class PAnd(PAFormula):
    args: tuple[PAFormula, ...]


@dataclass(frozen=True, slots=True)
class POr(PAFormula):
    args: tuple[PAFormula, ...]


@dataclass(frozen=True, slots=True)
class PExists(PAFormula):
    var: str
    body: PAFormula


@dataclass(frozen=True, slots=True)
class PForall(PAFormula):
    var: str
    body: PAFormula


TRUE_C = TrueC()
FALSE_C = FalseC()
_ZERO = PATerm(0)


# -------------------------------------------------------------- constructors


def pa_and(*args: PAFormula) -> PAFormula:
    out = []
    for a in args:
        if isinstance(a, FalseC):
            return FALSE_C
        if isinstance(a, TrueC):
            continue
        out.extend(a.args if isinstance(a, PAnd) else (a,))
    if not out:
        return TRUE_C
    return out[0] if len(out) == 1 else PAnd(tuple(out))


def pa_or(*args: PAFormula) -> PAFormula:
    out = []
    for a in args:
        if isinstance(a, TrueC):
            return TRUE_C
        if isinstance(a, FalseC):
            continue
        out.extend(a.args if isinstance(a, POr) else (a,))
    if not out:
        return FALSE_C
    return out[0] if len(out) == 1 else POr(tuple(out))


def pa_not(f: PAFormula) -> PAFormula:
    if isinstance(f, TrueC):
        return FALSE_C
    if isinstance(f, FalseC):
        return TRUE_C
    if isinstance(f, PNot):
        return f.operand
    return PNot(f)


def le(a, b) -> PAFormula:
    return Leq(PATerm.coerce(a), PATerm.coerce(b))


def lt(a, b) -> PAFormula:
    return Leq(PATerm.coerce(a) + 1, PATerm.coerce(b))


def ge(a, b) -> PAFormula:
    return Leq(PATerm.coerce(b), PATerm.coerce(a))


def eq(a, b) -> PAFormula:
    return Eq(PATerm.coerce(a), PATerm.coerce(b))


# ---------------------------------------------------------------- inspection


def pa_free_vars(f: PAFormula) -> frozenset[str]:
    if isinstance(f, (Leq, Eq)):
        return f.lhs.variables | f.rhs.variables
    if isinstance(f, Divides):
        return f.term.variables
    if isinstance(f, PNot):
        return pa_free_vars(f.operand)
    if isinstance(f, (PAnd, POr)):
        return frozenset().union(*(pa_free_vars(a) for a in f.args))
    if isinstance(f, (PExists, PForall)):
        return pa_free_vars(f.body) - {f.var}
    return frozenset()


def quantifier_free(f: PAFormula) -> bool:
    if isinstance(f, (PExists, PForall)):
        return False
    if isinstance(f, PNot):
        return quantifier_free(f.operand)
    if isinstance(f, (PAnd, POr)):
        return all(quantifier_free(a) for a in f.args)
    return True


def pa_size(f: PAFormula) -> int:
    if isinstance(f, PNot):
        return 1 + pa_size(f.operand)
    if isinstance(f, (PAnd, POr)):
        return 1 + sum(pa_size(a) for a in f.args)
    if isinstance(f, (PExists, PForall)):
        return 1 + pa_size(f.body)
    return 1


# ---------------------------------------------------------------- evaluation


def evaluate_pa(f: PAFormula, assignment: Mapping[str, int],
                domain: Iterable[int] | None = None) -> bool:
    """Truth of ``f`` under ``assignment``.

    Quantifiers are only allowed when ``domain`` is supplied; they are then
    evaluated by brute force over that finite range (oracle mode).
    """
    dom = None if domain is None else tuple(domain)
    return _ev(f, dict(assignment), dom)


def _ev(f: PAFormula, env: dict, dom) -> bool:
    if isinstance(f, Leq):
        return f.lhs.value(env) <= f.rhs.value(env)
    if isinstance(f, Divides):
        return f.term.value(env) % f.modulus == 0
    if isinstance(f, PAnd):
        return all(_ev(a, env, dom) for a in f.args)
    if isinstance(f, POr):
        return any(_ev(a, env, dom) for a in f.args)
    if isinstance(f, PNot):
        return not _ev(f.operand, env, dom)
    if isinstance(f, Eq):
        return f.lhs.value(env) == f.rhs.value(env)
    if isinstance(f, TrueC):
        return True
    if isinstance(f, FalseC):
        return False
    if isinstance(f, (PExists, PForall)):
        if dom is None:
            raise ValueError("quantified formula needs an oracle domain")
        saved = env.get(f.var, _MISSING)
        test = any if isinstance(f, PExists) else all
        try:
            return test(_ev(f.body, {**env, f.var: n}, dom) for n in dom)
        finally:
            if saved is not _MISSING:
                env[f.var] = saved
    raise TypeError(f"not a Presburger formula: {f!r}")


_MISSING = object()


# ------------------------------------------------------------- normalization


def _le0(t: PATerm) -> PAFormula:
    """Canonical literal for ``t <= 0``."""
    if not t.coefficients:
        return TRUE_C if t.constant <= 0 else FALSE_C
    g = 0
    for _, c in t.coefficients:
        g = math.gcd(g, c)
    if g > 1:
        t = PATerm(-((-t.constant) // g), tuple((v, c // g) for v, c in t.coefficients))
    return Leq(t, _ZERO)


def _div(d: int, t: PATerm) -> PAFormula:
    """Canonical literal for ``d | t``."""
    if d == 1:
        return TRUE_C
    coeffs = []
    for v, c in t.coefficients:
        c %= d
        if c > d // 2:
            c -= d
        if c:
            coeffs.append((v, c))
    if coeffs and coeffs[0][1] < 0:
        coeffs = [(v, -c) for v, c in coeffs]
        const = (-t.constant) % d
    else:
        const = t.constant % d
    if not coeffs:
        return TRUE_C if const == 0 else FALSE_C
    g = d
    for _, c in coeffs:
        g = math.gcd(g, c)
    g = math.gcd(g, const)
    if g > 1:
        d //= g
        const //= g
        coeffs = [(v, c // g) for v, c in coeffs]
        if d == 1:
            return TRUE_C
    return Divides(d, PATerm(const, tuple(coeffs)))


def _neg_lit(f: PAFormula) -> PAFormula:
    if isinstance(f, Leq):  # not (t <= 0)  <=>  -t + 1 <= 0
        return _le0(-f.lhs + 1)
    if isinstance(f, Divides):
        return PNot(f)
    if isinstance(f, PNot):
        return f.operand
    if isinstance(f, TrueC):
        return FALSE_C
    if isinstance(f, FalseC):
        return TRUE_C
    raise TypeError(f"not a literal: {f!r}")


def nnf(f: PAFormula, negate: bool = False) -> PAFormula:
    """Negation normal form over canonical ``t <= 0`` and ``d | t`` literals.

    Quantifiers are kept (and dualized under negation).
    """
    if isinstance(f, Leq):
        lit = _le0(f.lhs - f.rhs)
        return _neg_lit(lit) if negate else lit
    if isinstance(f, Eq):
        d = f.lhs - f.rhs
        if negate:
            return pa_or(_le0(-d + 1), _le0(d + 1))
        return pa_and(_le0(d), _le0(-d))
    if isinstance(f, Divides):
        lit = _div(f.modulus, f.term)
        return _neg_lit(lit) if negate else lit
    if isinstance(f, PNot):
        return nnf(f.operand, not negate)
    if isinstance(f, PAnd):
        parts = [nnf(a, negate) for a in f.args]
        return pa_or(*parts) if negate else pa_and(*parts)
    if isinstance(f, POr):
        parts = [nnf(a, negate) for a in f.args]
        return pa_and(*parts) if negate else pa_or(*parts)
    if isinstance(f, TrueC):
        return FALSE_C if negate else TRUE_C
    if isinstance(f, FalseC):
        return TRUE_C if negate else FALSE_C
    if isinstance(f, PExists):
        return (PForall if negate else PExists)(f.var, nnf(f.body, negate))
    if isinstance(f, PForall):
        return (PExists if negate else PForall)(f.var, nnf(f.body, negate))
    raise TypeError(f"not a Presburger formula: {f!r}")


def _is_lit(f: PAFormula) -> bool:
    return isinstance(f, (Leq, Divides, PNot))


def simplify(f: PAFormula) -> PAFormula:
    """Cheap clean-up of a quantifier-free formula (brought to NNF first).

    Flattening, constant folding, duplicate removal, and per-linear-form bound
    tightening (which also detects ``t <= a and t >= b`` contradictions and
    the dual tautologies).
    """
    return _simplify(nnf(f))


def _simplify(f: PAFormula) -> PAFormula:
    # expects canonical literals as produced by nnf
    if isinstance(f, PAnd):
        return _simp_junction([_simplify(a) for a in f.args], conj=True)
    if isinstance(f, POr):
        return _simp_junction([_simplify(a) for a in f.args], conj=False)
    return f


def _simp_junction(args: list[PAFormula], conj: bool) -> PAFormula:
    absorbing, neutral = (FalseC, TrueC) if conj else (TrueC, FalseC)
    same = PAnd if conj else POr
    flat: list[PAFormula] = []
    for a in args:
        if isinstance(a, absorbing):
            return a
        if isinstance(a, neutral):
            continue
        if isinstance(a, same):
            flat.extend(a.args)
        else:
            flat.append(a)
    bounds: dict[tuple, int] = {}
    divs: set = set()
    ndivs: set = set()
    rest: list[PAFormula] = []
    seen_rest: set = set()
    for a in flat:
        if isinstance(a, Leq):
            key = a.lhs.coefficients
            c = a.lhs.constant
            old = bounds.get(key)
            # conjunction keeps the strongest (largest constant), disjunction the weakest
            if old is None or (c > old if conj else c < old):
                bounds[key] = c
        elif isinstance(a, Divides):
            divs.add(a)
        elif isinstance(a, PNot):
            ndivs.add(a.operand)
        elif a not in seen_rest:
            seen_rest.add(a)
            rest.append(a)
    for d in divs & ndivs:
        return FALSE_C if conj else TRUE_C
    for key, c in bounds.items():
        neg_key = tuple((v, -k) for v, k in key)
        other = bounds.get(neg_key)
        if other is None:
            continue
        # t + c <= 0 and -t + other <= 0  =>  other <= t <= -c
        if conj and c + other > 0:
            return FALSE_C
        if not conj and c + other <= 1:
            return TRUE_C
    out: list[PAFormula] = [Leq(PATerm(c, key), _ZERO) for key, c in bounds.items()]
    out.extend(sorted(divs, key=_lit_key))
    out.extend(PNot(d) for d in sorted(ndivs, key=_lit_key))
    out.extend(rest)
    if not out:
        return neutral()
    if len(out) == 1:
        return out[0]
    return same(tuple(out))


def _lit_key(d: Divides):
    return (d.modulus, d.term.coefficients, d.term.constant)


def _subst(f: PAFormula, x: str, t: PATerm) -> PAFormula:
    """Substitute into a canonical QF NNF formula, re-canonicalizing literals."""
    if isinstance(f, Leq):
        if not f.lhs.coeff(x):
            return f
        return _le0(f.lhs.substitute(x, t))
    if isinstance(f, Divides):
        if not f.term.coeff(x):
            return f
        return _div(f.modulus, f.term.substitute(x, t))
    if isinstance(f, PNot):
        inner = _subst(f.operand, x, t)
        return pa_not(inner) if not isinstance(inner, Divides) else PNot(inner)
    if isinstance(f, PAnd):
        return _simp_junction([_subst(a, x, t) for a in f.args], conj=True)
    if isinstance(f, POr):
        return _simp_junction([_subst(a, x, t) for a in f.args], conj=False)
    return f


# ------------------------------------------------------------ elimination


def _lit_coeff(lit: PAFormula, x: str) -> int:
    if isinstance(lit, Leq):
        return lit.lhs.coeff(x)
    if isinstance(lit, Divides):
        return lit.term.coeff(x)
    if isinstance(lit, PNot):
        return lit.operand.term.coeff(x)
    return 0


def _mentions(f: PAFormula, x: str) -> bool:
    if isinstance(f, (PAnd, POr)):
        return any(_mentions(a, x) for a in f.args)
    return _lit_coeff(f, x) != 0


def _literals(f: PAFormula, x: str, out: list):
    if isinstance(f, (PAnd, POr)):
        for a in f.args:
            _literals(a, x, out)
    elif _lit_coeff(f, x):
        out.append(f)


def _unitize(f: PAFormula, x: str, delta: int) -> PAFormula:
    """Scale every literal so ``x`` has coefficient +-delta, then read delta*x as x."""
    if isinstance(f, (PAnd, POr)):
        parts = [_unitize(a, x, delta) for a in f.args]
        return (PAnd if isinstance(f, PAnd) else POr)(tuple(parts))
    c = _lit_coeff(f, x)
    if not c:
        return f
    m = delta // abs(c)
    sign = 1 if c > 0 else -1
    if isinstance(f, Leq):
        t = f.lhs * m
        return Leq(t.drop(x) + PATerm.var(x, sign), _ZERO)
    lit = f.operand if isinstance(f, PNot) else f
    t = lit.term * m
    d = Divides(lit.modulus * m, t.drop(x) + PATerm.var(x, sign))
    return PNot(d) if isinstance(f, PNot) else d


def _infinity(f: PAFormula, x: str, plus: bool) -> PAFormula:
    """Replace bound literals on ``x`` by their truth value at +-infinity."""
    if isinstance(f, (PAnd, POr)):
        junction = pa_and if isinstance(f, PAnd) else pa_or
        return junction(*(_infinity(a, x, plus) for a in f.args))
    if isinstance(f, Leq):
        c = f.lhs.coeff(x)
        if c:
            # c*x + t <= 0 holds at -inf iff c > 0
            return TRUE_C if (c > 0) != plus else FALSE_C
    return f


def eliminate_var(f: PAFormula, x: str) -> PAFormula:
    """Quantifier-free formula equivalent to ``exists x. f`` (Cooper).

    ``f`` must be quantifier-free; it is brought into canonical negation
    normal form first.
    """
    if not quantifier_free(f):
        raise ValueError("eliminate_var needs a quantifier-free formula")
    return _elim(_simplify(nnf(f)), x)


def _elim(f: PAFormula, x: str) -> PAFormula:
    if not _mentions(f, x):
        return f
    if isinstance(f, POr):
        return _simp_junction([_elim(a, x) for a in f.args], conj=False)
    if isinstance(f, PAnd):
        outside = [a for a in f.args if not _mentions(a, x)]
        inside = [a for a in f.args if _mentions(a, x)]
        if outside:
            core = inside[0] if len(inside) == 1 else PAnd(tuple(inside))
            return _simp_junction(outside + [_elim(core, x)], conj=True)
        if all(_is_lit(a) for a in inside):
            return _elim_cube(inside, x)
        # small disjunctive factors: distribute to keep each branch a cube
        ors = [a for a in inside if isinstance(a, POr)]
        if ors and math.prod(len(o.args) for o in ors) <= 64:
            lits = [a for a in inside if not isinstance(a, POr)]
            branches = []
            for choice in itertools.product(*(o.args for o in ors)):
                branch = _simp_junction(lits + list(choice), conj=True)
                branches.append(_elim(branch, x))
            return _simp_junction(branches, conj=False)
        return _cooper(f, x)
    return _elim_cube([f], x)


def _cube_parts(lits: list[PAFormula], x: str):
    lowers, uppers, congr = [], [], []
    for lit in lits:
        if isinstance(lit, Leq):
            c = lit.lhs.coeff(x)
            if c < 0:  # -x + a <= 0  ->  x >= a
                lowers.append(lit.lhs.drop(x))
            else:  # x + a <= 0  ->  x <= -a
                uppers.append(-lit.lhs.drop(x))
        else:
            congr.append(lit)
    return lowers, uppers, congr


def _elim_cube(lits: list[PAFormula], x: str) -> PAFormula:
    delta = reduce(math.lcm, (abs(_lit_coeff(a, x)) for a in lits), 1)
    unit = [_unitize(a, x, delta) for a in lits]
    if delta > 1:
        unit.append(Divides(delta, PATerm.var(x)))
    lowers, uppers, congr = _cube_parts(unit, x)
    upper_set = set(uppers)
    for b in lowers:
        if b in upper_set:  # x = b
            return _simp_junction([_subst(a, x, b) for a in unit], conj=True)
    if not congr:
        # unit coefficients: Fourier-Motzkin is exact over the integers
        return _simp_junction([_le0(a - b) for a in lowers for b in uppers], conj=True)
    return _cooper(PAnd(tuple(unit)), x, unitized=True)


def _cooper(f: PAFormula, x: str, unitized: bool = False) -> PAFormula:
    if not unitized:
        lits: list = []
        _literals(f, x, lits)
        delta = reduce(math.lcm, (abs(_lit_coeff(a, x)) for a in lits), 1)
        f = _unitize(f, x, delta)
        if delta > 1:
            f = PAnd((f, Divides(delta, PATerm.var(x))))
    lits = []
    _literals(f, x, lits)
    period = 1
    lowers, uppers = set(), set()
    for lit in lits:
        if isinstance(lit, Leq):
            if lit.lhs.coeff(x) < 0:
                lowers.add(lit.lhs.drop(x))
            else:
                uppers.add(-lit.lhs.drop(x))
        else:
            period = math.lcm(period, (lit.operand if isinstance(lit, PNot) else lit).modulus)
    use_lower = len(lowers) <= len(uppers)
    points = lowers if use_lower else uppers
    step = 1 if use_lower else -1
    inf = _infinity(f, x, plus=not use_lower)
    if _mentions(inf, x):
        out = [_subst(inf, x, PATerm(j)) for j in range(period)]
    else:
        out = [inf]
    for b in sorted(points, key=lambda t: (t.coefficients, t.constant)):
        for j in range(period):
            out.append(_subst(f, x, b + step * j))
    return _simp_junction(out, conj=False)


# ------------------------------------------------------------------ decision


def _qe(f: PAFormula) -> PAFormula:
    if isinstance(f, PExists):
        return _elim(_qe(f.body), f.var)
    if isinstance(f, PForall):
        return nnf(_elim(nnf(_qe(f.body), negate=True), f.var), negate=True)
    if isinstance(f, PAnd):
        return _simp_junction([_qe(a) for a in f.args], conj=True)
    if isinstance(f, POr):
        return _simp_junction([_qe(a) for a in f.args], conj=False)
    return f


def eliminate_quantifiers(f: PAFormula) -> PAFormula:
    """Quantifier-free equivalent of an arbitrary formula."""
    return _simplify(_qe(_simplify(nnf(f))))


def decide_sentence(f: PAFormula) -> bool:
    """Truth of a closed formula over the integers."""
    free = pa_free_vars(f)
    if free:
        raise NotClosed(f"formula has free variables {sorted(free)}")
    g = eliminate_quantifiers(f)
    return evaluate_pa(g, {})


# ----------------------------------------------------------------- printing


def _show(f: PAFormula) -> str:
    if isinstance(f, TrueC):
        return "true"
    if isinstance(f, FalseC):
        return "false"
    if isinstance(f, Leq):
        return f"{f.lhs} <= {f.rhs}"
    if isinstance(f, Eq):
        return f"{f.lhs} = {f.rhs}"
    if isinstance(f, Divides):
        return f"{f.modulus} | {f.term}"
    if isinstance(f, PNot):
        return f"!({f.operand})"
    if isinstance(f, PAnd):
        return "(" + " & ".join(map(_show, f.args)) + ")"
    if isinstance(f, POr):
        return "(" + " | ".join(map(_show, f.args)) + ")"
    if isinstance(f, PExists):
        return f"E {f.var}. {_show(f.body)}"
    if isinstance(f, PForall):
        return f"A {f.var}. {_show(f.body)}"
    raise TypeError(f)


def _smt_term(t: PATerm) -> str:
    parts = [str(t.constant)] if t.constant or not t.coefficients else []
    for v, c in t.coefficients:
        parts.append(v if c == 1 else f"(* {c} {v})" if c > 0 else f"(* (- {-c}) {v})")
    parts = [p if not p.startswith("-") else f"(- {p[1:]})" for p in parts]
    return parts[0] if len(parts) == 1 else f"(+ {' '.join(parts)})"


def to_smtlib(f: PAFormula) -> str:
    """SMT-LIB (LIA) rendering for manual cross-checks; output only."""
    if isinstance(f, TrueC):
        return "true"
    if isinstance(f, FalseC):
        return "false"
    if isinstance(f, Leq):
        return f"(<= {_smt_term(f.lhs)} {_smt_term(f.rhs)})"
    if isinstance(f, Eq):
        return f"(= {_smt_term(f.lhs)} {_smt_term(f.rhs)})"
    if isinstance(f, Divides):
        return f"(= (mod {_smt_term(f.term)} {f.modulus}) 0)"
    if isinstance(f, PNot):
        return f"(not {to_smtlib(f.operand)})"
    if isinstance(f, (PAnd, POr)):
        op = "and" if isinstance(f, PAnd) else "or"
        return f"({op} {' '.join(to_smtlib(a) for a in f.args)})"
    if isinstance(f, (PExists, PForall)):
        q = "exists" if isinstance(f, PExists) else "forall"
        return f"({q} (({f.var} Int)) {to_smtlib(f.body)})"
    raise TypeError(f)
