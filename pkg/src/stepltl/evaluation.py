"""Semantics of step-quantified LTL.

Two evaluators:

* :func:`holds_exact` compiles a formula over a lasso word into a closed
  Presburger sentence and decides it.
* :func:`eval_bounded` evaluates directly on any word with step quantifiers
  ranging over ``[0, B]``; Until/Release scans on non-lasso words stop after
  ``H`` positions and may answer ``UNKNOWN``.

Step variables range over the naturals, zero included.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Mapping

from .formula import (
    And, Atom, Bot, Exists, Forall, Formula, Iff, Implies, NegAtom, Next, Not, Or, Pred,
    Release, StepNext, StepTerm, Top, Until, free_step_vars, is_pnf, to_pnf,
)
from .presburger import (
    FALSE_C, TRUE_C, Divides, PAFormula, PATerm, PExists, PForall, decide_sentence, eq, ge,
    lt, nnf, pa_and, pa_or,
)
from .words import ComputableWord, LassoWord

__all__ = [
    "Verdict", "Bounds", "UnboundStepVariable", "at_pos_predicate", "compile_formula",
    "holds_exact", "eval_bounded", "BoundedEvaluator",
]


class UnboundStepVariable(ValueError):
    pass


class Verdict(enum.Enum):
    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"

    @classmethod
    def of(cls, b: bool) -> Verdict:
        return cls.TRUE if b else cls.FALSE

    def __bool__(self):
        raise TypeError("three-valued verdict has no boolean value; compare with Verdict.TRUE")

    def __str__(self) -> str:
        return self.value


T, F, U = Verdict.TRUE, Verdict.FALSE, Verdict.UNKNOWN


@dataclass(frozen=True)
class Bounds:
    B: int = 10
    H: int = 100

    def __post_init__(self):
        if self.B < 0 or self.H < 1:
            raise ValueError("bounds need B >= 0 and H >= 1")


# ----------------------------------------------------------- Presburger route


def at_pos_predicate(w: LassoWord, prop: str, t: PATerm) -> PAFormula:
    """Formula true exactly when ``prop`` holds at position ``t`` of ``w``."""
    if prop not in w.props:
        raise ValueError(f"unknown proposition {prop!r}")
    t = PATerm.coerce(t)
    if not t.coefficients:
        return TRUE_C if t.constant >= 0 and prop in w.letter_at(t.constant) else FALSE_C
    s, l = w.s, w.l
    prefix_hits = [eq(t, i) for i, letter in enumerate(w.prefix) if prop in letter]
    loop_hits = [Divides(l, t - s - j) for j, letter in enumerate(w.loop) if prop in letter]
    loop_part = pa_and(ge(t, s), pa_or(*loop_hits)) if loop_hits else FALSE_C
    return pa_or(*prefix_hits, loop_part)


class _Compiler:
    def __init__(self, word: LassoWord):
        self.word = word
        self.counter = itertools.count()

    def fresh(self, base: str) -> str:
        # '@' cannot occur in a step variable, so no clash with user names
        return f"{base}@{next(self.counter)}"

    def term(self, st: StepTerm, env: Mapping[str, PATerm]) -> PATerm:
        out = PATerm(st.constant)
        for name, c in st.coefficients:
            if name not in env:
                raise UnboundStepVariable(f"step variable {name!r} has no value")
            out = out + env[name] * c
        return out

    def run(self, f: Formula, t: PATerm, env: dict[str, PATerm]) -> PAFormula:
        if isinstance(f, Top):
            return TRUE_C
        if isinstance(f, Bot):
            return FALSE_C
        if isinstance(f, Atom):
            return at_pos_predicate(self.word, f.prop, t)
        if isinstance(f, NegAtom):
            return nnf(at_pos_predicate(self.word, f.prop, t), negate=True)
        if isinstance(f, And):
            return pa_and(self.run(f.left, t, env), self.run(f.right, t, env))
        if isinstance(f, Or):
            return pa_or(self.run(f.left, t, env), self.run(f.right, t, env))
        if isinstance(f, Next):
            return self.run(f.operand, t + 1, env)
        if isinstance(f, StepNext):
            return self.run(f.operand, t + self.term(f.term, env), env)
        if isinstance(f, Until):
            u = PATerm.var(self.fresh("u"))
            m = PATerm.var(self.fresh("m"))
            inside = pa_and(ge(m, t), ge(m, 0), lt(m, u))
            body = pa_and(
                ge(u, t), ge(u, 0), self.run(f.right, u, env),
                PForall(m.coefficients[0][0],
                        pa_or(nnf(inside, negate=True), self.run(f.left, m, env))),
            )
            return PExists(u.coefficients[0][0], body)
        if isinstance(f, Release):
            u = PATerm.var(self.fresh("u"))
            m = PATerm.var(self.fresh("m"))
            guard = pa_and(ge(u, t), ge(u, 0))
            witness = PExists(m.coefficients[0][0], pa_and(
                ge(m, t), ge(m, 0), lt(m, u), self.run(f.left, m, env)))
            body = pa_or(nnf(guard, negate=True), self.run(f.right, u, env), witness)
            return PForall(u.coefficients[0][0], body)
        if isinstance(f, (Exists, Forall)):
            name = self.fresh(f.var)
            inner = self.run(f.body, t, {**env, f.var: PATerm.var(name)})
            if isinstance(f, Exists):
                return PExists(name, pa_and(ge(PATerm.var(name), 0), inner))
            return PForall(name, pa_or(lt(PATerm.var(name), 0), inner))
        if isinstance(f, (Not, Implies, Iff, Pred)):
            return self.run(to_pnf(f), t, env)
        raise TypeError(f"not a formula: {f!r}")


def _check_valuation(f: Formula, v: Mapping[str, int]):
    missing = free_step_vars(f) - set(v)
    if missing:
        raise UnboundStepVariable(f"no value for free step variables {sorted(missing)}")
    for name, n in v.items():
        if n < 0:
            raise ValueError(f"step variable {name!r} must be a natural number")


def compile_formula(f: Formula, w: LassoWord, v: Mapping[str, int] | None = None,
                    position: int = 0) -> PAFormula:
    """Closed Presburger sentence true iff ``w, position, v |= f``."""
    v = dict(v or {})
    _check_valuation(f, v)
    env = {name: PATerm(n) for name, n in v.items()}
    return _Compiler(w).run(f, PATerm(position), env)


def holds_exact(f: Formula, w: LassoWord, v: Mapping[str, int] | None = None,
                position: int = 0) -> bool:
    return decide_sentence(compile_formula(f, w, v, position))


# -------------------------------------------------------------- bounded route


def _and3(a: Verdict, b: Verdict) -> Verdict:
    if a is F or b is F:
        return F
    if a is U or b is U:
        return U
    return T


def _or3(a: Verdict, b: Verdict) -> Verdict:
    if a is T or b is T:
        return T
    if a is U or b is U:
        return U
    return F


def _conjuncts(f: Formula) -> list[Formula]:
    if isinstance(f, And):
        return _conjuncts(f.left) + _conjuncts(f.right)
    return [f]


def _disjuncts(f: Formula) -> list[Formula]:
    if isinstance(f, Or):
        return _disjuncts(f.left) + _disjuncts(f.right)
    return [f]


class BoundedEvaluator:
    """Bounded three-valued evaluation of one formula over one word.

    Results of quantified and temporal subformulas are cached by (position,
    values of the subformula's free variables), so one evaluator can be
    reused across many valuations.  Quantifier scopes are narrowed before
    evaluation (``E k. (a & b)`` becomes ``a & E k. b`` when ``k`` does not
    occur in ``a``); over the nonempty domain ``[0, B]`` this is exact in
    Kleene logic.
    """

    def __init__(self, f: Formula, word: LassoWord | ComputableWord, bounds: Bounds = Bounds()):
        self.word = word
        self.bounds = bounds
        self.lasso = isinstance(word, LassoWord)
        if not is_pnf(f):
            f = to_pnf(f)
        self.formula = f
        self.root = self._build(f)

    # each node is a tuple (kind, free_vars, memo, payload...)
    def _build(self, f: Formula):
        free = tuple(sorted(free_step_vars(f)))
        if isinstance(f, Top):
            return ("const", free, None, T)
        if isinstance(f, Bot):
            return ("const", free, None, F)
        if isinstance(f, Atom):
            return ("atom", free, None, f.prop, True)
        if isinstance(f, NegAtom):
            return ("atom", free, None, f.prop, False)
        if isinstance(f, And):
            return ("and", free, None, tuple(self._build(c) for c in _conjuncts(f)))
        if isinstance(f, Or):
            return ("or", free, None, tuple(self._build(c) for c in _disjuncts(f)))
        if isinstance(f, Next):
            return ("next", free, None, StepTerm.const(1), self._build(f.operand))
        if isinstance(f, StepNext):
            return ("next", free, None, f.term, self._build(f.operand))
        if isinstance(f, (Until, Release)):
            kind = "until" if isinstance(f, Until) else "release"
            return (kind, free, {}, self._build(f.left), self._build(f.right))
        if isinstance(f, (Exists, Forall)):
            return self._build_quantifier(f)
        raise TypeError(f"not a PNF formula: {f!r}")

    def _build_quantifier(self, f):
        exists = isinstance(f, Exists)
        parts = _conjuncts(f.body) if exists else _disjuncts(f.body)
        inside = [p for p in parts if f.var in free_step_vars(p)]
        outside = [p for p in parts if f.var not in free_step_vars(p)]
        junction = "and" if exists else "or"
        if not inside:
            return self._build(f.body)
        joined = inside[0]
        for p in inside[1:]:
            joined = (And if exists else Or)(joined, p)
        free = tuple(sorted(free_step_vars(joined) - {f.var}))
        node = ("exists" if exists else "forall", free, {}, f.var, self._build(joined))
        if not outside:
            return node
        whole = tuple(sorted(free_step_vars(f)))
        return (junction, whole, None, tuple(self._build(p) for p in outside) + (node,))

    def evaluate(self, position: int = 0, valuation: Mapping[str, int] | None = None) -> Verdict:
        env = dict(valuation or {})
        missing = set(self.root[1]) - set(env)
        if missing:
            raise UnboundStepVariable(f"no value for free step variables {sorted(missing)}")
        return self._ev(self.root, position, env)

    def _ev(self, node, pos: int, env: dict) -> Verdict:
        kind = node[0]
        if kind == "atom":
            return T if (node[3] in self.word.letter_at(pos)) == node[4] else F
        if kind == "and":
            out = T
            for child in node[3]:
                r = self._ev(child, pos, env)
                if r is F:
                    return F
                if r is U:
                    out = U
            return out
        if kind == "or":
            out = F
            for child in node[3]:
                r = self._ev(child, pos, env)
                if r is T:
                    return T
                if r is U:
                    out = U
            return out
        if kind == "next":
            term = node[3]
            try:
                shift = term.value(env)
            except KeyError as e:
                raise UnboundStepVariable(f"step variable {e.args[0]!r} has no value") from None
            return self._ev(node[4], pos + shift, env)
        if kind == "const":
            return node[3]
        memo = node[2]
        cpos = self.word.canonical_position(pos) if self.lasso else pos
        key = (cpos, tuple(env[v] for v in node[1]))
        hit = memo.get(key)
        if hit is not None:
            return hit
        if kind == "exists" or kind == "forall":
            r = self._quantify(node, cpos, env)
        else:
            r = self._scan(node, cpos, env)
        memo[key] = r
        return r

    def _quantify(self, node, pos: int, env: dict) -> Verdict:
        exists = node[0] == "exists"
        var, body = node[3], node[4]
        saved = env.get(var, None)
        stop, out = (T, F) if exists else (F, T)
        try:
            for n in range(self.bounds.B + 1):
                env[var] = n
                r = self._ev(body, pos, env)
                if r is stop:
                    out = stop
                    break
                if r is U:
                    out = U
        finally:
            if saved is None:
                env.pop(var, None)
            else:
                env[var] = saved
        return out

    def _scan(self, node, pos: int, env: dict) -> Verdict:
        until = node[0] == "until"
        left, right = node[3], node[4]
        if self.lasso:
            s, l = self.word.s, self.word.l
            stop_at = max(pos, s) + l  # truth values repeat from here on
            tail = F if until else T
        else:
            stop_at = pos + self.bounds.H
            tail = U
        trail = []
        j = pos
        result = tail
        while j < stop_at:
            g = self._ev(right, j, env)
            if until:
                if g is T:
                    result = T
                    break
                f = self._ev(left, j, env)
                if f is F:
                    result = g  # F or U
                    break
            else:
                if g is F:
                    result = F
                    break
                f = self._ev(left, j, env)
                if f is T:
                    result = g  # T or U
                    break
            trail.append((f, g))
            j += 1
        for f, g in reversed(trail):
            result = _or3(g, _and3(f, result)) if until else _and3(g, _or3(f, result))
        return result


def eval_bounded(f: Formula, w: LassoWord | ComputableWord, i: int = 0,
                 v: Mapping[str, int] | None = None, bounds: Bounds = Bounds()) -> Verdict:
    """Bounded semantics: quantifiers over ``[0, B]``, scans capped at ``H``."""
    v = dict(v or {})
    _check_valuation(f, v)
    return BoundedEvaluator(f, w, bounds).evaluate(i, v)
