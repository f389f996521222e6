import re
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stepltl import formula as fm
from stepltl.evaluation import Bounds, Verdict, eval_bounded
from stepltl.formula import FreshSource, ParseError, StepTerm, free_step_vars, is_pnf, render_formula
from stepltl.peano import (
    PREDICATES, And, Const, ConstV, Eq, EqV, Exists, Forall, Iff, Implies, Lt, LtV, Not, Or, Plus,
    PlusV, Times, TimesV, Var, build_predicate, flatten, parse_peano, peano_vars, render_peano,
    translate,
)
from stepltl.words import squares_word

GOLDEN = Path(__file__).parent / "golden" / "templates"
x, y, z = Var("x"), Var("y"), Var("z")


# ------------------------------------------------------------------ parsing

def test_parse_examples():
    assert parse_peano("exists x. x + x = x") == Exists("x", Eq(Plus(x, x), x))
    assert parse_peano("forall x. exists y. x < y") == Forall("x", Exists("y", Lt(x, y)))
    f = parse_peano("x * y = z")
    assert f == Eq(Times(x, y), z) and peano_vars(f) == {"x", "y", "z"}


def test_parse_precedence_and_parens():
    assert parse_peano("(x + 1) * y = 2") == Eq(Times(Plus(x, Const(1)), y), Const(2))
    assert parse_peano("x + 1 * y = 2") == Eq(Plus(x, Times(Const(1), y)), Const(2))
    assert parse_peano("(x = y) | x < y -> !(y < x)") == Implies(Or(Eq(x, y), Lt(x, y)), Not(Lt(y, x)))
    assert parse_peano("x = y <-> y = x") == Iff(Eq(x, y), Eq(y, x))


@pytest.mark.parametrize("text", ["x +", "x = ", "exists . x = x", "x < y < z", "forall X. X = X", "x ^ y = z"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_peano(text)


peano_terms = st.recursive(
    st.one_of(st.sampled_from("xyz").map(Var), st.integers(0, 3).map(Const)),
    lambda t: st.one_of(st.builds(Plus, t, t), st.builds(Times, t, t)), max_leaves=5)
peano_formulas = st.recursive(
    st.one_of(st.builds(Eq, peano_terms, peano_terms), st.builds(Lt, peano_terms, peano_terms)),
    lambda f: st.one_of(
        st.builds(Not, f), st.builds(And, f, f), st.builds(Or, f, f), st.builds(Implies, f, f),
        st.builds(Iff, f, f), st.builds(Exists, st.sampled_from("xyz"), f),
        st.builds(Forall, st.sampled_from("xyz"), f)),
    max_leaves=4)


@given(peano_formulas)
def test_render_parse_round_trip(f):
    assert parse_peano(render_peano(f)) == f


# ------------------------------------------------------------------ flatten

def test_flatten_examples():
    f = flatten(parse_peano("x + x = x"), FreshSource())
    assert f == Exists("_g0", And(PlusV("x", "x", "_g0"), EqV("_g0", "x")))
    f = flatten(parse_peano("x * y = z"), FreshSource())
    assert f == Exists("_g0", And(TimesV("x", "y", "_g0"), EqV("_g0", "z")))
    f = flatten(parse_peano("x + 1 < y"), FreshSource())
    assert f == Exists("_g0", Exists("_g1", And(And(ConstV("_g0", 1), PlusV("x", "_g0", "_g1")),
                                                LtV("_g1", "y"))))


def test_flatten_negative_polarity_is_universal():
    f = flatten(parse_peano("!(x + 1 = y)"), FreshSource())
    assert isinstance(f, Forall) and isinstance(f.body, Forall)


def _term(t, env):
    if isinstance(t, Var):
        return env.get(t.name)
    if isinstance(t, Const):
        return t.value
    a, b = _term(t.left, env), _term(t.right, env)
    if a is None or b is None:
        return None
    return a + b if isinstance(t, Plus) else a * b


def _rel(op, *names_or_values):
    if None in names_or_values:
        return None
    return op(*names_or_values)


def peano_truth(f, env, dom=range(4), wide=range(40)):
    """Naive evaluator over naturals; fresh-looking names range over ``wide``.

    Unassigned variables make atoms unknown (None, Kleene connectives); a
    quantifier value is skipped as soon as its body is already decided under
    the partial assignment, which keeps long quantifier prefixes tractable.
    """
    def ev(g, env):
        if isinstance(g, Eq):
            return _rel(int.__eq__, _term(g.left, env), _term(g.right, env))
        if isinstance(g, Lt):
            return _rel(int.__lt__, _term(g.left, env), _term(g.right, env))
        if isinstance(g, EqV):
            return _rel(int.__eq__, env.get(g.a), env.get(g.b))
        if isinstance(g, LtV):
            return _rel(int.__lt__, env.get(g.a), env.get(g.b))
        if isinstance(g, PlusV):
            return _rel(lambda a, b, c: a + b == c, env.get(g.a), env.get(g.b), env.get(g.c))
        if isinstance(g, TimesV):
            return _rel(lambda a, b, c: a * b == c, env.get(g.a), env.get(g.b), env.get(g.c))
        if isinstance(g, ConstV):
            return _rel(lambda a: a == g.n, env.get(g.a))
        if isinstance(g, Not):
            r = ev(g.operand, env)
            return None if r is None else not r
        if isinstance(g, (And, Or, Implies, Iff)):
            a, b = ev(g.left, env), ev(g.right, env)
            if isinstance(g, Implies):
                a = None if a is None else not a
            if isinstance(g, Iff):
                return None if a is None or b is None else a == b
            if isinstance(g, And):
                return False if False in (a, b) else (None if None in (a, b) else True)
            return True if True in (a, b) else (None if None in (a, b) else False)
        exists = isinstance(g, Exists)
        partial = ev(g.body, {k: v for k, v in env.items() if k != g.var})
        if partial is not None:
            return partial
        if any(v not in env for v in _free(g.body) - {g.var}):
            return None
        rng = wide if g.var.startswith("_g") else dom
        for n in rng:
            r = ev(g.body, {**env, g.var: n})
            if r is exists:
                return exists
        return not exists
    return ev(f, env)


def _free(g):
    if isinstance(g, (Exists, Forall)):
        return _free(g.body) - {g.var}
    if isinstance(g, (EqV, LtV)):
        return {g.a, g.b}
    if isinstance(g, (PlusV, TimesV)):
        return {g.a, g.b, g.c}
    if isinstance(g, ConstV):
        return {g.a}
    if isinstance(g, (Eq, Lt)):
        return peano_vars(g)
    if isinstance(g, Not):
        return _free(g.operand)
    return _free(g.left) | _free(g.right)


small_terms = st.recursive(
    st.one_of(st.sampled_from("xy").map(Var), st.integers(0, 2).map(Const)),
    lambda t: st.one_of(st.builds(Plus, t, t), st.builds(Times, t, t)), max_leaves=3)
small_formulas = st.recursive(
    st.one_of(st.builds(Eq, small_terms, small_terms), st.builds(Lt, small_terms, small_terms)),
    lambda f: st.one_of(st.builds(Not, f), st.builds(And, f, f), st.builds(Implies, f, f),
                        st.builds(Iff, f, f), st.builds(Exists, st.just("y"), f)),
    max_leaves=3)


@settings(max_examples=150, deadline=None)
@given(small_formulas)
def test_flatten_preserves_truth(f):
    g = flatten(f, FreshSource())
    for xv in range(4):
        for yv in range(4):
            env = {"x": xv, "y": yv}
            assert peano_truth(g, env) == peano_truth(f, env)


# ------------------------------------------------------------ templates

def _macro_text(which, args):
    return render_formula(build_predicate(which, args).body, macros=True)


ARGS = {"L_p": [], "L_eq": ["k1", "k2"], "L_lt": ["k1", "k2"], "L_plus": ["k1", "k2", "k3"],
        "L_q": [], "L_sq": ["k1", "k2"], "L_times": ["k1", "k2", "k3"]}


@pytest.mark.parametrize("which", list(ARGS))
def test_template_matches_golden(which):
    expected = (GOLDEN / f"{which}.txt").read_text().strip()
    assert _macro_text(which, ARGS[which]) == expected


@pytest.mark.parametrize("which", ["L_p", "L_eq", "L_lt"])
def test_expanded_template_matches_golden(which):
    expected = (GOLDEN / f"{which}.expanded.txt").read_text().strip()
    assert render_formula(fm.to_pnf(build_predicate(which, ARGS[which]))) == expected


def test_predicate_arity_and_names():
    assert PREDICATES == {"L_p": 0, "L_eq": 2, "L_lt": 2, "L_plus": 3, "L_q": 0, "L_sq": 2, "L_times": 3}
    with pytest.raises(ValueError):
        build_predicate("L_eq", ["k1"])
    with pytest.raises(ValueError):
        build_predicate("L_div", ["k1", "k2"])


def test_plus_with_constant_argument():
    got = build_predicate("L_plus", [2, "k5", "k6"]).body
    assert got.name == "L_eq" and got.args == (StepTerm.of(2, {"k5": 1}), StepTerm.var("k6"))


def test_square_template_contains_expected_conjuncts():
    text = render_formula(build_predicate("L_sq", ["k1", "k2"]), macros=False)
    assert "X[k2] q" in text and "X[2*k1 + k2 + 1] q" in text


def test_fresh_names_avoid_arguments():
    f = build_predicate("L_lt", ["_g0", "k"])
    assert f.body.var != "_g0"


def test_hoisted_templates_drop_embedded_constraints():
    assert render_formula(build_predicate("L_eq", ["a", "b"], hoist=True).body, macros=True) == \
        "A _g0. X[_g0 + a] p <-> X[_g0 + b] p"
    assert "L_q" not in render_formula(build_predicate("L_sq", ["a", "b"], hoist=True).body, macros=True)


# ------------------------------------------------------------ translate

def test_translate_structure():
    f = translate(parse_peano("exists x. x + x = x"), keep_macros=True)
    assert render_formula(f, macros=True) == "E x. E _g0. L_plus(x, x, _g0) & L_eq(_g0, x)"
    g = translate(parse_peano("exists x. x + x = x"))
    assert is_pnf(g) and not free_step_vars(g)


def _core_fragment(f):
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, (fm.Until, fm.Release)):
            return False
        stack.extend(getattr(g, n) for n in ("left", "right", "operand", "body") if hasattr(g, n))
    return True


@pytest.mark.parametrize("text", ["forall x. exists y. x < y", "exists x. x * x = 4", "x + 1 = y"])
def test_translate_output_is_core_pnf(text):
    f = parse_peano(text)
    g = translate(f)
    assert is_pnf(g) and _core_fragment(g)
    assert free_step_vars(g) == peano_vars_free(f)


def peano_vars_free(f):
    if isinstance(f, (Exists, Forall)):
        return peano_vars_free(f.body) - {f.var}
    if isinstance(f, (Eq, Lt)):
        return peano_vars(f)
    if isinstance(f, Not):
        return peano_vars_free(f.operand)
    return peano_vars_free(f.left) | peano_vars_free(f.right)


def _canonical(text):
    names = {}
    return re.sub(r"_g\d+", lambda m: names.setdefault(m.group(), f"v{len(names)}"), text)


def test_fresh_offset_gives_alpha_equivalent_output():
    f = parse_peano("forall x. exists y. x * y = y + 2")
    a = render_formula(translate(f, fresh=FreshSource()))
    b = render_formula(translate(f, fresh=FreshSource(counter=500)))
    assert a != b and _canonical(a) == _canonical(b)


def test_translate_is_deterministic():
    f = parse_peano("exists x. x * x = x + 2")
    assert render_formula(translate(f)) == render_formula(translate(f))


def test_translate_bounded_witness_on_squares():
    f = translate(parse_peano("exists x. exists y. x * y = x + y"))
    assert eval_bounded(f, squares_word(), bounds=Bounds(25, 3000)) is Verdict.TRUE


def test_translate_bounded_refutation_on_squares():
    f = translate(parse_peano("exists x. x < x"))
    assert eval_bounded(f, squares_word(), bounds=Bounds(20, 100)) is Verdict.FALSE


def test_hoisted_translation_agrees():
    w = squares_word()
    for text in ["exists x. x + 2 = 5", "forall x. x < 3 -> x + 1 < 4", "exists x. 3 < x & x < 3"]:
        f = parse_peano(text)
        plain = eval_bounded(translate(f), w, bounds=Bounds(20, 100))
        hoisted = eval_bounded(translate(f, hoist=True), w, bounds=Bounds(20, 100))
        assert plain is hoisted
