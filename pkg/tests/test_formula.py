import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import all_lassos, naive_lasso
from stepltl.formula import (
    FALSE, TRUE, And, Atom, Bot, Exists, Forall, FreshSource, Iff, Implies, NegAtom, Next, Not,
    Or, ParseError, Release, ScopeError, StepNext, StepTerm, Top, Until, free_step_vars,
    is_pnf, normalize_term, parse_formula, parse_term, render_formula, substitute_term, to_pnf,
)
from stepltl.words import parse_lasso

p, q = Atom("p"), Atom("q")
k = StepTerm.var("k")


# ------------------------------------------------------------------ parsing

def test_parse_p2():
    assert parse_formula("A k. X[k] X[k] p") == Forall("k", StepNext(k, StepNext(k, p)))


def test_parse_constants():
    assert parse_formula("true") == TRUE
    assert parse_formula("false") == FALSE


def test_parse_linear_term():
    f = parse_formula("X[2*k1 + k2 + 3] p", bound=None)
    assert f == StepNext(StepTerm.of(3, {"k1": 2, "k2": 1}), p)


def test_precedence():
    f = parse_formula("p & q | !p U q -> q <-> p")
    expected = Iff(Implies(Or(And(p, q), Until(NegAtom("p"), q)), q), p)
    assert f == expected


def test_until_right_assoc():
    assert parse_formula("p U q U p") == Until(p, Until(q, p))
    assert parse_formula("p R q R p") == Release(p, Release(q, p))


def test_quantifier_extends_right():
    assert parse_formula("E k. X[k] p & q") == Exists("k", And(StepNext(k, p), q))


def test_negated_group_is_sugar():
    assert parse_formula("!(p)") == Not(p)
    assert parse_formula("!p") == NegAtom("p")


@pytest.mark.parametrize("text", ["p &", "X[k p", "(p", "E . p", "X[k*k] p", "p q", "X[-1] p"])
def test_syntax_errors(text):
    with pytest.raises(ParseError):
        parse_formula(text)


def test_error_position():
    with pytest.raises(ParseError) as e:
        parse_formula("p &\n  & q")
    assert (e.value.line, e.value.column) == (2, 3)


def test_scope_error_when_closed_required():
    with pytest.raises(ScopeError):
        parse_formula("X[k] p", bound=())
    assert parse_formula("A k. X[k] p", bound=()) == Forall("k", StepNext(k, p))


def test_spans_do_not_affect_equality():
    a = parse_formula("p & q")
    assert a.span is not None
    assert a == And(p, q)


# ------------------------------------------------------------------ terms

def test_normalize_examples():
    assert parse_term("k1 + k2 + k1") == StepTerm.of(0, {"k1": 2, "k2": 1})
    assert StepTerm.var("k1") * 2 + 6 == (StepTerm.var("k1") + 3) * 2
    assert parse_term("0 + k") == k
    assert normalize_term(parse_term("k2 + k10 + k1")) == parse_term("k1 + k2 + k10")


def test_canonical_rendering_natural_order():
    assert str(parse_term("k10 + k2 + 3")) == "k2 + k10 + 3"


terms = st.builds(
    StepTerm.of,
    st.integers(0, 20),
    st.dictionaries(st.sampled_from(["a", "b", "k1", "k2", "k10"]), st.integers(0, 5), max_size=3),
)


@given(terms, terms)
def test_addition_commutes(a, b):
    assert normalize_term(a + b) == normalize_term(b + a)


@given(terms, terms, terms)
def test_addition_associates(a, b, c):
    assert (a + b) + c == a + (b + c)


@given(terms)
def test_normalize_idempotent_and_identity(a):
    assert normalize_term(normalize_term(a)) == normalize_term(a)
    assert a + StepTerm.const(0) == a
    assert 0 not in [c for _, c in a.coefficients]


@given(terms, terms, st.integers(0, 6))
def test_scaling_distributes(a, b, n):
    assert (a + b) * n == a * n + b * n


@given(terms, st.dictionaries(st.sampled_from(["a", "b", "k1", "k2", "k10"]), st.integers(0, 9),
                              min_size=5))
def test_term_value_is_homomorphic(a, v):
    assert (a + a).value(v) == 2 * a.value(v)


# ------------------------------------------------------------ free vars, subst

def test_free_vars():
    assert free_step_vars(parse_formula("A k. X[k] p")) == frozenset()
    assert free_step_vars(parse_formula("X[k1 + k2] p")) == {"k1", "k2"}
    assert free_step_vars(parse_formula("E k1. X[k1 + k2] p")) == {"k2"}


def test_substitute_examples():
    f = parse_formula("X[k1 + k2] p")
    assert substitute_term(f, "k2", parse_term("k + 1")) == parse_formula("X[k1 + k + 1] p")
    assert substitute_term(parse_formula("X[2*k] p"), "k", 5) == parse_formula("X[10] p")


def test_substitute_avoids_capture():
    f = parse_formula("E k2. X[k + k2] p & X[k2] q")
    g = substitute_term(f, "k", "k2", fresh=FreshSource())
    assert isinstance(g, Exists) and g.var != "k2"
    assert free_step_vars(g) == {"k2"}
    # semantic check: every valuation of the free name agrees
    w = parse_lasso("props p q | {p};{q} | {};{p,q};{p}")
    for n in range(4):
        for i in range(4):
            assert naive_lasso(g, w, i, {"k2": n}) == naive_lasso(f, w, i, {"k": n})


def test_substitute_leaves_bound_occurrence():
    f = parse_formula("A k. X[k] p")
    assert substitute_term(f, "k", 3) == f


# ------------------------------------------------------------ rendering

def test_render_examples():
    assert render_formula(Forall("k", StepNext(k, StepNext(k, p)))) == "A k. X[k] X[k] p"
    assert render_formula(StepNext(StepTerm.const(2), p)) == "X[2] p"
    assert render_formula(NegAtom("p")) == "!p"


def test_render_parenthesizes_quantified_operands():
    f = And(Exists("k", StepNext(k, p)), q)
    assert render_formula(f) == "(E k. X[k] p) & q"
    assert parse_formula(render_formula(f)) == f


NAMES = ["k", "j", "k1"]


def formulas(sugar=True, props=("p", "q"), max_leaves=8):
    leaves = st.one_of(
        st.just(TRUE), st.just(FALSE),
        st.sampled_from(props).map(Atom), st.sampled_from(props).map(NegAtom),
    )
    small_terms = st.builds(StepTerm.of, st.integers(0, 3),
                            st.dictionaries(st.sampled_from(NAMES), st.integers(1, 2), max_size=2))

    def grow(children):
        options = [
            st.builds(And, children, children), st.builds(Or, children, children),
            st.builds(Until, children, children), st.builds(Release, children, children),
            st.builds(Next, children), st.builds(StepNext, small_terms, children),
            st.builds(Exists, st.sampled_from(NAMES), children),
            st.builds(Forall, st.sampled_from(NAMES), children),
        ]
        if sugar:
            options += [st.builds(Not, children), st.builds(Implies, children, children),
                        st.builds(Iff, children, children)]
        return st.one_of(options)

    return st.recursive(leaves, grow, max_leaves=max_leaves)


@settings(max_examples=300)
@given(formulas())
def test_render_parse_round_trip(f):
    assert parse_formula(render_formula(f)) == f


@settings(max_examples=300)
@given(formulas())
def test_pnf_is_negation_free(f):
    g = to_pnf(f)
    assert is_pnf(g)
    assert free_step_vars(g) == free_step_vars(f)


def test_pnf_examples():
    assert to_pnf(Not(p)) == NegAtom("p")
    g = Next(p)
    assert to_pnf(Not(Forall("k", g))) == Exists("k", to_pnf(Not(g)))
    assert to_pnf(Iff(p, q)) == Or(And(p, q), And(NegAtom("p"), NegAtom("q")))
    assert to_pnf(Not(Until(p, q))) == Release(NegAtom("p"), NegAtom("q"))
    assert to_pnf(Not(StepNext(k, p))) == StepNext(k, NegAtom("p"))
    assert to_pnf(Not(Top())) == Bot()


WORDS = list(all_lassos(2, 3))


def closed_small(max_leaves=3):
    return formulas(props=("p",), max_leaves=max_leaves).filter(lambda f: not free_step_vars(f))


@settings(max_examples=60, deadline=None)
@given(closed_small())
def test_pnf_preserves_bounded_meaning(f):
    g = to_pnf(f)
    for w in WORDS:
        assert naive_lasso(f, w, B=3) == naive_lasso(g, w, B=3), (render_formula(f), str(w))
