import random

import numpy as np
import pytest

from oracles import exists_on_window, np_eval, random_pa
from stepltl.presburger import (
    FALSE_C, TRUE_C, Divides, Eq, Leq, NotClosed, PATerm, PExists, PForall, PNot, UnassignedVariable,
    decide_sentence, eliminate_quantifiers, eliminate_var, eq, evaluate_pa, ge, le, lt, nnf,
    pa_and, pa_free_vars, pa_not, pa_or, quantifier_free, simplify, to_smtlib,
)

x, y, z, a, b = (PATerm.var(n) for n in "xyzab")


def implies(p, q):
    return pa_or(pa_not(p), q)


def test_evaluate_examples():
    assert evaluate_pa(Divides(3, x), {"x": 9})
    assert not evaluate_pa(Leq(x, y), {"x": 5, "y": 4})
    assert evaluate_pa(Eq(x * 2 + 1, y), {"x": 3, "y": 7})


def test_evaluate_requires_assignment():
    with pytest.raises(UnassignedVariable):
        evaluate_pa(Leq(x, y), {"x": 1})


def test_evaluate_quantifier_needs_domain():
    f = PExists("x", eq(x, y))
    assert evaluate_pa(f, {"y": 3}, domain=range(-5, 6))
    assert not evaluate_pa(f, {"y": 9}, domain=range(-5, 6))
    with pytest.raises(ValueError):
        evaluate_pa(f, {"y": 3})


def test_divides_modulus_positive():
    with pytest.raises(ValueError):
        Divides(0, x)


def test_term_algebra():
    t = x * 3 - y + 2
    assert t.coeff("x") == 3 and t.coeff("y") == -1 and t.constant == 2
    assert (t - t) == PATerm(0)
    assert t.substitute("x", y + 1).value({"y": 4}) == 13


# ---------------------------------------------------------------- elimination

def test_eliminate_positive_multiple_of_three():
    g = eliminate_var(pa_and(ge(x, 0), Divides(3, x), lt(7, x)), "x")
    assert g == TRUE_C


def test_eliminate_parity_contradiction():
    assert eliminate_var(pa_and(Divides(2, x), Divides(2, x + 1)), "x") == FALSE_C


def test_eliminate_interval():
    g = eliminate_var(pa_and(le(a, x), le(x, b)), "x")
    assert pa_free_vars(g) <= {"a", "b"}
    for av in range(-5, 6):
        for bv in range(-5, 6):
            assert evaluate_pa(g, {"a": av, "b": bv}) == (av <= bv)


def test_eliminate_with_coefficients_and_congruence():
    # exists x. 3x = a and 2 | x   <=>   6 | a
    g = eliminate_var(pa_and(eq(x * 3, a), Divides(2, x)), "x")
    for av in range(-30, 31):
        assert evaluate_pa(g, {"a": av}) == (av % 6 == 0)


def test_eliminate_absent_variable_is_identity():
    f = le(y, 3)
    assert evaluate_pa(eliminate_var(f, "x"), {"y": 3})


def test_elimination_fuzz_small():
    r = random.Random(11)
    yy, zz = np.meshgrid(np.arange(-8, 9), np.arange(-8, 9), indexing="ij")
    for _ in range(40):
        f = random_pa(r)
        g = eliminate_var(f, "x")
        assert quantifier_free(g) and "x" not in pa_free_vars(g)
        expected = exists_on_window(f, "x", ["y", "z"], -8, 8, 64)
        assert (np_eval(g, {"y": yy, "z": zz}) == expected).all()


def _negated(f):
    if isinstance(f, PNot):
        return [type(f.operand)]
    return [t for g in getattr(f, "args", ()) for t in _negated(g)]


def test_nnf_pushes_negation():
    f = PNot(pa_and(le(x, 1), Divides(2, y)))
    g = nnf(f)
    env = [{"x": xv, "y": yv} for xv in range(-3, 4) for yv in range(-3, 4)]
    assert all(evaluate_pa(f, e) == evaluate_pa(g, e) for e in env)
    assert set(_negated(g)) <= {Divides}


def test_simplify_detects_trivia():
    assert simplify(pa_and(le(x, 3), le(4, x))) == FALSE_C
    assert simplify(pa_or(le(x, 3), le(4, x))) == TRUE_C


# ---------------------------------------------------------------- sentences

def forall_nat(v, body):
    return PForall(v, implies(ge(PATerm.var(v), 0), body))


def exists_nat(v, body):
    return PExists(v, pa_and(ge(PATerm.var(v), 0), body))


# (name, sentence, truth over the integers, finite-window oracle is faithful)
GOLDEN = [
    ("positive multiple of 3 above 7", PExists("x", pa_and(ge(x, 0), Divides(3, x), lt(7, x))), True, True),
    ("parity contradiction", PExists("x", pa_and(Divides(2, x), Divides(2, x + 1))), False, True),
    ("naturals are even or odd",
     forall_nat("x", exists_nat("y", pa_or(eq(x, y * 2), eq(x, y * 2 + 1)))), True, True),
    ("no natural solves x+1=0", PExists("x", pa_and(ge(x, 0), eq(x + 1, 0))), False, True),
    ("successor exists", PForall("x", PExists("y", eq(y, x + 1))), True, False),
    ("not all integers even", PForall("x", PExists("y", eq(x, y * 2))), False, True),
    ("two residues mod 2", PForall("x", pa_or(Divides(2, x), Divides(2, x + 1))), True, True),
    ("three residues mod 3",
     PForall("x", pa_or(Divides(3, x), Divides(3, x + 1), Divides(3, x + 2))), True, True),
    ("two residues do not cover mod 3", PForall("x", pa_or(Divides(3, x), Divides(3, x + 1))), False, True),
    ("bezout 2 and 3", PExists("x", PExists("y", eq(x * 2 + y * 3, 1))), True, True),
    ("gcd 2 blocks 1", PExists("x", PExists("y", eq(x * 4 + y * 6, 1))), False, True),
    ("lcm of 4 and 6", PExists("x", pa_and(Divides(6, x), Divides(4, x), pa_not(Divides(12, x)))), False, True),
    ("empty interval", PExists("x", pa_and(ge(x, 5), le(x, 4))), False, True),
    ("total order", PForall("x", PForall("y", pa_or(le(x, y), le(y, x)))), True, True),
    ("integers are not dense",
     PForall("x", PForall("y", implies(lt(x, y), PExists("z", pa_and(lt(x, z), lt(z, y)))))), False, True),
    ("strict means plus one", PForall("x", PForall("y", implies(lt(x, y), le(x + 1, y)))), True, True),
    ("3x=7 unsolvable", PExists("x", eq(x * 3, 7)), False, True),
    ("even in [5,6]", PExists("x", pa_and(le(5, x * 2), le(x * 2, 6))), True, True),
    ("no multiple of 3 is 5", PExists("x", pa_and(le(5, x * 3), le(x * 3, 5))), False, True),
    ("floor of half", forall_nat("x", exists_nat("y", pa_and(le(y * 2, x), lt(x, y * 2 + 2)))), True, True),
    ("multiples of 7 unbounded", PForall("x", PExists("y", pa_and(lt(x, y), Divides(7, y)))), True, False),
    ("no least integer", PExists("x", PForall("y", le(x, y))), False, False),
    ("coins 3 and 5 pay every amount from 8",
     forall_nat("x", exists_nat("y", exists_nat("z", eq(x + 8, y * 3 + z * 5)))), True, True),
    ("some amount cannot be paid with 3 and 5",
     exists_nat("x", forall_nat("y", forall_nat("z", pa_not(eq(x, y * 3 + z * 5))))), True, True),
]


@pytest.mark.parametrize("name,sentence,truth,window", GOLDEN, ids=[g[0] for g in GOLDEN])
def test_golden_sentences(name, sentence, truth, window):
    assert decide_sentence(sentence) is truth
    if window:
        assert evaluate_pa(sentence, {}, domain=range(-24, 25)) is truth


def test_decide_requires_closed():
    with pytest.raises(NotClosed):
        decide_sentence(PExists("x", le(x, y)))


def test_eliminate_quantifiers_keeps_free_vars():
    f = PForall("x", implies(le(0, x), le(y, x)))  # y <= every natural  <=>  y <= 0
    g = eliminate_quantifiers(f)
    assert quantifier_free(g)
    for yv in range(-6, 7):
        assert evaluate_pa(g, {"y": yv}) == (yv <= 0)


def test_smtlib_text():
    text = to_smtlib(PExists("x", pa_and(le(x * 2, y), Divides(3, x))))
    assert text.count("(") == text.count(")")
    assert "exists" in text and "mod" in text


def test_simplify_and_nnf_preserve_meaning():
    r = random.Random(3)
    grid = np.meshgrid(*([np.arange(-7, 8)] * 3), indexing="ij")
    env = dict(zip("xyz", grid))
    for _ in range(150):
        f = random_pa(r)
        truth = np_eval(f, env)
        assert (np_eval(simplify(f), env) == truth).all()
        assert (np_eval(nnf(f), env) == truth).all()
