"""LTL with step-quantified next operators: evaluation, Presburger compilation,
Peano encodings, and Buechi automata for the union of the P(k) properties."""

from .buechi import (
    NBA, AcceptedNonMember, LassoRun, Pump, RejectedMember, nba_member, parse_nba,
    pk_automaton, refute_recognizer, render_nba, union_automaton, universal_automaton,
)
from .evaluation import Bounds, Verdict, compile_formula, eval_bounded, holds_exact
from .formula import (
    Formula, ParseError, ScopeError, StepTerm, normalize_term, parse_formula, parse_term,
    render_formula, substitute_term, to_pnf,
)
from .peano import build_predicate, flatten, parse_peano, render_peano, translate
from .presburger import decide_sentence, eliminate_quantifiers, eliminate_var, evaluate_pa
from .words import (
    ComputableWord, LassoWord, Member, NonMember, is_in_union_pk, letter_at, parse_lasso,
    render_lasso, squares_word,
)

__version__ = "0.1.0"
