"""Nondeterministic Buechi automata over explicit letters (sets of propositions).

Text format, one directive per line (``#`` starts a comment)::

    props p
    states 2
    init 0
    accepting 0 1
    trans 0 {p} 1
    trans 1 {} 0
    trans 1 {p} 0
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .formula import ParseError
from .words import LassoWord, Member, NonMember, is_in_union_pk, parse_letter, pk_oracle, render_letter

__all__ = [
    "NBA", "LassoRun", "Pump", "RejectedMember", "AcceptedNonMember", "RefutationError",
    "parse_nba", "render_nba", "universal_automaton", "pk_automaton", "union_automaton",
    "nba_member", "refute_recognizer", "verify_witness", "all_letters",
]


def all_letters(props: Iterable[str]) -> list[frozenset[str]]:
    props = sorted(props)
    return [frozenset(c) for r in range(len(props) + 1) for c in itertools.combinations(props, r)]


@dataclass(frozen=True)
class NBA:
    props: frozenset[str]
    n_states: int
    initial: int
    accepting: frozenset[int]
    transitions: frozenset[tuple[int, frozenset[str], int]]

    def __post_init__(self):
        if self.n_states < 1:
            raise ValueError("an automaton needs at least one state")
        states = range(self.n_states)
        if self.initial not in states:
            raise ValueError(f"initial state {self.initial} out of range")
        for q in self.accepting:
            if q not in states:
                raise ValueError(f"accepting state {q} out of range")
        for src, letter, dst in self.transitions:
            if src not in states or dst not in states:
                raise ValueError(f"transition {src} -> {dst} uses an undefined state")
            if not letter <= self.props:
                raise ValueError(f"letter {render_letter(letter)} not over {sorted(self.props)}")

    @classmethod
    def build(cls, props, n_states, initial, accepting, transitions) -> NBA:
        return cls(frozenset(props), n_states, initial, frozenset(accepting),
                   frozenset((s, frozenset(a), d) for s, a, d in transitions))

    @cached_property
    def delta(self) -> dict[tuple[int, frozenset[str]], tuple[int, ...]]:
        out: dict = {}
        for src, letter, dst in sorted(self.transitions, key=_trans_key):
            out.setdefault((src, letter), []).append(dst)
        return {k: tuple(v) for k, v in out.items()}

    def successors(self, q: int, letter: frozenset[str]) -> tuple[int, ...]:
        return self.delta.get((q, letter), ())

    def __str__(self) -> str:
        return render_nba(self)


def _trans_key(t):
    src, letter, dst = t
    return (src, len(letter), sorted(letter), dst)


# ---------------------------------------------------------------- text format


def parse_nba(text: str) -> NBA:
    props = n = init = None
    accepting: list[int] = []
    trans: list = []
    offset = 0
    for raw in text.splitlines(keepends=True):
        line = raw.split("#", 1)[0].strip()
        here = offset
        offset += len(raw)
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        try:
            if head == "props":
                props = frozenset(rest.split())
            elif head == "states":
                n = int(rest)
            elif head == "init":
                init = int(rest)
            elif head == "accepting":
                accepting.extend(int(x) for x in rest.split())
            elif head == "trans":
                src, _, tail = rest.partition(" ")
                letter_text, _, dst = tail.rpartition(" ")
                if props is None:
                    raise ParseError("'props' must precede transitions", text, here)
                trans.append((int(src), parse_letter(letter_text, props, text, here), int(dst)))
            else:
                raise ParseError(f"unknown directive {head!r}", text, here)
        except ValueError as e:
            if isinstance(e, ParseError):
                raise
            raise ParseError(f"malformed line {line!r}", text, here) from None
    if props is None:
        raise ParseError("missing 'props'", text, len(text))
    if n is None:
        raise ParseError("missing 'states'", text, len(text))
    if init is None:
        raise ParseError("missing 'init'", text, len(text))
    try:
        return NBA.build(props, n, init, accepting, trans)
    except ValueError as e:
        raise ParseError(str(e), text, len(text)) from None


def render_nba(a: NBA) -> str:
    lines = [f"props {' '.join(sorted(a.props))}".rstrip(), f"states {a.n_states}", f"init {a.initial}"]
    if a.accepting:
        lines.append("accepting " + " ".join(map(str, sorted(a.accepting))))
    for src, letter, dst in sorted(a.transitions, key=_trans_key):
        lines.append(f"trans {src} {render_letter(letter)} {dst}")
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------------ builders


def universal_automaton(props: Iterable[str] = ("p",)) -> NBA:
    props = frozenset(props)
    return NBA.build(props, 1, 0, {0}, [(0, a, 0) for a in all_letters(props)])


def pk_automaton(k: int, props: Iterable[str] = ("p",), prop: str = "p") -> NBA:
    """Recognizer of "prop holds at every multiple of k".

    State ``r`` means "position is r mod k"; leaving state 0 requires
    ``prop``.  Every state is accepting.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    props = frozenset(props)
    if prop not in props:
        raise ValueError(f"{prop!r} must be among the propositions")
    trans = []
    for r in range(k):
        for a in all_letters(props):
            if r == 0 and prop not in a:
                continue
            trans.append((r, a, (r + 1) % k))
    return NBA.build(props, k, 0, range(k), trans)


def union_automaton(automata: Sequence[NBA], props: Iterable[str] = ("p",)) -> NBA:
    """Disjoint union behind a fresh initial state 0.

    State 0 copies the outgoing transitions of every component's initial
    state and is never re-entered.
    """
    if automata:
        props = automata[0].props
        for a in automata:
            if a.props != props:
                raise ValueError("alphabet mismatch between automata in union")
    props = frozenset(props)
    trans = []
    accepting = []
    offset = 1
    for a in automata:
        for src, letter, dst in a.transitions:
            trans.append((src + offset, letter, dst + offset))
            if src == a.initial:
                trans.append((0, letter, dst + offset))
        accepting.extend(q + offset for q in a.accepting)
        offset += a.n_states
    return NBA.build(props, offset, 0, accepting, trans)


# ---------------------------------------------------------------- membership


@dataclass(frozen=True)
class LassoRun:
    """Run ``states[0], states[1], ...`` repeating ``states[cycle_start:]`` forever."""

    states: tuple[int, ...]
    cycle_start: int

    @property
    def period(self) -> int:
        return len(self.states) - self.cycle_start

    def state_at(self, i: int) -> int:
        if i < len(self.states):
            return self.states[i]
        return self.states[self.cycle_start + (i - self.cycle_start) % self.period]

    def check(self, a: NBA, w: LassoWord) -> None:
        """Raise AssertionError unless this is an accepting run of ``a`` on ``w``."""
        n = len(self.states)
        assert 0 <= self.cycle_start < n, "cycle must be nonempty"
        assert self.states[0] == a.initial, "run must start in the initial state"
        assert self.cycle_start >= w.s, "cycle must lie in the periodic part of the word"
        assert self.period % w.l == 0, "cycle length must be a multiple of the loop length"
        for i in range(n):
            assert self.state_at(i + 1) in a.successors(self.states[i], w.letter_at(i)), \
                f"no transition at position {i}"
        assert any(q in a.accepting for q in self.states[self.cycle_start:]), \
            "cycle has no accepting state"


def _check_alphabet(a: NBA, w: LassoWord):
    if not w.props <= a.props:
        raise ValueError(f"word propositions {sorted(w.props)} not in automaton alphabet {sorted(a.props)}")


def nba_member(a: NBA, w: LassoWord) -> LassoRun | None:
    """Accepting lasso run of ``a`` on ``w``, or None if ``w`` is rejected.

    Searches the product of automaton states with word positions
    ``0 .. s+l-1`` (the position after ``s+l-1`` is ``s``) for a reachable
    accepting node lying on a cycle.
    """
    _check_alphabet(a, w)
    s, l = w.s, w.l
    size = s + l

    def succ(node):
        q, pos = node
        nxt = pos + 1 if pos + 1 < size else s
        return [(d, nxt) for d in a.successors(q, w.letter_at(pos))]

    start = (a.initial, 0)
    parent = {start: None}
    order = [start]
    queue = deque([start])
    while queue:
        node = queue.popleft()
        for nb in succ(node):
            if nb not in parent:
                parent[nb] = node
                order.append(nb)
                queue.append(nb)

    for v in order:
        if v[0] not in a.accepting:
            continue
        cycle = _path(succ, v, v)
        if cycle is None:
            continue
        stem = []
        node = v
        while node is not None:
            stem.append(node)
            node = parent[node]
        stem.reverse()
        states = [q for q, _ in stem[:-1]] + [q for q, _ in cycle[:-1]]
        run = LassoRun(tuple(states), len(stem) - 1)
        run.check(a, w)
        return run
    return None


def _path(succ, src, dst):
    """Shortest nonempty path src -> ... -> dst (BFS), as a node list."""
    parent = {}
    queue = deque()
    for nb in succ(src):
        if nb not in parent:
            parent[nb] = src
            queue.append(nb)
    while queue:
        node = queue.popleft()
        if node == dst:
            path = [node]
            node = parent[node]
            while node != src:
                path.append(node)
                node = parent[node]
            path.append(src)
            return path[::-1]
        for nb in succ(node):
            if nb not in parent:
                parent[nb] = node
                queue.append(nb)
    return None


# ---------------------------------------------------------------- refutation


class RefutationError(AssertionError):
    pass


@dataclass(frozen=True)
class Pump:
    m: int
    block_start: int
    i: int
    j: int
    ell: int


@dataclass(frozen=True)
class RejectedMember:
    word: LassoWord
    k: int

    kind = "RejectedMember"


@dataclass(frozen=True)
class AcceptedNonMember:
    word: LassoWord
    run: LassoRun
    pump: Pump
    original_run: LassoRun = field(compare=False, default=None)

    kind = "AcceptedNonMember"


def _spaced_word(props, m: int, prop: str = "p") -> LassoWord:
    hit, miss = frozenset({prop}), frozenset()
    return LassoWord(frozenset(props), (), (hit,) + (miss,) * m)


def refute_recognizer(a: NBA, prop: str = "p") -> RejectedMember | AcceptedNonMember:
    """Show that ``a`` does not recognize "prop holds periodically".

    With ``n`` states and ``m = n + 2`` the word ``(p; !p^m)^w`` belongs to
    the language.  If ``a`` rejects it, that is the witness.  Otherwise a
    state repeats inside one ``!p``-block of the accepting run; repeating
    that stretch ``ell`` more times yields an accepted word whose gap between
    ``p``s is not a multiple of ``m + 1``, so it is not periodic.
    """
    if prop not in a.props:
        raise ValueError(f"automaton alphabet lacks {prop!r}")
    n = a.n_states
    m = n + 2
    w = _spaced_word(a.props, m, prop)
    run = nba_member(a, w)
    if run is None:
        verdict = is_in_union_pk(w, prop)
        if not isinstance(verdict, Member) or verdict.k != m + 1:
            raise RefutationError(f"expected {w} to have period {m + 1}, got {verdict}")
        return RejectedMember(w, m + 1)

    width = m + 1
    t = -(-run.cycle_start // width)
    b = t * width
    block = [run.state_at(b + x) for x in range(m + 1)]  # index x -> position b + x
    pair = next(((i, j) for i in range(1, m + 1) for j in range(i + 1, m + 1)
                 if block[i] == block[j]), None)
    if pair is None:
        raise RefutationError("pigeonhole failed: no repeated state in block")
    i, j = pair
    ell = next(e for e in itertools.count(1) if (m + (j - i) * e + 1) % width != 0)
    extra = (j - i) * ell

    letters = [w.letter_at(x) for x in range(b + m + 1)]
    segment = letters[b + i + 1: b + j + 1]
    prefix = letters[: b + j + 1] + segment * ell + letters[b + j + 1:]
    pumped = LassoWord(w.props, tuple(prefix), w.loop)

    # run on the pumped word: original states with the i..j stretch repeated
    c = max(run.cycle_start, b + m + 1)
    head = [run.state_at(x) for x in range(c + run.period)]
    seg_states = head[b + i + 1: b + j + 1]
    states = head[: b + j + 1] + seg_states * ell + head[b + j + 1:]
    new_run = LassoRun(tuple(states), c + extra)
    try:
        new_run.check(a, pumped)
    except AssertionError as e:
        raise RefutationError(f"pumped run is invalid: {e}") from None
    if nba_member(a, pumped) is None:
        raise RefutationError("pumped word rejected")
    if not isinstance(is_in_union_pk(pumped, prop), NonMember):
        raise RefutationError(f"pumped word {pumped} is still periodic")
    return AcceptedNonMember(pumped, new_run, Pump(m, b, i, j, ell), run)


def verify_witness(a: NBA, witness, prop: str = "p") -> bool:
    """Independent re-check of a refutation witness."""
    if isinstance(witness, RejectedMember):
        k = witness.k
        w = witness.word
        return (nba_member(a, w) is None
                and pk_oracle(w, prop) is not None
                and all(prop in w.letter_at(x) for x in range(0, w.s + k * w.l + k + 1, k)))
    if isinstance(witness, AcceptedNonMember):
        try:
            witness.run.check(a, witness.word)
        except AssertionError:
            return False
        p = witness.pump
        return (nba_member(a, witness.word) is not None
                and isinstance(is_in_union_pk(witness.word, prop), NonMember)
                and pk_oracle(witness.word, prop) is None
                and 0 < p.i < p.j < p.m + 1)
    return False
