"""Infinite words: lasso (ultimately periodic) words and rule-defined words.

Lasso text format, one line::

    props p q | {p};{} | {p,q};{}

i.e. ``props <id>... | <prefix> | <loop>`` with ``;``-separated letters.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Iterable

from .formula import ParseError

__all__ = [
    "Letter", "LassoWord", "ComputableWord", "Member", "NonMember",
    "letter_at", "parse_lasso", "parse_letter", "render_letter", "render_lasso",
    "squares_word", "is_in_union_pk", "pk_oracle", "holds_on_multiples",
]

Letter = frozenset  # frozenset[str]

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class LassoWord:
    props: frozenset[str]
    prefix: tuple[frozenset[str], ...]
    loop: tuple[frozenset[str], ...]

    def __post_init__(self):
        if not self.loop:
            raise ValueError("loop of a lasso word must be nonempty")
        for letter in self.prefix + self.loop:
            unknown = letter - self.props
            if unknown:
                raise ValueError(f"unknown propositions {sorted(unknown)}")

    @classmethod
    def build(cls, props: Iterable[str], prefix: Iterable[Iterable[str]],
              loop: Iterable[Iterable[str]]) -> LassoWord:
        return cls(frozenset(props), tuple(frozenset(x) for x in prefix),
                   tuple(frozenset(x) for x in loop))

    @property
    def s(self) -> int:
        return len(self.prefix)

    @property
    def l(self) -> int:
        return len(self.loop)

    def canonical_position(self, i: int) -> int:
        """Smallest position carrying the same suffix as position ``i``."""
        s = len(self.prefix)
        return i if i < s else s + (i - s) % len(self.loop)

    def letter_at(self, i: int) -> frozenset[str]:
        s = len(self.prefix)
        if i < s:
            return self.prefix[i]
        return self.loop[(i - s) % len(self.loop)]

    def __str__(self) -> str:
        return render_lasso(self)


@dataclass(frozen=True, eq=False)
class ComputableWord:
    """Word given by a total, side-effect-free rule ``position -> letter``."""

    props: frozenset[str]
    rule: Callable[[int], frozenset[str]]
    name: str = "computable"

    def letter_at(self, i: int) -> frozenset[str]:
        return self.rule(i)

    def __str__(self) -> str:
        return self.name


def letter_at(w: LassoWord | ComputableWord, i: int) -> frozenset[str]:
    return w.letter_at(i)


# ---------------------------------------------------------------- text format


def parse_letter(text: str, props: frozenset[str] | None = None,
                 source: str = "", offset: int = 0) -> frozenset[str]:
    t = text.strip()
    if not (t.startswith("{") and t.endswith("}")):
        raise ParseError(f"bad letter {t!r}", source or text, offset)
    inner = t[1:-1].strip()
    names = [n.strip() for n in inner.split(",")] if inner else []
    for n in names:
        if not _IDENT.match(n):
            raise ParseError(f"bad proposition name {n!r}", source or text, offset)
        if props is not None and n not in props:
            raise ParseError(f"unknown proposition {n!r}", source or text, offset)
    return frozenset(names)


def _letters(text: str, props, source: str, offset: int) -> tuple[frozenset[str], ...]:
    if not text.strip():
        return ()
    out = []
    for chunk in text.split(";"):
        out.append(parse_letter(chunk, props, source, offset))
        offset += len(chunk) + 1
    return tuple(out)


def parse_lasso(text: str) -> LassoWord:
    src = text.strip()
    parts = src.split("|")
    if len(parts) != 3:
        raise ParseError("expected 'props ... | prefix | loop'", src, 0)
    head, prefix, loop = parts
    words = head.split()
    if not words or words[0] != "props":
        raise ParseError("expected 'props' header", src, 0)
    for n in words[1:]:
        if not _IDENT.match(n):
            raise ParseError(f"bad proposition name {n!r}", src, 0)
    props = frozenset(words[1:])
    pre = _letters(prefix, props, src, len(head) + 1)
    lp = _letters(loop, props, src, len(head) + len(prefix) + 2)
    if not lp:
        raise ParseError("empty loop", src, len(src))
    return LassoWord(props, pre, lp)


def render_letter(letter: Iterable[str]) -> str:
    return "{" + ",".join(sorted(letter)) + "}"


def render_lasso(w: LassoWord) -> str:
    props = " ".join(sorted(w.props))
    pre = ";".join(render_letter(x) for x in w.prefix)
    loop = ";".join(render_letter(x) for x in w.loop)
    return f"props {props} | {pre} | {loop}"


# -------------------------------------------------------------- squares word


def _is_square(i: int) -> bool:
    return i >= 0 and math.isqrt(i) ** 2 == i


def squares_word(props: Iterable[str] = ("p", "q")) -> ComputableWord:
    """Each requested proposition holds exactly at perfect squares."""
    props = frozenset(props)
    if not props <= {"p", "q"}:
        raise ValueError("squares_word supports propositions p and q only")
    hit, miss = props, frozenset()
    return ComputableWord(props, lambda i: hit if _is_square(i) else miss,
                          name=f"squares({','.join(sorted(props))})")


# ---------------------------------------------------- union of P(k) languages


@dataclass(frozen=True)
class Member:
    k: int


@dataclass(frozen=True)
class NonMember:
    p_at_zero: bool
    residue: int  # loop index that every large multiple of any k hits


def holds_on_multiples(w: LassoWord, k: int, upto: int, prop: str = "p") -> bool:
    return all(prop in w.letter_at(i) for i in range(0, upto + 1, k))


def pk_oracle(w: LassoWord, prop: str = "p") -> int | None:
    """Brute force: least k <= s+3l with ``prop`` at every multiple of k.

    Multiples are checked up to ``s + k*l + k``; past ``s`` the loop index of
    ``j*k`` is periodic in ``j`` with period ``l``, so this is exhaustive.
    """
    s, l = w.s, w.l
    for k in range(1, s + 3 * l + 1):
        if holds_on_multiples(w, k, s + k * l + k, prop):
            return k
    return None


def is_in_union_pk(w: LassoWord, prop: str = "p") -> Member | NonMember:
    """Decide whether ``prop`` holds at all multiples of some k >= 1.

    Past the prefix, ``j*k`` lands on loop index ``(j*k - s) mod l``; taking
    ``j`` a multiple of ``l`` shows index ``(-s) mod l`` is unavoidable, and
    a k that is a multiple of ``l`` larger than ``s`` hits nothing else.
    """
    if prop not in w.props:
        raise ValueError(f"word has no proposition {prop!r}")
    s, l = w.s, w.l
    r0 = (l - s % l) % l
    at_zero = prop in w.letter_at(0)
    if at_zero and prop in w.loop[r0]:
        k = l * -(-(s + 1) // l)
        if not holds_on_multiples(w, k, s + k * l + k, prop):
            raise AssertionError(f"period {k} failed verification on {w}")
        return Member(k)
    return NonMember(at_zero, r0)
