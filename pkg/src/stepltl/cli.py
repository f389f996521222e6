"""Command-line front end: ``stepltl <command> ...``.

Exit status: 0 true/accepted/success, 1 false/rejected/non-member,
2 usage or input error, 3 bounded verdict unknown.
"""
from __future__ import annotations

import argparse
import os
import sys
from typing import Sequence

from .buechi import AcceptedNonMember, nba_member, parse_nba, pk_automaton, refute_recognizer, render_nba
from .evaluation import Bounds, Verdict, eval_bounded, holds_exact
from .formula import ParseError, free_step_vars, parse_formula, render_formula
from .peano import parse_peano, translate
from .words import LassoWord, parse_lasso, squares_word

EXIT = {Verdict.TRUE: 0, Verdict.FALSE: 1, Verdict.UNKNOWN: 3}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")

    def exit(self, status=0, message=None):
        # only reached for --help
        raise _HelpExit(status, message or "")


class _HelpExit(Exception):
    def __init__(self, status, message):
        self.status, self.message = status, message


def _source(arg: str, what: str) -> str:
    """Read ``arg`` as a file if one exists at that path, else take it literally."""
    if os.path.isfile(arg):
        try:
            with open(arg, encoding="utf-8") as fh:
                return fh.read()
        except OSError as e:
            raise UsageError(f"cannot read {what} file {arg!r}: {e.strerror}") from None
    if arg.endswith((".ltl", ".lasso", ".nba", ".pa", ".txt")):
        raise UsageError(f"cannot read {what} file {arg!r}: no such file")
    return arg


def _word(arg: str):
    if arg.strip() == "squares":
        return squares_word()
    text = _source(arg, "word")
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if len(lines) != 1:
        raise UsageError("word file must contain exactly one lasso line")
    return parse_lasso(lines[0])


def _binding(text: str) -> tuple[str, int]:
    name, sep, value = text.partition("=")
    if not sep or not name.strip() or not value.strip().isdigit():
        raise argparse.ArgumentTypeError(f"expected NAME=NATURAL, got {text!r}")
    return name.strip(), int(value)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="stepltl", description="Step-quantified LTL toolkit.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ev = sub.add_parser("eval", help="evaluate a formula on a word")
    ev.add_argument("-f", "--formula", required=True, help="formula file or inline text")
    ev.add_argument("-w", "--word", required=True, help="lasso file, inline lasso, or 'squares'")
    mode = ev.add_mutually_exclusive_group()
    mode.add_argument("--exact", dest="mode", action="store_const", const="exact")
    mode.add_argument("--bounded", dest="mode", action="store_const", const="bounded")
    ev.add_argument("-B", type=int, default=Bounds.B, help="quantifier bound (bounded mode)")
    ev.add_argument("-H", type=int, default=Bounds.H, help="scan horizon (bounded mode)")
    ev.add_argument("-i", "--position", type=int, default=0)
    ev.add_argument("--bind", action="append", type=_binding, default=[], metavar="K=N")

    en = sub.add_parser("encode", help="translate a Peano formula into the core fragment")
    en.add_argument("-p", "--peano", required=True, help="Peano formula file or inline text")
    en.add_argument("--hoist", action="store_true", help="assert L_p/L_q once at the top")
    en.add_argument("--macros", action="store_true", help="print with named templates")

    rf = sub.add_parser("refute", help="refute that an automaton recognizes the union of P(k)")
    rf.add_argument("-a", "--automaton", required=True)

    pk = sub.add_parser("pk", help="print the P(k) automaton")
    pk.add_argument("-k", type=int, required=True)
    pk.add_argument("-o", "--output")

    mb = sub.add_parser("member", help="lasso membership in an automaton")
    mb.add_argument("-a", "--automaton", required=True)
    mb.add_argument("-w", "--word", required=True)

    ck = sub.add_parser("check", help="parse and scope-check a formula")
    ck.add_argument("-f", "--formula", required=True)
    return p


def _states(states) -> str:
    return ",".join(map(str, states))


def _eval(ns) -> tuple[int, str]:
    f = parse_formula(_source(ns.formula, "formula"))
    w = _word(ns.word)
    v = dict(ns.bind)
    missing = free_step_vars(f) - v.keys()
    if missing:
        raise UsageError(f"unbound step variables: {', '.join(sorted(missing))} (use --bind)")
    mode = ns.mode or ("exact" if isinstance(w, LassoWord) else "bounded")
    if mode == "exact":
        if not isinstance(w, LassoWord):
            raise UsageError("exact mode requires a lasso word")
        verdict = Verdict.of(holds_exact(f, w, v, ns.position))
    else:
        verdict = eval_bounded(f, w, ns.position, v, Bounds(ns.B, ns.H))
    return EXIT[verdict], str(verdict)


def _encode(ns) -> tuple[int, str]:
    g = translate(parse_peano(_source(ns.peano, "Peano formula")), hoist=ns.hoist, keep_macros=ns.macros)
    return 0, render_formula(g, macros=ns.macros)


def _refute(ns) -> tuple[int, str]:
    a = parse_nba(_source(ns.automaton, "automaton"))
    wit = refute_recognizer(a)
    lines = [f"states {a.n_states}"]
    if isinstance(wit, AcceptedNonMember):
        p = wit.pump
        lines += [
            f"WITNESS kind={wit.kind} m={p.m} block_start={p.block_start} i={p.i} j={p.j} ell={p.ell}",
            f"WITNESS word={wit.word}",
            f"WITNESS run={_states(wit.run.states)} cycle_start={wit.run.cycle_start}",
        ]
    else:
        lines += [f"WITNESS kind={wit.kind} k={wit.k}", f"WITNESS word={wit.word}"]
    return 0, "\n".join(lines)


def _pk(ns) -> tuple[int, str]:
    text = render_nba(pk_automaton(ns.k))
    if ns.output:
        try:
            with open(ns.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as e:
            raise UsageError(f"cannot write {ns.output!r}: {e.strerror}") from None
        return 0, f"wrote {ns.output}"
    return 0, text.rstrip("\n")


def _member(ns) -> tuple[int, str]:
    a = parse_nba(_source(ns.automaton, "automaton"))
    w = _word(ns.word)
    if not isinstance(w, LassoWord):
        raise UsageError("membership requires a lasso word")
    run = nba_member(a, w)
    if run is None:
        return 1, "rejected"
    return 0, f"accepted\nrun {_states(run.states)} cycle_start={run.cycle_start}"


def _check(ns) -> tuple[int, str]:
    f = parse_formula(_source(ns.formula, "formula"))
    free = sorted(free_step_vars(f))
    lines = [render_formula(f), "closed" if not free else "free " + " ".join(free)]
    return 0, "\n".join(lines)


COMMANDS = {"eval": _eval, "encode": _encode, "refute": _refute, "pk": _pk,
            "member": _member, "check": _check}


def run(argv: Sequence[str]) -> tuple[int, str, str]:
    """Execute one command; returns (status, stdout text, stderr text)."""
    try:
        ns = build_parser().parse_args(list(argv))
        status, out = COMMANDS[ns.command](ns)
        return status, out, ""
    except _HelpExit as e:
        return e.status, "", e.message
    except UsageError as e:
        return 2, "", f"error: {e}"
    except ParseError as e:
        return 2, "", f"parse error: {e}"
    except ValueError as e:
        return 2, "", f"error: {e}"


def main(argv: Sequence[str] | None = None) -> int:
    status, out, err = run(sys.argv[1:] if argv is None else argv)
    if out:
        print(out)
    if err:
        print(err, file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
