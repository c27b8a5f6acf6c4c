"""Command-line front end.

Subcommands: ``include nfa|cfg|ocn`` for the inclusion checkers, ``search``
for counting (and reporting) matching lines in SLP-compressed text,
``compress``/``decompress`` for the built-in pair compressor,
``residualize``/``canonical``/``double-reversal``/``check-dr`` for the
residual constructions, and ``learn`` to run the active learner against a
target automaton file.

Exit codes: 0 success, 1 a requested --fail-on-miss inclusion does not
hold, 2 usage error, 3 malformed input file. ``TOOL_ITER_CAP`` overrides
the fixpoint iteration caps.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import inclusion, residual
from .automata import Nfa, Verdict, equivalence_counterexample
from .formats import (
    FormatError,
    dump_nfa,
    dump_slp_binary,
    dump_slp_text,
    load_slp,
    parse_cnf,
    parse_nfa,
    parse_ocn,
)
from .learn import nl_learn
from .slpsearch.counting import NEWLINE, SearchEngine
from .slpsearch.regex import compile_regex, homogeneous_dfa, homogeneous_kind, parse_regex
from .slpsearch.slp import decompress, repair_compress

USAGE_ERROR = 2
INPUT_ERROR = 3


def _iter_cap() -> int:
    value = os.environ.get("TOOL_ITER_CAP")
    return int(value) if value else inclusion.DEFAULT_ITER_CAP


def _read(path: str) -> bytes:
    with open(path, "rb") as handle:
        return handle.read()


def _write_out(data: bytes, path: str | None) -> None:
    if path is None:
        sys.stdout.buffer.write(data)
    else:
        with open(path, "wb") as handle:
            handle.write(data)


def _render_word(word: bytes) -> str:
    return word.decode("latin-1")


def _emit(args, human: str, payload: dict) -> None:
    if args.json:
        base = {"verdict": None, "count": None, "witness": None, "stats": None}
        base.update(payload)
        print(json.dumps(base))
    else:
        print(human)


def _verdict_output(args, verdict: Verdict, stats: dict | None) -> int:
    if verdict.included:
        human = "INCLUDED"
    elif verdict.witness is not None:
        human = f"NOT INCLUDED witness={_render_word(verdict.witness)}"
    else:
        human = "NOT INCLUDED"
    if args.stats and stats and not args.json:
        human += "  " + " ".join(f"{k}={v}" for k, v in stats.items())
    _emit(
        args,
        human,
        {
            "verdict": "included" if verdict.included else "not_included",
            "witness": None if verdict.witness is None else _render_word(verdict.witness),
            "stats": stats if args.stats else None,
        },
    )
    if not verdict.included and getattr(args, "fail_on_miss", False):
        return 1
    return 0


def _cmd_include_nfa(args) -> int:
    left = parse_nfa(_read(args.left))
    right = parse_nfa(_read(args.right))
    cap = _iter_cap()
    algo = args.algo
    if algo == "word-nerode":
        verdict = inclusion.fa_inc_word(
            left, inclusion.nerode_handle(right, "left"), right.member, cap
        )
    elif algo == "word-state":
        verdict = inclusion.fa_inc_word(
            left, inclusion.state_handle(right, "left"), right.member, cap
        )
    elif algo == "word-sim":
        verdict = inclusion.fa_inc_word(
            left, inclusion.sim_handle(right, "left"), right.member, cap
        )
    elif algo == "antichain-fwd":
        verdict = inclusion.fa_inc_antichain(left, right, "forward", cap)
    elif algo == "antichain-bwd":
        verdict = inclusion.fa_inc_antichain(left, right, "backward", cap)
    else:  # gfp
        verdict = inclusion.fa_inc_gfp(left, right.determinize())
    return _verdict_output(args, verdict, {"algo": algo})


def _cmd_include_cfg(args) -> int:
    grammar = parse_cnf(_read(args.left))
    right = parse_nfa(_read(args.right))
    cap = _iter_cap()
    if args.algo == "antichain":
        verdict = inclusion.cfg_inc_antichain(grammar, right, cap)
    elif args.algo == "word-myhill":
        verdict = inclusion.cfg_inc_word(
            grammar, inclusion.myhill_handle(right), right.member, cap
        )
    else:  # word-ctx
        verdict = inclusion.cfg_inc_word(
            grammar, inclusion.ctx_handle(right), right.member, cap
        )
    return _verdict_output(args, verdict, {"algo": args.algo})


def _cmd_include_ocn(args) -> int:
    left = parse_nfa(_read(args.left))
    net = parse_ocn(_read(args.right))
    verdict = inclusion.nfa_in_ocn(left, net, (args.state, args.counter))
    return _verdict_output(args, verdict, {"algo": "word-macro"})


def _pattern_automaton(pattern: str, engine: str) -> Nfa:
    ast = parse_regex(pattern)
    if engine in ("auto", "dfa"):
        kind = homogeneous_kind(ast)
        if kind is not None:
            return homogeneous_dfa(ast, kind)
        if engine == "dfa":
            raise SystemExit("pattern is not homogeneous; no DFA fast path")
    return compile_regex(ast)


def _cmd_search(args) -> int:
    slp = load_slp(_read(args.file))
    nfa = _pattern_automaton(args.expression, args.engine)
    if NEWLINE in nfa.alphabet:
        print("error: pattern must not match the newline byte", file=sys.stderr)
        return USAGE_ERROR
    engine = SearchEngine(slp, nfa)
    count = engine.line_count()
    stats = {
        "rules": engine.stats.rules,
        "automaton_states": engine.stats.automaton_states,
        "compose_steps": engine.stats.compose_steps,
        "inner_iters": engine.stats.inner_iters,
    }
    lines = list(engine.report()) if args.report else None
    if args.json:
        payload = {"count": count, "stats": stats if args.stats else None}
        if lines is not None:
            payload["lines"] = [
                {"line": no, "text": _render_word(text)} for no, text in lines
            ]
        _emit(args, "", payload)
    else:
        print(count)
        if lines is not None:
            for no, text in lines:
                print(f"{no}:{_render_word(text)}")
        if args.stats:
            print(" ".join(f"{k}={v}" for k, v in stats.items()), file=sys.stderr)
    return 0


def _cmd_compress(args) -> int:
    text = _read(args.file)
    slp = repair_compress(text)
    data = dump_slp_text(slp) if args.text else dump_slp_binary(slp)
    _write_out(data, args.output)
    return 0


def _cmd_decompress(args) -> int:
    slp = load_slp(_read(args.file))
    _write_out(decompress(slp, cap=args.cap), args.output)
    return 0


def _cmd_construction(args) -> int:
    nfa = parse_nfa(_read(args.file))
    if args.construction == "residualize":
        out = residual.res(nfa, args.direction)
    elif args.construction == "canonical":
        out = residual.canonical(nfa, args.direction)
    else:  # double-reversal
        out = residual.double_reversal_canonical(nfa)
    _write_out(dump_nfa(out), args.output)
    return 0


def _cmd_check_dr(args) -> int:
    nfa = parse_nfa(_read(args.file))
    holds = residual.check_dr_condition(nfa)
    _emit(
        args,
        "HOLDS" if holds else "DOES NOT HOLD",
        {"verdict": "holds" if holds else "does-not-hold"},
    )
    return 0


def _cmd_learn(args) -> int:
    target = parse_nfa(_read(args.file))
    learned = nl_learn(
        target.member,
        lambda candidate: equivalence_counterexample(candidate, target),
        sorted(target.alphabet),
    )
    _write_out(dump_nfa(learned), args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wqlang",
        description="Language inclusion, compressed search and residual automata.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    include = sub.add_parser("include", help="decide a language inclusion")
    inc_sub = include.add_subparsers(dest="flavor", required=True)
    common = dict(add_help=True)

    inc_nfa = inc_sub.add_parser("nfa", **common)
    inc_nfa.add_argument("left")
    inc_nfa.add_argument("right")
    inc_nfa.add_argument(
        "--algo",
        default="antichain-fwd",
        choices=[
            "word-nerode",
            "word-state",
            "word-sim",
            "antichain-fwd",
            "antichain-bwd",
            "gfp",
        ],
    )
    _common_verdict_flags(inc_nfa)
    inc_nfa.set_defaults(func=_cmd_include_nfa)

    inc_cfg = inc_sub.add_parser("cfg", **common)
    inc_cfg.add_argument("left")
    inc_cfg.add_argument("right")
    inc_cfg.add_argument(
        "--algo", default="antichain", choices=["antichain", "word-myhill", "word-ctx"]
    )
    _common_verdict_flags(inc_cfg)
    inc_cfg.set_defaults(func=_cmd_include_cfg)

    inc_ocn = inc_sub.add_parser("ocn", **common)
    inc_ocn.add_argument("left")
    inc_ocn.add_argument("right")
    inc_ocn.add_argument("--state", type=int, default=0)
    inc_ocn.add_argument("--counter", type=int, default=0)
    _common_verdict_flags(inc_ocn)
    inc_ocn.set_defaults(func=_cmd_include_ocn)

    search = sub.add_parser("search", help="count matching lines in an SLP file")
    search.add_argument("-e", "--expression", required=True)
    search.add_argument("file")
    search.add_argument("--report", action="store_true")
    search.add_argument("--engine", default="auto", choices=["auto", "nfa", "dfa"])
    search.add_argument("--stats", action="store_true")
    search.add_argument("--json", action="store_true")
    search.set_defaults(func=_cmd_search)

    compress = sub.add_parser("compress", help="compress a file into an SLP")
    compress.add_argument("file")
    compress.add_argument("-o", "--output")
    compress.add_argument("--text", action="store_true", help="text SLP format")
    compress.set_defaults(func=_cmd_compress)

    decompress_p = sub.add_parser("decompress", help="expand an SLP file")
    decompress_p.add_argument("file")
    decompress_p.add_argument("-o", "--output")
    decompress_p.add_argument("--cap", type=int, default=1 << 26)
    decompress_p.set_defaults(func=_cmd_decompress)

    for name in ("residualize", "canonical", "double-reversal"):
        c = sub.add_parser(name, help=f"{name} an automaton")
        c.add_argument("file")
        c.add_argument("-o", "--output")
        if name != "double-reversal":
            c.add_argument("--direction", default="right", choices=["right", "left"])
        c.set_defaults(func=_cmd_construction, construction=name)

    check = sub.add_parser(
        "check-dr", help="does residualization give the canonical automaton?"
    )
    check.add_argument("file")
    check.add_argument("--json", action="store_true")
    check.add_argument("--stats", action="store_true")
    check.set_defaults(func=_cmd_check_dr)

    learn = sub.add_parser("learn", help="learn the canonical RFA of a target")
    learn.add_argument("file")
    learn.add_argument("-o", "--output")
    learn.set_defaults(func=_cmd_learn)
    return parser


def _common_verdict_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--fail-on-miss", action="store_true")
    p.add_argument("--json", action="store_true")
    p.add_argument("--stats", action="store_true")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
