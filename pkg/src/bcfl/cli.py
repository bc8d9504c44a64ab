"""Command line entry point: ``bcfl <command> ...``."""

from __future__ import annotations

import argparse
import json
import sys

from . import kleene
from .automata import format_automaton, member_finite, member_lasso, muller_to_buchi, parse_automaton
from .cfgwords import words_up_to
from .decompose import scattered_bcfg_to_expr, wellordered_bcfg_to_expr
from .errors import AnalysisError, ParseError, ReproductiveInput
from .grammar import Buchi, Muller, format_grammar, parse_grammar
from .mu import compile_to_bcfg, format_expr, parse_expr
from .rank import rank_report
from .sampler import SampleConfig, sample_with_witnesses, validate
from .transform import analyze, finite_fragment, mcfg_to_bcfg, normalize_acceptance
from .words import format_term, rank, size


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _grammar(path):
    return parse_grammar(_read(path))


def _letters(text: str) -> list:
    if text in ("", "eps", "ε", "ϵ"):
        return []
    return text.split() if " " in text else list(text)


def _emit(args, data: dict, text: str):
    if args.json:
        print(json.dumps({"schema": 1, **data}, sort_keys=True))
    else:
        print(text)


def cmd_analyze(args):
    report = analyze(_grammar(args.grammar)).to_dict()
    lines = [f"{k}: {v}" for k, v in report.items()]
    _emit(args, report, "\n".join(lines))


def cmd_to_bcfg(args):
    g = _grammar(args.grammar)
    if isinstance(g.acceptance, Muller):
        out = mcfg_to_bcfg(normalize_acceptance(g))
    else:
        out = g.replace(acceptance=g.acceptance or Buchi())
    text = format_grammar(out)
    _emit(args, {"grammar": text}, text.rstrip("\n"))


def cmd_compile_expr(args):
    src = _read(args.file) if args.file else args.expr
    if src is None:
        raise ParseError("give an expression or --file")
    e = parse_expr(src, dialect=args.dialect)
    text = format_grammar(compile_to_bcfg(e))
    _emit(args, {"expr": format_expr(e), "grammar": text}, text.rstrip("\n"))


def cmd_extract_expr(args):
    g = _grammar(args.grammar)
    e = wellordered_bcfg_to_expr(g) if args.well_ordered else scattered_bcfg_to_expr(g)
    text = format_expr(e)
    _emit(args, {"expr": text}, text)


def cmd_kleene(args):
    g = _grammar(args.grammar)
    rep = kleene.linear_bcfg_to_kleene(g)
    summands = [{"U": kleene.format_pair_expr(u), "V": kleene.format_pair_expr(v)} for u, v in rep.summands]
    data = {"finitePart": format_grammar(rep.finite_part), "summands": summands}
    lines = ["L0 = finite part:", format_grammar(rep.finite_part).rstrip("\n")]
    lines += [f"+ ({s['U']}) o ({s['V']})^w" for s in summands]
    if args.well_ordered:
        regs = [{"K0": kleene.format_regex(k0), "K1": kleene.format_regex(k1)}
                for k0, k1 in kleene.wellordered_specialize(rep)]
        data["wellOrdered"] = regs
        lines += [f"+ {r['K0']} ({r['K1']})^w" for r in regs]
    _emit(args, data, "\n".join(lines))


def cmd_rank(args):
    report = rank_report(_grammar(args.grammar))
    d = report.to_dict()
    d.pop("schema")
    _emit(args, d, f"rrange: {d['rrange']}\nrmax: {d['rmax']}\nrmin: {d['rmin']}")


def cmd_sample(args):
    g = _grammar(args.grammar)
    cfg = SampleConfig(args.depth, args.lasso, args.nesting, args.size, args.loop_size)
    found = sample_with_witnesses(g, cfg)
    rows = []
    for term, wit in sorted(found.items(), key=lambda kv: (size(kv[0]), format_term(kv[0]))):
        if not validate(g, term, wit):
            raise AnalysisError(f"sampled term {format_term(term)} failed validation")
        rows.append({"term": format_term(term), "rank": rank(term)})
    _emit(args, {"terms": rows}, "\n".join(r["term"] for r in rows))


def cmd_fragment(args):
    frag = finite_fragment(_grammar(args.grammar))
    data = {"grammar": format_grammar(frag)}
    text = data["grammar"].rstrip("\n")
    if args.max_length is not None:
        words = sorted(words_up_to(frag, args.max_length), key=lambda w: (len(w), w))
        data["words"] = [" ".join(w) for w in words]
        text = "\n".join(" ".join(w) or "eps" for w in words)
    _emit(args, data, text)


def cmd_member_finite(args):
    a = parse_automaton(_read(args.automaton))
    ok = member_finite(a, _letters(args.word))
    _emit(args, {"member": ok}, "yes" if ok else "no")


def cmd_member_lasso(args):
    a = parse_automaton(_read(args.automaton))
    ok = member_lasso(a, _letters(args.prefix), _letters(args.period))
    _emit(args, {"member": ok}, "yes" if ok else "no")


def cmd_to_buchi(args):
    text = format_automaton(muller_to_buchi(parse_automaton(_read(args.automaton))))
    _emit(args, {"automaton": text}, text.rstrip("\n"))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bcfl", description="Buchi and Muller context-free languages of countable words.")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, *positional, help=None):
        sp = sub.add_parser(name, help=help)
        for arg in positional:
            sp.add_argument(arg)
        sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
        sp.set_defaults(fn=fn)
        return sp

    add("analyze", cmd_analyze, "grammar", help="components, heights, productive and reproductive sets")
    add("to-bcfg", cmd_to_bcfg, "grammar", help="Muller grammar to an equivalent Buchi grammar")
    sp = add("compile-expr", cmd_compile_expr, help="fixpoint expression to a Buchi grammar")
    sp.add_argument("expr", nargs="?")
    sp.add_argument("--file")
    sp.add_argument("--dialect", choices=["scattered", "wellordered"], default="scattered")
    sp = add("extract-expr", cmd_extract_expr, "grammar", help="Buchi grammar in normal form to an expression")
    sp.add_argument("--well-ordered", action="store_true")
    sp = add("kleene", cmd_kleene, "grammar", help="pair-language representation of a linear grammar")
    sp.add_argument("--well-ordered", action="store_true")
    add("rank", cmd_rank, "grammar", help="rank range of the generated words")
    sp = add("sample", cmd_sample, "grammar", help="bounded lasso-tree sampling")
    sp.add_argument("--depth", type=int, default=6)
    sp.add_argument("--lasso", type=int, default=3)
    sp.add_argument("--nesting", type=int, default=2)
    sp.add_argument("--size", type=int, default=8)
    sp.add_argument("--loop-size", type=int, default=0)
    sp = add("fragment", cmd_fragment, "grammar", help="grammar of the finite words")
    sp.add_argument("--max-length", type=int)
    add("member-finite", cmd_member_finite, "automaton", "word", help="finite-word membership")
    add("member-lasso", cmd_member_lasso, "automaton", "prefix", "period", help="membership of prefix period^w")
    add("to-buchi", cmd_to_buchi, "automaton", help="Muller automaton to Buchi automaton")
    return p


def _fail(args, code, exc):
    if getattr(args, "json", False):
        data = {"schema": 1, "error": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, ReproductiveInput):
            data["witnesses"] = sorted(exc.witnesses)
        if isinstance(exc, ParseError) and exc.line is not None:
            data["line"], data["column"] = exc.line, exc.column
        print(json.dumps(data, sort_keys=True))
    else:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.fn(args)
    except AnalysisError as exc:
        return _fail(args, 1, exc)
    except (ParseError, OSError, ValueError) as exc:
        return _fail(args, 2, exc)
    return 0


if __name__ == "__main__":
    sys.exit(main())
