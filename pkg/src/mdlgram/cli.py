"""Command-line interface.

Subcommands: demo, induce, dl, generate, analyze.  Exit codes: 0 success,
1 validation or coverage failure, 2 I/O or parse failure.  A --corpus value
naming a built-in corpus (xyz1, xyz2, kick-bucket) is used directly when no
such file exists.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import dl, generate, io, semantics
from .grammar import Corpus, Grammar, ValidationError
from .induce import VARIANTS, InductionConfig
from .induce import induce as run_induction


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _IOFailure(f"cannot read {path}: {exc}") from exc


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise _IOFailure(f"cannot write {path}: {exc}") from exc


class _IOFailure(Exception):
    pass


class _CheckFailure(Exception):
    pass


def _load_corpus(source: str) -> Corpus:
    if not Path(source).exists() and source in io.DEMO_NAMES:
        return io.demo_corpus(source)
    return io.parse_corpus(_read(source))


def _load_grammar(path: str) -> Grammar:
    try:
        return io.parse_grammar(_read(path))
    except ValidationError as exc:
        raise _CheckFailure(f"invalid grammar {path}: {exc}") from exc


def _cmd_demo(args) -> None:
    corpus = io.demo_corpus(args.name)
    _write(args.out, io.serialize_corpus(corpus))


def _cmd_induce(args) -> None:
    corpus = _load_corpus(args.corpus)
    config = InductionConfig(variant=args.variant, penalty=args.penalty, limit=args.limit)
    grammar, trace = run_induction(corpus, config)
    if args.trace:
        _write(args.trace, io.serialize_trace(trace))
    if args.plot:
        from .plot import plot_trace

        plot_trace(trace, args.plot, title=f"{args.variant} induction")
    report = dl.total_dl(grammar, corpus, penalty=args.penalty, limit=args.limit)
    _write(args.out, io.serialize_grammar(grammar))
    sys.stderr.write(
        f"final-dl {report.grammar_dl} overgen {report.overgen_count} "
        f"total {report.total} iterations {len(trace)}\n"
    )


def _cmd_dl(args) -> None:
    grammar = _load_grammar(args.grammar)
    if args.corpus is None:
        print(f"grammar-dl {dl.grammar_dl(grammar)}")
        return
    corpus = _load_corpus(args.corpus)
    try:
        report = dl.total_dl(grammar, corpus, penalty=args.penalty, limit=args.limit)
    except dl.CoverageError as exc:
        raise _CheckFailure(str(exc)) from exc
    print(
        f"grammar-dl {report.grammar_dl}\novergen {report.overgen_count}\n"
        f"penalty {report.penalty}\ntotal {report.total}"
    )


def _cmd_generate(args) -> None:
    grammar = _load_grammar(args.grammar)
    try:
        language = generate.enumerate_language(grammar, args.limit)
    except generate.EnumerationLimitError as exc:
        raise _CheckFailure(str(exc)) from exc
    for sentence in sorted(language):
        print(" ".join(sentence))


def _cmd_analyze(args) -> None:
    grammar = _load_grammar(args.grammar)
    corpus = _load_corpus(args.corpus)
    categories = args.categories.split(",") if args.categories else None
    try:
        mu, oplus = semantics.extract_semantics(grammar, args.form_width, categories)
    except semantics.SemanticsShapeError as exc:
        raise _CheckFailure(str(exc)) from exc
    mu_max, oplus_max = semantics.maximal_extension(mu, oplus, corpus, args.form_width)
    check = semantics.check_compositional(mu_max, oplus_max, corpus, args.form_width)
    idioms = semantics.idiom_items(grammar, corpus, args.form_width, categories)
    score = semantics.compositionality_score(mu_max, oplus_max)

    print("# meaning function")
    for entry in semantics.mu_as_table(mu_max):
        print(semantics.render_nested(entry))
    print("# combination rules")
    for rule in oplus_max.rules:
        pattern = (("v", rule.left_cat), ("n", rule.right_cat))
        pairs = semantics._template_pairs(rule.template, "v", "n")
        print(semantics.render_nested(pattern) + " -> " + semantics.render_nested(pairs))
    print("# excluded pairs")
    for e in oplus_max.exclusions:
        print(semantics.render_nested(((e.left, e.left_cat), (e.right, e.right_cat))))
    print("# compositionality check")
    print(f"violations {len(check.violations)} checked {check.checked} of {check.total}")
    print("# idioms")
    for s in idioms.sentences:
        print("sentence " + " ".join(s))
    for w in idioms.items:
        print("item " + w)
    print("# score")
    print(f"domain {score.domain_size} encoding {score.encoding_dl}")
    try:
        lam = semantics.lambda_encoding_report(mu_max, oplus_max)
    except semantics.SemanticsShapeError as exc:
        print(f"# lambda encoding unavailable: {exc}")
        return
    print("# lambda encoding")
    for line in lam.lines:
        print(line)
    print(f"definitions {lam.definitions_dl} domains {lam.domain_dl} interpreter {lam.interpreter}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mdlgram", description=__doc__)
    sub = p.add_subparsers(dest="cmd", required=True)

    d = sub.add_parser("demo", help="write a built-in corpus")
    d.add_argument("--name", required=True, choices=io.DEMO_NAMES)
    d.add_argument("--out", default=None)

    i = sub.add_parser("induce", help="induce a grammar from a corpus")
    i.add_argument("--corpus", required=True)
    i.add_argument("--variant", default="very-greedy", choices=VARIANTS)
    i.add_argument("--penalty", type=int, default=dl.DEFAULT_PENALTY)
    i.add_argument("--limit", type=int, default=generate.DEFAULT_LIMIT)
    i.add_argument("--trace", default=None)
    i.add_argument("--plot", default=None, help="write a DL-descent figure")
    i.add_argument("--out", default=None)

    m = sub.add_parser("dl", help="measure a grammar")
    m.add_argument("--grammar", required=True)
    m.add_argument("--corpus", default=None)
    m.add_argument("--penalty", type=int, default=dl.DEFAULT_PENALTY)
    m.add_argument("--limit", type=int, default=generate.DEFAULT_LIMIT)

    g = sub.add_parser("generate", help="enumerate a grammar's language")
    g.add_argument("--grammar", required=True)
    g.add_argument("--limit", type=int, default=generate.DEFAULT_LIMIT)

    a = sub.add_parser("analyze", help="extract meanings, idioms, and scores")
    a.add_argument("--grammar", required=True)
    a.add_argument("--corpus", required=True)
    a.add_argument("--form-width", type=int, default=2)
    a.add_argument("--categories", default=None, help="comma-separated names, e.g. verb,noun")
    sub_map = {"demo": _cmd_demo, "induce": _cmd_induce, "dl": _cmd_dl,
               "generate": _cmd_generate, "analyze": _cmd_analyze}
    p.set_defaults(_dispatch=sub_map)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = args._dispatch[args.cmd]
    try:
        handler(args)
    except (io.ParseError, _IOFailure, KeyError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except (ValidationError, dl.CoverageError, _CheckFailure,
            generate.EnumerationLimitError, semantics.SemanticsShapeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
