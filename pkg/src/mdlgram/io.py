"""Text formats for corpora, grammars, and induction traces.

Corpus files: whitespace-separated symbol tokens; ``+`` separates sentences
within a line; a line whose first token is ``#`` is a comment; blank lines
are ignored.  A duplicated sentence may be written once with a multiplicity
suffix, e.g. ``X a 0 = 2`` (``=`` is reserved and can never be a symbol).

Grammar files: definition lines ``NAME = { t | t | ... }``,
``NAME = { A } { B }`` (A, B previously/later defined names), or
``NAME = OTHER``; every other non-comment line is a rule, a sequence of
brace groups.  Tokens are whitespace-separated, so the serialized token
count of a grammar equals its description length.

Trace files: one tab-separated record per accepted operation:
iteration, kind, operand a, operand b, dl_before, dl_after, delta, overgen.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .grammar import (
    Corpus,
    Grammar,
    ClassDef,
    InlineClass,
    Rule,
    Sentence,
    Term,
    is_symbol,
)
from .induce import TraceRecord


class ParseError(ValueError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


# ---------------------------------------------------------------------------
# corpora


def parse_corpus(text: str) -> Corpus:
    sentences: list[Sentence] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split()
        if not tokens or tokens[0] == "#":
            continue
        if "=" in tokens:
            eq = tokens.index("=")
            if eq != len(tokens) - 2 or "+" in tokens[:eq]:
                raise ParseError(lineno, "multiplicity suffix must close a single sentence")
            try:
                count = int(tokens[-1])
            except ValueError:
                raise ParseError(lineno, f"bad multiplicity {tokens[-1]!r}") from None
            if count < 1 or eq == 0:
                raise ParseError(lineno, "bad multiplicity suffix")
            sentence = _check_sentence(tokens[:eq], lineno)
            sentences.extend([sentence] * count)
            continue
        current: list[str] = []
        for tok in tokens:
            if tok == "+":
                if current:
                    sentences.append(_check_sentence(current, lineno))
                    current = []
                continue
            current.append(tok)
        if current:
            sentences.append(_check_sentence(current, lineno))
    return Corpus.from_sentences(sentences)


def _check_sentence(tokens: Sequence[str], lineno: int) -> Sentence:
    for tok in tokens:
        if not is_symbol(tok):
            raise ParseError(lineno, f"reserved token {tok!r} inside a sentence")
    return tuple(tokens)


def serialize_corpus(corpus: Corpus) -> str:
    lines = []
    for sentence, count in sorted(corpus.entries):
        if count == 1:
            lines.append(" ".join(sentence))
        else:
            lines.append(" ".join(sentence) + f" = {count}")
    return "\n".join(lines) + ("\n" if lines else "")


# ---------------------------------------------------------------------------
# grammars


def _def_lhs(tokens: list[str]) -> str | None:
    if len(tokens) >= 3 and tokens[1] == "=" and is_symbol(tokens[0]):
        return tokens[0]
    return None


def parse_grammar(text: str, check: bool = True) -> Grammar:
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split()
        if not tokens or tokens[0] == "#":
            continue
        lines.append((lineno, tokens))

    # two passes: collect definition names first so rules can resolve references
    names = {tokens[0] for _, tokens in lines if _def_lhs(tokens)}

    def parse_groups(tokens: list[str], lineno: int) -> list[list[str]]:
        groups: list[list[str]] = []
        depth = 0
        current: list[str] = []
        for tok in tokens:
            if tok == "{":
                if depth:
                    raise ParseError(lineno, "nested brace")
                depth = 1
                current = []
            elif tok == "}":
                if not depth:
                    raise ParseError(lineno, "unbalanced brace")
                depth = 0
                groups.append(current)
            elif depth:
                current.append(tok)
            else:
                raise ParseError(lineno, f"unexpected token {tok!r} outside braces")
        if depth:
            raise ParseError(lineno, "unbalanced brace")
        return groups

    def parse_alternatives(group: list[str], lineno: int) -> tuple[Term, ...]:
        alts: list[Term] = []
        current: list[str] = []

        def flush() -> None:
            if not current:
                raise ParseError(lineno, "empty alternative")
            if len(current) == 1 and current[0] in names:
                alts.append(Term.to(current[0]))
            else:
                for tok in current:
                    if not is_symbol(tok):
                        raise ParseError(lineno, f"reserved token {tok!r} in term")
                alts.append(Term(symbols=tuple(current)))

        for tok in group:
            if tok == "|":
                flush()
                current = []
            else:
                current.append(tok)
        flush()
        return tuple(alts)

    defs: list[ClassDef] = []
    rules: list[Rule] = []
    for lineno, tokens in lines:
        lhs = _def_lhs(tokens)
        if lhs is not None:
            rhs = tokens[2:]
            if "{" not in rhs:
                if len(rhs) != 1 or not is_symbol(rhs[0]):
                    raise ParseError(lineno, "a rename body must be a single class name")
                defs.append(ClassDef(lhs, target=rhs[0]))
                continue
            groups = parse_groups(rhs, lineno)
            if len(groups) == 1:
                defs.append(ClassDef(lhs, alts=parse_alternatives(groups[0], lineno)))
            else:
                parts = []
                for g in groups:
                    if len(g) != 1:
                        raise ParseError(lineno, "concatenation parts must be single class names")
                    parts.append(g[0])
                defs.append(ClassDef(lhs, parts=tuple(parts)))
        else:
            groups = parse_groups(tokens, lineno)
            if not groups:
                raise ParseError(lineno, "empty rule")
            rules.append(Rule(tuple(InlineClass(parse_alternatives(g, lineno)) for g in groups)))

    grammar = Grammar(tuple(defs), tuple(rules))
    if check:
        from .grammar import require_valid

        require_valid(grammar)
    return grammar


def _term_tokens(t: Term) -> list[str]:
    return [t.ref] if t.ref is not None else list(t.symbols)


def _class_tokens(ic: InlineClass) -> list[str]:
    out = ["{"]
    for i, t in enumerate(ic.alts):
        if i:
            out.append("|")
        out.extend(_term_tokens(t))
    out.append("}")
    return out


def serialize_grammar(grammar: Grammar) -> str:
    lines = []
    for d in grammar.defs:
        tokens = [d.name, "="]
        if d.alts is not None:
            tokens.extend(_class_tokens(InlineClass(d.alts)))
        elif d.parts is not None:
            for p in d.parts:
                tokens.extend(["{", p, "}"])
        else:
            tokens.append(d.target)
        lines.append(" ".join(tokens))
    for r in grammar.rules:
        tokens = []
        for ic in r.body:
            tokens.extend(_class_tokens(ic))
        lines.append(" ".join(tokens))
    return "\n".join(lines) + ("\n" if lines else "")


# ---------------------------------------------------------------------------
# traces


def serialize_trace(records: Iterable[TraceRecord]) -> str:
    lines = []
    for r in records:
        lines.append(
            "\t".join(
                str(x)
                for x in (r.iteration, r.kind, r.a, r.b, r.dl_before, r.dl_after, r.delta, r.overgen_count)
            )
        )
    return "\n".join(lines) + ("\n" if lines else "")


def parse_trace(text: str) -> tuple[TraceRecord, ...]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        parts = raw.split("\t")
        if len(parts) != 8:
            raise ParseError(lineno, "trace records have 8 tab-separated fields")
        out.append(
            TraceRecord(
                iteration=int(parts[0]),
                kind=parts[1],
                a=parts[2],
                b=parts[3],
                dl_before=int(parts[4]),
                dl_after=int(parts[5]),
                delta=int(parts[6]),
                overgen_count=int(parts[7]),
            )
        )
    return tuple(out)


# ---------------------------------------------------------------------------
# demo corpora

DEMO_NAMES = ("xyz1", "xyz2", "kick-bucket")


def demo_corpus(name: str) -> Corpus:
    """Built-in corpora: two letter-string texts and the verb-noun corpus
    whose only idiomatic entry pairs kick with bucket."""
    if name == "xyz1":
        return Corpus.from_sentences(tuple(s) for s in ("Xa0", "Yc1", "Xb0", "Xc0", "Ya0", "Yb0"))
    if name == "xyz2":
        first = demo_corpus("xyz1").distinct()
        second = tuple(tuple(s) for s in ("Za0", "Wc0", "Zb0", "Zc0", "Wa0", "Wb0"))
        return Corpus.from_sentences(first + second)
    if name == "kick-bucket":
        verbs = ["kick"] + [f"v_{j}" for j in range(1, 10)]
        nouns = ["bucket"] + [f"n_{i}" for i in range(1, 100)]
        rows: list[Sentence] = []
        for v in verbs:
            for n in nouns:
                if v == "kick" and n == "bucket":
                    rows.append(("kick", "bucket", "action", "die", "object", "nil"))
                else:
                    rows.append((v, n, "action", v, "object", n))
        return Corpus.from_sentences(rows)
    raise KeyError(f"unknown demo corpus {name!r}; choose from {', '.join(DEMO_NAMES)}")
