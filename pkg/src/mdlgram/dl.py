"""Description lengths by symbol counting.

Every atomic symbol, class name, brace, bar, equals sign, bracket, and comma
costs 1; line breaks cost nothing.  The total for a grammar against a corpus
is its symbol count plus a per-sentence penalty for generated-but-absent
sentences; the constant size of the generator machine is excluded.
"""

from __future__ import annotations

from typing import NamedTuple, Sequence, Union

from .grammar import ClassDef, Corpus, Grammar, InlineClass, Rule, Sentence, Term, require_valid
from . import generate

Countable = Union[Term, InlineClass, ClassDef, Rule]

#: default symbols-equivalent charge per overgenerated sentence
DEFAULT_PENALTY = 10


class DLReport(NamedTuple):
    grammar_dl: int
    overgen_count: int
    penalty: int
    total: int


class CoverageError(ValueError):
    """The grammar fails to generate part of the corpus."""

    def __init__(self, missing: frozenset[Sentence]):
        self.missing = missing
        sample = ", ".join(" ".join(s) for s in sorted(missing)[:3])
        super().__init__(f"grammar does not generate {len(missing)} corpus sentence(s): {sample}")


def term_dl(item: Countable) -> int:
    """Symbol count of one term, inline class, definition, or rule."""
    if isinstance(item, Term):
        return 1 if item.ref is not None else len(item.symbols)
    if isinstance(item, InlineClass):
        # braces plus bars plus the alternatives themselves
        return 2 + max(len(item.alts) - 1, 0) + sum(term_dl(t) for t in item.alts)
    if isinstance(item, ClassDef):
        if item.alts is not None:
            body = 2 + max(len(item.alts) - 1, 0) + sum(term_dl(t) for t in item.alts)
        elif item.parts is not None:
            body = 3 * len(item.parts)
        else:
            body = 1
        return 2 + body  # name and equals sign
    if isinstance(item, Rule):
        return sum(term_dl(ic) for ic in item.body)
    raise TypeError(f"cannot measure {type(item).__name__}")


_RULE_DL_MEMO: dict[Rule, int] = {}


def _rule_dl_cached(rule: Rule) -> int:
    got = _RULE_DL_MEMO.get(rule)
    if got is None:
        got = term_dl(rule)
        _RULE_DL_MEMO[rule] = got
    return got


def grammar_dl(grammar: Grammar) -> int:
    """Sum of symbol counts over all definitions and rules."""
    return sum(term_dl(d) for d in grammar.defs) + sum(_rule_dl_cached(r) for r in grammar.rules)


#: a meaning table is a sequence of nested tuples whose leaves are symbols
Nested = Union[str, Sequence["Nested"]]


def _nested_dl(node: Nested) -> int:
    if isinstance(node, str):
        return 1
    children = list(node)
    return 2 + max(len(children) - 1, 0) + sum(_nested_dl(c) for c in children)


def table_dl(table: Sequence[Nested]) -> int:
    """Symbol count of a table of bracketed tuples (brackets, commas cost 1)."""
    return sum(_nested_dl(entry) for entry in table)


def total_dl(
    grammar: Grammar,
    corpus: Corpus,
    penalty: int = DEFAULT_PENALTY,
    limit: int = generate.DEFAULT_LIMIT,
) -> DLReport:
    """Penalized total: grammar symbols plus `penalty` per extra sentence.

    Errors if the grammar misses any corpus sentence; overgeneration is
    charged linearly, never forbidden here.
    """
    if penalty < 0:
        raise ValueError("penalty must be non-negative")
    require_valid(grammar)
    report = generate.coverage(grammar, corpus, limit)
    if report.missing:
        raise CoverageError(report.missing)
    gdl = grammar_dl(grammar)
    extra = len(report.extra)
    return DLReport(grammar_dl=gdl, overgen_count=extra, penalty=penalty, total=gdl + penalty * extra)
