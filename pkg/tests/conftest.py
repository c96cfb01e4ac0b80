"""Shared fixtures: demo corpora, hand-built reference grammars, and the
three induction runs on the verb-noun corpus (session-scoped; they are the
expensive part of the suite)."""

from __future__ import annotations

import pytest

from mdlgram import demo_corpus, induce
from mdlgram.grammar import ClassDef, Grammar, InlineClass, Rule, Term
from mdlgram.induce import InductionConfig

VERBS = ["kick"] + [f"v_{j}" for j in range(1, 10)]
NOUNS = ["bucket"] + [f"n_{i}" for i in range(1, 100)]
IDIOM_ROW = ("kick", "bucket", "action", "die", "object", "nil")


def rule_of(*tokens: str, defs: set[str] = frozenset()) -> Rule:
    """A rule of singleton classes; tokens naming defs become references."""
    return Rule(
        tuple(InlineClass.of(t) if t in defs else InlineClass.word(t) for t in tokens)
    )


def alts_def(name: str, *tokens: str, defs: set[str] = frozenset()) -> ClassDef:
    return ClassDef(
        name,
        alts=tuple(Term.to(t) if t in defs else Term.seq(t) for t in tokens),
    )


def grammar_exact() -> Grammar:
    """Strict endpoint: disjoint verb and noun classes, four rules."""
    names = {"V1", "N1"}
    return Grammar(
        defs=(alts_def("V1", *VERBS[1:]), alts_def("N1", *NOUNS[1:])),
        rules=(
            rule_of("V1", "bucket", "action", "V1", "object", "bucket", defs=names),
            rule_of("V1", "N1", "action", "V1", "object", "N1", defs=names),
            rule_of(*IDIOM_ROW),
            rule_of("kick", "N1", "action", "kick", "object", "N1", defs=names),
        ),
    )


def grammar_partial() -> Grammar:
    """Partial endpoint: the verb class nests inside a wider one."""
    names = {"V1", "V0", "N1"}
    return Grammar(
        defs=(
            alts_def("V1", *VERBS[1:]),
            alts_def("V0", "kick", "V1", defs={"V1"}),
            alts_def("N1", *NOUNS[1:]),
        ),
        rules=(
            rule_of("V0", "N1", "action", "V0", "object", "N1", defs=names),
            rule_of("V1", "bucket", "action", "V1", "object", "bucket", defs=names),
            rule_of(*IDIOM_ROW),
        ),
    )


def grammar_overgen() -> Grammar:
    """Overgeneralizing endpoint: total classes plus the idiom rule."""
    names = {"V", "N"}
    return Grammar(
        defs=(alts_def("V", *VERBS), alts_def("N", *NOUNS)),
        rules=(
            rule_of("V", "N", "action", "V", "object", "N", defs=names),
            rule_of(*IDIOM_ROW),
        ),
    )


def grammar_wide_nouns() -> Grammar:
    """The hand-written variant with a total noun class and specific rules
    keeping the idiomatic verb apart."""
    names = {"V1", "N1", "N0"}
    return Grammar(
        defs=(
            alts_def("V1", *VERBS[1:]),
            alts_def("N1", *NOUNS[1:]),
            alts_def("N0", "bucket", "N1", defs={"N1"}),
        ),
        rules=(
            rule_of("V1", "N0", "action", "V1", "object", "N0", defs=names),
            rule_of("kick", "N1", "action", "kick", "object", "N1", defs=names),
            rule_of(*IDIOM_ROW),
        ),
    )


def structure_signature(grammar: Grammar):
    """Naming-independent signature: definitions expand recursively, so two
    grammars compare equal exactly when a renaming maps one onto the other."""
    dm = grammar.def_map()

    def term_sig(t: Term):
        if t.ref is not None:
            return ("ref", def_sig(t.ref))
        return ("seq", t.symbols)

    def def_sig(name: str):
        d = dm[name]
        if d.alts is not None:
            return ("alts", frozenset(term_sig(t) for t in d.alts))
        if d.parts is not None:
            return ("cat", tuple(def_sig(p) for p in d.parts))
        return ("ren", def_sig(d.target))

    def class_sig(ic: InlineClass):
        return frozenset(term_sig(t) for t in ic.alts)

    rules = frozenset(tuple(class_sig(ic) for ic in r.body) for r in grammar.rules)
    defs = frozenset(def_sig(d.name) for d in grammar.defs)
    return rules, defs, len(grammar.defs)


@pytest.fixture(scope="session")
def kb_corpus():
    return demo_corpus("kick-bucket")


@pytest.fixture(scope="session")
def xyz1():
    return demo_corpus("xyz1")


@pytest.fixture(scope="session")
def xyz2():
    return demo_corpus("xyz2")


@pytest.fixture(scope="session")
def run_exact(kb_corpus):
    return induce(kb_corpus, InductionConfig(variant="very-greedy"))


@pytest.fixture(scope="session")
def run_partial(kb_corpus):
    return induce(kb_corpus, InductionConfig(variant="partial"))


@pytest.fixture(scope="session")
def run_overgen(kb_corpus):
    return induce(kb_corpus, InductionConfig(variant="overgen", penalty=10))
