"""Language enumeration, membership, and coverage under unification."""

import random

import pytest

from mdlgram import coverage, derives, enumerate_language
from mdlgram.generate import EnumerationLimitError, rule_assignment_bound, rule_language
from mdlgram.grammar import ClassDef, Grammar, InlineClass, Rule, Term

from conftest import IDIOM_ROW, alts_def, grammar_exact, grammar_overgen, rule_of


def shared_variable_grammar() -> Grammar:
    return Grammar(
        defs=(alts_def("X", "a", "b"),),
        rules=(Rule((InlineClass.of("X"), InlineClass((Term.to("X"), Term.seq("d"))))),),
    )


def test_repeated_variable_unifies():
    lang = enumerate_language(shared_variable_grammar())
    assert lang == {("a", "a"), ("a", "d"), ("b", "b"), ("b", "d")}


def test_two_occurrences_never_mix():
    g = Grammar(
        defs=(alts_def("X", "a", "b"),),
        rules=(rule_of("X", "X", defs={"X"}),),
    )
    assert enumerate_language(g) == {("a", "a"), ("b", "b")}


def test_single_terminal_rule():
    g = Grammar(defs=(), rules=(rule_of("a"),))
    assert enumerate_language(g) == {("a",)}


def test_exact_grammar_generates_the_corpus(kb_corpus):
    lang = enumerate_language(grammar_exact())
    assert len(lang) == 1000
    assert lang == kb_corpus.distinct_set()


def test_renamed_classes_vary_independently():
    g = Grammar(
        defs=(
            alts_def("Noun", "alice", "bob"),
            ClassDef("N1", target="Noun"),
            ClassDef("N2", target="Noun"),
        ),
        rules=(rule_of("N1", "knows", "N2", defs={"N1", "N2"}),),
    )
    lang = enumerate_language(g)
    assert ("alice", "knows", "bob") in lang
    assert len(lang) == 4


def test_nested_reference_choice_is_global():
    # choosing the outer class resolves the inner name identically everywhere
    g = Grammar(
        defs=(
            alts_def("V1", "v_1", "v_2"),
            alts_def("V0", "kick", "V1", defs={"V1"}),
        ),
        rules=(rule_of("V0", "x", "V0", defs={"V0"}),),
    )
    lang = enumerate_language(g)
    assert lang == {("kick", "x", "kick"), ("v_1", "x", "v_1"), ("v_2", "x", "v_2")}


def test_derives_accepts_corpus_rows():
    g = grammar_overgen()
    assert derives(g, IDIOM_ROW)
    assert derives(g, ("kick", "bucket", "action", "kick", "object", "bucket"))


def test_derives_rejects_outside_exact_grammar():
    assert not derives(grammar_exact(), ("kick", "bucket", "action", "kick", "object", "bucket"))


def test_derives_agrees_with_enumeration_randomized():
    rng = random.Random(7)
    for _ in range(25):
        vocab = [f"t{i}" for i in range(rng.randint(2, 5))]
        defs = []
        names = set()
        for d in range(rng.randint(0, 2)):
            name = f"D{d}"
            names.add(name)
            defs.append(
                alts_def(name, *rng.sample(vocab, k=rng.randint(1, len(vocab))))
            )
        rules = []
        for _r in range(rng.randint(1, 3)):
            tokens = [
                rng.choice(sorted(names) + vocab) for _ in range(rng.randint(1, 4))
            ]
            rules.append(rule_of(*tokens, defs=names))
        g = Grammar(tuple(defs), tuple(dict.fromkeys(rules)))
        lang = enumerate_language(g)
        for s in lang:
            assert derives(g, s)
        for _probe in range(10):
            probe = tuple(rng.choice(vocab) for _ in range(rng.randint(1, 4)))
            assert derives(g, probe) == (probe in lang)


def test_rule_language_bound():
    g = shared_variable_grammar()
    rule = g.rules[0]
    assert len(rule_language(g, rule)) <= rule_assignment_bound(g, rule)
    assert rule_assignment_bound(g, rule) == 4


def test_enumeration_limit_error():
    g = grammar_exact()
    with pytest.raises(EnumerationLimitError) as err:
        enumerate_language(g, limit=10)
    assert err.value.partial > 10


def test_coverage_partitions(kb_corpus):
    report = coverage(grammar_exact(), kb_corpus)
    assert report.missing == frozenset()
    assert report.extra == frozenset()
    assert report.covered == kb_corpus.distinct_set()


def test_coverage_reports_single_extra(kb_corpus):
    report = coverage(grammar_overgen(), kb_corpus)
    assert report.missing == frozenset()
    assert report.extra == {("kick", "bucket", "action", "kick", "object", "bucket")}


def test_coverage_of_listing_is_exact(xyz2):
    from mdlgram import listing_grammar

    report = coverage(listing_grammar(xyz2), xyz2)
    assert report.missing == frozenset() and report.extra == frozenset()
