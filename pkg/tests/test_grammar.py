"""Validation, listing grammars, and canonicalization."""

import pytest

from mdlgram import canonicalize, enumerate_language, grammar_dl, listing_grammar, validate
from mdlgram.grammar import (
    ClassDef,
    Corpus,
    EmptyCorpusError,
    Grammar,
    InlineClass,
    Rule,
    Term,
    ValidationError,
)

from conftest import (
    alts_def,
    grammar_exact,
    grammar_overgen,
    grammar_partial,
    grammar_wide_nouns,
    rule_of,
    structure_signature,
)


def test_validate_accepts_simple_grammar():
    g = Grammar(
        defs=(alts_def("X", "a", "b"),),
        rules=(Rule((InlineClass.of("X"), InlineClass((Term.to("X"), Term.seq("d"))))),),
    )
    assert validate(g) == ()


def test_validate_reports_undefined_reference():
    g = Grammar(defs=(), rules=(rule_of("Y", defs={"Y"}),))
    report = validate(g)
    assert len(report) == 1
    assert report[0].kind == "undefined-reference"


def test_validate_reports_two_node_cycle():
    g = Grammar(
        defs=(ClassDef("A", target="B"), ClassDef("B", target="A")),
        rules=(rule_of("A", defs={"A"}),),
    )
    assert any(d.kind == "cycle" for d in validate(g))


def test_validate_reports_duplicates_and_empty():
    g = Grammar(
        defs=(alts_def("A", "x"), alts_def("A", "y"), ClassDef("B", alts=())),
        rules=(rule_of("x"), rule_of("x")),
    )
    kinds = {d.kind for d in validate(g)}
    assert "duplicate-name" in kinds
    assert "empty-class" in kinds
    assert "duplicate-rule" in kinds


def test_validate_accepts_reference_grammars(kb_corpus):
    for g in (grammar_exact(), grammar_partial(), grammar_overgen(), grammar_wide_nouns()):
        assert validate(g) == ()


def test_listing_grammar_generates_exactly_the_corpus(xyz1):
    g = listing_grammar(xyz1)
    assert len(g.defs) == 0
    assert len(g.rules) == 1
    assert enumerate_language(g) == xyz1.distinct_set()


def test_listing_single_sentence():
    c = Corpus.from_sentences([("a", "b")])
    g = listing_grammar(c)
    assert grammar_dl(g) == 4
    assert enumerate_language(g) == {("a", "b")}


def test_listing_rejects_empty_corpus():
    with pytest.raises(EmptyCorpusError):
        listing_grammar(Corpus.from_sentences([]))


def test_canonicalize_removes_contained_rule():
    # containment checked against exhaustive enumeration of both rules
    names = {"W", "N"}
    wide = alts_def("W", "v_0", "v_1", "v_2")
    narrow_rule = Rule(
        (InlineClass((Term.seq("v_1"), Term.seq("v_2"))), InlineClass.of("N"))
    )
    g = Grammar(
        defs=(wide, alts_def("N", "n_1", "n_2")),
        rules=(rule_of("W", "N", defs=names), narrow_rule),
    )
    lang_wide = enumerate_language(Grammar(g.defs, (g.rules[0],)))
    lang_narrow = enumerate_language(Grammar(g.defs, (narrow_rule,)))
    assert lang_narrow < lang_wide  # the independent oracle for the removal
    canon = canonicalize(g)
    assert len(canon.rules) == 1
    assert enumerate_language(canon) == enumerate_language(g)


def test_canonicalize_flattens_once_referenced_def():
    g = Grammar(
        defs=(
            alts_def("V0", "v_0", "V1", defs={"V1"}),
            alts_def("V1", *[f"v_{j}" for j in range(1, 10)]),
        ),
        rules=(rule_of("V0", "x", defs={"V0"}), rule_of("V0", "y", defs={"V0"})),
    )
    assert grammar_dl(g) == 7 + 21 + 12
    canon = canonicalize(g)
    # the nested class is referenced once, so it folds into the outer one:
    # a 23-symbol flat class beats the 7 + 21 split
    assert len(canon.defs) == 1
    assert grammar_dl(canon) == 23 + 12
    assert enumerate_language(canon) == enumerate_language(g)


def test_canonicalize_inlines_def_used_once_into_the_rule():
    g = Grammar(
        defs=(alts_def("A", "x", "y"),),
        rules=(rule_of("A", "z", defs={"A"}),),
    )
    canon = canonicalize(g)
    assert canon.defs == ()
    assert grammar_dl(canon) == 5 + 3  # { x | y } { z }
    assert enumerate_language(canon) == {("x", "z"), ("y", "z")}


def test_canonicalize_keeps_shared_def_nested():
    g = grammar_partial()
    canon = canonicalize(g)
    # V1 is referenced twice (inside V0 and by the bucket rule): no flattening
    assert structure_signature(canon) == structure_signature(g)
    assert grammar_dl(canon) == 283


def test_canonicalize_idempotent_and_renames():
    for g in (grammar_exact(), grammar_partial(), grammar_overgen()):
        once = canonicalize(g)
        assert canonicalize(once) == once
        assert [d.name for d in once.defs] == [f"C{i}" for i in range(len(once.defs))]


def test_canonicalize_preserves_language_on_desk_grammars(xyz1):
    for g in (grammar_partial(), grammar_wide_nouns(), listing_grammar(xyz1)):
        assert enumerate_language(canonicalize(g)) == enumerate_language(g)


def test_canonicalize_drops_unreferenced_defs():
    g = Grammar(defs=(alts_def("A", "x"),), rules=(rule_of("y"),))
    assert canonicalize(g).defs == ()


def test_canonicalize_requires_valid_grammar():
    g = Grammar(defs=(), rules=(rule_of("Y", defs={"Y"}),))
    with pytest.raises(ValidationError):
        canonicalize(g)


def test_never_inlines_rename_defs():
    # inlining a rename would merge two derivation scopes
    g = Grammar(
        defs=(
            alts_def("Noun", "alice", "bob"),
            ClassDef("N1", target="Noun"),
        ),
        rules=(rule_of("N1", "knows", "Noun", defs={"N1", "Noun"}),),
    )
    before = enumerate_language(g)
    assert ("alice", "knows", "bob") in before
    canon = canonicalize(g)
    assert enumerate_language(canon) == before
