"""Core grammar model: symbols, terms, classes, rules, corpora.

A grammar is a list of named class definitions plus a list of rules.  A rule
body is a sequence of inline classes, written ``{ t | t | ... }`` in the text
format; each alternative term is either a sequence of atomic symbols or a
reference to a named class.  A definition binds a name to one of three bodies:

    NAME = { t | ... | t }      alternatives
    NAME = { A } { B } ...      concatenation of named classes
    NAME = OTHER                rename

Symbols are atomic tokens: ``bucket`` and ``V1`` both have length 1 under the
description-length metric (see `mdlgram.dl`).  Class names and symbols share
one namespace; a token refers to a class exactly when a definition with that
name exists.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple, Optional

RESERVED_TOKENS = frozenset({"{", "}", "|", "=", "#"})

#: sentences are tuples of symbol tokens
Sentence = tuple[str, ...]


def is_symbol(token: str) -> bool:
    """True if `token` may appear as an atomic symbol or class name."""
    if not token or token in RESERVED_TOKENS:
        return False
    return not any(ch.isspace() for ch in token)


class Term(NamedTuple):
    """One alternative of a class: a symbol sequence or a class reference."""

    symbols: tuple[str, ...] = ()
    ref: Optional[str] = None

    @staticmethod
    def seq(*symbols: str) -> "Term":
        return Term(symbols=tuple(symbols))

    @staticmethod
    def to(name: str) -> "Term":
        return Term(ref=name)

    def is_ref(self) -> bool:
        return self.ref is not None


class InlineClass(NamedTuple):
    """An anonymous class occurring in a rule body: ``{ t | ... | t }``."""

    alts: tuple[Term, ...]

    @staticmethod
    def word(symbol: str) -> "InlineClass":
        return InlineClass((Term.seq(symbol),))

    @staticmethod
    def of(name: str) -> "InlineClass":
        return InlineClass((Term.to(name),))

    def singleton(self) -> Optional[Term]:
        return self.alts[0] if len(self.alts) == 1 else None


class ClassDef(NamedTuple):
    """A named class definition.  Exactly one of alts/parts/target is set."""

    name: str
    alts: Optional[tuple[Term, ...]] = None
    parts: Optional[tuple[str, ...]] = None  # concatenation of class names
    target: Optional[str] = None  # rename

    @property
    def form(self) -> str:
        if self.alts is not None:
            return "alternatives"
        if self.parts is not None:
            return "concatenation"
        return "rename"


class Rule(NamedTuple):
    body: tuple[InlineClass, ...]


class Grammar(NamedTuple):
    defs: tuple[ClassDef, ...]
    rules: tuple[Rule, ...]

    def def_map(self) -> dict[str, ClassDef]:
        return {d.name: d for d in self.defs}


class Corpus(NamedTuple):
    """A bag of sentences.  Entries keep first-seen order with multiplicity."""

    entries: tuple[tuple[Sentence, int], ...]

    @staticmethod
    def from_sentences(sentences: Iterable[Sentence]) -> "Corpus":
        counts: dict[Sentence, int] = {}
        for s in sentences:
            counts[tuple(s)] = counts.get(tuple(s), 0) + 1
        return Corpus(tuple(counts.items()))

    def distinct(self) -> tuple[Sentence, ...]:
        return tuple(s for s, _ in self.entries)

    def distinct_set(self) -> frozenset[Sentence]:
        return frozenset(s for s, _ in self.entries)

    def multiplicity(self, sentence: Sentence) -> int:
        for s, n in self.entries:
            if s == sentence:
                return n
        return 0

    def size(self) -> int:
        return sum(n for _, n in self.entries)

    def __bool__(self) -> bool:  # empty corpus is falsy
        return bool(self.entries)


class EmptyCorpusError(ValueError):
    pass


class ValidationError(ValueError):
    """Raised by operations that require a well-formed grammar."""

    def __init__(self, diagnostics: "tuple[Diagnostic, ...]"):
        self.diagnostics = diagnostics
        super().__init__("; ".join(str(d) for d in diagnostics))


class Diagnostic(NamedTuple):
    kind: str  # undefined-reference | cycle | duplicate-name | empty-class | duplicate-rule
    detail: str

    def __str__(self) -> str:
        return f"{self.kind}: {self.detail}"


def _referenced_names(d: ClassDef) -> tuple[str, ...]:
    if d.alts is not None:
        return tuple(t.ref for t in d.alts if t.ref is not None)
    if d.parts is not None:
        return d.parts
    return (d.target,) if d.target else ()


def validate(grammar: Grammar) -> tuple[Diagnostic, ...]:
    """Check well-formedness; an empty report means the grammar is valid."""
    out: list[Diagnostic] = []
    names: dict[str, int] = {}
    for d in grammar.defs:
        if d.name in names:
            out.append(Diagnostic("duplicate-name", d.name))
        names[d.name] = names.get(d.name, 0) + 1
    defined = set(names)

    def check_terms(alts: tuple[Term, ...], where: str) -> None:
        if not alts:
            out.append(Diagnostic("empty-class", where))
        seen = set()
        for t in alts:
            if t in seen:
                out.append(Diagnostic("duplicate-alternative", where))
            seen.add(t)
            if t.ref is not None and t.ref not in defined:
                out.append(Diagnostic("undefined-reference", f"{t.ref} in {where}"))
            if t.ref is None and not t.symbols:
                out.append(Diagnostic("empty-class", f"empty term in {where}"))

    for d in grammar.defs:
        if d.alts is not None:
            check_terms(d.alts, f"def {d.name}")
        elif d.parts is not None:
            if len(d.parts) < 2:
                out.append(Diagnostic("empty-class", f"def {d.name} needs >= 2 parts"))
            for p in d.parts:
                if p not in defined:
                    out.append(Diagnostic("undefined-reference", f"{p} in def {d.name}"))
        else:
            if d.target not in defined:
                out.append(Diagnostic("undefined-reference", f"{d.target} in def {d.name}"))

    seen_rules: set[Rule] = set()
    for i, r in enumerate(grammar.rules):
        if r in seen_rules:
            out.append(Diagnostic("duplicate-rule", f"rule {i}"))
        seen_rules.add(r)
        if not r.body:
            out.append(Diagnostic("empty-class", f"rule {i} has empty body"))
        for ic in r.body:
            check_terms(ic.alts, f"rule {i}")

    # cycle detection over the definition reference graph
    color: dict[str, int] = {}

    def visit(name: str, stack: list[str]) -> None:
        state = color.get(name, 0)
        if state == 1:
            cycle = stack[stack.index(name):] + [name]
            out.append(Diagnostic("cycle", " -> ".join(cycle)))
            return
        if state == 2:
            return
        color[name] = 1
        d = grammar.def_map().get(name)
        if d is not None:
            for ref in _referenced_names(d):
                if ref in defined:
                    visit(ref, stack + [name])
        color[name] = 2

    for d in grammar.defs:
        if color.get(d.name, 0) == 0:
            visit(d.name, [])

    return tuple(out)


def require_valid(grammar: Grammar) -> None:
    report = validate(grammar)
    if report:
        raise ValidationError(report)


def listing_grammar(corpus: Corpus) -> Grammar:
    """The degenerate grammar: one rule listing every distinct sentence."""
    if not corpus:
        raise EmptyCorpusError("cannot build a listing grammar from an empty corpus")
    alts = tuple(Term(symbols=s) for s in corpus.distinct())
    return Grammar(defs=(), rules=(Rule((InlineClass(alts),)),))


# ---------------------------------------------------------------------------
# canonicalization


def _reachable_defs(grammar: Grammar) -> set[str]:
    dm = grammar.def_map()
    todo: list[str] = []
    for r in grammar.rules:
        for ic in r.body:
            for t in ic.alts:
                if t.ref is not None:
                    todo.append(t.ref)
    seen: set[str] = set()
    while todo:
        n = todo.pop()
        if n in seen or n not in dm:
            continue
        seen.add(n)
        todo.extend(_referenced_names(dm[n]))
    return seen


def _reference_count(grammar: Grammar, name: str) -> int:
    n = 0
    for r in grammar.rules:
        for ic in r.body:
            for t in ic.alts:
                if t.ref == name:
                    n += 1
    for d in grammar.defs:
        n += sum(1 for ref in _referenced_names(d) if ref == name)
    return n


def canonicalize(grammar: Grammar) -> Grammar:
    """Language-preserving normal form.

    Removes duplicate rules and rules whose language is contained in another
    single rule's language, drops unreferenced definitions, inlines a
    definition referenced exactly once when that strictly reduces the
    description length, and renames the surviving definitions C0, C1, ... in
    creation order.  Rename definitions are never inlined: substituting the
    target name would merge derivation scopes that the rename keeps separate.
    """
    from . import generate  # deferred: generate imports this module

    require_valid(grammar)
    cache: dict[Rule, frozenset] = {}

    def lang_of(dm: dict, rule: Rule) -> frozenset:
        got = cache.get(rule)
        if got is None:
            got = frozenset(generate._rule_sentences(dm, rule))
            cache[rule] = got
        return got

    return _rename_defs(canonical_core(grammar, lang_of))


def canonical_core(grammar: Grammar, lang_of, changed: Optional[set[Rule]] = None) -> Grammar:
    """Normal form without the final renaming step.

    `lang_of(def_map, rule)` supplies rule languages (callers may cache; all
    rewrites below preserve every rule's language, so cached values stay
    valid).  When `changed` names the only rules that may differ from an
    already-canonical grammar, duplicate and subsumption checks are limited
    to pairs touching them.
    """
    defs = list(grammar.defs)
    rules = list(grammar.rules)

    while True:
        dm = {d.name: d for d in defs}

        # duplicate rules: keep the first occurrence
        seen: set[Rule] = set()
        deduped = []
        for r in rules:
            if r not in seen:
                seen.add(r)
                deduped.append(r)
        if len(deduped) != len(rules):
            rules = deduped
            continue

        # single-rule subsumption by exhaustive enumeration
        if changed is None:
            suspects = list(range(len(rules)))
        else:
            suspects = [i for i, r in enumerate(rules) if r in changed]
        drop: set[int] = set()
        langs = {i: lang_of(dm, rules[i]) for i in range(len(rules))} if suspects else {}
        for i in suspects:
            if i in drop:
                continue
            li = langs[i]
            for j in range(len(rules)):
                if i == j or j in drop:
                    continue
                lj = langs[j]
                if li < lj or (li == lj and j < i):
                    drop.add(i)
                    break
        if changed is not None and suspects:
            # a widened rule may also swallow previously canonical rules
            suspect_set = set(suspects)
            for j in range(len(rules)):
                if j in drop or j in suspect_set:
                    continue
                lj = langs[j]
                for i in suspect_set:
                    if i in drop:
                        continue
                    li = langs[i]
                    if lj < li or (lj == li and i < j):
                        drop.add(j)
                        break
        if drop:
            if changed is not None:
                changed = set(changed)  # dropped rules leave; survivors unchanged
            rules = [r for i, r in enumerate(rules) if i not in drop]
            continue

        # unreferenced definitions
        reachable = _reachable_defs(Grammar(tuple(defs), tuple(rules)))
        if any(d.name not in reachable for d in defs):
            defs = [d for d in defs if d.name in reachable]
            continue

        # inline definitions referenced exactly once when DL strictly drops
        g = Grammar(tuple(defs), tuple(rules))
        did_inline = False
        for d in defs:
            if d.form == "rename":
                continue
            if _reference_count(g, d.name) != 1:
                continue
            new_g = _inline_single_reference(g, d)
            if new_g is not None:
                if changed is not None:
                    old_rules = set(rules)
                    changed |= {r for r in new_g.rules if r not in old_rules}
                defs = list(new_g.defs)
                rules = list(new_g.rules)
                did_inline = True
                break
        if did_inline:
            continue
        break

    return Grammar(tuple(defs), tuple(rules))


def _inline_single_reference(grammar: Grammar, d: ClassDef) -> Optional[Grammar]:
    """Inline `d` at its only reference point if that reduces DL; else None."""
    from .dl import grammar_dl

    def rewrite_alts(alts: tuple[Term, ...]) -> Optional[tuple[Term, ...]]:
        if d.alts is None:
            return None  # a concatenation cannot be spliced into alternatives
        out: list[Term] = []
        hit = False
        for t in alts:
            if t.ref == d.name:
                hit = True
                for sub in d.alts:
                    if sub not in out:
                        out.append(sub)
            elif t not in out:
                out.append(t)
        return tuple(out) if hit else None

    new_defs: list[ClassDef] = []
    new_rules: list[Rule] = []
    done = False
    for other in grammar.defs:
        if other.name == d.name:
            continue
        if not done and other.alts is not None:
            r = rewrite_alts(other.alts)
            if r is not None:
                new_defs.append(other._replace(alts=r))
                done = True
                continue
        if not done and other.parts is not None and d.parts is not None and d.name in other.parts:
            spliced: list[str] = []
            for p in other.parts:
                spliced.extend(d.parts if p == d.name else [p])
            new_defs.append(other._replace(parts=tuple(spliced)))
            done = True
            continue
        new_defs.append(other)
    for r in grammar.rules:
        if done:
            new_rules.append(r)
            continue
        body: list[InlineClass] = []
        hit = False
        for ic in r.body:
            single = ic.singleton()
            if not hit and single is not None and single.ref == d.name:
                hit = True
                if d.alts is not None:
                    body.append(InlineClass(d.alts))
                else:
                    body.extend(InlineClass.of(p) for p in d.parts or ())
            else:
                new_alts = rewrite_alts(ic.alts)
                if new_alts is not None and not hit:
                    hit = True
                    body.append(InlineClass(new_alts))
                else:
                    body.append(ic)
        if hit:
            done = True
        new_rules.append(Rule(tuple(body)))
    if not done:
        return None
    candidate = Grammar(tuple(new_defs), tuple(new_rules))
    if grammar_dl(candidate) < grammar_dl(grammar):
        return candidate
    return None


def _rename_defs(grammar: Grammar) -> Grammar:
    mapping = {d.name: f"C{i}" for i, d in enumerate(grammar.defs)}
    if all(old == new for old, new in mapping.items()):
        return grammar

    def ren_term(t: Term) -> Term:
        if t.ref is not None and t.ref in mapping:
            return Term.to(mapping[t.ref])
        return t

    def ren_def(d: ClassDef) -> ClassDef:
        name = mapping[d.name]
        if d.alts is not None:
            return ClassDef(name, alts=tuple(ren_term(t) for t in d.alts))
        if d.parts is not None:
            return ClassDef(name, parts=tuple(mapping.get(p, p) for p in d.parts))
        return ClassDef(name, target=mapping.get(d.target, d.target))

    def ren_rule(r: Rule) -> Rule:
        return Rule(tuple(InlineClass(tuple(ren_term(t) for t in ic.alts)) for ic in r.body))

    return Grammar(tuple(ren_def(d) for d in grammar.defs), tuple(ren_rule(r) for r in grammar.rules))
