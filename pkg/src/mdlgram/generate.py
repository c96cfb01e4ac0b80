"""Language generation and membership under unification semantics.

Within one derivation every *named* class resolves to a single alternative,
no matter how many times it occurs, including occurrences nested inside other
definitions.  So with ``X = { a | b }`` the rule ``{ X } { X | d }`` produces
aa, ad, bb, bd but never ab.  Renamed classes (``N1 = Noun``) are separate
choice keys, so N1 and N2 vary independently.  Anonymous inline classes in a
rule body carry no name and therefore choose freely at each occurrence.
"""

from __future__ import annotations

from itertools import product
from typing import Iterator, NamedTuple

from .grammar import Corpus, Grammar, InlineClass, Rule, Sentence, Term, require_valid

DEFAULT_LIMIT = 1_000_000

DefMap = dict[str, "object"]


class EnumerationLimitError(RuntimeError):
    def __init__(self, limit: int, partial: int):
        self.limit = limit
        self.partial = partial
        super().__init__(f"language exceeds the enumeration limit {limit} (saw {partial})")


class CoverageReport(NamedTuple):
    covered: frozenset[Sentence]
    missing: frozenset[Sentence]
    extra: frozenset[Sentence]


def _choice_keys(dm, rule: Rule) -> tuple[tuple[str, int], ...]:
    """Discover (key, n_alternatives) pairs reachable from a rule body.

    A key is the name under which an alternatives-form definition is chosen;
    a rename contributes its own name as the key for its target's choice.
    """
    keys: dict[str, int] = {}

    def visit_ref(name: str, key: str) -> None:
        d = dm[name]
        if d.target is not None:
            visit_ref(d.target, key)
            return
        if d.parts is not None:
            for p in d.parts:
                visit_ref(p, p)
            return
        if key not in keys:
            keys[key] = len(d.alts)
            for t in d.alts:
                if t.ref is not None:
                    visit_ref(t.ref, t.ref)

    for ic in rule.body:
        for t in ic.alts:
            if t.ref is not None:
                visit_ref(t.ref, t.ref)
    return tuple(keys.items())


def _expand_ref(dm, name: str, key: str, asg: dict[str, int]) -> tuple[str, ...]:
    d = dm[name]
    if d.target is not None:
        return _expand_ref(dm, d.target, key, asg)
    if d.parts is not None:
        out: list[str] = []
        for p in d.parts:
            out.extend(_expand_ref(dm, p, p, asg))
        return tuple(out)
    t = d.alts[asg[key]]
    if t.ref is not None:
        return _expand_ref(dm, t.ref, t.ref, asg)
    return t.symbols


def _rule_sentences(dm, rule: Rule) -> Iterator[Sentence]:
    keys = _choice_keys(dm, rule)
    names = [k for k, _ in keys]
    for combo in product(*[range(n) for _, n in keys]):
        asg = dict(zip(names, combo))
        # anonymous inline classes branch locally, per occurrence
        per_class: list[list[tuple[str, ...]]] = []
        for ic in rule.body:
            options: list[tuple[str, ...]] = []
            for t in ic.alts:
                if t.ref is not None:
                    options.append(_expand_ref(dm, t.ref, t.ref, asg))
                else:
                    options.append(t.symbols)
            per_class.append(options)
        for pick in product(*per_class):
            yield tuple(sym for part in pick for sym in part)


def rule_language(grammar: Grammar, rule: Rule) -> frozenset[Sentence]:
    return frozenset(_rule_sentences(grammar.def_map(), rule))


def rule_assignment_bound(grammar: Grammar, rule: Rule) -> int:
    """Upper bound on |language| of one rule: the product of choice counts."""
    bound = 1
    for _, n in _choice_keys(grammar.def_map(), rule):
        bound *= n
    for ic in rule.body:
        bound *= len(ic.alts)
    return bound


def enumerate_language(grammar: Grammar, limit: int = DEFAULT_LIMIT) -> frozenset[Sentence]:
    """All sentences derivable from any rule; errors beyond `limit`."""
    if limit <= 0:
        raise ValueError("limit must be positive")
    require_valid(grammar)
    dm = grammar.def_map()
    out: set[Sentence] = set()
    for rule in grammar.rules:
        for s in _rule_sentences(dm, rule):
            out.add(s)
            if len(out) > limit:
                raise EnumerationLimitError(limit, len(out))
    return frozenset(out)


def derives(grammar: Grammar, sentence: Sentence) -> bool:
    """Membership by backtracking match; agrees with enumerate_language."""
    require_valid(grammar)
    sentence = tuple(sentence)
    dm = grammar.def_map()

    def match_ref(name: str, key: str, pos: int, asg: dict[str, int]) -> Iterator[tuple[int, dict[str, int]]]:
        d = dm[name]
        if d.target is not None:
            yield from match_ref(d.target, key, pos, asg)
            return
        if d.parts is not None:
            yield from match_parts(d.parts, 0, pos, asg)
            return
        indices = [asg[key]] if key in asg else range(len(d.alts))
        for i in indices:
            t = d.alts[i]
            next_asg = asg if key in asg else {**asg, key: i}
            if t.ref is not None:
                yield from match_ref(t.ref, t.ref, pos, next_asg)
            else:
                end = pos + len(t.symbols)
                if sentence[pos:end] == t.symbols:
                    yield end, next_asg

    def match_parts(parts: tuple[str, ...], i: int, pos: int, asg: dict[str, int]) -> Iterator[tuple[int, dict[str, int]]]:
        if i == len(parts):
            yield pos, asg
            return
        for p2, a2 in match_ref(parts[i], parts[i], pos, asg):
            yield from match_parts(parts, i + 1, p2, a2)

    def match_term(t: Term, pos: int, asg: dict[str, int]) -> Iterator[tuple[int, dict[str, int]]]:
        if t.ref is not None:
            yield from match_ref(t.ref, t.ref, pos, asg)
            return
        end = pos + len(t.symbols)
        if sentence[pos:end] == t.symbols:
            yield end, asg

    def match_body(body: tuple[InlineClass, ...], i: int, pos: int, asg: dict[str, int]) -> bool:
        if i == len(body):
            return pos == len(sentence)
        for t in body[i].alts:
            for p2, a2 in match_term(t, pos, asg):
                if match_body(body, i + 1, p2, a2):
                    return True
        return False

    return any(match_body(r.body, 0, 0, {}) for r in grammar.rules)


def coverage(grammar: Grammar, corpus: Corpus, limit: int = DEFAULT_LIMIT) -> CoverageReport:
    """Partition corpus sentences into covered/missing and list extras."""
    language = enumerate_language(grammar, limit)
    wanted = corpus.distinct_set()
    return CoverageReport(
        covered=frozenset(wanted & language),
        missing=frozenset(wanted - language),
        extra=frozenset(language - wanted),
    )
