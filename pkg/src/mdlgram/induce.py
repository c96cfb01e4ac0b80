"""Greedy description-length induction.

Starting from one rule per distinct sentence with every word wrapped as a
singleton class, the loop evaluates every class-pair merge and every adjacent
concatenation, applies the operation with the lowest resulting total, and
stops when nothing is negative.  Deltas are exact recounts of the candidate
grammar after canonicalization, never schema-level shortcuts.

Variants differ in how merge substitutions may be narrowed:

* very-greedy: substitute everywhere or reject the operation;
* partial: substitute everywhere, then revert each rule whose substituted
  form would generate outside the corpus or drop part of its own language;
* overgen: like partial, but an overgenerating substitution is kept whenever
  the penalized total improves; extras are charged `penalty` symbols each.

A concatenation definition's body is a sequence of class references, so a
concatenation whose operand is a bare word class is not expressible and is
rejected (it evaluates to +inf).

Ties between equal deltas prefer merges over concatenations, then the lowest
operand pair by class-creation index (initial word classes in sorted order,
then definitions in creation order), which makes runs deterministic and
independent of corpus sentence order.

The loop selects operations with an incremental evaluator; every accepted
operation is then re-applied through the reference path and the two totals
are required to agree exactly.
"""

from __future__ import annotations

import math
from itertools import product as _itproduct
from typing import NamedTuple, Optional

from .grammar import (
    ClassDef,
    Corpus,
    EmptyCorpusError,
    Grammar,
    InlineClass,
    Rule,
    Sentence,
    Term,
    _rename_defs,
    canonical_core,
    require_valid,
)
from .dl import DEFAULT_PENALTY, grammar_dl, term_dl
from . import generate

VARIANTS = ("very-greedy", "partial", "overgen")


TIE_BREAK = "merge-then-lowest-class-index"


class InductionConfig(NamedTuple):
    variant: str = "very-greedy"
    penalty: int = DEFAULT_PENALTY
    limit: int = generate.DEFAULT_LIMIT
    tie_break: str = TIE_BREAK  # the single supported deterministic order


class CandidateOp(NamedTuple):
    """A proposed operation; replacement scope is decided by the variant."""

    kind: str  # "merge" | "concat"
    a: str
    b: str


class TraceRecord(NamedTuple):
    iteration: int
    kind: str
    a: str
    b: str
    dl_before: int
    dl_after: int
    delta: int
    overgen_count: int


class OpRejectedError(ValueError):
    pass


class _Fallback(Exception):
    """Internal: the incremental evaluator does not cover this shape."""


def _check_config(config: InductionConfig) -> None:
    if config.variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}")
    if config.penalty < 0:
        raise ValueError("penalty must be non-negative")
    if config.tie_break != TIE_BREAK:
        raise ValueError(f"unsupported tie-break {config.tie_break!r}")


def initial_grammar(corpus: Corpus) -> Grammar:
    """One rule per distinct sentence, each word a singleton class."""
    if not corpus:
        raise EmptyCorpusError("cannot induce from an empty corpus")
    rules = tuple(
        Rule(tuple(InlineClass.word(w) for w in s)) for s in sorted(corpus.distinct_set())
    )
    return Grammar((), rules)


# ---------------------------------------------------------------------------
# candidate enumeration


def _singleton_token(ic: InlineClass) -> Optional[str]:
    t = ic.singleton()
    if t is None:
        return None
    if t.ref is not None:
        return t.ref
    return t.symbols[0] if len(t.symbols) == 1 else None


def live_classes(grammar: Grammar) -> tuple[str, ...]:
    """Current classes in creation order: word classes (sorted), then defs."""
    names = {d.name for d in grammar.defs}
    words = set()
    for r in grammar.rules:
        for ic in r.body:
            t = ic.singleton()
            if t is not None and t.ref is None and len(t.symbols) == 1:
                words.add(t.symbols[0])
    return tuple(sorted(words - names)) + tuple(d.name for d in grammar.defs)


def merge_candidates(grammar: Grammar) -> list[CandidateOp]:
    """All unordered pairs of live classes."""
    order = live_classes(grammar)
    return [
        CandidateOp("merge", order[i], order[j])
        for i in range(len(order))
        for j in range(i + 1, len(order))
    ]


def concat_candidates(grammar: Grammar) -> list[CandidateOp]:
    """All ordered class pairs adjacent in at least one rule body."""
    out: list[CandidateOp] = []
    seen: set[tuple[str, str]] = set()
    for r in grammar.rules:
        tokens = [_singleton_token(ic) for ic in r.body]
        for x, y in zip(tokens, tokens[1:]):
            if x is not None and y is not None and (x, y) not in seen:
                seen.add((x, y))
                out.append(CandidateOp("concat", x, y))
    return out


# ---------------------------------------------------------------------------
# shared operation mechanics

_FRESH = "_new"


def _op_pieces(dm: dict, op: CandidateOp, zname: str):
    """Occurrence classes for both operands plus the new definition."""
    if op.kind == "merge":
        if op.a == op.b:
            raise OpRejectedError("merge operands must differ")

        def term(tok: str) -> Term:
            return Term.to(tok) if tok in dm else Term.seq(tok)

        zdef = ClassDef(zname, alts=(term(op.a), term(op.b)))
    elif op.kind == "concat":
        if op.a not in dm or op.b not in dm:
            raise OpRejectedError("concatenation parts must be named classes")
        zdef = ClassDef(zname, parts=(op.a, op.b))
    else:
        raise ValueError(f"unknown op kind {op.kind!r}")

    def occurrence(tok: str) -> InlineClass:
        return InlineClass.of(tok) if tok in dm else InlineClass.word(tok)

    return occurrence(op.a), occurrence(op.b), zdef


def _substitute_rule(op: CandidateOp, rule: Rule, occ_a, occ_b, zclass) -> Optional[Rule]:
    if op.kind == "merge":
        if occ_a not in rule.body and occ_b not in rule.body:
            return None
        return Rule(tuple(zclass if ic in (occ_a, occ_b) else ic for ic in rule.body))
    body = rule.body
    out = []
    j = 0
    hit = False
    while j < len(body):
        if j + 1 < len(body) and body[j] == occ_a and body[j + 1] == occ_b:
            out.append(zclass)
            j += 2
            hit = True
        else:
            out.append(body[j])
            j += 1
    return Rule(tuple(out)) if hit else None


def _initial_keeps(variant: str, pairs, old_langs, new_langs, corpus_set) -> dict[int, bool]:
    """Exactly covering substitutions to keep; strict breaches raise."""
    keeps: dict[int, bool] = {}
    for i, _old, _new in pairs:
        ln, lo = new_langs[i], old_langs[i]
        if variant == "very-greedy":
            if not ln <= corpus_set:
                raise OpRejectedError("substitution overgenerates")
            keeps[i] = True
        else:  # partial and overgen start from the exactly covering subset
            keeps[i] = lo <= ln and ln <= corpus_set
    return keeps


def _overgen_pool(pairs, old_langs, new_langs, corpus_set) -> frozenset:
    """Substitutions that overgenerate without losing their own language."""
    return frozenset(
        i
        for i, _old, _new in pairs
        if old_langs[i] <= new_langs[i] and not new_langs[i] <= corpus_set
    )


def _overgen_resubstitution(keeps, pool, finish, penalty, eligible):
    """Add overgenerating substitutions back while the penalized total drops.

    Starts from the exactly covering subset and, each round, applies the
    single most improving addition (ties: lowest rule index).  `eligible`
    screens out additions that cannot pay for their penalty: ones with no
    duplicate partner, no containment relation with an active rule, and no
    definition reference in the rule they replace.
    """
    current = {i for i, keep in keeps.items() if keep}
    best = finish(frozenset(current))
    best_total = best[1] + penalty * len(best[2])
    while True:
        options = []
        for i in sorted(pool - current):
            if not eligible(i, frozenset(current)):
                continue
            trial = finish(frozenset(current | {i}))
            total = trial[1] + penalty * len(trial[2])
            if total < best_total:
                options.append((total, i, trial))
        if not options:
            break
        total, i, trial = min(options, key=lambda o: (o[0], o[1]))
        current.add(i)
        best, best_total = trial, total
    return frozenset(current), best


def _op_result(
    grammar: Grammar,
    op: CandidateOp,
    corpus: Corpus,
    config: InductionConfig,
    lang_cache: Optional[dict] = None,
    zname: Optional[str] = None,
):
    """Reference path: apply `op` under the variant policy and canonicalize
    (without renaming).  Returns (grammar, extra sentences)."""
    dm = grammar.def_map()
    corpus_set = corpus.distinct_set()
    cache = lang_cache if lang_cache is not None else {}

    def lang_of(defmap: dict, rule: Rule) -> frozenset:
        got = cache.get(rule)
        if got is None:
            got = frozenset(generate._rule_sentences(defmap, rule))
            if len(got) > config.limit:
                raise generate.EnumerationLimitError(config.limit, len(got))
            cache[rule] = got
        return got

    if zname is None:
        i = 0
        while f"{_FRESH}{i}" in dm:
            i += 1
        zname = f"{_FRESH}{i}"
    occ_a, occ_b, zdef = _op_pieces(dm, op, zname)
    zclass = InlineClass.of(zname)
    pairs = []
    for i, r in enumerate(grammar.rules):
        new = _substitute_rule(op, r, occ_a, occ_b, zclass)
        if new is not None:
            pairs.append((i, r, new))
    if not pairs:
        extra = frozenset().union(*(lang_of(dm, r) for r in grammar.rules)) - corpus_set
        return grammar, extra

    dm2 = dict(dm)
    dm2[zname] = zdef
    old_langs = {i: lang_of(dm, old) for i, old, _ in pairs}
    new_langs = {i: lang_of(dm2, new) for i, _, new in pairs}
    keeps = _initial_keeps(config.variant, pairs, old_langs, new_langs, corpus_set)

    if config.variant == "very-greedy":
        _check_no_loss(grammar, pairs, old_langs, new_langs, lang_of)

    def finish(kept: frozenset):
        rules_after = list(grammar.rules)
        changed = set()
        for i, _old, new in pairs:
            if i in kept:
                rules_after[i] = new
                changed.add(new)
        g2 = canonical_core(
            Grammar(grammar.defs + (zdef,), tuple(rules_after)), lang_of, changed=changed
        )
        dmx = g2.def_map()
        rows = frozenset().union(*(lang_of(dmx, r) for r in g2.rules)) if g2.rules else frozenset()
        return g2, grammar_dl(g2), rows - corpus_set

    if config.variant == "overgen":
        news = {i: new for i, _old, new in pairs}
        old_refs = {i: _rule_ref_counts(grammar.rules[i]) for i, _o, _n in pairs}
        new_refs = {i: _rule_ref_counts(n) for i, _o, n in pairs}
        base_refs: dict[str, int] = {}
        for r in grammar.rules:
            for name, c in _rule_ref_counts(r).items():
                base_refs[name] = base_refs.get(name, 0) + c
        for d in grammar.defs:
            for ref in _def_refs(d):
                base_refs[ref] = base_refs.get(ref, 0) + 1
        for ref in _def_refs(zdef):
            base_refs[ref] = base_refs.get(ref, 0) + 1

        def eligible(i: int, kept: frozenset) -> bool:
            # flatten potential: removal leaves some definition nearly unused
            for name, c in old_refs[i].items():
                refs = base_refs.get(name, 0) - c
                for j in kept:
                    refs += new_refs[j].get(name, 0) - old_refs[j].get(name, 0)
                if refs <= 1:
                    return True
            ni, ln = news[i], new_langs[i]
            if any(news[j] == ni for j in kept):
                return True
            active_langs = [new_langs[j] for j in kept]
            active_langs += [
                lang_of(dm, r)
                for k, r in enumerate(grammar.rules)
                if k != i and k not in kept
            ]
            return any(ln <= lr or lr <= ln for lr in active_langs)

        pool = _overgen_pool(pairs, old_langs, new_langs, corpus_set)
        _kept, (g2, _gdl, extra) = _overgen_resubstitution(
            keeps, pool, finish, config.penalty, eligible
        )
        return g2, extra

    g2, _gdl, extra = finish(frozenset(i for i, keep in keeps.items() if keep))
    return g2, extra


def _check_no_loss(grammar, pairs, old_langs, new_langs, lang_of) -> None:
    lost = set().union(*old_langs.values()) - set().union(*new_langs.values())
    if not lost:
        return
    substituted = {i for i, _, _ in pairs}
    dm = grammar.def_map()
    for row in lost:
        if not any(
            row in lang_of(dm, r)
            for i, r in enumerate(grammar.rules)
            if i not in substituted
        ):
            raise OpRejectedError("substitution loses coverage")


# ---------------------------------------------------------------------------
# public operations


def apply_op(
    grammar: Grammar, op: CandidateOp, corpus: Corpus, config: InductionConfig = InductionConfig()
) -> Grammar:
    """Apply one candidate operation and return the canonical result."""
    _check_config(config)
    require_valid(grammar)
    g2, _extra = _op_result(grammar, op, corpus, config)
    return _rename_defs(g2)


def evaluate(
    grammar: Grammar, op: CandidateOp, corpus: Corpus, config: InductionConfig = InductionConfig()
) -> float:
    """Exact penalized-total difference produced by `op`; +inf if rejected."""
    _check_config(config)
    require_valid(grammar)
    cache: dict = {}

    def lang_of(defmap, rule):
        got = cache.get(rule)
        if got is None:
            got = frozenset(generate._rule_sentences(defmap, rule))
            cache[rule] = got
        return got

    corpus_set = corpus.distinct_set()
    dm = grammar.def_map()
    base_rows = frozenset().union(*(lang_of(dm, r) for r in grammar.rules)) if grammar.rules else frozenset()
    base_total = grammar_dl(grammar) + config.penalty * len(base_rows - corpus_set)
    try:
        g2, extra = _op_result(grammar, op, corpus, config, lang_cache=cache)
    except OpRejectedError:
        return math.inf
    return (grammar_dl(g2) + config.penalty * len(extra)) - base_total


# ---------------------------------------------------------------------------
# incremental evaluation used inside the loop

_RULE_DL: dict[Rule, int] = {}


def _rule_dl(rule: Rule) -> int:
    got = _RULE_DL.get(rule)
    if got is None:
        got = term_dl(rule)
        _RULE_DL[rule] = got
    return got


def _flat_info(dm: dict, name: str, memo: dict) -> Optional[tuple[tuple[str, ...], frozenset]]:
    """(word expansion, choice-key set) of an alternatives-form definition
    whose alternatives bottom out in single words; None otherwise."""
    if name in memo:
        return memo[name]
    d = dm[name]
    memo[name] = None
    if d.alts is None:
        return None
    words: list[str] = []
    keys = {name}
    for t in d.alts:
        if t.ref is not None:
            sub = _flat_info(dm, t.ref, memo)
            if sub is None:
                return None
            words.extend(sub[0])
            keys |= sub[1]
        elif len(t.symbols) == 1:
            words.append(t.symbols[0])
        else:
            return None
    memo[name] = (tuple(words), frozenset(keys))
    return memo[name]


def _rule_tokens(rule: Rule) -> Optional[tuple[str, ...]]:
    tokens = []
    for ic in rule.body:
        tok = _singleton_token(ic)
        if tok is None:
            return None
        tokens.append(tok)
    return tuple(tokens)


def _rule_from_tokens(dm: dict, tokens: tuple[str, ...]) -> Rule:
    return Rule(
        tuple(InlineClass.of(t) if t in dm else InlineClass.word(t) for t in tokens)
    )


def _lang_from_tokens(dm: dict, tokens: tuple[str, ...], flat_memo: dict, limit: int) -> frozenset:
    """Language of an all-singleton rule body: a flat product over distinct
    reference tokens when their nested choice keys are disjoint, else the
    full derivation."""
    refs = []
    for t in tokens:
        if t in dm and t not in refs:
            refs.append(t)
    if not refs:
        return frozenset((tokens,))
    infos = [_flat_info(dm, r, flat_memo) for r in refs]
    flat = None
    if all(i is not None for i in infos):
        if len(infos) == 1:
            flat = [infos[0][0]]
        else:
            seen: set = set()
            disjoint = True
            for _w, keys in infos:
                if keys & seen:
                    disjoint = False
                    break
                seen |= keys
            if disjoint:
                flat = [i[0] for i in infos]
    if flat is None:
        lang = frozenset(generate._rule_sentences(dm, _rule_from_tokens(dm, tokens)))
        if len(lang) > limit:
            raise generate.EnumerationLimitError(limit, len(lang))
        return lang
    if len(refs) == 1:
        ref = refs[0]
        row = list(tokens)
        ps = [p for p, t in enumerate(tokens) if t == ref]
        out = set()
        for w in flat[0]:
            for p in ps:
                row[p] = w
            out.add(tuple(row))
        if len(out) > limit:
            raise generate.EnumerationLimitError(limit, len(out))
        return frozenset(out)
    positions = [[p for p, t in enumerate(tokens) if t == r] for r in refs]
    base = list(tokens)
    out = set()
    for combo in _itproduct(*flat):
        row = base[:]
        for ps, w in zip(positions, combo):
            for pos in ps:
                row[pos] = w
        out.add(tuple(row))
        if len(out) > limit:
            raise generate.EnumerationLimitError(limit, len(out))
    return frozenset(out)


def _rule_lang(dm: dict, rule: Rule, flat_memo: dict, limit: int) -> frozenset:
    tokens = _rule_tokens(rule)
    if tokens is not None:
        return _lang_from_tokens(dm, tokens, flat_memo, limit)
    lang = frozenset(generate._rule_sentences(dm, rule))
    if len(lang) > limit:
        raise generate.EnumerationLimitError(limit, len(lang))
    return lang


def _rule_ref_counts(rule: Rule) -> dict[str, int]:
    counts: dict[str, int] = {}
    for ic in rule.body:
        for t in ic.alts:
            if t.ref is not None:
                counts[t.ref] = counts.get(t.ref, 0) + 1
    return counts


def _token_ref_counts(tokens: tuple[str, ...], dm: dict) -> dict[str, int]:
    counts: dict[str, int] = {}
    for t in tokens:
        if t in dm:
            counts[t] = counts.get(t, 0) + 1
    return counts


class _Iter:
    """Per-iteration indexes over a canonical base grammar."""

    def __init__(self, grammar: Grammar, corpus_set: frozenset, config: InductionConfig):
        self.grammar = grammar
        self.config = config
        self.corpus_set = corpus_set
        self.dm = grammar.def_map()
        self.rules = grammar.rules
        self.flat_memo: dict = {}
        self.lang: list[frozenset] = []
        self.cover: dict[Sentence, list[int]] = {}
        self.token_rules: dict[str, list[int]] = {}
        self.rule_refs: list[dict[str, int]] = []
        self.refs_rules: dict[str, int] = {d.name: 0 for d in grammar.defs}
        self.tokens: list[Optional[tuple[str, ...]]] = []
        for i, r in enumerate(self.rules):
            lang = _rule_lang(self.dm, r, self.flat_memo, config.limit)
            self.lang.append(lang)
            self.tokens.append(_rule_tokens(r))
            for row in lang:
                self.cover.setdefault(row, []).append(i)
            seen_here = set()
            for ic in r.body:
                tok = _singleton_token(ic)
                if tok is not None and tok not in seen_here:
                    seen_here.add(tok)
                    self.token_rules.setdefault(tok, []).append(i)
            counts = _rule_ref_counts(r)
            self.rule_refs.append(counts)
            for name, c in counts.items():
                self.refs_rules[name] = self.refs_rules.get(name, 0) + c
        self.refs_defs: dict[str, int] = {}
        for d in grammar.defs:
            for ref in _def_refs(d):
                self.refs_defs[ref] = self.refs_defs.get(ref, 0) + 1
        self.def_dls = {d.name: term_dl(d) for d in grammar.defs}
        self.gdl = sum(self.def_dls.values()) + sum(_rule_dl(r) for r in self.rules)
        all_rows = set(self.cover)
        self.extra = frozenset(all_rows - corpus_set)
        self.total = self.gdl + config.penalty * len(self.extra)
        self.lang_cache = {r: l for r, l in zip(self.rules, self.lang)}
        self.has_nontoken = any(t is None for t in self.tokens)


def _def_refs(d: ClassDef) -> tuple[str, ...]:
    if d.alts is not None:
        return tuple(t.ref for t in d.alts if t.ref is not None)
    if d.parts is not None:
        return d.parts
    return (d.target,) if d.target else ()


def _fast_delta(itr: _Iter, op: CandidateOp, zname: str):
    """Exact delta for `op` against the iteration snapshot.

    Raises OpRejectedError, or _Fallback when the shape needs the reference
    path.  Returns (delta, predicted (gdl, extra_count)).
    """
    cfg = itr.config
    variant = cfg.variant
    corpus_set = itr.corpus_set
    _occ_a, _occ_b, zdef = _op_pieces(itr.dm, op, zname)
    affected = sorted(set(itr.token_rules.get(op.a, [])) | set(itr.token_rules.get(op.b, [])))
    if not affected:
        return 0, (itr.gdl, len(itr.extra))
    if any(itr.tokens[i] is None for i in affected):
        raise _Fallback()

    dm2 = dict(itr.dm)
    dm2[zname] = zdef
    zcross = zname + "x"
    dm2[zcross] = zdef

    def _operand_flat(tok: str):
        if tok in itr.dm:
            return _flat_info(itr.dm, tok, itr.flat_memo)
        return (tok,), frozenset()

    cross_ready = False
    if op.kind == "merge":
        fa, fb = _operand_flat(op.a), _operand_flat(op.b)
        if fa is not None and fb is not None:
            itr.flat_memo[zname] = (fa[0] + fb[0], fa[1] | fb[1] | {zname})
            itr.flat_memo[zcross] = None  # filled per side below
            cross_words = {op.a: fb[0], op.b: fa[0]}
            cross_ready = True

    operands = (op.a, op.b)
    pairs: list[int] = []
    news: dict[int, tuple[str, ...]] = {}
    new_langs: dict[int, frozenset] = {}
    for i in affected:
        toks = itr.tokens[i]
        if op.kind == "merge":
            new_toks = tuple(zname if t in operands else t for t in toks)
            if new_toks == toks:
                continue
        else:
            out: list[str] = []
            j = 0
            hit = False
            while j < len(toks):
                if j + 1 < len(toks) and toks[j] == op.a and toks[j + 1] == op.b:
                    out.append(zname)
                    j += 2
                    hit = True
                else:
                    out.append(toks[j])
                    j += 1
            if not hit:
                continue
            new_toks = tuple(out)
        one_sided = cross_ready and not (op.a in toks and op.b in toks)
        if one_sided:
            # the substituted language is the old one plus the cross rows
            side = op.a if op.a in toks else op.b
            itr.flat_memo[zcross] = (cross_words[side], frozenset({zcross}))
            cross_toks = tuple(zcross if t == zname else t for t in new_toks)
            cross = _lang_from_tokens(dm2, cross_toks, itr.flat_memo, cfg.limit)
            if variant == "very-greedy" and not cross <= corpus_set:
                raise OpRejectedError("substitution overgenerates")
            lang = itr.lang[i] | cross
        else:
            lang = _lang_from_tokens(dm2, new_toks, itr.flat_memo, cfg.limit)
            if variant == "very-greedy" and not lang <= corpus_set:
                raise OpRejectedError("substitution overgenerates")
        pairs.append(i)
        news[i] = new_toks
        new_langs[i] = lang
    if not pairs:
        return 0, (itr.gdl, len(itr.extra))
    old_langs = {i: itr.lang[i] for i in pairs}
    keeps = _initial_keeps(
        variant, [(i, None, None) for i in pairs], old_langs, new_langs, corpus_set
    )

    if variant == "very-greedy":
        kept_ids = frozenset(pairs)
        new_union = set().union(*(new_langs[i] for i in kept_ids))
        for i in kept_ids:
            for row in old_langs[i]:
                if row in new_union:
                    continue
                if all(j in kept_ids for j in itr.cover[row]):
                    raise OpRejectedError("substitution loses coverage")

    def finish(kept: frozenset):
        if not kept:
            return None, itr.gdl, itr.extra
        removed = set(kept)
        # duplicate substituted rules collapse; position = earliest origin
        added: dict[tuple[str, ...], tuple[int, frozenset]] = {}
        for i in sorted(kept):
            n = news[i]
            if n not in added:
                added[n] = (i, new_langs[i])
        # subsumption involving the new rules
        entries = [(pos, n, lang) for n, (pos, lang) in added.items()]
        dropped_added: set[tuple[str, ...]] = set()
        dropped_base: set[int] = set()
        for pos, n, lang in entries:
            contained = False
            probe = next(iter(lang), None)
            candidates: list[tuple[int, frozenset]] = []
            if probe is not None:
                for j in itr.cover.get(probe, ()):
                    if j not in removed:
                        candidates.append((j, itr.lang[j]))
            for pos2, n2, lang2 in entries:
                if n2 != n and n2 not in dropped_added:
                    candidates.append((pos2, lang2))
            for pos2, lang2 in candidates:
                if lang < lang2 or (lang == lang2 and pos2 < pos):
                    contained = True
                    break
            if contained:
                dropped_added.add(n)
        for pos, n, lang in entries:
            if n in dropped_added:
                continue
            candidate_js = set()
            for row in lang:
                for j in itr.cover.get(row, ()):
                    if j not in removed:
                        candidate_js.add(j)
            for j in sorted(candidate_js):
                lj = itr.lang[j]
                if lj < lang or (lj == lang and pos < j):
                    dropped_base.add(j)
        survivors = [(pos, n, lang) for pos, n, lang in entries if n not in dropped_added]

        # reference bookkeeping over the definitions workspace
        refs_r = dict(itr.refs_rules)
        refs_r[zname] = 0
        for i in removed | dropped_base:
            for name, c in itr.rule_refs[i].items():
                refs_r[name] -= c
        for _pos, n, _lang in survivors:
            for t in n:
                if t in refs_r:
                    refs_r[t] += 1
                elif t in dm2:
                    refs_r[t] = 1
        refs_d = dict(itr.refs_defs)
        for ref in _def_refs(zdef):
            refs_d[ref] = refs_d.get(ref, 0) + 1

        work: dict[str, ClassDef] = {d.name: d for d in itr.grammar.defs}
        order = [d.name for d in itr.grammar.defs]
        work[zname] = zdef
        order.append(zname)

        # drop definitions unreachable from the rules
        while True:
            dead = [
                name
                for name in order
                if refs_r.get(name, 0) == 0 and refs_d.get(name, 0) == 0
            ]
            if not dead:
                break
            for name in dead:
                for ref in _def_refs(work[name]):
                    refs_d[ref] -= 1
                del work[name]
                order.remove(name)

        # inline once-referenced definitions; the mirrored rule-site case
        # replaces the {name} occurrence by the definition body, which only
        # changes the symbol count since the rule's language is unchanged
        inline_dl = 0
        while True:
            done = True
            for name in list(order):
                d = work[name]
                if d.target is not None:
                    continue
                total_refs = refs_r.get(name, 0) + refs_d.get(name, 0)
                if total_refs != 1:
                    continue
                if refs_r.get(name, 0) == 1:
                    if itr.has_nontoken:
                        raise _Fallback()  # inlined body could collide with a rule
                    if d.alts is not None:
                        body_dl = 2 + max(len(d.alts) - 1, 0) + sum(term_dl(t) for t in d.alts)
                        rule_delta = body_dl - 3
                    else:
                        rule_delta = 3 * len(d.parts) - 3
                    if rule_delta - term_dl(d) >= 0:
                        continue
                    inline_dl += rule_delta  # the definition leaves the workspace sum
                    for ref in _def_refs(d):
                        refs_d[ref] -= 1
                        refs_r[ref] = refs_r.get(ref, 0) + 1
                    del work[name]
                    order.remove(name)
                    done = False
                    break
                host_name = None
                for other in order:
                    if other != name and name in _def_refs(work[other]):
                        host_name = other
                        break
                if host_name is None:
                    continue
                host = work[host_name]
                merged = _splice_def(host, d)
                if merged is None:
                    continue
                if term_dl(merged) >= term_dl(host) + term_dl(d):
                    continue
                for ref in _def_refs(d):
                    refs_d[ref] -= 1
                for ref in _def_refs(host):
                    refs_d[ref] -= 1
                work[host_name] = merged
                for ref in _def_refs(merged):
                    refs_d[ref] = refs_d.get(ref, 0) + 1
                del work[name]
                order.remove(name)
                done = False
                break
            if done:
                break

        gdl = itr.gdl + inline_dl
        gdl -= sum(itr.def_dls.values())
        gdl += sum(term_dl(work[n]) for n in order)
        for i in removed | dropped_base:
            gdl -= _rule_dl(itr.rules[i])
        for _pos, n, _lang in survivors:
            gdl += 3 * len(n)  # every singleton class costs three symbols

        # extras: recheck rows whose coverage may have changed
        gone = removed | dropped_base
        suspects = set(itr.extra)
        for _pos, _n, lang in survivors:
            suspects |= lang - corpus_set
        extra = set()
        for row in suspects:
            n_cover = sum(1 for j in itr.cover.get(row, ()) if j not in gone)
            n_cover += sum(1 for _pos, _n, lang in survivors if row in lang)
            if n_cover:
                extra.add(row)
        return (survivors, dropped_base, order), gdl, frozenset(extra)

    if variant == "overgen":
        new_refs = {i: _token_ref_counts(news[i], dm2) for i in pairs}
        zrefs = {name: 1 for name in _def_refs(zdef)}

        def eligible(i: int, kept: frozenset) -> bool:
            # flatten potential: removal leaves some definition nearly unused
            for name, c in itr.rule_refs[i].items():
                refs = itr.refs_rules.get(name, 0) + itr.refs_defs.get(name, 0)
                refs += zrefs.get(name, 0) - c
                for j in kept:
                    refs += new_refs[j].get(name, 0) - itr.rule_refs[j].get(name, 0)
                if refs <= 1:
                    return True
            ni, ln = news[i], new_langs[i]
            if any(news[j] == ni for j in kept):
                return True
            for j in kept:
                lj = new_langs[j]
                if ln <= lj or lj <= ln:
                    return True
            seen = set()
            for row in ln:
                for k in itr.cover.get(row, ()):
                    if k != i and k not in kept and k not in seen:
                        seen.add(k)
                        lk = itr.lang[k]
                        if ln <= lk or lk <= ln:
                            return True
            return False

        pool = _overgen_pool([(i, None, None) for i in pairs], old_langs, new_langs, corpus_set)
        _kept, (res, gdl, extra) = _overgen_resubstitution(
            keeps, pool, finish, cfg.penalty, eligible
        )
    else:
        res, gdl, extra = finish(frozenset(i for i, keep in keeps.items() if keep))
    total = gdl + cfg.penalty * len(extra)
    return total - itr.total, (gdl, len(extra))


def _splice_def(host: ClassDef, d: ClassDef) -> Optional[ClassDef]:
    """Inline once-referenced `d` into `host`, mirroring the reference path."""
    if host.alts is not None and d.alts is not None:
        out: list[Term] = []
        hit = False
        for t in host.alts:
            if t.ref == d.name:
                hit = True
                for sub in d.alts:
                    if sub not in out:
                        out.append(sub)
            elif t not in out:
                out.append(t)
        return host._replace(alts=tuple(out)) if hit else None
    if host.parts is not None and d.parts is not None and d.name in host.parts:
        spliced: list[str] = []
        for p in host.parts:
            spliced.extend(d.parts if p == d.name else [p])
        return host._replace(parts=tuple(spliced))
    return None


# ---------------------------------------------------------------------------
# the induction loop


def induce(corpus: Corpus, config: InductionConfig = InductionConfig()):
    """Run the greedy loop to a fixpoint; returns (grammar, trace)."""
    _check_config(config)
    if not corpus:
        raise EmptyCorpusError("cannot induce from an empty corpus")
    grammar = initial_grammar(corpus)
    corpus_set = corpus.distinct_set()
    vocab = sorted({w for s in corpus_set for w in s})
    word_index = {w: i for i, w in enumerate(vocab)}
    nwords = len(vocab)

    trace: list[TraceRecord] = []
    iteration = 0
    fresh = 0
    while True:
        iteration += 1
        itr = _Iter(grammar, corpus_set, config)
        def_index = {d.name: nwords + k for k, d in enumerate(grammar.defs)}

        def class_index(token: str) -> int:
            got = def_index.get(token)
            return got if got is not None else word_index[token]

        best = None
        for op in merge_candidates(grammar) + concat_candidates(grammar):
            fresh += 1
            zname = f"{_FRESH}{fresh}"
            try:
                delta, _pred = _fast_delta(itr, op, zname)
            except OpRejectedError:
                continue
            except _Fallback:
                fresh += 1
                try:
                    g2f, extraf = _op_result(
                        grammar, op, corpus, config,
                        lang_cache=itr.lang_cache, zname=f"{_FRESH}{fresh}",
                    )
                except OpRejectedError:
                    continue
                delta = (grammar_dl(g2f) + config.penalty * len(extraf)) - itr.total
            if delta >= 0:
                continue
            if op.kind == "merge":
                key = (delta, 0) + tuple(sorted((class_index(op.a), class_index(op.b))))
            else:
                key = (delta, 1, class_index(op.a), class_index(op.b))
            if best is None or key < best[0]:
                best = (key, op, delta)
        if best is None:
            break
        _key, op, delta = best
        fresh += 1
        g2, extra2 = _op_result(
            grammar, op, corpus, config, lang_cache=dict(itr.lang_cache), zname=f"{_FRESH}{fresh}"
        )
        total2 = grammar_dl(g2) + config.penalty * len(extra2)
        realized = total2 - itr.total
        if realized != delta:
            raise RuntimeError(
                f"incremental delta {delta} disagrees with recount {realized} for {op}"
            )
        grammar = _rename_defs(g2)
        trace.append(
            TraceRecord(
                iteration=iteration,
                kind=op.kind,
                a=op.a,
                b=op.b,
                dl_before=itr.total,
                dl_after=total2,
                delta=realized,
                overgen_count=len(extra2),
            )
        )
    require_valid(grammar)
    return grammar, tuple(trace)
