"""Meaning functions extracted from two-constituent semantic grammars.

Each rule body splits into a two-position form part and a meaning part whose
classes either repeat a form class or are constants.  A rule whose meaning
repeats both constituents and whose form classes each hold several words is
translated into a combination rule: a pair of category patterns mapped to a
meaning template.  A rule with its own fixed meaning becomes an exclusion
carrying that more specific meaning; its word pairs are the idiomatic part of
the corpus.

Words are mapped to ``[word, category]`` pairs.  When a position's general
class omits some words occurring at that position, its category carries a
``_nonid`` marker and the leftover words get the plain category, which keeps
the combination operator away from the idiomatic pairs.
"""

from __future__ import annotations

from typing import NamedTuple, Optional, Sequence

from .grammar import Corpus, Grammar, InlineClass, Rule, Sentence, require_valid
from .dl import table_dl
from . import generate

LEFT = ("left",)
RIGHT = ("right",)

FORM_WIDTH = 2


class SemanticsShapeError(ValueError):
    pass


class MeaningEntry(NamedTuple):
    word: str
    category: str

    @property
    def meaning(self) -> tuple[str, str]:
        return (self.word, self.category)


class MeaningFunction(NamedTuple):
    entries: tuple[MeaningEntry, ...]

    def category_of(self, word: str) -> Optional[str]:
        for e in self.entries:
            if e.word == word:
                return e.category
        return None

    def with_category(self, old: str, new: str) -> "MeaningFunction":
        return MeaningFunction(
            tuple(
                MeaningEntry(e.word, new) if e.category == old else e for e in self.entries
            )
        )


#: template slot: ("const", word) | ("left",) | ("right",)
Slot = tuple


class OplusRule(NamedTuple):
    left_cat: str
    right_cat: str
    template: tuple[Slot, ...]


class Exclusion(NamedTuple):
    left: str
    right: str
    left_cat: str
    right_cat: str
    meaning: tuple[str, ...]


class OplusTable(NamedTuple):
    rules: tuple[OplusRule, ...]
    exclusions: tuple[Exclusion, ...]
    bases: tuple[str, str]  # category base name per form position


class CompositionReport(NamedTuple):
    violations: tuple[tuple[Sentence, tuple[str, ...], tuple[str, ...]], ...]
    checked: int
    total: int

    @property
    def fraction(self) -> float:
        return self.checked / self.total if self.total else 0.0


class CompositionalityScore(NamedTuple):
    domain_size: int
    encoding_dl: int

    def better_than(self, other: "CompositionalityScore") -> bool:
        """Lexicographic: a larger domain wins, then a shorter encoding."""
        if self.domain_size != other.domain_size:
            return self.domain_size > other.domain_size
        return self.encoding_dl < other.encoding_dl


class IdiomReport(NamedTuple):
    sentences: tuple[Sentence, ...]
    items: tuple[str, ...]
    justification: tuple[tuple[Sentence, tuple[str, ...]], ...]


class LambdaReport(NamedTuple):
    definitions_dl: int
    domain_dl: int
    lines: tuple[str, ...]
    interpreter: str = "size(lambda-interpreter)"


def apply_template(template: tuple[Slot, ...], left: str, right: str) -> tuple[str, ...]:
    out = []
    for slot in template:
        if slot == LEFT:
            out.append(left)
        elif slot == RIGHT:
            out.append(right)
        else:
            out.append(slot[1])
    return tuple(out)


# ---------------------------------------------------------------------------
# extraction


def _class_words(dm: dict, ic: InlineClass) -> frozenset[str]:
    sentences = frozenset(generate._rule_sentences(dm, Rule((ic,))))
    if any(len(s) != 1 for s in sentences):
        raise SemanticsShapeError("constituent classes must expand to single words")
    return frozenset(s[0] for s in sentences)


def _rule_shape(dm: dict, rule: Rule):
    """(left words, right words, template) for one rule."""
    if len(rule.body) < FORM_WIDTH + 1:
        raise SemanticsShapeError("rules need a two-constituent form and a meaning part")
    form = rule.body[:FORM_WIDTH]
    template: list[Slot] = []
    for ic in rule.body[FORM_WIDTH:]:
        if ic == form[0]:
            template.append(LEFT)
        elif ic == form[1]:
            template.append(RIGHT)
        else:
            words = _class_words(dm, ic)
            if len(words) != 1:
                raise SemanticsShapeError(
                    "a meaning class must repeat a constituent or be a single word"
                )
            template.append(("const", next(iter(words))))
    return _class_words(dm, form[0]), _class_words(dm, form[1]), tuple(template)


def _base_name(form_class: InlineClass, position: int) -> str:
    t = form_class.singleton()
    if t is not None and t.ref is not None:
        return t.ref.lower()
    return f"cat{position}"


def extract_semantics(
    grammar: Grammar,
    form_width: int = FORM_WIDTH,
    categories: Optional[Sequence[str]] = None,
) -> tuple[MeaningFunction, OplusTable]:
    """Translate a grammar into a word-meaning table and a combination table."""
    require_valid(grammar)
    if form_width != FORM_WIDTH:
        raise SemanticsShapeError("the form part must be exactly two constituents")
    dm = grammar.def_map()

    shapes = [(r, *_rule_shape(dm, r)) for r in grammar.rules]

    general = [
        (r, lw, rw, tpl)
        for r, lw, rw, tpl in shapes
        if LEFT in tpl and RIGHT in tpl and len(lw) > 1 and len(rw) > 1
    ]
    # rules sharing the template describe one combination over merged classes
    if len({tpl for _r, _lw, _rw, tpl in general}) > 1:
        raise SemanticsShapeError("more than one distinct combination rule")

    if categories is not None:
        if len(categories) != 2:
            raise SemanticsShapeError("need one category name per constituent position")
        bases = (categories[0], categories[1])
    elif general:
        r0 = general[0][0]
        bases = (_base_name(r0.body[0], 0), _base_name(r0.body[1], 1))
    else:
        bases = ("cat0", "cat1")

    w_all = [set(), set()]
    for _r, lw, rw, _tpl in shapes:
        w_all[0] |= lw
        w_all[1] |= rw
    if w_all[0] & w_all[1]:
        raise SemanticsShapeError("a word occupies both constituent positions")

    if general:
        g_words = (
            frozenset().union(*(lw for _r, lw, _rw, _t in general)),
            frozenset().union(*(rw for _r, _lw, rw, _t in general)),
        )
        oplus_template = general[0][3]
    else:
        g_words = (frozenset(), frozenset())
        oplus_template = None

    def category(position: int, word: str) -> str:
        base = bases[position]
        marked = bool(g_words[position]) and g_words[position] < frozenset(w_all[position])
        if marked and word in g_words[position]:
            return f"{base}_nonid"
        return base

    entries = []
    for position in (0, 1):
        for w in sorted(w_all[position]):
            entries.append(MeaningEntry(w, category(position, w)))
    mu = MeaningFunction(tuple(entries))

    rules = []
    if oplus_template is not None:
        sample_l = next(iter(g_words[0]))
        sample_r = next(iter(g_words[1]))
        rules.append(
            OplusRule(category(0, sample_l), category(1, sample_r), oplus_template)
        )

    exclusions = []
    for _r, lw, rw, tpl in shapes:
        if oplus_template is not None and tpl == oplus_template:
            continue
        for wl in sorted(lw):
            for wr in sorted(rw):
                exclusions.append(
                    Exclusion(
                        left=wl,
                        right=wr,
                        left_cat=category(0, wl),
                        right_cat=category(1, wr),
                        meaning=apply_template(tpl, wl, wr),
                    )
                )
    return mu, OplusTable(tuple(rules), tuple(exclusions), bases)


# ---------------------------------------------------------------------------
# the compositionality postulate


def oplus_apply(
    mu: MeaningFunction, oplus: OplusTable, left: str, right: str
) -> Optional[tuple[str, ...]]:
    """The combination operator on two words; None outside its domain."""
    lc, rc = mu.category_of(left), mu.category_of(right)
    if lc is None or rc is None:
        return None
    for e in oplus.exclusions:
        if (e.left, e.right) == (left, right):
            return None
    for rule in oplus.rules:
        if (rule.left_cat, rule.right_cat) == (lc, rc):
            return apply_template(rule.template, left, right)
    return None


def check_compositional(
    mu: MeaningFunction,
    oplus: OplusTable,
    corpus: Corpus,
    form_width: int = FORM_WIDTH,
) -> CompositionReport:
    """Verify meaning(form) == combined meaning of the constituents."""
    violations = []
    checked = 0
    rows = corpus.distinct()
    for row in rows:
        if len(row) <= form_width:
            continue
        left, right = row[0], row[1]
        actual = row[form_width:]
        built = oplus_apply(mu, oplus, left, right)
        if built is None:
            continue
        checked += 1
        if built != actual:
            violations.append((row, built, actual))
    return CompositionReport(tuple(violations), checked, len(rows))


def encoding_dl(mu: MeaningFunction, oplus: OplusTable) -> int:
    """Symbol count of the two tables in bracketed-pair rendering."""
    return table_dl(mu_as_table(mu)) + table_dl(oplus_as_table(oplus))


def maximal_extension(
    mu: MeaningFunction,
    oplus: OplusTable,
    corpus: Corpus,
    form_width: int = FORM_WIDTH,
) -> tuple[MeaningFunction, OplusTable]:
    """Drop ``_nonid`` markers while the postulate holds and DL does not grow.

    Positions are widened right to left; a drop recategorizes every word of
    the position into the plain category and widens the combination rule's
    pattern, so the check runs against the corpus itself, not against the
    recorded exclusions.
    """
    mu2, op2 = mu, oplus
    rows = [r for r in corpus.distinct() if len(r) > form_width]
    changed = True
    while changed:
        changed = False
        for side in (1, 0):  # rightmost position first
            marked = f"{op2.bases[side]}_nonid"
            plain = op2.bases[side]
            if not any(r[side] == marked for r in [(x.left_cat, x.right_cat) for x in op2.rules]):
                continue
            mu_try = mu2.with_category(marked, plain)
            rules_try = tuple(
                r._replace(**{("left_cat" if side == 0 else "right_cat"): plain})
                if (r.left_cat if side == 0 else r.right_cat) == marked
                else r
                for r in op2.rules
            )
            op_try = op2._replace(rules=rules_try)
            ok = True
            for row in rows:
                lc = mu_try.category_of(row[0])
                rc = mu_try.category_of(row[1])
                for rule in rules_try:
                    if (rule.left_cat, rule.right_cat) == (lc, rc):
                        if apply_template(rule.template, row[0], row[1]) != row[form_width:]:
                            ok = False
                        break
                if not ok:
                    break
            if ok and encoding_dl(mu_try, op_try) <= encoding_dl(mu2, op2):
                mu2, op2 = mu_try, op_try
                changed = True
    return mu2, op2


def compositionality_score(mu: MeaningFunction, oplus: OplusTable) -> CompositionalityScore:
    """Domain size and encoding length; compare with `better_than`."""
    cat_words: dict[str, int] = {}
    for e in mu.entries:
        cat_words[e.category] = cat_words.get(e.category, 0) + 1
    domain = len(mu.entries)
    for rule in oplus.rules:
        pairs = cat_words.get(rule.left_cat, 0) * cat_words.get(rule.right_cat, 0)
        excluded = sum(
            1
            for e in oplus.exclusions
            if mu.category_of(e.left) == rule.left_cat
            and mu.category_of(e.right) == rule.right_cat
        )
        domain += pairs - excluded
    return CompositionalityScore(domain, encoding_dl(mu, oplus))


# ---------------------------------------------------------------------------
# idioms


def idiom_items(
    grammar: Grammar,
    corpus: Corpus,
    form_width: int = FORM_WIDTH,
    categories: Optional[Sequence[str]] = None,
) -> IdiomReport:
    """Idiomatic sentences plus the lexical items that cannot be generalized.

    A sentence is idiomatic when only a more specific rule gives its meaning.
    A word is idiomatic when readmitting its position's excluded words into
    the general class would contradict some corpus meaning; positions are
    readmitted right to left, mirroring the maximal extension.
    """
    mu, oplus = extract_semantics(grammar, form_width, categories)
    rows = [r for r in corpus.distinct() if len(r) > form_width]
    excl_pairs = {(e.left, e.right) for e in oplus.exclusions}

    sentences = tuple(r for r in rows if (r[0], r[1]) in excl_pairs)
    justification = tuple((r, r[form_width:]) for r in sentences)

    if not oplus.rules:
        items = tuple(sorted({r[0] for r in sentences} | {r[1] for r in sentences}))
        return IdiomReport(sentences, items, justification)
    template = oplus.rules[0].template

    word_sets = ({r[0] for r in rows}, {r[1] for r in rows})
    idiom_words = ({r[0] for r in sentences}, {r[1] for r in sentences})
    classes = [word_sets[0] - idiom_words[0], word_sets[1] - idiom_words[1]]

    changed = True
    while changed:
        changed = False
        for side in (1, 0):
            missing = word_sets[side] - classes[side]
            if not missing:
                continue
            trial = list(classes)
            trial[side] = classes[side] | missing
            ok = all(
                apply_template(template, r[0], r[1]) == r[form_width:]
                for r in rows
                if r[0] in trial[0] and r[1] in trial[1]
            )
            if ok:
                classes = trial
                changed = True
    items = tuple(sorted((word_sets[0] - classes[0]) | (word_sets[1] - classes[1])))
    return IdiomReport(sentences, items, justification)


# ---------------------------------------------------------------------------
# renderings


def mu_as_table(mu: MeaningFunction):
    """Argument/value pairs, one bracketed entry per word."""
    return tuple((e.word, (e.word, e.category)) for e in mu.entries)


def oplus_as_table(oplus: OplusTable):
    out = []
    for r in oplus.rules:
        pattern = (("v", r.left_cat), ("n", r.right_cat))
        out.append((pattern, _template_pairs(r.template, "v", "n")))
    for e in oplus.exclusions:
        out.append(((e.left, e.left_cat), (e.right, e.right_cat)))
    return tuple(out)


def _template_pairs(template, left_var: str, right_var: str):
    """Group a template into attribute pairs; error if it will not pair up."""
    if len(template) % 2:
        raise SemanticsShapeError("meaning templates must pair into attributes")
    fill = {LEFT: left_var, RIGHT: right_var}
    flat = [fill.get(slot, slot[-1] if slot[0] == "const" else None) for slot in template]
    if any(x is None for x in flat):
        raise SemanticsShapeError("unsupported template slot")
    return tuple((flat[i], flat[i + 1]) for i in range(0, len(flat), 2))


def render_nested(node) -> str:
    if isinstance(node, str):
        return node
    return "[ " + " , ".join(render_nested(c) for c in node) + " ]"


# ---------------------------------------------------------------------------
# lambda-style encoding sizes


def lambda_tokens(line: Sequence[str]) -> int:
    return len(line)


def assignment_lambda(category: str, var: str = "X") -> tuple[str, ...]:
    return ("λ", var, ".", "[", category, ",", var, "]")


def _pair_block(pairs) -> tuple[str, ...]:
    out = ["["]
    for i, (a, b) in enumerate(pairs):
        if i:
            out.append(",")
        out.extend(["[", a, ",", b, "]"])
    out.append("]")
    return tuple(out)


def rule_lambda(left_pat: tuple[str, str], right_pat: tuple[str, str], pairs) -> tuple[str, ...]:
    return (
        ("λ", "[", left_pat[0], ",", left_pat[1], "]", "[", right_pat[0], ",", right_pat[1], "]", ".")
        + _pair_block(pairs)
    )


def lambda_encoding_report(mu: MeaningFunction, oplus: OplusTable) -> LambdaReport:
    """Sizes of the lambda-style rendering: one category-assignment function
    per position, the general combination, and one override per exclusion.

    Markers are collapsed into the plain categories, so the encoding pairs
    with the overgeneralizing grammar: the overrides are what make idiomatic
    meanings more specific than the general combination.
    """
    if not mu.entries and not oplus.rules and not oplus.exclusions:
        return LambdaReport(0, 0, ())

    base0, base1 = oplus.bases
    lines: list[tuple[str, ...]] = []
    words0 = words1 = 0
    for e in mu.entries:
        base = e.category[:-6] if e.category.endswith("_nonid") else e.category
        if base == base0:
            words0 += 1
        elif base == base1:
            words1 += 1
        else:
            raise SemanticsShapeError(f"category {e.category!r} fits neither position")

    lines.append(assignment_lambda(base1, "X"))
    lines.append(assignment_lambda(base0, "Y"))

    templates = {r.template for r in oplus.rules}
    if len(templates) > 1:
        raise SemanticsShapeError("more than one combination template")
    for template in templates:
        lines.append(rule_lambda((base0, "Y"), (base1, "X"), _template_pairs(template, "Y", "X")))
    for e in oplus.exclusions:
        if len(e.meaning) % 2:
            raise SemanticsShapeError("override meanings must pair into attributes")
        pairs = tuple(
            (e.meaning[i], e.meaning[i + 1]) for i in range(0, len(e.meaning), 2)
        )
        lines.append(rule_lambda((base0, e.left), (base1, e.right), pairs))

    definitions = sum(lambda_tokens(line) for line in lines)
    domain = words0 + words1
    return LambdaReport(definitions, domain, tuple(" ".join(l) for l in lines))
