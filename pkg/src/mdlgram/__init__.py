"""MDL grammar induction, generation, and compositional-semantics analysis."""

from .grammar import (
    Corpus,
    ClassDef,
    Diagnostic,
    EmptyCorpusError,
    Grammar,
    InlineClass,
    Rule,
    Sentence,
    Term,
    ValidationError,
    canonicalize,
    listing_grammar,
    validate,
)
from .dl import DEFAULT_PENALTY, CoverageError, DLReport, grammar_dl, table_dl, term_dl, total_dl
from .generate import (
    CoverageReport,
    EnumerationLimitError,
    coverage,
    derives,
    enumerate_language,
    rule_language,
)
from .induce import (
    CandidateOp,
    InductionConfig,
    OpRejectedError,
    TraceRecord,
    apply_op,
    concat_candidates,
    evaluate,
    induce,
    initial_grammar,
    merge_candidates,
)
from .semantics import (
    CompositionalityScore,
    IdiomReport,
    LambdaReport,
    MeaningEntry,
    MeaningFunction,
    OplusRule,
    OplusTable,
    SemanticsShapeError,
    check_compositional,
    compositionality_score,
    extract_semantics,
    idiom_items,
    lambda_encoding_report,
    maximal_extension,
)
from .io import demo_corpus, parse_corpus, parse_grammar, serialize_corpus, serialize_grammar

__all__ = [name for name in dir() if not name.startswith("_")]
