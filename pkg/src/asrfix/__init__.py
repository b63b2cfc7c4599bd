"""Corpus tools for full-text Chinese ASR error correction.

The toolkit aligns ASR hypothesis text with its reference transcript,
splits both into co-terminal segments, extracts padded error-correction
pairs, renders fine-tuning prompt/target records in four formats, applies
model-produced corrections back onto hypotheses, and scores per-category
error rates.
"""

from .align import (
    BACKEND,
    DEL,
    INS,
    MATCH,
    SUB,
    Alignment,
    EditOp,
    align,
    distance,
    edit_counts,
)
from .corrector import (
    ARTICLE_SCOPE,
    SEGMENT_SCOPE,
    ApplyReport,
    CorrectionSet,
    MalformedJsonError,
    ScopeMismatchError,
    SegmentCountMismatchError,
    apply_corrections,
    count_occurrences,
    format_correction_json,
    parse_correction_json,
)
from .extractor import (
    DocumentExtraction,
    ErrorCorrectionPair,
    UnresolvablePair,
    extract_document,
    extract_pairs,
    pair_manifest,
)
from .manifest import CONDITIONS, SPLITS, DocumentRecord, ManifestError, load_manifest
from .prompts import (
    DEFAULT_TEMPLATES,
    PROMPT_TYPE_NAMES,
    MissingPlaceholderError,
    PromptRecord,
    PromptType,
    emit_dataset,
    records_for_document,
    render_prompt,
)
from .scorer import (
    CategoryCounts,
    EmptyReferenceError,
    ScoreReport,
    ZeroBaselineError,
    aggregate,
    err,
    percent,
    score_pair,
)
from .segmenter import DEFAULT_TERMINAL_MARKS, SegmentPair, corpus_stats, split_segments
from .tokenizer import (
    EMPTY_LEXICON,
    Lexicon,
    Token,
    TokenCategory,
    classify_char,
    segment_words,
    tokenize_text,
)

__version__ = "0.1.0"

__all__ = [
    "align",
    "distance",
    "edit_counts",
    "BACKEND",
    "Alignment",
    "EditOp",
    "MATCH",
    "SUB",
    "DEL",
    "INS",
    "TokenCategory",
    "Token",
    "classify_char",
    "tokenize_text",
    "Lexicon",
    "EMPTY_LEXICON",
    "segment_words",
    "SegmentPair",
    "split_segments",
    "corpus_stats",
    "DEFAULT_TERMINAL_MARKS",
    "ErrorCorrectionPair",
    "UnresolvablePair",
    "DocumentExtraction",
    "extract_pairs",
    "extract_document",
    "pair_manifest",
    "CorrectionSet",
    "ApplyReport",
    "MalformedJsonError",
    "ScopeMismatchError",
    "SegmentCountMismatchError",
    "parse_correction_json",
    "format_correction_json",
    "apply_corrections",
    "count_occurrences",
    "ARTICLE_SCOPE",
    "SEGMENT_SCOPE",
    "PromptType",
    "PromptRecord",
    "PROMPT_TYPE_NAMES",
    "DEFAULT_TEMPLATES",
    "MissingPlaceholderError",
    "render_prompt",
    "records_for_document",
    "emit_dataset",
    "CategoryCounts",
    "ScoreReport",
    "EmptyReferenceError",
    "ZeroBaselineError",
    "score_pair",
    "aggregate",
    "err",
    "percent",
    "DocumentRecord",
    "ManifestError",
    "load_manifest",
    "CONDITIONS",
    "SPLITS",
    "__version__",
]
