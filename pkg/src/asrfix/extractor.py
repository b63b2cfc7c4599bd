"""Produce padded, unique error-correction pairs for each segment.

Words from the reference and hypothesis are aligned; runs of edits become
substitution regions. Pure insertions fold into the preceding matched word
(so the correction side is never silently empty), pure deletions pad with
the following word, and every error is then padded with subsequent words
until it reaches a minimum character length and occurs exactly once in the
segment's hypothesis text. A pair that cannot be made unique within the
padding cap is dropped and reported instead of emitted.

Emitted pairs are finally verified by replaying them through the corrector:
whenever nothing was reported for a segment, sequentially applying its pairs
reconstructs the reference text exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .align import MATCH, align
from .corrector import CorrectionSet, apply_corrections, count_occurrences
from .segmenter import DEFAULT_TERMINAL_MARKS, SegmentPair, split_segments
from .tokenizer import Lexicon, segment_words

DEFAULT_MIN_ERROR_LEN = 4
DEFAULT_UNIQUE_CAP = 16

# Error runs separated by fewer matched words than this merge into one pair,
# so padded pairs cannot overlap.
_MERGE_GAP = 2


@dataclass(frozen=True)
class ErrorCorrectionPair:
    segment_index: int
    error: str
    correction: str
    position: int  # char offset of the error in the hypothesis segment


@dataclass(frozen=True)
class UnresolvablePair:
    """A pair dropped from the output, with where and why."""

    segment_index: int
    position: int
    error: str
    reason: str


@dataclass
class DocumentExtraction:
    """Segments of one document with their pairs and dropped-pair reports."""

    segments: list[SegmentPair] = field(default_factory=list)
    pairs: list[list[ErrorCorrectionPair]] = field(default_factory=list)
    unresolved: list[UnresolvablePair] = field(default_factory=list)


def _prefix_char_offsets(words: Sequence[str]) -> list[int]:
    offsets = [0]
    for w in words:
        offsets.append(offsets[-1] + len(w))
    return offsets


def _grow(regions: list[list[int]], idx: int, prefer: str, n_ops: int) -> int | None:
    """Absorb one adjacent op into regions[idx], merging into a neighbor region
    when the absorbed op already belongs to it. Returns the region's new index,
    or None when there is nothing left to absorb on either side."""
    lo, hi = regions[idx]
    sides = ("right", "left") if prefer == "right" else ("left", "right")
    for side in sides:
        if side == "right" and hi < n_ops:
            regions[idx][1] = hi + 1
            if idx + 1 < len(regions) and regions[idx][1] > regions[idx + 1][0]:
                regions[idx][1] = max(regions[idx][1], regions[idx + 1][1])
                del regions[idx + 1]
            return idx
        if side == "left" and lo > 0:
            regions[idx][0] = lo - 1
            if idx > 0 and regions[idx][0] < regions[idx - 1][1]:
                regions[idx - 1][1] = regions[idx][1]
                del regions[idx]
                return idx - 1
            return idx
    return None


def extract_pairs(
    seg: SegmentPair,
    lexicon: Lexicon,
    *,
    min_error_len: int = DEFAULT_MIN_ERROR_LEN,
    unique_cap: int = DEFAULT_UNIQUE_CAP,
) -> tuple[list[ErrorCorrectionPair], list[UnresolvablePair]]:
    """Extract pairs for one segment; returns (pairs, dropped-pair reports)."""
    ref_text = seg.ref_text
    hyp_text = seg.hyp_text
    ref_words = segment_words(ref_text, lexicon)
    hyp_words = segment_words(hyp_text, lexicon)
    ops = align(ref_words, hyp_words).ops
    n_ops = len(ops)

    # Word index consumed on each side before op k.
    ref_at = [0]
    hyp_at = [0]
    for op in ops:
        ref_at.append(ref_at[-1] + (op.ref_index is not None))
        hyp_at.append(hyp_at[-1] + (op.hyp_index is not None))
    ref_char = _prefix_char_offsets(ref_words)
    hyp_char = _prefix_char_offsets(hyp_words)

    def hyp_span(lo: int, hi: int) -> str:
        return hyp_text[hyp_char[hyp_at[lo]] : hyp_char[hyp_at[hi]]]

    def ref_span(lo: int, hi: int) -> str:
        return ref_text[ref_char[ref_at[lo]] : ref_char[ref_at[hi]]]

    # Maximal runs of non-match ops.
    regions: list[list[int]] = []
    for k, op in enumerate(ops):
        if op.kind == MATCH:
            continue
        if regions and regions[-1][1] == k:
            regions[-1][1] = k + 1
        else:
            regions.append([k, k + 1])

    # Merge runs separated by fewer than _MERGE_GAP matched words.
    merged: list[list[int]] = []
    for region in regions:
        if merged and region[0] - merged[-1][1] < _MERGE_GAP:
            merged[-1][1] = region[1]
        else:
            merged.append(region)
    regions = merged

    reports: list[UnresolvablePair] = []
    min_eff = min(min_error_len, len(hyp_text))

    idx = 0
    while idx < len(regions):
        dropped = False
        while True:
            lo, hi = regions[idx]
            error = hyp_span(lo, hi)
            prefer = None
            if hyp_at[lo] == hyp_at[hi]:
                prefer = "right"  # deletion: pad with the following word
            elif ref_at[lo] == ref_at[hi] and (lo > 0 or hi < n_ops):
                prefer = "left"  # insertion: attach the preceding word
            elif len(error) < min_eff:
                prefer = "right"
            elif count_occurrences(hyp_text, error) != 1:
                if len(error) >= unique_cap:
                    reports.append(
                        UnresolvablePair(
                            seg.index,
                            hyp_char[hyp_at[lo]],
                            error,
                            "not unique within the padding cap",
                        )
                    )
                    del regions[idx]
                    dropped = True
                    break
                prefer = "right"
            if prefer is None:
                break
            new_idx = _grow(regions, idx, prefer, n_ops)
            if new_idx is None:
                if hyp_at[lo] == hyp_at[hi]:
                    reports.append(
                        UnresolvablePair(
                            seg.index, 0, "", "no hypothesis material for deleted text"
                        )
                    )
                    del regions[idx]
                    dropped = True
                break
            idx = new_idx
        if not dropped:
            idx += 1

    # Replay the pairs through the corrector; grow or drop offenders until the
    # application is clean. Pairs whose error equals their correction are
    # resegmentation artifacts and are skipped.
    while True:
        emitted: list[tuple[str, str, int, int]] = []
        seen: dict[str, int] = {}
        duplicate = None
        for k, (lo, hi) in enumerate(regions):
            error = hyp_span(lo, hi)
            correction = ref_span(lo, hi)
            if error == correction:
                continue
            if error in seen:
                duplicate = k
                break
            seen[error] = k
            emitted.append((error, correction, hyp_char[hyp_at[lo]], k))

        if duplicate is not None:
            lo, hi = regions[duplicate]
            reports.append(
                UnresolvablePair(
                    seg.index, hyp_char[hyp_at[lo]], hyp_span(lo, hi), "duplicate error string"
                )
            )
            del regions[duplicate]
            continue

        mapping = {error: correction for error, correction, _, _ in emitted}
        corrected, report = apply_corrections([hyp_text], CorrectionSet([mapping]))
        offenders = [e for _, e in report.not_found] + [e for _, e, _ in report.ambiguous]
        if not offenders:
            if not reports and corrected[0] != ref_text:
                raise RuntimeError(
                    "internal error: clean pair application did not reconstruct the reference"
                )
            pairs = [
                ErrorCorrectionPair(seg.index, error, correction, position)
                for error, correction, position, _ in emitted
            ]
            return pairs, reports

        target = seen[offenders[0]]
        lo, hi = regions[target]
        error = hyp_span(lo, hi)
        if len(error) >= unique_cap or _grow(regions, target, "right", n_ops) is None:
            reports.append(
                UnresolvablePair(
                    seg.index,
                    hyp_char[hyp_at[lo]],
                    error,
                    "ambiguous in partially corrected text",
                )
            )
            del regions[target]


def extract_document(
    ref_text: str,
    hyp_text: str,
    lexicon: Lexicon,
    *,
    min_error_len: int = DEFAULT_MIN_ERROR_LEN,
    unique_cap: int = DEFAULT_UNIQUE_CAP,
    terminal_marks: frozenset[str] | set[str] = DEFAULT_TERMINAL_MARKS,
) -> DocumentExtraction:
    """Split a document pair and extract pairs for every segment."""
    doc = DocumentExtraction()
    for seg in split_segments(ref_text, hyp_text, terminal_marks):
        pairs, unresolved = extract_pairs(
            seg, lexicon, min_error_len=min_error_len, unique_cap=unique_cap
        )
        doc.segments.append(seg)
        doc.pairs.append(pairs)
        doc.unresolved.extend(unresolved)
    return doc


def pair_manifest(
    docs: Iterable[tuple[str, str]],
    lexicon: Lexicon,
    *,
    min_error_len: int = DEFAULT_MIN_ERROR_LEN,
    unique_cap: int = DEFAULT_UNIQUE_CAP,
    terminal_marks: frozenset[str] | set[str] = DEFAULT_TERMINAL_MARKS,
) -> list[DocumentExtraction]:
    """Per-document, segment-indexed pair lists for a corpus, in input order."""
    return [
        extract_document(
            ref_text,
            hyp_text,
            lexicon,
            min_error_len=min_error_len,
            unique_cap=unique_cap,
            terminal_marks=terminal_marks,
        )
        for ref_text, hyp_text in docs
    ]
