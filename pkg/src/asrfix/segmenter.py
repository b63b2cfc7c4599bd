"""Split reference/hypothesis documents into co-terminal segments.

A segment boundary is a point where the character-level alignment puts a
terminal punctuation mark of the reference against a terminal mark of the
hypothesis (match or terminal-to-terminal substitution). Splitting is greedy
left-to-right, so segments end at the earliest shared terminal point; any
trailing remainder becomes a final segment even without terminal punctuation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .align import MATCH, SUB, align

DEFAULT_TERMINAL_MARKS = frozenset("。？！")

# Closing quotes/brackets directly after a terminal mark attach to the left segment.
_CLOSING_MARKS = frozenset("”’》）』」\"')")


@dataclass(frozen=True)
class SegmentPair:
    index: int
    ref_text: str
    hyp_text: str


def split_segments(
    ref_text: str,
    hyp_text: str,
    terminal_marks: frozenset[str] | set[str] = DEFAULT_TERMINAL_MARKS,
) -> list[SegmentPair]:
    """Split a document pair at aligned terminal punctuation.

    Concatenating the segment texts always reproduces the inputs. A document
    without any shared terminal point yields a single segment.
    """
    if not ref_text and not hyp_text:
        return []

    cuts: list[tuple[int, int]] = []
    r0 = h0 = 0
    for op in align(list(ref_text), list(hyp_text)).ops:
        if op.kind not in (MATCH, SUB):
            continue
        if ref_text[op.ref_index] not in terminal_marks:
            continue
        if hyp_text[op.hyp_index] not in terminal_marks:
            continue
        ri = op.ref_index + 1
        hi = op.hyp_index + 1
        if ri <= r0 or hi <= h0:
            continue
        while ri < len(ref_text) and ref_text[ri] in _CLOSING_MARKS:
            ri += 1
        while hi < len(hyp_text) and hyp_text[hi] in _CLOSING_MARKS:
            hi += 1
        cuts.append((ri, hi))
        r0, h0 = ri, hi

    if not cuts or cuts[-1] != (len(ref_text), len(hyp_text)):
        cuts.append((len(ref_text), len(hyp_text)))

    segments = []
    r0 = h0 = 0
    for index, (ri, hi) in enumerate(cuts):
        segments.append(SegmentPair(index, ref_text[r0:ri], hyp_text[h0:hi]))
        r0, h0 = ri, hi
    return segments


def _hist_bucket(length: int) -> str:
    if length <= 0:
        return "0"
    k = length.bit_length() - 1
    return f"{2 ** k}-{2 ** (k + 1) - 1}"


def length_histogram(lengths: Iterable[int]) -> dict[str, int]:
    """Power-of-two bucketed histogram, keys ordered by bucket."""
    counts: dict[int, int] = {}
    for n in lengths:
        k = -1 if n <= 0 else n.bit_length() - 1
        counts[k] = counts.get(k, 0) + 1
    hist = {}
    for k in sorted(counts):
        label = "0" if k < 0 else f"{2 ** k}-{2 ** (k + 1) - 1}"
        hist[label] = counts[k]
    return hist


def corpus_stats(
    docs: Sequence[tuple[str, str]],
    terminal_marks: frozenset[str] | set[str] = DEFAULT_TERMINAL_MARKS,
) -> dict:
    """Article/segment counts and reference-length histograms for a corpus."""
    article_lengths = []
    segment_lengths = []
    n_segments = 0
    for ref_text, hyp_text in docs:
        article_lengths.append(len(ref_text))
        for seg in split_segments(ref_text, hyp_text, terminal_marks):
            segment_lengths.append(len(seg.ref_text))
            n_segments += 1
    return {
        "articles": len(article_lengths),
        "segments": n_segments,
        "article_length_hist": length_histogram(article_lengths),
        "segment_length_hist": length_histogram(segment_lengths),
    }
