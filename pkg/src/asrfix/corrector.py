"""Parse correction JSON from a model and apply error-correction pairs.

The wire schema is minimal: segment scope is one JSON object whose keys are
error strings and values are correction strings; article scope is a JSON
array of such objects, index i belonging to segment i. Model output is
parsed tolerantly (leading prose/code fences are skipped), but a pair only
applies when its error occurs exactly once in the current segment text, so
hallucinated pairs cannot cascade.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping, Sequence

ARTICLE_SCOPE = "article"
SEGMENT_SCOPE = "segment"


class MalformedJsonError(ValueError):
    """Model output has no parseable correction JSON of the right shape."""


class ScopeMismatchError(ValueError):
    """JSON object where an array was expected, or vice versa."""


class SegmentCountMismatchError(ValueError):
    """More per-segment mappings than hypothesis segments."""


@dataclass
class CorrectionSet:
    """Ordered error->correction mappings, one per segment."""

    per_segment: list[dict[str, str]]

    def total_pairs(self) -> int:
        return sum(len(m) for m in self.per_segment)


@dataclass
class ApplyReport:
    applied: int = 0
    not_found: list[tuple[int, str]] = field(default_factory=list)
    ambiguous: list[tuple[int, str, int]] = field(default_factory=list)


def count_occurrences(text: str, sub: str) -> int:
    """Number of (possibly overlapping) occurrences of sub in text."""
    if not sub:
        return 0
    count = 0
    start = text.find(sub)
    while start != -1:
        count += 1
        start = text.find(sub, start + 1)
    return count


def _check_mapping(obj: object) -> dict[str, str]:
    if not isinstance(obj, dict):
        raise MalformedJsonError(f"expected a JSON object of pairs, got {type(obj).__name__}")
    for key, value in obj.items():
        if not key:
            raise MalformedJsonError("empty error string in correction pair")
        if not isinstance(value, str):
            raise MalformedJsonError(f"correction for {key!r} is not a string")
    return obj


def parse_correction_json(raw: str, scope: str) -> CorrectionSet:
    """Parse model output into a CorrectionSet.

    Anything before the first '{' or '[' (prose, code fences) and anything
    after the matching close is ignored. Raises MalformedJsonError when no
    valid JSON is found and ScopeMismatchError when the shape contradicts
    the scope.
    """
    if scope not in (ARTICLE_SCOPE, SEGMENT_SCOPE):
        raise ValueError(f"unknown scope {scope!r}")
    starts = [i for i in (raw.find("{"), raw.find("[")) if i != -1]
    if not starts:
        raise MalformedJsonError("no JSON object or array in output")
    try:
        value, _ = json.JSONDecoder().raw_decode(raw[min(starts):])
    except json.JSONDecodeError as exc:
        raise MalformedJsonError(f"unparseable correction JSON: {exc}") from exc

    if scope == SEGMENT_SCOPE:
        if isinstance(value, list):
            raise ScopeMismatchError("got an array but segment scope expects one object")
        return CorrectionSet([_check_mapping(value)])
    if isinstance(value, dict):
        raise ScopeMismatchError("got an object but article scope expects an array")
    if not isinstance(value, list):
        raise MalformedJsonError(f"expected a JSON array, got {type(value).__name__}")
    return CorrectionSet([_check_mapping(item) for item in value])


def format_correction_json(pairs: CorrectionSet | Sequence[Mapping[str, str]], scope: str) -> str:
    """Serialize mappings to the canonical wire form (insertion order kept)."""
    per_segment = pairs.per_segment if isinstance(pairs, CorrectionSet) else list(pairs)
    if scope == SEGMENT_SCOPE:
        if len(per_segment) != 1:
            raise ValueError("segment scope serializes exactly one mapping")
        return json.dumps(per_segment[0], ensure_ascii=False)
    if scope == ARTICLE_SCOPE:
        return json.dumps(list(per_segment), ensure_ascii=False)
    raise ValueError(f"unknown scope {scope!r}")


def apply_corrections(
    hyp_segments: Sequence[str], corrections: CorrectionSet
) -> tuple[list[str], ApplyReport]:
    """Replace each exactly-once error with its correction, segment by segment.

    Pairs apply sequentially in mapping order against the progressively
    corrected text. Failures are recorded in the report, never raised, so one
    bad pair cannot abort a batch.
    """
    if len(corrections.per_segment) > len(hyp_segments):
        raise SegmentCountMismatchError(
            f"{len(corrections.per_segment)} mappings for {len(hyp_segments)} segments"
        )
    report = ApplyReport()
    out = list(hyp_segments)
    for k, mapping in enumerate(corrections.per_segment):
        text = out[k]
        for error, correction in mapping.items():
            hits = count_occurrences(text, error)
            if hits == 1:
                at = text.find(error)
                text = text[:at] + correction + text[at + len(error):]
                report.applied += 1
            elif hits == 0:
                report.not_found.append((k, error))
            else:
                report.ambiguous.append((k, error, hits))
        out[k] = text
    return out, report
