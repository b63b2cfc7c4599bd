"""Render prompt/target records for the four supervision formats.

Article types insert the whole document into the template and produce one
record per document; Seg types produce one record per segment. Direct types
supervise the corrected text itself; Json types supervise error-correction
pairs in the correction-JSON wire format (one object per segment, articles
as an index-aligned array with empty objects for clean segments).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Mapping, Sequence

from .corrector import ARTICLE_SCOPE, SEGMENT_SCOPE, format_correction_json
from .extractor import DocumentExtraction, ErrorCorrectionPair

PLACEHOLDER = "{input}"


class PromptType(Enum):
    ARTICLE_DIRECT = "article_direct"
    ARTICLE_JSON = "article_json"
    SEG_DIRECT = "seg_direct"
    SEG_JSON = "seg_json"

    @property
    def article_scope(self) -> bool:
        return self in (PromptType.ARTICLE_DIRECT, PromptType.ARTICLE_JSON)

    @property
    def json_output(self) -> bool:
        return self in (PromptType.ARTICLE_JSON, PromptType.SEG_JSON)


PROMPT_TYPE_NAMES = tuple(p.value for p in PromptType)

DEFAULT_TEMPLATES: dict[str, str] = {
    "article_direct": "以下是语音识别的全文转写，可能包含识别错误。请输出修正后的全文。\n{input}",
    "article_json": (
        "以下是语音识别的全文转写，可能包含识别错误。"
        "请以JSON数组输出每个分段的纠错对，数组第i个对象对应第i个分段，"
        "键为错误文本，值为修正文本；无错误的分段输出空对象。\n{input}"
    ),
    "seg_direct": "以下是语音识别的分段转写，可能包含识别错误。请输出修正后的文本。\n{input}",
    "seg_json": (
        "以下是语音识别的分段转写，可能包含识别错误。"
        "请以JSON对象输出纠错对，键为错误文本，值为修正文本；无错误时输出空对象。\n{input}"
    ),
}


class MissingPlaceholderError(ValueError):
    """A configured template lacks the {input} insertion slot."""


@dataclass(frozen=True)
class PromptRecord:
    doc_id: str
    prompt: str
    target: str
    prompt_type: PromptType
    segment_index: int | None = None

    def to_json(self) -> str:
        """One JSONL line; key order is fixed for reproducible diffs."""
        record: dict = {"doc_id": self.doc_id}
        if self.segment_index is not None:
            record["segment_index"] = self.segment_index
        record["prompt"] = self.prompt
        record["target"] = self.target
        record["prompt_type"] = self.prompt_type.value
        return json.dumps(record, ensure_ascii=False)


def resolve_templates(overrides: Mapping[str, str] | None = None) -> dict[str, str]:
    """Shipped defaults with any user-configured templates layered on top."""
    templates = dict(DEFAULT_TEMPLATES)
    if overrides:
        templates.update(overrides)
    return templates


def render_prompt(template: str, text: str) -> str:
    if PLACEHOLDER not in template:
        raise MissingPlaceholderError(f"template lacks the {PLACEHOLDER} placeholder")
    # Plain replacement: template text may legitimately contain other braces.
    return template.replace(PLACEHOLDER, text)


def pairs_mapping(pairs: Sequence[ErrorCorrectionPair]) -> dict[str, str]:
    return {p.error: p.correction for p in pairs}


def records_for_document(
    doc_id: str,
    ref_text: str,
    hyp_text: str,
    extraction: DocumentExtraction,
    ptype: PromptType,
    templates: Mapping[str, str],
) -> list[PromptRecord]:
    """All records one document contributes under the given prompt type."""
    template = templates[ptype.value]
    if ptype.article_scope:
        if ptype.json_output:
            mappings = [pairs_mapping(seg_pairs) for seg_pairs in extraction.pairs]
            target = format_correction_json(mappings, ARTICLE_SCOPE)
        else:
            target = ref_text
        prompt = render_prompt(template, hyp_text)
        return [PromptRecord(doc_id, prompt, target, ptype)]

    records = []
    for seg, seg_pairs in zip(extraction.segments, extraction.pairs):
        if ptype.json_output:
            target = format_correction_json([pairs_mapping(seg_pairs)], SEGMENT_SCOPE)
        else:
            target = seg.ref_text
        prompt = render_prompt(template, seg.hyp_text)
        records.append(PromptRecord(doc_id, prompt, target, ptype, segment_index=seg.index))
    return records


def emit_dataset(
    docs: Iterable[tuple[str, str, str, DocumentExtraction]],
    ptype: PromptType,
    templates: Mapping[str, str] | None = None,
) -> Iterator[PromptRecord]:
    """Stream records for (doc_id, ref_text, hyp_text, extraction) tuples."""
    resolved = resolve_templates(templates)
    for doc_id, ref_text, hyp_text, extraction in docs:
        yield from records_for_document(doc_id, ref_text, hyp_text, extraction, ptype, resolved)
