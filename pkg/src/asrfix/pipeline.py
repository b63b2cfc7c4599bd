"""Batch pipeline: dataset building, baseline scoring, and model evaluation.

Per-document work is pure, so evaluation runs documents on a thread pool
whose size doubles as the concurrent-request cap on the model endpoint.
Output files are written once, after all workers finish, in manifest order,
which keeps every run with the same inputs and seed byte-identical.

Score report files carry scoring content only; processing accounting
(processed/skipped/failed/malformed counts) goes to a separate summary file
so an identity model reproduces the baseline reports byte for byte.
"""

from __future__ import annotations

import json
import logging
import random
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .client import EndpointError, ModelClient, ModelEndpoint
from .corrector import ARTICLE_SCOPE, SEGMENT_SCOPE, apply_corrections, parse_correction_json
from .extractor import (
    DEFAULT_MIN_ERROR_LEN,
    DEFAULT_UNIQUE_CAP,
    DocumentExtraction,
    extract_document,
)
from .manifest import SPLITS, DocumentRecord, load_manifest
from .prompts import PromptType, records_for_document, render_prompt, resolve_templates
from .scorer import ScoreReport, aggregate, score_pair
from .segmenter import corpus_stats, split_segments
from .tokenizer import EMPTY_LEXICON, Lexicon
from .util import load_kv_file, write_json, write_jsonl

log = logging.getLogger("asrfix")

DEFAULT_SEED = 1234
DEFAULT_WORKERS = 4

# One training document in ten is reserved for validation.
VALIDATION_DENOMINATOR = 10


def load_lexicon(path: str | Path | None) -> Lexicon:
    return Lexicon.from_file(path) if path else EMPTY_LEXICON


def load_templates(path: str | Path | None) -> dict[str, str]:
    return resolve_templates(load_kv_file(path) if path else None)


def _pair_rows(doc_id: str, extraction: DocumentExtraction) -> list[dict]:
    rows = []
    for seg_pairs in extraction.pairs:
        for pair in seg_pairs:
            rows.append(
                {
                    "doc_id": doc_id,
                    "segment_index": pair.segment_index,
                    "position": pair.position,
                    "error": pair.error,
                    "correction": pair.correction,
                }
            )
    return rows


def _unresolved_rows(doc_id: str, extraction: DocumentExtraction) -> list[dict]:
    return [
        {
            "doc_id": doc_id,
            "segment_index": rep.segment_index,
            "position": rep.position,
            "error": rep.error,
            "reason": rep.reason,
        }
        for rep in extraction.unresolved
    ]


def validation_doc_ids(doc_ids: list[str], seed: int) -> set[str]:
    """Seeded pick of one tenth of the training documents."""
    shuffled = list(doc_ids)
    random.Random(seed).shuffle(shuffled)
    return set(shuffled[: len(shuffled) // VALIDATION_DENOMINATOR])


def run_build(
    manifest_path: str | Path,
    out_dir: str | Path,
    ptype: PromptType,
    *,
    lexicon_path: str | Path | None = None,
    templates_path: str | Path | None = None,
    seed: int = DEFAULT_SEED,
    min_error_len: int = DEFAULT_MIN_ERROR_LEN,
    unique_cap: int = DEFAULT_UNIQUE_CAP,
) -> dict:
    """Extract pairs, render prompt records, and emit per-split datasets."""
    records = load_manifest(manifest_path)
    lexicon = load_lexicon(lexicon_path)
    templates = load_templates(templates_path)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    processed: list[tuple[DocumentRecord, str, DocumentExtraction]] = []
    failed: list[str] = []
    for record in records:
        try:
            ref_text = record.resolve_ref()
            extraction = extract_document(
                ref_text,
                record.hyp_text,
                lexicon,
                min_error_len=min_error_len,
                unique_cap=unique_cap,
            )
        except Exception as exc:
            log.error("build: document %s failed: %s", record.doc_id, exc)
            failed.append(record.doc_id)
            continue
        processed.append((record, ref_text, extraction))

    train_ids = [rec.doc_id for rec, _, _ in processed if rec.split == "train"]
    val_ids = validation_doc_ids(train_ids, seed)

    groups: dict[str, list[tuple[DocumentRecord, str, DocumentExtraction]]] = {}
    for item in processed:
        record = item[0]
        if record.split == "train":
            name = "validation" if record.doc_id in val_ids else "train"
        else:
            name = record.split
        groups.setdefault(name, []).append(item)
    if train_ids:
        groups.setdefault("validation", [])

    datasets: dict[str, int] = {}
    for name in ("train", "validation") + SPLITS[1:]:
        if name not in groups:
            continue
        path = out / f"{ptype.value}_{name}.jsonl"
        with open(path, "w", encoding="utf-8") as fh:
            count = 0
            for record, ref_text, extraction in groups[name]:
                for rec in records_for_document(
                    record.doc_id, ref_text, record.hyp_text, extraction, ptype, templates
                ):
                    fh.write(rec.to_json())
                    fh.write("\n")
                    count += 1
        datasets[path.name] = count

    pair_rows: list[dict] = []
    unresolved_rows: list[dict] = []
    for record, _, extraction in processed:
        pair_rows.extend(_pair_rows(record.doc_id, extraction))
        unresolved_rows.extend(_unresolved_rows(record.doc_id, extraction))
    write_jsonl(out / "pairs.jsonl", pair_rows)
    write_jsonl(out / "unresolved.jsonl", unresolved_rows)

    stats = corpus_stats([(ref_text, record.hyp_text) for record, ref_text, _ in processed])
    stats["split_documents"] = {
        name: len(groups[name]) for name in ("train", "validation") + SPLITS[1:] if name in groups
    }
    write_json(out / "stats.json", stats)

    summary = {
        "total": len(records),
        "processed": len(processed),
        "failed": len(failed),
        "failed_docs": failed,
        "pairs": len(pair_rows),
        "unresolved": len(unresolved_rows),
        "datasets": datasets,
    }
    write_json(out / "summary.json", summary)
    return summary


def _score_rows(split: str, reports: list[ScoreReport], baseline: ScoreReport | None) -> dict:
    pooled = aggregate(reports)
    return {
        "split": split,
        "documents": len(reports),
        "scores": pooled.to_dict(baseline),
    }


def run_baseline(manifest_path: str | Path, out_dir: str | Path) -> dict:
    """Score the uncorrected hypothesis of every document, grouped by split."""
    records = load_manifest(manifest_path)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    per_split: dict[str, list[ScoreReport]] = {}
    failed: list[str] = []
    for record in records:
        try:
            report = score_pair(record.resolve_ref(), record.hyp_text)
        except Exception as exc:
            log.error("baseline: document %s failed: %s", record.doc_id, exc)
            failed.append(record.doc_id)
            continue
        per_split.setdefault(record.split, []).append(report)

    for split in SPLITS:
        if split in per_split:
            write_json(out / f"score_{split}.json", _score_rows(split, per_split[split], None))

    summary = {
        "total": len(records),
        "processed": sum(len(v) for v in per_split.values()),
        "failed": len(failed),
        "failed_docs": failed,
        "splits": {split: len(per_split[split]) for split in SPLITS if split in per_split},
    }
    write_json(out / "summary.json", summary)
    return summary


def _correct_document(
    record: DocumentRecord,
    ref_text: str,
    ptype: PromptType,
    templates: dict[str, str],
    client: ModelClient,
) -> tuple[str, int]:
    """Model-corrected document text and the count of malformed JSON outputs."""
    template = templates[ptype.value]
    segments = split_segments(ref_text, record.hyp_text)
    malformed = 0

    if ptype.article_scope:
        prompt = render_prompt(template, record.hyp_text)
        text = client.get_text(record.doc_id, None, ptype.value, prompt)
        if not ptype.json_output:
            return text, 0
        hyp_segments = [seg.hyp_text for seg in segments]
        try:
            corrections = parse_correction_json(text, ARTICLE_SCOPE)
            corrected, _ = apply_corrections(hyp_segments, corrections)
        except ValueError:  # any schema violation counts as malformed output
            corrected = hyp_segments
            malformed = 1
        return "".join(corrected), malformed

    parts: list[str] = []
    for seg in segments:
        prompt = render_prompt(template, seg.hyp_text)
        text = client.get_text(record.doc_id, seg.index, ptype.value, prompt)
        if not ptype.json_output:
            parts.append(text)
            continue
        try:
            corrections = parse_correction_json(text, SEGMENT_SCOPE)
            corrected, _ = apply_corrections([seg.hyp_text], corrections)
            parts.append(corrected[0])
        except ValueError:
            parts.append(seg.hyp_text)
            malformed += 1
    return "".join(parts), malformed


def run_eval(
    manifest_path: str | Path,
    out_dir: str | Path,
    ptype: PromptType,
    *,
    endpoint_url: str | None = None,
    cache_path: str | Path | None = None,
    offline: bool = False,
    templates_path: str | Path | None = None,
    baseline_dir: str | Path | None = None,
    timeout: float = 30.0,
    retries: int = 2,
    workers: int = DEFAULT_WORKERS,
) -> dict:
    """Query the model for every document, apply its output, score per split.

    Endpoint failures mark the document skipped; malformed correction JSON
    falls back to scoring the uncorrected hypothesis. Both are counted in the
    summary, never silently dropped."""
    records = load_manifest(manifest_path)
    templates = load_templates(templates_path)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    endpoint = None
    if endpoint_url:
        endpoint = ModelEndpoint(endpoint_url, timeout=timeout, max_retries=retries)

    def work(record: DocumentRecord) -> tuple[str, ScoreReport | None, int]:
        try:
            ref_text = record.resolve_ref()
            corrected, malformed = _correct_document(record, ref_text, ptype, templates, client)
            return "processed", score_pair(ref_text, corrected), malformed
        except EndpointError as exc:
            log.error("eval: document %s skipped: %s", record.doc_id, exc)
            return "skipped", None, 0
        except Exception as exc:
            log.error("eval: document %s failed: %s", record.doc_id, exc)
            return "failed", None, 0

    with ModelClient(endpoint, cache_path=cache_path, offline=offline) as client:
        with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
            results = list(pool.map(work, records))

    per_split: dict[str, list[ScoreReport]] = {}
    skipped: list[str] = []
    failed: list[str] = []
    malformed_total = 0
    for record, (status, report, malformed) in zip(records, results):
        if status == "processed":
            per_split.setdefault(record.split, []).append(report)
            malformed_total += malformed
        elif status == "skipped":
            skipped.append(record.doc_id)
        else:
            failed.append(record.doc_id)

    baselines: dict[str, ScoreReport] = {}
    if baseline_dir is not None:
        for split in SPLITS:
            path = Path(baseline_dir) / f"score_{split}.json"
            if path.exists():
                data = json.loads(path.read_text("utf-8"))
                baselines[split] = ScoreReport.from_dict(data["scores"])

    for split in SPLITS:
        if split in per_split:
            row = _score_rows(split, per_split[split], baselines.get(split))
            write_json(out / f"score_{split}.json", row)

    summary = {
        "total": len(records),
        "processed": sum(len(v) for v in per_split.values()),
        "skipped": len(skipped),
        "failed": len(failed),
        "skipped_docs": skipped,
        "failed_docs": failed,
        "malformed_json_outputs": malformed_total,
        "splits": {split: len(per_split[split]) for split in SPLITS if split in per_split},
    }
    write_json(out / "summary.json", summary)
    return summary


def run_stats(manifest_path: str | Path) -> dict:
    """Corpus statistics plus per-split document counts."""
    records = load_manifest(manifest_path)
    stats = corpus_stats([(rec.resolve_ref(), rec.hyp_text) for rec in records])
    stats["split_documents"] = {
        split: sum(1 for rec in records if rec.split == split)
        for split in SPLITS
        if any(rec.split == split for rec in records)
    }
    return stats


def run_extract(
    manifest_path: str | Path,
    *,
    lexicon_path: str | Path | None = None,
    min_error_len: int = DEFAULT_MIN_ERROR_LEN,
    unique_cap: int = DEFAULT_UNIQUE_CAP,
) -> tuple[list[dict], list[dict]]:
    """Pair and unresolved-report rows for a whole manifest, in order."""
    records = load_manifest(manifest_path)
    lexicon = load_lexicon(lexicon_path)
    pair_rows: list[dict] = []
    unresolved_rows: list[dict] = []
    for record in records:
        extraction = extract_document(
            record.resolve_ref(),
            record.hyp_text,
            lexicon,
            min_error_len=min_error_len,
            unique_cap=unique_cap,
        )
        pair_rows.extend(_pair_rows(record.doc_id, extraction))
        unresolved_rows.extend(_unresolved_rows(record.doc_id, extraction))
    return pair_rows, unresolved_rows
