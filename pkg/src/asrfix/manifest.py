"""Corpus manifests: one JSONL record per document pair.

Each record carries a unique doc_id, the hypothesis text, and the reference
either inline (ref_text) or as a path relative to the manifest file
(ref_path). condition and split tag how the audio was produced and which
dataset the document belongs to.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .util import read_jsonl

CONDITIONS = ("clean", "hard")
SPLITS = ("train", "test_homogeneous", "test_uptodate", "test_hard")
TEST_SPLITS = tuple(s for s in SPLITS if s != "train")

_FIELDS = {"doc_id", "ref_text", "ref_path", "hyp_text", "condition", "split"}


class ManifestError(ValueError):
    pass


@dataclass(frozen=True)
class DocumentRecord:
    doc_id: str
    hyp_text: str
    ref_text: str | None = None
    ref_path: Path | None = None
    condition: str = "clean"
    split: str = "train"

    def resolve_ref(self) -> str:
        """Reference text; reads ref_path lazily so a missing file surfaces
        per document, not at manifest load. Trailing newlines are a text-file
        artifact, not reference content, and are stripped."""
        if self.ref_text is not None:
            return self.ref_text
        assert self.ref_path is not None
        return self.ref_path.read_text("utf-8").rstrip("\r\n")


def load_manifest(path: str | Path) -> list[DocumentRecord]:
    path = Path(path)
    base = path.parent
    records: list[DocumentRecord] = []
    seen: set[str] = set()
    for lineno, raw in read_jsonl(path):
        where = f"{path}:{lineno}"
        if not isinstance(raw, dict):
            raise ManifestError(f"{where}: record must be a JSON object")
        unknown = set(raw) - _FIELDS
        if unknown:
            raise ManifestError(f"{where}: unknown fields {sorted(unknown)}")

        doc_id = raw.get("doc_id")
        if not isinstance(doc_id, str) or not doc_id:
            raise ManifestError(f"{where}: doc_id must be a non-empty string")
        if doc_id in seen:
            raise ManifestError(f"{where}: duplicate doc_id {doc_id!r}")
        seen.add(doc_id)

        hyp_text = raw.get("hyp_text")
        if not isinstance(hyp_text, str):
            raise ManifestError(f"{where}: hyp_text must be a string")

        ref_text = raw.get("ref_text")
        ref_path = raw.get("ref_path")
        if (ref_text is None) == (ref_path is None):
            raise ManifestError(f"{where}: exactly one of ref_text/ref_path required")
        if ref_text is not None and not isinstance(ref_text, str):
            raise ManifestError(f"{where}: ref_text must be a string")
        if ref_path is not None and not isinstance(ref_path, str):
            raise ManifestError(f"{where}: ref_path must be a string")

        condition = raw.get("condition", "clean")
        if condition not in CONDITIONS:
            raise ManifestError(f"{where}: condition must be one of {CONDITIONS}")
        split = raw.get("split", "train")
        if split not in SPLITS:
            raise ManifestError(f"{where}: split must be one of {SPLITS}")

        records.append(
            DocumentRecord(
                doc_id=doc_id,
                hyp_text=hyp_text,
                ref_text=ref_text,
                ref_path=base / ref_path if ref_path is not None else None,
                condition=condition,
                split=split,
            )
        )
    return records
