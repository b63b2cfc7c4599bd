"""Per-category error rates for hypothesis text against a reference.

Both texts are tokenized (Mandarin per character, English per word, ITN and
punctuation per token) and aligned once at token level. Substitutions and
deletions count against the reference token's category, insertions against
the inserted hypothesis token's own category, so the per-category counts
always partition the overall counts exactly.

ER = (S + D + I) / N over reference tokens. It can exceed 1 when insertions
dominate, and is never clamped. ERR = (ER_corrected - ER_baseline) /
ER_baseline, so negative values are improvements.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from typing import Iterable

from .align import DEL, INS, SUB, align
from .tokenizer import TokenCategory, tokenize_text

SCORED_CATEGORIES = (
    TokenCategory.MANDARIN,
    TokenCategory.PUNCTUATION,
    TokenCategory.ITN,
    TokenCategory.ENGLISH,
)


class EmptyReferenceError(ValueError):
    """The reference has no scorable tokens but the hypothesis does."""


class ZeroBaselineError(ValueError):
    """Relative error-rate reduction is undefined for a zero baseline."""


def percent(fraction: float) -> float:
    """Fraction as a percentage with 2 decimals, half-up like table formatting."""
    return float(Decimal(repr(fraction * 100.0)).quantize(Decimal("0.01"), ROUND_HALF_UP))


def err(baseline_er: float, corrected_er: float) -> float:
    """Signed relative error-rate change; scale-free, so percent inputs work too."""
    if baseline_er == 0:
        raise ZeroBaselineError("baseline error rate is zero")
    return (corrected_er - baseline_er) / baseline_er


@dataclass
class CategoryCounts:
    n: int = 0  # reference tokens
    s: int = 0
    d: int = 0
    i: int = 0

    @property
    def errors(self) -> int:
        return self.s + self.d + self.i

    @property
    def er(self) -> float | None:
        """Error rate as a fraction; None when undefined (no reference tokens
        but edits present)."""
        if self.n == 0:
            return 0.0 if self.errors == 0 else None
        return self.errors / self.n

    def add(self, other: "CategoryCounts") -> None:
        self.n += other.n
        self.s += other.s
        self.d += other.d
        self.i += other.i


def _empty_categories() -> dict[TokenCategory, CategoryCounts]:
    return {cat: CategoryCounts() for cat in SCORED_CATEGORIES}


@dataclass
class ScoreReport:
    per_category: dict[TokenCategory, CategoryCounts] = field(default_factory=_empty_categories)
    overall: CategoryCounts = field(default_factory=CategoryCounts)

    def add(self, other: "ScoreReport") -> None:
        for cat in SCORED_CATEGORIES:
            self.per_category[cat].add(other.per_category[cat])
        self.overall.add(other.overall)

    def to_dict(self, baseline: "ScoreReport | None" = None) -> dict:
        """JSON-ready mapping with N/S/D/I/ER per category plus overall;
        an ERR column is added when a baseline report is supplied."""
        out: dict = {}
        for name, counts in self._rows():
            entry: dict = {
                "N": counts.n,
                "S": counts.s,
                "D": counts.d,
                "I": counts.i,
                "ER": None if counts.er is None else percent(counts.er),
            }
            if baseline is not None:
                base = dict(baseline._rows())[name]
                if base.er is None or base.er == 0 or counts.er is None:
                    entry["ERR"] = None
                else:
                    entry["ERR"] = percent(err(base.er, counts.er))
            out[name] = entry
        return out

    def _rows(self) -> list[tuple[str, CategoryCounts]]:
        rows = [(cat.value, self.per_category[cat]) for cat in SCORED_CATEGORIES]
        rows.append(("overall", self.overall))
        return rows

    @classmethod
    def from_dict(cls, data: dict) -> "ScoreReport":
        """Rebuild a report from its serialized counts (rates are recomputed)."""
        report = cls()
        for cat in SCORED_CATEGORIES:
            entry = data.get(cat.value)
            if entry:
                report.per_category[cat] = CategoryCounts(
                    entry["N"], entry["S"], entry["D"], entry["I"]
                )
        entry = data.get("overall")
        if entry:
            report.overall = CategoryCounts(entry["N"], entry["S"], entry["D"], entry["I"])
        return report


def score_pair(ref_text: str, hyp_text: str) -> ScoreReport:
    """Score one hypothesis text against its reference."""
    ref_tokens = tokenize_text(ref_text)
    hyp_tokens = tokenize_text(hyp_text)
    if not ref_tokens and hyp_tokens:
        raise EmptyReferenceError("reference has no scorable tokens")

    report = ScoreReport()
    for tok in ref_tokens:
        report.per_category[tok.category].n += 1
        report.overall.n += 1

    alignment = align([t.text for t in ref_tokens], [t.text for t in hyp_tokens])
    for op in alignment.ops:
        if op.kind == SUB:
            cat = ref_tokens[op.ref_index].category
            report.per_category[cat].s += 1
            report.overall.s += 1
        elif op.kind == DEL:
            cat = ref_tokens[op.ref_index].category
            report.per_category[cat].d += 1
            report.overall.d += 1
        elif op.kind == INS:
            cat = hyp_tokens[op.hyp_index].category
            report.per_category[cat].i += 1
            report.overall.i += 1
    return report


def aggregate(reports: Iterable[ScoreReport]) -> ScoreReport:
    """Pool counts across reports (micro-average); rates come from the sums."""
    total = ScoreReport()
    for report in reports:
        total.add(report)
    return total
