"""Minimum-edit-distance alignment between token sequences.

Unit costs (substitute/delete/insert = 1, match = 0). The DP backtrace runs
in the compiled kernel when available and falls back to the pure-Python twin
otherwise; set ASRFIX_PURE_ALIGN=1 to force the fallback. Ties break as
match > substitute > delete > insert, so alignments are deterministic and
errors stay anchored to reference order.

Tokens compare by exact string equality; full-width/half-width differences
are real errors and are not normalized away.
"""

from __future__ import annotations

import os
from array import array
from dataclasses import dataclass
from typing import Sequence

if os.environ.get("ASRFIX_PURE_ALIGN"):
    from . import _levenshtein_py as _kernel

    BACKEND = "python"
else:
    try:
        from . import _levenshtein as _kernel  # type: ignore[no-redef]

        BACKEND = "c"
    except ImportError:
        from . import _levenshtein_py as _kernel  # type: ignore[no-redef]

        BACKEND = "python"

MATCH = "M"
SUB = "S"
DEL = "D"
INS = "I"

_KINDS = (MATCH, SUB, DEL, INS)


@dataclass(frozen=True)
class EditOp:
    """One edit-script step; index is None on the side the op does not touch."""

    kind: str
    ref_index: int | None
    hyp_index: int | None


@dataclass(frozen=True)
class Alignment:
    ops: tuple[EditOp, ...]
    ref_len: int
    hyp_len: int


def _intern(ref: Sequence[str], hyp: Sequence[str]) -> tuple[array, array]:
    ids: dict[str, int] = {}
    out = []
    for seq in (ref, hyp):
        arr = array("i", bytes(4 * len(seq)))
        for k, tok in enumerate(seq):
            arr[k] = ids.setdefault(tok, len(ids))
        out.append(arr)
    return out[0], out[1]


def align(ref: Sequence[str], hyp: Sequence[str]) -> Alignment:
    """Align two token sequences; either side may be empty."""
    ref_ids, hyp_ids = _intern(ref, hyp)
    codes = _kernel.backtrace_ops(ref_ids, hyp_ids)
    ops: list[EditOp] = []
    i = j = 0
    for code in codes:
        kind = _KINDS[code]
        if kind == MATCH or kind == SUB:
            ops.append(EditOp(kind, i, j))
            i += 1
            j += 1
        elif kind == DEL:
            ops.append(EditOp(kind, i, None))
            i += 1
        else:
            ops.append(EditOp(kind, None, j))
            j += 1
    return Alignment(tuple(ops), len(ref), len(hyp))


def edit_counts(alignment: Alignment) -> dict[str, int]:
    """Per-kind op counts: S + D + M == ref_len, S + I + M == hyp_len."""
    counts = {SUB: 0, DEL: 0, INS: 0, MATCH: 0}
    for op in alignment.ops:
        counts[op.kind] += 1
    return counts


def distance(ref: Sequence[str], hyp: Sequence[str]) -> int:
    """Minimum unit-cost edit distance (S + D + I)."""
    counts = edit_counts(align(ref, hyp))
    return counts[SUB] + counts[DEL] + counts[INS]
