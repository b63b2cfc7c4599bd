"""Pure-Python twin of the C backtrace kernel (asrfix._levenshtein).

Selected automatically when the compiled extension is unavailable; also used
to cross-check the extension in tests and benchmarks.
"""

from __future__ import annotations

from typing import Sequence

OP_MATCH = 0
OP_SUB = 1
OP_DEL = 2
OP_INS = 3


def backtrace_ops(ref_ids: Sequence[int], hyp_ids: Sequence[int]) -> bytes:
    """Return op codes (bytes) of one minimum edit script ref -> hyp.

    Ties between DP cells break as match > substitute > delete > insert,
    identical to the compiled kernel.
    """
    n = len(ref_ids)
    m = len(hyp_ids)
    if n == 0:
        return bytes([OP_INS]) * m
    if m == 0:
        return bytes([OP_DEL]) * n

    width = m + 1
    ptr = bytearray((n + 1) * width)
    for j in range(1, width):
        ptr[j] = OP_INS
    prev = list(range(width))
    cur = [0] * width
    for i in range(1, n + 1):
        cur[0] = i
        base = i * width
        ptr[base] = OP_DEL
        r = ref_ids[i - 1]
        for j in range(1, width):
            eq = r == hyp_ids[j - 1]
            diag = prev[j - 1] + (0 if eq else 1)
            up = prev[j] + 1
            left = cur[j - 1] + 1
            best = diag
            if up < best:
                best = up
            if left < best:
                best = left
            if diag == best:
                code = OP_MATCH if eq else OP_SUB
            elif up == best:
                code = OP_DEL
            else:
                code = OP_INS
            cur[j] = best
            ptr[base + j] = code
        prev, cur = cur, prev

    out = bytearray()
    i, j = n, m
    while i > 0 or j > 0:
        code = ptr[i * width + j]
        out.append(code)
        if code in (OP_MATCH, OP_SUB):
            i -= 1
            j -= 1
        elif code == OP_DEL:
            i -= 1
        else:
            j -= 1
    out.reverse()
    return bytes(out)
