# cython: boundscheck=False, wraparound=False
"""C kernel for the unit-cost edit-distance backtrace.

Same contract as asrfix._levenshtein_py: token sequences arrive as int id
arrays, the result is one op code per edit-script step (forward order).
"""

from libc.stdlib cimport free, malloc

OP_MATCH = 0
OP_SUB = 1
OP_DEL = 2
OP_INS = 3

cdef unsigned char C_MATCH = 0
cdef unsigned char C_SUB = 1
cdef unsigned char C_DEL = 2
cdef unsigned char C_INS = 3


def backtrace_ops(const int[::1] ref_ids, const int[::1] hyp_ids):
    """Return op codes (bytes) of one minimum edit script ref -> hyp.

    Ties between DP cells break as match > substitute > delete > insert.
    Memory is O(len(ref) * len(hyp)) for the backtrace pointers.
    """
    cdef Py_ssize_t n = ref_ids.shape[0]
    cdef Py_ssize_t m = hyp_ids.shape[0]
    if n == 0:
        return bytes([OP_INS]) * m
    if m == 0:
        return bytes([OP_DEL]) * n

    cdef unsigned char *ptr = <unsigned char *> malloc((n + 1) * (m + 1))
    cdef long *prev = <long *> malloc((m + 1) * sizeof(long))
    cdef long *cur = <long *> malloc((m + 1) * sizeof(long))
    cdef unsigned char *out = <unsigned char *> malloc(n + m)
    if ptr == NULL or prev == NULL or cur == NULL or out == NULL:
        free(ptr); free(prev); free(cur); free(out)
        raise MemoryError()

    cdef Py_ssize_t i, j, k
    cdef long diag, up, left, best
    cdef long *tmp
    cdef unsigned char code
    cdef int r
    cdef bint eq

    try:
        for j in range(m + 1):
            prev[j] = j
            ptr[j] = C_INS
        for i in range(1, n + 1):
            cur[0] = i
            ptr[i * (m + 1)] = C_DEL
            r = ref_ids[i - 1]
            for j in range(1, m + 1):
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
                    code = C_MATCH if eq else C_SUB
                elif up == best:
                    code = C_DEL
                else:
                    code = C_INS
                cur[j] = best
                ptr[i * (m + 1) + j] = code
            tmp = prev; prev = cur; cur = tmp

        i = n
        j = m
        k = n + m
        while i > 0 or j > 0:
            code = ptr[i * (m + 1) + j]
            k -= 1
            out[k] = code
            if code == C_MATCH or code == C_SUB:
                i -= 1
                j -= 1
            elif code == C_DEL:
                i -= 1
            else:
                j -= 1
        return out[k : n + m]
    finally:
        free(ptr); free(prev); free(cur); free(out)
