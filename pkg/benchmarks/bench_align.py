"""Compare the compiled and pure-Python alignment kernels.

Runs the same workload (token-level alignment of mutated Chinese text at
several sequence lengths) through both backtrace implementations and prints
throughput and speedup. Usage:

    python benchmarks/bench_align.py [--pairs 200] [--seed 7]
"""

from __future__ import annotations

import argparse
import random
import time
from array import array

from asrfix import _levenshtein_py

try:
    from asrfix import _levenshtein as _lev_c
except ImportError:
    _lev_c = None

CHARS = [chr(c) for c in range(0x4E00, 0x4E00 + 400)]


def make_pair(rng: random.Random, length: int) -> tuple[array, array]:
    ref = [rng.choice(CHARS) for _ in range(length)]
    hyp = list(ref)
    for k in range(len(hyp)):
        roll = rng.random()
        if roll < 0.08:
            hyp[k] = rng.choice(CHARS)
        elif roll < 0.12:
            hyp[k] = ""
    hyp = [ch for ch in hyp if ch]
    ids: dict[str, int] = {}
    ref_ids = array("i", [ids.setdefault(ch, len(ids)) for ch in ref])
    hyp_ids = array("i", [ids.setdefault(ch, len(ids)) for ch in hyp])
    return ref_ids, hyp_ids


def bench(kernel, pairs) -> float:
    start = time.perf_counter()
    for ref_ids, hyp_ids in pairs:
        kernel.backtrace_ops(ref_ids, hyp_ids)
    return time.perf_counter() - start


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--pairs", type=int, default=200, help="pairs per length bucket")
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    print(f"{'length':>8} {'pure (s)':>10} {'compiled (s)':>13} {'speedup':>8}")
    for length in (20, 100, 400, 1000):
        pairs = [make_pair(rng, length) for _ in range(args.pairs)]
        t_py = bench(_levenshtein_py, pairs)
        if _lev_c is None:
            print(f"{length:>8} {t_py:>10.3f} {'n/a':>13} {'n/a':>8}")
            continue
        t_c = bench(_lev_c, pairs)
        print(f"{length:>8} {t_py:>10.3f} {t_c:>13.3f} {t_py / t_c:>7.1f}x")
    if _lev_c is None:
        print("compiled kernel not available; build it with: pip install -e .")


if __name__ == "__main__":
    main()
