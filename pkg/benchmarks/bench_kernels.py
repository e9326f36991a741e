"""Timing comparison of the numba and numpy kernel backends.

Runs the three hot kernels on representative workloads: the extension mask
on the real BFS frontier batches, the exponent scan and the balance scan on
a long prefix of the five-letter word.  Invoke directly:

    python benchmarks/bench_kernels.py

The numba column is skipped when numba is unavailable or disabled via
PELLDECIDE_NO_NUMBA=1.
"""

from __future__ import annotations

import time
from fractions import Fraction

import numpy as np

from pelldecide import _kernels, search, sequences


def bfs_candidate_batches(alphabet_size: int = 5,
                          bound: Fraction = Fraction(3, 2)) -> list[np.ndarray]:
    """The exact candidate matrices the optimality search filters."""
    num, den = bound.numerator, bound.denominator
    batches = []
    level = np.zeros((1, 1), dtype=np.int8)
    while level.size:
        highest = level.max(axis=1)
        parts = []
        for s in range(alphabet_size):
            rows = level[highest + 1 >= s]
            if rows.size:
                tail = np.full((len(rows), 1), s, dtype=np.int8)
                parts.append(np.concatenate([rows, tail], axis=1))
        cand = np.vstack(parts)
        batches.append(cand)
        mask = _kernels.extend_mask(cand, alphabet_size, num, den, True)
        level = cand[mask]
    return batches


def timed(fn, repeats: int = 3) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    batches = bfs_candidate_batches()
    n_rows = sum(len(b) for b in batches)
    prefix = sequences.x5_prefix(10_000)

    cases = [
        (
            f"extend_mask ({n_rows} candidates, depth <= {batches[-1].shape[1]})",
            lambda impl: [impl(b, 5, 3, 2, True) for b in batches],
            _kernels.extend_mask_numpy,
            _kernels.extend_mask_numba,
        ),
        (
            "exponent_scan (10000-symbol prefix)",
            lambda impl: impl(prefix),
            _kernels.exponent_scan_numpy,
            _kernels.exponent_scan_numba,
        ),
        (
            "balanced_scan (10000-symbol prefix)",
            lambda impl: impl(prefix, 5),
            _kernels.balanced_scan_numpy,
            _kernels.balanced_scan_numba,
        ),
    ]

    print(f"numba available: {_kernels.NUMBA_ENABLED}")
    header = f"{'kernel':<55} {'numpy':>9} {'numba':>9}"
    print(header)
    print("-" * len(header))
    for name, run, np_impl, nb_impl in cases:
        t_np = timed(lambda: run(np_impl))
        if nb_impl is not None:
            run(nb_impl)  # warm the JIT outside the timed region
            t_nb = timed(lambda: run(nb_impl))
            print(f"{name:<55} {t_np:>8.3f}s {t_nb:>8.3f}s")
        else:
            print(f"{name:<55} {t_np:>8.3f}s {'-':>9}")

    t = timed(lambda: search.bfs_optimal(5, Fraction(3, 2)), repeats=1)
    print(f"\nfull search (alphabet 5, bound 3/2, selected backend): {t:.3f}s")


if __name__ == "__main__":
    main()
