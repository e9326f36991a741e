"""Balance and repetition primitives, and the breadth-first optimality search.

A word is balanced when any two equal-length factors contain the same number
of occurrences of each symbol, up to one.  The exponent of a factor of
length n with period p is n/p; a word's maximal exponent ranges over all its
factors and their periods.  ``bfs_optimal`` grows all balanced words that
avoid exponents at or above a bound, level by level, and reports the longest
survivors; for five letters and bound 3/2 the search is finite and ends at
length 44 with exactly five words.

Exponents are exact rationals throughout; comparisons cross-multiply.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence, Union

import numpy as np

from . import _kernels

__all__ = [
    "FiniteWord",
    "Repetition",
    "is_balanced",
    "max_exponent",
    "bfs_levels",
    "bfs_optimal",
]

WordLike = Union["FiniteWord", str, Sequence[int], np.ndarray]


@dataclass(frozen=True)
class FiniteWord:
    """Symbols over {0..k-1} with per-symbol prefix counts for O(1) windows."""

    symbols: np.ndarray
    alphabet_size: int
    prefix_counts: np.ndarray

    @staticmethod
    def make(word: WordLike, alphabet_size: Optional[int] = None) -> "FiniteWord":
        if isinstance(word, FiniteWord):
            return word
        if isinstance(word, str):
            # letters map to 0,1,2,.. in order of first appearance, so plain
            # text like "alfalfa" works alongside digit strings
            if word and all(c in "0123456789" for c in word):
                symbols = np.array([int(c) for c in word], dtype=np.int8)
            else:
                seen: dict[str, int] = {}
                symbols = np.array(
                    [seen.setdefault(c, len(seen)) for c in word], dtype=np.int8
                )
        else:
            symbols = np.asarray(word, dtype=np.int8)
        if symbols.size and symbols.min() < 0:
            raise ValueError("symbols must be naturals")
        k = alphabet_size if alphabet_size is not None else (
            int(symbols.max()) + 1 if symbols.size else 1
        )
        counts = np.zeros((k, len(symbols) + 1), dtype=np.int32)
        for a in range(k):
            np.cumsum(symbols == a, out=counts[a, 1:])
        symbols.setflags(write=False)
        counts.setflags(write=False)
        return FiniteWord(symbols, k, counts)

    def count(self, symbol: int, start: int, stop: int) -> int:
        """Occurrences of ``symbol`` in the factor [start, stop)."""
        return int(self.prefix_counts[symbol, stop] - self.prefix_counts[symbol, start])

    def __len__(self) -> int:
        return len(self.symbols)

    def __str__(self) -> str:
        return "".join(str(int(s)) for s in self.symbols)


@dataclass(frozen=True)
class Repetition:
    """A factor [start, start+length) repeating with the given period."""

    start: int
    length: int
    period: int

    def __post_init__(self):
        if not 1 <= self.period <= self.length:
            raise ValueError("period must be in 1..length")

    @property
    def exponent(self) -> Fraction:
        return Fraction(self.length, self.period)


def is_balanced(word: WordLike) -> bool:
    """True iff equal-length factors never differ by 2 in any symbol count."""
    w = FiniteWord.make(word)
    if len(w) == 0:
        return True
    return bool(_kernels.balanced_scan(w.symbols, w.alphabet_size))


def max_exponent(word: WordLike) -> Fraction:
    """Largest n/p over factors of length n having period p."""
    w = FiniteWord.make(word)
    if len(w) == 0:
        raise ValueError("the empty word has no factors")
    n, p = _kernels.exponent_scan(w.symbols)
    return Fraction(int(n), int(p))


def bfs_levels(
    alphabet_size: int,
    bound: Union[Fraction, float, str],
    strict: bool = True,
    limit_depth: Optional[int] = None,
) -> Iterator[np.ndarray]:
    """Yield each level of surviving words as a sorted (count, depth) array.

    Level d holds every length-d word that is balanced, avoids factor
    exponents >= bound (> bound when strict is false), and is canonical
    under the symmetry reduction: it starts with 0 and introduces new
    symbols in increasing order.
    """
    if alphabet_size < 2:
        raise ValueError("alphabet_size must be at least 2")
    bound = Fraction(bound)
    if bound <= 1:
        raise ValueError("bound must exceed 1")
    num, den = bound.numerator, bound.denominator

    level = np.zeros((1, 1), dtype=np.int8)
    depth = 1
    yield level
    while level.size and (limit_depth is None or depth < limit_depth):
        highest = level.max(axis=1)
        batches = []
        for s in range(alphabet_size):
            rows = level[highest + 1 >= s]
            if rows.size:
                tail = np.full((len(rows), 1), s, dtype=np.int8)
                batches.append(np.concatenate([rows, tail], axis=1))
        candidates = np.vstack(batches)
        mask = _kernels.extend_mask(candidates, alphabet_size, num, den, strict)
        level = candidates[mask]
        if not level.size:
            return
        level = level[np.lexsort(level.T[::-1])]
        depth += 1
        yield level


def bfs_optimal(
    alphabet_size: int,
    bound: Union[Fraction, float, str],
    strict: bool = True,
    limit_depth: Optional[int] = None,
) -> tuple[int, list[str]]:
    """Deepest level the search reaches, with its words in sorted order."""
    last = None
    for last in bfs_levels(alphabet_size, bound, strict, limit_depth):
        pass
    assert last is not None
    return last.shape[1], ["".join(str(int(s)) for s in row) for row in last]
