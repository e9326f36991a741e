"""Pell-base positional numeration.

Pell numbers: P_0 = 0, P_1 = 1, P_n = 2 P_{n-1} + P_{n-2}, so 0, 1, 2, 5, 12,
29, 70, 169, ...  A digit string d_{k-1} ... d_0 (most significant first)
denotes sum_i d_i * P_{i+1}.  Every natural number has exactly one canonical
representation: digits in {0, 1, 2}, no leading zero, least significant digit
at most 1, and every 2 immediately followed by a 0 on its less significant
side.  Greedy digit extraction produces the canonical form directly, because
n < P_{i+2} forces n - 2 P_{i+1} < P_i.
"""

from __future__ import annotations

import numpy as np

from .automata import Dfa, TrackAlphabet, minimize

__all__ = [
    "pell_number",
    "encode",
    "decode",
    "is_canonical",
    "compare",
    "canonical_recognizer",
    "encode_batch",
    "decode_batch",
    "valid_digits_batch",
]

_PELL = [0, 1, 2]


def pell_number(i: int) -> int:
    """P_i, extending the cached table on demand."""
    if i < 0:
        raise ValueError("Pell index must be >= 0")
    while len(_PELL) <= i:
        _PELL.append(2 * _PELL[-1] + _PELL[-2])
    return _PELL[i]


def encode(n: int) -> str:
    """Canonical digit string of ``n``; the empty string stands for zero."""
    if n < 0:
        raise ValueError("only naturals have Pell representations")
    if n == 0:
        return ""
    length = 1
    while pell_number(length + 1) <= n:
        length += 1
    digits = []
    rem = n
    for i in range(length, 0, -1):
        d = rem // pell_number(i)
        digits.append(str(d))
        rem -= d * pell_number(i)
    return "".join(digits)


def decode(s: str) -> int:
    """Value of any digit string over {0,1,2}, canonical or not."""
    total = 0
    length = len(s)
    for j, c in enumerate(s):
        d = int(c)
        if not 0 <= d <= 2:
            raise ValueError(f"digit out of range: {c!r}")
        total += d * pell_number(length - j)
    return total


def is_canonical(s: str) -> bool:
    """True iff ``s`` is the canonical representation of some natural."""
    if s == "":
        return True
    if any(c not in "012" for c in s):
        return False
    if s[0] == "0":
        return False
    if s[-1] == "2":
        return False
    return all(s[j + 1] == "0" for j in range(len(s) - 1) if s[j] == "2")


def compare(x: int, y: int) -> int:
    """-1, 0 or 1; agrees with padded lexicographic order of canonical forms."""
    return (x > y) - (x < y)


def canonical_recognizer() -> Dfa:
    """1-track automaton accepting 0* w for every canonical w.

    Equivalently: no 2 is followed by a nonzero digit and the string does not
    end in 2.  Leading zeros are deliberately allowed so the language is
    closed under the padding used by multi-track automata.
    """
    # states: 0 ok (accepting), 1 just-read-2, 2 dead
    delta = np.array(
        [
            [0, 0, 1],
            [0, 2, 2],
            [2, 2, 2],
        ],
        dtype=np.int32,
    )
    accepting = np.array([True, False, False])
    return minimize(Dfa(TrackAlphabet(1), delta, accepting, 0))


# ---------------------------------------------------------------------------
# vectorized helpers


def _pell_array(upto: int) -> np.ndarray:
    pell_number(upto)
    return np.array(_PELL[: upto + 1], dtype=np.int64)


def encode_batch(values: np.ndarray, length: int | None = None) -> np.ndarray:
    """Canonical digits for an int64 array, msd first, left-padded with zeros.

    Returns an (n, length) int8 array; length defaults to the longest value's
    representation.  Values must fit in int64 comfortably (below P_50).
    """
    values = np.asarray(values, dtype=np.int64)
    if values.size and values.min() < 0:
        raise ValueError("only naturals have Pell representations")
    top = int(values.max()) if values.size else 0
    need = 0
    while pell_number(need + 1) <= top:
        need += 1
    if length is None:
        length = max(need, 0)
    elif length < need:
        raise ValueError(f"length {length} too small; need {need}")
    pell = _pell_array(length + 1)
    digits = np.zeros((len(values), length), dtype=np.int8)
    rem = values.copy()
    for pos in range(length):
        w = pell[length - pos]
        d = rem // w
        digits[:, pos] = d
        rem -= d * w
    return digits


def decode_batch(digits: np.ndarray) -> np.ndarray:
    """Values of an (n, length) digit array, msd first."""
    digits = np.asarray(digits)
    length = digits.shape[1]
    weights = _pell_array(length + 1)[length:0:-1]  # P_length .. P_1
    return digits.astype(np.int64) @ weights


def valid_digits_batch(digits: np.ndarray) -> np.ndarray:
    """Mask of rows that are 0*-padded canonical representations.

    Mirrors canonical_recognizer: every 2 followed by 0, and the last digit
    at most 1.  Leading zeros are fine.
    """
    digits = np.asarray(digits)
    if digits.shape[1] == 0:
        return np.ones(len(digits), dtype=bool)
    ok = (digits[:, :-1] != 2) | (digits[:, 1:] == 0)
    return ok.all(axis=1) & (digits[:, -1] <= 1)
