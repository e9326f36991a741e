"""Independent slow oracles that the test suite checks the package against.

Everything here is deliberately naive: integer arithmetic straight from the
definitions, explicit window scans, regular expressions over digit strings.
The goal is that a bug in the package and a bug here would have to coincide
to slip through.  The only nontrivial package import is pell.encode_batch,
which the representation tests pin down exhaustively on its own.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

import numpy as np

from pelldecide import automata, pell
from pelldecide.automata import Dfa, Dfao

# ---------------------------------------------------------------------------
# Pell numbers and representations, from scratch


def ref_pell_list(count: int) -> list[int]:
    """[P_0, P_1, ..., P_{count-1}] by the recurrence."""
    vals = [0, 1]
    while len(vals) < count:
        vals.append(2 * vals[-1] + vals[-2])
    return vals[:count]


def ref_decode(digits: str) -> int:
    """Sum d_i * P_{i+1} with digit d_0 written rightmost."""
    ps = ref_pell_list(len(digits) + 2)
    return sum(int(ch) * ps[len(digits) - k] for k, ch in enumerate(digits))


def ref_sturmian(n: int) -> int:
    """floor((n+1)a) - floor(na) for a = sqrt(2) - 1, via exact isqrt."""

    def fl(m: int) -> int:
        return math.isqrt(2 * m * m) - m

    return fl(n + 1) - fl(n)


def _floor_sqrt(v: np.ndarray) -> np.ndarray:
    # exact integer floor-sqrt; the float estimate is then corrected both ways
    k = np.sqrt(v.astype(np.float64)).astype(np.int64)
    k = np.where((k + 1) ** 2 <= v, k + 1, k)
    return np.where(k**2 > v, k - 1, k)


def ref_sturmian_prefix(n: int) -> np.ndarray:
    """Values c(1), ..., c(n) of the Sturmian word with slope sqrt(2) - 1."""
    m = np.arange(1, n + 2, dtype=np.int64)
    floors = _floor_sqrt(2 * m * m) - m
    return (floors[1:] - floors[:-1]).astype(np.int8)


def _replace(c_vals: np.ndarray, block0: tuple[int, ...], block1: tuple[int, ...]) -> np.ndarray:
    out = np.empty(len(c_vals), dtype=np.int8)
    j0 = j1 = 0
    for i, c in enumerate(c_vals):
        if c == 0:
            out[i] = block0[j0 % len(block0)]
            j0 += 1
        else:
            out[i] = block1[j1 % len(block1)]
            j1 += 1
    return out


def ref_x5_prefix(n: int) -> np.ndarray:
    """x5(0), ..., x5(n-1): 0s of c become 0,1,0,2 in turn, 1s become 3,4."""
    return _replace(ref_sturmian_prefix(n), (0, 1, 0, 2), (3, 4))


def ref_x3_prefix(n: int) -> np.ndarray:
    """x3(0), ..., x3(n-1): 0s of c become 0,1 in turn, 1s become 2."""
    return _replace(ref_sturmian_prefix(n), (0, 1), (2,))


def ref_pows(p: int) -> bool:
    """Digit string is 11 followed by three or more zeros: p = P_m + P_{m-1}, m >= 5."""
    return re.fullmatch("110000*", pell.encode(p)) is not None


# ---------------------------------------------------------------------------
# word combinatorics, by window scan


def ref_is_balanced(word, alphabet_size: int | None = None) -> bool:
    """For every window length and symbol, counts across windows differ <= 1."""
    w = list(int(s) for s in word)
    n = len(w)
    k = (max(w) + 1) if alphabet_size is None and w else (alphabet_size or 1)
    for length in range(1, n):
        counts = [0] * k
        for s in w[:length]:
            counts[s] += 1
        lo = counts.copy()
        hi = counts.copy()
        for start in range(1, n - length + 1):
            counts[w[start - 1]] -= 1
            counts[w[start + length - 1]] += 1
            for s in (w[start - 1], w[start + length - 1]):
                lo[s] = min(lo[s], counts[s])
                hi[s] = max(hi[s], counts[s])
        if any(h - l > 1 for l, h in zip(lo, hi)):
            return False
    return True


def ref_max_exponent(word) -> Fraction:
    """Max |u|/p over factors u of the word and periods p of u.

    A factor with period p starting at i extends while w[i+j] == w[i+j+p];
    a run of r agreements gives a factor of length r + p, so scanning runs
    for every period covers every (factor, period) pair.
    """
    w = list(int(s) for s in word)
    n = len(w)
    if n == 0:
        raise ValueError("empty word")
    best = Fraction(1)
    for p in range(1, n):
        run = 0
        for i in range(n - p - 1, -1, -1):
            run = run + 1 if w[i] == w[i + p] else 0
            if (run + p) * best.denominator > best.numerator * p:
                best = Fraction(run + p, p)
    return best


def agreement_runs(w: np.ndarray, p: int) -> np.ndarray:
    """runs[i] = number of consecutive positions t >= i with w[t] == w[t+p].

    Runs reaching the end of the prefix are truncated there; callers must
    keep i small enough that truncation cannot flip their comparison.
    """
    if p <= 0 or p >= len(w):
        return np.zeros(0, dtype=np.int64)
    eq = w[p:] == w[:-p]
    n = eq.size
    false_pos = np.flatnonzero(~eq)
    nxt = np.full(n, n, dtype=np.int64)
    if false_pos.size:
        idx = np.searchsorted(false_pos, np.arange(n), side="left")
        inside = idx < false_pos.size
        nxt[inside] = false_pos[idx[inside]]
    return nxt - np.arange(n)


# ---------------------------------------------------------------------------
# brute-force truth grids for the compiled relations
#
# Each function returns a boolean array over the box 0..box of assignments,
# axes ordered like the sorted track names of the corresponding relation.


def grid_successor(box: int) -> np.ndarray:
    x, y = np.indices((box + 1, box + 1))
    return y == x + 1


def grid_addition(box: int) -> np.ndarray:
    x, y, z = np.indices((box + 1,) * 3)
    return x + y == z


def grid_fac_cex5(w5: np.ndarray, box: int) -> np.ndarray:
    """(i, p): some n has 2n = 3p and w5[i..i+n) has period p."""
    out = np.zeros((box + 1, box + 1), dtype=bool)
    i = np.arange(box + 1)
    for p in range(2, box + 1, 2):
        n = 3 * p // 2
        runs = agreement_runs(w5, p)
        out[:, p] = runs[i] >= n - p
    return out


def grid_almost_periods(w5: np.ndarray, box: int) -> np.ndarray:
    """(n, p): p > 10, 2n + 4 >= 3p, and the word has an n-run of period p.

    The existential position is searched over the given prefix only; the
    prefix must be long enough to contain a witness for every pair in the
    box, which the grid comparison itself confirms.
    """
    n, p = np.indices((box + 1, box + 1))
    out = (p > 10) & (2 * n + 4 >= 3 * p)
    best = np.zeros(box + 1, dtype=np.int64)
    for q in range(1, box + 1):
        runs = agreement_runs(w5, q)
        if runs.size:
            best[q] = runs.max()
    return out & (n - p <= best[p])


def grid_high_periods(w3: np.ndarray, box: int) -> np.ndarray:
    """(p,): some position starts floor(8p/5) + 1 agreements at distance p."""
    out = np.zeros(box + 1, dtype=bool)
    for p in range(1, box + 1):
        runs = agreement_runs(w3, p)
        if runs.size:
            out[p] = runs.max() >= 8 * p // 5 + 1
    return out


def _exact_run_lengths(w3: np.ndarray, p: int) -> np.ndarray:
    """Sorted distinct n with w3[i..i+n) of period p and w3[i+n] != w3[i+n+p]."""
    runs = agreement_runs(w3, p)
    if not runs.size:
        return np.zeros(0, dtype=np.int64)
    # a run value is exact only when the disagreement position is in range
    i = np.arange(runs.size)
    exact = runs[i + runs < runs.size]
    return np.unique(exact)


def grid_maximal_reps(w3: np.ndarray, box: int) -> np.ndarray:
    """(n, p): some factor of length n + p with period p, maximal at n."""
    out = np.zeros((box + 1, box + 1), dtype=bool)
    for p in range(1, box + 1):
        lengths = _exact_run_lengths(w3, p)
        hit = lengths[lengths <= box]
        out[hit, p] = True
    return out


def grid_highest_powers(w3: np.ndarray, box: int) -> np.ndarray:
    """(n, p): p is a double-Pell period and n the largest maximal run."""
    out = np.zeros((box + 1, box + 1), dtype=bool)
    for p in range(1, box + 1):
        if not ref_pows(p):
            continue
        lengths = _exact_run_lengths(w3, p)
        if lengths.size:
            n = int(lengths.max())
            if n <= box:
                out[n, p] = True
    return out


# ---------------------------------------------------------------------------
# single-point automaton mutants


def flip_accepting(a: Dfa, state: int) -> Dfa:
    acc = a.accepting.copy()
    acc[state] = ~acc[state]
    return Dfa(a.alphabet, a.delta.copy(), acc, a.initial)


def reroute(a: Dfa, state: int, symbol: int, target: int) -> Dfa:
    delta = a.delta.copy()
    delta[state, symbol] = target
    return Dfa(a.alphabet, delta, a.accepting.copy(), a.initial)


def flip_output(m: Dfao, state: int) -> Dfao:
    outputs = m.outputs.copy()
    outputs[state] = (outputs[state] + 1) % (int(m.outputs.max()) + 1)
    return Dfao(m.alphabet, m.delta.copy(), outputs, m.initial)


def mutated_at_word(m: Dfao, word: str) -> Dfao:
    return flip_output(m, automata.run(m, word))


def same_automaton(a, b) -> bool:
    """Structural equality: identical tables, not just identical language."""
    if type(a) is not type(b) or a.alphabet.n_tracks != b.alphabet.n_tracks:
        return False
    if a.initial != b.initial or not np.array_equal(a.delta, b.delta):
        return False
    mine = a.accepting if isinstance(a, Dfa) else a.outputs
    theirs = b.accepting if isinstance(b, Dfa) else b.outputs
    return np.array_equal(mine, theirs)
