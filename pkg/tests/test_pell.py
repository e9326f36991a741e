"""Pell numbers, digit strings, and the canonical-form recognizer."""

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

import references as R
from pelldecide import automata, pell

PELL = R.ref_pell_list(40)


def test_pell_numbers_match_recurrence():
    for i, v in enumerate(PELL):
        assert pell.pell_number(i) == v


def test_known_digit_strings():
    assert pell.encode(0) == ""
    assert pell.encode(1) == "1"
    assert pell.encode(2) == "10"
    assert pell.encode(3) == "11"
    assert pell.encode(4) == "20"
    assert pell.encode(5) == "100"
    assert pell.encode(157) == "201100"
    assert pell.decode("201100") == 157
    # a non-canonical spelling of the same value decodes too
    assert pell.decode("122100") == 157
    assert pell.decode("") == 0


def test_decode_matches_schoolbook_sum():
    rng = np.random.default_rng(2)
    for _ in range(300):
        digits = "".join(str(d) for d in rng.integers(0, 3, size=rng.integers(0, 15)))
        assert pell.decode(digits) == R.ref_decode(digits)


def test_round_trip_below_one_million():
    n = np.arange(1_000_000, dtype=np.int64)
    digits = pell.encode_batch(n)
    assert pell.valid_digits_batch(digits).all()
    assert np.array_equal(pell.decode_batch(digits), n)
    for v in (0, 1, 5, 168, 33_460, 999_999):
        assert pell.decode(pell.encode(v)) == v


def test_every_value_has_exactly_one_padded_form_per_length():
    # length-L strings satisfying the digit conditions biject onto [0, P_{L+1})
    for length in range(0, 13):
        total = 3**length
        if length == 0:
            assert pell.decode("") == 0
            continue
        powers = 3 ** np.arange(length - 1, -1, -1, dtype=np.int64)
        rows = (np.arange(total, dtype=np.int64)[:, None] // powers) % 3
        mask = pell.valid_digits_batch(rows)
        values = pell.decode_batch(rows[mask])
        assert np.array_equal(np.sort(values), np.arange(PELL[length + 1]))


def test_is_canonical_is_the_strict_form():
    for n in range(2000):
        assert pell.is_canonical(pell.encode(n))
    # leading zeros, a trailing 2, or 2 not followed by 0 all disqualify
    for bad in ("0", "02", "2", "12", "210", "21", "011"):
        assert not pell.is_canonical(bad)
    for good in ("", "1", "10", "20", "201", "110000"):
        assert pell.is_canonical(good)


def test_canonical_recognizer_accepts_padded_forms():
    rec = pell.canonical_recognizer()
    for n in range(400):
        s = pell.encode(n)
        assert automata.accepts(rec, s)
        assert automata.accepts(rec, "00" + s)
    for bad in ("2", "12", "210", "021", "012"):
        assert not automata.accepts(rec, bad)


def test_canonical_recognizer_equals_digit_conditions():
    # exhaustively on every word of length <= 7
    rec = pell.canonical_recognizer()
    for length in range(0, 8):
        if length == 0:
            assert automata.accepts(rec, "")
            continue
        powers = 3 ** np.arange(length - 1, -1, -1, dtype=np.int64)
        rows = (np.arange(3**length, dtype=np.int64)[:, None] // powers) % 3
        states = automata.run_batch(rec, rows)
        assert np.array_equal(rec.accepting[states], pell.valid_digits_batch(rows))


def test_compare_orders_like_integers():
    rng = np.random.default_rng(5)
    for _ in range(500):
        x, y = map(int, rng.integers(0, 10**9, size=2))
        assert pell.compare(x, y) == (x > y) - (x < y)
    assert pell.compare(7, 7) == 0


@given(st.integers(0, 10**12))
def test_round_trip_property(n):
    s = pell.encode(n)
    assert pell.decode(s) == n
    assert pell.is_canonical(s)


@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_equal_length_padding_sorts_numerically(x, y):
    length = len(pell.encode(max(x, y)))
    sx = pell.encode(x).zfill(length)
    sy = pell.encode(y).zfill(length)
    assert (sx < sy) == (x < y)
    assert (sx == sy) == (x == y)


@given(st.lists(st.integers(0, 2), max_size=18))
@settings(max_examples=200)
def test_decode_property(digits):
    s = "".join(map(str, digits))
    assert pell.decode(s) == R.ref_decode(s)


def test_encode_batch_padding():
    values = np.array([0, 1, 4, 157])
    digits = pell.encode_batch(values, length=8)
    assert digits.shape == (4, 8)
    assert np.array_equal(pell.decode_batch(digits), values)
    assert "".join(map(str, digits[3])).lstrip("0") == "201100"
