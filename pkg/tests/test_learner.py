"""Active learning of automata, and the addition relation it produces."""

import itertools

import numpy as np
import pytest

import references as R
from pelldecide import automata, learner, pell
from pelldecide.automata import Dfa, Dfao, TrackAlphabet


def exact_equivalence(target):
    """Counterexample oracle that searches lengths in increasing order."""

    def check(hypothesis):
        diff = automata.product(hypothesis, target, "xor")
        if automata.is_empty(diff):
            return None
        for length in itertools.count():
            for w in itertools.product(range(3), repeat=length):
                if automata.accepts(diff, w):
                    return w

    return check


def membership_of(target):
    return lambda w: automata.accepts(target, w)


def ends_in_two():
    delta = np.array([[0, 0, 1], [0, 0, 1]], dtype=np.int32)
    return Dfa(TrackAlphabet(1), delta, np.array([False, True]))


def even_ones():
    delta = np.array([[0, 1, 0], [1, 0, 1]], dtype=np.int32)
    return Dfa(TrackAlphabet(1), delta, np.array([True, False]))


@pytest.mark.parametrize(
    "target", [ends_in_two(), even_ones(), pell.canonical_recognizer()],
    ids=["ends-in-2", "even-1s", "canonical"],
)
def test_lstar_recovers_small_languages(target):
    learned = learner.lstar(membership_of(target), 3, exact_equivalence(target))
    assert R.same_automaton(automata.minimize(learned), automata.minimize(target))


def test_lstar_moore_recovers_digit_sum():
    delta = np.array([[(s + d) % 3 for d in range(3)] for s in range(3)], dtype=np.int32)
    target = Dfao(TrackAlphabet(1), delta, np.arange(3))

    def outputs_fn(w):
        return int(target.outputs[automata.run(target, w)])

    def equivalence(h):
        return learner.bounded_equiv(h, outputs_fn, 3, max_len=8, exhaustive_len=6)

    learned = learner.lstar_moore(outputs_fn, 3, equivalence)
    for n in range(300):
        assert automata.dfao_eval(learned, n) == automata.dfao_eval(target, n)


def test_bounded_equiv_reports_smallest_mismatch():
    target = automata.minimize(pell.canonical_recognizer())
    mutant = R.flip_accepting(target, 1)
    ce = learner.bounded_equiv(mutant, membership_of(target), 3, exhaustive_len=6)
    assert ce is not None
    assert automata.accepts(mutant, ce) != automata.accepts(target, ce)
    # radix order: no shorter or lexicographically earlier mismatch exists
    for length in range(len(ce) + 1):
        for w in itertools.product(range(3), repeat=length):
            if length == len(ce) and tuple(w) >= tuple(ce):
                break
            assert automata.accepts(mutant, w) == automata.accepts(target, w)


def test_bounded_equiv_passes_identical_languages():
    target = automata.minimize(pell.canonical_recognizer())
    same = automata.complement(automata.complement(target))
    assert learner.bounded_equiv(same, membership_of(target), 3, exhaustive_len=6) is None


def test_bounded_equiv_is_deterministic():
    target = automata.minimize(even_ones())
    mutant = R.reroute(target, 1, 2, 0)
    a = learner.bounded_equiv(mutant, membership_of(target), 3, seed=9)
    b = learner.bounded_equiv(mutant, membership_of(target), 3, seed=9)
    assert a == b


# --- the addition relation ----------------------------------------------------


def test_direct_adder_shape():
    adder = learner.direct_adder()
    assert adder.alphabet.n_tracks == 3
    assert adder.alphabet.size == 27
    assert adder.n_states == 17
    assert automata.live_state_count(adder) == 16


def adder_words(xs, ys, zs, length):
    dx = pell.encode_batch(xs, length=length)
    dy = pell.encode_batch(ys, length=length)
    dz = pell.encode_batch(zs, length=length)
    return dx * 9 + dy * 3 + dz


def check_adder_against_arithmetic(adder, limit, wrong_per_pair=20, seed=0, block=100):
    """All x, y <= limit: x + y = z accepted, random z != x + y rejected."""
    rng = np.random.default_rng(seed)
    length = len(pell.encode(2 * limit + 1))
    values = np.arange(limit + 1, dtype=np.int64)
    for lo in range(0, limit + 1, block):
        xs = np.repeat(values[lo : lo + block], limit + 1)
        ys = np.tile(values, len(xs) // (limit + 1))
        zs = xs + ys
        words = adder_words(xs, ys, zs, length)
        assert adder.accepting[automata.run_batch(adder, words)].all()

        wrong = rng.integers(0, 2 * limit + 1, size=(len(xs), wrong_per_pair))
        wrong += wrong == zs[:, None]  # bump collisions off the true sum
        flat_x = np.repeat(xs, wrong_per_pair)
        flat_y = np.repeat(ys, wrong_per_pair)
        words = adder_words(flat_x, flat_y, wrong.ravel(), length)
        assert not adder.accepting[automata.run_batch(adder, words)].any()


def test_direct_adder_agrees_with_arithmetic_small():
    check_adder_against_arithmetic(learner.direct_adder(), 400, wrong_per_pair=4)


def test_adder_oracle_matches_decode():
    rng = np.random.default_rng(3)
    for _ in range(200):
        length = int(rng.integers(0, 7))
        word = tuple(int(s) for s in rng.integers(0, 27, size=length))
        digits = np.array(word).reshape(1, -1)
        x = pell.decode("".join(str(s // 9) for s in word))
        y = pell.decode("".join(str((s // 3) % 3) for s in word))
        z = pell.decode("".join(str(s % 3) for s in word))
        valid = (
            pell.valid_digits_batch(digits // 9).item()
            and pell.valid_digits_batch((digits // 3) % 3).item()
            and pell.valid_digits_batch(digits % 3).item()
        )
        assert learner.adder_oracle(word) == (valid and x + y == z)
    batch = rng.integers(0, 27, size=(500, 5))
    got = learner.adder_oracle_batch(batch)
    for row, g in zip(batch, got):
        assert learner.adder_oracle(tuple(int(s) for s in row)) == bool(g)


def test_learned_adder_equals_direct(learned_adder):
    direct = learner.direct_adder()
    assert R.same_automaton(
        automata.minimize(learned_adder), automata.minimize(direct)
    )
    assert learned_adder.n_states == 17
    assert automata.live_state_count(learned_adder) == 16


def test_adder_accessor_is_shared():
    assert learner.adder() is learner.adder()
    assert automata.equivalent(learner.adder(), learner.direct_adder())
