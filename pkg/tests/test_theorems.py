"""The five scripted proofs, their reports, and their sensitivity to mutants."""

from fractions import Fraction

import numpy as np
import pytest

import references as R
from pelldecide import automata, learner, pell, sequences, theorems


def by_name(report, fragment):
    hits = [c for c in report.checks if fragment in c.name]
    assert hits, f"no check matching {fragment!r} in {report.theorem}"
    return hits[0]


def test_all_theorems_pass(theorem_reports):
    assert set(theorem_reports) == {
        "verify_adder",
        "prove_e_x5",
        "corollary_cex5",
        "almost_powers",
        "x3_analysis",
    }
    for name, report in theorem_reports.items():
        assert report.passed, report.summary()
        assert report.duration > 0
        assert "PASS" in report.summary()


def test_exponent_verdicts(theorem_reports):
    report = theorem_reports["prove_e_x5"]
    assert by_name(report, "fac_low_exponent").obtained is True
    assert by_name(report, "fac_ex_exponent").obtained is True
    assert by_name(report, "fac_high_exponent").obtained is False


def test_corollary_details(theorem_reports):
    report = theorem_reports["corollary_cex5"]
    assert by_name(report, "period 4").obtained is True
    assert by_name(report, "(23, 4)").obtained is True
    assert by_name(report, "(23, 5)").obtained is False
    assert by_name(report, "factor at 23").obtained == "403240"
    rel = report.automata["fac_cex5"]
    assert rel.alphabet.n_tracks == 2
    assert rel.n_states == 8


def test_almost_powers_details(theorem_reports):
    report = theorem_reports["almost_powers"]
    pairs = by_name(report, "pairs with p <= 10000").obtained
    assert pairs == [
        (19, 14), (49, 34), (121, 82), (295, 198),
        (715, 478), (1729, 1154), (4177, 2786), (10087, 6726),
    ]
    assert all(2 * n + 4 == 3 * p for n, p in pairs)
    assert automata.is_infinite(report.automata["almost_ce_period"])
    # gap to 3/2 is exactly 2/p, so it dips below 1e-3 within the listed pairs
    gaps = [Fraction(3, 2) - Fraction(n, p) for n, p in pairs]
    assert gaps == [Fraction(2, p) for _, p in pairs]
    assert gaps[-1] < Fraction(1, 1000) < gaps[0]


def test_x3_analysis_details(theorem_reports):
    report = theorem_reports["x3_analysis"]
    assert by_name(report, "0*110000*").obtained is True
    for m in (5, 6, 7, 8):
        p = pell.pell_number(m) + pell.pell_number(m - 1)
        check = by_name(report, f"highest power for period {p}")
        assert check.obtained is True
    assert by_name(report, "109/41").obtained == Fraction(109, 41)
    high = report.automata["periods_of_high_powers"]
    pows = report.automata["pows"]
    assert automata.equivalent(high, pows)


def test_exponent_of_m_values():
    assert theorems.exponent_of_m(5) == Fraction(109, 41)
    assert theorems.exponent_of_m(6) == Fraction(266, 99)
    values = [theorems.exponent_of_m(m) for m in range(5, 61)]
    assert all(a < b for a, b in zip(values, values[1:]))
    # e < 2 + sqrt(2)/2, squared out with integers
    for e in values:
        assert e > 2
        assert (2 * e.numerator - 4 * e.denominator) ** 2 < 2 * e.denominator**2


def test_convergent_pairs():
    c = theorems.convergent(3)
    assert (c.k, c.numerator, c.denominator) == (3, 5, 12)
    assert theorems.convergent(6).numerator == 70


def test_report_plumbing():
    report = theorems.TheoremReport("toy")
    report.add("fine", 1, 1)
    assert report.passed
    report.add("broken", 1, 2)
    assert not report.passed
    assert "XX broken" in report.summary()
    assert "FAIL" in report.summary()


# --- mutation sensitivity -------------------------------------------------------


def test_verify_adder_catches_accepting_flip():
    mutant = R.flip_accepting(learner.direct_adder(), learner.direct_adder().initial)
    report = theorems.verify_adder(adder=mutant)
    assert not report.passed


def test_verify_adder_catches_transition_reroute():
    adder = learner.direct_adder()
    # send (0, 0, 1) out of the initial state back to the accepting start
    mutant = R.reroute(adder, adder.initial, 1, adder.initial)
    report = theorems.verify_adder(adder=mutant)
    assert not report.passed


def test_healthy_adder_passes_standalone():
    assert theorems.verify_adder().passed
