"""Decision procedure for first-order predicates over Pell-automatic sequences.

The package compiles quantified predicates about addition and about the
balanced words built on the characteristic Sturmian word of sqrt(2) - 1 into
multi-track finite automata, learns the Pell addition automaton with Angluin's
L*, verifies it by an inductive proof, and searches for optimal
repetition-avoiding balanced words.
"""

__version__ = "0.1.0"
