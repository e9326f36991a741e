"""First-order predicate language over naturals in Pell representation.

Predicates are parsed from Walnut-style text ("?msd_pell Ax,z ((x + 0 = z)
<=> (x = z))") and compiled to multi-track automata whose tracks carry the
free variables in sorted name order.  Terms know addition (through the
addition relation) and multiplication by constants (binary doubling with
fresh existential variables); atoms are comparisons, sequence-output tests
like X[i] = @3, and calls $name(...) into stored definitions or named
regular-expression automata.

Every compiled automaton satisfies two invariants that the operations
preserve: each track is a leading-zero-padded canonical representation, and
membership is indifferent to how much padding a word carries.  Negation and
the implication/iff products therefore re-intersect with the per-track
validity automaton, and universal quantification is the classic double
negation around projection.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Mapping, Optional, Union

import numpy as np

from . import automata, learner, pell
from .automata import Dfa, Dfao, TrackAlphabet

__all__ = [
    "PredicateSyntaxError",
    "CompileError",
    "parse",
    "unparse",
    "free_variables",
    "Relation",
    "Environment",
    "compile",
    "eval_closed",
    "define",
    "reg",
    "relation_accepts",
    "relation_accepts_batch",
]


class PredicateSyntaxError(ValueError):
    """Parse failure with position and the token kinds that would have fit."""

    def __init__(self, message: str, line: int, column: int, expected: tuple[str, ...] = ()):
        tail = f" (expected {', '.join(expected)})" if expected else ""
        super().__init__(f"{message} at line {line}, column {column}{tail}")
        self.line = line
        self.column = column
        self.expected = expected


class CompileError(ValueError):
    """Name resolution or arity failure during compilation."""


# ---------------------------------------------------------------------------
# abstract syntax


@dataclass(frozen=True)
class TVar:
    name: str


@dataclass(frozen=True)
class TConst:
    value: int


@dataclass(frozen=True)
class TAdd:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class TMul:
    factor: int
    term: "Term"


Term = Union[TVar, TConst, TAdd, TMul]


@dataclass(frozen=True)
class PCmp:
    op: str  # = != < <= > >=
    left: Term
    right: Term


@dataclass(frozen=True)
class PSeqConst:
    name: str
    index: Term
    value: int
    negated: bool


@dataclass(frozen=True)
class PSeqPair:
    left_name: str
    left_index: Term
    right_name: str
    right_index: Term
    negated: bool


@dataclass(frozen=True)
class PCall:
    name: str
    args: tuple[Term, ...]


@dataclass(frozen=True)
class PNot:
    body: "Predicate"


@dataclass(frozen=True)
class PBin:
    op: str  # & | => <=>
    left: "Predicate"
    right: "Predicate"


@dataclass(frozen=True)
class PQuant:
    kind: str  # A or E
    names: tuple[str, ...]
    body: "Predicate"


Predicate = Union[PCmp, PSeqConst, PSeqPair, PCall, PNot, PBin, PQuant]


def _term_vars(t: Term) -> set[str]:
    if isinstance(t, TVar):
        return {t.name}
    if isinstance(t, TConst):
        return set()
    if isinstance(t, TAdd):
        return _term_vars(t.left) | _term_vars(t.right)
    return _term_vars(t.term)


def free_variables(p: Predicate) -> set[str]:
    if isinstance(p, PCmp):
        return _term_vars(p.left) | _term_vars(p.right)
    if isinstance(p, PSeqConst):
        return _term_vars(p.index)
    if isinstance(p, PSeqPair):
        return _term_vars(p.left_index) | _term_vars(p.right_index)
    if isinstance(p, PCall):
        return set().union(*(_term_vars(a) for a in p.args)) if p.args else set()
    if isinstance(p, PNot):
        return free_variables(p.body)
    if isinstance(p, PBin):
        return free_variables(p.left) | free_variables(p.right)
    return free_variables(p.body) - set(p.names)


# ---------------------------------------------------------------------------
# tokenizer and parser

_TOKEN_RE = re.compile(
    r"""(?P<ws>\s+)
      | (?P<call>\$[A-Za-z_]\w*)
      | (?P<number>\d+)
      | (?P<name>[A-Za-z_]\w*)
      | (?P<op><=>|=>|<=|>=|!=|[=<>~&|()\[\],+*@?])
    """,
    re.VERBOSE,
)

_Token = tuple[str, str, int, int]  # kind, text, line, column


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, line_start = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            col = pos - line_start + 1
            raise PredicateSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        value = m.group()
        col = pos - line_start + 1
        if kind == "ws":
            nl = value.count("\n")
            if nl:
                line += nl
                line_start = pos + value.rindex("\n") + 1
        elif kind == "name" and value[0] in "AE":
            # a leading A/E is a quantifier; the rest is its first variable
            tokens.append(("quant", value[0], line, col))
            if len(value) > 1:
                tokens.append(("name", value[1:], line, col + 1))
        else:
            tokens.append((kind, value, line, col))
        pos = m.end()
    tokens.append(("end", "", line, len(text) - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def at_op(self, *ops: str) -> bool:
        kind, value, _, _ = self.peek()
        return kind == "op" and value in ops

    def expect_op(self, op: str) -> None:
        kind, value, line, col = self.peek()
        if kind != "op" or value != op:
            raise PredicateSyntaxError(f"found {value or kind!r}", line, col, (repr(op),))
        self.pos += 1

    def expect_name(self) -> str:
        kind, value, line, col = self.peek()
        if kind != "name":
            raise PredicateSyntaxError(f"found {value or kind!r}", line, col, ("variable name",))
        self.pos += 1
        return value

    def parse(self) -> Predicate:
        if self.at_op("?"):
            self.next()
            kind, value, line, col = self.next()
            if kind != "name" or value != "msd_pell":
                raise PredicateSyntaxError(
                    f"unsupported numeration {value!r}", line, col, ("msd_pell",)
                )
        p = self.parse_iff()
        kind, value, line, col = self.peek()
        if kind != "end":
            raise PredicateSyntaxError(f"trailing input {value!r}", line, col, ("end of input",))
        return p

    def parse_iff(self) -> Predicate:
        p = self.parse_implies()
        while self.at_op("<=>"):
            self.next()
            p = PBin("<=>", p, self.parse_implies())
        return p

    def parse_implies(self) -> Predicate:
        p = self.parse_or()
        if self.at_op("=>"):
            self.next()
            return PBin("=>", p, self.parse_implies())
        return p

    def parse_or(self) -> Predicate:
        p = self.parse_and()
        while self.at_op("|"):
            self.next()
            p = PBin("|", p, self.parse_and())
        return p

    def parse_and(self) -> Predicate:
        p = self.parse_unary()
        while self.at_op("&"):
            self.next()
            p = PBin("&", p, self.parse_unary())
        return p

    def parse_unary(self) -> Predicate:
        kind, value, line, col = self.peek()
        if kind == "op" and value == "~":
            self.next()
            return PNot(self.parse_unary())
        if kind == "quant":
            self.next()
            names = []
            if self.peek()[0] == "name":
                names.append(self.expect_name())
                while self.at_op(","):
                    self.next()
                    names.append(self.expect_name())
            if not names:
                raise PredicateSyntaxError(
                    "quantifier without variables", line, col, ("variable name",)
                )
            # a quantifier swallows everything to its right
            return PQuant(value, tuple(names), self.parse_iff())
        return self.parse_atom()

    def parse_atom(self) -> Predicate:
        kind, value, line, col = self.peek()
        if kind == "op" and value == "(":
            self.next()
            p = self.parse_iff()
            self.expect_op(")")
            return p
        if kind == "call":
            self.next()
            name = value[1:]
            self.expect_op("(")
            args = [self.parse_term()]
            while self.at_op(","):
                self.next()
                args.append(self.parse_term())
            self.expect_op(")")
            return PCall(name, tuple(args))
        if kind == "name" and self.tokens[self.pos + 1][:2] == ("op", "["):
            return self.parse_sequence_atom()
        return self.parse_comparison()

    def parse_sequence_atom(self) -> Predicate:
        name = self.expect_name()
        self.expect_op("[")
        index = self.parse_term()
        self.expect_op("]")
        kind, value, line, col = self.peek()
        if kind != "op" or value not in ("=", "!="):
            raise PredicateSyntaxError(f"found {value or kind!r}", line, col, ("'='", "'!='"))
        self.next()
        negated = value == "!="
        kind, value, line, col = self.peek()
        if kind == "op" and value == "@":
            self.next()
            kind, value, line, col = self.peek()
            if kind != "number":
                raise PredicateSyntaxError(f"found {value or kind!r}", line, col, ("output digit",))
            self.next()
            return PSeqConst(name, index, int(value), negated)
        other = self.expect_name()
        self.expect_op("[")
        other_index = self.parse_term()
        self.expect_op("]")
        return PSeqPair(name, index, other, other_index, negated)

    def parse_comparison(self) -> Predicate:
        left = self.parse_term()
        kind, value, line, col = self.peek()
        if kind != "op" or value not in ("=", "!=", "<", "<=", ">", ">="):
            raise PredicateSyntaxError(
                f"found {value or kind!r}", line, col, ("comparison operator",)
            )
        self.next()
        right = self.parse_term()
        return PCmp(value, left, right)

    def parse_term(self) -> Term:
        t = self.parse_factor()
        while self.at_op("+"):
            self.next()
            t = TAdd(t, self.parse_factor())
        return t

    def parse_factor(self) -> Term:
        kind, value, line, col = self.peek()
        if kind == "number":
            self.next()
            if self.at_op("*"):
                self.next()
                return TMul(int(value), self.parse_factor())
            return TConst(int(value))
        if kind == "name":
            self.next()
            return TVar(value)
        raise PredicateSyntaxError(
            f"found {value or kind!r}", line, col, ("number", "variable name")
        )


def _check_bindings(p: Predicate, bound: frozenset[str]) -> None:
    if isinstance(p, PQuant):
        clash = bound.intersection(p.names)
        if clash:
            raise PredicateSyntaxError(
                f"variable {sorted(clash)[0]!r} is bound twice", 1, 1
            )
        if len(set(p.names)) != len(p.names):
            raise PredicateSyntaxError("quantifier repeats a variable", 1, 1)
        _check_bindings(p.body, bound | set(p.names))
    elif isinstance(p, PNot):
        _check_bindings(p.body, bound)
    elif isinstance(p, PBin):
        _check_bindings(p.left, bound)
        _check_bindings(p.right, bound)


def parse(text: str) -> Predicate:
    """Parse predicate text (optionally headed by "?msd_pell") to an AST."""
    ast = _Parser(text).parse()
    _check_bindings(ast, frozenset())
    return ast


def unparse_term(t: Term) -> str:
    if isinstance(t, TVar):
        return t.name
    if isinstance(t, TConst):
        return str(t.value)
    if isinstance(t, TAdd):
        return f"{unparse_term(t.left)} + {unparse_term(t.right)}"
    return f"{t.factor} * {unparse_term(t.term)}"


def unparse(p: Predicate) -> str:
    """Render an AST back to parseable text (parse(unparse(x)) == x)."""

    def wrap(q: Predicate) -> str:
        text = unparse(q)
        if isinstance(q, (PBin, PQuant)):
            return f"({text})"
        return text

    if isinstance(p, PCmp):
        return f"{unparse_term(p.left)} {p.op} {unparse_term(p.right)}"
    if isinstance(p, PSeqConst):
        op = "!=" if p.negated else "="
        return f"{p.name}[{unparse_term(p.index)}] {op} @{p.value}"
    if isinstance(p, PSeqPair):
        op = "!=" if p.negated else "="
        return (
            f"{p.left_name}[{unparse_term(p.left_index)}] {op} "
            f"{p.right_name}[{unparse_term(p.right_index)}]"
        )
    if isinstance(p, PCall):
        return f"${p.name}({', '.join(unparse_term(a) for a in p.args)})"
    if isinstance(p, PNot):
        return f"~{wrap(p.body)}"
    if isinstance(p, PBin):
        return f"{wrap(p.left)} {p.op} {wrap(p.right)}"
    return f"{p.kind}{','.join(p.names)} {unparse(p.body)}"


# ---------------------------------------------------------------------------
# compiled relations


@dataclass(frozen=True)
class Relation:
    """An automaton together with the variable name carried by each track."""

    dfa: Dfa
    tracks: tuple[str, ...]

    @staticmethod
    def make(dfa: Dfa, names: tuple[str, ...]) -> "Relation":
        if len(names) != dfa.alphabet.n_tracks:
            raise CompileError(
                f"{dfa.alphabet.n_tracks}-track automaton given {len(names)} names"
            )
        if len(set(names)) != len(names):
            raise CompileError(f"duplicate track names {names}")
        order = tuple(sorted(names))
        if order == names:
            return Relation(dfa, names)
        perm = [names.index(n) for n in order]
        return Relation(automata.permute_tracks(dfa, perm), order)

    @property
    def is_true(self) -> bool:
        if self.tracks:
            raise CompileError(f"relation has free variables {self.tracks}")
        return bool(self.dfa.accepting[self.dfa.initial])


def _lift(a: Dfa, position: int, total: int) -> Dfa:
    """Embed a 1-track automaton as the given track among ``total``."""
    out = a
    for _ in range(total - 1 - position):
        out = automata.cylindrify(out, out.alphabet.n_tracks)
    for _ in range(position):
        out = automata.cylindrify(out, 0)
    return out


_VALID_CACHE: dict[int, Dfa] = {}
_CMP_CACHE: dict[str, Dfa] = {}
_CONST_CACHE: dict[int, Dfa] = {}
_SLICE_CACHE: dict[tuple[Dfao, int], Dfa] = {}
_PAIR_CACHE: dict[tuple[Dfao, Dfao], Dfa] = {}


def _valid(k: int) -> Dfa:
    """All tracks are padded canonical representations."""
    if k not in _VALID_CACHE:
        if k == 0:
            _VALID_CACHE[k] = Dfa(
                TrackAlphabet(0),
                np.zeros((1, 1), dtype=np.int32),
                np.array([True]),
                0,
            )
        else:
            rec = pell.canonical_recognizer()
            out = _lift(rec, 0, k)
            for i in range(1, k):
                out = automata.product(out, _lift(rec, i, k), "and")
            _VALID_CACHE[k] = out
    return _VALID_CACHE[k]


def _comparison(op: str) -> Dfa:
    """2-track relation for one comparison; numeric order is lexicographic
    order of equal-length padded canonical representations."""
    if op not in _CMP_CACHE:
        alphabet = TrackAlphabet(2)
        delta = np.empty((3, 9), dtype=np.int32)
        for sym in range(9):
            a, b = sym // 3, sym % 3
            delta[0, sym] = 0 if a == b else (1 if a < b else 2)
        delta[1, :] = 1
        delta[2, :] = 2
        accept_sets = {
            "=": (0,),
            "!=": (1, 2),
            "<": (1,),
            "<=": (0, 1),
            ">": (2,),
            ">=": (0, 2),
        }
        for name, states in accept_sets.items():
            accepting = np.zeros(3, dtype=bool)
            accepting[list(states)] = True
            core = Dfa(alphabet, delta, accepting, 0)
            _CMP_CACHE[name] = automata.product(core, _valid(2), "and")
    return _CMP_CACHE[op]


def _const_dfa(value: int) -> Dfa:
    """1-track automaton accepting exactly the padded representations of one
    natural number."""
    if value not in _CONST_CACHE:
        digits = [int(d) for d in pell.encode(value)]
        n = len(digits) + 2  # match states, plus the padding start, plus dead
        dead = n - 1
        delta = np.full((n, 3), dead, dtype=np.int32)
        delta[0, 0] = 0
        for i, d in enumerate(digits):
            delta[i, d] = i + 1
        accepting = np.zeros(n, dtype=bool)
        accepting[len(digits)] = True
        _CONST_CACHE[value] = automata.minimize(Dfa(TrackAlphabet(1), delta, accepting, 0))
    return _CONST_CACHE[value]


def _slice(m: Dfao, value: int) -> Dfa:
    """1-track relation: the sequence value at the track's number equals
    ``value``."""
    key = (m, value)
    if key not in _SLICE_CACHE:
        core = Dfa(m.alphabet, m.delta, np.asarray(m.outputs) == value, m.initial)
        _SLICE_CACHE[key] = automata.product(core, _valid(1), "and")
    return _SLICE_CACHE[key]


def _pair_equal(a: Dfao, b: Dfao) -> Dfa:
    """2-track relation: a's value at track 0 equals b's value at track 1."""
    key = (a, b)
    if key not in _PAIR_CACHE:
        common = sorted(set(map(int, a.outputs)) & set(map(int, b.outputs)))
        parts = [
            automata.product(_lift(_slice(a, c), 0, 2), _lift(_slice(b, c), 1, 2), "and")
            for c in common
        ]
        if not parts:
            out = automata.complement(_valid(2))
            out = automata.product(out, _valid(2), "and")  # empty relation
        else:
            out = reduce(lambda x, y: automata.product(x, y, "or"), parts)
        _PAIR_CACHE[key] = out
    return _PAIR_CACHE[key]


_OP_NAMES = {"&": "and", "|": "or", "=>": "implies", "<=>": "iff"}


def _join(a: Relation, b: Relation) -> Relation:
    """Conjunction over the union of the two track sets."""
    names = tuple(sorted(set(a.tracks) | set(b.tracks)))
    da = _spread(a, names)
    db = _spread(b, names)
    return Relation(automata.product(da, db, "and"), names)


def _spread(r: Relation, names: tuple[str, ...]) -> Dfa:
    """Cylindrify a relation's automaton onto a superset of its tracks."""
    out = r.dfa
    have = list(r.tracks)
    for pos, name in enumerate(names):
        if name not in have:
            out = automata.cylindrify(out, pos)
            have.insert(pos, name)
    return out


def _combine(a: Relation, b: Relation, op: str) -> Relation:
    if op == "&":
        return _join(a, b)
    names = tuple(sorted(set(a.tracks) | set(b.tracks)))
    prod = automata.product(_spread(a, names), _spread(b, names), _OP_NAMES[op])
    # or/implies/iff can accept junk on tracks the operands did not both
    # constrain (and implies/iff accept whatever both reject), so restrict
    # back to valid representations.
    prod = automata.product(prod, _valid(len(names)), "and")
    return Relation(prod, names)


def _negate(r: Relation) -> Relation:
    out = automata.product(automata.complement(r.dfa), _valid(len(r.tracks)), "and")
    return Relation(out, r.tracks)


def _project_var(r: Relation, name: str) -> Relation:
    idx = r.tracks.index(name)
    rest = r.tracks[:idx] + r.tracks[idx + 1 :]
    return Relation(automata.project(r.dfa, idx), rest)


def _eliminate(constraints: list[Relation], temps: set[str]) -> Relation:
    """Conjoin constraints, projecting each temp variable as early as its
    last use allows, which keeps intermediate track counts low."""
    work = list(constraints)
    remaining = set(temps)
    while remaining:
        best_name, best_width = None, None
        for t in remaining:
            bucket_tracks = set().union(*(set(r.tracks) for r in work if t in r.tracks))
            if best_width is None or len(bucket_tracks) < best_width:
                best_name, best_width = t, len(bucket_tracks)
        bucket = [r for r in work if best_name in r.tracks]
        rest = [r for r in work if best_name not in r.tracks]
        joined = reduce(_join, bucket)
        work = rest + [_project_var(joined, best_name)]
        remaining.discard(best_name)
    return reduce(_join, work)


# ---------------------------------------------------------------------------
# environment


@dataclass(frozen=True)
class _Stored:
    dfa: Dfa
    params: tuple[str, ...]


def _check_name(name: str) -> str:
    if not re.fullmatch(r"[A-Za-z_]\w*", name):
        raise CompileError(f"invalid name {name!r}")
    if name[0] in "AE":
        raise CompileError(
            f"name {name!r} would collide with the quantifier letters A/E"
        )
    return name


class Environment:
    """Immutable snapshot of named sequences, definitions and patterns.

    Definitions and regular-expression automata share one callable namespace
    (both are invoked as $name(...)); sequences live in their own namespace.
    ``adder`` overrides the addition relation, which exists so tests can
    inject broken adders and watch proofs fail.
    """

    def __init__(
        self,
        sequences: Optional[Mapping[str, Dfao]] = None,
        callables: Optional[Mapping[str, _Stored]] = None,
        adder: Optional[Dfa] = None,
    ):
        self._sequences = dict(sequences or {})
        self._callables = dict(callables or {})
        self._adder = adder

    def with_sequence(self, name: str, m: Dfao) -> "Environment":
        if m.alphabet.n_tracks != 1:
            raise CompileError(f"sequence {name!r} must read a single track")
        new = dict(self._sequences)
        new[_check_name(name)] = m
        return Environment(new, self._callables, self._adder)

    def with_callable(self, name: str, dfa: Dfa, params: tuple[str, ...]) -> "Environment":
        if name in self._callables:
            raise CompileError(f"name {name!r} is already defined")
        new = dict(self._callables)
        new[_check_name(name)] = _Stored(dfa, params)
        return Environment(self._sequences, new, self._adder)

    def with_adder(self, adder: Dfa) -> "Environment":
        return Environment(self._sequences, self._callables, adder)

    def sequence(self, name: str) -> Dfao:
        if name not in self._sequences:
            raise CompileError(f"unknown sequence {name!r}")
        return self._sequences[name]

    def stored(self, name: str) -> _Stored:
        if name not in self._callables:
            raise CompileError(f"unknown definition {name!r}")
        return self._callables[name]

    def sequence_names(self) -> tuple[str, ...]:
        return tuple(sorted(self._sequences))

    def callable_names(self) -> tuple[str, ...]:
        return tuple(sorted(self._callables))

    def adder(self) -> Dfa:
        return self._adder if self._adder is not None else learner.adder()


# ---------------------------------------------------------------------------
# compiler


class _Context:
    """Constraint accumulator for one atom."""

    def __init__(self, compiler: "_Compiler"):
        self.compiler = compiler
        self.constraints: list[Relation] = []
        self.temps: set[str] = set()

    def fresh(self) -> str:
        name = f"%{self.compiler.counter}"
        self.compiler.counter += 1
        self.temps.add(name)
        return name

    def add(self, dfa: Dfa, names: tuple[str, ...]) -> None:
        """Add a constraint, freshening duplicate variables through equality."""
        seen: set[str] = set()
        final: list[str] = []
        for n in names:
            if n in seen:
                u = self.fresh()
                self.constraints.append(Relation.make(_comparison("="), (n, u)))
                final.append(u)
            else:
                seen.add(n)
                final.append(n)
        self.constraints.append(Relation.make(dfa, tuple(final)))

    def term(self, t: Term) -> str:
        """Flatten a term to a variable, emitting defining constraints."""
        if isinstance(t, TVar):
            return t.name
        if isinstance(t, TConst):
            v = self.fresh()
            self.add(_const_dfa(t.value), (v,))
            return v
        if isinstance(t, TAdd):
            a = self.term(t.left)
            b = self.term(t.right)
            s = self.fresh()
            self.add(self.compiler.adder, (a, b, s))
            return s
        if t.factor == 0:
            v = self.fresh()
            self.add(_const_dfa(0), (v,))
            return v
        return self._times(t.factor, self.term(t.term))

    def _times(self, k: int, v: str) -> str:
        if k == 1:
            return v
        if k % 2 == 0:
            half = self._times(k // 2, v)
            out = self.fresh()
            self.add(self.compiler.adder, (half, half, out))
            return out
        rest = self._times(k - 1, v)
        out = self.fresh()
        self.add(self.compiler.adder, (rest, v, out))
        return out

    def finish(self, keep: Iterable[str]) -> Relation:
        keep = set(keep)
        if not self.constraints:
            return Relation(_valid(0), ())
        out = _eliminate(self.constraints, self.temps - keep)
        return out


class _Compiler:
    def __init__(self, env: Environment):
        self.env = env
        self.adder = env.adder()
        self.counter = 0

    def compile(self, p: Predicate) -> Relation:
        if isinstance(p, PCmp):
            ctx = _Context(self)
            a = ctx.term(p.left)
            b = ctx.term(p.right)
            ctx.add(_comparison(p.op), (a, b))
            return ctx.finish(free_variables(p))
        if isinstance(p, PSeqConst):
            m = self.env.sequence(p.name)
            if p.value not in set(map(int, m.outputs)):
                raise CompileError(
                    f"output @{p.value} is not in the alphabet of sequence {p.name!r}"
                )
            ctx = _Context(self)
            v = ctx.term(p.index)
            ctx.add(_slice(m, p.value), (v,))
            out = ctx.finish(free_variables(p))
            return _negate(out) if p.negated else out
        if isinstance(p, PSeqPair):
            ma = self.env.sequence(p.left_name)
            mb = self.env.sequence(p.right_name)
            ctx = _Context(self)
            va = ctx.term(p.left_index)
            vb = ctx.term(p.right_index)
            ctx.add(_pair_equal(ma, mb), (va, vb))
            out = ctx.finish(free_variables(p))
            return _negate(out) if p.negated else out
        if isinstance(p, PCall):
            stored = self.env.stored(p.name)
            if len(p.args) != len(stored.params):
                raise CompileError(
                    f"${p.name} takes {len(stored.params)} arguments, got {len(p.args)}"
                )
            ctx = _Context(self)
            names = tuple(ctx.term(a) for a in p.args)
            ctx.add(stored.dfa, names)
            return ctx.finish(free_variables(p))
        if isinstance(p, PNot):
            return _negate(self.compile(p.body))
        if isinstance(p, PBin):
            return _combine(self.compile(p.left), self.compile(p.right), p.op)
        if isinstance(p, PQuant):
            r = self.compile(p.body)
            if p.kind == "E":
                for name in p.names:
                    if name in r.tracks:
                        r = _project_var(r, name)
                return r
            r = _negate(r)
            for name in p.names:
                if name in r.tracks:
                    r = _project_var(r, name)
            return _negate(r)
        raise CompileError(f"cannot compile {type(p).__name__}")


def compile(p: Union[str, Predicate], env: Optional[Environment] = None) -> Relation:
    """Compile a predicate to a relation over its sorted free variables."""
    if isinstance(p, str):
        p = parse(p)
    return _Compiler(env if env is not None else Environment()).compile(p)


def eval_closed(p: Union[str, Predicate], env: Optional[Environment] = None) -> bool:
    """Truth value of a predicate with no free variables."""
    r = compile(p, env)
    if r.tracks:
        raise CompileError(
            f"predicate has free variables {', '.join(r.tracks)}; expected none"
        )
    return r.is_true


def define(env: Environment, name: str, p: Union[str, Predicate]) -> Environment:
    """Compile a predicate and store it as a callable $name(...)."""
    r = compile(p, env)
    return env.with_callable(name, r.dfa, r.tracks)


# ---------------------------------------------------------------------------
# digit regular expressions


def _regex_nfa(pattern: str):
    """Thompson construction over the digit alphabet {0,1,2}."""
    eps: list[list[int]] = []
    sym: list[dict[int, list[int]]] = []

    def new_state() -> int:
        eps.append([])
        sym.append({})
        return len(eps) - 1

    pos = 0

    def error(msg: str):
        return PredicateSyntaxError(msg, 1, pos + 1)

    def parse_alt() -> tuple[int, int]:
        nonlocal pos
        start, end = parse_cat()
        while pos < len(pattern) and pattern[pos] == "|":
            pos += 1
            s2, e2 = parse_cat()
            s = new_state()
            e = new_state()
            eps[s].extend([start, s2])
            eps[end].append(e)
            eps[e2].append(e)
            start, end = s, e
        return start, end

    def parse_cat() -> tuple[int, int]:
        start = end = new_state()
        while pos < len(pattern) and pattern[pos] not in ")|":
            s2, e2 = parse_rep()
            eps[end].append(s2)
            end = e2
        return start, end

    def parse_rep() -> tuple[int, int]:
        nonlocal pos
        start, end = parse_prim()
        while pos < len(pattern) and pattern[pos] in "*+?":
            op = pattern[pos]
            pos += 1
            s = new_state()
            e = new_state()
            eps[s].append(start)
            eps[end].append(e)
            if op in "*?":
                eps[s].append(e)
            if op in "*+":
                eps[end].append(start)
            start, end = s, e
        return start, end

    def parse_prim() -> tuple[int, int]:
        nonlocal pos
        if pos >= len(pattern):
            raise error("pattern ended unexpectedly")
        ch = pattern[pos]
        if ch == "(":
            pos += 1
            start, end = parse_alt()
            if pos >= len(pattern) or pattern[pos] != ")":
                raise error("unbalanced parenthesis")
            pos += 1
            return start, end
        if ch in "012":
            pos += 1
            s = new_state()
            e = new_state()
            sym[s].setdefault(int(ch), []).append(e)
            return s, e
        raise error(f"unexpected pattern character {ch!r}")

    start, end = parse_alt()
    if pos != len(pattern):
        raise error(f"unexpected pattern character {pattern[pos]!r}")
    return eps, sym, start, end


def _regex_dfa(pattern: str) -> Dfa:
    eps, sym, start, end = _regex_nfa(pattern)

    def closure(states: frozenset[int]) -> frozenset[int]:
        stack = list(states)
        seen = set(states)
        while stack:
            q = stack.pop()
            for t in eps[q]:
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        return frozenset(seen)

    init = closure(frozenset([start]))
    ids = {init: 0}
    order = [init]
    rows: list[list[int]] = []
    i = 0
    while i < len(order):
        current = order[i]
        row = []
        for d in range(3):
            target = closure(
                frozenset(t for q in current for t in sym[q].get(d, ()))
            )
            if target not in ids:
                ids[target] = len(order)
                order.append(target)
            row.append(ids[target])
        rows.append(row)
        i += 1
    delta = np.array(rows, dtype=np.int32)
    accepting = np.array([end in s for s in order])
    return automata.minimize(Dfa(TrackAlphabet(1), delta, accepting, 0))


def reg(env: Environment, name: str, pattern: str) -> Environment:
    """Store a digit regular expression as a 1-argument callable.

    The pattern matches literal digit strings; the stored relation accepts a
    number when some zero-padded spelling of its canonical representation
    matches, so the pattern is read up to leading zeros.
    """
    raw = _regex_dfa(pattern)
    restricted = automata.product(raw, _valid(1), "and")
    closed = automata.zero_pad_closure(automata.zero_saturate(restricted))
    return env.with_callable(name, closed, ("w",))


# ---------------------------------------------------------------------------
# evaluating relations on concrete numbers


def relation_accepts(r: Relation, values: Mapping[str, int]) -> bool:
    """Membership of one assignment (values keyed by track name)."""
    row = np.array([[values[name] for name in r.tracks]], dtype=np.int64)
    return bool(relation_accepts_batch(r, row)[0])


def relation_accepts_batch(r: Relation, rows: np.ndarray) -> np.ndarray:
    """Vectorized membership for an (n, len(tracks)) array of naturals."""
    rows = np.asarray(rows, dtype=np.int64)
    if r.tracks:
        if rows.ndim != 2 or rows.shape[1] != len(r.tracks):
            raise ValueError(f"expected shape (n, {len(r.tracks)})")
        digits = [pell.encode_batch(rows[:, i]) for i in range(rows.shape[1])]
        length = max(d.shape[1] for d in digits)
        words = np.zeros((len(rows), length), dtype=np.int64)
        for d in digits:
            pad = length - d.shape[1]
            words *= 3
            if d.shape[1]:
                words[:, pad:] += d
    else:
        words = np.zeros((len(rows), 0), dtype=np.int64)
    states = automata.run_batch(r.dfa, words)
    return np.asarray(r.dfa.accepting)[states]
