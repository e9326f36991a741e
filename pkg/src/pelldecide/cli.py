"""Command-line front end: predicate evaluation, definitions, proofs, search.

Commands mirror the library: ``eval``/``def``/``reg`` compile predicates in a
session environment, ``prove`` runs the theorem scripts, ``seq`` prints or
dumps the built-in sequences, ``search`` runs the balanced-word optimality
search, and ``run`` executes a script of these commands (one per line, ``#``
comments, double-quoted predicates, and an optional trailing
``=> TRUE``/``=> FALSE`` expectation on eval lines).

A session directory (``--session``) persists definitions and sequence dumps
between invocations; within one ``run``, later commands see everything
earlier commands created.  Exit codes: 0 on success (an eval printing FALSE
is still a success), 1 when a proof or expectation fails, 2 on usage or
syntax errors.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import automata, learner, logic, pell, search, sequences, theorems

_BUILTIN_SEQUENCES = {
    "C": sequences.c_alpha_dfao,
    "X": sequences.x5_dfao,
    "c_alpha": sequences.c_alpha_dfao,
    "x5": sequences.x5_dfao,
    "x3": sequences.x3_dfao,
}

_SEQ_ATOM = re.compile(r"([A-Za-z_]\w*)\s*\[")


class Session:
    """Environment plus optional persistence directory."""

    def __init__(self, directory: Optional[str] = None):
        self.directory = Path(directory) if directory else None
        self.env = logic.Environment()
        if self.directory is not None and self.directory.exists():
            self._load()

    def _load(self) -> None:
        seq_dir = self.directory / "sequences"
        if seq_dir.is_dir():
            for path in sorted(seq_dir.glob("*.txt")):
                self.env = self.env.with_sequence(path.stem, automata.load_text(path))
        def_dir = self.directory / "definitions"
        if def_dir.is_dir():
            for path in sorted(def_dir.glob("*.json")):
                data = json.loads(path.read_text())
                self.env = self.env.with_callable(
                    path.stem,
                    automata.from_text(data["automaton"]),
                    tuple(data["params"]),
                )

    def ensure_sequences(self, text: str) -> None:
        """Materialize built-in sequences the predicate indexes into."""
        for name in sorted(set(_SEQ_ATOM.findall(text))):
            if name in _BUILTIN_SEQUENCES and name not in self.env.sequence_names():
                self.env = self.env.with_sequence(name, _BUILTIN_SEQUENCES[name]())

    def resolve(self, path: str) -> Path:
        p = Path(path)
        if self.directory is not None and not p.is_absolute():
            return self.directory / p
        return p

    def save_definition(self, name: str, dfa, params) -> None:
        if self.directory is None:
            return
        def_dir = self.directory / "definitions"
        def_dir.mkdir(parents=True, exist_ok=True)
        (def_dir / f"{name}.json").write_text(
            json.dumps({"params": list(params), "automaton": automata.to_text(dfa)})
        )

    def register_sequence(self, name: str, m) -> None:
        self.env = self.env.with_sequence(name, m)
        # persist the binding so a reloaded session sees the same sequences
        if self.directory is not None:
            seq_dir = self.directory / "sequences"
            seq_dir.mkdir(parents=True, exist_ok=True)
            automata.save_text(m, seq_dir / f"{name}.txt")


def _write_automaton(a, fmt: str, out: Optional[str], session: Session) -> None:
    text = automata.to_dot(a) if fmt == "dot" else automata.to_text(a)
    if out:
        session.resolve(out).write_text(text)
    else:
        print(text, end="")


def _sequence_by_name(session: Session, name: str):
    if name in session.env.sequence_names():
        return session.env.sequence(name)
    if name in _BUILTIN_SEQUENCES:
        return _BUILTIN_SEQUENCES[name]()
    raise logic.CompileError(f"unknown sequence {name!r}")


# ---------------------------------------------------------------------------
# command handlers (each returns an exit code)


def cmd_convert(session: Session, ns) -> int:
    if ns.decode:
        print(pell.decode(ns.value))
    else:
        print(pell.encode(int(ns.value)) or "0")
    return 0


def cmd_eval(session: Session, ns) -> int:
    session.ensure_sequences(ns.predicate)
    rel = logic.compile(ns.predicate, session.env)
    if not rel.tracks:
        verdict = "TRUE" if rel.is_true else "FALSE"
        prefix = f"{ns.name} = " if ns.name else ""
        print(f"{prefix}{verdict}")
        if ns.expect and verdict != ns.expect:
            print(f"error: expected {ns.expect}, got {verdict}", file=sys.stderr)
            return 1
        return 0
    if ns.expect:
        print("error: => expectations apply only to closed predicates",
              file=sys.stderr)
        return 2
    label = ns.name or "result"
    if ns.name:
        session.env = session.env.with_callable(ns.name, rel.dfa, rel.tracks)
        session.save_definition(ns.name, rel.dfa, rel.tracks)
    print(f"{label}: automaton over ({', '.join(rel.tracks)}), "
          f"{rel.dfa.n_states} states")
    if ns.out:
        _write_automaton(rel.dfa, ns.format, ns.out, session)
    return 0


def cmd_def(session: Session, ns) -> int:
    session.ensure_sequences(ns.predicate)
    rel = logic.compile(ns.predicate, session.env)
    session.env = session.env.with_callable(ns.name, rel.dfa, rel.tracks)
    session.save_definition(ns.name, rel.dfa, rel.tracks)
    print(f"{ns.name}: automaton over ({', '.join(rel.tracks)}), "
          f"{rel.dfa.n_states} states")
    return 0


def cmd_reg(session: Session, ns) -> int:
    if len(ns.rest) == 1:
        pattern = ns.rest[0]
    elif len(ns.rest) == 2:
        numeration, pattern = ns.rest
        if numeration != "msd_pell":
            print(f"error: unsupported numeration {numeration!r}", file=sys.stderr)
            return 2
    else:
        print("error: reg takes a name, an optional numeration, and a pattern",
              file=sys.stderr)
        return 2
    session.env = logic.reg(session.env, ns.name, pattern)
    stored = session.env.stored(ns.name)
    session.save_definition(ns.name, stored.dfa, stored.params)
    print(f"{ns.name}: automaton over ({', '.join(stored.params)}), "
          f"{stored.dfa.n_states} states")
    return 0


def cmd_dump(session: Session, ns) -> int:
    try:
        target = session.env.stored(ns.name).dfa
    except logic.CompileError:
        target = _sequence_by_name(session, ns.name)
    _write_automaton(target, ns.format, ns.out, session)
    return 0


def cmd_seq(session: Session, ns) -> int:
    m = _sequence_by_name(session, ns.name)
    if ns.dump:
        path = session.resolve(ns.dump)
        automata.save_text(m, path)
        session.register_sequence(path.stem, m)
        print(f"wrote {path}")
        return 0
    lo = ns.start if ns.start is not None else 0
    hi = ns.stop if ns.stop is not None else lo + 28
    print("".join(str(automata.dfao_eval(m, i)) for i in range(lo, hi + 1)))
    return 0


def cmd_learn_adder(session: Session, ns) -> int:
    learned = learner.learn_adder(max_len=ns.max_len, seed=ns.seed)
    live = automata.live_state_count(learned)
    print(f"learned adder: {learned.n_states} states ({live} live) "
          f"over {learned.alphabet.size} symbols")
    same = automata.equivalent(learned, learner.adder())
    print(f"agrees with the direct construction: {same}")
    if ns.out:
        _write_automaton(learned, ns.format, ns.out, session)
    return 0 if same else 1


def cmd_verify_adder(session: Session, ns) -> int:
    report = theorems.verify_adder()
    print(report.summary())
    return 0 if report.passed else 1


def cmd_prove(session: Session, ns) -> int:
    if ns.theorem == "all":
        names = list(theorems.THEOREMS)
    elif ns.theorem in theorems.THEOREMS:
        names = [ns.theorem]
    else:
        known = ", ".join(theorems.THEOREMS)
        print(f"error: unknown theorem {ns.theorem!r} (known: {known}, all)",
              file=sys.stderr)
        return 2
    failed = False
    for name in names:
        result = theorems.THEOREMS[name]()
        report = result[1] if isinstance(result, tuple) else result
        print(report.summary())
        failed = failed or not report.passed
        if ns.emit_automata:
            out = Path(ns.emit_automata)
            out.mkdir(parents=True, exist_ok=True)
            for key, a in report.automata.items():
                automata.save_text(a, out / f"{name}.{key}.txt")
    return 1 if failed else 0


def cmd_search(session: Session, ns) -> int:
    bound = Fraction(ns.bound)
    depth, words = search.bfs_optimal(
        ns.alphabet, bound, strict=ns.strict, limit_depth=ns.limit_depth
    )
    print(f"max length {depth} with {len(words)} words:")
    for w in words:
        print(f"  {w}")
    return 0


def cmd_run(session: Session, ns) -> int:
    parser = _build_parser()
    worst = 0
    for line in _script_lines(Path(ns.script).read_text()):
        tokens = _line_tokens(line)
        if not tokens:
            continue
        print(f"> {' '.join(tokens)}")
        try:
            sub = parser.parse_args(tokens)
        except SystemExit:
            return 2
        code = _dispatch(session, sub)
        if code == 2:
            return 2
        worst = max(worst, code)
    return worst


def _script_lines(text: str):
    """Logical lines: comments stripped, quotes joined across line breaks."""
    pending = ""
    for raw in text.splitlines():
        line = _strip_comment(raw) if not pending else raw
        pending = f"{pending} {line.strip()}" if pending else line.strip()
        if pending.count('"') % 2 == 0:
            if pending:
                yield pending
            pending = ""
    if pending:
        yield pending


def _strip_comment(line: str) -> str:
    quoted = False
    for i, c in enumerate(line):
        if c == '"':
            quoted = not quoted
        elif c == "#" and not quoted:
            return line[:i]
    return line


def _line_tokens(line: str) -> list[str]:
    import shlex

    tokens = shlex.split(line, comments=False)
    if "=>" in tokens:
        at = tokens.index("=>")
        if at != len(tokens) - 2:
            raise ValueError(f"malformed expectation in: {line}")
        tokens[at : at + 2] = ["--expect", tokens[at + 1]]
    return tokens


# ---------------------------------------------------------------------------
# parser


def _add_session(p: argparse.ArgumentParser) -> None:
    p.add_argument("--session", help="directory persisting definitions and dumps")


def _add_format(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("txt", "dot"), default="txt")
    p.add_argument("--out", help="write the automaton to this file")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pelldecide",
        description="decide first-order predicates over Pell representations",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convert", help="decimal to Pell digits (or back)")
    p.add_argument("value")
    p.add_argument("--decode", action="store_true",
                   help="treat the value as Pell digits and print the decimal")

    p = sub.add_parser("eval", help="evaluate or compile a predicate")
    p.add_argument("name", nargs="?", default=None,
                   help="store a free-variable result under this name")
    p.add_argument("predicate")
    p.add_argument("--expect", choices=("TRUE", "FALSE"))
    _add_format(p)
    _add_session(p)

    p = sub.add_parser("def", help="define a named predicate")
    p.add_argument("name")
    p.add_argument("predicate")
    _add_session(p)

    p = sub.add_parser("reg", help="define a digit-pattern automaton")
    p.add_argument("name")
    p.add_argument("rest", nargs="+",
                   metavar="[numeration] pattern",
                   help="optional numeration (msd_pell) and the pattern")
    _add_session(p)

    p = sub.add_parser("dump", help="write a stored automaton")
    p.add_argument("name")
    _add_format(p)
    _add_session(p)

    p = sub.add_parser("seq", help="print or dump a sequence")
    p.add_argument("name")
    p.add_argument("--from", dest="start", type=int)
    p.add_argument("--to", dest="stop", type=int)
    p.add_argument("--dump", help="write the sequence automaton to this file")
    _add_session(p)

    p = sub.add_parser("learn-adder", help="learn the addition automaton")
    p.add_argument("--max-len", type=int, default=6)
    p.add_argument("--seed", type=int, default=0)
    _add_format(p)
    _add_session(p)

    p = sub.add_parser("verify-adder", help="run the adder correctness proof")
    _add_session(p)

    p = sub.add_parser("prove", help="run theorem scripts")
    p.add_argument("theorem")
    p.add_argument("--emit-automata", help="directory for intermediate automata")
    _add_session(p)

    p = sub.add_parser("search", help="balanced-word optimality search")
    p.add_argument("--alphabet", type=int, default=5)
    p.add_argument("--bound", default="3/2")
    p.add_argument("--strict", dest="strict", action="store_true", default=True)
    p.add_argument("--no-strict", dest="strict", action="store_false")
    p.add_argument("--limit-depth", type=int, default=None)
    _add_session(p)

    p = sub.add_parser("run", help="execute a command script")
    p.add_argument("script")
    p.add_argument("--emit-automata", help="directory for intermediate automata")
    _add_session(p)

    return parser


_HANDLERS = {
    "convert": cmd_convert,
    "eval": cmd_eval,
    "def": cmd_def,
    "reg": cmd_reg,
    "dump": cmd_dump,
    "seq": cmd_seq,
    "learn-adder": cmd_learn_adder,
    "verify-adder": cmd_verify_adder,
    "prove": cmd_prove,
    "search": cmd_search,
    "run": cmd_run,
}


def _dispatch(session: Session, ns) -> int:
    try:
        return _HANDLERS[ns.command](session, ns)
    except (logic.PredicateSyntaxError, logic.CompileError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def main(argv=None) -> int:
    parser = _build_parser()
    ns = parser.parse_args(argv)
    session = Session(getattr(ns, "session", None))
    return _dispatch(session, ns)


if __name__ == "__main__":
    sys.exit(main())
