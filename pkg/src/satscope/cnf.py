"""DIMACS CNF parsing/writing and the clause/formula types shared by the solver and graphs.

Literals are signed DIMACS integers: variable ``v`` appears positively as ``v``
and negatively as ``-v``. Clauses are normalized on construction from text:
duplicate literals are dropped and tautological clauses (a variable in both
polarities) are removed entirely.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

log = logging.getLogger(__name__)


class DimacsError(ValueError):
    """Malformed DIMACS CNF input."""


def lit_var(lit: int) -> int:
    """Variable index of a signed literal."""
    return lit if lit > 0 else -lit


def lit_negated(lit: int) -> bool:
    return lit < 0


@dataclass(frozen=True)
class Clause:
    """A disjunction of signed literals.

    ``timestamp`` is the conflict count at the moment the clause entered the
    database (0 for clauses of the input formula). ``lbd`` is the literal block
    distance recorded for learnt clauses, ``None`` for originals.
    """

    lits: tuple[int, ...]
    timestamp: int = 0
    lbd: int | None = None

    def __len__(self) -> int:
        return len(self.lits)

    def variables(self) -> tuple[int, ...]:
        """Distinct variables of the clause, sorted ascending."""
        return tuple(sorted({lit_var(l) for l in self.lits}))


@dataclass
class Formula:
    """A CNF formula: a variable count and a clause list (originals have timestamp 0)."""

    num_vars: int
    clauses: list[Clause] = field(default_factory=list)

    @property
    def has_empty_clause(self) -> bool:
        return any(len(c) == 0 for c in self.clauses)

    def check(self) -> None:
        """Raise ValueError if any clause mentions an out-of-range or repeated variable."""
        for c in self.clauses:
            vs = [lit_var(l) for l in c.lits]
            if any(v < 1 or v > self.num_vars for v in vs):
                raise ValueError(f"clause {c.lits} mentions a variable above {self.num_vars}")
            if len(set(vs)) != len(vs):
                raise ValueError(f"clause {c.lits} repeats a variable")


def normalize_lits(lits) -> tuple[int, ...] | None:
    """Drop duplicate literals (keeping first-seen order); return None for tautologies."""
    seen: set[int] = set()
    out: list[int] = []
    for l in lits:
        if l in seen:
            continue
        if -l in seen:
            return None
        seen.add(l)
        out.append(l)
    return tuple(out)


def parse_dimacs(source: str | bytes) -> Formula:
    """Parse DIMACS CNF text into a normalized Formula.

    Tolerates a clause count that disagrees with the header (a warning is
    logged, as competition files are occasionally inconsistent). Raises
    DimacsError on a missing/garbled header, non-integer tokens, literals
    above the declared variable count, or an unterminated final clause.
    """
    if isinstance(source, bytes):
        source = source.decode("ascii", errors="replace")
    num_vars: int | None = None
    declared = 0
    pending: list[int] = []
    clauses: list[Clause] = []
    dropped = 0
    for lineno, raw in enumerate(source.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            if num_vars is not None:
                raise DimacsError(f"line {lineno}: duplicate 'p cnf' header")
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"line {lineno}: bad header {line!r}")
            try:
                num_vars, declared = int(parts[2]), int(parts[3])
            except ValueError as exc:
                raise DimacsError(f"line {lineno}: non-integer header field") from exc
            if num_vars < 0 or declared < 0:
                raise DimacsError(f"line {lineno}: negative header field")
            continue
        if num_vars is None:
            raise DimacsError(f"line {lineno}: clause data before 'p cnf' header")
        for tok in line.split():
            try:
                l = int(tok)
            except ValueError as exc:
                raise DimacsError(f"line {lineno}: non-integer token {tok!r}") from exc
            if l == 0:
                norm = normalize_lits(pending)
                if norm is None:
                    dropped += 1
                else:
                    clauses.append(Clause(norm))
                pending = []
            else:
                if lit_var(l) > num_vars:
                    raise DimacsError(
                        f"line {lineno}: literal {l} exceeds declared {num_vars} variables"
                    )
                pending.append(l)
    if num_vars is None:
        raise DimacsError("missing 'p cnf' header")
    if pending:
        raise DimacsError("unterminated final clause (missing trailing 0)")
    found = len(clauses) + dropped
    if declared != found:
        log.warning("header declares %d clauses but input has %d", declared, found)
    if dropped:
        log.debug("dropped %d tautological clause(s)", dropped)
    return Formula(num_vars, clauses)


def parse_dimacs_file(path: str | Path) -> Formula:
    return parse_dimacs(Path(path).read_text())


def write_dimacs(formula: Formula) -> str:
    """Render a Formula as DIMACS CNF text; round-trips through parse_dimacs."""
    lines = [f"p cnf {formula.num_vars} {len(formula.clauses)}"]
    for c in formula.clauses:
        lines.append(" ".join(str(l) for l in c.lits) + " 0")
    return "\n".join(lines) + "\n"


def write_dimacs_file(formula: Formula, path: str | Path) -> None:
    Path(path).write_text(write_dimacs(formula))
