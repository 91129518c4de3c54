"""CNF data model, DIMACS/JSON I/O and the +-1 adjacency view.

A formula over ``n`` variables is a tuple of clauses; each clause is a tuple
of :class:`Literal` sorted by variable index.  The adjacency matrix has
entry ``f[j, s-1] = +1`` if variable ``s`` occurs positively in clause ``j``,
``-1`` if negated and ``0`` otherwise.

Assignments are sequences over ``{-1, +1}`` with ``x[s-1] = 2*T(a_s) - 1``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

import numpy as np


class DimacsError(ValueError):
    """Raised for malformed DIMACS or JSON formula input."""


class Literal(NamedTuple):
    var: int
    sign: int  # +1 or -1

    @classmethod
    def from_int(cls, lit: int) -> "Literal":
        if lit == 0:
            raise ValueError("0 is not a literal")
        return cls(abs(lit), 1 if lit > 0 else -1)

    def to_int(self) -> int:
        return self.var * self.sign

    def __repr__(self) -> str:
        return f"{'' if self.sign > 0 else '~'}a{self.var}"


@dataclass(frozen=True)
class Clause:
    literals: tuple[Literal, ...]

    def __post_init__(self):
        seen = set()
        for lit in self.literals:
            if lit.var < 1 or lit.sign not in (1, -1):
                raise ValueError(f"invalid literal {lit!r}")
            if lit.var in seen:
                raise ValueError(f"variable {lit.var} repeated in clause")
            seen.add(lit.var)
        object.__setattr__(self, "literals", tuple(sorted(self.literals)))

    @classmethod
    def from_ints(cls, lits: Iterable[int]) -> "Clause":
        return cls(tuple(Literal.from_int(x) for x in lits))

    @property
    def width(self) -> int:
        return len(self.literals)

    def to_ints(self) -> list[int]:
        return [lit.to_int() for lit in self.literals]

    def sign_of(self, var: int) -> int:
        for lit in self.literals:
            if lit.var == var:
                return lit.sign
        return 0

    def __len__(self) -> int:
        return len(self.literals)

    def __iter__(self):
        return iter(self.literals)


@dataclass(frozen=True)
class CnfFormula:
    """Immutable CNF formula.

    ``warnings`` collects parse-time notes (removed tautologies, header
    mismatches); ``raw_m`` is the clause count before tautologies were
    dropped.  Variables that never occur still count towards ``n``.
    """

    n: int
    clauses: tuple[Clause, ...]
    warnings: tuple[str, ...] = field(default=(), compare=False)
    raw_m: int | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("negative variable count")
        clauses = tuple(c if isinstance(c, Clause) else Clause.from_ints(c) for c in self.clauses)
        for j, c in enumerate(clauses):
            for lit in c.literals:
                if lit.var > self.n:
                    raise ValueError(f"clause {j + 1}: variable {lit.var} exceeds n={self.n}")
        object.__setattr__(self, "clauses", clauses)
        if self.raw_m is None:
            object.__setattr__(self, "raw_m", len(clauses))

    @classmethod
    def from_clauses(cls, n: int, clauses: Iterable[Iterable[int]]) -> "CnfFormula":
        """Build from signed-integer clauses, with the same cleanup as the parser."""
        raw = [list(c) for c in clauses]
        kept, warnings = _clean_clauses(raw)
        return cls(n, tuple(kept), tuple(warnings), raw_m=len(raw))

    @property
    def m(self) -> int:
        return len(self.clauses)

    @property
    def widths(self) -> tuple[int, ...]:
        return tuple(c.width for c in self.clauses)

    @property
    def max_width(self) -> int:
        return max(self.widths, default=0)

    @property
    def has_empty_clause(self) -> bool:
        return any(c.width == 0 for c in self.clauses)

    @cached_property
    def adjacency(self) -> np.ndarray:
        """m x n int8 matrix of clause/variable signs."""
        mat = np.zeros((self.m, self.n), dtype=np.int8)
        for j, c in enumerate(self.clauses):
            for lit in c.literals:
                mat[j, lit.var - 1] = lit.sign
        mat.setflags(write=False)
        return mat

    @classmethod
    def from_adjacency(cls, rows: Sequence[Sequence[int]]) -> "CnfFormula":
        """Build from rows of +1/-1/0 entries (one row per clause)."""
        rows = [list(r) for r in rows]
        if not rows:
            raise ValueError("need at least one row to infer n; use CnfFormula(n, ()) for empty formulas")
        n = len(rows[0])
        if any(len(r) != n for r in rows):
            raise ValueError("ragged adjacency rows")
        clauses = []
        for r in rows:
            if any(v not in (-1, 0, 1) for v in r):
                raise ValueError(f"adjacency entries must be -1, 0 or +1: {r}")
            clauses.append(Clause.from_ints((s + 1) * v for s, v in enumerate(r) if v))
        return cls(n, tuple(clauses))

    def to_int_clauses(self) -> list[list[int]]:
        return [c.to_ints() for c in self.clauses]

    def conjoin(self, *clauses: Iterable[int]) -> "CnfFormula":
        """Return this formula with extra clauses appended."""
        extra, warnings = _clean_clauses(clauses)
        return CnfFormula(self.n, self.clauses + tuple(extra), self.warnings + tuple(warnings))

    def clause_set(self) -> frozenset:
        """Multiset-free view used for round-trip comparisons."""
        return frozenset(c.literals for c in self.clauses)

    def to_json(self) -> dict:
        return {"n": self.n, "m": self.m, "clauses": self.to_int_clauses()}

    @classmethod
    def from_json(cls, data: dict | str) -> "CnfFormula":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            n = int(data["n"])
            clauses = [[int(x) for x in c] for c in data["clauses"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise DimacsError(f"bad JSON formula: {exc}") from exc
        for c in clauses:
            for lit in c:
                if lit == 0 or abs(lit) > n:
                    raise DimacsError(f"literal {lit} out of range for n={n}")
        if "m" in data and int(data["m"]) != len(clauses):
            raise DimacsError(f"header m={data['m']} but {len(clauses)} clauses given")
        return cls.from_clauses(n, clauses)

    def __str__(self) -> str:
        body = " & ".join("(" + " | ".join(map(repr, c.literals)) + ")" for c in self.clauses)
        return body or "<empty>"


def _clean_clauses(clauses: Iterable[Iterable[int]]) -> tuple[list[Clause], list[str]]:
    kept, warnings = [], []
    for idx, raw in enumerate(clauses, start=1):
        lits = set(int(x) for x in raw)
        if 0 in lits:
            raise DimacsError(f"clause {idx}: 0 is not a literal")
        if any(-x in lits for x in lits):
            warnings.append(f"clause {idx} is a tautology and was removed")
            continue
        kept.append(Clause.from_ints(lits))
    return kept, warnings


_HEADER = re.compile(r"^p\s+cnf\s+(\d+)\s+(\d+)\s*$")


def parse_dimacs(text: str, strict: bool = True) -> CnfFormula:
    """Parse DIMACS CNF text.

    Duplicate literals inside a clause are merged; tautological clauses are
    dropped with a warning.  A mismatch between the header clause count and
    the clauses actually present raises unless ``strict=False``, in which
    case it is recorded as a warning.
    """
    n = m_header = None
    raw_clauses: list[list[int]] = []
    current: list[int] = []
    warnings: list[str] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped[0] == "c":
            continue
        if stripped[0] == "%":
            break  # SATLIB end marker
        if stripped[0] == "p":
            if n is not None:
                raise DimacsError(f"line {lineno}: second header")
            match = _HEADER.match(stripped)
            if not match:
                raise DimacsError(f"line {lineno}: malformed header {stripped!r}")
            n, m_header = int(match.group(1)), int(match.group(2))
            continue
        if n is None:
            raise DimacsError(f"line {lineno}: clause data before 'p cnf' header")
        for tok in stripped.split():
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsError(f"line {lineno}: bad token {tok!r}") from None
            if lit == 0:
                raw_clauses.append(current)
                current = []
            elif abs(lit) > n:
                raise DimacsError(f"line {lineno}: literal {lit} out of range for n={n}")
            else:
                current.append(lit)
    if n is None:
        raise DimacsError("missing 'p cnf n m' header")
    if current:
        raw_clauses.append(current)
        warnings.append("last clause was not terminated by 0")
    if len(raw_clauses) != m_header:
        msg = f"header declares {m_header} clauses, found {len(raw_clauses)}"
        if strict:
            raise DimacsError(msg)
        warnings.append(msg)
    kept, cleanup = _clean_clauses(raw_clauses)
    warnings.extend(cleanup)
    if any(not c for c in raw_clauses):
        warnings.append("empty clause present: formula is unsatisfiable")
    return CnfFormula(n, tuple(kept), tuple(warnings), raw_m=len(raw_clauses))


def emit_dimacs(f: CnfFormula, comments: Sequence[str] = ()) -> str:
    lines = [f"c {c}" for c in comments]
    lines.append(f"p cnf {f.n} {f.m}")
    lines.extend(" ".join(map(str, c.to_ints() + [0])) for c in f.clauses)
    return "\n".join(lines) + "\n"


def read_formula(path) -> CnfFormula:
    """Load a ``.cnf`` (DIMACS) or ``.json`` formula file."""
    with open(path) as fh:
        text = fh.read()
    if str(path).endswith(".json"):
        try:
            return CnfFormula.from_json(text)
        except json.JSONDecodeError as exc:
            raise DimacsError(f"bad JSON: {exc}") from exc
    return parse_dimacs(text)


def flip_variable(f: CnfFormula, s: int) -> CnfFormula:
    """Negate every occurrence of variable ``s``; preserves the model count."""
    if not 1 <= s <= f.n:
        raise IndexError(f"variable {s} out of range 1..{f.n}")
    flipped = tuple(
        Clause(tuple(Literal(l.var, -l.sign) if l.var == s else l for l in c.literals)) for c in f.clauses
    )
    return CnfFormula(f.n, flipped, f.warnings, f.raw_m)


def check_assignment(f: CnfFormula, x: Sequence[int]) -> np.ndarray:
    arr = np.asarray(x, dtype=np.int8)
    if arr.shape != (f.n,):
        raise ValueError(f"assignment has length {arr.size}, formula has n={f.n}")
    if not np.all(np.abs(arr) == 1):
        raise ValueError("assignment entries must be -1 or +1")
    return arr


def assignment_from_bits(bits: str) -> tuple[int, ...]:
    """'0100' -> (-1, +1, -1, -1); leftmost character is variable 1."""
    if set(bits) - {"0", "1"}:
        raise ValueError(f"not a bit string: {bits!r}")
    return tuple(1 if b == "1" else -1 for b in bits)


def assignment_to_bits(x: Sequence[int]) -> str:
    return "".join("1" if v > 0 else "0" for v in x)
