"""Normalisation to slim-SAT: clause widths in {2, 3}, every variable
occurring 2 or 3 times, and each variable occurring negatively exactly once.

Pipeline (each stage preserves satisfiability):

1. unit propagation and pure-literal elimination to a fixpoint;
2. chain splitting of clauses wider than 3 with fresh variables;
3. replacing variables read more than 3 times by copies tied together by a
   cycle of 2-clauses (copy_i -> copy_{i+1}), one original occurrence each;
4. flipping every variable with more negative than positive occurrences;
5. renumbering the surviving variables to 1..n', originals first.

Stages 3 and 4 and forced unit assignments keep the model count.  Pure
literal elimination, splitting, and dropping variables that no longer occur
do not, and clear ``count_preserving``.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field

from .cnf import Clause, CnfFormula

SAT = "SAT"
UNSAT = "UNSAT"


class SlimError(ValueError):
    pass


@dataclass(frozen=True)
class SlimStats:
    n: int
    m: int
    N: int
    m2: int
    m3: int
    n2: int
    n3: int
    neg_literals: int

    def relations_hold(self) -> bool:
        return (
            self.m2 == 3 * self.m - self.N
            and self.m3 == self.N - 2 * self.m
            and self.n2 == 3 * self.n - self.N
            and self.n3 == self.N - 2 * self.n
            and 2 * self.n <= 3 * self.m  # (2/3)n <= m <= (3/2)n
            and 2 * self.m <= 3 * self.n
            and min(self.m2, self.m3, self.n2, self.n3) >= 0
        )


@dataclass(frozen=True)
class SlimResult:
    formula: CnfFormula
    log: dict
    count_preserving: bool
    verdict: str | None = None  # SAT / UNSAT when propagation already decides


def _occurrences(clauses) -> tuple[Counter, Counter]:
    pos, neg = Counter(), Counter()
    for c in clauses:
        for lit in c:
            (pos if lit > 0 else neg)[abs(lit)] += 1
    return pos, neg


def is_slim(f: CnfFormula) -> bool:
    if any(c.width not in (2, 3) for c in f.clauses):
        return False
    pos, neg = _occurrences(f.to_int_clauses())
    return all(pos[v] + neg[v] in (2, 3) for v in range(1, f.n + 1))


def is_canonical(f: CnfFormula) -> bool:
    """Slim, and every variable has exactly one negative occurrence."""
    if not is_slim(f):
        return False
    pos, neg = _occurrences(f.to_int_clauses())
    return all(neg[v] == 1 for v in range(1, f.n + 1))


def slim_stats(f: CnfFormula) -> SlimStats:
    if not is_slim(f):
        raise SlimError("formula is not slim: widths and occurrence counts must be 2 or 3")
    pos, neg = _occurrences(f.to_int_clauses())
    widths = Counter(f.widths)
    occ = Counter(pos[v] + neg[v] for v in range(1, f.n + 1))
    stats = SlimStats(
        n=f.n, m=f.m, N=sum(f.widths), m2=widths[2], m3=widths[3], n2=occ[2], n3=occ[3],
        neg_literals=sum(neg.values()),
    )
    if not stats.relations_hold():
        raise SlimError(f"structural relations violated: {stats}")
    return stats


def _simplify(clauses: list[list[int]], log: dict) -> list[list[int]] | None:
    """Unit propagation + pure literals to fixpoint.  None means UNSAT."""
    while True:
        if any(not c for c in clauses):
            return None
        units = {c[0] for c in clauses if len(c) == 1}
        if units:
            if any(-u in units for u in units):
                return None
            for u in sorted(units, key=abs):
                log["units"][abs(u)] = u > 0
            clauses = [[l for l in c if -l not in units] for c in clauses if not units.intersection(c)]
            continue
        pos, neg = _occurrences(clauses)
        pure = {v for v in pos if v not in neg} | {-v for v in neg if v not in pos}
        if not pure:
            return clauses
        for p in sorted(pure, key=abs):
            log["pure"][abs(p)] = p > 0
        clauses = [c for c in clauses if not pure.intersection(c)]


def normalize(f: CnfFormula) -> SlimResult:
    log: dict = {"units": {}, "pure": {}, "dropped": [], "splits": [], "copies": {}, "flipped": [],
                 "var_map": {}}
    clauses = _simplify(f.to_int_clauses(), log)
    if clauses is None:
        log["verdict"] = UNSAT
        return SlimResult(CnfFormula(0, (Clause(()),)), _jsonable(log), False, UNSAT)
    if not clauses:
        log["verdict"] = SAT
        dropped = [v for v in range(1, f.n + 1) if v not in log["units"]]
        log["dropped"] = dropped
        return SlimResult(CnfFormula(0, ()), _jsonable(log), not dropped and not log["pure"], SAT)

    present = {abs(l) for c in clauses for l in c}
    log["dropped"] = [v for v in range(1, f.n + 1) if v not in present and v not in log["units"]
                      and v not in log["pure"]]
    next_var = f.n + 1
    origin: dict[int, str] = {v: f"x{v}" for v in sorted(present)}

    # width > 3: (l1 l2 y1)(-y1 l3 y2)...(-y_{k-3} l_{k-1} l_k)
    split: list[list[int]] = []
    for j, c in enumerate(clauses):
        if len(c) <= 3:
            split.append(c)
            continue
        fresh = list(range(next_var, next_var + len(c) - 3))
        next_var += len(fresh)
        for y in fresh:
            origin[y] = f"split{j}"
        split.append([c[0], c[1], fresh[0]])
        for i in range(1, len(fresh)):
            split.append([-fresh[i - 1], c[i + 1], fresh[i]])
        split.append([-fresh[-1], c[-2], c[-1]])
        log["splits"].append({"clause": c, "fresh": fresh})
    clauses = split

    # read > 3: one copy per occurrence, linked in an implication cycle
    pos, neg = _occurrences(clauses)
    heavy = sorted(v for v in set(pos) | set(neg) if pos[v] + neg[v] > 3)
    for v in heavy:
        copies = [v]
        rewritten = []
        seen = 0
        for c in clauses:
            new_c = []
            for l in c:
                if abs(l) == v:
                    if seen:
                        copies.append(next_var)
                        origin[next_var] = f"copy{len(copies) - 1}:x{v}"
                        next_var += 1
                    seen += 1
                    new_c.append(copies[-1] if l > 0 else -copies[-1])
                else:
                    new_c.append(l)
            rewritten.append(new_c)
        t = len(copies)
        rewritten.extend([-copies[i], copies[(i + 1) % t]] for i in range(t))
        clauses = rewritten
        log["copies"][v] = copies

    # canonical polarity
    pos, neg = _occurrences(clauses)
    flips = {v for v in set(pos) | set(neg) if pos[v] < neg[v]}
    clauses = [[-l if abs(l) in flips else l for l in c] for c in clauses]

    used = sorted({abs(l) for c in clauses for l in c})
    renumber = {old: new for new, old in enumerate(used, start=1)}
    out = CnfFormula.from_clauses(
        len(used), [[renumber[abs(l)] * (1 if l > 0 else -1) for l in c] for c in clauses])
    log["flipped"] = sorted(renumber[v] for v in flips)
    log["var_map"] = {renumber[v]: origin[v] for v in used}
    preserving = not (log["pure"] or log["splits"] or log["dropped"])
    return SlimResult(out, _jsonable(log), preserving)


def _jsonable(log: dict) -> dict:
    out = {}
    for k, v in log.items():
        if isinstance(v, dict):
            out[k] = {str(key): val for key, val in v.items()}
        else:
            out[k] = v
    return out
