"""Exact brute-force distribution of u over all 2^n assignments.

Assignment index ``i`` encodes variable ``s`` in bit ``n - s``, so the
binary spelling of ``i`` read left to right is x_1 ... x_n (1 = true).
The space is processed in blocks of at most 2^16 assignments and the
per-block integer histograms are summed, so the result does not depend on
block order.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import numpy as np

from ._numeric import Number, as_fraction, strict_floor
from .cnf import CnfFormula

DEFAULT_CAP = 30
BLOCK_BITS = 16


class OracleCapExceeded(RuntimeError):
    pass


def default_cap() -> int:
    env = os.environ.get("FRUSTRATION_ORACLE_CAP")
    return int(env) if env else DEFAULT_CAP


@dataclass(frozen=True)
class UDistribution:
    n: int
    counts: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))
        if any(c < 0 for c in self.counts):
            raise ValueError("negative count")

    @property
    def m(self) -> int:
        return len(self.counts) - 1

    @property
    def total(self) -> int:
        return 2**self.n

    @property
    def u_max(self) -> int:
        return max((i for i, c in enumerate(self.counts) if c), default=0)

    def v(self, i: int) -> Fraction:
        if 0 <= i < len(self.counts):
            return Fraction(self.counts[i], self.total)
        return Fraction(0)

    def probabilities(self) -> list[Fraction]:
        return [Fraction(c, self.total) for c in self.counts]

    def v_le(self, M: int) -> Fraction:
        """v_1 + ... + v_M."""
        return Fraction(sum(self.counts[1 : M + 1]), self.total)

    def mean(self) -> Fraction:
        return Fraction(sum(i * c for i, c in enumerate(self.counts)), self.total)

    def second_moment(self) -> Fraction:
        return Fraction(sum(i * i * c for i, c in enumerate(self.counts)), self.total)

    def to_json(self) -> dict:
        return {"n": self.n, "counts": list(self.counts)}

    @classmethod
    def from_json(cls, data: dict) -> "UDistribution":
        dist = cls(int(data["n"]), tuple(data["counts"]))
        if sum(dist.counts) != dist.total:
            raise ValueError(f"counts sum to {sum(dist.counts)}, expected 2^{dist.n}")
        return dist


def _block_u(f: CnfFormula, start: int, size: int) -> np.ndarray:
    idx = np.arange(start, start + size, dtype=np.int64)
    u = np.zeros(size, dtype=np.int32)
    for c in f.clauses:
        frustrated = np.ones(size, dtype=bool)
        for lit in c.literals:
            bit = (idx >> (f.n - lit.var)) & 1
            # literal is false when the bit disagrees with its sign
            frustrated &= bit == (0 if lit.sign > 0 else 1)
        u += frustrated
    return u


def _blocks(n: int):
    size = 2 ** min(n, BLOCK_BITS)
    for start in range(0, 2**n, size):
        yield start, size


def _check_cap(f: CnfFormula, cap: int | None):
    cap = default_cap() if cap is None else cap
    if f.n > cap:
        raise OracleCapExceeded(
            f"n={f.n} exceeds the enumeration cap {cap}: would evaluate 2^{f.n} = {2**f.n} assignments"
        )


def enumerate_distribution(f: CnfFormula, cap: int | None = None) -> UDistribution:
    """Histogram of u(x) over every assignment, exact integer counts."""
    _check_cap(f, cap)
    counts = np.zeros(f.m + 1, dtype=np.int64)
    for start, size in _blocks(f.n):
        counts += np.bincount(_block_u(f, start, size), minlength=f.m + 1)
    return UDistribution(f.n, tuple(counts.tolist()))


def iter_solutions(f: CnfFormula, cap: int | None = None) -> Iterator[tuple[int, ...]]:
    """Yield satisfying assignments as +-1 tuples in index order."""
    _check_cap(f, cap)
    shifts = np.arange(f.n - 1, -1, -1, dtype=np.int64)
    for start, size in _blocks(f.n):
        hits = np.nonzero(_block_u(f, start, size) == 0)[0] + start
        for i in hits:
            yield tuple(int(2 * ((i >> s) & 1) - 1) for s in shifts)


def model_count(d: UDistribution) -> int:
    return d.counts[0]


def delta_leq(d: UDistribution, a: Number) -> Fraction:
    """sum_{k=1}^{M} v_k (1 - k^2/a^2) with M the largest integer below a."""
    a = as_fraction(a)
    if a <= 0:
        raise ValueError(f"cutoff must be positive, got {a}")
    top = min(strict_floor(a), d.m)
    a2 = a * a
    return sum((d.v(k) * (1 - Fraction(k * k) / a2) for k in range(1, top + 1)), Fraction(0))


def tail_prob(d: UDistribution, k: int) -> Fraction:
    """prob(u >= k)."""
    if not 0 <= k <= d.m:
        raise ValueError(f"k={k} outside 0..{d.m}")
    return Fraction(sum(d.counts[k:]), d.total)
