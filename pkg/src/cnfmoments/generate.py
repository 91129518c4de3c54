"""Reproducible random CNF instances.

Randomness comes from SplitMix64 so that ensembles can be regenerated
bit-for-bit by any implementation:

    state <- (state + 0x9E3779B97F4A7C15) mod 2^64
    z <- state
    z <- ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) mod 2^64
    z <- ((z ^ (z >> 27)) * 0x94D049BB133111EB) mod 2^64
    output z ^ (z >> 31)

``below(b)`` draws outputs until one is < 2^64 - (2^64 mod b) and returns
it mod b.  Per clause the draw order is: width (only if a width range is
given, lo + below(hi - lo + 1)), then k partial Fisher-Yates swaps over
[1..n] (draw below(n - i) for step i), then one sign per chosen variable in
selection order (top output bit 1 -> positive).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .cnf import Clause, CnfFormula, Literal

MASK64 = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            r = self.next()
            if r < limit:
                return r % bound


@dataclass(frozen=True)
class GenSpec:
    n: int
    m: int
    width: int | tuple[int, int]  # fixed k or inclusive (lo, hi)
    seed: int = 0

    def __post_init__(self):
        lo, hi = self.width_range
        if self.n < 0 or self.m < 0:
            raise ValueError("n and m must be nonnegative")
        if not 1 <= lo <= hi:
            raise ValueError(f"bad width {self.width!r}")
        if hi > self.n:
            raise ValueError(f"width {hi} exceeds n={self.n}")

    @property
    def width_range(self) -> tuple[int, int]:
        return (self.width, self.width) if isinstance(self.width, int) else tuple(self.width)


def generate(spec: GenSpec) -> CnfFormula:
    rng = SplitMix64(spec.seed)
    lo, hi = spec.width_range
    clauses = []
    for _ in range(spec.m):
        k = lo if lo == hi else lo + rng.below(hi - lo + 1)
        pool = list(range(1, spec.n + 1))
        for i in range(k):
            j = i + rng.below(spec.n - i)
            pool[i], pool[j] = pool[j], pool[i]
        lits = [Literal(v, 1 if rng.next() >> 63 else -1) for v in pool[:k]]
        clauses.append(Clause(tuple(lits)))
    return CnfFormula(spec.n, tuple(clauses))


def ensemble(count: int, seed: int, n_range: tuple[int, int] = (4, 12),
             m_factor: tuple[int, int] = (1, 3),
             widths=(2, 3, (2, 3))) -> Iterator[GenSpec]:
    """Random specs: n uniform in n_range, m uniform in [lo*n, hi*n],
    width drawn from ``widths``; each instance gets its own derived seed."""
    rng = SplitMix64(seed)
    for _ in range(count):
        n = n_range[0] + rng.below(n_range[1] - n_range[0] + 1)
        m = m_factor[0] * n + rng.below((m_factor[1] - m_factor[0]) * n + 1)
        width = widths[rng.below(len(widths))]
        yield GenSpec(n, m, width, rng.next())
