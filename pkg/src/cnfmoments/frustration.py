"""The frustrated-clause count u(x), its multilinear polynomial and moments.

u(x) counts the clauses falsified by assignment x.  Over x in {-1,+1}^n,

    u(x) = sum_j 2^-k_j prod_s (1 - f_js x_s)
         = C - sum lambda_s x_s + sum mu_st x_s x_t - sum nu_rst x_r x_s x_t

(the second line only for clause widths <= 3).  Under the uniform measure
the monomials are orthonormal, so E(u) = C and, for widths <= 3,
Var(u) = sum lambda^2 + sum mu^2 + sum nu^2.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from ._numeric import fraction_str
from .cnf import CnfFormula, check_assignment


class UnsupportedWidthError(ValueError):
    pass


@dataclass(frozen=True)
class FrustrationPolynomial:
    """Coefficients of u(x); zero entries are omitted from the maps."""

    n: int
    constant: Fraction
    linear: dict[int, Fraction]
    quadratic: dict[tuple[int, int], Fraction]
    cubic: dict[tuple[int, int, int], Fraction]

    def lam(self, s: int) -> Fraction:
        return self.linear.get(s, Fraction(0))

    def mu(self, s: int, t: int) -> Fraction:
        return self.quadratic.get(tuple(sorted((s, t))), Fraction(0))

    def nu(self, r: int, s: int, t: int) -> Fraction:
        return self.cubic.get(tuple(sorted((r, s, t))), Fraction(0))

    def variance(self) -> Fraction:
        """Sum of squared non-constant coefficients."""
        return (
            sum((c * c for c in self.linear.values()), Fraction(0))
            + sum((c * c for c in self.quadratic.values()), Fraction(0))
            + sum((c * c for c in self.cubic.values()), Fraction(0))
        )


@dataclass(frozen=True)
class Moments:
    """First two moments of u under uniform assignments.

    Fields are Fractions in exact mode and floats in float mode.
    ``beta = E(u^2)/E(u)^2`` is None when E(u) = 0.
    """

    mean: Fraction | float
    second_moment: Fraction | float
    variance: Fraction | float
    beta: Fraction | float | None

    @classmethod
    def from_raw(cls, mean, second_moment) -> "Moments":
        variance = second_moment - mean * mean
        beta = second_moment / (mean * mean) if mean else None
        return cls(mean, second_moment, variance, beta)

    @property
    def exact(self) -> bool:
        return isinstance(self.mean, Fraction)

    def to_json(self) -> dict:
        def enc(v):
            if v is None:
                return None
            if isinstance(v, Fraction):
                return {"num": str(v.numerator), "den": str(v.denominator), "str": fraction_str(v)}
            return {"float": v}

        return {k: enc(getattr(self, k)) for k in ("mean", "second_moment", "variance", "beta")}


def eval_u_direct(f: CnfFormula, x: Sequence[int]) -> int:
    """Number of clauses with every literal false under ``x``."""
    arr = check_assignment(f, x)
    return sum(1 for c in f.clauses if all(arr[lit.var - 1] == -lit.sign for lit in c.literals))


def poly_coefficients(f: CnfFormula) -> FrustrationPolynomial:
    constant = Fraction(0)
    linear: dict = defaultdict(Fraction)
    quadratic: dict = defaultdict(Fraction)
    cubic: dict = defaultdict(Fraction)
    for j, c in enumerate(f.clauses, start=1):
        if c.width > 3:
            raise UnsupportedWidthError(
                f"clause {j} {c.to_ints()} has width {c.width}; the polynomial form needs width <= 3"
            )
        w = Fraction(1, 2**c.width)
        constant += w
        lits = c.literals  # sorted by var, so tuple keys come out sorted
        for a in lits:
            linear[a.var] += w * a.sign
        for a, b in combinations(lits, 2):
            quadratic[(a.var, b.var)] += w * a.sign * b.sign
        for a, b, d in combinations(lits, 3):
            cubic[(a.var, b.var, d.var)] += w * a.sign * b.sign * d.sign

    def nonzero(d):
        return {k: v for k, v in sorted(d.items()) if v}

    return FrustrationPolynomial(f.n, constant, nonzero(linear), nonzero(quadratic), nonzero(cubic))


def eval_u_poly(p: FrustrationPolynomial, x: Sequence[int]) -> Fraction:
    if len(x) != p.n:
        raise ValueError(f"assignment has length {len(x)}, polynomial has n={p.n}")
    total = p.constant
    total -= sum((c * x[s - 1] for s, c in p.linear.items()), Fraction(0))
    total += sum((c * x[s - 1] * x[t - 1] for (s, t), c in p.quadratic.items()), Fraction(0))
    total -= sum((c * x[r - 1] * x[s - 1] * x[t - 1] for (r, s, t), c in p.cubic.items()), Fraction(0))
    return total


def _pair_weight_histogram(f: CnfFormula) -> dict[int, int]:
    """Count ordered clause pairs (i, j) that can be falsified together,
    keyed by the number of distinct variables they jointly fix."""
    hist: dict[int, int] = defaultdict(int)
    signed = [{lit.var: lit.sign for lit in c.literals} for c in f.clauses]
    for i, ci in enumerate(signed):
        hist[len(ci)] += 1  # diagonal term
        for cj in signed[i + 1 :]:
            union = len(ci)
            for var, sign in cj.items():
                other = ci.get(var)
                if other is None:
                    union += 1
                elif other != sign:
                    break
            else:
                hist[union] += 2
    return hist


def moments(f: CnfFormula, exact: bool = True) -> Moments:
    """E(u), E(u^2) and Var(u) for any clause width.

    E(u^2) = sum over ordered clause pairs of the probability that both
    are falsified: 0 if they clash on a variable, else 2^-(#variables in
    their union).  Exact rationals by default, floats with ``exact=False``.
    """
    mean_hist: dict[int, int] = defaultdict(int)
    for c in f.clauses:
        mean_hist[c.width] += 1
    pair_hist = _pair_weight_histogram(f)
    if exact:
        mean = sum((Fraction(cnt, 2**w) for w, cnt in mean_hist.items()), Fraction(0))
        second = sum((Fraction(cnt, 2**w) for w, cnt in pair_hist.items()), Fraction(0))
    else:
        mean = float(sum(cnt * 2.0**-w for w, cnt in mean_hist.items()))
        second = float(sum(cnt * 2.0**-w for w, cnt in pair_hist.items()))
    return Moments.from_raw(mean, second)


def variance_closed_form(f: CnfFormula) -> Fraction:
    """Var(u) as the coefficient-square sum (widths <= 3 only)."""
    return poly_coefficients(f).variance()
