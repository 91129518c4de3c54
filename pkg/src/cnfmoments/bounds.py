"""Upper bounds on v_0 = prob(u = 0) from the moments of u.

Bounds fall into two groups.  *Sound* bounds are proven inequalities and
may be used to cap the number of solutions or certify UNSAT.  *Estimates*
are large-m expansions with correction terms dropped; they are reported
but never certify anything.

Everything is exact when the moments are Fractions.  Float moments are
accepted and propagate floats.

Notation: E = E(u), E2 = E(u^2), beta = E2/E^2, and for a cutoff a > 0,
M = largest integer strictly below a.  Several functions take the squared
cutoff ``t = a^2`` so that irrational optima stay exactly representable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from ._numeric import Number, as_fraction, ceil_decimal, clamp_unit, fraction_str, strict_floor, strict_floor_sqrt
from .cnf import CnfFormula
from .frustration import Moments
from .frustration import moments as compute_moments
from .oracle import UDistribution, delta_leq

SAT_POSSIBLE = "SAT-possible"
UNSAT_CERTIFIED = "UNSAT-certified"


class RegimeError(ValueError):
    """Inputs outside the range where a bound is defined."""


def _like(mom: Moments, x: Number):
    """Coerce ``x`` to the numeric mode of ``mom``."""
    return as_fraction(x) if mom.exact else float(x)


def _ratio(num, den):
    return num / den if isinstance(num, float) or isinstance(den, float) else Fraction(num) / Fraction(den)


# ---------------------------------------------------------------- basic ladder


def basic_bound(mom: Moments):
    """v_0 <= Var/(Var + E^2) = 1 - 1/beta.  Returns 1 for the empty formula."""
    if not mom.mean:
        return mom.mean * 0 + 1
    return _ratio(mom.variance, mom.variance + mom.mean * mom.mean)


def cantelli_vk(mom: Moments, k: int):
    """v_k <= Var/(Var + (E - k)^2); k = 0 gives the basic bound."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    gap = mom.mean - k
    den = mom.variance + gap * gap
    if not den:
        return mom.mean * 0 + 1
    value, _ = clamp_unit(_ratio(mom.variance, den))
    return value


def cantelli_tail(mom: Moments, k: int):
    """prob(u >= k) <= Var/(Var + (k - E)^2), valid for k > E."""
    if not k > mom.mean:
        raise RegimeError(f"tail bound needs k > E(u) = {mom.mean}, got k={k}")
    return cantelli_vk(mom, k)


def sharpened_bound(mom: Moments, delta: Number, a: Number):
    """v_0 <= 1 - D - E^2/(E2 + a^2 D) with D the low-frustration mass below a.

    ``delta`` must be the true (or an under-estimated) value of
    sum_{1<=k<a} v_k (1 - k^2/a^2).  Clamped to [0, 1].
    """
    delta, a = _like(mom, delta), _like(mom, a)
    if not 0 <= delta < 1:
        raise ValueError(f"delta must lie in [0, 1), got {delta}")
    if a <= 0:
        raise ValueError("cutoff must be positive")
    if not mom.mean:
        raise RegimeError("E(u) = 0: the sharpened bound is undefined")
    value = 1 - delta - mom.mean * mom.mean / (mom.second_moment + a * a * delta)
    return clamp_unit(value)[0]


# ---------------------------------------------------------------- cutoffs


@dataclass(frozen=True)
class CutoffParams:
    a: Fraction | float
    M: int
    mu: Fraction | float
    beta: Fraction | float


@dataclass(frozen=True)
class MediumCutoff:
    params: CutoffParams
    x_app: Fraction | float
    bound: Fraction | float


def medium_cutoff_params(mom: Moments) -> CutoffParams:
    """Cutoff a = E + Var/E = E2/E, the choice that makes beta*mu = 1."""
    if not mom.mean:
        raise RegimeError("E(u) = 0: no medium cutoff")
    a = _ratio(mom.second_moment, mom.mean)
    return CutoffParams(a=a, M=strict_floor(a), mu=_ratio(mom.mean, a), beta=mom.beta)


def g_function(beta, x):
    """1 - (1/beta)(1 + x^2/(1 + x)); decreasing for x >= 0."""
    if not isinstance(x, float):
        x = Fraction(x)
    return 1 - (1 + x * x / (1 + x)) / beta


def medium_cutoff_bound(mom: Moments, v_le: Number) -> MediumCutoff:
    """Bound at the medium cutoff using only v_le = v_1 + ... + v_M.

    a^2 * Delta >= (a^2 - M^2) v_le, and g is decreasing, so any
    under-estimate of ``v_le`` keeps the result valid.
    """
    params = medium_cutoff_params(mom)
    v_le = _like(mom, v_le)
    if not 0 <= v_le <= 1:
        raise ValueError(f"v_le must be a probability, got {v_le}")
    x_app = (params.a * params.a - params.M * params.M) / mom.second_moment * v_le
    bound = clamp_unit(g_function(params.beta, x_app))[0]
    return MediumCutoff(params, x_app, bound)


class OptimizedCutoff(NamedTuple):
    a_squared: Fraction | float
    f_min: Fraction | float
    valid: bool


def optimized_cutoff_m1(mom: Moments, v1: Number) -> OptimizedCutoff:
    """Stationary point of the cutoff bound inside 1 < a < 2.

    a_min^2 = (E2 - v1)/(E - v1) and
    f_min = 1 - v1 - (E - v1)^2/(E2 - v1).
    ``valid`` is True only when a_min^2 lies in (1, 4).
    """
    v1 = _like(mom, v1)
    if not 0 <= v1 < mom.mean or not mom.second_moment > v1:
        raise RegimeError(f"need 0 <= v1 < E(u) and v1 < E(u^2); got v1={v1}, E(u)={mom.mean}")
    a_sq = (mom.second_moment - v1) / (mom.mean - v1)
    gap = mom.mean - v1
    f_min = clamp_unit(1 - v1 - gap * gap / (mom.second_moment - v1))[0]
    return OptimizedCutoff(a_sq, f_min, 1 < a_sq < 4)


def cs_bound_given_v1(mom: Moments, v1: Number):
    """Cauchy-Schwarz with the indicator of u > 1: v_0 <= 1 - v1 - (E - v1)^2/E2."""
    v1 = _like(mom, v1)
    if not 0 <= v1 <= 1:
        raise ValueError(f"v1 must be a probability, got {v1}")
    if not mom.second_moment:
        return mom.mean * 0 + 1
    gap = mom.mean - v1
    return clamp_unit(1 - v1 - gap * gap / mom.second_moment)[0]


def _prefix_sums(dist: UDistribution) -> tuple[list[int], list[int]]:
    """Integer prefix sums of counts[k] and k^2 counts[k] over k >= 1."""
    s0, s2 = [0], [0]
    for k in range(1, dist.m + 1):
        s0.append(s0[-1] + dist.counts[k])
        s2.append(s2[-1] + k * k * dist.counts[k])
    return s0, s2


def cutoff_value(mom: Moments, dist: UDistribution, a_squared: Number) -> Fraction:
    """Exact cutoff bound f(a) = 1 - D(a) - E^2/(E2 + a^2 D(a)) at a^2 = ``a_squared``."""
    t = as_fraction(a_squared)
    if t <= 0:
        raise ValueError("a^2 must be positive")
    M = min(strict_floor_sqrt(t), dist.m)
    s0 = Fraction(sum(dist.counts[1 : M + 1]), dist.total)
    s2 = Fraction(sum(k * k * dist.counts[k] for k in range(1, M + 1)), dist.total)
    delta = s0 - s2 / t
    E, E2 = as_fraction(mom.mean), as_fraction(mom.second_moment)
    if not E:
        return Fraction(1)
    return 1 - delta - E * E / (E2 + t * delta)


@dataclass(frozen=True)
class ScanResult:
    a_squared: Fraction
    value: Fraction
    source: str  # "grid", "closed-form", "medium", "no-cutoff"

    @property
    def a(self) -> float:
        return math.sqrt(self.a_squared)


def cutoff_scan(mom: Moments, dist: UDistribution, resolution: int = 64) -> ScanResult:
    """Minimise the cutoff bound over a.

    The grid covers a = 1 + j/resolution up to u_max + 1 and is evaluated
    in floating point; the best grid point, the closed-form minimiser of
    the 1 < a < 2 piece (when it lies there), the medium cutoff and a = 1
    (which reproduces the basic bound) are then evaluated exactly and the
    smallest exact value wins.  Every candidate is a valid bound, so the
    float stage only steers the search.
    """
    if not sum(dist.counts):
        raise ValueError("empty distribution")
    if resolution < 1:
        raise ValueError("resolution must be positive")
    E, E2 = as_fraction(mom.mean), as_fraction(mom.second_moment)
    candidates: list[tuple[Fraction, str]] = [(Fraction(1), "no-cutoff")]
    if E:
        candidates.append(((E2 / E) ** 2, "medium"))
        v1 = dist.v(1)
        if 0 < v1 < E and E2 > v1:
            opt = optimized_cutoff_m1(mom, v1)
            if opt.valid:
                candidates.append((as_fraction(opt.a_squared), "closed-form"))
        if dist.u_max >= 1:
            s0, s2 = (np.asarray(s, dtype=float) / dist.total for s in _prefix_sums(dist))
            j = np.arange(1, resolution * dist.u_max + 1)
            a = 1.0 + j / resolution
            t = a * a
            M = np.minimum(np.ceil(a).astype(int) - 1, dist.m)
            delta = s0[M] - s2[M] / t
            f = 1.0 - delta - float(E) ** 2 / (float(E2) + t * delta)
            best = int(np.argmin(f))
            candidates.append((Fraction(resolution + int(j[best]), resolution) ** 2, "grid"))
    best_t, best_val, best_src = None, None, None
    for t, src in candidates:
        val = cutoff_value(mom, dist, t)
        if best_val is None or val < best_val:
            best_t, best_val, best_src = t, val, src
    return ScanResult(best_t, clamp_unit(best_val)[0], best_src)


# ---------------------------------------------------------------- estimates


class AsymptoticEstimates(NamedTuple):
    ratio: Fraction | float
    minus_v1: Fraction | float | None
    minus_tail: Fraction | float | None


def asymptotic_bounds(mom: Moments, v1: Number | None = None, v_le: Number | None = None,
                      alpha: Number | None = None) -> AsymptoticEstimates:
    """Large-m estimates r, r - v1 and r - 4*alpha*v_le/E^2 with r = Var/E^2.

    Unclamped; these drop O(1/n^2) terms and are not bounds.
    ``alpha`` is (a - M)^2 for the cutoff in use.
    """
    if not mom.mean:
        raise RegimeError("E(u) = 0: estimates undefined")
    e2 = mom.mean * mom.mean
    r = _ratio(mom.variance, e2)
    minus_v1 = r - _like(mom, v1) if v1 is not None else None
    minus_tail = None
    if v_le is not None and alpha is not None:
        minus_tail = r - 4 * _like(mom, alpha) * _like(mom, v_le) / e2
    return AsymptoticEstimates(r, minus_v1, minus_tail)


def cutoff_alpha(a: Number) -> Fraction:
    a = as_fraction(a)
    return (a - strict_floor(a)) ** 2


# ---------------------------------------------------------------- reporting


@dataclass(frozen=True)
class BoundEntry:
    name: str
    value: Fraction | float | None
    sound: bool
    target: str = "v0"
    inputs: str = "moments"  # "moments" or "distribution"
    conditional: bool = False
    clamped: bool = False
    params: dict = field(default_factory=dict)
    error: str | None = None

    @classmethod
    def make(cls, name: str, raw, **kw) -> "BoundEntry":
        value, clamped = clamp_unit(raw)
        return cls(name, value, clamped=clamped, **kw)

    @property
    def certifying(self) -> bool:
        """Usable for solution caps and UNSAT certification."""
        return self.sound and self.target == "v0" and not self.conditional and self.error is None

    def to_json(self) -> dict:
        out = {"name": self.name, "sound": self.sound, "conditional": self.conditional,
               "target": self.target, "inputs": self.inputs, "clamped": self.clamped,
               "params": {k: _json_num(v) for k, v in self.params.items()}}
        if self.error is not None:
            out["error"] = self.error
        if self.value is not None:
            q = as_fraction(self.value)
            out.update(value_num=str(q.numerator), value_den=str(q.denominator),
                       value=fraction_str(q), value_decimal=ceil_decimal(q))
        return out


def _json_num(v):
    if isinstance(v, Fraction):
        return fraction_str(v)
    return v


@dataclass(frozen=True)
class BoundReport:
    n: int
    m: int
    entries: tuple[BoundEntry, ...]
    max_solutions: dict[str, int]
    verdict: str
    exact_count: int | None = None

    def entry(self, name: str) -> BoundEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def best(self) -> BoundEntry:
        return min((e for e in self.entries if e.certifying), key=lambda e: e.value)

    def to_json(self) -> dict:
        out = {"n": self.n, "m": self.m, "verdict": self.verdict, "max_solutions": self.max_solutions,
               "bounds": [e.to_json() for e in self.entries]}
        if self.exact_count is not None:
            out["exact_count"] = self.exact_count
        return out


def solution_cap(value: Number, n: int) -> int:
    """floor(2^n * value), computed exactly."""
    q = as_fraction(value)
    return (q.numerator << n) // q.denominator


def sat_verdict(entries: Sequence[BoundEntry], n: int, m: int | None = None,
                exact_count: int | None = None) -> BoundReport:
    """Solution caps per certifying bound and the overall verdict.

    UNSAT is certified iff the smallest certifying bound is below 2^-n,
    i.e. its cap is 0.  Estimates and conditional entries never count.
    """
    usable = [e for e in entries if e.certifying]
    if not usable:
        raise ValueError("no sound bound on v0 among the entries")
    caps = {e.name: solution_cap(e.value, n) for e in usable}
    verdict = UNSAT_CERTIFIED if min(caps.values()) == 0 else SAT_POSSIBLE
    return BoundReport(n, m if m is not None else -1, tuple(entries), caps, verdict, exact_count)


def bound_report(f: CnfFormula, dist: UDistribution | None = None, *, exact: bool = True,
                 v1: Number | None = None, v_le: Number | None = None) -> BoundReport:
    """Full bound ladder for formula ``f``.

    Without ``dist`` only moment-based quantities are computed, plus any
    bounds that can be built from user-supplied ``v1`` / ``v_le`` (marked
    conditional).  With an exact distribution every bound is evaluated with
    true inputs and the exact model count is attached.
    """
    mom = compute_moments(f, exact=exact)
    entries: list[BoundEntry] = [BoundEntry.make("basic", basic_bound(mom), sound=True)]
    entries.append(BoundEntry.make("cantelli_v1", cantelli_vk(mom, 1), sound=True, target="v1",
                                   params={"k": 1}))
    k_tail = math.floor(mom.mean) + 1
    if k_tail <= f.m:
        entries.append(BoundEntry.make(f"cantelli_tail_{k_tail}", cantelli_tail(mom, k_tail), sound=True,
                                       target=f"P(u>={k_tail})", params={"k": k_tail}))

    conditional = dist is None
    if dist is not None:
        v1 = dist.v(1)
    if not mom.mean:
        entries.append(BoundEntry("estimate_ratio", None, sound=False, error="E(u) = 0"))
        return sat_verdict(entries, f.n, f.m, dist.counts[0] if dist is not None else None)

    params = medium_cutoff_params(mom)
    if dist is not None:
        v_le = dist.v_le(params.M)
        delta = delta_leq(dist, params.a) if mom.exact else float(delta_leq(dist, params.a))
        entries.append(BoundEntry.make(
            "sharpened_medium", sharpened_bound(mom, delta, params.a), sound=True, inputs="distribution",
            params={"a": params.a, "M": params.M, "delta": delta}))

    inputs = "distribution"
    if v_le is not None:
        med = medium_cutoff_bound(mom, v_le)
        entries.append(BoundEntry.make(
            "medium_cutoff", med.bound, sound=True, inputs=inputs, conditional=conditional,
            params={"a": params.a, "M": params.M, "v_le": v_le, "x_app": med.x_app}))
    if v1 is not None:
        try:
            opt = optimized_cutoff_m1(mom, v1)
        except RegimeError as exc:
            entries.append(BoundEntry("optimized_m1", None, sound=False, inputs=inputs, params={"v1": v1},
                                      error=str(exc)))
        else:
            entries.append(BoundEntry.make(
                "optimized_m1", opt.f_min, sound=opt.valid, inputs=inputs, conditional=conditional,
                params={"v1": v1, "a_squared": opt.a_squared, "valid": opt.valid}))
        entries.append(BoundEntry.make("cs_given_v1", cs_bound_given_v1(mom, v1), sound=True, inputs=inputs,
                                       conditional=conditional, params={"v1": v1}))
    if dist is not None and mom.exact:
        scan = cutoff_scan(mom, dist)
        entries.append(BoundEntry.make("cutoff_scan", scan.value, sound=True, inputs=inputs,
                                       params={"a_squared": scan.a_squared, "source": scan.source}))

    alpha = cutoff_alpha(params.a) if mom.exact else (params.a - params.M) ** 2
    est = asymptotic_bounds(mom, v1=v1, v_le=v_le, alpha=alpha)
    entries.append(BoundEntry.make("estimate_ratio", est.ratio, sound=False))
    if est.minus_v1 is not None:
        entries.append(BoundEntry.make("estimate_minus_v1", est.minus_v1, sound=False, inputs=inputs,
                                       conditional=conditional, params={"v1": v1}))
    if est.minus_tail is not None:
        entries.append(BoundEntry.make("estimate_minus_tail", est.minus_tail, sound=False, inputs=inputs,
                                       conditional=conditional,
                                       params={"alpha": alpha, "v_le": v_le, "a": params.a, "M": params.M}))
    return sat_verdict(entries, f.n, f.m, dist.counts[0] if dist is not None else None)
