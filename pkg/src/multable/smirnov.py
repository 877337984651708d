"""One-sided boundary non-crossing probabilities for uniform order statistics
and the matching constrained ordered-simplex volumes.

P(U_(j) >= c_j for all j) is computed exactly by conditioning on how many
of the m points fall below c_m: points below c_j for j > m are then
automatically few enough, so the sub-problem is the same event for the
points squeezed into [0, c_m).  Writing G(m, s) for the probability with m
points uniform on [0, s],

    G(0, s) = 1,
    G(m, s) = sum_{r < m} C(m, r) (c_m/s)^r ((s - c_m)/s)^(m-r) G(r, c_m),

and the answer is G(n, 1).  The binomial weights are evaluated as stable
binomial pmf values and the tables accumulate in extended precision.

Monte Carlo estimates use a counter-based generator keyed by (seed, batch),
so results are bit-identical under any parallel schedule.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import BudgetError, PreconditionError

EXACT_BUDGET = 400
PRECISION_WARN_AT = 200
MC_MIN_SAMPLES = 10**4
MC_BATCH = 1 << 14


@dataclass(frozen=True)
class SmirnovBoundary:
    """Non-decreasing boundary 0 <= c_1 <= ... <= c_n <= 1 for sorted uniforms."""

    c: tuple[float, ...]

    def __post_init__(self):
        if len(self.c) < 1:
            raise PreconditionError("boundary needs n >= 1")
        arr = np.asarray(self.c, dtype=np.float64)
        if arr.min() < 0.0 or arr.max() > 1.0 or np.any(np.diff(arr) < 0):
            raise PreconditionError("boundary must be non-decreasing within [0, 1]")

    @property
    def n(self) -> int:
        return len(self.c)

    @classmethod
    def from_values(cls, c) -> "SmirnovBoundary":
        return cls(tuple(float(v) for v in c))

    @classmethod
    def from_line(cls, n: int, u: float, w: float) -> "SmirnovBoundary":
        """c_j = clamp((j - u) / (n + w - u)): the line count <= (n+w-u)t + u."""
        if n + w - u <= 0:
            raise PreconditionError("needs n + w - u > 0")
        j = np.arange(1, n + 1, dtype=np.float64)
        return cls(tuple(np.clip((j - u) / (n + w - u), 0.0, 1.0).tolist()))

    @classmethod
    def from_region(cls, n: int, N: float, alpha: float, beta: float) -> "SmirnovBoundary":
        """c_j = clamp((alpha j - beta) / N); constraints below 0 are vacuous,
        boundaries clamped at 1 force emptiness."""
        if N <= 0:
            raise PreconditionError("needs N > 0")
        j = np.arange(1, n + 1, dtype=np.float64)
        return cls(tuple(np.clip((alpha * j - beta) / N, 0.0, 1.0).tolist()))


def noncrossing_probability_exact(b: SmirnovBoundary, budget: int = EXACT_BUDGET) -> float:
    """P(U_(j) >= c_j for all j) for n iid uniforms, by the conditioning
    recursion; O(n^3) work, extended-precision accumulation.

    Warns above n = 200 (binomial weights start losing digits) and refuses
    above the budget, which defaults to 400 and can be raised explicitly.
    """
    n = b.n
    if n > budget:
        raise BudgetError(f"n = {n} beyond recursion budget {budget}")
    if n > PRECISION_WARN_AT:
        warnings.warn(f"n = {n} > {PRECISION_WARN_AT}: precision may degrade", RuntimeWarning)
    # carr[m] = c_m for 1 <= m <= n, with the sentinel c_{n+1} = 1 (full scale)
    carr = np.concatenate([[0.0], np.asarray(b.c, dtype=np.float64), [1.0]])
    lgam = gammaln(np.arange(n + 2, dtype=np.float64))  # lgam[k] = log (k-1)!
    # F[r, m] = G(r, c_m) for r < m <= n+1
    F = np.zeros((n + 1, n + 2), dtype=np.longdouble)
    F[0, :] = 1.0
    for r in range(1, n + 1):
        cr = carr[r]
        if cr == 0.0:
            F[r, r + 1 :] = 1.0
            continue
        x = cr / carr[r + 1 :]
        # binomial pmf over counts 0..r-1, log-space for stability near x = 1
        rr = np.arange(r, dtype=np.float64)
        lcomb = lgam[r + 1] - lgam[1 : r + 1] - lgam[r + 1 : 1 : -1]
        with np.errstate(divide="ignore"):
            logs = (
                lcomb
                + np.outer(np.log(x), rr)
                + np.outer(np.log1p(-x), r - rr)
            )
        F[r, r + 1 :] = np.exp(logs) @ F[:r, r]
    return float(F[n, n + 1])


def noncrossing_probability_mc(
    b: SmirnovBoundary, samples: int, seed: int
) -> tuple[float, float]:
    """Monte Carlo estimate and binomial standard error of the non-crossing
    probability; batch i draws from Philox keyed (seed, counter i << 128),
    so the result is independent of scheduling and thread count."""
    if samples < MC_MIN_SAMPLES:
        raise PreconditionError(f"needs at least {MC_MIN_SAMPLES} samples")
    n = b.n
    c = np.asarray(b.c, dtype=np.float64)
    hits = 0
    done = 0
    batch_index = 0
    while done < samples:
        take = min(MC_BATCH, samples - done)
        bitgen = np.random.Philox(key=seed, counter=batch_index << 128)
        u = np.random.Generator(bitgen).random((take, n))
        u.sort(axis=1)
        hits += int((u >= c).all(axis=1).sum())
        done += take
        batch_index += 1
    est = hits / samples
    return est, math.sqrt(est * (1.0 - est) / samples)


def q_n(u: float, w: float, n: int, budget: int = EXACT_BUDGET) -> float:
    """Probability that the empirical count stays below (n+w-u)t + u, i.e.
    the exact value approximated by 1 - exp(-2uw/n) up to O((u+w)/n)."""
    if u <= 0 or w <= 0:
        raise PreconditionError("needs u, w > 0")
    return noncrossing_probability_exact(SmirnovBoundary.from_line(n, u, w), budget=budget)


def region_volume(n: int, N: float, alpha: float, beta: float, budget: int = EXACT_BUDGET) -> float:
    """Volume of {0 <= x_1 <= ... <= x_n <= N, x_j >= alpha j - beta}.

    Equals (N^n / n!) P(U_(j) >= c_j) with c_j = clamp((alpha j - beta)/N):
    scaling the box to [0, 1] turns the sorted coordinates into uniform
    order statistics.  Returns 0 for an empty region.
    """
    if alpha * n - beta > N:
        return 0.0
    p = noncrossing_probability_exact(SmirnovBoundary.from_region(n, N, alpha, beta), budget=budget)
    if p == 0.0:
        return 0.0
    log_vol = n * math.log(N) - math.lgamma(n + 1) + math.log(p)
    try:
        return math.exp(log_vol)
    except OverflowError:
        raise BudgetError("volume exceeds float range; use the normalized probability")


@dataclass
class SandwichReport:
    """Two-sided envelope X/4 <= volume <= 3X with X = (N^n/n!) uw/n.

    ``factor`` is uw/n = beta (N - alpha n + beta) / (n alpha^2); the
    ``probability`` and its envelope [factor/4, 3*factor] carry the same
    content as the raw volume fields with the (N^n/n!) scale divided out,
    and stay finite when the raw values overflow.
    """

    lower: float
    upper: float
    volume: float
    hypotheses_met: bool
    lower_applicable: bool
    factor: float
    probability: float

    def astuple(self):
        return self.lower, self.upper, self.volume, self.hypotheses_met


def volume_sandwich(
    n: int, N: float, alpha: float, beta: float, C: float = 8.0, budget: int = EXACT_BUDGET
) -> SandwichReport:
    """Compare the exact region volume against the closed-form envelope.

    ``hypotheses_met`` records beta >= C*alpha and C <= (N - alpha n + beta)
    / alpha for the configurable constant C; the lower envelope additionally
    needs factor <= 1 (``lower_applicable``).  Callers assert containment
    only when the flags hold; otherwise the report is informational.
    """
    if alpha <= 0:
        raise PreconditionError("needs alpha > 0")
    u = beta / alpha
    w = (N - alpha * n + beta) / alpha
    factor = u * w / n
    p = noncrossing_probability_exact(SmirnovBoundary.from_region(n, N, alpha, beta), budget=budget)
    log_scale = n * math.log(N) - math.lgamma(n + 1)
    def scaled(v: float) -> float:
        if v <= 0.0:
            return 0.0
        try:
            return math.exp(log_scale + math.log(v))
        except OverflowError:
            return math.inf
    return SandwichReport(
        lower=scaled(factor) / 4,
        upper=3 * scaled(factor),
        volume=scaled(p),
        hypotheses_met=(beta >= C * alpha) and (C <= w),
        lower_applicable=factor <= 1.0,
        factor=factor,
        probability=p,
    )
