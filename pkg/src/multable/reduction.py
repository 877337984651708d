"""Reduction of a dense subset of a progression to the essential case.

Five steps: restrict to positives (mirroring first when fewer than a third
of the elements are positive), divide out gcd(a, d), select a dyadic index
block where the set keeps at least half its density, bail out with the
universal energy bound when the first term dominates L log L, and finally
extract a square-free core by pigeonholing on the largest square divisor.

Every step keeps exact rational density bookkeeping, and the outcome is
either ``DirectBound`` (a subset together with a proven upper bound on its
multiplicative energy) or ``Reduced`` (a square-free set B, its enclosing
progression, and the dilation factor m with m*B inside the original set).
At desk scale the asymptotic pigeonhole arguments can run out of room
(singleton blocks, tight hulls); those paths fall back to DirectBound,
which is valid unconditionally, and the trace notes say so.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import numpy as np

from .errors import InternalCheckError, PreconditionError
from .progressions import ArithmeticProgression, IntSet, dilate, intset
from .sieve import square_parts

# "L large" has no content at desk scale; the universal bound needs none.
EXTREMAL_FLAG_FACTOR = 2.0


def large_a_energy_bound(ap: ArithmeticProgression, subset_size: int | None = None) -> float:
    """Energy cap 2|A|^2 + 4 (L^3/a)(1 + log L) for subsets of ap.

    Valid for any subset whenever gcd(a, d) = 1 and a, d > 0; with no
    subset size given the full length L is used for the 2|A|^2 term.
    """
    if ap.a <= 0 or gcd(ap.a, ap.d) != 1:
        raise PreconditionError("bound needs a > 0 and gcd(a, d) = 1")
    size = ap.L if subset_size is None else subset_size
    return 2.0 * size * size + 4.0 * ap.L**3 / ap.a * (1.0 + math.log(ap.L))


def largest_square_class(A: IntSet, T: int) -> tuple[IntSet, int, IntSet]:
    """Largest class of A sharing one largest square divisor t^2 <= T^2.

    Returns (B0, t, B) with B = B0 / t^2 square-free; among equally large
    classes the smallest t wins.  Elements whose largest square divisor
    exceeds T^2 are discarded before classing.
    """
    A = intset(A)
    if not A or A[0] < 1:
        raise PreconditionError("needs positive integers")
    sq = square_parts(np.array(A, dtype=np.int64))
    classes: dict[int, list[int]] = {}
    for x, s in zip(A, sq.tolist()):
        if s <= T * T:
            classes.setdefault(s, []).append(x)
    if not classes:
        raise PreconditionError(f"every element has a square divisor above T^2 = {T * T}")
    best_sq = max(classes, key=lambda s: (len(classes[s]), -s))
    B0 = sorted(classes[best_sq])
    t = math.isqrt(best_sq)
    B = [x // best_sq for x in B0]
    if np.any(square_parts(np.array(B, dtype=np.int64)) != 1):
        raise InternalCheckError("divided class is not square-free")
    return B0, t, B


def squarefree_reduce(
    A: IntSet, ap: ArithmeticProgression, delta
) -> tuple[IntSet, int, IntSet]:
    """Extract the largest same-square-divisor class of A and divide it out.

    Returns (B0, t, B): B0 are the elements of A sharing largest square
    divisor t^2 with t <= ceil(3/delta), and B = B0 / t^2 is square-free.
    Requires the room hypothesis a + dL < (delta^2 / 9) L^2 and d <= L;
    under it |B0| >= delta^2 L / 18, which is re-checked exactly.
    """
    delta = Fraction(delta)
    A = intset(A)
    L = ap.L
    if not A or any(x not in ap for x in A):
        raise PreconditionError("A must be a nonempty subset of ap")
    if ap.a <= 0 or gcd(ap.a, ap.d) != 1:
        raise PreconditionError("requires a > 0 and gcd(a, d) = 1")
    if len(A) < delta * L:
        raise PreconditionError(f"|A| = {len(A)} below delta * L = {delta * L}")
    if ap.d > L:
        raise PreconditionError(f"needs d <= L, got d = {ap.d}, L = {L}")
    if ap.a + ap.d * L >= delta * delta / 9 * L * L:
        raise PreconditionError(
            f"a + dL = {ap.a + ap.d * L} not below (delta^2/9) L^2 = "
            f"{float(delta * delta / 9 * L * L):.4g}; route to the extremal bound instead"
        )

    T = math.ceil(Fraction(3) / delta)
    B0, t, B = largest_square_class(A, T)
    if 18 * len(B0) < delta * delta * L:
        raise InternalCheckError(
            f"pigeonhole class size {len(B0)} below delta^2 L / 18 = "
            f"{float(delta * delta * L / 18):.4g}"
        )
    return B0, t, B


def trimmed_set(A: IntSet, table, T: float) -> IntSet:
    """Elements of A with at most T distinct prime factors (table-backed)."""
    return [n for n in intset(A) if table.omega(n) <= T]


@dataclass
class ReductionStep:
    step: str
    density_before: Fraction
    density_after: Fraction
    length_after: int
    note: str = ""


@dataclass
class DirectBound:
    """A subset of the original set with a certified energy upper bound."""

    subset: IntSet
    energy_value: float


@dataclass
class Reduced:
    """Square-free core B inside progression P_prime; m * B lies in the input."""

    B: IntSet
    P_prime: ArithmeticProgression
    m: int


@dataclass
class ReductionTrace:
    steps: list[ReductionStep] = field(default_factory=list)
    dilation_factor: int = 1
    outcome: DirectBound | Reduced | None = None


def reduce(A: IntSet, ap: ArithmeticProgression, delta) -> ReductionTrace:
    """Run the five-step pipeline on (A, ap) with density at least delta."""
    delta = Fraction(delta)
    A = intset(A)
    if not A or any(x not in ap for x in A):
        raise PreconditionError("A must be a nonempty subset of ap")
    if len(A) < delta * ap.L:
        raise PreconditionError(f"|A| = {len(A)} below delta * L = {float(delta * ap.L)}")

    trace = ReductionTrace()
    density = Fraction(len(A), ap.L)
    original = set(A)

    # Step 1: positivity, mirroring if fewer than 1/3 of elements are positive
    positives = sum(1 for x in A if x > 0)
    sign = 1
    note = ""
    if 3 * positives < len(A):
        sign = -1
        A = sorted(-x for x in A)
        ap = ap.negated()
        note = "mirrored to -A (fewer than 1/3 positive)"
    A1 = [x for x in A if x > 0]
    P1 = ap.positive_part()
    if not A1 or P1 is None:
        raise PreconditionError("no positive elements on either side")
    d1 = Fraction(len(A1), P1.L)
    trace.steps.append(ReductionStep("Positivity", density, d1, P1.L, note))
    if 3 * d1 <= delta:
        raise InternalCheckError("positivity step lost more than two thirds of density")

    # Step 2: divide out gcd(a, d)
    P2, g = P1.normalize_gcd()
    A2 = [x // g for x in A1]
    d2 = Fraction(len(A2), P2.L)
    trace.steps.append(ReductionStep("GcdNormalize", d1, d2, P2.L, f"g={g}"))
    trace.dilation_factor = sign * g

    def direct(subset_norm: IntSet, prog: ArithmeticProgression, why: str) -> ReductionTrace:
        bound = large_a_energy_bound(prog, subset_size=len(subset_norm))
        back = dilate(subset_norm, sign * g)
        if not set(back) <= original:
            raise InternalCheckError("bounded subset escapes the original set")
        trace.steps.append(
            ReductionStep("ExtremalCheck", trace.steps[-1].density_after,
                          trace.steps[-1].density_after, prog.L, why)
        )
        trace.outcome = DirectBound(subset=back, energy_value=bound)
        return trace

    # Step 3: dyadic block selection over indices 1..L-1
    if P2.L < 2:
        return direct(A2, P2, "singleton progression; universal bound")
    blocks = P2.dyadic_index_blocks()
    index_of = {x: (x - P2.a) // P2.d for x in A2}
    counts = []
    for t, lo, hi in blocks:
        counts.append(sum(1 for x in A2 if lo <= index_of[x] < hi))
    lengths = [hi - lo for _, lo, hi in blocks]
    total = P2.L - 1
    # smallest t0 whose tail mass fits inside half the set's index mass
    tail = total
    t0 = 0
    while tail > d2 * total / 2 and t0 < len(blocks):
        tail -= lengths[t0]
        t0 += 1
    qualifying = [i for i in range(t0) if 2 * counts[i] >= d2 * lengths[i]]
    if not qualifying:
        return direct(A2, P2, "no dyadic block kept half density at this scale")
    t1 = max(qualifying, key=lambda i: (counts[i], -i))
    _, lo, hi = blocks[t1]
    P3 = ArithmeticProgression(P2.a + lo * P2.d, P2.d, hi - lo)
    A3 = [x for x in A2 if lo <= index_of[x] < hi]
    d3 = Fraction(len(A3), P3.L)
    if 2 * d3 < d2:
        raise InternalCheckError("selected block density below half")
    if P3.a <= P3.d * P3.L:
        raise InternalCheckError("dyadic block lost the a > dL guarantee")
    trace.steps.append(
        ReductionStep("DyadicSelect", d2, d3, P3.L, f"t1={blocks[t1][0]}, indices [{lo},{hi})")
    )

    # Step 4: first term large enough for the universal bound to win outright
    threshold = P3.L * math.log(P3.L)
    band = ""
    if P3.L >= 3:
        half = 0.5 * P3.L * math.sqrt(math.log(P3.L))
        if half <= P3.a <= 2 * half:
            # the narrowing constant is ambiguous in this band; record it
            band = "; a between (1/2) L sqrt(log L) and L sqrt(log L)"
    if P3.a >= threshold:
        why = "a >= L log L; universal bound"
        if P3.a < EXTREMAL_FLAG_FACTOR * threshold:
            why += " (within factor 2 of threshold)"
        return direct(A3, P3, why + band)

    # Step 5: square-free core via the largest-square-divisor pigeonhole
    room = d3 * d3 / 9 * P3.L * P3.L
    if P3.a + P3.d * P3.L >= room or P3.d > P3.L:
        return direct(
            A3, P3,
            "square-free pigeonhole lacks room at this scale; universal bound",
        )
    B0, t, B = squarefree_reduce(A3, P3, d3)
    note5 = f"t={t}, |B0|={len(B0)}" + band
    trimmed = 0
    while len(B) > 1:
        first = B[0]
        span = (B[-1] - B[0]) // P3.d + 1
        if first > P3.d * span:
            break
        B = B[:-1]
        trimmed += 1
    if trimmed:
        note5 += f", trimmed {trimmed} for the hull guarantee"
    span = (B[-1] - B[0]) // P3.d + 1 if len(B) > 1 else 1
    P5 = ArithmeticProgression(B[0], P3.d, span)
    if P5.a <= P5.d * P5.L:
        return direct(A3, P3, "square-free hull too tight; universal bound")
    m = sign * g * t * t
    if not set(dilate(B, m)) <= original:
        raise InternalCheckError("dilated square-free core escapes the original set")
    d5 = Fraction(len(B), P5.L)
    trace.steps.append(ReductionStep("SquarefreeReduce", d3, d5, P5.L, note5))
    trace.dilation_factor = m
    trace.outcome = Reduced(B=B, P_prime=P5, m=m)
    return trace
