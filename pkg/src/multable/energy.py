"""Product sets, representation counts, and multiplicative energy.

The energy of a pair of sets is the number of quadruples
(a1, a2, b1, b2) with a1*b1 = a2*b2, computed as the sum of squared
representation counts over products.  Every call cross-checks the
product-side value against the quotient-side identity (representation
counts over reduced fractions a1/a2), so the two routes must agree
exactly before a result is returned.

All arithmetic is exact: the fast paths run in int64 only when products
and fraction encodings provably fit, and fall back to Python integers
otherwise, so no result ever silently overflows.
"""

from __future__ import annotations

import heapq
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import sqrt

import numpy as np

from .errors import BudgetError, InternalCheckError, PreconditionError, RetriesExhaustedError
from .progressions import IntSet, intset
from .sieve import divisors

BITSET_BUDGET = 1 << 28   # max entries of the dense product bitmap
BITSET_MIN_DENSITY = 2.0**-10
BRUTEFORCE_BUDGET = 10**4  # max |A|*|B| for the quadratic oracle


@dataclass
class EnergyReport:
    """Exact energy plus the bookkeeping used by the bound checks.

    ``diag_bound`` is the trivial 2|A||B| cap on tuples that reuse a pair;
    ``offdiag_tuples`` and ``bound_rhs`` are filled in by the callers that
    compute them (grid counting, progression bounds).
    """

    energy: int
    diag_bound: int
    histogram: dict[int, int] | None = None
    offdiag_tuples: int | None = None
    bound_rhs: float | None = None


def _check_nonzero(s: IntSet, name: str) -> None:
    if 0 in s:
        raise PreconditionError(f"{name} must not contain 0 (drop it first)")


def _int64_products_safe(A: IntSet, B: IntSet) -> bool:
    ma = max(abs(A[0]), abs(A[-1]))
    mb = max(abs(B[0]), abs(B[-1]))
    return ma * mb < 1 << 62


def _product_counts(A: IntSet, B: IntSet) -> tuple[list[int], list[int]]:
    """Distinct products and their representation counts r_{A.B}."""
    if _int64_products_safe(A, B):
        prods = np.multiply.outer(
            np.array(A, dtype=np.int64), np.array(B, dtype=np.int64)
        ).ravel()
        vals, cnts = np.unique(prods, return_counts=True)
        return vals.tolist(), cnts.tolist()
    c = Counter(a * b for a in A for b in B)
    vals = sorted(c)
    return vals, [c[v] for v in vals]


def _quotient_counts(S: IntSet) -> dict:
    """Representation counts of reduced sign-normalized fractions a1/a2.

    Keys are packed into int64 when the elements fit in 32 bits, and fall
    back to exact Fraction keys otherwise; either way the arithmetic is
    exact so equal rationals always collide.
    """
    m = max(abs(S[0]), abs(S[-1]))
    if m < 1 << 31:
        arr = np.array(S, dtype=np.int64)
        a1 = np.repeat(arr, len(S))
        a2 = np.tile(arr, len(S))
        g = np.gcd(a1, a2)
        p, q = a1 // g, a2 // g
        neg = q < 0
        p = np.where(neg, -p, p)
        q = np.where(neg, -q, q)
        keys = p * (1 << 32) + q
        vals, cnts = np.unique(keys, return_counts=True)
        return dict(zip(vals.tolist(), cnts.tolist()))
    return Counter(Fraction(a1, a2) for a1 in S for a2 in S)


def energy(A: IntSet, B: IntSet | None = None, with_histogram: bool = True) -> EnergyReport:
    """Multiplicative energy of A (or of the pair A, B), via both routes.

    Requires 0 absent from both sets.  The product-side sum of squared
    representation counts is the returned value; the quotient-side sum
    (same-set: sum of r_{A/A}^2; cross: dot of r_{A/A} with r_{B/B}) is
    recomputed on every call and must match exactly.
    """
    A = intset(A)
    B_same = B is None
    B = A if B_same else intset(B)
    if not A or not B:
        raise PreconditionError("energy needs nonempty sets")
    _check_nonzero(A, "A")
    _check_nonzero(B, "B")

    vals, cnts = _product_counts(A, B)
    e_prod = sum(c * c for c in cnts)

    qa = _quotient_counts(A)
    if B_same:
        e_quot = sum(c * c for c in qa.values())
    else:
        qb = _quotient_counts(B)
        small, big = (qa, qb) if len(qa) <= len(qb) else (qb, qa)
        e_quot = sum(c * big.get(k, 0) for k, c in small.items())
    if e_prod != e_quot:
        raise InternalCheckError(
            f"product-side energy {e_prod} != quotient-side energy {e_quot}"
        )

    hist = dict(zip(vals, cnts)) if with_histogram else None
    return EnergyReport(energy=e_prod, diag_bound=2 * len(A) * len(B), histogram=hist)


def energy_bruteforce(A: IntSet, B: IntSet | None = None) -> int:
    """Quadratic pair-against-pair oracle for the energy; independent path.

    Compares every (a1, b1) product against every (a2, b2) product, so the
    cost is (|A||B|)^2 comparisons; guarded at |A||B| <= 10^4.
    """
    A = intset(A)
    B = A if B is None else intset(B)
    if len(A) * len(B) > BRUTEFORCE_BUDGET:
        raise BudgetError(f"|A|*|B| = {len(A) * len(B)} exceeds {BRUTEFORCE_BUDGET}")
    if _int64_products_safe(A, B):
        p = np.multiply.outer(
            np.array(A, dtype=np.int64), np.array(B, dtype=np.int64)
        ).ravel()
        total = 0
        step = max(1, (1 << 24) // max(1, p.size))
        for i in range(0, p.size, step):
            total += int((p[i : i + step, None] == p[None, :]).sum())
        return total
    prods = [a * b for a in A for b in B]
    return sum(1 for x in prods for y in prods if x == y)


def product_set(A: IntSet, B: IntSet, strategy: str = "auto") -> IntSet:
    """Sorted distinct pairwise products of A and B.

    Strategies: ``bitset`` (dense mark array, nonnegative inputs within the
    memory budget), ``hash`` (distinct products via hashing/sorting), and
    ``merge`` (k-way merge of the dilates a*B).  ``auto`` picks bitset when
    its density and budget conditions hold, else hash.  All strategies
    return identical sets.
    """
    A = intset(A)
    B = intset(B)
    if not A or not B:
        raise PreconditionError("product_set needs nonempty sets")
    if strategy == "auto":
        strategy = "bitset" if _bitset_eligible(A, B) else "hash"
    if strategy == "bitset":
        return _product_bitset(A, B)
    if strategy == "hash":
        return _product_hash(A, B)
    if strategy == "merge":
        return _product_merge(A, B)
    raise PreconditionError(f"unknown strategy {strategy!r}")


def _bitset_eligible(A: IntSet, B: IntSet) -> bool:
    if A[0] < 0 or B[0] < 0:
        return False
    top = A[-1] * B[-1]
    if top + 1 > BITSET_BUDGET:
        return False
    return len(A) * len(B) >= (top + 1) * BITSET_MIN_DENSITY


def _product_bitset(A: IntSet, B: IntSet) -> IntSet:
    if A[0] < 0 or B[0] < 0:
        raise PreconditionError("bitset strategy needs nonnegative inputs")
    top = A[-1] * B[-1]
    if top + 1 > BITSET_BUDGET:
        raise BudgetError(f"product range {top + 1} exceeds bitset budget {BITSET_BUDGET}")
    seen = np.zeros(top + 1, dtype=bool)
    b = np.array(B, dtype=np.int64)
    for a in A:
        seen[a * b] = True
    return np.nonzero(seen)[0].tolist()


def _product_hash(A: IntSet, B: IntSet) -> IntSet:
    if _int64_products_safe(A, B):
        prods = np.multiply.outer(
            np.array(A, dtype=np.int64), np.array(B, dtype=np.int64)
        ).ravel()
        return np.unique(prods).tolist()
    return sorted({a * b for a in A for b in B})


def _product_merge(A: IntSet, B: IntSet) -> IntSet:
    def row(a):
        return (a * b for b in (B if a > 0 else reversed(B))) if a else iter((0,))

    out: list[int] = []
    for v in heapq.merge(*(row(a) for a in A)):
        if not out or v != out[-1]:
            out.append(v)
    return out


def offdiag_tuples(A: IntSet, pair_budget: int = 10**7) -> int:
    """Count of grids (x1, x2, y1, y2), x1 < x2, y1 < y2, all x_i*y_j in A.

    Enumerates x over divisors of elements of A (any valid x divides some
    element), counts co-occurrences of quotient pairs, and sums the ways to
    choose two common x values.  For |A| up to a few thousand the asserted
    inequality E(A) <= 2|A|^2 + 4|X| is re-checked against the exact energy.
    """
    A = intset(A)
    if not A or A[0] < 1:
        raise PreconditionError("offdiag_tuples needs positive integers")
    quotients: dict[int, list[int]] = {}
    for a in A:
        for x in divisors(a):
            quotients.setdefault(x, []).append(a // x)
    work = sum(len(ys) * (len(ys) - 1) // 2 for ys in quotients.values())
    if work > pair_budget:
        raise BudgetError(f"co-occurrence work {work} exceeds budget {pair_budget}")
    common = Counter()
    for ys in quotients.values():
        common.update(combinations(sorted(ys), 2))
    x_count = sum(c * (c - 1) // 2 for c in common.values())
    if len(A) <= 3000:
        e = energy(A, with_histogram=False).energy
        if e > 2 * len(A) ** 2 + 4 * x_count:
            raise InternalCheckError(
                f"E = {e} exceeds 2|A|^2 + 4|X| = {2 * len(A) ** 2 + 4 * x_count}"
            )
    return x_count


def cs_product_lower_bound(A: IntSet, B: IntSet) -> float:
    """The Cauchy-Schwarz floor |A|^2|B|^2 / E(A,B) for |A.B|; re-checked."""
    A, B = intset(A), intset(B)
    _check_nonzero(A, "A")
    _check_nonzero(B, "B")
    e = energy(A, B, with_histogram=False).energy
    n_prod = len(product_set(A, B))
    # exact integer form of |A|^2 |B|^2 / E <= |A.B|
    if len(A) ** 2 * len(B) ** 2 > e * n_prod:
        raise InternalCheckError("Cauchy-Schwarz product bound violated")
    return len(A) ** 2 * len(B) ** 2 / e


def cs_energy_split(A: IntSet, B: IntSet) -> tuple[float, bool]:
    """sqrt(E(A) * E(B)) and whether E(A,B) is below it (exact check)."""
    A, B = intset(A), intset(B)
    _check_nonzero(A, "A")
    _check_nonzero(B, "B")
    e_ab = energy(A, B, with_histogram=False).energy
    e_a = energy(A, with_histogram=False).energy
    e_b = energy(B, with_histogram=False).energy
    ok = e_ab * e_ab <= e_a * e_b
    return sqrt(e_a * e_b), ok


def random_energy_subset(A: IntSet, seed: int, max_retries: int = 1000) -> IntSet:
    """A random subset A' with E(A') <= 4|A'|^2 and |A'| >= |A|^3 / (2 E(A)).

    Keeps each element independently with probability |A|^2 / E(A) and
    retries until both certified inequalities hold; a positive fraction of
    draws succeeds in expectation, so exhausting the retries signals a bug.
    """
    A = intset(A)
    _check_nonzero(A, "A")
    e_a = energy(A, with_histogram=False).energy
    n = len(A)
    p = min(1.0, n * n / e_a)
    rng = np.random.default_rng(seed)
    arr = np.array(A, dtype=object)
    for _ in range(max_retries):
        mask = rng.random(n) < p
        sub = [int(v) for v in arr[mask]]
        if not sub:
            continue
        e_sub = energy(sub, with_histogram=False).energy
        # integer forms of E' <= 4|A'|^2 and |A'| >= |A|^3 / (2 E(A))
        if e_sub <= 4 * len(sub) ** 2 and 2 * e_a * len(sub) >= n**3:
            return sub
    raise RetriesExhaustedError(
        f"no qualifying subset in {max_retries} draws at p = {p:.4g}"
    )
