"""Prime statistics in arithmetic progressions.

Covers the constrained square-free sets N_k (elements with exactly k
distinct prime factors whose j-th smallest prime p_j satisfies
log log p_j >= alpha*j - beta), exact prime counting along progressions
with its density floor, the depth-first reciprocal-sum enumerator over
admissible prime tuples, and short-interval means of z^omega(n) compared
against their multiplicative-function envelope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import gcd, isqrt, log

import numpy as np

from .errors import BudgetError, InternalCheckError, PreconditionError
from .progressions import ArithmeticProgression, IntSet, intset
from .sieve import (
    FactorizationTable,
    build_table,
    is_prime,
    factorize,
    mertens_sum,
    prime_flags_interval,
    sieve_primes,
)

RECIPROCAL_MAX_K = 5
RECIPROCAL_MAX_X = 10**7
PRIME_BOUND_MIN_LENGTH = 10**4  # below this the density floor is only reported


def totient(n: int) -> int:
    """Euler's phi via factorization."""
    result = n
    for p in factorize(n):
        result -= result // p
    return result


@dataclass(frozen=True)
class NkQuery:
    """Parameters (alpha, beta, k) over a progression or an explicit set."""

    alpha: float
    beta: float
    k: int
    ap: ArithmeticProgression | None = None
    elements: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.k < 0:
            raise PreconditionError("k must be >= 0")
        if not (math.isfinite(self.alpha) and math.isfinite(self.beta)):
            raise PreconditionError("alpha, beta must be finite")
        if (self.ap is None) == (self.elements is None):
            raise PreconditionError("give exactly one of ap or elements")

    def domain(self) -> IntSet:
        if self.ap is not None:
            return self.ap.elements()
        return intset(self.elements)


def _prefix_ok(primes: list[int], alpha: float, beta: float) -> bool:
    return all(log(log(p)) >= alpha * (j + 1) - beta for j, p in enumerate(primes))


def nk_set(q: NkQuery, table: FactorizationTable) -> IntSet:
    """Members of the query's domain that are square-free with omega = k and
    whose j-th smallest prime factor clears log log p_j >= alpha*j - beta.

    log log p is an ordinary real (negative at p = 2), so the constraint is
    evaluated directly; no positivity is implied.
    """
    vals = [n for n in q.domain() if n >= 1]
    if not vals:
        return []
    if vals[0] < table.lo or vals[-1] >= table.hi:
        raise PreconditionError("query domain not covered by the table")
    arr = np.array(vals, dtype=np.int64)
    pos = arr - table.lo
    mask = (table.square_divisor_array[pos] == 1) & (table.omega_array[pos] == q.k)
    out = []
    for n in arr[mask].tolist():
        if _prefix_ok(table.prime_factors(n), q.alpha, q.beta):
            out.append(n)
    return out


def prime_count_ap(ap: ArithmeticProgression) -> int:
    """Exact number of primes among the elements of ap (elements < 2 skipped).

    When the density-floor regime holds (0 < dL < a < 10 L sqrt(log L),
    gcd(a, d) = 1, L >= 10^4) the count is re-checked against
    dL / (2 phi(d) log L).
    """
    a, d, L = ap.a, ap.d, ap.L
    if ap.last < 2:
        return 0
    i0 = 0 if a >= 2 else -(-(2 - a) // d)
    lo = a + i0 * d
    hi = ap.last + 1
    flags = prime_flags_interval(lo, hi)
    count = int(flags[::d].sum())
    if (
        L >= PRIME_BOUND_MIN_LENGTH
        and 0 < d * L < a < 10 * L * math.sqrt(log(L))
        and gcd(a, d) == 1
    ):
        floor = d * L / (2 * totient(d) * log(L))
        if count < floor:
            raise InternalCheckError(
                f"prime count {count} below density floor {floor:.1f} for {ap}"
            )
    return count


def reciprocal_sum_lower(
    x: int, k: int, d: int, beta: float, alpha: float, node_budget: int = 10**7
) -> float:
    """Sum of 1/(p_1 ... p_k) over ascending prime tuples with product < x,
    no p_j dividing d, and log log p_j >= alpha*j - beta, by exhaustive DFS.

    The reference scale for ratio inspection is (e log 4)^k.
    """
    if k > RECIPROCAL_MAX_K or x > RECIPROCAL_MAX_X:
        raise BudgetError(f"enumeration budget is k <= {RECIPROCAL_MAX_K}, x <= {RECIPROCAL_MAX_X}")
    if k == 0:
        return 1.0
    if x < 3:
        return 0.0
    primes = [p for p in sieve_primes(x - 1).tolist() if d % p != 0]
    if not primes:
        return 0.0
    # first admissible prime index per depth (log log is increasing)
    start_at = []
    for j in range(1, k + 1):
        bound = alpha * j - beta
        lo_i, hi_i = 0, len(primes)
        while lo_i < hi_i:
            mid = (lo_i + hi_i) // 2
            if log(log(primes[mid])) >= bound:
                hi_i = mid
            else:
                lo_i = mid + 1
        start_at.append(lo_i)

    terms: list[float] = []
    nodes = 0

    def walk(depth: int, first_idx: int, prod: int):
        nonlocal nodes
        lo_i = max(first_idx, start_at[depth - 1])
        for i in range(lo_i, len(primes)):
            p = primes[i]
            new = prod * p
            if new >= x:
                return
            nodes += 1
            if nodes > node_budget:
                raise BudgetError(f"DFS exceeded {node_budget} nodes")
            if depth == k:
                terms.append(1.0 / new)
            else:
                walk(depth + 1, i + 1, new)

    walk(1, 0, 1)
    return math.fsum(terms)


@dataclass(frozen=True)
class ShiuQuery:
    """Short-interval mean of z^omega(n) over n = a (mod k) in [x-y, x)."""

    x: int
    y: int
    k: int
    a: int
    z: float

    def __post_init__(self):
        if not 0 < self.y <= self.x:
            raise PreconditionError("need 0 < y <= x")
        if not 0 < self.z <= 2:
            raise PreconditionError("need z in (0, 2]")
        if gcd(self.a, self.k) != 1:
            raise PreconditionError("need gcd(a, k) = 1")


def shiu_mean(q: ShiuQuery) -> tuple[float, float]:
    """Exact window sum of z^omega(n) and its multiplicative-function envelope.

    The envelope is (y/phi(k)) (1/log x) exp(sum_{p <= x, p not | k} z/p);
    the exact/envelope ratio is expected to stay below a fixed constant in
    the regime k < sqrt(y), sqrt(x) < y <= x.
    """
    x, y, k, a, z = q.x, q.y, q.k, q.a, q.z
    if not (k < math.sqrt(y) and math.sqrt(x) < y):
        raise PreconditionError("regime requires k < sqrt(y) and sqrt(x) < y")
    if x > RECIPROCAL_MAX_X:
        raise BudgetError(f"x budget is {RECIPROCAL_MAX_X}")
    lo = x - y
    table = build_table(max(lo, 1), x, factor_lists=False)
    first = lo + ((a - lo) % k)
    if first < 1:
        first += k
    pos = np.arange(first - table.lo, x - table.lo, k)
    omegas = table.omega_array[pos].astype(np.float64)
    exact = float(math.fsum(np.power(z, omegas).tolist()))

    prime_cut = z * mertens_sum(x) - sum(z / p for p in factorize(k))
    bound = (y / totient(k)) * (1.0 / log(x)) * math.exp(prime_cut)
    return exact, bound


def nk_last_prime_extension(q: NkQuery, table: FactorizationTable) -> int:
    """Constructive lower-bound witness for |N_k|: count members q*p where
    q = p_1 ... p_{k-1} < sqrt(a) is an admissible prefix and p is a prime
    in the quotient progression {(a + i0 d)/q + j d}.

    Every witness is a genuine member, which is re-checked against nk_set.
    """
    if q.ap is None:
        raise PreconditionError("needs an arithmetic progression domain")
    ap = q.ap
    a, d, L = ap.a, ap.d, ap.L
    if a <= 0 or gcd(a, d) != 1:
        raise PreconditionError("needs a > 0 and gcd(a, d) = 1")
    if not d * L <= a:
        raise PreconditionError("regime requires dL <= a")
    # the upper regime bound has no content at toy lengths
    if L >= 16 and a > L * math.sqrt(log(L)):
        raise PreconditionError("regime requires a <= L sqrt(log L)")
    if q.k == 0:
        count = 1 if 1 in ap else 0
    else:
        count = _extension_count(q, ap)
    members = len(nk_set(q, table))
    if count > members:
        raise InternalCheckError(f"witness count {count} exceeds |N_k| = {members}")
    return count


def _extension_count(q: NkQuery, ap: ArithmeticProgression) -> int:
    a, d, L = ap.a, ap.d, ap.L
    # prefixes must satisfy p_1 ... p_{k-1} < sqrt(a), exactly
    primes = [p for p in sieve_primes(isqrt(a)).tolist() if p * p < a and d % p != 0]
    kk = q.k
    last_bound = q.alpha * kk - q.beta

    def count_for_prefix(prefix_prod: int, p_last: int) -> int:
        qq = prefix_prod
        i0 = (-a * pow(d, -1, qq)) % qq if qq > 1 else 0
        if i0 >= L:
            return 0
        total = 0
        for i in range(i0, L, qq):
            p = (a + i * d) // qq
            if p > p_last and is_prime(p) and log(log(p)) >= last_bound:
                total += 1
        return total

    total = 0

    def walk(depth: int, first_idx: int, prod: int, p_last: int):
        nonlocal total
        if depth == kk:
            total += count_for_prefix(prod, p_last)
            return
        bound = q.alpha * depth - q.beta
        for i in range(first_idx, len(primes)):
            p = primes[i]
            new = prod * p
            if new * new >= a:
                return
            if log(log(p)) >= bound:
                walk(depth + 1, i + 1, new, p)

    walk(1, 0, 1, 1)
    return total
