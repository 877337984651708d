"""Experiment commands with machine-readable reports.

Each command wraps library operations, records the exact inputs it ran
with, and returns an ``ExperimentReport`` whose result rows are fully
reproducible from (command, parameters, seed); wall time and version land
in the provenance block only.  Normalizations use the multiplication-table
exponent theta = 1 - (1 + log log 4)/log 4 and natural logarithms
throughout.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, log

import numpy as np

from . import __version__
from .energy import cs_product_lower_bound, energy, offdiag_tuples, product_set
from .errors import BudgetError, PreconditionError
from .progressions import ArithmeticProgression, intset
from .reduction import DirectBound, Reduced, large_a_energy_bound, reduce, trimmed_set
from .primestats import NkQuery, ShiuQuery, nk_last_prime_extension, nk_set, shiu_mean
from .sieve import build_table, mertens_sum
from .smirnov import (
    SmirnovBoundary,
    noncrossing_probability_exact,
    noncrossing_probability_mc,
)

TABLE_MAX_N = 1 << 16
TABLE_BITSET_BUDGET = 1 << 29
PAIRS_BUDGET = 1 << 26


@dataclass(frozen=True)
class ThetaConstants:
    """The multiplication-table exponent and its companions."""

    theta: float
    two_theta: float
    two_log2_minus_1: float


def theta_constants() -> ThetaConstants:
    th = 1.0 - (1.0 + log(log(4.0))) / log(4.0)
    return ThetaConstants(theta=th, two_theta=2.0 * th, two_log2_minus_1=2.0 * log(2.0) - 1.0)


THETA = theta_constants()


@dataclass
class ExperimentReport:
    command: str
    params: dict
    results: list[dict]
    provenance: dict = field(default_factory=dict)

    def to_json(self, indent: int | None = 2) -> str:
        payload = {
            "command": self.command,
            "params": self.params,
            "results": self.results,
            "provenance": self.provenance,
        }
        return json.dumps(payload, indent=indent, default=str)

    def to_csv(self) -> str:
        buf = io.StringIO()
        fields: list[str] = []
        for row in self.results:
            for k in row:
                if k not in fields:
                    fields.append(k)
        writer = csv.DictWriter(buf, fieldnames=fields, quoting=csv.QUOTE_MINIMAL)
        writer.writeheader()
        for row in self.results:
            writer.writerow({k: _csv_cell(row.get(k)) for k in fields})
        return buf.getvalue()


def _csv_cell(v):
    if isinstance(v, float):
        return repr(v)
    return v


def _finish(command: str, params: dict, results: list[dict], seed: int, threads: int, t0: float) -> ExperimentReport:
    return ExperimentReport(
        command=command,
        params=params,
        results=results,
        provenance={
            "seed": seed,
            "threads": threads,
            "version": __version__,
            "wall_time_ms": round(1000.0 * (time.perf_counter() - t0), 3),
        },
    )


def table_count(N: int, strategy: str = "bitset", bitset_budget: int = TABLE_BITSET_BUDGET) -> int:
    """|[N].[N]| exactly.  The bitset strategy marks achieved products in a
    dense array row by row; hash/merge reuse the product-set strategies."""
    if not 1 <= N <= TABLE_MAX_N:
        raise PreconditionError(f"N must be in [1, {TABLE_MAX_N}]")
    if strategy == "bitset":
        entries = N * N + 1
        if entries > bitset_budget:
            raise BudgetError(f"bitset needs {entries} entries, budget {bitset_budget}")
        seen = np.zeros(entries, dtype=bool)
        arr = np.arange(1, N + 1, dtype=np.int64)
        for a in range(1, N + 1):
            seen[a * arr[a - 1 :]] = True
        return int(np.count_nonzero(seen))
    if N * N > PAIRS_BUDGET:
        raise BudgetError(f"{strategy} strategy budget is {PAIRS_BUDGET} pairs")
    rng = list(range(1, N + 1))
    return len(product_set(rng, rng, strategy=strategy))


def normalized_ratio(N: int, count: int) -> float | None:
    """count * (log N)^(2 theta) (log log N)^(3/2) / N^2, defined for N >= 3."""
    if N < 3:
        return None
    return count * log(N) ** THETA.two_theta * log(log(N)) ** 1.5 / (N * N)


def cmd_table(N: int, strategy: str = "bitset", seed: int = 0, threads: int = 1) -> ExperimentReport:
    t0 = time.perf_counter()
    count = table_count(N, strategy=strategy)
    row = {"N": N, "count": count, "normalized_ratio": normalized_ratio(N, count)}
    params = {"N": N, "strategy": strategy, "two_theta": THETA.two_theta}
    return _finish("table", params, [row], seed, threads, t0)


def cmd_ap_product(a: int, d: int, L: int, seed: int = 0, threads: int = 1) -> ExperimentReport:
    t0 = time.perf_counter()
    if L * L > PAIRS_BUDGET:
        raise BudgetError(f"L^2 = {L * L} exceeds pair budget {PAIRS_BUDGET}")
    ap = ArithmeticProgression(a, d, L)
    A = ap.elements()
    zeros_removed = int(0 in A)
    A = [x for x in A if x != 0]
    prod = product_set(A, A)
    rep = energy(A, with_histogram=False)
    if a > 0 and gcd(a, d) == 1:
        rep.bound_rhs = large_a_energy_bound(ap, subset_size=len(A))
    if a > 0 and L <= 512:
        rep.offdiag_tuples = offdiag_tuples(A)
    row = {
        "a": a, "d": d, "L": L,
        "zeros_removed": zeros_removed,
        "product_count": len(prod),
        "energy": rep.energy,
        "cs_lower_bound": cs_product_lower_bound(A, A),
        "energy_upper_bound": rep.bound_rhs,
        "offdiag_tuples": rep.offdiag_tuples,
        "normalized_ratio": (
            len(prod) * log(L) ** THETA.two_theta / (L * L) if L >= 2 else None
        ),
    }
    params = {"a": a, "d": d, "L": L, "two_theta": THETA.two_theta}
    return _finish("ap-product", params, [row], seed, threads, t0)


def cmd_energy(values, seed: int = 0, threads: int = 1) -> ExperimentReport:
    t0 = time.perf_counter()
    A = intset(values)
    zeros_removed = int(0 in A)
    A = [x for x in A if x != 0]
    if len(A) * len(A) > PAIRS_BUDGET:
        raise BudgetError("set too large for the energy budget")
    rep = energy(A, with_histogram=False)
    row = {
        "size": len(A),
        "zeros_removed": zeros_removed,
        "energy": rep.energy,
        "diag_bound": rep.diag_bound,
    }
    return _finish("energy", {"size": len(A)}, [row], seed, threads, t0)


def cmd_reduce(
    a: int, d: int, L: int, delta: str = "1", seed: int = 0, threads: int = 1
) -> ExperimentReport:
    t0 = time.perf_counter()
    dlt = Fraction(delta)
    ap = ArithmeticProgression(a, d, L)
    elems = ap.elements()
    if dlt == 1:
        A = elems
    else:
        want = math.ceil(dlt * L)
        rng = np.random.default_rng(seed)
        A = sorted(elems[i] for i in rng.choice(L, size=want, replace=False))
    trace = reduce(A, ap, dlt)
    rows = [
        {
            "step": s.step,
            "density_before": str(s.density_before),
            "density_after": str(s.density_after),
            "length_after": s.length_after,
            "note": s.note,
        }
        for s in trace.steps
    ]
    out = trace.outcome
    if isinstance(out, DirectBound):
        rows.append({
            "step": "outcome", "note": "DirectBound",
            "subset_size": len(out.subset), "energy_value": out.energy_value,
        })
    elif isinstance(out, Reduced):
        rows.append({
            "step": "outcome", "note": "Reduced",
            "core_size": len(out.B), "m": out.m,
            "P_prime": f"({out.P_prime.a},{out.P_prime.d},{out.P_prime.L})",
        })
    rows.append(_omega_trim_row(A, ap))
    params = {"a": a, "d": d, "L": L, "delta": str(dlt)}
    return _finish("reduce", params, rows, seed, threads, t0)


def _omega_trim_row(A, ap) -> dict:
    """Fraction of A retained after dropping elements with many distinct
    prime factors, at the cutoff loglog(a+dL) + loglog(a+dL)^(2/3)."""
    pos = [x for x in A if x > 0]
    hull_hi = ap.last + 1
    if not pos or hull_hi - pos[0] > 1 << 24 or hull_hi < 16:
        return {"step": "omega-trim", "note": "skipped (hull outside sieve budget)"}
    cut = log(log(hull_hi)) + log(log(hull_hi)) ** (2 / 3)
    table = build_table(pos[0], hull_hi, factor_lists=False)
    kept = len(trimmed_set(pos, table, cut))
    return {
        "step": "omega-trim",
        "omega_cutoff": cut,
        "retained_fraction": kept / len(pos),
        "note": f"{kept}/{len(pos)} kept at omega <= loglog + loglog^(2/3)",
    }


def cmd_nk(
    alpha: float, beta: float, k: int,
    a: int, d: int, L: int,
    witness: bool = False, seed: int = 0, threads: int = 1,
) -> ExperimentReport:
    t0 = time.perf_counter()
    ap = ArithmeticProgression(a, d, L)
    table = build_table(max(ap.a, 1), ap.last + 1)
    q = NkQuery(alpha, beta, k, ap=ap)
    members = nk_set(q, table)
    # the asymptotic depth floor(loglog L / log 4 - 5 sqrt(loglog L)) - 4,
    # reading the garbled radical as sqrt(log log L); negative at desk scale
    kstar = None
    if L >= 3:
        ll = log(log(L))
        kstar = math.floor(ll / log(4) - 5.0 * math.sqrt(ll)) - 4
    row = {
        "alpha": alpha, "beta": beta, "k": k,
        "count": len(members),
        "members_preview": members[:20],
        "asymptotic_k": kstar,
        "asymptotic_k_note": "floor(loglog L / log 4 - 5 sqrt(loglog L)) - 4",
    }
    if witness:
        row["witness_count"] = nk_last_prime_extension(q, table)
    return _finish("nk", {"alpha": alpha, "beta": beta, "k": k, "a": a, "d": d, "L": L},
                   [row], seed, threads, t0)


def cmd_smirnov(
    n: int | None = None,
    c: list[float] | None = None,
    u: float | None = None,
    w: float | None = None,
    samples: int = 0,
    seed: int = 0,
    threads: int = 1,
) -> ExperimentReport:
    t0 = time.perf_counter()
    if c is not None:
        b = SmirnovBoundary.from_values(c)
    elif n is not None and u is not None and w is not None:
        b = SmirnovBoundary.from_line(n, u, w)
    else:
        raise PreconditionError("give either c or (n, u, w)")
    exact = noncrossing_probability_exact(b)
    row: dict = {"n": b.n, "exact": exact}
    if u is not None and w is not None:
        approx = 1.0 - math.exp(-2.0 * u * w / b.n)
        row["line_approx"] = approx
        row["deviation_stat"] = abs(exact - approx) * b.n / (u + w)
    if samples:
        est, se = noncrossing_probability_mc(b, samples, seed)
        row["mc_estimate"] = est
        row["mc_stderr"] = se
    params = {"n": b.n, "c": list(b.c) if c is not None else None,
              "u": u, "w": w, "samples": samples}
    return _finish("smirnov", params, [row], seed, threads, t0)


def cmd_mertens(x: int, seed: int = 0, threads: int = 1) -> ExperimentReport:
    t0 = time.perf_counter()
    v = mertens_sum(x)
    row = {"x": x, "sum": v, "loglog_x": log(log(x)), "difference": v - log(log(x))}
    return _finish("mertens", {"x": x}, [row], seed, threads, t0)


def cmd_shiu(x: int, y: int, k: int, a: int, z: float, seed: int = 0, threads: int = 1) -> ExperimentReport:
    t0 = time.perf_counter()
    exact, bound = shiu_mean(ShiuQuery(x, y, k, a, z))
    row = {"x": x, "y": y, "k": k, "a": a, "z": z,
           "exact": exact, "bound": bound, "ratio": exact / bound}
    return _finish("shiu", {"x": x, "y": y, "k": k, "a": a, "z": z}, [row], seed, threads, t0)
