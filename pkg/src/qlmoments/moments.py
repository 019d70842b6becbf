"""Exact brute-force moments of L(1/2, chi_d) over monic squarefree d.

The moment of order r at degree D is accumulated as an exact pair of
integers (U, V) with sum_d L(1/2, chi_d)^r = (U + V sqrt(q)) / q^(r*m),
m = ceil((D-1)/2); floats only appear at report time.  Work is
partitioned over the coefficient of x^(D-1) into q deterministic slabs,
merged in slab order, so the result is bit-identical for any worker count.

Three routes compute the per-d L-value: "reflect" (production; character
sums up to half the degree, completed by the functional equation),
"sieve" (full-degree character sums), and "naive" (per-(d, m) symbol
calls).  They agree exactly and the test suite enforces it.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from . import ffpoly, lfunc
from .ffpoly import BudgetExceededError, FqPoly

__all__ = [
    "MomentResult",
    "moment",
    "moment_float",
    "generating_series",
    "residual_table",
    "squarefree_count",
    "zeroth_moment_pair",
]

DEFAULT_OP_BUDGET = 2 * 10**11


@dataclass(frozen=True)
class MomentResult:
    q: int
    r: int
    D: int
    a: Fraction  # moment = a + b*sqrt(q)
    b: Fraction
    count: int  # number of squarefree d summed
    seconds: float
    method: str

    @property
    def value(self) -> float:
        return float(self.a) + float(self.b) * self.q**0.5

    def csv_row(self, with_timing: bool = False) -> str:
        secs = f"{self.seconds:.3f}" if with_timing else "0.000"
        return (f"{self.q},{self.r},{self.D},{self.a},{self.b},"
                f"{self.value!r},{self.count},{secs}")


def squarefree_count(q: int, D: int) -> int:
    if D == 0:
        return 1
    if D == 1:
        return q
    return q**D - q ** (D - 1)


def _estimated_ops(q: int, D: int, method: str) -> int:
    if method == "reflect":
        return q**D * q ** ((D + 1) // 2)
    return q ** (2 * D - 1)


def _half_degree(D: int) -> int:
    return (D - 1) // 2 if D % 2 == 1 else max(D // 2 - 1, 0)


def _moment_slab(q: int, r: int, D: int, top: int, method: str,
                 sieve_deg: int) -> tuple[int, int, int]:
    """Exact partial sums (U, V, count) over d with x^(D-1) coefficient = top."""
    sieve = ffpoly.build_sieve(q, max(1, sieve_deg))
    m_scale = (D - 1 + 1) // 2  # ceil((D-1)/2)
    su = sv = count = 0
    span = q ** (D - 1)
    for low in range(span):
        idx = low + top * span
        coeffs = ffpoly.monic_from_index(q, D, idx)
        if not ffpoly._is_squarefree(coeffs, q):
            continue
        count += 1
        d = FqPoly(coeffs, q)
        if method == "naive":
            a_list = [1] + [
                sum(ffpoly.symbol_raw(coeffs, ffpoly.monic_from_index(q, n, i), q)
                    for i in range(q**n))
                for n in range(1, D)
            ]
        else:
            a_list = lfunc.l_coefficients(d, sieve, method=method)
        # scale L(1/2) by q^m_scale: u + v*sqrt(q) with integers u, v
        u = v = 0
        for n, c in enumerate(a_list):
            if n % 2 == 0:
                u += c * q ** (m_scale - n // 2)
            else:
                v += c * q ** (m_scale - (n + 1) // 2)
        # exact power (u + v sqrt q)^r
        pu, pv = 1, 0
        for _ in range(r):
            pu, pv = pu * u + q * pv * v, pu * v + pv * u
        su += pu
        sv += pv
    return su, sv, count


def moment(q: int, r: int, D: int, workers: int = 1, method: str = "reflect",
           op_budget: int = DEFAULT_OP_BUDGET) -> MomentResult:
    """Exact moment of order r over monic squarefree d of degree D."""
    if D < 1 or r < 1:
        raise ValueError("need D >= 1 and r >= 1")
    if method not in ("reflect", "sieve", "naive"):
        raise ValueError(f"unknown method {method!r}")
    if _estimated_ops(q, D, method) > op_budget:
        raise BudgetExceededError(
            f"estimated {_estimated_ops(q, D, method)} ops exceeds budget {op_budget}"
        )
    start = time.perf_counter()
    sieve_deg = _half_degree(D) if method == "reflect" else max(D - 1, 1)
    tops = list(range(q))
    if workers <= 1 or D == 1:
        parts = [_moment_slab(q, r, D, t, method, sieve_deg) for t in tops]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_moment_slab, q, r, D, t, method, sieve_deg)
                for t in tops
            ]
            parts = [f.result() for f in futures]
    su = sum(p[0] for p in parts)
    sv = sum(p[1] for p in parts)
    count = sum(p[2] for p in parts)
    assert count == squarefree_count(q, D)
    m_scale = (D - 1 + 1) // 2
    den = q ** (r * m_scale)
    return MomentResult(
        q=q, r=r, D=D,
        a=Fraction(su, den), b=Fraction(sv, den),
        count=count, seconds=time.perf_counter() - start, method=method,
    )


def moment_float(q: int, r: int, D: int, **kw) -> float:
    return moment(q, r, D, **kw).value


def zeroth_moment_pair(q: int, r: int) -> tuple[Fraction, Fraction]:
    """Exact (1 - sqrt q)^(-r) = a + b sqrt(q): the degree-zero term d = 1."""
    a, b = Fraction(1), Fraction(0)
    ia, ib = Fraction(1, 1 - q), Fraction(1, 1 - q)  # 1/(1-sqrt q)
    for _ in range(r):
        a, b = a * ia + q * b * ib, a * ib + b * ia
    return a, b


def generating_series(q: int, r: int, d_max: int, xi: complex,
                      workers: int = 1, include_zero: bool = True) -> complex:
    """Partial sum over degrees of the moment generating function at xi."""
    out = 0j
    if include_zero:
        a0, b0 = zeroth_moment_pair(q, r)
        out += complex(float(a0) + float(b0) * q**0.5)
    for D in range(1, d_max + 1):
        out += moment(q, r, D, workers=workers).value * xi**D
    return out


@dataclass(frozen=True)
class ResidualRow:
    D: int
    moment_a: Fraction
    moment_b: Fraction
    moment_value: float
    prediction: float
    residual: float
    normalized: float


def residual_table(q: int, r: int, degrees: list[int],
                   predictions: dict[int, float] | None,
                   theta: float, workers: int = 1,
                   method: str = "reflect") -> list[ResidualRow]:
    """Moments minus predicted terms, normalized by q^(D (1 + theta) / 2).

    With no predictions the residual column is the raw moment.
    """
    rows = []
    for D in degrees:
        res = moment(q, r, D, workers=workers, method=method)
        pred = 0.0 if predictions is None else predictions.get(D, 0.0)
        residual = res.value - pred
        norm = residual / q ** (D * (1 + theta) / 2)
        rows.append(ResidualRow(D, res.a, res.b, res.value, pred, residual, norm))
    return rows


def default_workers() -> int:
    env = os.environ.get("QLM_WORKERS")
    if env:
        return max(1, int(env))
    return min(8, os.cpu_count() or 1)
