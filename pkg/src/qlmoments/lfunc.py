"""L-functions of quadratic characters chi_d over F_q[x].

For monic squarefree non-constant d the L-function is a polynomial of
degree deg(d) - 1 in u = q^(-s); its integer coefficients are the
character sums a_n = sum over monic m of degree n of (d/m).  They are
computed by seeding the symbol at irreducibles and extending
multiplicatively through a factor sieve, one degree at a time.

A second route ("reflect") computes only the low half of the coefficients
and recovers the rest exactly from the functional equation; every division
it performs must be exact in the integers, which is asserted.  The moment
oracle uses this route; the straight sieve route is the reference
implementation and the two are cross-checked in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import ffpoly
from .exactnum import KNum, zeta_at_half, l_at_half_unit
from .ffpoly import FactorSieve, FqPoly

__all__ = [
    "LPolynomial",
    "l_polynomial",
    "character_row_sums",
    "l_coefficients",
    "l_at_half",
    "l_at_half_pair",
    "l_eval",
    "gamma_q",
    "functional_equation_residual",
]


@dataclass(frozen=True)
class LPolynomial:
    """Coefficients of L(s, chi_d) as a polynomial in q^(-s)."""

    d: FqPoly
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.coeffs and self.coeffs[0] != 1:
            raise ValueError("constant coefficient must be 1")
        q = self.d.q
        for n, a in enumerate(self.coeffs):
            if abs(a) > q**n:
                raise ValueError("coefficient exceeds trivial bound")


def _check_d(d: FqPoly) -> None:
    if not d.is_monic:
        raise ValueError("d must be monic")
    if not d.is_squarefree():
        raise ValueError("d must be squarefree")


def character_row_sums(d: FqPoly, n_max: int, sieve: FactorSieve | None = None
                       ) -> list[int]:
    """[a_0, ..., a_{n_max}] with a_n the symbol sum over monic m of degree n."""
    q = d.q
    if sieve is None or sieve.max_deg < n_max:
        sieve = ffpoly.build_sieve(q, max(1, n_max))
    dc = d.coeffs
    sums = [1]
    rows: list[list[int]] = [[1]]
    for n in range(1, n_max + 1):
        pointers = sieve.factor_pointers(n)
        irr = sieve._irr_tuples[n]
        row = [0] * len(pointers)
        pos = 0
        for idx, ent in enumerate(pointers):
            if ent is None:
                row[idx] = ffpoly.symbol_raw(dc, irr[pos], q)
                pos += 1
            else:
                e, p_idx_deg, f, k_idx = ent
                pe = sieve.irreducible[e][p_idx_deg]
                row[idx] = rows[e][pe] * rows[f][k_idx]
        rows.append(row)
        sums.append(sum(row))
    return sums


def _reflect_coefficients(low: list[int], deg_d: int, q: int) -> list[int]:
    """Complete a coefficient list from its low half via the functional equation.

    For monic squarefree d this uses a_{D-1-n} = q^((D-1)/2 - n) a_n for odd
    degree D, and the reflection of b_n = a_n - q a_{n-1} for even D; all
    divisions are exact and asserted.
    """
    big = deg_d
    if big % 2 == 1:
        h = (big - 1) // 2
        assert len(low) >= h + 1
        out = list(low[: h + 1])
        for n in range(h - 1, -1, -1):
            out.append(q ** (h - n) * low[n])
        return out
    h = big // 2 - 1
    assert len(low) >= h + 1
    a = list(low[: h + 1]) + [None] * (big - h - 1)
    b_high = {}
    for n in range(0, h + 1):
        b_n = low[n] - (q * low[n - 1] if n >= 1 else 0)
        b_high[big - n] = q ** (big // 2 - n) * b_n
    # unwind a_{D-1} .. a_{D/2} from the top using a_D = 0
    prev = 0  # a_m for m = big
    for m in range(big, big // 2, -1):
        num = prev - b_high[m]
        assert num % q == 0, "functional-equation reflection division not exact"
        prev = num // q
        a[m - 1] = prev
    assert all(v is not None for v in a)
    return a


def l_coefficients(d: FqPoly, sieve: FactorSieve | None = None,
                   method: str = "sieve") -> list[int]:
    """Integer coefficient list of L(s, chi_d), length deg(d).

    method "sieve" sums characters at every degree up to deg(d) - 1;
    "reflect" sums only the low half and completes by the functional
    equation.  Both are exact.
    """
    _check_d(d)
    big = d.degree
    if big == 0:
        raise ValueError("d must be non-constant here")
    if method == "sieve":
        return character_row_sums(d, big - 1, sieve)
    if method == "reflect":
        half = (big - 1) // 2 if big % 2 == 1 else big // 2 - 1
        low = character_row_sums(d, max(half, 0), sieve)
        return _reflect_coefficients(low, big, d.q)
    raise ValueError(f"unknown method {method!r}")


def l_polynomial(d: FqPoly, sieve: FactorSieve | None = None) -> LPolynomial:
    return LPolynomial(d, tuple(l_coefficients(d, sieve, method="sieve")))


def l_at_half_pair(d: FqPoly, sieve: FactorSieve | None = None,
                   method: str = "reflect") -> tuple[Fraction, Fraction]:
    """L(1/2, chi_d) = a + b*sqrt(q) with exact rational a, b."""
    q = d.q
    if d.degree == 0:
        # 1/(1 -+ sqrt(q)) rationalized against the conjugate
        den = 1 - q
        if d.sign() == 1:
            return Fraction(1, den), Fraction(1, den)
        return Fraction(1, den), Fraction(-1, den)
    _check_d(d)
    coeffs = l_coefficients(d, sieve, method)
    a = Fraction(0)
    b = Fraction(0)
    for n, c in enumerate(coeffs):
        if n % 2 == 0:
            a += Fraction(c, q ** (n // 2))
        else:
            b += Fraction(c, q ** ((n + 1) // 2))
    return a, b


def l_at_half(d: FqPoly, sieve: FactorSieve | None = None) -> KNum:
    """Exact L(1/2, chi_d) as an element of Q(sqrt q) inside K."""
    q = d.q
    if d.degree == 0:
        return zeta_at_half(q) if d.sign() == 1 else l_at_half_unit(q)
    a, b = l_at_half_pair(d, sieve)
    return KNum.from_sqrt_pair(a, b, q)


def l_eval(d: FqPoly, s: complex, sieve: FactorSieve | None = None,
           coeffs: list[int] | None = None) -> complex:
    """L(s, chi_d) for complex s (closed forms for constant d)."""
    q = d.q
    if d.degree == 0:
        sgn = d.sign()
        return 1 / (1 - sgn * q ** (1 - s))
    if coeffs is None:
        coeffs = l_coefficients(d, sieve)
    u = q ** (-s)
    out = 0j
    for c in reversed(coeffs):
        out = out * u + c
    return out


def gamma_q(q: int, s: complex, d: FqPoly) -> complex:
    """The epsilon-factor of the functional equation at s for the character of d."""
    parity = (-1) ** d.degree
    sgn = d.sign()
    out = q ** (0.5 * (3 + parity) * (s - 0.5))
    if parity == 1:  # even degree
        out *= (1 - sgn * q ** (-s)) / (1 - sgn * q ** (s - 1))
    return out


def functional_equation_residual(d: FqPoly, s: complex,
                                 sieve: FactorSieve | None = None,
                                 coeffs: list[int] | None = None) -> complex:
    """L(s) - gamma_q(s, d) |d|^(1/2 - s) L(1-s); vanishes for valid inputs."""
    _check_d(d)
    if d.degree == 0:
        raise ValueError("d must be non-constant")
    q = d.q
    if coeffs is None:
        coeffs = l_coefficients(d, sieve)
    left = l_eval(d, s, coeffs=coeffs)
    right = gamma_q(q, s, d) * q ** (d.degree * (0.5 - s)) * l_eval(
        d, 1 - s, coeffs=coeffs)
    return left - right
