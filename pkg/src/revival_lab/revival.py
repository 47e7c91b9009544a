"""Resonant revival periods, the quadratic phase sequence theta_{n,m}, its
DFT coefficients, Gauss sums and the reconstruction of a2 near T_frac."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .dynamics import pseudo_classical
from .errors import HypothesisNotMet, NoResonance, NotCoprime, ShapeMismatch
from .hamiltonian import PeriodSet
from .wavepacket import WavePacket

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ResonanceData:
    frac1: Fraction
    frac2: Fraction
    frac12: Fraction
    t_frac: float
    r1: int
    s1: int
    r2: int
    s2: int
    ell1: int
    ell2: int


def rationalize(x: float, max_den: int, tol: float) -> Optional[Fraction]:
    """First continued-fraction convergent a/b of x with b <= max_den and
    |x - a/b| <= tol |x|, or None."""
    if x == 0 or not math.isfinite(x):
        return None
    sign = 1 if x > 0 else -1
    y = abs(x)
    p_prev, q_prev, p, q = 1, 0, math.floor(y), 1
    rest = y - math.floor(y)
    while q <= max_den:
        if abs(y - p / q) <= tol * y:
            return Fraction(sign * p, q)
        if rest == 0:
            return None
        y_next = 1.0 / rest
        a = math.floor(y_next)
        rest = y_next - a
        p_prev, q_prev, p, q = p, q, a * p + p_prev, a * q + q_prev
    return None


def _periodic(ell: int, fj: Fraction, f12: Fraction) -> bool:
    # theta is ell-periodic along one axis iff ell^2 fj, 2 ell fj, ell f12 are integers
    return (ell * ell * fj).denominator == 1 and (2 * ell * fj).denominator == 1 and (ell * f12).denominator == 1


def _divisors(n: int):
    small, large = [], []
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
    return small + large[::-1]


def minimal_period(fj: Fraction, f12: Fraction) -> int:
    """Smallest divisor of |q_j s_j| satisfying the periodicity congruences."""
    default = abs(fj.denominator * f12.denominator * fj.numerator)
    for d in _divisors(default):
        if _periodic(d, fj, f12):
            return d
    return default


def resonance_from_fractions(frac1, frac2, frac12, t_frac: float = float("nan")) -> ResonanceData:
    """ResonanceData for given resonance fractions, with minimal periods."""
    f1, f2, f12 = Fraction(frac1), Fraction(frac2), Fraction(frac12)
    if f1 == 0 or f2 == 0:
        raise ValueError("diagonal resonance fractions must be nonzero")
    r1, s1 = f12.numerator * f1.denominator, f12.denominator * f1.numerator
    r2, s2 = f12.numerator * f2.denominator, f12.denominator * f2.numerator
    return ResonanceData(f1, f2, f12, t_frac, r1, s1, r2, s2, minimal_period(f1, f12), minimal_period(f2, f12))


def detect_resonance(periods: PeriodSet, max_den: int = 64, tol: float = 1e-9,
                     at: Fraction = Fraction(1)) -> ResonanceData:
    """Rationalize T_rev1/T_rev12 and T_rev2/T_rev12 and build the resonance.

    With rho_j = T_revj / T_rev12 = a_j / b_j, the smallest full revival is
    T_full = x T_rev12 with x = lcm(|a_1|, |a_2|) signed so T_full > 0. All
    three fractions are then integers. ``at`` selects T_frac = at * T_full for
    fractional revivals.
    """
    t1, t2, t12 = periods.revival()
    at = Fraction(at)
    if at <= 0:
        raise ValueError("at must be positive")
    rho1 = rationalize(t1 / t12, max_den, tol)
    rho2 = rationalize(t2 / t12, max_den, tol)
    if rho1 is None or rho2 is None:
        raise NoResonance(f"revival period ratios {t1 / t12:.12g}, {t2 / t12:.12g} are not rational "
                          f"within max_den={max_den}, tol={tol:g}")
    x = math.lcm(abs(rho1.numerator), abs(rho2.numerator))
    f12 = at * x * (1 if t12 > 0 else -1)
    f1, f2 = f12 / rho1, f12 / rho2
    t_frac = float(f12) * t12
    for fj, tj in ((f1, t1), (f2, t2)):
        if abs(float(fj) * tj - t_frac) > max(tol, 1e-12) * abs(t_frac) * 10:
            raise NoResonance("rationalized fractions do not reproduce the resonance identity")
    return resonance_from_fractions(f1, f2, f12, t_frac)


def _phase_mod1(fr: Fraction) -> float:
    return float(fr - math.floor(fr))


def theta_sequence(res: ResonanceData, n0: int, m0: int) -> np.ndarray:
    """theta[n, m] = exp(-2 i pi (f1 (n-n0)^2 + f12 (n-n0)(m-m0) + f2 (m-m0)^2))
    on [0, ell1) x [0, ell2); phases reduced mod 1 exactly first."""
    out = np.empty((res.ell1, res.ell2), dtype=np.complex128)
    for n in range(res.ell1):
        dn = n - n0
        for m in range(res.ell2):
            dm = m - m0
            ph = res.frac1 * dn * dn + res.frac12 * dn * dm + res.frac2 * dm * dm
            out[n, m] = np.exp(-1j * TWO_PI * _phase_mod1(ph))
    return out


def check_periodicity(res: ResonanceData, n0: int, m0: int) -> bool:
    """Exact mod-1 check that the phase is ell1- and ell2-periodic over the domain."""
    def phase(n, m):
        dn, dm = n - n0, m - m0
        return res.frac1 * dn * dn + res.frac12 * dn * dm + res.frac2 * dm * dm

    for n in range(res.ell1):
        for m in range(res.ell2):
            base = phase(n, m)
            if (phase(n + res.ell1, m) - base).denominator != 1:
                return False
            if (phase(n, m + res.ell2) - base).denominator != 1:
                return False
    return True


def _unit_roots(k: np.ndarray, n: np.ndarray, ell: int, sign: float) -> np.ndarray:
    # exp(sign 2 i pi k n / ell) with k n reduced mod ell in integers
    return np.exp(sign * 1j * TWO_PI * (np.outer(k, n) % ell) / ell)


@dataclass(frozen=True, eq=False)
class CoefficientTable:
    b: np.ndarray
    c: np.ndarray
    ell1: int
    ell2: int
    n0: int
    m0: int


def fractional_coefficients(theta: np.ndarray, ell1: int, ell2: int, n0: int, m0: int) -> CoefficientTable:
    """b[k1, k2] = (1/(ell1 ell2)) sum theta[n, m] e^{2 i pi k1 n / ell1} e^{2 i pi k2 m / ell2}
    as a direct double sum; c adds the (n0, m0) phase."""
    theta = np.asarray(theta, dtype=np.complex128)
    if theta.shape != (ell1, ell2):
        raise ShapeMismatch(f"theta has shape {theta.shape}, expected {(ell1, ell2)}")
    k1, k2 = np.arange(ell1), np.arange(ell2)
    e1 = _unit_roots(k1, k1, ell1, 1.0)
    e2 = _unit_roots(k2, k2, ell2, 1.0)
    b = e1 @ theta @ e2.T / (ell1 * ell2)
    shift = np.exp(-1j * TWO_PI * ((k1 * n0) % ell1) / ell1)[:, None] * \
        np.exp(-1j * TWO_PI * ((k2 * m0) % ell2) / ell2)[None, :]
    c = shift * b
    b.setflags(write=False)
    c.setflags(write=False)
    return CoefficientTable(b, c, ell1, ell2, n0, m0)


def gauss_sum(ell: int, p: int, q: int, n0: int, k: int) -> complex:
    """d_k(ell, p, q) = (1/ell) sum_{n<ell} exp(-2 i pi (p/q)(n-n0)^2) exp(2 i pi k n / ell)."""
    if ell < 1 or q < 1:
        raise ValueError("ell and q must be positive")
    if math.gcd(p, q) != 1:
        raise NotCoprime(f"gcd({p}, {q}) != 1")
    total = 0j
    for n in range(ell):
        ph = Fraction(-p * (n - n0) ** 2, q) + Fraction(k * n, ell)
        total += np.exp(1j * TWO_PI * _phase_mod1(ph))
    return complex(total / ell)


def modulus_closed_form(q: int, k: int) -> float:
    """|d_k(q, p, q)|^2 for gcd(p, q) = 1."""
    if q < 1:
        raise ValueError("q must be positive")
    if q % 2:
        return 1.0 / q
    if (q // 2) % 2 == 0:
        return 2.0 / q if k % 2 == 0 else 0.0
    return 0.0 if k % 2 == 0 else 2.0 / q


def factorized_moduli(res: ResonanceData, n0: int = 0, m0: int = 0) -> np.ndarray:
    """|d_k1(ell1, p1, q1)|^2 |d_k2(ell2, p2, q2)|^2 over the table, valid when f12 is an integer."""
    if res.frac12.denominator != 1:
        raise HypothesisNotMet(f"cross fraction {res.frac12} is not an integer")
    d1 = np.array([abs(gauss_sum(res.ell1, res.frac1.numerator, res.frac1.denominator, n0, k)) ** 2
                   for k in range(res.ell1)])
    d2 = np.array([abs(gauss_sum(res.ell2, res.frac2.numerator, res.frac2.denominator, m0, k)) ** 2
                   for k in range(res.ell2)])
    return np.outer(d1, d2)


def factorized_moduli_check(res: ResonanceData, table: CoefficientTable, tol: float = 1e-10) -> bool:
    expect = factorized_moduli(res, table.n0, table.m0)
    if expect.shape != table.b.shape:
        raise ShapeMismatch("coefficient table does not match the resonance periods")
    return bool(np.max(np.abs(np.abs(table.b) ** 2 - expect)) <= tol)


def reconstruct_at_revival(p: WavePacket, periods: PeriodSet, res: ResonanceData,
                           table: CoefficientTable, t) -> complex:
    """sum_k c_k psi_cl(t + T_frac + k1 T_scl1 / ell1, t + T_frac + k2 T_scl2 / ell2)."""
    if (table.n0, table.m0) != (p.n0, p.m0):
        raise ShapeMismatch("coefficient table was built for a different (n0, m0)")
    ts1, ts2 = periods.semiclassical()
    tt = np.ravel(np.asarray(t, dtype=np.float64))
    k1, k2 = np.meshgrid(np.arange(table.ell1), np.arange(table.ell2), indexing="ij")
    k1, k2, c = k1.ravel(), k2.ravel(), table.c.ravel()
    keep = c != 0
    k1, k2, c = k1[keep], k2[keep], c[keep]
    out = np.empty(tt.size, dtype=np.complex128)
    for i, s in enumerate(tt):
        a = s + res.t_frac + k1 * ts1 / table.ell1
        b = s + res.t_frac + k2 * ts2 / table.ell2
        vals = pseudo_classical(p, periods, a, b)
        out[i] = np.sum(c * vals)
    return complex(out[0]) if np.ndim(t) == 0 else out.reshape(np.shape(t))
