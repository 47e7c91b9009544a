"""Continued fractions, flow-to-lattice distances, approach times and
Roth-type horizons for the linear flow t -> (a t, b t) on the torus."""
from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Iterator, NamedTuple, Optional, Sequence, Union

import numpy as np

from .errors import EtaTooLarge, PrecisionExhausted

SQRT2 = math.sqrt(2.0)


class Convergent(NamedTuple):
    p: int
    q: int


@dataclass(frozen=True)
class QuadraticIrrational:
    """(p + q sqrt(d)) / r with d > 0 not a perfect square, q != 0, r != 0."""

    p: int
    q: int
    d: int
    r: int

    def __post_init__(self):
        if self.d <= 0 or math.isqrt(self.d) ** 2 == self.d:
            raise ValueError("d must be a positive non-square integer")
        if self.q == 0 or self.r == 0:
            raise ValueError("q and r must be nonzero")

    @classmethod
    def sqrt(cls, d: int) -> "QuadraticIrrational":
        return cls(0, 1, d, 1)

    @classmethod
    def golden(cls) -> "QuadraticIrrational":
        return cls(1, 1, 5, 2)

    def __float__(self) -> float:
        return float(self.decimal(40))

    def decimal(self, digits: int = 50) -> Decimal:
        with localcontext() as ctx:
            ctx.prec = digits + 10
            return (Decimal(self.p) + Decimal(self.q) * Decimal(self.d).sqrt()) / Decimal(self.r)

    def _canonical(self):
        # rewrite as (P + sqrt(D)) / Q with Q dividing D - P^2
        p, q, d, r = self.p, self.q, self.d, self.r
        s = 1 if q > 0 else -1
        P, D, Q = s * p, q * q * d, s * r
        if (D - P * P) % Q:
            P, D, Q = P * abs(Q), D * Q * Q, Q * abs(Q)
        return P, D, Q

    def partial_quotients(self) -> Iterator[int]:
        """Exact floor/reciprocal iteration; never runs out of precision."""
        P, D, Q = self._canonical()
        s = math.isqrt(D)
        while True:
            # floor((P + sqrt(D)) / Q); sqrt(D) lies strictly between s and s + 1
            a = (P + s) // Q if Q > 0 else -((P + s) // -Q) - 1
            yield a
            P = a * Q - P
            Q = (D - P * P) // Q


@dataclass(frozen=True)
class ConvergentSequence:
    theta: float
    partial_quotients: tuple
    convergents: tuple
    terminated: bool = False

    @property
    def p(self) -> list:
        return [c.p for c in self.convergents]

    @property
    def q(self) -> list:
        return [c.q for c in self.convergents]

    def __len__(self):
        return len(self.partial_quotients)


Number = Union[QuadraticIrrational, Fraction, int, float]


def _float_quotients(x: float, max_terms: int, strict: bool):
    out = []
    for k in range(max_terms):
        a = math.floor(x)
        out.append(a)
        frac = x - a
        if k + 1 == max_terms:
            break
        if frac < 1e-12 or 1.0 - frac < 1e-12:
            if strict:
                raise PrecisionExhausted(
                    f"floating expansion exhausted after {len(out)} terms (residual {frac:.3g})")
            return out, True
        x = 1.0 / frac
    return out, False


def cf_expand(theta: Number, max_terms: int, strict: bool = True) -> ConvergentSequence:
    """Partial quotients and convergents p_k/q_k of theta > 0.

    Exact inputs (QuadraticIrrational, Fraction, int) are expanded exactly.
    Floats stop with PrecisionExhausted when the residual comes within 1e-12
    of an integer before max_terms; with strict=False the terms found so far
    are returned instead.
    """
    if max_terms < 1:
        raise ValueError("max_terms must be positive")
    if not float(theta) > 0:
        raise ValueError("theta must be positive")
    terminated = False
    if isinstance(theta, QuadraticIrrational):
        value = float(theta)
        it = theta.partial_quotients()
        quots = [next(it) for _ in range(max_terms)]
    elif isinstance(theta, (Fraction, int)):
        x = Fraction(theta)
        value = float(x)
        quots = []
        while len(quots) < max_terms:
            a = math.floor(x)
            quots.append(a)
            x -= a
            if x == 0:
                terminated = True
                break
            x = 1 / x
    else:
        value = float(theta)
        quots, terminated = _float_quotients(value, max_terms, strict)
    convs = []
    p_prev, q_prev, p, q = 1, 0, quots[0], 1
    convs.append(Convergent(p, q))
    for a in quots[1:]:
        p_prev, q_prev, p, q = p, q, a * p + p_prev, a * q + q_prev
        convs.append(Convergent(p, q))
    return ConvergentSequence(value, tuple(quots), tuple(convs), terminated)


def fibonacci(n: int) -> int:
    """F_0 = F_1 = 1 indexing, matching q_n of the golden ratio."""
    a, b = 1, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def lattice_distance(t: float, period: float) -> float:
    """min over integers l of |t - l * period|."""
    if not period > 0:
        raise ValueError("period must be positive")
    return abs(math.remainder(t, period))


@dataclass(frozen=True)
class FlowParams:
    """Flow speeds a = 1/|T_cl1|, b = 1/|T_cl2|; theta = b / a."""

    a_bold: float
    b_bold: float

    def __post_init__(self):
        if not (self.a_bold > 0 and self.b_bold > 0):
            raise ValueError("flow speeds must be positive")

    @classmethod
    def from_periods(cls, t_cl1: float, t_cl2: float) -> "FlowParams":
        return cls(1.0 / abs(t_cl1), 1.0 / abs(t_cl2))

    @property
    def theta(self) -> float:
        return self.b_bold / self.a_bold

    @property
    def norm(self) -> float:
        return math.hypot(self.a_bold, self.b_bold)

    @property
    def omega_asym(self) -> float:
        a, b = self.a_bold, self.b_bold
        return (a + b * self.theta) / (a * a + b * b)


def flow_lattice_distance(fp: FlowParams, t):
    """Distance from (a t, b t) to Z^2 minus the origin, via a 3x3 search
    around the rounded point."""
    tt = np.atleast_1d(np.asarray(t, dtype=np.float64))
    x = fp.a_bold * tt
    y = fp.b_bold * tt
    cx, cy = np.rint(x), np.rint(y)
    best = np.full(tt.shape, np.inf)
    for i in (-1.0, 0.0, 1.0):
        for j in (-1.0, 0.0, 1.0):
            nx, ny = cx + i, cy + j
            d = np.hypot(x - nx, y - ny)
            d = np.where((nx == 0) & (ny == 0), np.inf, d)
            best = np.minimum(best, d)
    return float(best[0]) if np.ndim(t) == 0 else best.reshape(np.shape(t))


def approach_time(fp: FlowParams, conv: Convergent) -> float:
    """(a q + b p) / (a^2 + b^2) for a convergent p/q of theta."""
    a, b = fp.a_bold, fp.b_bold
    return (a * conv.q + b * conv.p) / (a * a + b * b)


def approach_distance_bound(fp: FlowParams, conv: Convergent) -> float:
    return fp.a_bold / (fp.norm * conv.q)


def neighborhood_bound(fp: FlowParams, conv: Convergent, r: float) -> float:
    """Upper bound on the flow-lattice distance over the ball of radius r
    around the approach time of conv."""
    if r < 0:
        raise ValueError("r must be nonnegative")
    a, b, q = fp.a_bold, fp.b_bold, conv.q
    s = a * a + b * b
    return math.hypot(a * b / q + r * a * s, a * a / q + r * b * s) / s


def diophantine_constant(theta: Union[QuadraticIrrational, float], q_max: int, q_min: int = 1) -> float:
    """min over q_min <= q <= q_max of q^2 |theta - p/q| with p nearest to q theta.

    Quadratic irrationals are evaluated in 50-digit decimal arithmetic.
    Raising q_min estimates the liminf instead of the global minimum.
    """
    if not 1 <= q_min <= q_max:
        raise ValueError("need 1 <= q_min <= q_max")
    if isinstance(theta, QuadraticIrrational):
        with localcontext() as ctx:
            ctx.prec = 60
            th = theta.decimal(50)
            best = None
            for q in range(q_min, q_max + 1):
                x = q * th
                v = q * abs(x - x.to_integral_value())
                if best is None or v < best:
                    best = v
            return float(best)
    th = float(theta)
    q = np.arange(q_min, q_max + 1, dtype=np.float64)
    x = q * th
    return float(np.min(q * np.abs(x - np.rint(x))))


def k_epsilon(fp: FlowParams, c_eps: float) -> float:
    """Lattice-to-line constant C_eps * min(u1, u2) with u = (a, b) / |(a, b)|."""
    return c_eps * min(fp.a_bold, fp.b_bold) / fp.norm


def eta_limit(eps: float) -> float:
    return SQRT2 ** (1.0 + eps) / 2.0


def t_eta(fp: FlowParams, k_eps: float, eps: float, eta: float) -> float:
    """Horizon before which the flow stays at distance >= eta from Z^2 minus 0."""
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    if not 0 < k_eps <= 0.5:
        raise ValueError("k_eps must lie in (0, 1/2]")
    if not eta > 0:
        raise ValueError("eta must be positive")
    if eta >= eta_limit(eps):
        raise EtaTooLarge(f"eta={eta} must be below sqrt(2)^(1+eps)/2 = {eta_limit(eps):.6g}")
    return ((k_eps / eta) ** (1.0 / (1.0 + eps)) - SQRT2 / 2.0) / fp.norm


@dataclass(frozen=True)
class RevivalSetCount:
    members: tuple
    count: int
    upper_bound: int
    interval: tuple
    narrow_bound: int = 0


def revival_set_interval(h: float, delta_min: float, delta_p_min: float, mu: float,
                         inner: bool = False) -> tuple:
    """[h^(d'-1+mu), h^(1-2d-mu)], or with inner=True the narrower
    [h^(d'-1-mu), h^(1-2d+mu)] on which the near-revival bound is proved."""
    if inner:
        return h ** (delta_p_min - 1.0 - mu), h ** (1.0 - 2.0 * delta_min + mu)
    return h ** (delta_p_min - 1.0 + mu), h ** (1.0 - 2.0 * delta_min - mu)


def count_revival_set(conv: ConvergentSequence, h: float, delta_i_min: float, delta_p_min: float,
                      mu: float, inner: bool = False) -> RevivalSetCount:
    """Convergent denominators inside the near-revival interval.

    upper_bound is floor(hi - lo) + 1 for the interval actually used, so
    count <= upper_bound always. narrow_bound is the same count for the
    narrower interval [h^(d'-1-mu), h^(1-2d+mu)].
    """
    lo, hi = revival_set_interval(h, delta_i_min, delta_p_min, mu, inner)
    nlo, nhi = revival_set_interval(h, delta_i_min, delta_p_min, mu, True)
    narrow = math.floor(nhi - nlo) + 1 if nhi >= nlo else 0
    if hi < lo:
        return RevivalSetCount((), 0, 0, (lo, hi), narrow)
    qs = conv.q
    if not conv.terminated and qs[-1] <= hi:
        raise ValueError(f"expansion too short: last q={qs[-1]} does not exceed {hi:.6g}")
    members = tuple(sorted({q for q in qs if lo <= q <= hi}))
    return RevivalSetCount(members, len(members), math.floor(hi - lo) + 1, (lo, hi), narrow)


def convergents_in(conv: ConvergentSequence, lo: float, hi: float) -> list:
    """Convergents (first occurrence per q) with lo <= q <= hi."""
    seen, out = set(), []
    for c in conv.convergents:
        if lo <= c.q <= hi and c.q not in seen:
            seen.add(c.q)
            out.append(c)
    return out
