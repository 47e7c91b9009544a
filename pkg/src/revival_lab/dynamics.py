"""Return amplitude, its linear and quadratic approximations, the two-time
pseudo-classical sum, the Poisson envelope, and remainder scaling in h.

Every sum runs over the packet window in lexicographic (n, m) order through
``kernels``. Functions taking a time argument return a Python complex for a
scalar t and a complex ndarray otherwise.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .errors import InsufficientData, NotAvailable
from .hamiltonian import EnergyPoint, OscillatorPair, PeriodSet, PolynomialF, eval_f, period_set
from .wavepacket import Envelope, PacketParams, WavePacket, build_packet, ft_envelope_sq

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class TimeGrid:
    t_start: float
    t_end: float
    samples: int

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be positive")
        if self.samples > 1 and not self.t_end > self.t_start:
            raise ValueError("t_end must exceed t_start")

    @property
    def values(self) -> np.ndarray:
        if self.samples == 1:
            return np.array([float(self.t_start)])
        return np.linspace(self.t_start, self.t_end, self.samples)


@dataclass(frozen=True)
class Scenario:
    """Everything needed to build a packet and its periods at a given h."""

    f: PolynomialF
    energy: EnergyPoint
    osc: OscillatorPair
    params: PacketParams
    envelope: Envelope = field(default_factory=Envelope)

    def packet(self, h: float) -> WavePacket:
        return build_packet(self.f, self.energy, h, self.osc, self.params, self.envelope)

    def periods(self, h: float) -> PeriodSet:
        return period_set(self.f, self.energy, h, self.osc)


def _shape(t, out):
    return complex(out[0]) if np.ndim(t) == 0 else out.reshape(np.shape(t))


def _energies(p: WavePacket, f: PolynomialF, osc: OscillatorPair):
    n, m = p.indices()
    tau = osc.omega1 * p.h * (n + 0.5)
    mu = osc.omega2 * p.h * (m + 0.5)
    e0 = eval_f(f, osc.omega1 * p.h * (p.n0 + 0.5), osc.omega2 * p.h * (p.m0 + 0.5))
    return np.asarray(eval_f(f, tau, mu), dtype=np.float64) - e0, float(e0)


def aligned_return_amplitude(p: WavePacket, f: PolynomialF, osc: OscillatorPair, t):
    """exp(+i t F(tau_n0, mu_m0) / h) r(t), the form compared against the approximations."""
    de, _ = _energies(p, f, osc)
    out = kernels.phase_sum(p.weights, de / p.h, np.ravel(t))
    return _shape(t, out)


def return_amplitude(p: WavePacket, f: PolynomialF, osc: OscillatorPair, t):
    """r(t) = sum a^2 exp(-i t F(tau_n, mu_m) / h).

    The centre energy is factored out so the summed phases stay small.
    """
    de, e0 = _energies(p, f, osc)
    tt = np.ravel(np.asarray(t, dtype=np.float64))
    out = kernels.phase_sum(p.weights, de / p.h, tt) * np.exp(-1j * tt * (e0 / p.h))
    return _shape(t, out)


def autocorrelation(p: WavePacket, f: PolynomialF, osc: OscillatorPair, grid: TimeGrid):
    t = grid.values
    return t, np.abs(return_amplitude(p, f, osc, t))


def _linear_rates(p: WavePacket, t1: float, t2: float):
    dn, dm = p.offsets
    return TWO_PI * (dn / t1 + dm / t2)


def linear_approx(p: WavePacket, periods: PeriodSet, t, use_semiclassical: bool = False):
    """sum a^2 exp(-2 i pi t ((n-n0)/T1 + (m-m0)/T2)), classical or semiclassical periods."""
    t1, t2 = periods.linear(use_semiclassical)
    out = kernels.phase_sum(p.weights, _linear_rates(p, t1, t2), np.ravel(t))
    return _shape(t, out)


def quadratic_approx(p: WavePacket, periods: PeriodSet, t, use_semiclassical_revival: bool = False):
    """Linear terms with semiclassical periods plus the three revival terms."""
    t1, t2 = periods.semiclassical()
    if use_semiclassical_revival:
        r1, r2, r12 = periods.semiclassical_revival()
    else:
        r1, r2, r12 = periods.revival()
    dn, dm = p.offsets
    rates = TWO_PI * (dn / t1 + dm / t2 + dn * dn / r1 + dm * dm / r2 + dn * dm / r12)
    out = kernels.phase_sum(p.weights, rates, np.ravel(t))
    return _shape(t, out)


def pseudo_classical(p: WavePacket, periods: PeriodSet, t1, t2, use_semiclassical: bool = True):
    """psi_cl(t1, t2) = sum a^2 exp(-2 i pi (t1 (n-n0)/T1 + t2 (m-m0)/T2))."""
    p1, p2 = periods.linear(use_semiclassical)
    dn, dm = p.offsets
    a, b = np.broadcast_arrays(np.asarray(t1, dtype=np.float64), np.asarray(t2, dtype=np.float64))
    out = kernels.phase_sum2(p.weights, TWO_PI * dn / p1, TWO_PI * dm / p2, a.ravel(), b.ravel())
    return complex(out[0]) if a.ndim == 0 else out.reshape(a.shape)


def _period_fraction_distance(t, period):
    x = np.asarray(t, dtype=np.float64) / period
    return np.abs(x - np.rint(x))


def envelope_formula(p: WavePacket, periods: PeriodSet, env: Envelope, t, use_semiclassical: bool = False):
    """Leading Poisson term F(chi^2)(z1, z2) / F(chi^2)(0, 0).

    z_i = h^(d_i' - 1) d(t / T_i, Z) / w_i, i.e. the distance to the nearest
    multiple of the period measured in periods.
    """
    if not env.has_transform:
        raise NotAvailable("envelope formula needs the Fourier transform of chi^2")
    t1, t2 = periods.linear(use_semiclassical)
    h, pr, osc = p.h, p.params, p.osc
    z1 = h ** (pr.delta1p - 1.0) * _period_fraction_distance(t, t1) / osc.omega1
    z2 = h ** (pr.delta2p - 1.0) * _period_fraction_distance(t, t2) / osc.omega2
    out = ft_envelope_sq(env, z1, z2) / ft_envelope_sq(env, 0.0, 0.0)
    return float(out) if np.ndim(t) == 0 else np.asarray(out)


def poisson_envelope(p: WavePacket, periods: PeriodSet, env: Envelope, t, terms: int = 3,
                     use_semiclassical: bool = False):
    """Full Poisson-dual sum of the linear approximation over Z^2.

    Keeps 2*terms+1 images per axis around the nearest one; exact for the
    untruncated lattice up to the dropped images.
    """
    if not env.has_transform:
        raise NotAvailable("Poisson envelope needs the Fourier transform of chi^2")
    t1, t2 = periods.linear(use_semiclassical)
    h, pr, osc = p.h, p.params, p.osc
    s1 = h ** (pr.delta1p - 1.0) / osc.omega1
    s2 = h ** (pr.delta2p - 1.0) / osc.omega2
    tt = np.ravel(np.asarray(t, dtype=np.float64))
    x1 = tt / t1
    x2 = tt / t2
    x1 = x1 - np.rint(x1)
    x2 = x2 - np.rint(x2)
    img = np.arange(-terms, terms + 1, dtype=np.float64)
    z1 = s1 * (x1[:, None, None] + img[None, :, None])
    z2 = s2 * (x2[:, None, None] + img[None, None, :])
    num = np.asarray(ft_envelope_sq(env, z1, z2)).sum(axis=(1, 2))
    den = np.asarray(ft_envelope_sq(env, s1 * img[:, None], s2 * img[None, :])).sum()
    out = num / den
    return float(out[0]) if np.ndim(t) == 0 else out.reshape(np.shape(t))


@dataclass(frozen=True)
class ScalingResult:
    kind: str
    h_values: tuple
    errors: tuple
    slope: Optional[float]
    theoretical: float
    exact: bool = False


def remainder_error(kind: str, scenario: Scenario, h: float, exponent: float, samples: int = 256) -> float:
    """sup over a grid of [0, h^exponent] of |aligned r(t) - approximation(t)|."""
    p = scenario.packet(h)
    periods = scenario.periods(h)
    t = np.linspace(0.0, h ** exponent, samples)
    exact = aligned_return_amplitude(p, scenario.f, scenario.osc, t)
    if kind == "linear":
        approx = linear_approx(p, periods, t, use_semiclassical=True)
    elif kind == "quadratic":
        approx = quadratic_approx(p, periods, t)
    else:
        raise ValueError("kind must be 'linear' or 'quadratic'")
    return float(np.max(np.abs(exact - approx)))


def theoretical_exponent(kind: str, exponent: float, delta_min: float) -> float:
    if kind == "linear":
        return exponent + 2 * delta_min - 1
    return exponent + 3 * delta_min - 1


def remainder_scaling(kind: str, scenario: Scenario, h_list: Sequence[float], alpha_or_beta: float,
                      samples: int = 256) -> ScalingResult:
    """Least-squares slope of log(sup error) against log(h)."""
    if kind not in ("linear", "quadratic"):
        raise ValueError("kind must be 'linear' or 'quadratic'")
    if len(h_list) < 3:
        raise InsufficientData("need at least 3 h values to fit a slope")
    dmin = scenario.params.delta_min
    lower = 1 - 2 * dmin if kind == "linear" else 1 - 3 * dmin
    if not alpha_or_beta > lower:
        raise ValueError(f"time exponent must exceed {lower:.6g} for the {kind} remainder")
    hs = tuple(float(h) for h in h_list)
    errs = tuple(remainder_error(kind, scenario, h, alpha_or_beta, samples) for h in hs)
    theory = theoretical_exponent(kind, alpha_or_beta, dmin)
    if all(e == 0.0 for e in errs):
        return ScalingResult(kind, hs, errs, None, theory, exact=True)
    pos = [(h, e) for h, e in zip(hs, errs) if e > 0.0]
    if len(pos) < 2:
        raise InsufficientData("fewer than two nonzero errors in the sweep")
    x = np.log([h for h, _ in pos])
    y = np.log([e for _, e in pos])
    slope = float(np.polyfit(x, y, 1)[0])
    return ScalingResult(kind, hs, errs, slope, theory)
