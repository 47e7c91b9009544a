"""Localized initial state on a truncated lattice window."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Optional

import numpy as np

from .errors import NotAvailable, WindowDegenerate
from .hamiltonian import EnergyPoint, OscillatorPair, PolynomialF, closest_quantum_numbers


def _gaussian(x, y):
    return np.exp(-(np.square(x) + np.square(y)) / 2.0)


@dataclass(frozen=True)
class Envelope:
    """Profile chi(x, y) of the packet.

    kind="gaussian" is exp(-(x^2+y^2)/2) with an analytic transform of chi^2.
    kind="tabulated" wraps a user callable (for example a grid interpolator);
    its transform is only available if supplied as ``ft_chi_sq``.
    """

    kind: str = "gaussian"
    chi: Optional[Callable] = None
    ft_chi_sq: Optional[Callable] = None

    def __post_init__(self):
        if self.kind not in ("gaussian", "tabulated"):
            raise ValueError(f"unknown envelope kind {self.kind!r}")
        if self.kind == "tabulated" and self.chi is None:
            raise ValueError("tabulated envelope needs a chi callable")

    @classmethod
    def gaussian(cls) -> "Envelope":
        return cls("gaussian")

    @classmethod
    def tabulated(cls, chi: Callable, ft_chi_sq: Optional[Callable] = None) -> "Envelope":
        return cls("tabulated", chi, ft_chi_sq)

    def __call__(self, x, y):
        if self.kind == "gaussian":
            return _gaussian(x, y)
        return np.asarray(self.chi(x, y), dtype=float)

    @property
    def has_transform(self) -> bool:
        return self.kind == "gaussian" or self.ft_chi_sq is not None

    @property
    def ft_chi_sq_at_zero(self) -> float:
        return float(ft_envelope_sq(self, 0.0, 0.0))


def ft_envelope_sq(env: Envelope, z1, z2):
    """Fourier transform of chi^2 with kernel exp(-2 i pi x.z)."""
    if env.kind == "gaussian":
        return math.pi * np.exp(-math.pi ** 2 * (np.square(z1) + np.square(z2)))
    if env.ft_chi_sq is None:
        raise NotAvailable("no Fourier transform supplied for this tabulated envelope")
    return env.ft_chi_sq(z1, z2)


@dataclass(frozen=True)
class PacketParams:
    delta1p: float
    delta2p: float
    delta1: float
    delta2: float
    window_factor: float = 8.0

    def __post_init__(self):
        for name in ("delta1p", "delta2p", "delta1", "delta2"):
            v = getattr(self, name)
            if not 0.5 < v < 1.0:
                raise ValueError(f"{name} must lie in (1/2, 1), got {v}")
        if not self.delta1p > self.delta1:
            raise ValueError("delta1p must exceed delta1")
        if not self.delta2p > self.delta2:
            raise ValueError("delta2p must exceed delta2")
        if self.window_factor < 0:
            raise ValueError("window_factor must be nonnegative")

    @property
    def delta_min(self) -> float:
        return min(self.delta1, self.delta2)

    @property
    def delta_p_min(self) -> float:
        return min(self.delta1p, self.delta2p)


@dataclass(frozen=True, eq=False)
class WavePacket:
    """Coefficients a[n - n_lo, m - m_lo] on [n_lo, n_hi] x [m_lo, m_hi]."""

    n0: int
    m0: int
    h: float
    n_lo: int
    n_hi: int
    m_lo: int
    m_hi: int
    coeffs: np.ndarray
    k_h: float
    osc: OscillatorPair
    params: PacketParams

    @property
    def window(self):
        return (self.n_lo, self.n_hi), (self.m_lo, self.m_hi)

    @property
    def shape(self):
        return self.coeffs.shape

    @cached_property
    def offsets(self):
        """Flattened (n - n0, m - m0) in lexicographic (n, m) order."""
        dn = np.arange(self.n_lo, self.n_hi + 1) - self.n0
        dm = np.arange(self.m_lo, self.m_hi + 1) - self.m0
        gn, gm = np.meshgrid(dn, dm, indexing="ij")
        return gn.ravel().astype(np.float64), gm.ravel().astype(np.float64)

    @cached_property
    def weights(self) -> np.ndarray:
        return np.square(self.coeffs).ravel()

    def indices(self):
        n = np.arange(self.n_lo, self.n_hi + 1)
        m = np.arange(self.m_lo, self.m_hi + 1)
        gn, gm = np.meshgrid(n, m, indexing="ij")
        return gn.ravel(), gm.ravel()

    def norm(self) -> float:
        return math.sqrt(math.fsum(self.weights))


def _half_width(W, h, dp, d, w):
    # W envelope widths, widened to cover the index set Delta; W = 0 keeps
    # only the centre point
    if W == 0:
        return 0
    return max(math.ceil(W * h ** (dp - 1.0) / w), math.floor(h ** (d - 1.0)))


def build_packet(f: PolynomialF, e: EnergyPoint, h: float, osc: OscillatorPair,
                 params: PacketParams, env: Envelope = Envelope()) -> WavePacket:
    """a_{n,m} = K chi(w1 (n-n0) h^(1-d1'), w2 (m-m0) h^(1-d2')) normalized on the window.

    f is accepted for interface symmetry; the packet only depends on the
    oscillator spectrum.
    """
    if not h > 0:
        raise ValueError("h must be positive")
    n0, m0 = closest_quantum_numbers(e, h, osc)
    W = params.window_factor
    hw1 = _half_width(W, h, params.delta1p, params.delta1, osc.omega1)
    hw2 = _half_width(W, h, params.delta2p, params.delta2, osc.omega2)
    n_lo, n_hi = max(0, n0 - hw1), n0 + hw1
    m_lo, m_hi = max(0, m0 - hw2), m0 + hw2
    if n_hi < n_lo or m_hi < m_lo:
        raise WindowDegenerate("clipped window is empty")
    x = osc.omega1 * (np.arange(n_lo, n_hi + 1) - n0) * h ** (1.0 - params.delta1p)
    y = osc.omega2 * (np.arange(m_lo, m_hi + 1) - m0) * h ** (1.0 - params.delta2p)
    chi = env(x[:, None], y[None, :])
    chi = np.broadcast_to(chi, (x.size, y.size)).astype(np.float64)
    if np.any(chi < 0):
        raise ValueError("envelope must be nonnegative")
    norm = math.sqrt(math.fsum(np.square(chi).ravel()))
    if norm == 0.0:
        raise WindowDegenerate("envelope vanishes on the whole window")
    k = 1.0 / norm
    a = chi * k
    a.setflags(write=False)
    return WavePacket(n0, m0, h, n_lo, n_hi, m_lo, m_hi, a, k, osc, params)


def k_h_closed_form(h: float, osc: OscillatorPair, params: PacketParams, env: Envelope = Envelope()) -> float:
    """Asymptotic normalization sqrt(w1 w2 / F(chi^2)(0)) h^((2 - d1' - d2')/2)."""
    return math.sqrt(osc.omega1 * osc.omega2 / env.ft_chi_sq_at_zero) * h ** ((2.0 - params.delta1p - params.delta2p) / 2.0)


def tail_mass(p: WavePacket, delta1: float, delta2: float) -> float:
    """Mass of the packet outside |n-n0| <= h^(d1-1), |m-m0| <= h^(d2-1)."""
    dn, dm = p.offsets
    outside = (np.abs(dn) > p.h ** (delta1 - 1.0)) | (np.abs(dm) > p.h ** (delta2 - 1.0))
    return math.fsum(p.weights[outside])
