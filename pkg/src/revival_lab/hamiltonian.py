"""Polynomial Hamiltonian F(P1, P2), oscillator spectra and period families."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

import numpy as np

from .errors import PeriodUndefined


@dataclass(frozen=True)
class PolynomialF:
    """F(X, Y) = sum c_ij X^i Y^j, stored as a sorted tuple of ((i, j), c)."""

    terms: tuple = ()

    def __post_init__(self):
        items = self.terms.items() if isinstance(self.terms, Mapping) else self.terms
        merged: dict = {}
        for (i, j), c in items:
            i, j = int(i), int(j)
            if i < 0 or j < 0:
                raise ValueError("exponents must be nonnegative")
            merged[(i, j)] = merged.get((i, j), 0.0) + float(c)
        clean = tuple(sorted((k, v) for k, v in merged.items() if v != 0.0))
        object.__setattr__(self, "terms", clean)

    @classmethod
    def from_terms(cls, triples: Iterable) -> "PolynomialF":
        """Build from (i, j, c) triples; repeated exponents are summed."""
        return cls(tuple(((i, j), c) for i, j, c in triples))

    @property
    def coefficients(self) -> dict:
        return dict(self.terms)

    @property
    def degree(self) -> tuple[int, int]:
        if not self.terms:
            return (0, 0)
        return (max(i for (i, _), _ in self.terms), max(j for (_, j), _ in self.terms))

    def _dense(self) -> np.ndarray:
        dx, dy = self.degree
        c = np.zeros((dx + 1, dy + 1))
        for (i, j), v in self.terms:
            c[i, j] = v
        return c

    def __call__(self, x, y):
        return eval_f(self, x, y)

    def diff(self, dx: int = 0, dy: int = 0) -> "PolynomialF":
        """Exact partial derivative d^(dx+dy) F / dX^dx dY^dy."""
        out = []
        for (i, j), c in self.terms:
            if i < dx or j < dy:
                continue
            out.append(((i - dx, j - dy), c * math.perm(i, dx) * math.perm(j, dy)))
        return PolynomialF(tuple(out))


def eval_f(f: PolynomialF, x, y):
    """Nested Horner: outer in x from the highest power, inner in y.

    Works elementwise on numpy arrays.
    """
    c = f._dense()
    acc = 0.0
    for i in range(c.shape[0] - 1, -1, -1):
        row = 0.0
        for j in range(c.shape[1] - 1, -1, -1):
            row = row * y + c[i, j]
        acc = acc * x + row
    return acc


@dataclass(frozen=True)
class Partials:
    gx: float
    gy: float
    hxx: float
    hyy: float
    hxy: float


def partials(f: PolynomialF, at) -> Partials:
    x, y = at
    return Partials(
        gx=float(eval_f(f.diff(1, 0), x, y)),
        gy=float(eval_f(f.diff(0, 1), x, y)),
        hxx=float(eval_f(f.diff(2, 0), x, y)),
        hyy=float(eval_f(f.diff(0, 2), x, y)),
        hxy=float(eval_f(f.diff(1, 1), x, y)),
    )


@dataclass(frozen=True)
class OscillatorPair:
    omega1: float = 1.0
    omega2: float = 1.0

    def __post_init__(self):
        if not (self.omega1 > 0 and self.omega2 > 0):
            raise ValueError("oscillator frequencies must be positive")

    def omega(self, axis: int) -> float:
        if axis == 1:
            return self.omega1
        if axis == 2:
            return self.omega2
        raise ValueError("axis must be 1 or 2")


@dataclass(frozen=True)
class EnergyPoint:
    E1: float
    E2: float

    def __post_init__(self):
        for v in (self.E1, self.E2):
            if not 0.0 <= v <= 1.0:
                raise ValueError("energy components must lie in [0, 1]")


def oscillator_eigenvalue(axis: int, n, h: float, osc: OscillatorPair):
    if np.any(np.asarray(n) < 0):
        raise ValueError("quantum number must be nonnegative")
    if np.ndim(n):
        return osc.omega(axis) * h * (np.asarray(n) + 0.5)
    return osc.omega(axis) * h * (n + 0.5)


def joint_eigenvalue(f: PolynomialF, n, m, h: float, osc: OscillatorPair):
    return eval_f(f, oscillator_eigenvalue(1, n, h, osc), oscillator_eigenvalue(2, m, h, osc))


def _closest_index(E: float, w: float, h: float) -> int:
    hi = math.ceil(2 * E / (w * h)) + 2
    n = np.arange(hi + 1)
    d = np.abs(w * h * (n + 0.5) - E)
    # near-equal distances count as a tie; the smaller index wins
    tol = 1e-12 * max(1.0, E)
    return int(np.flatnonzero(d <= d.min() + tol)[0])


def closest_quantum_numbers(e: EnergyPoint, h: float, osc: OscillatorPair) -> tuple[int, int]:
    if not h > 0:
        raise ValueError("h must be positive")
    return _closest_index(e.E1, osc.omega1, h), _closest_index(e.E2, osc.omega2, h)


@dataclass(frozen=True)
class PeriodSet:
    """Classical, semiclassical and revival periods at one energy point.

    Entries whose defining derivative vanishes are None; the accessor
    methods raise PeriodUndefined for them. Revival periods are signed.
    """

    h: float
    t_cl1: Optional[float]
    t_cl2: Optional[float]
    t_scl1: Optional[float]
    t_scl2: Optional[float]
    t_rev1: Optional[float]
    t_rev2: Optional[float]
    t_rev12: Optional[float]
    t_srev1: Optional[float]
    t_srev2: Optional[float]
    t_srev12: Optional[float]
    n0: int = 0
    m0: int = 0
    notes: tuple = field(default=(), compare=False)

    def _need(self, names):
        vals = tuple(getattr(self, k) for k in names)
        missing = [k for k, v in zip(names, vals) if v is None]
        if missing:
            raise PeriodUndefined(
                f"{', '.join(missing)} undefined: a required derivative of F vanishes at the energy point")
        return vals

    def classical(self):
        return self._need(("t_cl1", "t_cl2"))

    def semiclassical(self):
        return self._need(("t_scl1", "t_scl2"))

    def linear(self, use_semiclassical: bool = False):
        return self.semiclassical() if use_semiclassical else self.classical()

    def revival(self):
        return self._need(("t_rev1", "t_rev2", "t_rev12"))

    def semiclassical_revival(self):
        return self._need(("t_srev1", "t_srev2", "t_srev12"))

    def as_dict(self) -> dict:
        keys = ("t_cl1", "t_cl2", "t_scl1", "t_scl2", "t_rev1", "t_rev2", "t_rev12",
                "t_srev1", "t_srev2", "t_srev12")
        return {k: getattr(self, k) for k in keys}


def _inv(num, den):
    return None if den == 0 else num / den


def period_set(f: PolynomialF, e: EnergyPoint, h: float, osc: OscillatorPair) -> PeriodSet:
    """All period families at E and at the nearest lattice eigenvalue.

    Classical: 2pi / (dF * omega). Revival: 4pi / (h d2F omega^2) on the
    diagonal and 2pi / (h dXdY F omega1 omega2) for the cross term, which is
    the coefficient that matches the second-order Taylor phase exactly.
    """
    w1, w2 = osc.omega1, osc.omega2
    n0, m0 = closest_quantum_numbers(e, h, osc)
    at_e = partials(f, (e.E1, e.E2))
    at_q = partials(f, (oscillator_eigenvalue(1, n0, h, osc), oscillator_eigenvalue(2, m0, h, osc)))
    two_pi = 2 * math.pi

    def fam(p):
        return (
            _inv(two_pi, p.gx * w1),
            _inv(two_pi, p.gy * w2),
            _inv(2 * two_pi, h * p.hxx * w1 * w1),
            _inv(2 * two_pi, h * p.hyy * w2 * w2),
            _inv(two_pi, h * p.hxy * w1 * w2),
        )

    cl1, cl2, rev1, rev2, rev12 = fam(at_e)
    scl1, scl2, srev1, srev2, srev12 = fam(at_q)
    return PeriodSet(h, cl1, cl2, scl1, scl2, rev1, rev2, rev12, srev1, srev2, srev12, n0, m0)
