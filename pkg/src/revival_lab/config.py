"""Flat ``key = value`` scenario files.

One pair per line, ``#`` starts a comment, ``coeff = i j c`` may repeat and
adds c X^i Y^j to F. Every other key may appear at most once.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .diophantine import QuadraticIrrational
from .dynamics import Scenario
from .errors import ParseError, ValidationError
from .hamiltonian import EnergyPoint, OscillatorPair, PolynomialF
from .wavepacket import Envelope, PacketParams


def _float(s):
    return float(s)


def _int(s):
    return int(s)


def _floats(s):
    return tuple(float(x) for x in s.replace(",", " ").split())


def _fraction(s):
    return Fraction(s.strip())


def _bool(s):
    v = s.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


def _theta(s):
    v = s.strip().lower().replace(" ", "")
    if v == "golden":
        return QuadraticIrrational.golden()
    if v.startswith("sqrt(") and v.endswith(")"):
        return QuadraticIrrational.sqrt(int(v[5:-1]))
    if "/" in v:
        return Fraction(v)
    return float(v)


# key -> (converter, default); a default of None means "not set"
SCHEMA = {
    "omega1": (_float, 1.0),
    "omega2": (_float, 1.0),
    "E1": (_float, None),
    "E2": (_float, None),
    "h": (_float, None),
    "h_list": (_floats, None),
    "delta1": (_float, None),
    "delta2": (_float, None),
    "delta1p": (_float, None),
    "delta2p": (_float, None),
    "window_factor": (_float, 8.0),
    "t_start": (_float, 0.0),
    "t_end": (_float, None),
    "samples": (_int, 256),
    "alpha": (_float, 0.0),
    "beta": (_float, 0.0),
    "mu": (_float, 0.05),
    "s": (_float, 0.1),
    "max_den": (_int, 64),
    "tol": (_float, 1e-9),
    "q_max": (_int, 10000),
    "eta": (_float, None),
    "eps": (_float, 0.0),
    "at": (_fraction, Fraction(1)),
    "cf_terms": (_int, 20),
    "theta": (_theta, None),
    "use_semiclassical": (_bool, False),
    "dump_packet": (_bool, False),
}
REQUIRED = ("E1", "E2", "delta1", "delta2", "delta1p", "delta2p")


@dataclass
class ScenarioConfig:
    coeffs: list = field(default_factory=list)
    values: dict = field(default_factory=dict)
    source: str = ""

    def __getattr__(self, name):
        values = self.__dict__.get("values", {})
        if name in values:
            return values[name]
        raise AttributeError(name)

    @property
    def polynomial(self) -> PolynomialF:
        return PolynomialF.from_terms(self.coeffs)

    @property
    def osc(self) -> OscillatorPair:
        return OscillatorPair(self.omega1, self.omega2)

    @property
    def energy(self) -> EnergyPoint:
        return EnergyPoint(self.E1, self.E2)

    @property
    def params(self) -> PacketParams:
        return PacketParams(self.delta1p, self.delta2p, self.delta1, self.delta2, self.window_factor)

    @property
    def scenario(self) -> Scenario:
        return Scenario(self.polynomial, self.energy, self.osc, self.params, Envelope.gaussian())

    @property
    def h_values(self) -> tuple:
        if self.h_list is not None:
            return self.h_list
        return (self.h,)

    def echo(self) -> dict:
        out = {"coeff": [list(c) for c in self.coeffs]}
        for k in SCHEMA:
            v = self.values[k]
            if isinstance(v, (Fraction, QuadraticIrrational)):
                v = str(v) if isinstance(v, Fraction) else repr(v)
            elif isinstance(v, tuple):
                v = list(v)
            out[k] = v
        return out


def parse_text(text: str) -> ScenarioConfig:
    coeffs = []
    seen: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError("expected 'key = value'", lineno)
        key, value = (x.strip() for x in line.split("=", 1))
        if not value:
            raise ParseError(f"empty value for {key!r}", lineno)
        if key == "coeff":
            parts = value.split()
            if len(parts) != 3:
                raise ParseError("coeff needs three fields: i j c", lineno)
            try:
                coeffs.append((int(parts[0]), int(parts[1]), float(parts[2])))
            except ValueError:
                raise ParseError(f"bad coeff entry {value!r}", lineno) from None
            continue
        if key not in SCHEMA:
            raise ParseError(f"unknown key {key!r}", lineno)
        if key in seen:
            raise ParseError(f"duplicate key {key!r} (first set on line {seen[key][1]})", lineno)
        try:
            seen[key] = (SCHEMA[key][0](value), lineno)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad value for {key!r}: {exc}", lineno) from None
    values = {k: (seen[k][0] if k in seen else default) for k, (_, default) in SCHEMA.items()}
    cfg = ScenarioConfig(coeffs, values, text)
    validate(cfg)
    return cfg


def parse_config(path) -> ScenarioConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_text(fh.read())


def _check(cond, message):
    if not cond:
        raise ValidationError(message)


def validate(cfg: ScenarioConfig) -> None:
    v = cfg.values
    _check(cfg.coeffs, "at least one 'coeff = i j c' line is required")
    for i, j, _ in cfg.coeffs:
        _check(i >= 0 and j >= 0, "coeff exponents must be nonnegative")
    for k in REQUIRED:
        _check(v[k] is not None, f"missing required key {k!r}")
    _check(v["h"] is not None or v["h_list"] is not None, "one of 'h' or 'h_list' is required")
    for k in ("omega1", "omega2"):
        _check(v[k] > 0, f"{k} must be positive (oscillator frequency)")
    for k in ("E1", "E2"):
        _check(0.0 <= v[k] <= 1.0, f"{k} must lie in [0, 1]")
    hs = ([v["h"]] if v["h"] is not None else []) + list(v["h_list"] or [])
    for h in hs:
        _check(0 < h < 1, f"h values must lie in (0, 1), got {h}")
    for k in ("delta1", "delta2", "delta1p", "delta2p"):
        _check(0.5 < v[k] < 1.0, f"{k} must lie in (1/2, 1)")
    _check(v["delta1p"] > v["delta1"], "delta1p must exceed delta1 so the packet mass outside the index window vanishes as h -> 0")
    _check(v["delta2p"] > v["delta2"], "delta2p must exceed delta2 so the packet mass outside the index window vanishes as h -> 0")
    _check(v["window_factor"] >= 0, "window_factor must be nonnegative")
    _check(v["samples"] >= 1, "samples must be a positive integer")
    if v["t_end"] is not None and v["samples"] > 1:
        _check(v["t_end"] > v["t_start"], "t_end must exceed t_start")
    dmin = min(v["delta1"], v["delta2"])
    _check(v["alpha"] > 1 - 2 * dmin, "alpha must exceed 1 - 2 min(delta) for the linear remainder bound")
    _check(v["beta"] > 1 - 3 * dmin, "beta must exceed 1 - 3 min(delta) for the quadratic remainder bound")
    _check(v["mu"] > 0, "mu must be positive")
    _check(v["s"] > 0, "s must be positive")
    _check(v["max_den"] >= 1, "max_den must be a positive integer")
    _check(v["tol"] > 0, "tol must be positive")
    _check(v["q_max"] >= 1, "q_max must be a positive integer")
    _check(v["eps"] >= 0, "eps must be nonnegative")
    if v["eta"] is not None:
        _check(0 < v["eta"] < math.sqrt(2) ** (1 + v["eps"]) / 2, "eta must lie in (0, sqrt(2)^(1+eps)/2)")
    _check(v["at"] > 0, "at must be a positive fraction")
    _check(v["cf_terms"] >= 1, "cf_terms must be a positive integer")
    if v["theta"] is not None:
        _check(float(v["theta"]) > 0, "theta must be positive")
