"""Command-line front end.

    revival-lab <simulate|periods|convergence|cf|revival> --config FILE --out DIR [--threads N]

Exit codes: 0 success, 1 unexpected error, 2 config error, 3 parse error,
4 validation error, 5 I/O error, 10-19 analysis errors (see errors.py).
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import os
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__, kernels
from .config import ScenarioConfig, parse_config
from .diophantine import (FlowParams, QuadraticIrrational, approach_distance_bound, approach_time,
                          cf_expand, count_revival_set, diophantine_constant, flow_lattice_distance,
                          k_epsilon, revival_set_interval, t_eta)
from .dynamics import (TimeGrid, envelope_formula, linear_approx, quadratic_approx, remainder_error,
                       return_amplitude, theoretical_exponent)
from .errors import PeriodUndefined, PrecisionExhausted, RevivalLabError
from .revival import (detect_resonance, fractional_coefficients, rationalize, reconstruct_at_revival,
                      theta_sequence)
from .wavepacket import Envelope, build_packet

EXIT_IO = 5
SUBCOMMANDS = ("simulate", "periods", "convergence", "cf", "revival")


def fmt(x) -> str:
    if x is None:
        return "nan"
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return format(float(x), ".17g")


class Run:
    """Collects outputs of one subcommand; a single writer in fixed order."""

    def __init__(self, out: Path, cfg: ScenarioConfig, sub: str):
        self.out = out
        self.cfg = cfg
        self.sub = sub
        self.files: list = []
        self.summary: dict = {}
        out.mkdir(parents=True, exist_ok=True)

    def csv(self, name, header, rows):
        path = self.out / name
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for row in rows:
                w.writerow([fmt(v) if not isinstance(v, str) else v for v in row])
        self.files.append(name)

    def text(self, name, lines):
        path = self.out / name
        with open(path, "w", newline="", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
        self.files.append(name)
        return lines

    def manifest(self):
        digests = {}
        for name in self.files:
            digests[name] = hashlib.sha256((self.out / name).read_bytes()).hexdigest()
        doc = {
            "artifact": "revival-lab",
            "version": __version__,
            "subcommand": self.sub,
            "backend": kernels.BACKEND,
            "threads": kernels.get_threads(),
            "seed": os.environ.get("REVIVAL_LAB_SEED"),
            "config": self.cfg.echo(),
            "config_text": self.cfg.source,
            "outputs": digests,
            "summary": self.summary,
        }
        with open(self.out / f"manifest_{self.sub}.json", "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True, default=str)
            fh.write("\n")


def _series_rows(t, z):
    return ([ti, zi.real, zi.imag, abs(zi)] for ti, zi in zip(t, z))


def cmd_simulate(run: Run):
    cfg = run.cfg
    sc = cfg.scenario
    h = cfg.h_values[0]
    p = sc.packet(h)
    periods = sc.periods(h)
    t_end = cfg.t_end
    if t_end is None:
        t_end = 3.0 * max(abs(x) for x in periods.classical())
    t = TimeGrid(cfg.t_start, t_end, cfg.samples).values
    r = return_amplitude(p, sc.f, sc.osc, t)
    a1 = linear_approx(p, periods, t, cfg.use_semiclassical)
    try:
        a2 = quadratic_approx(p, periods, t)
    except PeriodUndefined:
        a2 = np.full(t.shape, np.nan + 0j)
    env = envelope_formula(p, periods, sc.envelope, t, cfg.use_semiclassical)
    run.csv("simulate.csv", ["t", "abs_r", "abs_a1", "abs_a2", "envelope"],
            ([ti, abs(x), abs(y), abs(z), e] for ti, x, y, z, e in zip(t, r, a1, a2, env)))
    header = ["t", "re", "im", "magnitude"]
    run.csv("return_amplitude.csv", header, _series_rows(t, r))
    run.csv("linear_approx.csv", header, _series_rows(t, a1))
    if not np.isnan(a2[0]):
        run.csv("quadratic_approx.csv", header, _series_rows(t, a2))
    if cfg.dump_packet:
        n, m = p.indices()
        run.csv("packet.csv", ["n", "m", "a"], zip(n, m, p.coeffs.ravel()))
    run.summary.update(h=h, n0=p.n0, m0=p.m0, window_points=int(p.coeffs.size),
                       max_abs_r=float(np.max(np.abs(r))))
    print(f"simulate: {t.size} samples, window {p.coeffs.shape}, wrote {run.out / 'simulate.csv'}")


def _period_lines(ps):
    lines = [f"h = {fmt(ps.h)}", f"n0 = {ps.n0}", f"m0 = {ps.m0}"]
    groups = (("classical", ("t_cl1", "t_cl2")), ("semiclassical", ("t_scl1", "t_scl2")),
              ("revival", ("t_rev1", "t_rev2", "t_rev12")),
              ("semiclassical revival", ("t_srev1", "t_srev2", "t_srev12")))
    for label, keys in groups:
        vals = [getattr(ps, k) for k in keys]
        if any(v is None for v in vals):
            lines.append(f"{label}: undefined (a required derivative of F vanishes at E)")
        for k, v in zip(keys, vals):
            lines.append(f"  {k:9s} = {'undefined' if v is None else fmt(v)}")
    return lines


def cmd_periods(run: Run):
    cfg = run.cfg
    sc = cfg.scenario
    rows, lines = [], []
    for h in cfg.h_values:
        ps = sc.periods(h)
        lines += _period_lines(ps)
        if ps.t_cl1 is not None and ps.t_cl2 is not None:
            ratio = ps.t_cl1 / ps.t_cl2
            rat = rationalize(ratio, cfg.max_den, cfg.tol)
            diag = (f"commensurate: T_cl1/T_cl2 = {rat}" if rat is not None else
                    f"incommensurate: T_cl1/T_cl2 = {fmt(ratio)} has no rational within max_den={cfg.max_den}")
            lines.append(diag)
        lines.append("")
        rows.append([h] + [v for v in ps.as_dict().values()])
    run.text("periods.txt", lines)
    run.csv("periods.csv", ["h"] + list(sc.periods(cfg.h_values[0]).as_dict()), rows)
    print("\n".join(lines).rstrip())


def cmd_convergence(run: Run):
    cfg = run.cfg
    sc = cfg.scenario
    hs = cfg.h_values
    dmin = sc.params.delta_min
    lin, quad = [], []
    for h in hs:
        lin.append(remainder_error("linear", sc, h, cfg.alpha, cfg.samples))
        try:
            quad.append(remainder_error("quadratic", sc, h, cfg.beta, cfg.samples))
        except PeriodUndefined:
            quad.append(None)
    run.csv("convergence.csv", ["h", "linear_error", "quadratic_error"], zip(hs, lin, quad))

    def slope(errs):
        pts = [(h, e) for h, e in zip(hs, errs) if e is not None and e > 0]
        if len(pts) < 3:
            return None
        return float(np.polyfit(np.log([a for a, _ in pts]), np.log([b for _, b in pts]), 1)[0])

    s_lin, s_quad = slope(lin), slope(quad)
    th_lin = theoretical_exponent("linear", cfg.alpha, dmin)
    th_quad = theoretical_exponent("quadratic", cfg.beta, dmin)
    lines = [f"linear remainder: fitted slope {fmt(s_lin)}, theoretical exponent {fmt(th_lin)}",
             f"quadratic remainder: fitted slope {fmt(s_quad)}, theoretical exponent {fmt(th_quad)}"]
    run.text("convergence.txt", lines)
    run.csv("convergence_slopes.csv", ["kind", "fitted_slope", "theoretical_exponent"],
            [["linear", s_lin, th_lin], ["quadratic", s_quad, th_quad]])
    run.summary.update(linear_slope=s_lin, quadratic_slope=s_quad)
    print("\n".join(lines))


def cmd_cf(run: Run):
    cfg = run.cfg
    sc = cfg.scenario
    h = cfg.h_values[0]
    periods = sc.periods(h)
    t1, t2 = periods.classical()
    a = 1.0 / abs(t1)
    theta = cfg.theta if cfg.theta is not None else abs(t1) / abs(t2)
    fp = FlowParams(a, a * float(theta))
    lines = [f"theta = b/a = {fmt(float(theta))}"]
    try:
        seq = cf_expand(theta, cfg.cf_terms)
    except PrecisionExhausted as exc:
        seq = cf_expand(theta, cfg.cf_terms, strict=False)
        lines.append(f"note: {exc}")
    if seq.terminated:
        lines.append("RationalTheta: the expansion terminates; theta is rational at this precision")
    lo, hi = revival_set_interval(h, sc.params.delta_min, sc.params.delta_p_min, cfg.mu)
    lines.append(f"near-revival interval for q: [{fmt(lo)}, {fmt(hi)}]")
    lines.append("partial quotients: " + " ".join(str(x) for x in seq.partial_quotients))
    rows = []
    lines.append(f"{'k':>3} {'a_k':>6} {'p_k':>14} {'q_k':>14} {'approach':>24} {'distance':>24} {'bound':>24} A_h")
    for k, (ak, c) in enumerate(zip(seq.partial_quotients, seq.convergents)):
        if c.q > 0 and c.p > 0:
            tau = approach_time(fp, c)
            dist = flow_lattice_distance(fp, tau)
            bound = approach_distance_bound(fp, c)
        else:
            tau = dist = bound = None
        member = "yes" if lo <= c.q <= hi else "no"
        rows.append([k, ak, c.p, c.q, tau, dist, bound, member])
        lines.append(f"{k:>3} {ak:>6} {c.p:>14} {c.q:>14} {fmt(tau):>24} {fmt(dist):>24} {fmt(bound):>24} {member}")
    try:
        count = count_revival_set(seq, h, sc.params.delta_min, sc.params.delta_p_min, cfg.mu)
        lines.append(f"A_h members {list(count.members)}, count {count.count} <= bound {count.upper_bound}")
    except ValueError as exc:
        lines.append(f"A_h count unavailable: {exc}")
    if isinstance(theta, QuadraticIrrational):
        c0 = diophantine_constant(theta, cfg.q_max)
    else:
        c0 = diophantine_constant(float(theta), cfg.q_max)
    lines.append(f"diophantine constant (q <= {cfg.q_max}): {fmt(c0)}")
    if c0 > 0:
        k0 = k_epsilon(fp, min(c0, 0.5))
        eta = cfg.eta if cfg.eta is not None else h ** cfg.s
        lines.append(f"K = {fmt(k0)}")
        try:
            horizon = t_eta(fp, k0, cfg.eps, eta)
            lines.append(f"collapse horizon t_eta(eta={fmt(eta)}) = {fmt(horizon)}; "
                         f"max |T_cl| = {fmt(max(abs(t1), abs(t2)))}")
        except RevivalLabError as exc:
            lines.append(f"collapse horizon unavailable: {exc}")
    else:
        lines.append("collapse horizon unavailable: theta is rational (no lower bound on lattice distance)")
    run.csv("cf.csv", ["k", "a_k", "p_k", "q_k", "approach_time", "flow_distance", "distance_bound", "in_A_h"], rows)
    run.text("cf.txt", lines)
    print("\n".join(lines))


def cmd_revival(run: Run):
    cfg = run.cfg
    sc = cfg.scenario
    h = cfg.h_values[0]
    p = sc.packet(h)
    periods = sc.periods(h)
    res = detect_resonance(periods, cfg.max_den, cfg.tol, cfg.at)
    theta = theta_sequence(res, p.n0, p.m0)
    table = fractional_coefficients(theta, res.ell1, res.ell2, p.n0, p.m0)
    recon = reconstruct_at_revival(p, periods, res, table, 0.0)
    a2 = quadratic_approx(p, periods, res.t_frac)
    resid = abs(recon - a2)
    rows = []
    for k1 in range(res.ell1):
        for k2 in range(res.ell2):
            c = table.c[k1, k2]
            rows.append([k1, k2, c.real, c.imag, abs(c) ** 2])
    run.csv("revival_coefficients.csv", ["k1", "k2", "re", "im", "mod2"], rows)
    lines = [f"fractions: p1/q1 = {res.frac1}, p2/q2 = {res.frac2}, p12/q12 = {res.frac12}",
             f"T_frac = {fmt(res.t_frac)}  (T_frac / pi = {fmt(res.t_frac / math.pi)})",
             f"r1 = {res.r1}, s1 = {res.s1}, r2 = {res.r2}, s2 = {res.s2}",
             f"ell1 = {res.ell1}, ell2 = {res.ell2}",
             f"sum |c|^2 = {fmt(float(np.sum(np.abs(table.c) ** 2)))}",
             "|c_k1,k2|:"]
    for k1 in range(res.ell1):
        lines.append("  " + " ".join(f"{abs(table.c[k1, k2]):.6f}" for k2 in range(res.ell2)))
    lines += [f"|a2(T_frac)| = {fmt(abs(a2))}", f"reconstruction residual = {fmt(resid)}"]
    run.text("revival.txt", lines)
    run.summary.update(t_frac=res.t_frac, ell1=res.ell1, ell2=res.ell2, residual=resid)
    print("\n".join(lines))


COMMANDS = {"simulate": cmd_simulate, "periods": cmd_periods, "convergence": cmd_convergence,
            "cf": cmd_cf, "revival": cmd_revival}


def build_parser():
    ap = argparse.ArgumentParser(prog="revival-lab", description=__doc__.split("\n")[0])
    ap.add_argument("subcommand", choices=SUBCOMMANDS)
    ap.add_argument("--config", required=True, help="scenario file (key = value)")
    ap.add_argument("--out", default="out", help="output directory")
    ap.add_argument("--threads", type=int, default=1, help="worker threads, 0 = one per CPU")
    return ap


def run(subcommand: str, config: ScenarioConfig, out=".", threads: int = 1) -> int:
    kernels.set_threads(threads)
    r = Run(Path(out), config, subcommand)
    COMMANDS[subcommand](r)
    r.manifest()
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.threads < 0:
        print("error: --threads must be >= 0", file=sys.stderr)
        return 2
    try:
        cfg = parse_config(args.config)
        return run(args.subcommand, cfg, args.out, args.threads)
    except RevivalLabError as exc:
        print(f"error [{type(exc).__name__}]: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error [IO]: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error [ValidationError]: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
