"""Time the compiled and numpy phase-sum kernels on packet-sized inputs.

Usage: python3 benchmarks/bench_kernels.py [--threads N] [--repeat R]
"""
import argparse
import time

import numpy as np

from revival_lab import _kernels_py, kernels
from revival_lab.hamiltonian import EnergyPoint, OscillatorPair, PolynomialF
from revival_lab.wavepacket import PacketParams, build_packet


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--threads", type=int, default=0)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--samples", type=int, default=1024)
    args = ap.parse_args()
    threads = kernels.set_threads(args.threads)
    f = PolynomialF.from_terms([(2, 0, 1), (1, 1, 1), (0, 2, 1)])
    osc = OscillatorPair(1.0, 1.0)
    try:
        from revival_lab import _kernels
    except ImportError:
        _kernels = None
    print(f"active backend: {kernels.BACKEND}, threads: {threads}")
    print(f"{'h':>8} {'points':>8} {'numpy s':>10} {'compiled s':>11} {'speedup':>8} {'max diff':>9}")
    for h in (1e-2, 1e-3, 1e-4):
        p = build_packet(f, EnergyPoint(0.5, 0.5), h, osc, PacketParams(0.8, 0.8, 0.6, 0.6))
        dn, dm = p.offsets
        rate = dn + dm + h * (dn * dn + dn * dm + dm * dm)
        t = np.linspace(0.0, 10.0 / h, args.samples)
        ref = _kernels_py.phase_sum(p.weights, rate, t, threads)
        t_np = best_of(lambda: _kernels_py.phase_sum(p.weights, rate, t, threads), args.repeat)
        if _kernels is None:
            print(f"{h:>8g} {p.weights.size:>8d} {t_np:>10.4f} {'n/a':>11} {'n/a':>8} {'n/a':>9}")
            continue
        got = _kernels.phase_sum(p.weights, rate, t, threads)
        t_c = best_of(lambda: _kernels.phase_sum(p.weights, rate, t, threads), args.repeat)
        diff = float(np.max(np.abs(got - ref)))
        print(f"{h:>8g} {p.weights.size:>8d} {t_np:>10.4f} {t_c:>11.4f} {t_np / t_c:>8.1f} {diff:>9.1e}")


if __name__ == "__main__":
    main()
