"""numpy fallback for the compiled phase sums.

Same contract as the extension: out[k] = sum_j w[j] exp(-i phase_kj).
Per-sample reductions use numpy's pairwise summation, which is
deterministic but not bit-identical to the sequential compiled loop.
"""
from concurrent.futures import ThreadPoolExecutor

import numpy as np

_BLOCK = 1 << 21  # elements of the (time x weight) phase block held at once


def _chunks(nt, nw):
    step = max(1, _BLOCK // max(nw, 1))
    return [(i, min(i + step, nt)) for i in range(0, nt, step)]


def _run(fn, nt, nw, num_threads):
    out = np.empty(nt, dtype=np.complex128)
    spans = _chunks(nt, nw)
    if num_threads <= 1 or len(spans) == 1:
        for a, b in spans:
            out[a:b] = fn(a, b)
        return out
    with ThreadPoolExecutor(max_workers=num_threads) as pool:
        for (a, b), val in zip(spans, pool.map(lambda s: fn(*s), spans)):
            out[a:b] = val
    return out


def phase_sum(w, rate, t, num_threads=1):
    w = np.ascontiguousarray(w, dtype=np.float64)
    rate = np.ascontiguousarray(rate, dtype=np.float64)
    t = np.ascontiguousarray(t, dtype=np.float64)
    if rate.shape != w.shape:
        raise ValueError("weights and rates differ in length")

    def block(a, b):
        ph = t[a:b, None] * rate[None, :]
        return (np.cos(ph) * w).sum(axis=1) - 1j * (np.sin(ph) * w).sum(axis=1)

    return _run(block, t.size, w.size, num_threads)


def phase_sum2(w, r1, r2, t1, t2, num_threads=1):
    w = np.ascontiguousarray(w, dtype=np.float64)
    r1 = np.ascontiguousarray(r1, dtype=np.float64)
    r2 = np.ascontiguousarray(r2, dtype=np.float64)
    t1 = np.ascontiguousarray(t1, dtype=np.float64)
    t2 = np.ascontiguousarray(t2, dtype=np.float64)
    if r1.shape != w.shape or r2.shape != w.shape:
        raise ValueError("weights and rates differ in length")
    if t1.shape != t2.shape:
        raise ValueError("time arrays differ in length")

    def block(a, b):
        ph = t1[a:b, None] * r1[None, :] + t2[a:b, None] * r2[None, :]
        return (np.cos(ph) * w).sum(axis=1) - 1j * (np.sin(ph) * w).sum(axis=1)

    return _run(block, t1.size, w.size, num_threads)
