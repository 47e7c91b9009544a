"""Backend selection for the phase-sum kernels.

The compiled extension is used when it was built; set REVIVAL_LAB_PURE=1
to force the numpy fallback.
"""
import os

import numpy as np

if os.environ.get("REVIVAL_LAB_PURE"):
    from . import _kernels_py as _impl
    BACKEND = "numpy"
else:
    try:
        from . import _kernels as _impl
        BACKEND = "compiled"
    except ImportError:
        from . import _kernels_py as _impl
        BACKEND = "numpy"

_threads = 1


def set_threads(n: int) -> int:
    """Set worker threads for the time axis; 0 means one per CPU."""
    global _threads
    if n < 0:
        raise ValueError("thread count must be >= 0")
    _threads = (os.cpu_count() or 1) if n == 0 else int(n)
    return _threads


def get_threads() -> int:
    return _threads


def phase_sum(w, rate, t):
    t = np.atleast_1d(np.asarray(t, dtype=np.float64))
    return _impl.phase_sum(np.ascontiguousarray(w, dtype=np.float64),
                           np.ascontiguousarray(rate, dtype=np.float64),
                           np.ascontiguousarray(t), _threads)


def phase_sum2(w, r1, r2, t1, t2):
    t1 = np.atleast_1d(np.asarray(t1, dtype=np.float64))
    t2 = np.atleast_1d(np.asarray(t2, dtype=np.float64))
    t1, t2 = np.broadcast_arrays(t1, t2)
    return _impl.phase_sum2(np.ascontiguousarray(w, dtype=np.float64),
                            np.ascontiguousarray(r1, dtype=np.float64),
                            np.ascontiguousarray(r2, dtype=np.float64),
                            np.ascontiguousarray(t1), np.ascontiguousarray(t2), _threads)
