"""Kernel acceleration switch.

The transient solver kernels are JIT-compiled with numba by default.
Setting NOISEGATE_NO_NUMBA=1 (or any value other than 0/empty) selects
the pure-numpy interpretation of the identical kernel code; the same
fallback engages automatically when numba is not installed.  Both paths
produce the same results; see benchmarks/bench_kernels.py for the
speed comparison.
"""

from __future__ import annotations

import os

ENV_FLAG = "NOISEGATE_NO_NUMBA"


def _detect() -> bool:
    if os.environ.get(ENV_FLAG, "").strip() not in ("", "0"):
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


NUMBA_ENABLED = _detect()
