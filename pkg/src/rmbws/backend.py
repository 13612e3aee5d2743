"""Kernel backend selection.

Two interchangeable kernel sets exist: numba-jitted loops (fast, the
default) and vectorized numpy (no compilation, used as fallback). The
environment variable ``RMBWS_BACKEND`` picks one:

* ``auto`` (default): numba if importable, else numpy
* ``numba``: require numba, fail loudly if missing
* ``numpy``: force the pure-numpy path

The choice is made once at import time. ``RMBWS_THREADS`` caps the
number of worker threads used by the jitted Monte Carlo loop (0 or
unset means the numba default).
"""

from __future__ import annotations

import os

_requested = os.environ.get("RMBWS_BACKEND", "auto").strip().lower()
if _requested not in ("auto", "numba", "numpy"):
    raise RuntimeError(
        f"RMBWS_BACKEND must be one of auto/numba/numpy, got {_requested!r}"
    )

if _requested == "numpy":
    _use_numba = False
else:
    try:
        import warnings

        # the TBB-version advisory (emitted when the threading layer starts)
        # is irrelevant here; numba falls back to another layer by itself
        warnings.filterwarnings(
            "ignore", message=".*TBB.*", category=Warning, module=r"numba\..*"
        )
        import numba  # noqa: F401

        _use_numba = True
    except ImportError:
        if _requested == "numba":
            raise
        _use_numba = False


def using_numba() -> bool:
    """True when the jitted kernels are the active backend."""
    return _use_numba


def backend_name() -> str:
    return "numba" if _use_numba else "numpy"


def thread_limit() -> int:
    """Requested worker-thread cap from RMBWS_THREADS (0 = automatic)."""
    raw = os.environ.get("RMBWS_THREADS", "0").strip()
    try:
        value = int(raw)
    except ValueError:
        raise RuntimeError(f"RMBWS_THREADS must be an integer, got {raw!r}")
    if value < 0:
        raise RuntimeError("RMBWS_THREADS must be >= 0")
    return value


def apply_thread_limit() -> int:
    """Apply RMBWS_THREADS to the numba threading layer; returns the cap used."""
    if not _use_numba:
        return 1
    import numba

    cap = thread_limit()
    maximum = numba.config.NUMBA_NUM_THREADS
    threads = maximum if cap == 0 else min(cap, maximum)
    numba.set_num_threads(threads)
    return threads
