"""Kernel backend selection.

Hot inner loops exist twice: loop-style functions compiled with numba's
``@njit`` and vectorized pure-numpy equivalents.  The active backend is chosen
once at import from the ``WASSER_INFER_BACKEND`` environment variable:

* unset or ``auto`` -- numba when importable, numpy otherwise;
* ``numba`` -- require numba, raise if it is missing;
* ``numpy`` -- force the pure-numpy fallback.

``benchmarks/bench_backends.py`` times the two lanes against each other.
"""

import os

VALID_BACKENDS = ("numba", "numpy")


def _detect() -> str:
    requested = os.environ.get("WASSER_INFER_BACKEND", "auto").strip().lower()
    if requested in ("", "auto"):
        try:
            import numba  # noqa: F401
        except ImportError:
            return "numpy"
        return "numba"
    if requested == "numba":
        import numba  # noqa: F401  (raise ImportError loudly if absent)
        return "numba"
    if requested == "numpy":
        return "numpy"
    raise ValueError(
        f"WASSER_INFER_BACKEND={requested!r}; expected one of {VALID_BACKENDS} or 'auto'"
    )


ACTIVE_BACKEND = _detect()


def thread_count() -> int:
    """Worker cap for replication/sweep parallelism, from WASSER_INFER_THREADS (default 1)."""
    raw = os.environ.get("WASSER_INFER_THREADS", "").strip()
    if not raw:
        return 1
    return max(1, int(raw))
