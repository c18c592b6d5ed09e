"""Hot inner loops behind a stable interface.

The compiled extension ``_core`` is used when it was built; otherwise the
numpy implementations in ``_fallback`` are selected at import time. Set
``SARFOCUS_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os
from functools import lru_cache

import numpy as np
from scipy.special import i0

from . import _fallback

try:
    if os.environ.get("SARFOCUS_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure-python backend requested")
    from . import _core as _impl

    BACKEND = "cython"
except ImportError:
    _impl = _fallback
    BACKEND = "python"

BACKENDS = {"python": _fallback}
if BACKEND == "cython":
    BACKENDS["cython"] = _impl

TABLE_PHASES = 4096


def num_threads() -> int:
    n = int(os.environ.get("SARFOCUS_THREADS", "0") or 0)
    return n if n > 0 else (os.cpu_count() or 1)


@lru_cache(maxsize=16)
def sinc_table(taps: int = 8, beta: float = 5.0, phases: int = TABLE_PHASES) -> np.ndarray:
    """Kaiser-windowed sinc weights, shape ``(phases + 1, taps)``.

    Row ``p`` holds the weights for a fractional offset ``p / phases`` past
    the sample ``floor(x)``; tap ``k`` multiplies sample
    ``floor(x) - taps//2 + 1 + k``. Rows are normalised to unit DC gain.
    """
    if taps < 2 or taps % 2:
        raise ValueError(f"taps must be even and >= 2, got {taps}")
    u = np.arange(phases + 1)[:, None] / phases
    k = np.arange(taps)[None, :] - taps // 2 + 1
    x = k - u
    half = taps / 2
    arg = np.clip(1.0 - (x / half) ** 2, 0.0, None)
    w = np.sinc(x) * i0(beta * np.sqrt(arg)) / i0(beta)
    w /= w.sum(axis=1, keepdims=True)
    w.setflags(write=False)
    return w


def resample_rows(src: np.ndarray, pos: np.ndarray, *, taps: int = 8, beta: float = 5.0,
                  zero_outside: bool = False, backend: str | None = None) -> np.ndarray:
    """Evaluate each row of ``src`` at fractional sample positions ``pos``.

    Positions outside the row replicate the edge sample, or give zero when
    ``zero_outside`` is set.
    """
    src = np.ascontiguousarray(src, dtype=np.complex128)
    pos = np.ascontiguousarray(pos, dtype=np.float64)
    if pos.ndim != 2 or pos.shape[0] != src.shape[0]:
        raise ValueError("pos must be 2D with one row per source row")
    out = np.empty(pos.shape, dtype=np.complex128)
    impl = BACKENDS[backend] if backend else _impl
    impl.resample_rows(src, pos, sinc_table(taps, beta), out, bool(zero_outside), num_threads())
    return out


def median_filter(padded: np.ndarray, m: int, n: int, *, backend: str | None = None) -> np.ndarray:
    """Lower median of every ``m x n`` window of an already padded image."""
    padded = np.ascontiguousarray(padded, dtype=np.float64)
    rows = padded.shape[0] - m + 1
    cols = padded.shape[1] - n + 1
    if rows < 1 or cols < 1:
        raise ValueError("window larger than padded image")
    if not np.all(np.isfinite(padded)):
        raise ValueError("median filter input contains non-finite values")
    out = np.empty((rows, cols), dtype=np.float64)
    impl = BACKENDS[backend] if backend else _impl
    impl.median_filter(padded, m, n, out, num_threads())
    return out
