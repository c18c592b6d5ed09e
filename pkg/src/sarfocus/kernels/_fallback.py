"""Pure numpy versions of the compiled kernels in ``_core.pyx``."""

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

_CHUNK = 1 << 20  # output samples per vectorised block


def resample_rows(src, pos, table, out, zero_outside, num_threads=1):
    rows, ncol = src.shape
    nout = pos.shape[1]
    nphase = table.shape[0] - 1
    taps = table.shape[1]
    offsets = np.arange(taps) - taps // 2 + 1
    step = max(1, _CHUNK // max(1, nout * taps))
    for r0 in range(0, rows, step):
        r1 = min(rows, r0 + step)
        p = pos[r0:r1]
        fl = np.floor(p)
        ph = ((p - fl) * nphase + 0.5).astype(np.intp)
        idx = np.clip(fl.astype(np.intp)[..., None] + offsets, 0, ncol - 1)
        gathered = src[np.arange(r0, r1)[:, None, None], idx]
        block = np.einsum("rjk,rjk->rj", gathered, table[ph])
        if zero_outside:
            block[(p < 0) | (p > ncol - 1)] = 0
        out[r0:r1] = block


def median_filter(padded, m, n, out, num_threads=1):
    rows, cols = out.shape
    kth = (m * n - 1) // 2
    step = max(1, _CHUNK // max(1, cols * m * n))
    for r0 in range(0, rows, step):
        r1 = min(rows, r0 + step)
        win = sliding_window_view(padded[r0 : r1 + m - 1], (m, n))
        flat = win.reshape(r1 - r0, cols, m * n)
        out[r0:r1] = np.partition(flat, kth, axis=-1)[..., kth]
