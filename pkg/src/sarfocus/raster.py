"""Complex 2D signal matrix with axis bookkeeping, plus the axis transforms
shared by the focusing chains.

Rows are slow time (azimuth), columns fast time (range). In Doppler-domain
rasters row ``i`` holds Doppler ``(doppler_bin0 + i) * PRF / rows``, so the
axis is ascending and contiguous around the chosen centre. Fast-time
frequency columns are stored ascending from ``-Fr/2``.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass, replace

import numpy as np
from scipy import fft as sfft


class Domain(enum.IntEnum):
    TIME_TIME = 0
    TIME_DOPPLER = 1
    FREQ_DOPPLER = 2
    FREQ_FREQ = 3
    STOLT = 4


class DomainError(ValueError):
    pass


def fft_workers() -> int:
    """Worker count for scipy.fft, capped by ``SARFOCUS_THREADS`` (0 = auto)."""
    n = int(os.environ.get("SARFOCUS_THREADS", "0") or 0)
    return n if n > 0 else (os.cpu_count() or 1)


@dataclass
class Raster:
    data: np.ndarray
    t0: float
    Fr: float
    eta0: float
    PRF: float
    domain: Domain = Domain.TIME_TIME
    doppler_bin0: int = 0

    def __post_init__(self):
        self.data = np.asarray(self.data)
        if self.data.ndim != 2 or min(self.data.shape) < 1:
            raise ValueError(f"raster must be a non-empty 2D array, got shape {self.data.shape}")
        if not (self.Fr > 0 and self.PRF > 0):
            raise ValueError("raster rates must be positive")
        self.domain = Domain(self.domain)

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def fast_time(self) -> np.ndarray:
        return self.t0 + np.arange(self.cols) / self.Fr

    def slow_time(self) -> np.ndarray:
        return self.eta0 + np.arange(self.rows) / self.PRF

    def doppler_axis(self) -> np.ndarray:
        return (self.doppler_bin0 + np.arange(self.rows)) * (self.PRF / self.rows)

    def range_freq_axis(self) -> np.ndarray:
        n = self.cols
        return (np.arange(n) - n // 2) * (self.Fr / n)

    def slant_ranges(self, c: float) -> np.ndarray:
        """Slant range (m) of each fast-time column."""
        return 0.5 * c * self.fast_time()

    def with_data(self, data: np.ndarray, **changes) -> "Raster":
        return replace(self, data=data, **changes)

    def copy(self) -> "Raster":
        return replace(self, data=self.data.copy())

    def energy(self) -> float:
        return float(np.vdot(self.data, self.data).real)

    def expect(self, *domains: Domain) -> None:
        if self.domain not in domains:
            names = " or ".join(d.name for d in domains)
            raise DomainError(f"expected {names} raster, got {self.domain.name}")


def doppler_bin0(rows: int, PRF: float, f_center: float) -> int:
    """First-row Doppler bin index for an axis centred on ``f_center``."""
    df = PRF / rows
    return int(np.round(f_center / df)) - rows // 2


def wrap_frequency(f, PRF: float):
    """Wrap into ``[-PRF/2, PRF/2)``."""
    return (np.asarray(f) + PRF / 2) % PRF - PRF / 2


def unwrap_doppler(f_axis: np.ndarray, PRF: float, f_dc: float) -> np.ndarray:
    """Add the multiple of PRF that brings each Doppler value nearest ``f_dc``."""
    return f_axis + PRF * np.round((f_dc - f_axis) / PRF)


_BLOCK_BYTES = 1 << 23


def working_dtype(dtype) -> np.dtype:
    """Single-precision input is processed in single precision, anything else in double."""
    return np.dtype(np.complex64) if np.dtype(dtype) in (np.complex64, np.float32) else np.dtype(np.complex128)


def working_array(data: np.ndarray, copy: bool) -> np.ndarray:
    dt = working_dtype(data.dtype)
    if copy or data.dtype != dt or not data.flags.c_contiguous or not data.flags.writeable:
        return np.array(data, dtype=dt, order="C")
    return data


def _block(n_other: int, itemsize: int) -> int:
    return max(1, _BLOCK_BYTES // max(1, n_other * itemsize))


def azimuth_forward(data: np.ndarray, bin0: int, overwrite: bool = False) -> np.ndarray:
    """Slow-time DFT, rows rotated so row ``i`` is native bin ``bin0 + i``."""
    out = sfft.fft(working_array(data, not overwrite), axis=0, overwrite_x=True, workers=fft_workers())
    return _roll_rows(out, -bin0)


def azimuth_inverse(data: np.ndarray, bin0: int, overwrite: bool = False) -> np.ndarray:
    work = _roll_rows(working_array(data, not overwrite), bin0)
    return sfft.ifft(work, axis=0, overwrite_x=True, workers=fft_workers())


def _roll_rows(a: np.ndarray, shift: int) -> np.ndarray:
    """Circular row shift, in place, one column block at a time."""
    shift %= a.shape[0]
    if shift == 0:
        return a
    step = _block(a.shape[0], a.itemsize)
    for c0 in range(0, a.shape[1], step):
        a[:, c0:c0 + step] = np.roll(a[:, c0:c0 + step], shift, axis=0)
    return a


def _shift_cols(a: np.ndarray, inverse: bool) -> np.ndarray:
    """In-place ``fftshift`` (or ``ifftshift``) along the columns."""
    shift = -(a.shape[1] // 2) if inverse else a.shape[1] // 2
    if shift % a.shape[1] == 0:
        return a
    step = _block(a.shape[1], a.itemsize)
    for r0 in range(0, a.shape[0], step):
        a[r0:r0 + step] = np.roll(a[r0:r0 + step], shift, axis=1)
    return a


def range_forward(data: np.ndarray, overwrite: bool = False) -> np.ndarray:
    """Fast-time DFT with columns ordered ascending from ``-Fr/2``."""
    out = sfft.fft(working_array(data, not overwrite), axis=1, overwrite_x=True, workers=fft_workers())
    return _shift_cols(out, inverse=False)


def range_inverse(data: np.ndarray, overwrite: bool = False) -> np.ndarray:
    work = _shift_cols(working_array(data, not overwrite), inverse=True)
    return sfft.ifft(work, axis=1, overwrite_x=True, workers=fft_workers())


def to_time_doppler(r: Raster, f_center: float, overwrite: bool = False) -> Raster:
    r.expect(Domain.TIME_TIME)
    b0 = doppler_bin0(r.rows, r.PRF, f_center)
    data = azimuth_forward(r.data, b0, overwrite=overwrite)
    return r.with_data(data, domain=Domain.TIME_DOPPLER, doppler_bin0=b0)


def to_time_time(r: Raster, overwrite: bool = False) -> Raster:
    r.expect(Domain.TIME_DOPPLER)
    data = azimuth_inverse(r.data, r.doppler_bin0, overwrite=overwrite)
    return r.with_data(data, domain=Domain.TIME_TIME, doppler_bin0=0)
