"""Range-Doppler focusing: range compression, azimuth FFT, range cell
migration correction and azimuth compression."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import fft as sfft

from . import kernels
from .params import RadarParams, azimuth_fm_rate, rcm_shift
from .raster import (
    Domain,
    working_array,
    Raster,
    fft_workers,
    range_forward,
    range_inverse,
    to_time_doppler,
    to_time_time,
    unwrap_doppler,
    wrap_frequency,
)

KERNEL_LENGTHS = (4, 8, 16)
_BLOCK_ROWS = 256


@dataclass(frozen=True)
class RdaOptions:
    """Knobs of the Range-Doppler chain.

    ``f_dc`` is the unambiguous centroid used to unwrap Doppler for RCMC;
    ``f_dc_frac`` (default: ``f_dc`` wrapped into the PRF band) centres the
    azimuth spectrum and the azimuth matched filter. ``R0_center`` is the
    range at which ``freq2d`` RCMC is exact (default: mid-swath).

    ``azimuth_filter="phase"`` applies the unit-modulus stationary-phase
    filter; ``"replica"`` uses the conjugate DFT of the windowed azimuth
    chirp itself, which needs ``aperture_time``.
    """

    rcmc_mode: str = "interp"
    interp_kernel_len: int = 8
    f_dc: float = 0.0
    f_dc_frac: float | None = None
    R0_center: float | None = None
    kaiser_beta: float = 5.0
    azimuth_filter: str = "phase"
    aperture_time: float | None = None

    def __post_init__(self):
        if self.rcmc_mode not in ("interp", "freq2d", "none"):
            raise ValueError(f"unknown rcmc_mode {self.rcmc_mode!r}")
        if self.azimuth_filter not in ("phase", "replica"):
            raise ValueError(f"unknown azimuth_filter {self.azimuth_filter!r}")
        if self.azimuth_filter == "replica" and not (self.aperture_time and self.aperture_time > 0):
            raise ValueError("replica azimuth filter needs a positive aperture_time")
        if self.interp_kernel_len not in KERNEL_LENGTHS:
            raise ValueError(f"interp_kernel_len must be one of {KERNEL_LENGTHS}")

    def frac(self, PRF: float) -> float:
        f = float(wrap_frequency(self.f_dc, PRF)) if self.f_dc_frac is None else self.f_dc_frac
        if abs(f) > PRF / 2:
            raise ValueError(f"|f_dc_frac|={abs(f)} exceeds PRF/2")
        return f


def range_replica(params: RadarParams) -> np.ndarray:
    """Samples of ``exp(-j pi beta t^2)`` on ``|t| <= T/2`` at the range rate,
    centred on index ``len // 2``."""
    half = int(np.floor(params.T / 2 * params.Fr * (1 + 1e-12)))
    t = np.arange(-half, half + 1) / params.Fr
    return np.exp(-1j * np.pi * params.beta * t**2)


def range_filter(params: RadarParams, cols: int) -> np.ndarray:
    """Fast-time spectrum (native FFT order) of the zero-centred replica."""
    rep = range_replica(params)
    if rep.size > cols:
        raise ValueError(f"raster has {cols} columns, replica needs {rep.size}")
    h = np.zeros(cols, dtype=np.complex128)
    half = rep.size // 2
    idx = np.arange(-half, half + 1) % cols
    h[idx] = rep
    return sfft.fft(h)


def valid_range_columns(params: RadarParams, cols: int) -> slice:
    """Columns free of circular wrap-around after range compression."""
    half = range_replica(params).size // 2
    return slice(half, cols - half)


def range_compress(raw: Raster, params: RadarParams, overwrite: bool = False) -> Raster:
    raw.expect(Domain.TIME_TIME)
    H = range_filter(params, raw.cols)
    work = working_array(raw.data, not overwrite)
    spec = sfft.fft(work, axis=1, overwrite_x=True, workers=fft_workers())
    spec *= H
    out = sfft.ifft(spec, axis=1, overwrite_x=True, workers=fft_workers())
    return raw.with_data(out)


def azimuth_fft(rc: Raster, f_dc_frac: float) -> Raster:
    return to_time_doppler(rc, f_dc_frac)


def azimuth_ifft(rd: Raster) -> Raster:
    return to_time_time(rd)


def _rcm_samples(rd: Raster, params: RadarParams, f_dc: float, R0, rows=slice(None)) -> np.ndarray:
    f = unwrap_doppler(rd.doppler_axis()[rows], rd.PRF, f_dc)[:, None]
    return rcm_shift(params, R0, f) * (2.0 / params.c) * rd.Fr


def rcmc_interp(rd: Raster, params: RadarParams, f_dc: float, taps: int = 8,
                kaiser_beta: float = 5.0, overwrite: bool = False) -> Raster:
    """Remove range migration by windowed-sinc resampling of every Doppler row.

    The migration of each output column uses that column's own slant range.
    Samples that would come from beyond the last column are zero.
    """
    rd.expect(Domain.TIME_DOPPLER)
    if taps not in KERNEL_LENGTHS:
        raise ValueError(f"taps must be one of {KERNEL_LENGTHS}")
    R0 = rd.slant_ranges(params.c)[None, :]
    worst = float(np.abs(_rcm_samples(rd, params, f_dc, R0.max())).max())
    if worst >= rd.cols:
        raise ValueError(f"migration of {worst:.1f} samples exceeds the {rd.cols}-column raster")
    data = working_array(rd.data, not overwrite)
    cols = np.arange(rd.cols)[None, :]
    for r0 in range(0, rd.rows, _BLOCK_ROWS):
        r1 = min(rd.rows, r0 + _BLOCK_ROWS)
        pos = _rcm_samples(rd, params, f_dc, R0, slice(r0, r1)) + cols
        data[r0:r1] = kernels.resample_rows(data[r0:r1], pos, taps=taps, beta=kaiser_beta,
                                            zero_outside=True)
    return rd.with_data(data)


def rcmc_freq2d(rd: Raster, params: RadarParams, f_dc: float, R0_center: float,
                overwrite: bool = False) -> Raster:
    """Remove the migration of range ``R0_center`` with a fast-time linear phase."""
    rd.expect(Domain.TIME_DOPPLER)
    delay = _rcm_samples(rd, params, f_dc, R0_center) / rd.Fr  # seconds, (rows, 1)
    f_t = rd.range_freq_axis()[None, :]
    spec = range_forward(rd.data, overwrite=overwrite)
    for r0 in range(0, rd.rows, _BLOCK_ROWS):
        r1 = min(rd.rows, r0 + _BLOCK_ROWS)
        spec[r0:r1] *= np.exp(2j * np.pi * f_t * delay[r0:r1])
    return rd.with_data(range_inverse(spec, overwrite=True))


def azimuth_filter_phase(params: RadarParams, f, R0):
    """Phase (rad) of the unit-modulus azimuth matched filter.

    ``-pi f^2 / K_a`` plus the ``pi/4`` carried by the spectrum of the
    replica ``exp(j pi K_a eta^2)``.
    """
    return -np.pi * f**2 / azimuth_fm_rate(params, R0) + np.pi / 4


def azimuth_replica_spectrum(params: RadarParams, rows: int, PRF: float, R0,
                             aperture_time: float, f_dc_frac: float = 0.0) -> np.ndarray:
    """Conjugate DFT (native order) of ``w_a(eta) exp(-j pi K_a eta^2)`` per column.

    The replica is centred on ``-f_dc_frac / K_a`` so that it matches the
    part of the aperture that falls in the processed Doppler band.
    """
    R0 = np.atleast_1d(np.asarray(R0, dtype=float))
    Ka = azimuth_fm_rate(params, R0)[None, :]
    n = np.arange(rows)
    eta = (np.where(n < (rows + 1) // 2, n, n - rows) / PRF)[:, None]
    eta = eta + f_dc_frac / Ka
    inside = np.abs(eta) <= 0.5 * aperture_time * (1 + 1e-12)
    rep = np.where(inside, np.exp(-1j * np.pi * Ka * eta**2), 0)
    if np.count_nonzero(inside, axis=0).max() >= rows:
        raise ValueError("azimuth replica longer than the raster")
    return np.conj(sfft.fft(rep, axis=0, workers=fft_workers()))


def azimuth_compress(rd: Raster, params: RadarParams, f_dc_frac: float,
                     filter: str = "phase", aperture_time: float | None = None,
                     overwrite: bool = False) -> Raster:
    rd.expect(Domain.TIME_DOPPLER)
    R0 = rd.slant_ranges(params.c)
    data = working_array(rd.data, not overwrite)
    if filter == "phase":
        f = unwrap_doppler(rd.doppler_axis(), rd.PRF, f_dc_frac)[:, None]
        for r0 in range(0, rd.rows, _BLOCK_ROWS):
            r1 = min(rd.rows, r0 + _BLOCK_ROWS)
            data[r0:r1] *= np.exp(1j * azimuth_filter_phase(params, f[r0:r1], R0[None, :]))
    elif filter == "replica":
        if aperture_time is None:
            raise ValueError("replica azimuth filter needs aperture_time")
        order = (rd.doppler_bin0 + np.arange(rd.rows)) % rd.rows
        for c0 in range(0, rd.cols, _BLOCK_ROWS):
            c1 = min(rd.cols, c0 + _BLOCK_ROWS)
            H = azimuth_replica_spectrum(params, rd.rows, rd.PRF, R0[c0:c1], aperture_time, f_dc_frac)
            data[:, c0:c1] *= H[order]
    else:
        raise ValueError(f"unknown azimuth filter {filter!r}")
    return to_time_time(rd.with_data(data), overwrite=True)


def focus_rda(raw: Raster, params: RadarParams, opts: RdaOptions = RdaOptions()) -> Raster:
    """Range compression, azimuth FFT, RCMC and azimuth compression.

    Works on one copy of the input; single-precision input stays single precision.
    """
    frac = opts.frac(raw.PRF)
    rc = range_compress(raw, params)
    rd = to_time_doppler(rc, frac, overwrite=True)
    del rc
    if opts.rcmc_mode == "interp":
        rd = rcmc_interp(rd, params, opts.f_dc, opts.interp_kernel_len, opts.kaiser_beta, overwrite=True)
    elif opts.rcmc_mode == "freq2d":
        R0c = opts.R0_center
        if R0c is None:
            R0c = float(np.median(rd.slant_ranges(params.c)))
        rd = rcmc_freq2d(rd, params, opts.f_dc, R0c, overwrite=True)
    return azimuth_compress(rd, params, frac, opts.azimuth_filter, opts.aperture_time, overwrite=True)
