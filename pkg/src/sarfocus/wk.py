"""Wavenumber (omega-k) focusing in the two-dimensional frequency domain."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import kernels
from .params import RadarParams
from .raster import (
    Domain,
    Raster,
    azimuth_forward,
    azimuth_inverse,
    doppler_bin0,
    range_forward,
    range_inverse,
    unwrap_doppler,
    working_array,
    working_dtype,
    wrap_frequency,
)

KERNEL_LENGTHS = (4, 8, 16)
_BLOCK_ROWS = 256


class EvanescentWarning(UserWarning):
    """More than 1% of the spectrum lies outside the propagating region."""


@dataclass(frozen=True)
class WkOptions:
    """Wavenumber processor settings.

    R_ref : reference slant range (m); ``None`` takes it from the radar parameters.
    stolt_kernel_len : windowed-sinc taps used by the Stolt resampler.
    f_dc : unambiguous Doppler centroid used to unwrap the Doppler rows.
    f_dc_frac : centre of the Doppler axis; defaults to ``f_dc`` wrapped.
    output_grid : ``(cols, Fr)`` of the uniform f'_t axis; ``None`` keeps the input axis.
    origin : ``"input"`` puts the image on the raw fast-time grid; ``"reference"``
        leaves column 0 at the reference range (peak at ``2 (R0 - R_ref) / c``).
    """

    R_ref: float | None = None
    stolt_kernel_len: int = 8
    f_dc: float = 0.0
    f_dc_frac: float | None = None
    output_grid: tuple[int, float] | None = None
    origin: str = "input"
    kaiser_beta: float = 5.0

    def __post_init__(self):
        if self.stolt_kernel_len not in KERNEL_LENGTHS:
            raise ValueError(f"stolt_kernel_len must be one of {KERNEL_LENGTHS}")
        if self.origin not in ("input", "reference"):
            raise ValueError(f"unknown origin {self.origin!r}")

    def frac(self, PRF: float) -> float:
        f = float(wrap_frequency(self.f_dc, PRF)) if self.f_dc_frac is None else self.f_dc_frac
        if abs(f) > PRF / 2:
            raise ValueError(f"|f_dc_frac|={abs(f)} exceeds PRF/2")
        return f


def _origin_phase(spec: Raster, sign: float) -> np.ndarray:
    return np.exp(sign * 2j * np.pi * spec.range_freq_axis() * spec.t0)


def spectrum_2d(raw: Raster, f_dc_frac: float, overwrite: bool = False) -> Raster:
    """2D DFT referenced to fast time zero.

    Rows follow the Doppler axis centred on ``f_dc_frac``; columns are
    baseband range frequencies from ``-Fr/2``. The ``exp(-j 2 pi f_t t0)``
    factor makes the spectrum that of a record starting at ``t = 0``.
    """
    raw.expect(Domain.TIME_TIME)
    b0 = doppler_bin0(raw.rows, raw.PRF, f_dc_frac)
    data = azimuth_forward(raw.data, b0, overwrite=overwrite)
    data = range_forward(data, overwrite=True)
    out = raw.with_data(data, domain=Domain.FREQ_FREQ, doppler_bin0=b0)
    out.data *= _origin_phase(out, -1)[None, :]
    return out


def inverse_spectrum_2d(spec: Raster, overwrite: bool = False) -> Raster:
    spec.expect(Domain.FREQ_FREQ, Domain.STOLT)
    data = working_array(spec.data, not overwrite)
    data *= _origin_phase(spec, +1)[None, :]
    data = range_inverse(data, overwrite=True)
    data = azimuth_inverse(data, spec.doppler_bin0, overwrite=True)
    return spec.with_data(data, domain=Domain.TIME_TIME, doppler_bin0=0)


def range_chirp_phase(params: RadarParams, f_t):
    """``pi f_t^2 / beta`` (rad), the conjugate of the chirp's spectral phase."""
    return np.pi * f_t**2 / params.beta


def remove_range_chirp(spec: Raster, params: RadarParams, overwrite: bool = False) -> Raster:
    spec.expect(Domain.FREQ_FREQ)
    data = working_array(spec.data, not overwrite)
    data *= np.exp(1j * range_chirp_phase(params, spec.range_freq_axis()))[None, :]
    return spec.with_data(data)


def migration_argument(params: RadarParams, f_t, f_eta):
    """``(f_c + f_t)^2 - c^2 f_eta^2 / (4 v^2)``; negative where evanescent."""
    return (params.f_c + f_t) ** 2 - (params.c * f_eta / (2 * params.v)) ** 2


def _doppler(spec: Raster, f_dc: float) -> np.ndarray:
    return unwrap_doppler(spec.doppler_axis(), spec.PRF, f_dc)


def reference_phase(params: RadarParams, R_ref: float, f_t, f_eta):
    """Reference phase (rad, reduced mod 2 pi) and the propagating-cell mask."""
    arg = migration_argument(params, f_t, f_eta)
    ok = arg > 0
    cycles = 2 * R_ref / params.c * np.sqrt(np.where(ok, arg, 0.0))
    return 2 * np.pi * (cycles - np.rint(cycles)), ok


def reference_multiply(spec: Raster, params: RadarParams, R_ref: float,
                       f_dc: float = 0.0, overwrite: bool = False) -> Raster:
    """Multiply by ``exp(+j 4 pi R_ref / c * sqrt(...))``; evanescent cells become zero."""
    spec.expect(Domain.FREQ_FREQ)
    f_t = spec.range_freq_axis()[None, :]
    f_eta = _doppler(spec, f_dc)[:, None]
    data = working_array(spec.data, not overwrite)
    zeroed = 0
    for r0 in range(0, spec.rows, _BLOCK_ROWS):
        r1 = min(spec.rows, r0 + _BLOCK_ROWS)
        phase, ok = reference_phase(params, R_ref, f_t, f_eta[r0:r1])
        data[r0:r1] *= np.where(ok, np.exp(1j * phase), 0)
        zeroed += int(ok.size - np.count_nonzero(ok))
    if zeroed > 0.01 * spec.data.size:
        warnings.warn(f"{zeroed} of {spec.data.size} cells evanescent and zeroed", EvanescentWarning)
    return spec.with_data(data)


def stolt_source_frequency(params: RadarParams, f_out, f_eta):
    """Input range frequency that maps onto output ``f_out`` for Doppler ``f_eta``.

    ``sqrt((f_c + f_out)^2 + q) - f_c`` with ``q = (c f_eta / 2v)^2``, written
    without the cancellation of the direct form.
    """
    a = params.f_c + f_out
    q = (params.c * f_eta / (2 * params.v)) ** 2
    return f_out + q / (np.sqrt(a * a + q) + a)


def stolt_resample(spec: Raster, params: RadarParams, opts: WkOptions = WkOptions(),
                   overwrite: bool = False) -> Raster:
    spec.expect(Domain.FREQ_FREQ)
    n_in = spec.cols
    df_in = spec.Fr / n_in
    if opts.output_grid is None:
        n_out, Fr_out = n_in, spec.Fr
    else:
        n_out, Fr_out = opts.output_grid
    if Fr_out > spec.Fr * (1 + 1e-12):
        raise ValueError(f"output band {Fr_out} Hz wider than available {spec.Fr} Hz")
    f_out = (np.arange(n_out) - n_out // 2) * (Fr_out / n_out)
    f_eta = _doppler(spec, opts.f_dc)
    f_lo = -(n_in // 2) * df_in
    if n_out == n_in:
        data = working_array(spec.data, not overwrite)
    else:
        data = np.empty((spec.rows, n_out), dtype=working_dtype(spec.data.dtype))
    for r0 in range(0, spec.rows, _BLOCK_ROWS):
        r1 = min(spec.rows, r0 + _BLOCK_ROWS)
        pos = (stolt_source_frequency(params, f_out[None, :], f_eta[r0:r1, None]) - f_lo) / df_in
        data[r0:r1] = kernels.resample_rows(spec.data[r0:r1], pos, taps=opts.stolt_kernel_len,
                                            beta=opts.kaiser_beta, zero_outside=True)
    return spec.with_data(data, Fr=Fr_out, domain=Domain.STOLT)


def focus_wk(raw: Raster, params: RadarParams, opts: WkOptions = WkOptions(),
             f_dc_frac: float | None = None) -> Raster:
    """2D spectrum, chirp removal, reference multiply, Stolt mapping and 2D inverse DFT."""
    R_ref = params.R_ref if opts.R_ref is None else opts.R_ref
    frac = opts.frac(raw.PRF) if f_dc_frac is None else f_dc_frac
    spec = spectrum_2d(raw, frac)
    spec = remove_range_chirp(spec, params, overwrite=True)
    spec = reference_multiply(spec, params, R_ref, opts.f_dc, overwrite=True)
    spec = stolt_resample(spec, params, opts, overwrite=True)
    f_out = spec.range_freq_axis()
    if opts.origin == "input":
        shift = 2 * R_ref / params.c - raw.t0
        t0 = raw.t0
    else:
        shift = 0.0
        t0 = 2 * R_ref / params.c
    spec.data *= np.exp(-2j * np.pi * f_out * shift)[None, :]
    data = range_inverse(spec.data, overwrite=True)
    data = azimuth_inverse(data, spec.doppler_bin0, overwrite=True)
    return spec.with_data(data, t0=t0, domain=Domain.TIME_TIME, doppler_bin0=0)
