"""Doppler centroid estimation.

The fractional centroid comes from the data, either by fitting a sinusoid
to the averaged azimuth power spectrum or from the phase of the lag-one
azimuth autocorrelation. The PRF ambiguity is resolved with a coarse
centroid derived from the range walk of an isolated bright target.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import fft as sfft

from .params import RadarParams, dc_from_range_rate
from .raster import Domain, Raster, fft_workers

DEFAULT_BLOCK = 230


class NoEstimateError(RuntimeError):
    """The data carry no usable Doppler information."""


class AmbiguousTrajectoryError(RuntimeError):
    """The window does not hold a single clean target trajectory."""


class AmbiguityWarning(UserWarning):
    """The coarse centroid disagrees with the resolved one by more than PRF/2."""


class FewCellsWarning(UserWarning):
    pass


@dataclass(frozen=True)
class DopplerEstimate:
    f_dc_frac: float
    M: int
    f_dc: float
    PRF: float
    method: str
    coarse: float | None = None
    consistent: bool = True

    def __post_init__(self):
        if abs(self.f_dc_frac) > self.PRF / 2 * (1 + 1e-12):
            raise ValueError(f"|f_dc_frac|={abs(self.f_dc_frac)} exceeds PRF/2")


@dataclass(frozen=True)
class TrajectorySlope:
    """Least-squares range walk of one target, in range samples per azimuth sample."""

    slope: float
    intercept: float
    fit_residual: float
    support: tuple[int, int]
    rows_used: int


def _column_block(rc: Raster, cols, block: int) -> slice:
    """Explicit column range, or the ``block`` adjacent columns holding most energy."""
    if cols is not None:
        sl = cols if isinstance(cols, slice) else slice(*cols)
        start, stop, _ = sl.indices(rc.cols)
        if stop <= start:
            raise ValueError(f"empty column block {cols!r}")
        return slice(start, stop)
    if rc.cols < block:
        warnings.warn(f"only {rc.cols} range cells available, {block} requested", FewCellsWarning)
        return slice(0, rc.cols)
    power = np.einsum("ij,ij->j", rc.data.real, rc.data.real) + np.einsum("ij,ij->j", rc.data.imag, rc.data.imag)
    run = np.convolve(power, np.ones(block), mode="valid")
    start = int(np.argmax(run))
    return slice(start, start + block)


def _wrap(f: float, PRF: float) -> float:
    return float((f + PRF / 2) % PRF - PRF / 2)


def azimuth_power_spectrum(rc: Raster, cols=None, block: int = DEFAULT_BLOCK) -> np.ndarray:
    """Azimuth power spectrum summed over a block of range cells, native FFT order."""
    rc.expect(Domain.TIME_TIME)
    sl = _column_block(rc, cols, block)
    spec = sfft.fft(rc.data[:, sl], axis=0, workers=fft_workers())
    return np.sum(spec.real**2 + spec.imag**2, axis=1)


def fit_spectrum_peak(power: np.ndarray, PRF: float, cells: int = 1) -> float:
    """Peak of ``a0 + a1 cos(2 pi (f - f_peak) / PRF)`` fitted to a periodic power spectrum.

    ``cells`` is the number of independent spectra that were summed; it
    sets the noise floor below which the fit is rejected.
    """
    n = power.size
    if n < 3:
        raise NoEstimateError("need at least 3 azimuth samples")
    theta = 2 * np.pi * np.arange(n) / n
    design = np.column_stack([np.ones(n), np.cos(theta), np.sin(theta)])
    (a0, a, b), *_ = np.linalg.lstsq(design, power, rcond=None)
    amp = math.hypot(a, b)
    # a flat spectrum of averaged noise gives amp ~ a0 * sqrt(2 / (n * cells))
    if not (a0 > 0) or amp <= 4 * a0 * math.sqrt(2.0 / (n * max(cells, 1))):
        raise NoEstimateError("azimuth spectrum is flat; no centroid to fit")
    return PRF / (2 * np.pi) * math.atan2(b, a)


def estimate_frac_spectrum(rc: Raster, cols=None, block: int = DEFAULT_BLOCK) -> float:
    sl = _column_block(rc, cols, block)
    power = azimuth_power_spectrum(rc, sl)
    return fit_spectrum_peak(power, rc.PRF, sl.stop - sl.start)


def estimate_frac_accc(rc: Raster, cols=None, block: int = DEFAULT_BLOCK) -> float:
    """Phase of the lag-one azimuth autocorrelation, scaled to Hz."""
    rc.expect(Domain.TIME_TIME)
    if rc.rows < 2:
        raise NoEstimateError("need at least 2 azimuth samples")
    sl = _column_block(rc, cols, block)
    d = rc.data[:, sl]
    acc = np.vdot(d[:-1], d[1:])
    if not abs(acc) > 0:
        raise NoEstimateError("zero autocorrelation; no centroid")
    return float(rc.PRF / (2 * np.pi) * np.angle(acc))


def _peak_columns(mag: np.ndarray) -> np.ndarray:
    """Argmax per row with three-point parabolic refinement."""
    j = np.argmax(mag, axis=1)
    rows = np.arange(mag.shape[0])
    jm = np.clip(j - 1, 0, mag.shape[1] - 1)
    jp = np.clip(j + 1, 0, mag.shape[1] - 1)
    y0, y1, y2 = mag[rows, jm], mag[rows, j], mag[rows, jp]
    den = y0 - 2 * y1 + y2
    with np.errstate(divide="ignore", invalid="ignore"):
        off = np.where((den < 0) & (jm != j) & (jp != j), 0.5 * (y0 - y2) / den, 0.0)
    return j + off


def _second_peak_ratio(mag: np.ndarray, j: np.ndarray, guard: int) -> np.ndarray:
    masked = mag.copy()
    cols = np.arange(mag.shape[1])[None, :]
    masked[np.abs(cols - j[:, None]) <= guard] = 0
    return masked.max(axis=1) / mag[np.arange(mag.shape[0]), j]


def trajectory_slope(rc: Raster, rows=None, cols=None, *, threshold: float = 0.1,
                     max_residual: float = 1.0, guard: int = 4,
                     multimodal_ratio: float = 0.7, multimodal_fraction: float = 0.25) -> TrajectorySlope:
    """Fit a straight line through the per-row range peak of a bright target.

    Rows whose peak is below ``threshold`` of the window maximum are
    ignored. A row is multi-modal when a second peak more than ``guard``
    columns away reaches ``multimodal_ratio`` of its main peak.
    """
    rc.expect(Domain.TIME_TIME)
    rsl = slice(*rows) if isinstance(rows, tuple) else (rows or slice(None))
    csl = slice(*cols) if isinstance(cols, tuple) else (cols or slice(None))
    r0 = rsl.indices(rc.rows)[0]
    c0 = csl.indices(rc.cols)[0]
    mag = np.abs(rc.data[rsl, csl])
    if mag.size == 0:
        raise ValueError("empty trajectory window")
    peak_row = mag.max(axis=1)
    top = peak_row.max()
    if not top > 0:
        raise AmbiguousTrajectoryError("window holds no signal")
    use = np.nonzero(peak_row >= threshold * top)[0]
    if use.size < 3:
        raise AmbiguousTrajectoryError(f"only {use.size} rows above threshold")
    m = mag[use]
    j = np.argmax(m, axis=1)
    if np.mean(_second_peak_ratio(m, j, guard) >= multimodal_ratio) > multimodal_fraction:
        raise AmbiguousTrajectoryError("several comparable peaks per row")
    x = use.astype(float)
    y = _peak_columns(m)
    slope, intercept = np.polyfit(x, y, 1)
    resid = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    if resid > max_residual:
        raise AmbiguousTrajectoryError(f"trajectory fit residual {resid:.2f} samples exceeds {max_residual}")
    return TrajectorySlope(float(slope), float(intercept + c0 - slope * r0), resid,
                           (r0 + int(use[0]), r0 + int(use[-1]) + 1), int(use.size))


def range_rate_from_slope(slope: float, params: RadarParams) -> float:
    """dR/deta (m/s) from a walk in range samples per azimuth sample."""
    return slope * params.c / (2 * params.Fr) * params.PRF


def coarse_dc_from_slope(slope: TrajectorySlope | float, params: RadarParams) -> float:
    s = slope.slope if isinstance(slope, TrajectorySlope) else float(slope)
    return dc_from_range_rate(params, range_rate_from_slope(s, params))


def resolve_ambiguity(f_dc_coarse: float, f_dc_frac: float, PRF: float,
                      method: str = "resolved") -> DopplerEstimate:
    if abs(f_dc_frac) > PRF / 2 * (1 + 1e-12):
        raise ValueError(f"|f_dc_frac|={abs(f_dc_frac)} exceeds PRF/2")
    M = int(round((f_dc_coarse - f_dc_frac) / PRF))
    f_dc = M * PRF + f_dc_frac
    consistent = abs(f_dc_coarse - f_dc) <= PRF / 2
    if not consistent:
        warnings.warn(f"coarse centroid {f_dc_coarse:.1f} Hz is more than PRF/2 from {f_dc:.1f} Hz",
                      AmbiguityWarning)
    return DopplerEstimate(f_dc_frac, M, f_dc, PRF, method, f_dc_coarse, consistent)


def estimate_doppler(rc: Raster, params: RadarParams, method: str = "spectrum",
                     resolve: bool = False, cols=None, rows=None,
                     window_cols=None) -> DopplerEstimate:
    """Fractional centroid by ``method`` plus, with ``resolve``, the ambiguity
    from the trajectory slope inside ``rows`` x ``window_cols``."""
    if method == "spectrum":
        frac = estimate_frac_spectrum(rc, cols)
    elif method == "accc":
        frac = estimate_frac_accc(rc, cols)
    elif method == "slope":
        frac = estimate_frac_spectrum(rc, cols)
        resolve = True
    else:
        raise ValueError(f"unknown method {method!r}")
    frac = _wrap(frac, rc.PRF) if abs(frac) > rc.PRF / 2 else frac
    if not resolve:
        return DopplerEstimate(frac, 0, frac, rc.PRF, method)
    coarse = coarse_dc_from_slope(trajectory_slope(rc, rows, window_cols), params)
    return resolve_ambiguity(coarse, frac, rc.PRF, method)


def format_estimate(est: DopplerEstimate) -> str:
    lines = [
        f"f_dc_frac={est.f_dc_frac!r}",
        f"M={est.M}",
        f"f_dc={est.f_dc!r}",
        f"PRF={est.PRF!r}",
        f"method={est.method}",
        f"consistent={str(est.consistent).lower()}",
    ]
    if est.coarse is not None:
        lines.append(f"coarse={est.coarse!r}")
    return "\n".join(lines) + "\n"


def parse_estimate(text: str) -> DopplerEstimate:
    kv = {}
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            key, _, val = line.partition("=")
            kv[key.strip()] = val.strip()
    try:
        return DopplerEstimate(
            float(kv["f_dc_frac"]), int(kv["M"]), float(kv["f_dc"]), float(kv["PRF"]),
            kv.get("method", "unknown"),
            float(kv["coarse"]) if "coarse" in kv else None,
            kv.get("consistent", "true") == "true",
        )
    except KeyError as exc:
        raise ValueError(f"estimate is missing key {exc.args[0]!r}") from None
