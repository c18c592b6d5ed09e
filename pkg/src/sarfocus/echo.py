"""Baseband raw-data simulation of point reflectors."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.fft import next_fast_len

from .params import (
    PointTarget,
    RadarParams,
    Scene,
    azimuth_fm_rate,
    beam_center_time,
    target_doppler_centroid,
)
from .raster import Domain, Raster


@dataclass(frozen=True)
class Grid:
    """Sampling grid of a raw raster; rates come from the radar parameters."""

    rows: int
    cols: int
    t0: float
    eta0: float

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError("grid must be at least 1x1")


@dataclass(frozen=True)
class SimOptions:
    """``include_rvp`` keeps the ``exp(j pi beta (2R/c)^2)`` term so the echo is
    the plain delayed chirp; switching it off reproduces the shortened model
    with that term dropped."""

    include_rvp: bool = True
    noise_snr_db: float | None = None
    seed: int = 0
    allow_aliased: bool = False


def _cycles(x):
    """Fractional part of a phase expressed in cycles (keeps exp() accurate)."""
    return x - np.rint(x)


def _in_window(x, width):
    return np.abs(x) <= 0.5 * width * (1 + 1e-12)


def echo_phase(params: RadarParams, t, tau, include_rvp: bool = True):
    """Echo phase in cycles at fast time ``t`` for round-trip delay ``tau``."""
    carrier = _cycles(params.f_c * tau)
    if include_rvp:
        chirp = 0.5 * params.beta * (t - tau) ** 2
    else:
        chirp = _cycles(0.5 * params.beta * t**2) - _cycles(params.beta * t * tau)
    return -carrier + chirp


def simulate_raw(scene: Scene, params: RadarParams, grid: Grid,
                 opts: SimOptions = SimOptions()) -> Raster:
    if params.Fr < params.B and not opts.allow_aliased:
        raise ValueError(f"Fr={params.Fr} < B={params.B}: fast time would alias")
    data = np.zeros((grid.rows, grid.cols), dtype=np.complex128)
    eta = grid.eta0 + np.arange(grid.rows) / params.PRF
    t = grid.t0 + np.arange(grid.cols) / params.Fr
    for tgt in scene.targets:
        _add_target(data, tgt, scene.aperture_time, params, eta, t, grid, opts.include_rvp)
    raw = Raster(data, grid.t0, params.Fr, grid.eta0, params.PRF, Domain.TIME_TIME)
    if opts.noise_snr_db is not None:
        raw = add_noise(raw, opts.noise_snr_db, opts.seed)
    return raw


def _add_target(data, tgt: PointTarget, aperture, params, eta, t, grid, include_rvp):
    rows = np.nonzero(_in_window(eta - tgt.eta_c, aperture))[0]
    if rows.size == 0:
        return
    tau = 2 * tgt.range_at(params.v, eta[rows]) / params.c
    lo = max(0, int(math.floor((tau.min() - params.T / 2 - grid.t0) * params.Fr)) - 1)
    hi = min(grid.cols, int(math.ceil((tau.max() + params.T / 2 - grid.t0) * params.Fr)) + 2)
    if hi <= lo:
        return
    tt = t[lo:hi][None, :]
    tau = tau[:, None]
    inside = _in_window(tt - tau, params.T)
    phase = echo_phase(params, tt, tau, include_rvp)
    block = np.where(inside, tgt.sigma * np.exp(2j * np.pi * phase), 0)
    data[rows[:, None], np.arange(lo, hi)[None, :]] += block


def _doppler_band(params: RadarParams, tgt: PointTarget, aperture: float) -> tuple[float, float]:
    """Doppler interval swept by ``tgt`` while inside the aperture window."""
    def f(eta):
        d = eta - tgt.eta_0
        return -(2 / params.wavelength) * params.v**2 * d / math.hypot(tgt.R0, params.v * d)
    return f(tgt.eta_c + aperture / 2), f(tgt.eta_c - aperture / 2)


def simulate_spectrum(scene: Scene, params: RadarParams, grid: Grid, f_dc: float = 0.0) -> Raster:
    """Stationary-phase 2D spectrum of a scene, in the layout of ``wk.spectrum_2d``.

    Each target contributes ``sigma W_r W_a exp(-j pi f_t^2 / beta)
    exp(-j 4 pi R0 / c sqrt((f_c + f_t)^2 - (c f_eta / 2v)^2)) exp(-j 2 pi f_eta eta_0)``
    on the rectangle of its chirp band and its aperture's Doppler band.
    Unlike the DFT of ``simulate_raw`` it carries none of the ripple of
    finite-length chirps, which makes it an exact input for phase checks.
    Doppler rows are unwrapped around ``f_dc``.
    """
    from .raster import doppler_bin0, unwrap_doppler, wrap_frequency

    frac = float(wrap_frequency(f_dc, params.PRF))
    b0 = doppler_bin0(grid.rows, params.PRF, frac)
    out = Raster(np.zeros((grid.rows, grid.cols), dtype=np.complex128), grid.t0, params.Fr,
                 grid.eta0, params.PRF, Domain.FREQ_FREQ, b0)
    f_eta = unwrap_doppler(out.doppler_axis(), params.PRF, f_dc)[:, None]
    f_t = out.range_freq_axis()[None, :]
    arg = (params.f_c + f_t) ** 2 - (params.c * f_eta / (2 * params.v)) ** 2
    root = np.sqrt(np.where(arg > 0, arg, 0.0))
    chirp = _cycles(-0.5 * f_t**2 / params.beta)
    in_r = _in_window(f_t, params.B)
    for tgt in scene.targets:
        lo, hi = _doppler_band(params, tgt, scene.aperture_time)
        in_a = (f_eta >= lo) & (f_eta <= hi)
        cyc = chirp - _cycles(2 * tgt.R0 / params.c * root) + _cycles((grid.eta0 - tgt.eta_0) * f_eta)
        out.data += np.where(in_r & in_a & (arg > 0), tgt.sigma * np.exp(2j * np.pi * cyc), 0)
    return out


def add_noise(raster: Raster, snr_db: float, seed: int) -> Raster:
    """Add circular complex Gaussian noise at ``snr_db`` below the mean signal power."""
    raster.expect(Domain.TIME_TIME)
    if math.isinf(snr_db) and snr_db > 0:
        return raster.copy()
    power = float(np.mean(np.abs(raster.data) ** 2))
    sigma2 = power / 10 ** (snr_db / 10)
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal(raster.shape) + 1j * rng.standard_normal(raster.shape)
    return raster.with_data(raster.data + noise * math.sqrt(sigma2 / 2))


def squinted_target(params: RadarParams, R0: float, f_dc: float, sigma: complex = 1.0,
                    eta_0: float = 0.0) -> PointTarget:
    """Target whose beam centre sees Doppler centroid ``f_dc``."""
    return PointTarget(sigma, R0, eta_0 + beam_center_time(params, R0, f_dc), eta_0)


def focus_row_time(params: RadarParams, tgt: PointTarget) -> float:
    """Slow time where the range-Doppler processor places ``tgt``.

    The parabolic azimuth filter applied on the wrapped Doppler axis leaves
    an offset of ``-M PRF / K_a`` for a centroid in ambiguity band ``M``,
    plus the group-delay error of the parabola against the exact
    hyperbolic spectrum at the centroid.
    """
    f = target_doppler_centroid(params, tgt)
    M = round(f / params.PRF)
    D = math.sqrt(1.0 - (params.wavelength * f / (2 * params.v)) ** 2)
    return tgt.eta_0 - (M * params.PRF + f * (1.0 / D - 1.0)) / azimuth_fm_rate(params, tgt.R0)


def auto_grid(scene: Scene, params: RadarParams, margin_rows: int = 16,
              margin_cols: int = 32) -> Grid:
    """Smallest FFT-friendly grid covering every echo and every focused position."""
    if not scene.targets:
        raise ValueError("cannot size a grid for an empty scene")
    half = scene.aperture_time / 2
    e_lo = min(min(tg.eta_c - half, focus_row_time(params, tg)) for tg in scene.targets)
    e_hi = max(max(tg.eta_c + half, focus_row_time(params, tg)) for tg in scene.targets)
    t_lo = min(2 * tg.R0 / params.c for tg in scene.targets) - params.T / 2
    t_hi = max(
        2 * max(tg.range_at(params.v, tg.eta_c - half), tg.range_at(params.v, tg.eta_c + half)) / params.c
        for tg in scene.targets
    ) + params.T / 2
    rows = next_fast_len(int(math.ceil((e_hi - e_lo) * params.PRF)) + 1 + 2 * margin_rows)
    cols = next_fast_len(int(math.ceil((t_hi - t_lo) * params.Fr)) + 1 + 2 * margin_cols)
    eta0 = 0.5 * (e_lo + e_hi) - (rows // 2) / params.PRF
    t0 = 0.5 * (t_lo + t_hi) - (cols // 2) / params.Fr
    return Grid(rows, cols, t0, eta0)


def expected_cell(raster: Raster, R0: float, eta: float, c: float) -> tuple[float, float]:
    """Fractional (row, col) of slow time ``eta`` and slant range ``R0`` on ``raster``."""
    return (eta - raster.eta0) * raster.PRF, (2 * R0 / c - raster.t0) * raster.Fr


# --- scene text format ----------------------------------------------------------

def parse_scene(text: str, aperture_time: float, source: str = "<scene>") -> Scene:
    targets = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) not in (4, 5):
            raise ValueError(f"{source}:{lineno}: expected 'sigma_re sigma_im R0 eta_c [eta_0]'")
        try:
            values = [float(p) for p in parts]
        except ValueError:
            raise ValueError(f"{source}:{lineno}: non-numeric field in {raw!r}") from None
        targets.append(PointTarget(complex(values[0], values[1]), *values[2:]))
    return Scene(tuple(targets), aperture_time)


def load_scene(path: str | Path, aperture_time: float) -> Scene:
    path = Path(path)
    return parse_scene(path.read_text(), aperture_time, source=str(path))


def format_scene(scene: Scene) -> str:
    lines = ["# sigma_re sigma_im R0 eta_c [eta_0]"]
    for tg in scene.targets:
        s = complex(tg.sigma)
        tail = f" {tg.eta_0!r}" if tg.eta_0 else ""
        lines.append(f"{s.real!r} {s.imag!r} {tg.R0!r} {tg.eta_c!r}{tail}")
    return "\n".join(lines) + "\n"
