"""Radar constants, slant-range geometry and the closed-form quantities derived from them."""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np

C_LIGHT = 2.99792458e8


class ConfigError(ValueError):
    """A configuration file or parameter set violates an invariant.

    ``key`` names the offending parameter when one can be identified.
    """

    def __init__(self, message: str, key: str | None = None):
        super().__init__(message)
        self.key = key


@dataclass(frozen=True)
class RadarParams:
    """Platform and waveform constants of a stripmap SAR.

    Parameters
    ----------
    f_c : float
        Carrier frequency (Hz).
    B : float
        Chirp bandwidth (Hz).
    T : float
        Chirp duration (s).
    Fr : float
        Fast-time sampling rate (Hz).
    PRF : float
        Pulse repetition frequency (Hz).
    v : float
        Platform speed (m/s).
    R_ref : float
        Reference slant range used by the wavenumber processor (m).
    c : float
        Propagation speed (m/s).
    """

    f_c: float
    B: float
    T: float
    Fr: float
    PRF: float
    v: float
    R_ref: float
    c: float = C_LIGHT

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ConfigError(f"{f.name} must be finite and > 0, got {value!r}", key=f.name)
        if self.Fr < self.B:
            raise ConfigError(f"Fr={self.Fr} below chirp bandwidth B={self.B}", key="Fr")

    @property
    def beta(self) -> float:
        """Chirp rate B/T (Hz/s)."""
        return self.B / self.T

    @property
    def wavelength(self) -> float:
        return self.c / self.f_c

    # short alias used throughout the processors
    lam = wavelength

    def with_(self, **changes) -> "RadarParams":
        return replace(self, **changes)


@dataclass(frozen=True)
class PointTarget:
    """Point reflector with complex reflectivity ``sigma``, closest-approach
    range ``R0`` (m) and beam-centre slow time ``eta_c`` (s).

    ``eta_0`` is the slow time of closest approach (zero Doppler); the
    default puts every target abeam at ``eta = 0``.
    """

    sigma: complex
    R0: float
    eta_c: float = 0.0
    eta_0: float = 0.0

    def range_at(self, v: float, eta):
        return np.hypot(self.R0, v * (np.asarray(eta, dtype=float) - self.eta_0))[()]

    def __post_init__(self):
        if not (math.isfinite(self.R0) and self.R0 > 0):
            raise ValueError(f"R0 must be > 0, got {self.R0}")
        if not (math.isfinite(abs(complex(self.sigma)))
                and math.isfinite(self.eta_c) and math.isfinite(self.eta_0)):
            raise ValueError("sigma and eta_c must be finite")


@dataclass(frozen=True)
class Scene:
    targets: tuple[PointTarget, ...]
    aperture_time: float

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(self.targets))
        if not (math.isfinite(self.aperture_time) and self.aperture_time > 0):
            raise ValueError(f"aperture_time must be > 0, got {self.aperture_time}")


# RADARSAT-1 stripmap parameters; R_ref is the first-sample slant range.
RADARSAT1 = RadarParams(
    f_c=5.3e9,
    B=30.116e6,
    T=41.75e-6,
    Fr=32.317e6,
    PRF=1256.98,
    v=7062.0,
    R_ref=988.65e3,
)
RADARSAT1_R0 = 988.65e3

# Reduced pulse, oversampled range; same orbit geometry and PRF as RADARSAT1.
DESK = RadarParams(
    f_c=5.3e9,
    B=30.116e6,
    T=5e-6,
    Fr=2 * 30.116e6,
    PRF=1256.98,
    v=7062.0,
    R_ref=988.65e3,
)
DESK_APERTURE = 0.35


def slant_range(target: PointTarget | float, v: float, eta):
    """Distance radar-to-target, ``sqrt(R0**2 + (v*eta)**2)``.

    ``target`` may be a :class:`PointTarget` (slow time then counts from its
    ``eta_0``) or a bare closest-approach range. ``eta`` may be an array.
    """
    if isinstance(target, PointTarget):
        return target.range_at(v, eta)
    return np.hypot(float(target), v * np.asarray(eta, dtype=float))[()]


def paraxial_range(R0: float, v: float, eta):
    return R0 + (v * eta) ** 2 / (2 * R0)


def fm_rates(
    params: RadarParams, R0: float, eta_c: float = 0.0, v: float | None = None
) -> tuple[float, float]:
    """Return ``(f_R, K_a)``.

    ``f_R = v**2 R0**2 / R(eta_c)**3`` is the second derivative of the slant
    range (m/s^2); ``K_a = 2 v**2 / (lambda R0)`` is the azimuth chirp rate
    (Hz/s). At ``eta_c == 0`` they are related by ``K_a = 2 f_R / lambda``.
    ``v`` overrides the platform speed.
    """
    v = params.v if v is None else v
    R = math.hypot(R0, v * eta_c)
    f_R = v**2 * R0**2 / R**3
    K_a = 2 * v**2 / (params.wavelength * R0)
    return f_R, K_a


def azimuth_fm_rate(params: RadarParams, R0):
    """K_a for one or many ranges (array friendly)."""
    return 2 * params.v**2 / (params.wavelength * R0)


def range_resolution(params: RadarParams) -> float:
    return params.c / (2 * params.B)


def dc_from_range_rate(params: RadarParams, dR_deta: float) -> float:
    """Doppler centroid of a target whose range changes at ``dR_deta`` m/s.

    A receding target (positive range rate) has a negative centroid, matching
    the phase ``-4 pi R(eta) / lambda`` of the simulated echo.
    """
    return -(2.0 / params.wavelength) * dR_deta


def beam_center_time(params: RadarParams, R0: float, f_dc: float) -> float:
    """Slow time after closest approach at which a target at ``R0`` has
    instantaneous Doppler ``f_dc``.

    Inverse of ``f = -(2/lambda) v**2 eta / R(eta)`` on the exact hyperbola.
    """
    s = -f_dc * params.wavelength / (2 * params.v)
    if abs(s) >= 1:
        raise ValueError(f"Doppler {f_dc} Hz exceeds 2v/lambda")
    return R0 * s / (params.v * math.sqrt(1 - s * s))


def target_doppler_centroid(params: RadarParams, target: PointTarget) -> float:
    """Doppler of ``target`` at its beam-centre time on the exact hyperbola."""
    d = target.eta_c - target.eta_0
    R = math.hypot(target.R0, params.v * d)
    return dc_from_range_rate(params, params.v**2 * d / R)


def rcm_shift(params: RadarParams, R0, f_eta):
    """Paraxial range cell migration in the range-Doppler domain (m)."""
    return params.wavelength**2 * R0 * f_eta**2 / (8 * params.v**2)


# --- key=value configuration --------------------------------------------------

_KEYS = {"f_c", "B", "T", "Fr", "PRF", "v", "R_ref", "c", "beta"}


def parse_config(text: str, source: str = "<config>") -> RadarParams:
    values: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected key=value, got {raw!r}")
        key, _, val = (s.strip() for s in line.partition("="))
        if key not in _KEYS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}", key=key)
        if key in values:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}", key=key)
        try:
            values[key] = float(val)
        except ValueError:
            raise ConfigError(f"{source}:{lineno}: {key} is not a number: {val!r}", key=key) from None

    beta = values.pop("beta", None)
    if "T" not in values and beta is not None and "B" in values and beta > 0:
        values["T"] = values["B"] / beta
    missing = sorted({"f_c", "B", "T", "Fr", "PRF", "v", "R_ref"} - values.keys())
    if missing:
        raise ConfigError(f"{source}: missing key {missing[0]!r}", key=missing[0])
    params = RadarParams(**values)
    if beta is not None and abs(beta - params.beta) > 1e-4 * params.beta:
        raise ConfigError(
            f"{source}: beta={beta} inconsistent with B/T={params.beta}", key="beta"
        )
    return params


def load_config(path: str | Path) -> RadarParams:
    path = Path(path)
    return parse_config(path.read_text(), source=str(path))


def format_config(params: RadarParams) -> str:
    lines = [f"{f.name} = {getattr(params, f.name)!r}" for f in fields(params)]
    return "\n".join(lines) + "\n"

