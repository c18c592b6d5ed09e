"""Stripmap SAR toolkit: echo simulation, range-Doppler and wavenumber
focusing, Doppler centroid estimation, despeckling and focus metrics."""

__version__ = "0.1.0"

from .params import (  # noqa: E402
    C_LIGHT,
    DESK,
    DESK_APERTURE,
    RADARSAT1,
    ConfigError,
    PointTarget,
    RadarParams,
    Scene,
    dc_from_range_rate,
    fm_rates,
    load_config,
    range_resolution,
    slant_range,
)
from .raster import Domain, DomainError, Raster  # noqa: E402
from .echo import Grid, SimOptions, add_noise, auto_grid, simulate_raw  # noqa: E402
from .rda import RdaOptions, focus_rda  # noqa: E402
from .wk import WkOptions, focus_wk  # noqa: E402
from .dce import DopplerEstimate, TrajectorySlope, resolve_ambiguity  # noqa: E402
from .speckle import FilterSpec, median_despeckle  # noqa: E402
from .metrics import IrfReport, analyze_point_target, energy_concentration  # noqa: E402
from .io import read_raster, render_magnitude, write_raster  # noqa: E402

__all__ = [
    "C_LIGHT", "DESK", "DESK_APERTURE", "RADARSAT1", "ConfigError", "PointTarget", "RadarParams",
    "Scene", "dc_from_range_rate", "fm_rates", "load_config", "range_resolution", "slant_range",
    "Domain", "DomainError", "Raster", "Grid", "SimOptions", "add_noise", "auto_grid",
    "simulate_raw", "RdaOptions", "focus_rda", "WkOptions", "focus_wk", "DopplerEstimate",
    "TrajectorySlope", "resolve_ambiguity", "FilterSpec", "median_despeckle", "IrfReport",
    "analyze_point_target", "energy_concentration", "read_raster", "render_magnitude",
    "write_raster",
]
