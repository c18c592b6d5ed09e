import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sarfocus.dce import (
    AmbiguityWarning,
    AmbiguousTrajectoryError,
    DopplerEstimate,
    FewCellsWarning,
    NoEstimateError,
    coarse_dc_from_slope,
    estimate_doppler,
    estimate_frac_accc,
    estimate_frac_spectrum,
    format_estimate,
    parse_estimate,
    range_rate_from_slope,
    resolve_ambiguity,
    trajectory_slope,
)
from sarfocus.echo import add_noise, auto_grid, simulate_raw, squinted_target
from sarfocus.params import DESK, DESK_APERTURE, RADARSAT1, Scene
from sarfocus.raster import Raster
from sarfocus.rda import range_compress

from conftest import SQUINT_FDC

P = DESK


def compressed(f_dc, snr=10.0, seed=5, R0=P.R_ref):
    sc = Scene((squinted_target(P, R0, f_dc),), DESK_APERTURE)
    raw = simulate_raw(sc, P, auto_grid(sc, P))
    if snr is not None:
        raw = add_noise(raw, snr, seed)
    return range_compress(raw, P)


def track(rows, cols, slope, start, amp=1.0):
    r = np.arange(rows)[:, None]
    c = np.arange(cols)[None, :]
    return amp * np.sinc(c - (start + slope * r)).astype(complex)


@pytest.fixture(scope="module")
def rc_squint():
    return compressed(SQUINT_FDC)


@pytest.fixture(scope="module")
def rc_broad():
    return compressed(0.0)


class TestFractional:
    def test_spectrum_fit_squint(self, rc_squint):
        assert estimate_frac_spectrum(rc_squint) == pytest.approx(471.0, abs=10)

    def test_accc_squint(self, rc_squint):
        assert estimate_frac_accc(rc_squint) == pytest.approx(471.0, abs=10)

    def test_methods_agree(self, rc_squint):
        assert abs(estimate_frac_spectrum(rc_squint) - estimate_frac_accc(rc_squint)) <= 20

    def test_zero_squint(self, rc_broad):
        assert estimate_frac_spectrum(rc_broad) == pytest.approx(0.0, abs=10)
        assert estimate_frac_accc(rc_broad) == pytest.approx(0.0, abs=10)

    def test_wrap_boundary(self):
        rc = compressed(P.PRF / 2, snr=None)
        for f in (estimate_frac_spectrum(rc), estimate_frac_accc(rc)):
            assert abs(f) == pytest.approx(P.PRF / 2, abs=10)
            assert abs(f) <= P.PRF / 2

    @given(f=st.floats(-20 * P.PRF, 20 * P.PRF))
    def test_wrap_consistency(self, f):
        rc = compressed(f, seed=1)
        for est in (estimate_frac_spectrum(rc), estimate_frac_accc(rc)):
            d = (est - f + P.PRF / 2) % P.PRF - P.PRF / 2
            assert abs(d) <= 10

    def test_accc_pure_tone(self):
        eta = np.arange(512) / P.PRF
        r = Raster(np.exp(2j * np.pi * 100.0 * eta)[:, None] * np.ones((1, 8)), 0.0, P.Fr, 0.0, P.PRF)
        assert estimate_frac_accc(r, cols=slice(0, 8)) == pytest.approx(100.0, abs=0.1)

    def test_flat_spectrum(self, rng):
        d = rng.standard_normal((512, 256)) + 1j * rng.standard_normal((512, 256))
        with pytest.raises(NoEstimateError):
            estimate_frac_spectrum(Raster(d, 0.0, P.Fr, 0.0, P.PRF))

    def test_zero_data(self):
        r = Raster(np.zeros((64, 256), complex), 0.0, P.Fr, 0.0, P.PRF)
        with pytest.raises(NoEstimateError):
            estimate_frac_spectrum(r)
        with pytest.raises(NoEstimateError):
            estimate_frac_accc(r)

    def test_few_cells_warns(self):
        eta = np.arange(256) / P.PRF
        r = Raster(np.exp(2j * np.pi * 50.0 * eta)[:, None] * np.ones((1, 16)), 0.0, P.Fr, 0.0, P.PRF)
        with pytest.warns(FewCellsWarning):
            assert estimate_frac_accc(r) == pytest.approx(50.0, abs=0.1)


class TestSlope:
    def test_synthetic_track(self):
        r = Raster(track(600, 128, 0.034, 40.0), 0.0, P.Fr, 0.0, P.PRF)
        assert trajectory_slope(r).slope == pytest.approx(0.034, abs=0.002)

    def test_vertical_track(self):
        r = Raster(track(400, 64, 0.0, 30.3), 0.0, P.Fr, 0.0, P.PRF)
        ts = trajectory_slope(r)
        assert ts.slope == pytest.approx(0.0, abs=0.001)
        assert ts.support == (0, 400) and ts.rows_used == 400

    def test_desk_geometry(self, rc_squint):
        tgt = squinted_target(P, P.R_ref, SQUINT_FDC)
        d = tgt.eta_c - tgt.eta_0
        rate = P.v**2 * d / np.hypot(P.R_ref, P.v * d)
        want = rate * (2 * P.Fr / P.c) / P.PRF
        assert trajectory_slope(rc_squint).slope == pytest.approx(want, rel=0.05)

    @given(k=st.floats(1e-3, 1e3))
    def test_scale_invariant(self, k):
        d = track(300, 64, 0.05, 20.0)
        a = trajectory_slope(Raster(d, 0.0, P.Fr, 0.0, P.PRF))
        b = trajectory_slope(Raster(k * d, 0.0, P.Fr, 0.0, P.PRF))
        assert a.slope == pytest.approx(b.slope, abs=1e-9)

    def test_two_targets_ambiguous(self):
        d = track(300, 128, 0.03, 20.0) + track(300, 128, 0.03, 90.0)
        with pytest.raises(AmbiguousTrajectoryError):
            trajectory_slope(Raster(d, 0.0, P.Fr, 0.0, P.PRF))

    def test_window_selects_one_target(self):
        d = track(300, 128, 0.03, 20.0) + track(300, 128, 0.03, 90.0)
        ts = trajectory_slope(Raster(d, 0.0, P.Fr, 0.0, P.PRF), cols=slice(0, 60))
        assert ts.slope == pytest.approx(0.03, abs=0.002)
        assert ts.intercept == pytest.approx(20.0, abs=0.1)

    def test_empty_window(self):
        with pytest.raises(AmbiguousTrajectoryError):
            trajectory_slope(Raster(np.zeros((32, 32), complex), 0.0, P.Fr, 0.0, P.PRF))


class TestCoarse:
    def test_slope_0034(self):
        p = RADARSAT1.with_(c=3e8)
        assert range_rate_from_slope(0.034, p) == pytest.approx(198.4, abs=0.2)
        assert coarse_dc_from_slope(0.034, p) == pytest.approx(-7009, abs=15)

    def test_frozen_values(self):
        assert range_rate_from_slope(0.034, RADARSAT1.with_(c=3e8)) == pytest.approx(198.36612, abs=1e-5)
        assert range_rate_from_slope(0.034, RADARSAT1) == pytest.approx(198.22889, abs=1e-5)
        assert coarse_dc_from_slope(0.034, RADARSAT1) == pytest.approx(-7008.936349, abs=1e-5)

    def test_zero_slope(self):
        assert coarse_dc_from_slope(0.0, RADARSAT1) == 0.0


class TestResolve:
    def test_minus_six_band(self):
        est = resolve_ambiguity(-7009.0, 471.0, 1256.98)
        assert est.M == -6
        assert est.f_dc == -7070.88
        assert est.f_dc - est.M * est.PRF - est.f_dc_frac == 0.0
        assert est.consistent

    def test_trivial(self):
        est = resolve_ambiguity(0.0, 0.0, 1000.0)
        assert (est.M, est.f_dc) == (0, 0.0)
        est = resolve_ambiguity(1256.98, 0.0, 1256.98)
        assert (est.M, est.f_dc) == (1, 1256.98)

    @given(M=st.integers(-20, 20), frac=st.floats(-0.5, 0.5), err=st.floats(-0.49, 0.49))
    def test_exact_under_half_prf(self, M, frac, err):
        prf = P.PRF
        truth = M * prf + frac * prf
        est = resolve_ambiguity(truth + err * prf, frac * prf, prf)
        assert est.M == M
        assert est.f_dc == M * prf + frac * prf

    def test_frac_out_of_band(self):
        with pytest.raises(ValueError):
            resolve_ambiguity(0.0, 700.0, 1256.98)

    @given(coarse=st.floats(-1e5, 1e5), frac=st.floats(-0.5, 0.5))
    def test_nearest_band_is_always_consistent(self, coarse, frac):
        with warnings.catch_warnings():
            warnings.simplefilter("error", AmbiguityWarning)
            est = resolve_ambiguity(coarse, frac * P.PRF, P.PRF)
        assert abs(coarse - est.f_dc) <= P.PRF / 2 * (1 + 1e-9)


class TestEstimateDoppler:
    def test_resolved_squint(self, rc_squint):
        est = estimate_doppler(rc_squint, P, "slope", resolve=True)
        assert est.M == -6
        assert est.f_dc == pytest.approx(SQUINT_FDC, abs=10)
        assert est.consistent

    def test_unresolved(self, rc_squint):
        est = estimate_doppler(rc_squint, P, "accc")
        assert est.M == 0 and est.f_dc == est.f_dc_frac

    def test_unknown_method(self, rc_squint):
        with pytest.raises(ValueError):
            estimate_doppler(rc_squint, P, "mlcc")

    def test_estimate_invariant(self):
        with pytest.raises(ValueError):
            DopplerEstimate(700.0, 0, 700.0, 1256.98, "x")

    def test_format_round_trip(self, rc_squint):
        est = estimate_doppler(rc_squint, P, "slope", resolve=True)
        assert parse_estimate(format_estimate(est)) == est

    def test_parse_missing_key(self):
        with pytest.raises(ValueError, match="M"):
            parse_estimate("f_dc_frac=1\nf_dc=1\nPRF=10\n")
