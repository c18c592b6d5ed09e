import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sarfocus import kernels
from sarfocus.raster import fft_workers

BACKENDS = sorted(kernels.BACKENDS)


def test_compiled_core_available():
    assert kernels.BACKEND == "cython", "compiled kernels were not built; run pip install -e ."


def test_pure_python_switch():
    code = "import sarfocus.kernels as k; print(k.BACKEND)"
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True,
                         env={"SARFOCUS_PURE_PYTHON": "1", "PATH": ""}, check=True)
    assert out.stdout.strip() == "python"


@pytest.mark.parametrize("taps", [4, 8, 16])
def test_sinc_table_unit_dc_gain(taps):
    t = kernels.sinc_table(taps)
    assert t.shape == (kernels.TABLE_PHASES + 1, taps)
    np.testing.assert_allclose(t.sum(axis=1), 1.0, atol=1e-12)
    # zero offset is an exact pick of the centre tap
    np.testing.assert_allclose(t[0], np.eye(taps)[taps // 2 - 1], atol=1e-12)


def test_sinc_table_rejects_odd_taps():
    with pytest.raises(ValueError):
        kernels.sinc_table(5)


@pytest.mark.parametrize("backend", BACKENDS)
def test_resample_band_limited_tone(backend):
    n = 256
    f = 0.11
    src = np.exp(2j * np.pi * f * np.arange(n))[None, :]
    pos = np.linspace(20, n - 20, 999)[None, :]
    out = kernels.resample_rows(src, pos, taps=16, backend=backend)
    err = np.abs(out - np.exp(2j * np.pi * f * pos))
    assert err.max() < 2e-3


@pytest.mark.parametrize("backend", BACKENDS)
def test_resample_integer_positions_exact(backend):
    src = np.random.default_rng(3).standard_normal((4, 50)) + 0j
    pos = np.tile(np.arange(50, dtype=float), (4, 1))
    np.testing.assert_allclose(kernels.resample_rows(src, pos, backend=backend), src, atol=1e-12)


@pytest.mark.parametrize("backend", BACKENDS)
def test_resample_outside(backend):
    src = np.arange(1, 11, dtype=complex)[None, :]
    pos = np.array([[-5.0, 15.0]])
    edge = kernels.resample_rows(src, pos, backend=backend)
    np.testing.assert_allclose(edge, [[1.0, 10.0]], atol=1e-12)
    zero = kernels.resample_rows(src, pos, zero_outside=True, backend=backend)
    assert not zero.any()


@given(seed=st.integers(0, 2**16), taps=st.sampled_from([4, 8, 16]))
def test_backends_identical_resample(seed, taps):
    rng = np.random.default_rng(seed)
    src = rng.standard_normal((6, 40)) + 1j * rng.standard_normal((6, 40))
    pos = rng.uniform(-3, 43, (6, 55))
    outs = [kernels.resample_rows(src, pos, taps=taps, zero_outside=bool(seed % 2), backend=b)
            for b in BACKENDS]
    for o in outs[1:]:
        np.testing.assert_allclose(o, outs[0], rtol=0, atol=1e-13)


@given(seed=st.integers(0, 2**16), m=st.integers(1, 7), n=st.integers(1, 7))
def test_backends_identical_median(seed, m, n):
    img = np.random.default_rng(seed).random((m + 9, n + 6))
    outs = [kernels.median_filter(img, m, n, backend=b) for b in BACKENDS]
    for o in outs[1:]:
        np.testing.assert_array_equal(o, outs[0])


def test_pos_shape_checked():
    with pytest.raises(ValueError):
        kernels.resample_rows(np.zeros((3, 4), complex), np.zeros((2, 4)))


def test_thread_env(monkeypatch):
    monkeypatch.setenv("SARFOCUS_THREADS", "3")
    assert kernels.num_threads() == 3
    assert fft_workers() == 3
    monkeypatch.setenv("SARFOCUS_THREADS", "0")
    assert kernels.num_threads() >= 1 and fft_workers() >= 1
    monkeypatch.delenv("SARFOCUS_THREADS")
    assert kernels.num_threads() >= 1


def test_thread_count_does_not_change_results(monkeypatch):
    rng = np.random.default_rng(9)
    img = rng.random((70, 50))
    src = rng.standard_normal((30, 64)) + 0j
    pos = rng.uniform(0, 63, (30, 64))
    results = []
    for t in ("1", "4"):
        monkeypatch.setenv("SARFOCUS_THREADS", t)
        results.append((kernels.median_filter(img, 6, 6), kernels.resample_rows(src, pos)))
    np.testing.assert_array_equal(results[0][0], results[1][0])
    np.testing.assert_array_equal(results[0][1], results[1][1])
