import struct

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sarfocus.io import (
    HEADER_SIZE,
    MAGIC,
    BadMagicError,
    InvalidDomainError,
    RasterFormatError,
    RasterSizeError,
    TruncatedRasterError,
    magnitude_to_gray,
    read_pgm,
    read_raster,
    render_magnitude,
    write_raster,
)
from sarfocus.raster import Domain, Raster


def sample(rng, shape=(32, 16), domain=Domain.TIME_TIME, bin0=0):
    d = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)).astype(np.complex64)
    return Raster(d, 6.5e-3, 6.0e7, -0.25, 1256.98, domain, bin0)


def header(rows=4, cols=4, tag=0, magic=MAGIC):
    return struct.pack("<8sIIddddBi3x", magic, rows, cols, 0.0, 1.0, 0.0, 1.0, tag, 0)


class TestRasterFile:
    def test_header_size(self):
        assert HEADER_SIZE == 56

    def test_round_trip_bit_identical(self, tmp_path, rng):
        r = sample(rng)
        p = tmp_path / "a.sar"
        write_raster(r, p)
        back = read_raster(p)
        assert back.data.tobytes() == r.data.tobytes()
        assert (back.t0, back.Fr, back.eta0, back.PRF, back.domain) == (r.t0, r.Fr, r.eta0, r.PRF, r.domain)
        write_raster(back, tmp_path / "b.sar")
        assert (tmp_path / "b.sar").read_bytes() == p.read_bytes()

    @given(domain=st.sampled_from(list(Domain)), bin0=st.integers(-500, 500))
    def test_domains_and_bins(self, tmp_path_factory, domain, bin0):
        r = sample(np.random.default_rng(0), (8, 4), domain, bin0 if domain != Domain.TIME_TIME else 0)
        p = tmp_path_factory.mktemp("d") / "r.sar"
        write_raster(r, p)
        back = read_raster(p)
        assert back.domain is domain and back.doppler_bin0 == r.doppler_bin0

    def test_layout(self, tmp_path):
        r = Raster(np.array([[1 + 2j, 3 - 4j]], dtype=np.complex64), 0.0, 1.0, 0.0, 1.0)
        write_raster(r, tmp_path / "x")
        raw = (tmp_path / "x").read_bytes()
        assert raw[:8] == b"SARRAST1"
        assert struct.unpack("<II", raw[8:16]) == (1, 2)
        assert struct.unpack("<4f", raw[56:]) == (1.0, 2.0, 3.0, -4.0)

    def test_truncated(self, tmp_path, rng):
        p = tmp_path / "t.sar"
        write_raster(sample(rng), p)
        p.write_bytes(p.read_bytes()[:-10])
        with pytest.raises(TruncatedRasterError) as err:
            read_raster(p)
        assert err.value.expected == HEADER_SIZE + 32 * 16 * 8
        assert err.value.actual == HEADER_SIZE + 32 * 16 * 8 - 10
        assert str(err.value.expected) in str(err.value)

    def test_truncated_header(self, tmp_path):
        p = tmp_path / "h.sar"
        p.write_bytes(header()[:20])
        with pytest.raises(TruncatedRasterError):
            read_raster(p)

    def test_bad_magic(self, tmp_path):
        p = tmp_path / "m.sar"
        p.write_bytes(header(magic=b"NOTARAST") + bytes(128))
        with pytest.raises(BadMagicError):
            read_raster(p)

    def test_invalid_tag(self, tmp_path):
        p = tmp_path / "g.sar"
        p.write_bytes(header(tag=9) + bytes(128))
        with pytest.raises(InvalidDomainError):
            read_raster(p)

    def test_errors_distinct(self):
        kinds = {BadMagicError, TruncatedRasterError, InvalidDomainError}
        assert len(kinds) == 3
        assert all(issubclass(k, RasterFormatError) for k in kinds)
        assert not any(issubclass(a, b) for a in kinds for b in kinds if a is not b)

    def test_overflow_header(self, tmp_path):
        p = tmp_path / "o.sar"
        p.write_bytes(header(rows=2**32 - 1, cols=2**32 - 1))
        with pytest.raises(RasterSizeError):
            read_raster(p)

    def test_empty_dimensions(self, tmp_path):
        p = tmp_path / "z.sar"
        p.write_bytes(header(rows=0))
        with pytest.raises(RasterSizeError):
            read_raster(p)

    def test_trailing_bytes(self, tmp_path, rng):
        p = tmp_path / "tr.sar"
        write_raster(sample(rng), p)
        p.write_bytes(p.read_bytes() + b"\0")
        with pytest.raises(RasterFormatError, match="trailing"):
            read_raster(p)

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            read_raster(tmp_path / "nope.sar")


class TestRender:
    def test_zero_is_black(self, tmp_path):
        g = render_magnitude(np.zeros((4, 5)), tmp_path / "z.pgm")
        assert not g.any()
        assert read_pgm(tmp_path / "z.pgm").shape == (4, 5)

    def test_single_peak_white(self):
        d = np.zeros((9, 9))
        d[4, 4] = 3.0
        g = magnitude_to_gray(d, -40.0)
        assert g[4, 4] == 255 and g.sum() == 255

    def test_two_levels(self):
        d = np.array([[1.0, 0.1], [0.1, 1.0]])
        g = magnitude_to_gray(d, -40.0)
        assert g[0, 0] == 255
        assert abs(int(g[0, 1]) - 128) <= 1

    def test_floor(self):
        g = magnitude_to_gray(np.array([1.0, 1e-3, 10 ** -1.5]), -40.0)
        assert list(g) == [255, 0, 64]

    def test_percentile_clip(self):
        d = np.concatenate([np.ones(99), [100.0]])
        g = magnitude_to_gray(d, -40.0, percentile_clip=50)
        assert g.min() == 255

    def test_pgm_bytes(self, tmp_path, rng):
        r = sample(rng, (3, 7))
        g = render_magnitude(r, tmp_path / "r.pgm")
        raw = (tmp_path / "r.pgm").read_bytes()
        assert raw.startswith(b"P5\n7 3\n255\n")
        assert raw[-21:] == g.tobytes()
        np.testing.assert_array_equal(read_pgm(tmp_path / "r.pgm"), g)

    def test_bad_floor(self):
        with pytest.raises(ValueError):
            magnitude_to_gray(np.ones(3), 10.0)

    def test_read_pgm_rejects_other(self, tmp_path):
        (tmp_path / "x.pgm").write_bytes(b"P2\n1 1\n255\n0\n")
        with pytest.raises(RasterFormatError):
            read_pgm(tmp_path / "x.pgm")
