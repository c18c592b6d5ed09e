"""Binary raster files and 8-bit graymap rendering.

Raster layout (little-endian)::

    0   8s  magic "SARRAST1"
    8   u32 rows
    12  u32 cols
    16  f64 t0, Fr, eta0, PRF
    48  u8  domain tag
    49  i32 Doppler bin of row 0 (zero for time-domain rasters)
    53  3   zero padding
    56      rows*cols complex64 samples, row-major, (re, im) float32 pairs
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .raster import Domain, Raster

MAGIC = b"SARRAST1"
_HEADER = struct.Struct("<8sIIddddBi3x")
HEADER_SIZE = _HEADER.size
MAX_SAMPLES = 1 << 34  # refuse headers describing more than 128 GiB of payload


class RasterFormatError(ValueError):
    """Base class for malformed raster files."""


class BadMagicError(RasterFormatError):
    pass


class TruncatedRasterError(RasterFormatError):
    def __init__(self, expected: int, actual: int, path: str = ""):
        super().__init__(f"{path}: truncated raster, expected {expected} bytes, found {actual}")
        self.expected = expected
        self.actual = actual


class InvalidDomainError(RasterFormatError):
    pass


class RasterSizeError(RasterFormatError):
    pass


def encode_header(r: Raster) -> bytes:
    rows, cols = r.shape
    return _HEADER.pack(MAGIC, rows, cols, r.t0, r.Fr, r.eta0, r.PRF, int(r.domain), int(r.doppler_bin0))


def write_raster(r: Raster, path: str | Path) -> None:
    if r.rows >= 1 << 32 or r.cols >= 1 << 32:
        raise RasterSizeError("raster dimensions exceed the u32 header fields")
    payload = np.ascontiguousarray(r.data, dtype="<c8")
    with open(path, "wb") as fh:
        fh.write(encode_header(r))
        fh.write(payload.tobytes())


def decode_header(head: bytes, path: str = "") -> tuple:
    if len(head) < HEADER_SIZE:
        if not MAGIC.startswith(head[:8]):
            raise BadMagicError(f"{path}: not a SARRAST1 file")
        raise TruncatedRasterError(HEADER_SIZE, len(head), path)
    magic, rows, cols, t0, Fr, eta0, PRF, tag, bin0 = _HEADER.unpack(head[:HEADER_SIZE])
    if magic != MAGIC:
        raise BadMagicError(f"{path}: bad magic {magic!r}")
    try:
        domain = Domain(tag)
    except ValueError:
        raise InvalidDomainError(f"{path}: unknown domain tag {tag}") from None
    if rows == 0 or cols == 0:
        raise RasterSizeError(f"{path}: empty raster {rows}x{cols}")
    if rows * cols > MAX_SAMPLES:
        raise RasterSizeError(f"{path}: header claims {rows}x{cols} samples, over the {MAX_SAMPLES} limit")
    return rows, cols, t0, Fr, eta0, PRF, domain, bin0


def read_raster(path: str | Path) -> Raster:
    path = str(path)
    with open(path, "rb") as fh:
        head = fh.read(HEADER_SIZE)
        rows, cols, t0, Fr, eta0, PRF, domain, bin0 = decode_header(head, path)
        expected = HEADER_SIZE + rows * cols * 8
        fh.seek(0, 2)
        actual = fh.tell()
        if actual < expected:
            raise TruncatedRasterError(expected, actual, path)
        if actual > expected:
            raise RasterFormatError(f"{path}: {actual - expected} trailing bytes after payload")
        fh.seek(HEADER_SIZE)
        data = np.fromfile(fh, dtype="<c8", count=rows * cols).reshape(rows, cols)
    try:
        return Raster(data, t0, Fr, eta0, PRF, domain, bin0)
    except ValueError as exc:
        raise RasterFormatError(f"{path}: {exc}") from None


def magnitude_to_gray(data, db_floor: float = -40.0, percentile_clip: float = 100.0) -> np.ndarray:
    """Map ``20 log10 |data|`` linearly onto 0..255.

    The top of the scale is the ``percentile_clip`` percentile of the dB
    values; anything ``-db_floor`` dB or more below it is black.
    """
    if not db_floor < 0:
        raise ValueError("db_floor must be negative")
    mag = np.abs(np.asarray(data))
    out = np.zeros(mag.shape, dtype=np.uint8)
    live = mag > 0
    if not live.any():
        return out
    db = np.full(mag.shape, -np.inf)
    db[live] = 20 * np.log10(mag[live])
    top = float(np.percentile(db[live], percentile_clip))
    scaled = (np.clip(db, top + db_floor, top) - (top + db_floor)) / -db_floor * 255.0
    out[:] = np.floor(scaled + 0.5).astype(np.uint8)
    return out


def write_pgm(gray: np.ndarray, path: str | Path) -> None:
    gray = np.ascontiguousarray(gray, dtype=np.uint8)
    rows, cols = gray.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{cols} {rows}\n255\n".encode("ascii"))
        fh.write(gray.tobytes())


def read_pgm(path: str | Path) -> np.ndarray:
    raw = Path(path).read_bytes()
    parts = raw.split(maxsplit=4)
    if len(parts) < 5 or parts[0] != b"P5":
        raise RasterFormatError(f"{path}: not a binary graymap")
    cols, rows, maxval = int(parts[1]), int(parts[2]), int(parts[3])
    if maxval != 255:
        raise RasterFormatError(f"{path}: only 8-bit graymaps are supported")
    body = raw[len(raw) - rows * cols:]
    return np.frombuffer(body, dtype=np.uint8).reshape(rows, cols)


def render_magnitude(raster, out_path: str | Path, db_floor: float = -40.0,
                     percentile_clip: float = 100.0) -> np.ndarray:
    data = raster.data if isinstance(raster, Raster) else raster
    gray = magnitude_to_gray(data, db_floor, percentile_clip)
    write_pgm(gray, out_path)
    return gray
