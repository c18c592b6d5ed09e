"""Sliding-window L1 despeckling (the 2D lower-median filter)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels


@dataclass(frozen=True)
class FilterSpec:
    """Window of ``m`` rows by ``n`` columns.

    The output pixel sits at the window's ``floor((m-1)/2)``-th row and
    ``floor((n-1)/2)``-th column (0-based), so even windows reach one
    sample further forward than back.
    """

    m: int
    n: int
    edge_policy: str = "replicate"

    def __post_init__(self):
        if int(self.m) != self.m or int(self.n) != self.n or self.m < 1 or self.n < 1:
            raise ValueError(f"window must be positive integers, got {self.m}x{self.n}")
        if self.edge_policy != "replicate":
            raise ValueError(f"unsupported edge policy {self.edge_policy!r}")

    @property
    def anchor(self) -> tuple[int, int]:
        return (self.m - 1) // 2, (self.n - 1) // 2

    @classmethod
    def parse(cls, text: str) -> "FilterSpec":
        """From ``"MxN"``."""
        try:
            m, n = (int(p) for p in text.lower().split("x"))
        except ValueError:
            raise ValueError(f"window must look like MxN, got {text!r}") from None
        return cls(m, n)


def l1_minimizer(values) -> float:
    """A minimiser of ``sum |a_i - a|``: the median, or the lower middle value for even counts."""
    a = np.sort(np.asarray(values, dtype=float).ravel())
    if a.size == 0:
        raise ValueError("l1_minimizer of an empty sequence")
    return float(a[(a.size - 1) // 2])


def median_despeckle(img, spec: FilterSpec, *, backend: str | None = None) -> np.ndarray:
    """Replace each pixel by the lower median of its window.

    Complex input is filtered as magnitude. Borders are replicated so the
    output has the input's shape.
    """
    img = np.asarray(img)
    if img.ndim != 2 or img.size == 0:
        raise ValueError("image must be a non-empty 2D array")
    mag = np.abs(img) if np.iscomplexobj(img) else img.astype(np.float64, copy=False)
    if not np.all(np.isfinite(mag)):
        raise ValueError("image contains non-finite values")
    a, b = spec.anchor
    padded = np.pad(mag, ((a, spec.m - 1 - a), (b, spec.n - 1 - b)), mode="edge")
    return kernels.median_filter(padded, spec.m, spec.n, backend=backend)
