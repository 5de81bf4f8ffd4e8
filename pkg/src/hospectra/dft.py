"""Per-segment discrete Fourier transforms.

The production path uses ``numpy.fft`` (any segment length); ``naive_dft``
evaluates the defining sum directly and serves as the independent oracle in
the test suite. Both satisfy the same contract: for a length-``m`` segment,
``F[k] = sum_u x[u] * exp(-2j*pi*u*k/m)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .series import SegmentSet

__all__ = ["SegmentSpectrumSet", "dft_segments", "naive_dft"]


@dataclass(frozen=True)
class SegmentSpectrumSet:
    """DFT values of ``k`` demeaned segments, one length-``m`` row each."""

    spectra: np.ndarray  # shape (k, m), complex128

    @property
    def k(self) -> int:
        return int(self.spectra.shape[0])

    @property
    def m(self) -> int:
        return int(self.spectra.shape[1])


def dft_segments(segs: SegmentSet) -> SegmentSpectrumSet:
    """Transform every segment. Requires the per-segment means to have been
    removed first (the estimation pipeline depends on that ordering)."""
    if not segs.means_removed:
        raise ParameterError("segments must be demeaned before the transform")
    return SegmentSpectrumSet(spectra=np.fft.fft(segs.segments, axis=1))


def naive_dft(segment) -> np.ndarray:
    """Literal evaluation of the defining sum, O(m^2). Test oracle."""
    x = np.asarray(segment, dtype=np.float64)
    m = x.size
    if m < 1:
        raise ParameterError("segment must have at least one sample")
    u = np.arange(m)
    kernel = np.exp(-2j * np.pi * np.outer(np.arange(m), u) / m)
    return kernel @ x.astype(np.complex128)
