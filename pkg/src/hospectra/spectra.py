"""Bispectrum and trispectrum estimation via the direct method.

Pipeline: segment and demean, per-segment DFT, raw triple (or quadruple)
products over the full periodic frequency grid, box smoothing through a
window-sum plan, averaging over segments, and restriction to the principal
domain.

Smoothing is centered: a window of side ``m3`` covers offsets
``[-m3//2, m3 - 1 - m3//2]`` per axis (symmetric for odd ``m3``, one cell
longer on the trailing side for even ``m3``), with periodic index wrapping
so every window is full and the normalization is exactly ``m3**(order-1)``.

The materialized plans (NAIVE, WS, PREFIX) smooth each segment's grid and
then average, in that order. The source-on-demand plans average the raw
products inside the value function and smooth once; box sums and segment
averages are both linear, so the two orderings agree within rounding (the
test suite pins this).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .dft import SegmentSpectrumSet, dft_segments
from .errors import ParameterError
from .meter import WORKSPACE
from .series import SegmentConfig, TimeSeries, segment_and_demean
from .tiled import smoothed_cells_2d, smoothed_cells_3d
from .window_sums import (
    MATERIALIZED_PLANS,
    SmoothingPlan,
    WindowSpec,
    window_sums_2d,
)

__all__ = [
    "EstimationConfig",
    "SpectrumPoint",
    "SpectrumGrid",
    "raw_bispectrum_value",
    "raw_trispectrum_value",
    "principal_domain",
    "estimate_spectrum",
    "estimate_from_spectra",
    "compare_grids",
    "write_grid_csv",
]


class SpectrumPoint(NamedTuple):
    """One principal-domain point: frequency-bin index tuple and value."""

    k: tuple
    value: complex


@dataclass(frozen=True)
class EstimationConfig:
    """Everything needed to turn a series into a smoothed spectrum."""

    order: int
    segment: SegmentConfig
    m3: int
    plan: SmoothingPlan = SmoothingPlan.EFFICIENT
    conjugate_last: bool = True

    def __post_init__(self):
        if self.order not in (3, 4):
            raise ParameterError(f"order must be 3 or 4, got {self.order}")
        if self.m3 < 1:
            raise ParameterError(f"smoothing window must be >= 1, got {self.m3}")
        if 2 * self.m3 >= self.segment.m:
            raise ParameterError(
                f"smoothing window {self.m3} must satisfy m3 < m/2 "
                f"(segment length m = {self.segment.m})"
            )


@dataclass
class SpectrumGrid:
    """Smoothed estimate over the principal domain.

    Points are stored as parallel arrays in lexicographic index order:
    ``indices[t]`` is the bin tuple of ``values[t]``. ``point_dict`` gives
    the mapping view when that is more convenient (small grids only; the
    arrays are the primary representation).
    """

    order: int
    m: int
    m3: int
    plan: SmoothingPlan
    indices: np.ndarray  # (npoints, order-1) int32, lexicographic
    values: np.ndarray  # (npoints,) complex128

    def point_dict(self) -> dict:
        return {tuple(int(v) for v in idx): val for idx, val in zip(self.indices, self.values)}

    def points(self):
        for idx, val in zip(self.indices, self.values):
            yield SpectrumPoint(tuple(int(v) for v in idx), complex(val))

    def peak_point(self) -> SpectrumPoint:
        t = int(np.argmax(np.abs(self.values)))
        return SpectrumPoint(tuple(int(v) for v in self.indices[t]), complex(self.values[t]))


def raw_bispectrum_value(f, k1: int, k2: int, conjugate_last: bool = True) -> complex:
    """Raw third-order product for one segment spectrum ``f`` at bins
    ``(k1, k2)``: ``f[k1] * f[k2] * conj(f[(k1+k2) % m]) / m`` (the
    conjugate is dropped when ``conjugate_last`` is false)."""
    f = np.asarray(f)
    m = f.size
    third = f[(int(k1) + int(k2)) % m]
    if conjugate_last:
        third = np.conj(third)
    return complex(f[int(k1)] * f[int(k2)] * third / m)


def raw_trispectrum_value(f, k1: int, k2: int, k3: int, conjugate_last: bool = True) -> complex:
    """Fourth-order analogue over three bins."""
    f = np.asarray(f)
    m = f.size
    last = f[(int(k1) + int(k2) + int(k3)) % m]
    if conjugate_last:
        last = np.conj(last)
    return complex(f[int(k1)] * f[int(k2)] * f[int(k3)] * last / m)


def principal_domain(order: int, m: int) -> np.ndarray:
    """Lexicographically ordered principal-domain index tuples.

    Order 3: all ``(k1, k2)`` with ``0 <= k2 <= k1`` and ``k1 + k2 < m/2``.
    Order 4: all ``(k1, k2, k3)`` with ``0 <= k3 <= k2 <= k1`` and
    ``k1 + k2 + k3 < m/2`` (the ordered-simplex generalization).
    """
    if order not in (3, 4):
        raise ParameterError(f"order must be 3 or 4, got {order}")
    if m < 2:
        raise ParameterError(f"segment length must be >= 2, got {m}")
    rows = []
    if order == 3:
        for k1 in range((m - 1) // 2 + 1):
            stop = min(k1, (m - 2 * k1 - 1) // 2) + 1
            if stop <= 0:
                continue
            block = np.empty((stop, 2), dtype=np.int32)
            block[:, 0] = k1
            block[:, 1] = np.arange(stop)
            rows.append(block)
    else:
        for k1 in range((m - 1) // 2 + 1):
            k2_stop = min(k1, (m - 2 * k1 - 1) // 2) + 1
            for k2 in range(k2_stop):
                k3_stop = min(k2, (m - 2 * k1 - 2 * k2 - 1) // 2) + 1
                if k3_stop <= 0:
                    continue
                block = np.empty((k3_stop, 3), dtype=np.int32)
                block[:, 0] = k1
                block[:, 1] = k2
                block[:, 2] = np.arange(k3_stop)
                rows.append(block)
    if not rows:
        return np.empty((0, order - 1), dtype=np.int32)
    return np.concatenate(rows, axis=0)


def domain_slice(order: int, m: int, start: int, stop: int) -> np.ndarray:
    """``principal_domain(order, m)[start:stop]`` without materializing the
    whole domain (order 3); used by parallel workers to rebuild their
    partition from two offsets instead of shipping index arrays."""
    if order != 3:
        return principal_domain(order, m)[start:stop]
    if stop <= start:
        return np.empty((0, 2), dtype=np.int32)
    k1_vals = np.arange((m - 1) // 2 + 1)
    lens = np.minimum(k1_vals, (m - 2 * k1_vals - 1) // 2) + 1
    cum = np.concatenate([[0], np.cumsum(lens)])
    total = int(cum[-1])
    if not (0 <= start < stop <= total):
        raise ParameterError(f"slice [{start}, {stop}) outside domain of size {total}")
    r0 = int(np.searchsorted(cum, start, side="right")) - 1
    r1 = int(np.searchsorted(cum, stop - 1, side="right")) - 1
    out = np.empty((stop - start, 2), dtype=np.int32)
    pos = 0
    for r in range(r0, r1 + 1):
        c_lo = start - int(cum[r]) if r == r0 else 0
        c_hi = stop - int(cum[r]) if r == r1 else int(lens[r])
        span = c_hi - c_lo
        out[pos : pos + span, 0] = r
        out[pos : pos + span, 1] = np.arange(c_lo, c_hi)
        pos += span
    return out


# -- raw grids and value functions -----------------------------------------


def _third_factor(f: np.ndarray, copies: int, conjugate_last: bool) -> np.ndarray:
    ext = np.concatenate([f] * copies)
    return np.conj(ext) if conjugate_last else ext


def _raw_grid_order3(f: np.ndarray, conjugate_last: bool) -> np.ndarray:
    m = f.size
    third = _third_factor(f, 2, conjugate_last)
    step = third.strides[0]
    hank = np.lib.stride_tricks.as_strided(
        third, shape=(m, m), strides=(step, step), writeable=False
    )
    return f[:, None] * f[None, :] * hank / m


def _raw_grid_order4(f: np.ndarray, conjugate_last: bool) -> np.ndarray:
    m = f.size
    last = _third_factor(f, 3, conjugate_last)
    step = last.strides[0]
    hank = np.lib.stride_tricks.as_strided(
        last, shape=(m, m, m), strides=(step, step, step), writeable=False
    )
    return f[:, None, None] * f[None, :, None] * f[None, None, :] * hank / m


def _make_fetch_order3(spectra: np.ndarray, h: int, conjugate_last: bool):
    """Segment-averaged raw bispectrum values, indices shifted by the
    window offset ``h`` and wrapped mod ``m``."""
    k, m = spectra.shape
    parts = [(spectra[i], _third_factor(spectra[i], 2, conjugate_last)) for i in range(k)]
    scale = 1.0 / (m * k)

    def fetch(rows, cols):
        r = (np.asarray(rows) - h) % m
        c = (np.asarray(cols) - h) % m
        rc = r + c
        f0, e0 = parts[0]
        acc = f0[r] * f0[c] * e0[rc]
        for f, e in parts[1:]:
            acc = acc + f[r] * f[c] * e[rc]
        return acc * scale

    return fetch


def _make_fetch_order4(spectra: np.ndarray, h: int, conjugate_last: bool):
    k, m = spectra.shape
    parts = [(spectra[i], _third_factor(spectra[i], 3, conjugate_last)) for i in range(k)]
    scale = 1.0 / (m * k)

    def fetch3(rows, cols, k3):
        r = (np.asarray(rows) - h) % m
        c = (np.asarray(cols) - h) % m
        d = (int(k3) - h) % m
        rcd = r + c + d
        f0, e0 = parts[0]
        acc = (f0[r] * f0[c]) * (f0[d] * e0[rcd])
        for f, e in parts[1:]:
            acc = acc + (f[r] * f[c]) * (f[d] * e[rcd])
        return acc * scale

    return fetch3


# -- domain bookkeeping ------------------------------------------------------


def _row_spans_with_offsets(dom: np.ndarray):
    """Split a lex-ordered (npoints, 2) domain slice into per-row spans.

    Within the principal domain (and any contiguous slice of it) the k2
    values of one row are consecutive, so a run is fully described by its
    row, first and last k2, and its offset into the flat output."""
    k1 = dom[:, 0]
    change = np.flatnonzero(np.diff(k1)) + 1
    run_starts = np.concatenate([[0], change])
    run_ends = np.concatenate([change, [len(k1)]])
    spans = []
    offsets = {}
    for a, b in zip(run_starts, run_ends):
        row = int(k1[a])
        spans.append((row, int(dom[a, 1]), int(dom[b - 1, 1]) + 1))
        offsets[row] = (int(a), int(dom[a, 1]))
    return spans, offsets


def _cell_ranges(dom: np.ndarray):
    """Split a lex-ordered (npoints, 3) domain slice into per-(k1,k2) cells
    with contiguous k3 ranges and flat output bases."""
    change = np.flatnonzero(
        (np.diff(dom[:, 0]) != 0) | (np.diff(dom[:, 1]) != 0)
    ) + 1
    run_starts = np.concatenate([[0], change])
    run_ends = np.concatenate([change, [len(dom)]])
    k1s = dom[run_starts, 0].astype(np.int64)
    k2s = dom[run_starts, 1].astype(np.int64)
    starts = dom[run_starts, 2].astype(np.int64)
    stops = dom[run_ends - 1, 2].astype(np.int64) + 1
    bases = run_starts.astype(np.int64)
    return k1s, k2s, starts, stops, bases


# -- smoothing paths ---------------------------------------------------------


def _smooth_cube(cube: np.ndarray, w: int, plan: SmoothingPlan) -> np.ndarray:
    """Periodic w^3 box sums of a materialized cube: the 2-D plan on every
    third-axis slice, then one 1-D pass along the third axis."""
    m = cube.shape[0]
    if plan is SmoothingPlan.NAIVE:
        padded = np.pad(cube, ((0, w - 1),) * 3, mode="wrap")
        out = np.zeros_like(cube)
        with WORKSPACE.held(padded, out):
            for u in range(w):
                for v in range(w):
                    for s in range(w):
                        out += padded[u : u + m, v : v + m, s : s + m]
        return out
    from .window_sums import _MATERIALIZED_FNS

    plane_fn = _MATERIALIZED_FNS[plan]
    tmp = np.empty_like(cube)
    nb_tmp = WORKSPACE.note(tmp)
    try:
        for c in range(m):
            ext2 = np.pad(cube[:, :, c], ((0, w - 1), (0, w - 1)), mode="wrap")
            tmp[:, :, c] = plane_fn(ext2, w)
        ext3 = np.concatenate([tmp, tmp[:, :, : w - 1]], axis=2)
        nb_ext = WORKSPACE.note(ext3)
    finally:
        WORKSPACE.drop(nb_tmp)
    del tmp
    try:
        out = np.empty_like(cube)
        nb_out = WORKSPACE.note(out)
        if plan is SmoothingPlan.PREFIX:
            cs = np.cumsum(ext3, axis=2)
            out[:, :, :] = cs[:, :, w - 1 :]
            out[:, :, 1:] -= cs[:, :, : m - 1]
        else:  # WS: rolling update along the third axis
            out[:, :, 0] = ext3[:, :, :w].sum(axis=2)
            for j in range(1, m):
                out[:, :, j] = out[:, :, j - 1] - ext3[:, :, j - 1] + ext3[:, :, j + w - 1]
        WORKSPACE.drop(nb_out)
        return out
    finally:
        WORKSPACE.drop(nb_ext)


def _materialized_grid(spec_set: SegmentSpectrumSet, cfg: EstimationConfig) -> np.ndarray:
    """Full smoothed periodic grid, averaged over segments (smooth first,
    then average, as the direct method states it)."""
    m = spec_set.m
    w = cfg.m3
    h = w // 2
    shape = (m, m) if cfg.order == 3 else (m, m, m)
    acc = np.zeros(shape, dtype=np.complex128)
    nb_acc = WORKSPACE.note(acc)
    try:
        for i in range(spec_set.k):
            if cfg.order == 3:
                raw = _raw_grid_order3(spec_set.spectra[i], cfg.conjugate_last)
            else:
                raw = _raw_grid_order4(spec_set.spectra[i], cfg.conjugate_last)
            nb_raw = WORKSPACE.note(raw)
            try:
                shifted = np.roll(raw, (h,) * raw.ndim, axis=tuple(range(raw.ndim)))
                nb_shift = WORKSPACE.note(shifted)
            finally:
                WORKSPACE.drop(nb_raw)
            del raw
            try:
                if cfg.order == 3:
                    sm = window_sums_2d(shifted, WindowSpec(w, "periodic"), cfg.plan)
                else:
                    sm = _smooth_cube(shifted, w, cfg.plan)
                nb_sm = WORKSPACE.note(sm)
            finally:
                WORKSPACE.drop(nb_shift)
            del shifted
            acc += sm
            WORKSPACE.drop(nb_sm)
            del sm
        acc /= spec_set.k * float(w) ** (cfg.order - 1)
        return acc
    finally:
        WORKSPACE.drop(nb_acc)


def _compute_values(spec_set: SegmentSpectrumSet, cfg: EstimationConfig, dom: np.ndarray) -> np.ndarray:
    """Smoothed, segment-averaged values at the given domain points."""
    m = spec_set.m
    w = cfg.m3
    h = w // 2
    if len(dom) == 0:
        return np.empty(0, dtype=np.complex128)
    if cfg.plan in MATERIALIZED_PLANS:
        grid = _materialized_grid(spec_set, cfg)
        if cfg.order == 3:
            return grid[dom[:, 0], dom[:, 1]]
        return grid[dom[:, 0], dom[:, 1], dom[:, 2]]
    out = np.empty(len(dom), dtype=np.complex128)
    if cfg.order == 3:
        fetch = _make_fetch_order3(spec_set.spectra, h, cfg.conjugate_last)
        spans, offsets = _row_spans_with_offsets(dom)
        for row, c0, vals in smoothed_cells_2d(fetch, m, m, w, cfg.plan.name, spans):
            off, start = offsets[row]
            pos = off + (c0 - start)
            out[pos : pos + vals.size] = vals
    else:
        fetch3 = _make_fetch_order4(spec_set.spectra, h, cfg.conjugate_last)
        k1s, k2s, starts, stops, bases = _cell_ranges(dom)
        smoothed_cells_3d(fetch3, m, w, cfg.plan.name, k1s, k2s, starts, stops, bases, out)
    out /= float(w) ** (cfg.order - 1)
    return out


def estimate_from_spectra(spec_set: SegmentSpectrumSet, cfg: EstimationConfig) -> SpectrumGrid:
    """Run the smoothing and averaging stages on precomputed segment DFTs."""
    if cfg.segment.m != spec_set.m or cfg.segment.k != spec_set.k:
        raise ParameterError(
            f"config ({cfg.segment.k}x{cfg.segment.m}) does not match "
            f"spectra ({spec_set.k}x{spec_set.m})"
        )
    dom = principal_domain(cfg.order, spec_set.m)
    values = _compute_values(spec_set, cfg, dom)
    return SpectrumGrid(
        order=cfg.order, m=spec_set.m, m3=cfg.m3, plan=cfg.plan,
        indices=dom, values=values,
    )


def estimate_spectrum(series: TimeSeries, cfg: EstimationConfig) -> SpectrumGrid:
    """The direct method end to end: segment, demean, transform, raw
    products, smoothing, segment averaging, principal-domain restriction."""
    cfg.segment.validate_for(series)
    segs = segment_and_demean(series, cfg.segment)
    return estimate_from_spectra(dft_segments(segs), cfg)


def compare_grids(a: SpectrumGrid, b: SpectrumGrid) -> float:
    """Maximum relative deviation between two grids over the same domain:
    ``max |a-b| / max(|a|, |b|, 1e-12)``."""
    if (a.order, a.m, a.m3) != (b.order, b.m, b.m3) or a.values.shape != b.values.shape:
        raise ParameterError(
            f"grid mismatch: ({a.order},{a.m},{a.m3},{a.values.shape}) vs "
            f"({b.order},{b.m},{b.m3},{b.values.shape})"
        )
    if a.values.size == 0:
        return 0.0
    denom = np.maximum(np.maximum(np.abs(a.values), np.abs(b.values)), 1e-12)
    return float(np.max(np.abs(a.values - b.values) / denom))


def write_grid_csv(grid: SpectrumGrid, path) -> None:
    """Grid interchange format: header ``k1,k2[,k3],re,im``, one principal-
    domain point per row in lexicographic order, 17 significant digits."""
    names = ["k1", "k2"] if grid.order == 3 else ["k1", "k2", "k3"]
    with open(str(path), "w", encoding="utf-8") as fh:
        fh.write(",".join(names + ["re", "im"]) + "\n")
        for idx, val in zip(grid.indices, grid.values):
            bins = ",".join(str(int(v)) for v in idx)
            fh.write(f"{bins},{val.real:.17g},{val.imag:.17g}\n")
