"""1-D and 2-D sliding-window sum engines, selectable by plan.

Six plans compute identical box sums with different work/memory trade-offs:

============ =========== ==============
plan         work        extra memory
============ =========== ==============
NAIVE        n^2 w^2     O(1)
WS           n^2         O(n^2)
PREFIX       n^2         O(n^2)
FAST         n^2         O(n w)
EFFICIENT    n^2         O(w^2)
STREAMING    n^2 w       O(w)
============ =========== ==============

NAIVE re-sums every window. WS carries the sums with horizontal and
vertical strip recurrences. PREFIX builds per-column 1-D window sums, then
per-row prefix sums and differences them. FAST, EFFICIENT and STREAMING
are source-on-demand engines (see :mod:`hospectra.tiled`) and also accept
a value function instead of a materialized matrix.

All plans agree within a relative 1e-9 tolerance with an absolute floor of
1e-12; the summation orders differ, exact equality is not promised.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ParameterError
from .meter import WORKSPACE
from .tiled import smoothed_cells_2d

__all__ = [
    "SmoothingPlan",
    "WindowSpec",
    "window_sums_1d",
    "prefix_sums",
    "window_sums_2d",
    "window_sums_2d_fn",
]


class SmoothingPlan(Enum):
    """The six window-sum engines."""

    NAIVE = "NAIVE"
    WS = "WS"
    PREFIX = "PREFIX"
    FAST = "FAST"
    EFFICIENT = "EFFICIENT"
    STREAMING = "STREAMING"

    @property
    def declared_work(self) -> str:
        return _DECLARED[self][0]

    @property
    def declared_extra_memory(self) -> str:
        return _DECLARED[self][1]

    @classmethod
    def parse(cls, name: str) -> "SmoothingPlan":
        try:
            return cls[name.upper()]
        except KeyError:
            valid = ", ".join(p.name for p in cls)
            raise ParameterError(f"unknown plan {name!r}; valid plans: {valid}")


#: Declared (work, extra memory) classes per plan.
_DECLARED = {
    SmoothingPlan.NAIVE: ("n^2 w^2", "O(1)"),
    SmoothingPlan.WS: ("n^2", "O(n^2)"),
    SmoothingPlan.PREFIX: ("n^2", "O(n^2)"),
    SmoothingPlan.FAST: ("n^2", "O(n w)"),
    SmoothingPlan.EFFICIENT: ("n^2", "O(w^2)"),
    SmoothingPlan.STREAMING: ("n^2 w", "O(w)"),
}


#: Plans that require a materialized input matrix.
MATERIALIZED_PLANS = (SmoothingPlan.NAIVE, SmoothingPlan.WS, SmoothingPlan.PREFIX)
#: Plans that can pull source values on demand.
STREAMING_PLANS = (SmoothingPlan.FAST, SmoothingPlan.EFFICIENT, SmoothingPlan.STREAMING)


@dataclass(frozen=True)
class WindowSpec:
    """Square window of side ``w`` with a boundary rule.

    ``valid`` shrinks the output to windows fully inside the matrix;
    ``periodic`` wraps indices, keeping the output the same shape as the
    input (windows larger than the matrix wrap around more than once).
    """

    w: int
    boundary: str = "valid"

    def __post_init__(self):
        if self.w < 1:
            raise ParameterError(f"window side must be >= 1, got {self.w}")
        if self.boundary not in ("valid", "periodic"):
            raise ParameterError(
                f"boundary must be 'valid' or 'periodic', got {self.boundary!r}"
            )

    def out_shape(self, rows: int, cols: int) -> tuple[int, int]:
        if self.boundary == "valid":
            if self.w > min(rows, cols):
                raise ParameterError(
                    f"window {self.w} exceeds matrix dimensions {rows}x{cols}"
                )
            return rows - self.w + 1, cols - self.w + 1
        return rows, cols


def window_sums_1d(x, w: int) -> np.ndarray:
    """All length-``w`` window sums of ``x`` via the rolling update
    ``s[i+1] = s[i] - x[i] + x[i+w]``."""
    x = np.asarray(x)
    n = x.size
    if w < 1:
        raise ParameterError(f"window must be >= 1, got {w}")
    if w > n:
        raise ParameterError(f"window {w} exceeds sequence length {n}")
    out = np.empty(n - w + 1, dtype=x.dtype if x.dtype.kind in "fc" else np.float64)
    s = x[:w].sum()
    out[0] = s
    for i in range(n - w):
        s = s - x[i] + x[i + w]
        out[i + 1] = s
    return out


def prefix_sums(x) -> np.ndarray:
    """Running cumulative sums, sequential-scan semantics."""
    x = np.asarray(x)
    if x.size < 1:
        raise ParameterError("prefix sums need at least one element")
    return np.cumsum(x)


def _naive_valid(a: np.ndarray, w: int) -> np.ndarray:
    ro = a.shape[0] - w + 1
    co = a.shape[1] - w + 1
    out = np.zeros((ro, co), dtype=a.dtype)
    with WORKSPACE.held(out):
        for u in range(w):
            for v in range(w):
                out += a[u : u + ro, v : v + co]
    return out


def _ws_valid(a: np.ndarray, w: int) -> np.ndarray:
    ro = a.shape[0] - w + 1
    co = a.shape[1] - w + 1
    # horizontal strips r[i, j] = sum_k a[i, j+k], rolled along j
    r = np.empty((a.shape[0], co), dtype=a.dtype)
    r[:, 0] = a[:, :w].sum(axis=1)
    if co > 1:
        r[:, 1:] = r[:, :1] + np.cumsum(a[:, w:] - a[:, : co - 1], axis=1)
    # vertical strips are only needed to seed the first output row
    c0 = a[:w, :].sum(axis=0)
    s = np.empty((ro, co), dtype=a.dtype)
    nbytes = WORKSPACE.note(r, c0, s)
    try:
        s[0, 0] = a[:w, :w].sum()
        row0 = s[0]
        for j in range(1, co):
            row0[j] = row0[j - 1] - c0[j - 1] + c0[j + w - 1]
        for i in range(1, ro):
            s[i] = s[i - 1] - r[i - 1] + r[i + w - 1]
    finally:
        WORKSPACE.drop(nbytes)
    return s


def _prefix_valid(a: np.ndarray, w: int) -> np.ndarray:
    ro = a.shape[0] - w + 1
    co = a.shape[1] - w + 1
    cs0 = np.cumsum(a, axis=0)
    c = cs0[w - 1 :, :].copy()
    c[1:, :] -= cs0[: ro - 1, :]
    t = np.cumsum(c, axis=1)
    s = t[:, w - 1 :].copy()
    s[:, 1:] -= t[:, : co - 1]
    nbytes = WORKSPACE.note(cs0, c, t, s)
    WORKSPACE.drop(nbytes)
    return s


_MATERIALIZED_FNS = {
    SmoothingPlan.NAIVE: _naive_valid,
    SmoothingPlan.WS: _ws_valid,
    SmoothingPlan.PREFIX: _prefix_valid,
}


def _fetch_from_matrix(a: np.ndarray, periodic: bool):
    if periodic:
        rows_n, cols_n = a.shape

        def fetch(rows, cols):
            return a[np.asarray(rows) % rows_n, np.asarray(cols) % cols_n]

    else:

        def fetch(rows, cols):
            return a[np.asarray(rows), np.asarray(cols)]

    return fetch


def _full_spans(n_rows_out: int, n_cols_out: int):
    return [(r, 0, n_cols_out) for r in range(n_rows_out)]


def window_sums_2d(a, spec: WindowSpec, plan: SmoothingPlan) -> np.ndarray:
    """All ``w x w`` window sums of a materialized matrix.

    Every plan produces the same values (within the documented tolerance);
    they differ in how they get there. Returns the full output matrix, so
    the memory tiers of the lean plans only pay off through
    :func:`window_sums_2d_fn` or the estimation pipeline.
    """
    a = np.asarray(a)
    if a.ndim != 2:
        raise ParameterError(f"expected a 2-D matrix, got shape {a.shape}")
    if a.dtype.kind not in "fc":
        a = a.astype(np.float64)
    rows_out, cols_out = spec.out_shape(*a.shape)
    w = spec.w
    if w == 1:  # a width-1 window is the identity, exactly
        return a.copy()
    if plan in MATERIALIZED_PLANS:
        if spec.boundary == "periodic":
            ext = np.pad(a, ((0, w - 1), (0, w - 1)), mode="wrap")
            with WORKSPACE.held(ext):
                return _MATERIALIZED_FNS[plan](ext, w)
        return _MATERIALIZED_FNS[plan](a, w)
    fetch = _fetch_from_matrix(a, periodic=spec.boundary == "periodic")
    out = np.empty((rows_out, cols_out), dtype=a.dtype)
    with WORKSPACE.held(out):
        for row, c0, vals in smoothed_cells_2d(
            fetch, rows_out, cols_out, w, plan.name, _full_spans(rows_out, cols_out)
        ):
            out[row, c0 : c0 + vals.size] = vals
    return out


def window_sums_2d_fn(value_at, rows: int, cols: int, spec: WindowSpec, plan, emit) -> None:
    """Window sums over a source given only as ``value_at(row, col)``.

    Emits ``emit(row, col, sum)`` once per output cell, row-major within
    each engine unit (band, tile, or column block), without materializing
    the source or the output. Only the source-on-demand plans are valid
    here; the materialized plans need the full matrix and are rejected.
    """
    if plan not in STREAMING_PLANS:
        raise ParameterError(
            f"plan {plan.name} requires a materialized matrix; "
            "use FAST, EFFICIENT or STREAMING here"
        )
    rows_out, cols_out = spec.out_shape(rows, cols)
    periodic = spec.boundary == "periodic"

    def fetch(r_idx, c_idx):
        r, c = np.broadcast_arrays(np.asarray(r_idx), np.asarray(c_idx))
        out = np.empty(r.shape, dtype=np.float64)
        flat_r = r.ravel()
        flat_c = c.ravel()
        flat_o = out.reshape(-1)
        if periodic:
            flat_r = flat_r % rows
            flat_c = flat_c % cols
        for i in range(flat_r.size):
            flat_o[i] = value_at(int(flat_r[i]), int(flat_c[i]))
        return out

    for row, c0, vals in smoothed_cells_2d(
        fetch, rows_out, cols_out, spec.w, plan.name, _full_spans(rows_out, cols_out)
    ):
        for off in range(vals.size):
            emit(row, c0 + off, vals[off])
