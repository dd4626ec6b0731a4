"""Brute-force dense-grid reference values for dim-2 spaces.

This module is the cross-check for the polished search: it scans a plain
theta x phi angular grid over [0, 2pi)^2, maps angles straight to sphere
points through the gauge, and reduces with no refinement step at all.  It
shares nothing with the search module except the gauge itself, so agreement
between the two is meaningful evidence.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .spaces import Space

_CHUNK_PAIRS = 4_000_000


def _quiet_eval(fn, *args) -> np.ndarray:
    """Evaluate a combine on a grid chunk; degenerate pairs may divide by
    zero and are masked by the caller, so the warnings are noise."""
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.asarray(fn(*args), dtype=float)


@dataclass(frozen=True)
class OracleResult:
    value: float
    theta: float      # first-point angle at the extremum
    phi: float        # second-point angle at the extremum
    grid_size: int


def _unit_circle_points(space: Space, grid_size: int) -> np.ndarray:
    angles = 2.0 * np.pi * np.arange(grid_size) / grid_size
    dirs = np.stack([np.cos(angles), np.sin(angles)], axis=1)
    return dirs / np.asarray(space.gauge(dirs))[:, None]


def _scan(space: Space, pts: np.ndarray, combine, eta: float):
    """Yield (a, b, values-mask applied) chunk rows; combine(a, b, X, Y)."""
    n = len(pts)
    rows = max(1, _CHUNK_PAIRS // n)
    for i0 in range(0, n, rows):
        xs = pts[i0:i0 + rows, None, :]
        ys = pts[None, :, :]
        a = np.asarray(space.gauge(xs + ys))
        b = np.asarray(space.gauge(xs - ys))
        vals = _quiet_eval(combine, a, b, xs, ys)
        bad = np.isnan(vals)
        if eta > 0.0:
            bad |= (a < eta) | (b < eta)
        yield i0, vals, bad


def oracle_pair_extremum(space: Space, objective, mode: str = "sup",
                         grid_size: int = 3600, eta: float = 0.0) -> OracleResult:
    """Dense-grid extremum of objective(x, y) over sphere pairs, dim 2 only.

    objective is a vectorized callable on broadcastable (..., 2) arrays.
    Pairs with ||x+y|| or ||x-y|| below eta are skipped when eta > 0.  Ties
    resolve to the first (theta, phi) in row-major grid order.
    """
    if space.dim != 2:
        raise ValueError("the oracle supports dim 2 only")
    if mode not in ("sup", "inf"):
        raise ValueError(f"mode must be 'sup' or 'inf', got {mode!r}")
    sign = 1.0 if mode == "sup" else -1.0
    pts = _unit_circle_points(space, grid_size)
    best = -np.inf
    best_flat = -1
    n = grid_size
    for i0, vals, bad in _scan(space, pts, lambda a, b, xs, ys: objective(xs, ys), eta):
        v = np.where(bad, -np.inf, sign * vals)
        flat = int(v.argmax())
        if v.ravel()[flat] > best:
            best = v.ravel()[flat]
            best_flat = i0 * n + flat
    if best_flat < 0:
        raise ValueError("every oracle grid pair was excluded")
    i, j = divmod(best_flat, n)
    return OracleResult(float(sign * best), float(2.0 * np.pi * i / n),
                        float(2.0 * np.pi * j / n), grid_size)


def oracle_pair_norm_extrema(space: Space, combines: dict[str, tuple[Callable, str]],
                             grid_size: int = 3600, eta: float = 0.0
                             ) -> dict[str, OracleResult]:
    """Several pair-norm reductions from one shared scan.

    combines maps name -> (fn(a, b), "sup" | "inf") where a = ||x+y|| and
    b = ||x-y|| over the dense grid.  One scan serves all entries, which is
    what makes sweeping a whole battery against the oracle affordable.

    Both pair norms are unchanged by swapping x and y, so each chunk only
    scans second-point indices from its own first row onward: the mirror of
    every skipped pair was already visited in an earlier row, which halves
    the work without touching values, witnesses, or tie order.
    """
    if space.dim != 2:
        raise ValueError("the oracle supports dim 2 only")
    pts = _unit_circle_points(space, grid_size)
    n = grid_size
    state = {name: (-np.inf, -1) for name in combines}
    i0 = 0
    while i0 < n:
        rows = max(1, _CHUNK_PAIRS // (n - i0))
        xs = pts[i0:i0 + rows, None, :]
        ys = pts[None, i0:, :]
        a = np.asarray(space.gauge(xs + ys))
        b = np.asarray(space.gauge(xs - ys))
        excl = (a < eta) | (b < eta) if eta > 0.0 else None
        m = a.shape[1]
        for name, (fn, mode) in combines.items():
            sign = 1.0 if mode == "sup" else -1.0
            vals = sign * _quiet_eval(fn, a, b)
            bad = np.isnan(vals)
            if excl is not None:
                bad |= excl
            v = np.where(bad, -np.inf, vals)
            flat = int(v.argmax())
            cur_best, _ = state[name]
            if v.ravel()[flat] > cur_best:
                ri, ci = divmod(flat, m)
                state[name] = (v.ravel()[flat], (i0 + ri) * n + (i0 + ci))
        i0 += rows
    out = {}
    for name, (fn, mode) in combines.items():
        sign = 1.0 if mode == "sup" else -1.0
        best, flat = state[name]
        if flat < 0:
            raise ValueError(f"every oracle grid pair was excluded for {name!r}")
        i, j = divmod(flat, n)
        out[name] = OracleResult(float(sign * best), float(2.0 * np.pi * i / n),
                                 float(2.0 * np.pi * j / n), grid_size)
    return out


def oracle_infsup(space: Space, fn, grid_size: int = 3600, eta: float = 0.0) -> OracleResult:
    """inf over theta of sup over phi of fn(||x+y||, ||x-y||), dense grid."""
    if space.dim != 2:
        raise ValueError("the oracle supports dim 2 only")
    pts = _unit_circle_points(space, grid_size)
    n = grid_size
    row_sup = np.empty(n)
    row_arg = np.empty(n, dtype=int)
    rows = max(1, _CHUNK_PAIRS // n)
    for i0 in range(0, n, rows):
        xs = pts[i0:i0 + rows, None, :]
        ys = pts[None, :, :]
        a = np.asarray(space.gauge(xs + ys))
        b = np.asarray(space.gauge(xs - ys))
        vals = _quiet_eval(fn, a, b)
        bad = np.isnan(vals)
        if eta > 0.0:
            bad |= (a < eta) | (b < eta)
        vals = np.where(bad, -np.inf, vals)
        row_sup[i0:i0 + len(vals)] = vals.max(axis=1)
        row_arg[i0:i0 + len(vals)] = vals.argmax(axis=1)
    i = int(row_sup.argmin())
    return OracleResult(float(row_sup[i]), float(2.0 * np.pi * i / n),
                        float(2.0 * np.pi * row_arg[i] / n), grid_size)
