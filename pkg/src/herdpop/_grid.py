"""Vectorized fixed-step integration of many cells of a nondimensional field.

Basin maps and numeric regime sweeps integrate tens of thousands of
independent trajectories.  The rescaled herd fields are polynomial, so a
classical RK4 with a conservative step tied to the field's stiffness
bound is accurate enough for outcome classification, and the whole grid
advances in lockstep as numpy arrays.  Extinction handling mirrors the
scalar integrator: a component crossing zero (or sinking below ``eps``
while decreasing) is pinned to exactly zero and its derivative masked,
and the state at the first such event is recorded per cell.

Cells leave the active set when a caller-supplied classifier labels
them, when both components are pinned, or when they reach the horizon.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

EV_NONE, EV_X, EV_Y, EV_BOTH = 0, 1, 2, 3


@dataclass
class GridOutcome:
    """Per-cell terminal data from a grid run (flat arrays)."""

    x: np.ndarray
    y: np.ndarray
    t: np.ndarray
    pinned_x: np.ndarray
    pinned_y: np.ndarray
    label: np.ndarray          # classifier labels; 0 = never labelled
    event_kind: np.ndarray     # EV_* of the first extinction
    event_x: np.ndarray
    event_y: np.ndarray
    event_t: np.ndarray


def run_cells(field, x0, y0, *, dt, t_max, eps=1e-7, classify_fn=None,
              classify_every=8) -> GridOutcome:
    """March all cells with RK4 until labelled, frozen or out of time.

    ``field(x, y, idx)``   vectorized rhs for the active cells ``idx``;
                           may close over per-cell parameter arrays.
    ``dt``                 scalar or per-cell array of step sizes.
    ``classify_fn(x, y, px, py, idx)``
                           int8 labels for the queried (active) cells;
                           0 keeps a cell running.
    """
    x0 = np.asarray(x0, dtype=float).ravel()
    y0 = np.asarray(y0, dtype=float).ravel()
    n = x0.size
    full = GridOutcome(
        x=x0.copy(), y=y0.copy(), t=np.zeros(n),
        pinned_x=x0 <= 0.0, pinned_y=y0 <= 0.0,
        label=np.zeros(n, np.int8),
        event_kind=np.zeros(n, np.int8),
        event_x=np.full(n, np.nan), event_y=np.full(n, np.nan),
        event_t=np.full(n, np.nan),
    )
    np.clip(full.x, 0.0, None, out=full.x)
    np.clip(full.y, 0.0, None, out=full.y)

    idx = np.arange(n)
    x, y = full.x[idx], full.y[idx]
    px, py = full.pinned_x[idx], full.pinned_y[idx]
    t = np.zeros(idx.size)
    dt_arr = np.broadcast_to(np.asarray(dt, dtype=float), (n,)).copy()
    h = dt_arr[idx]

    def masked_field(xx, yy):
        dx, dy = field(xx, yy, idx)
        dx = np.where(px, 0.0, dx)
        dy = np.where(py, 0.0, dy)
        return dx, dy

    steps_since_check = 0
    while idx.size:
        k1x, k1y = masked_field(x, y)
        k2x, k2y = masked_field(x + 0.5 * h * k1x, y + 0.5 * h * k1y)
        k3x, k3y = masked_field(x + 0.5 * h * k2x, y + 0.5 * h * k2y)
        k4x, k4y = masked_field(x + h * k3x, y + h * k3y)
        nx = x + (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        ny = y + (h / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)

        pin_x = ~px & ((nx <= 0.0) | ((nx < eps) & (nx < x)))
        pin_y = ~py & ((ny <= 0.0) | ((ny < eps) & (ny < y)))
        if pin_x.any() or pin_y.any():
            hit = pin_x | pin_y
            with np.errstate(divide="ignore", invalid="ignore"):
                thx = np.where(pin_x & (nx < 0.0), x / np.where(nx < x, x - nx, 1.0), 1.0)
                thy = np.where(pin_y & (ny < 0.0), y / np.where(ny < y, y - ny, 1.0), 1.0)
            theta = np.where(pin_x & pin_y, np.minimum(thx, thy),
                             np.where(pin_x, thx, thy))
            theta = np.clip(theta, 0.0, 1.0)
            ex = x + theta * (nx - x)
            ey = y + theta * (ny - y)
            ex = np.where(pin_x, 0.0, ex)
            ey = np.where(pin_y, 0.0, ey)
            fresh = hit & (full.event_kind[idx] == EV_NONE)
            if fresh.any():
                gi = idx[fresh]
                kind = np.where(pin_x[fresh] & pin_y[fresh], EV_BOTH,
                                np.where(pin_x[fresh], EV_X, EV_Y)).astype(np.int8)
                full.event_kind[gi] = kind
                full.event_x[gi] = ex[fresh]
                full.event_y[gi] = ey[fresh]
                full.event_t[gi] = t[fresh] + theta[fresh] * h[fresh]
            nx = np.where(pin_x, 0.0, nx)
            ny = np.where(pin_y, 0.0, ny)
            px = px | pin_x
            py = py | pin_y

        x, y = nx, ny
        t = t + h
        steps_since_check += 1

        if steps_since_check >= classify_every or not idx.size:
            steps_since_check = 0
            lab = np.zeros(idx.size, np.int8)
            if classify_fn is not None:
                lab = classify_fn(x, y, px, py, idx)
            done = (lab != 0) | (px & py) | (t >= t_max)
            if done.any():
                gi = idx[done]
                full.x[gi] = x[done]
                full.y[gi] = y[done]
                full.t[gi] = t[done]
                full.pinned_x[gi] = px[done]
                full.pinned_y[gi] = py[done]
                full.label[gi] = lab[done]
                keep = ~done
                idx, x, y, px, py, t, h = (
                    idx[keep], x[keep], y[keep], px[keep], py[keep],
                    t[keep], h[keep],
                )
    return full


def comp_field(a, b, c):
    """Rescaled competition field; parameters scalar or per-cell arrays."""
    a, b, c = (np.asarray(v, dtype=float) for v in (a, b, c))

    def f(x, y, idx):
        aa, bb, cc = (v if v.ndim == 0 else v[idx] for v in (a, b, c))
        return bb * (1.0 - x * x) * x - y, cc * (1.0 - y * y) * y - aa * x
    return f


def pp2_field(e, f):
    """Rescaled pack-pack field; parameters scalar or per-cell arrays."""
    e, f = np.asarray(e, dtype=float), np.asarray(f, dtype=float)

    def g(x, y, idx):
        ee = e if e.ndim == 0 else e[idx]
        ff = f if f.ndim == 0 else f[idx]
        return ee * (1.0 - x * x) * x - y, -0.5 * y + ff * x
    return g


def stable_step(rate_bound, cfl: float = 0.2):
    """Fixed RK4 step from a bound on the field's local rates."""
    return cfl / np.maximum(np.asarray(rate_bound, dtype=float), 1e-6)
