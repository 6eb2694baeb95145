"""Discrete roto-translation grid R^2 x S^1 and finite differences along its frame.

Scalar fields are float64 numpy arrays of shape ``(ny, nx, ntheta)``:
axis 0 is y (image rows), axis 1 is x (image columns), axis 2 is the
orientation theta sampled on [0, pi).  The theta axis is periodic with
period pi (orientations, not directions); the x and y axes use
replicate-edge ghost cells, so one-sided differences fall back to first
order at the spatial border.

The moving frame is

    X1 = cos(theta) d/dx + sin(theta) d/dy
    X2 = d/dtheta
    X3 = -sin(theta) d/dx + cos(theta) d/dy

with all trigonometric coefficients evaluated at each node's own theta_k.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError

AXIS_Y, AXIS_X, AXIS_THETA = 0, 1, 2

_COORD_AXES = {"x": AXIS_X, "y": AXIS_Y, "theta": AXIS_THETA}
_SCHEMES = ("forward", "backward", "central")


@dataclass(frozen=True)
class GridSpec:
    """Uniform discretization of R^2 x S^1 with theta-period pi."""

    nx: int
    ny: int
    ntheta: int
    dx: float = 1.0
    dy: float = 1.0

    def __post_init__(self):
        if min(self.nx, self.ny, self.ntheta) < 3:
            raise ConfigurationError(
                f"grid needs >= 3 samples per axis, got "
                f"nx={self.nx}, ny={self.ny}, ntheta={self.ntheta}"
            )
        if self.dx <= 0 or self.dy <= 0:
            raise ConfigurationError(f"spacings must be positive, got dx={self.dx}, dy={self.dy}")

    @property
    def dtheta(self) -> float:
        return math.pi / self.ntheta

    @property
    def x_extent(self) -> float:
        return self.nx * self.dx

    @property
    def y_extent(self) -> float:
        return self.ny * self.dy

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.ny, self.nx, self.ntheta)

    @property
    def min_spacing(self) -> float:
        return min(self.dx, self.dy, self.dtheta)

    def thetas(self) -> np.ndarray:
        """theta_k = k*pi/ntheta for k = 0..ntheta-1."""
        return np.arange(self.ntheta) * (math.pi / self.ntheta)

    def zeros(self) -> np.ndarray:
        return np.zeros(self.shape)

    def meshgrid(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Broadcastable (X, Y, THETA) coordinate arrays, origin at node (0,0,0)."""
        x = (np.arange(self.nx) * self.dx)[None, :, None]
        y = (np.arange(self.ny) * self.dy)[:, None, None]
        t = self.thetas()[None, None, :]
        return (
            np.broadcast_to(x, self.shape).copy(),
            np.broadcast_to(y, self.shape).copy(),
            np.broadcast_to(t, self.shape).copy(),
        )


@functools.lru_cache(maxsize=32)
def _trig(grid: GridSpec) -> tuple[np.ndarray, np.ndarray]:
    t = grid.thetas()[None, None, :]
    return np.cos(t), np.sin(t)


def _check_field(grid: GridSpec, f: np.ndarray) -> np.ndarray:
    f = np.asarray(f, dtype=float)
    if f.shape != grid.shape:
        raise ConfigurationError(f"field shape {f.shape} does not match grid {grid.shape}")
    return f


def _shift(f: np.ndarray, axis: int, offset: int) -> np.ndarray:
    """f shifted so that out[n] = f[n+offset]; replicate edge in x/y, wrap in theta."""
    if axis == AXIS_THETA:
        return np.roll(f, -offset, axis=axis)
    sl = [slice(None)] * f.ndim
    if offset == 1:
        sl[axis] = slice(1, None)
        body = f[tuple(sl)]
        sl[axis] = slice(-1, None)
        edge = f[tuple(sl)]
        return np.concatenate([body, edge], axis=axis)
    if offset == -1:
        sl[axis] = slice(None, -1)
        body = f[tuple(sl)]
        sl[axis] = slice(None, 1)
        edge = f[tuple(sl)]
        return np.concatenate([edge, body], axis=axis)
    raise ValueError(f"unsupported offset {offset}")


def coordinate_diff(grid: GridSpec, f: np.ndarray, axis: str, scheme: str) -> np.ndarray:
    """First difference of f along a coordinate axis ('x', 'y' or 'theta').

    forward/backward are first order one-sided differences; central is
    their node-wise mean (second order on interior nodes).
    """
    if axis not in _COORD_AXES:
        raise ConfigurationError(f"unknown axis {axis!r}")
    if scheme not in _SCHEMES:
        raise ConfigurationError(f"unknown scheme {scheme!r}")
    f = _check_field(grid, f)
    ax = _COORD_AXES[axis]
    h = {AXIS_X: grid.dx, AXIS_Y: grid.dy, AXIS_THETA: grid.dtheta}[ax]
    if scheme == "forward":
        return (_shift(f, ax, 1) - f) / h
    if scheme == "backward":
        return (f - _shift(f, ax, -1)) / h
    fwd = (_shift(f, ax, 1) - f) / h
    bwd = (f - _shift(f, ax, -1)) / h
    return (fwd + bwd) / 2.0


class DiffCache:
    """Memoizes coordinate/frame differences of fields within one rhs evaluation.

    The flow right-hand sides request the same first differences many times
    (gradients, denominators, nested second differences); caching them keeps
    results bit-identical to the uncached path while avoiding recomputation.
    Keys are array identities, so a cache must not outlive its fields.
    """

    def __init__(self, grid: GridSpec):
        self.grid = grid
        self._store: dict = {}

    def coord(self, f: np.ndarray, axis: str, scheme: str) -> np.ndarray:
        key = (id(f), axis, scheme)
        hit = self._store.get(key)
        if hit is not None:
            return hit[1]
        if scheme == "central":
            out = (self.coord(f, axis, "forward") + self.coord(f, axis, "backward")) / 2.0
        else:
            out = coordinate_diff(self.grid, f, axis, scheme)
        self._store[key] = (f, out)  # keep f alive so its id stays unique
        return out

    def frame(self, f: np.ndarray, frame_axis: str, scheme: str) -> np.ndarray:
        key = (id(f), frame_axis, scheme)
        hit = self._store.get(key)
        if hit is not None:
            return hit[1]
        if frame_axis == "X2":
            out = self.coord(f, "theta", scheme)
        else:
            cos_t, sin_t = _trig(self.grid)
            dxf = self.coord(f, "x", scheme)
            dyf = self.coord(f, "y", scheme)
            if frame_axis == "X1":
                out = cos_t * dxf + sin_t * dyf
            elif frame_axis == "X3":
                out = -sin_t * dxf + cos_t * dyf
            else:
                raise ConfigurationError(f"unknown frame axis {frame_axis!r}")
        self._store[key] = (f, out)
        return out


def frame_diff(grid: GridSpec, f: np.ndarray, frame_axis: str, scheme: str) -> np.ndarray:
    """Difference of f along a frame vector field X1, X2 or X3.

    X1 -> cos(theta_k)*D_x + sin(theta_k)*D_y, X2 -> D_theta,
    X3 -> -sin(theta_k)*D_x + cos(theta_k)*D_y, each with the requested scheme.
    """
    if frame_axis == "X2":
        return coordinate_diff(grid, f, "theta", scheme)
    cos_t, sin_t = _trig(grid)
    dxf = coordinate_diff(grid, f, "x", scheme)
    dyf = coordinate_diff(grid, f, "y", scheme)
    if frame_axis == "X1":
        return cos_t * dxf + sin_t * dyf
    if frame_axis == "X3":
        return -sin_t * dxf + cos_t * dyf
    raise ConfigurationError(f"unknown frame axis {frame_axis!r}")


def horizontal_grad_norm_sq(
    grid: GridSpec, f: np.ndarray, eps: float = 0.0, tau: float = 0.0
) -> np.ndarray:
    """(X1 f)^2 + (X2 f)^2 + eps^2 (X3 f)^2 + tau with central differences."""
    if eps < 0 or tau < 0:
        raise ConfigurationError(f"eps and tau must be >= 0, got eps={eps}, tau={tau}")
    g1 = frame_diff(grid, f, "X1", "central")
    g2 = frame_diff(grid, f, "X2", "central")
    out = g1 * g1 + g2 * g2
    if eps > 0:
        g3 = frame_diff(grid, f, "X3", "central")
        out = out + (eps * eps) * (g3 * g3)
    return out + tau


def dint_norm_sq(grid: GridSpec, f: np.ndarray, tau: float, cache: "DiffCache | None" = None) -> np.ndarray:
    """Neighborhood-averaged squared horizontal gradient plus tau (> 0 everywhere).

    The X1 part is averaged over the three theta-neighbors {k-1, k, k+1}
    (periodic), the X2 part over the five-point spatial neighborhood
    {(i,j), (i+-1,j), (i,j+-1)} (replicate edge).
    """
    if tau <= 0:
        raise ConfigurationError(f"tau must be > 0, got {tau}")
    f = _check_field(grid, f)
    cache = cache or DiffCache(grid)
    g1sq = cache.frame(f, "X1", "central") ** 2
    g2sq = cache.frame(f, "X2", "central") ** 2
    x1_avg = (g1sq + _shift(g1sq, AXIS_THETA, 1) + _shift(g1sq, AXIS_THETA, -1)) / 3.0
    x2_avg = (
        g2sq
        + _shift(g2sq, AXIS_X, 1)
        + _shift(g2sq, AXIS_X, -1)
        + _shift(g2sq, AXIS_Y, 1)
        + _shift(g2sq, AXIS_Y, -1)
    ) / 5.0
    return x1_avg + x2_avg + tau
