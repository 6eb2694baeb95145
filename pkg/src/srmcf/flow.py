"""Level-set curvature flows on R^2 x S^1.

Two right-hand sides are provided:

* the pure sub-Riemannian upwind scheme (eps = sigma = 0): an upwinded
  first-order transport term W1 plus a curvature term W2 whose denominator
  is a neighborhood mean of central derivatives, and
* a Riemannian (eps, tau, sigma)-regularized contraction over the full
  frame {X1, X2, eps*X3}, used for vanishing-viscosity experiments.

Time stepping is explicit Euler with the stability bound dt <= h^2/10,
h = min(dx, dy, dtheta).  Dirichlet regions are realized by pinning nodes.
"""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass, field
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .errors import ConfigurationError, NumericalError
from .grid import (
    DiffCache,
    GridSpec,
    _check_field,
    _trig,
    coordinate_diff,
    dint_norm_sq,
)

CFL_SAFETY = 10.0  # dt <= h^2 / 10

BOUNDARY_MODES = ("full_domain", "dirichlet_region")


@dataclass(frozen=True)
class FlowParams:
    """Regularization triple (eps, tau, sigma) plus time-stepping knobs.

    dt=None means automatic: h^2/10 with h = min(dx, dy, dtheta).
    steps=None lets pipelines substitute their own default step count.
    """

    tau: float = 1e-4
    eps: float = 0.0
    sigma: float = 0.0
    dt: float | None = None
    steps: int | None = None
    boundary: str = "full_domain"

    def __post_init__(self):
        if self.tau <= 0:
            raise ConfigurationError(f"tau must be > 0, got {self.tau}")
        if self.eps < 0 or self.sigma < 0:
            raise ConfigurationError(
                f"eps and sigma must be >= 0, got eps={self.eps}, sigma={self.sigma}"
            )
        if self.dt is not None and self.dt <= 0:
            raise ConfigurationError(f"dt must be > 0 or None (auto), got {self.dt}")
        if self.steps is not None and self.steps < 0:
            raise ConfigurationError(f"steps must be >= 0, got {self.steps}")
        if self.boundary not in BOUNDARY_MODES:
            raise ConfigurationError(f"unknown boundary mode {self.boundary!r}")

    def resolve_dt(self, grid: GridSpec) -> float:
        if self.dt is None:
            h = grid.min_spacing
            return h * h / CFL_SAFETY
        return self.dt


@dataclass
class Diagnostics:
    """Per-run bookkeeping collected by evolve()."""

    dt: float = 0.0
    cfl_ratio: float = 0.0
    steps: int = 0
    sup_norms: list[float] = field(default_factory=list)
    grad_sup: list[float] = field(default_factory=list)
    elapsed: float = 0.0
    warnings: list[str] = field(default_factory=list)


def coefficients(p: np.ndarray, params: FlowParams) -> np.ndarray:
    """Diffusion matrix A_ij = delta_ij - p_i p_j / (|p|^2 + tau) + sigma*delta_ij.

    p is the eps-scaled gradient (p1, p2, eps*p3).  Symmetric with
    eigenvalues in [sigma + tau/(|p|^2+tau), 1 + sigma].
    """
    p = np.asarray(p, dtype=float)
    if p.shape != (3,):
        raise ConfigurationError(f"p must be a 3-vector, got shape {p.shape}")
    denom = float(p @ p) + params.tau
    return (1.0 + params.sigma) * np.eye(3) - np.outer(p, p) / denom


def w1_term(grid: GridSpec, U: np.ndarray, tau: float, cache: DiffCache | None = None) -> np.ndarray:
    """Upwinded first-order commutator term of the sub-Riemannian scheme.

    Switching coefficients a1 = -sin(theta_k) * D0X1 U * D0X2 U and
    a2 = cos(theta_k) * D0X1 U * D0X2 U select backward (max) or forward
    (min) coordinate differences; denominator (D0X1 U)^2 + (D0X2 U)^2 + tau.
    """
    if tau <= 0:
        raise ConfigurationError(f"tau must be > 0, got {tau}")
    U = _check_field(grid, U)
    cache = cache or DiffCache(grid)
    cos_t, sin_t = _trig(grid)
    g1 = cache.frame(U, "X1", "central")
    g2 = cache.frame(U, "X2", "central")
    g12 = g1 * g2
    denom = g1 * g1 + g2 * g2 + tau
    a1 = -sin_t * g12
    a2 = cos_t * g12
    dxm = cache.coord(U, "x", "backward")
    dxp = cache.coord(U, "x", "forward")
    dym = cache.coord(U, "y", "backward")
    dyp = cache.coord(U, "y", "forward")
    num_x = np.maximum(a1, 0.0) * dxm + np.minimum(a1, 0.0) * dxp
    num_y = np.maximum(a2, 0.0) * dym + np.minimum(a2, 0.0) * dyp
    return -(num_x + num_y) / denom


def _second_diff(grid: GridSpec, U: np.ndarray, frame_axis: str, cache: DiffCache | None = None) -> np.ndarray:
    """D^{-Xi} D^{+Xi} U (standard second-order central second difference)."""
    cache = cache or DiffCache(grid)
    return cache.frame(cache.frame(U, frame_axis, "forward"), frame_axis, "backward")


def _mixed_central(grid: GridSpec, U: np.ndarray, a: str, b: str, cache: DiffCache | None = None) -> np.ndarray:
    """Symmetrized central mixed second difference (frame diffs do not commute)."""
    cache = cache or DiffCache(grid)
    ab = cache.frame(cache.frame(U, b, "central"), a, "central")
    ba = cache.frame(cache.frame(U, a, "central"), b, "central")
    return (ab + ba) / 2.0


def w2_term(grid: GridSpec, U: np.ndarray, tau: float, cache: DiffCache | None = None) -> np.ndarray:
    """Curvature term of the sub-Riemannian scheme.

    [(D0X2 U)^2 * D-X1D+X1 U + (D0X1 U)^2 * D-X2D+X2 U
     - 2 * D0X1 U * D0X2 U * M] / (|D_int U|^2 + tau)

    where M is the X1 difference of D0X2 U, upwinded by the sign of
    -D0X1 U * D0X2 U (same switching rule as w1_term).
    """
    if tau <= 0:
        raise ConfigurationError(f"tau must be > 0, got {tau}")
    U = _check_field(grid, U)
    cache = cache or DiffCache(grid)
    g1 = cache.frame(U, "X1", "central")
    g2 = cache.frame(U, "X2", "central")
    s11 = _second_diff(grid, U, "X1", cache)
    s22 = _second_diff(grid, U, "X2", cache)
    dtheta_c = cache.frame(U, "X2", "central")
    mixed = np.where(
        -g1 * g2 > 0,
        cache.frame(dtheta_c, "X1", "backward"),
        cache.frame(dtheta_c, "X1", "forward"),
    )
    num = g2 * g2 * s11 + g1 * g1 * s22 - 2.0 * g1 * g2 * mixed
    return num / dint_norm_sq(grid, U, tau, cache)


def _riemannian_rhs(grid: GridSpec, U: np.ndarray, params: FlowParams) -> np.ndarray:
    """Full 3x3 contraction sum_ij A^{eps,tau,sigma}_ij (X^eps_i X^eps_j U)."""
    eps, tau, sigma = params.eps, params.tau, params.sigma
    cache = DiffCache(grid)
    g1 = cache.frame(U, "X1", "central")
    g2 = cache.frame(U, "X2", "central")
    g3 = eps * cache.frame(U, "X3", "central")
    q = g1 * g1 + g2 * g2 + g3 * g3 + tau

    s11 = _second_diff(grid, U, "X1", cache)
    s22 = _second_diff(grid, U, "X2", cache)
    s33 = (eps * eps) * _second_diff(grid, U, "X3", cache)
    s12 = _mixed_central(grid, U, "X1", "X2", cache)
    s13 = eps * _mixed_central(grid, U, "X1", "X3", cache)
    s23 = eps * _mixed_central(grid, U, "X2", "X3", cache)

    trace = s11 + s22 + s33
    quad = (
        g1 * g1 * s11
        + g2 * g2 * s22
        + g3 * g3 * s33
        + 2.0 * (g1 * g2 * s12 + g1 * g3 * s13 + g2 * g3 * s23)
    )
    return (1.0 + sigma) * trace - quad / q


def mcf_rhs(grid: GridSpec, U: np.ndarray, params: FlowParams) -> np.ndarray:
    """Right-hand side of the curvature flow.

    eps = sigma = 0 selects the sub-Riemannian upwind scheme (W2 + W1);
    otherwise the regularized Riemannian contraction is used.
    """
    U = _check_field(grid, U)
    if params.eps == 0.0 and params.sigma == 0.0:
        cache = DiffCache(grid)
        return w2_term(grid, U, params.tau, cache) + w1_term(grid, U, params.tau, cache)
    return _riemannian_rhs(grid, U, params)


# Widest spatial stencil radius of any rhs above is 2; halo 3 leaves margin.
_HALO = 3


def _blockwise(grid: GridSpec, arrays: tuple[np.ndarray, ...], rhs, workers: int) -> np.ndarray:
    """Evaluate a node-local rhs over x-blocks with halos (bit-identical to serial)."""
    nx = grid.nx
    workers = max(1, min(workers, nx // (2 * _HALO + 3)))
    if workers <= 1:
        return rhs(grid, *arrays)
    bounds = np.linspace(0, nx, workers + 1).astype(int)

    def run(b: int) -> tuple[int, int, np.ndarray]:
        i0, i1 = int(bounds[b]), int(bounds[b + 1])
        lo, hi = max(0, i0 - _HALO), min(nx, i1 + _HALO)
        sub = GridSpec(hi - lo, grid.ny, grid.ntheta, grid.dx, grid.dy)
        parts = tuple(a[:, lo:hi, :] for a in arrays)
        out = rhs(sub, *parts)
        return i0, i1, out[:, i0 - lo : i1 - lo, :]

    result = np.empty(grid.shape)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for i0, i1, block in pool.map(run, range(workers)):
            result[:, i0:i1, :] = block
    return result


def _raise_on_nan(out: np.ndarray, step_index: int) -> None:
    if np.isfinite(out).all():
        return
    bad = np.argwhere(~np.isfinite(out))[0]
    raise NumericalError(
        f"non-finite value at node (y={bad[0]}, x={bad[1]}, k={bad[2]}) after step {step_index}"
    )


def step(
    grid: GridSpec,
    U: np.ndarray,
    params: FlowParams,
    region: np.ndarray | None = None,
    workers: int = 1,
    _step_index: int = 0,
    _diag: Diagnostics | None = None,
) -> np.ndarray:
    """One explicit Euler step of the curvature flow.

    region is a boolean field (True = node evolves); None evolves every node.
    Pinned nodes are copied unchanged (Dirichlet).
    """
    U = _check_field(grid, U)
    dt = params.resolve_dt(grid)
    _warn_cfl(grid, dt, _diag)
    rhs = _blockwise(grid, (U,), lambda g, u: mcf_rhs(g, u, params), workers)
    out = U + dt * rhs
    if region is not None:
        region = _check_region(grid, region, params)
        out = np.where(region, out, U)
    _raise_on_nan(out, _step_index)
    return out


def _warn_cfl(grid: GridSpec, dt: float, diag: Diagnostics | None) -> None:
    h = grid.min_spacing
    limit = h * h / CFL_SAFETY
    if dt > limit * (1 + 1e-12):
        msg = f"dt={dt:g} exceeds stability bound h^2/10={limit:g}"
        warnings.warn(msg, stacklevel=3)
        if diag is not None and msg not in diag.warnings:
            diag.warnings.append(msg)


def _check_region(grid: GridSpec, region: np.ndarray, params: FlowParams) -> np.ndarray:
    region = np.asarray(region, dtype=bool)
    if region.shape != grid.shape:
        raise ConfigurationError(f"region shape {region.shape} does not match grid {grid.shape}")
    if params.boundary == "dirichlet_region" and region.all():
        raise ConfigurationError("dirichlet_region mode requires at least one pinned node")
    return region


def _euclidean_grad_sup(grid: GridSpec, U: np.ndarray) -> float:
    gx = coordinate_diff(grid, U, "x", "central")
    gy = coordinate_diff(grid, U, "y", "central")
    gt = coordinate_diff(grid, U, "theta", "central")
    return float(np.sqrt(gx * gx + gy * gy + gt * gt).max())


def evolve(
    grid: GridSpec,
    U0: np.ndarray,
    params: FlowParams,
    region: np.ndarray | None = None,
    steps: int | None = None,
    workers: int = 1,
) -> tuple[np.ndarray, Diagnostics]:
    """Apply `steps` explicit Euler steps, collecting diagnostics."""
    U = _check_field(grid, U0).copy()
    n = params.steps if steps is None else steps
    if n is None:
        raise ConfigurationError("step count not set (params.steps is None)")
    dt = params.resolve_dt(grid)
    h = grid.min_spacing
    diag = Diagnostics(dt=dt, cfl_ratio=dt / (h * h / CFL_SAFETY), steps=n)
    t0 = time.perf_counter()
    for s in range(n):
        U = step(grid, U, params, region, workers=workers, _step_index=s, _diag=diag)
        diag.sup_norms.append(float(np.abs(U).max()))
        diag.grad_sup.append(_euclidean_grad_sup(grid, U))
    diag.elapsed = time.perf_counter() - t0
    return U, diag


def horizontal_mean_curvature(grid: GridSpec, u: np.ndarray, tau: float) -> np.ndarray:
    """Horizontal divergence of the regularized horizontal normal (diagnostic)."""
    if tau <= 0:
        raise ConfigurationError(f"tau must be > 0, got {tau}")
    u = _check_field(grid, u)
    cache = DiffCache(grid)
    g1 = cache.frame(u, "X1", "central")
    g2 = cache.frame(u, "X2", "central")
    g = np.sqrt(g1 * g1 + g2 * g2 + tau)
    return cache.frame(g1 / g, "X1", "central") + cache.frame(g2 / g, "X2", "central")
