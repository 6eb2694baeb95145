"""Orientation lifting of a 2D image to R^2 x S^1 and re-projection.

Images are float64 arrays of shape (ny, nx) with values in [0, 1]; masks are
boolean arrays of the same shape (True = corrupted pixel).  Orientations are
level-line tangents, i.e. perpendicular to the image gradient, reduced mod pi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import ConfigurationError
from .grid import GridSpec


@dataclass
class OrientationField:
    """Per-pixel level-line orientation in [0, pi) and a confidence weight
    (gradient magnitude of the smoothed image; 0 exactly where it vanishes)."""

    theta_bar: np.ndarray
    confidence: np.ndarray


def _check_image(img: np.ndarray) -> np.ndarray:
    img = np.asarray(img, dtype=float)
    if img.ndim != 2 or min(img.shape) < 3:
        raise ConfigurationError(f"image must be 2D with sides >= 3, got shape {img.shape}")
    return img


def gaussian_smooth(img: np.ndarray, sigma_s: float) -> np.ndarray:
    """Gaussian convolution with replicate-edge boundary, clamped to [0, 1]."""
    img = _check_image(img)
    if sigma_s <= 0:
        raise ConfigurationError(f"sigma_s must be > 0, got {sigma_s}")
    return np.clip(ndimage.gaussian_filter(img, sigma_s, mode="nearest"), 0.0, 1.0)


def estimate_orientation(img: np.ndarray, sigma_s: float) -> OrientationField:
    """Level-line tangent orientation of the smoothed image.

    theta_bar = (atan2(gy, gx) + pi/2) mod pi, confidence = |(gx, gy)|;
    theta_bar is set to 0 where the confidence vanishes.
    """
    smoothed = gaussian_smooth(img, sigma_s)
    gy, gx = np.gradient(smoothed)
    confidence = np.hypot(gx, gy)
    theta = np.mod(np.arctan2(gy, gx) + math.pi / 2.0, math.pi)
    theta[confidence == 0] = 0.0
    return OrientationField(theta_bar=theta, confidence=confidence)


def _d_pi(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Distance on the period-pi circle."""
    d = np.abs(np.mod(a - b, math.pi))
    return np.minimum(d, math.pi - d)


def lift_surface(orient: OrientationField, grid: GridSpec, sigma_theta: float) -> np.ndarray:
    """Confidence-weighted angular Gaussian bump around theta_bar.

    u0(i,j,k) = confidence(i,j) * exp(-d_pi(theta_k, theta_bar(i,j))^2 / (2 sigma_theta^2)),
    identically 0 where the confidence is 0.  The lifted surface is the ridge
    of this field.
    """
    if sigma_theta <= 0:
        raise ConfigurationError(f"sigma_theta must be > 0, got {sigma_theta}")
    conf = np.asarray(orient.confidence, dtype=float)
    tb = np.asarray(orient.theta_bar, dtype=float)
    if conf.shape != (grid.ny, grid.nx) or tb.shape != (grid.ny, grid.nx):
        raise ConfigurationError(
            f"orientation field shape {conf.shape} does not match grid ({grid.ny}, {grid.nx})"
        )
    d = _d_pi(grid.thetas()[None, None, :], tb[:, :, None])
    bump = np.exp(-(d * d) / (2.0 * sigma_theta * sigma_theta))
    return conf[:, :, None] * bump


def lift_intensity(img: np.ndarray, grid: GridSpec) -> np.ndarray:
    """Constant extension of the image along theta: v0(i,j,k) = I(i,j)."""
    img = _check_image(img)
    if img.shape != (grid.ny, grid.nx):
        raise ConfigurationError(f"image shape {img.shape} does not match grid ({grid.ny}, {grid.nx})")
    return np.broadcast_to(img[:, :, None], grid.shape).copy()


def project(v: np.ndarray, u: np.ndarray, method: str = "weighted_mean") -> np.ndarray:
    """Re-project the intensity field to the image plane using u as weight.

    argmax: I(i,j) = v(i,j, argmax_k u) (lowest-k tie-break).
    weighted_mean: I(i,j) = sum_k v*w / sum_k w with w = max(u, 0), falling
    back to the plain theta-mean of v where the weights vanish.  Output is
    clamped to [0, 1].
    """
    v = np.asarray(v, dtype=float)
    u = np.asarray(u, dtype=float)
    if v.shape != u.shape or v.ndim != 3:
        raise ConfigurationError(f"v and u must share a 3D grid, got {v.shape} vs {u.shape}")
    if method == "argmax":
        k = np.argmax(u, axis=-1)
        out = np.take_along_axis(v, k[:, :, None], axis=-1)[:, :, 0]
    elif method == "weighted_mean":
        w = np.maximum(u, 0.0)
        sw = w.sum(axis=-1)
        num = (v * w).sum(axis=-1)
        with np.errstate(invalid="ignore", divide="ignore"):
            weighted = np.where(sw > 0, num / np.where(sw > 0, sw, 1.0), 0.0)
        fallback = v.mean(axis=-1)
        out = np.where(sw > 0, weighted, fallback)
        # theta-constant columns project exactly (lift/project round trip is bit-exact)
        vmin, vmax = v.min(axis=-1), v.max(axis=-1)
        out = np.where(vmin == vmax, v[:, :, 0], out)
    else:
        raise ConfigurationError(f"unknown projection method {method!r}")
    return np.clip(out, 0.0, 1.0)


def fill_from_boundary(values: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Inward constant extension: corrupted pixels take the mean of already
    known 4-neighbors, layer by layer, until the hole is filled.

    values may be 2D (ny, nx) or 3D (ny, nx, ntheta); the 3D case fills every
    theta slice with the same 2D mask.
    """
    mask = np.asarray(mask, dtype=bool)
    vals = np.asarray(values, dtype=float).copy()
    if mask.shape != vals.shape[:2]:
        raise ConfigurationError(f"mask shape {mask.shape} does not match field {vals.shape}")
    if mask.all():
        raise ConfigurationError("cannot fill: every pixel is corrupted")
    known = ~mask
    squeeze = vals.ndim == 2
    if squeeze:
        vals = vals[:, :, None]
    vals[mask] = 0.0
    while not known.all():
        kf = known.astype(float)
        nsum = np.zeros_like(vals)
        ncnt = np.zeros_like(kf)
        for axis, off in ((0, 1), (0, -1), (1, 1), (1, -1)):
            nsum += np.roll(vals * kf[:, :, None], off, axis=axis)
            ncnt += np.roll(kf, off, axis=axis)
        # roll wraps around the border; wrapped contributions only ever add
        # known-pixel values, which is acceptable for a constant extension,
        # but suppress them at the two affected edge lines for locality
        nsum[0] -= vals[-1] * kf[-1, :, None]
        ncnt[0] -= kf[-1]
        nsum[-1] -= vals[0] * kf[0, :, None]
        ncnt[-1] -= kf[0]
        nsum[:, 0] -= vals[:, -1] * kf[:, -1, None]
        ncnt[:, 0] -= kf[:, -1]
        nsum[:, -1] -= vals[:, 0] * kf[:, 0, None]
        ncnt[:, -1] -= kf[:, 0]
        frontier = (~known) & (ncnt > 0)
        if not frontier.any():
            raise ConfigurationError("fill cannot reach every corrupted pixel")
        vals[frontier] = nsum[frontier] / ncnt[frontier][:, None]
        known |= frontier
    return vals[:, :, 0] if squeeze else vals
