"""Synthetic grayscale images and masks used by the demos and benchmarks."""

from __future__ import annotations

import math

import numpy as np


def _coords(ny: int, nx: int) -> tuple[np.ndarray, np.ndarray]:
    y = np.arange(ny)[:, None] - (ny - 1) / 2.0
    x = np.arange(nx)[None, :] - (nx - 1) / 2.0
    return x, y


def linear_ramp(ny: int, nx: int, angle: float = 0.0) -> np.ndarray:
    """Ramp from 0 to 1 along the given direction (level lines orthogonal to it)."""
    x, y = _coords(ny, nx)
    t = x * math.cos(angle) + y * math.sin(angle)
    t = t - t.min()
    return t / t.max()


def radial_image(ny: int, nx: int) -> np.ndarray:
    """Circular level lines with non-vanishing gradient away from the center."""
    x, y = _coords(ny, nx)
    r = np.hypot(x, y)
    return np.clip(r / r.max(), 0.0, 1.0)


def stripes(ny: int, nx: int, period: float = 12.0, angle: float = 0.3) -> np.ndarray:
    """Smooth straight stripes, values in [0.1, 0.9]."""
    x, y = _coords(ny, nx)
    t = x * math.cos(angle) + y * math.sin(angle)
    return 0.5 + 0.4 * np.sin(2.0 * math.pi * t / period)


def rings(ny: int, nx: int, period: float = 10.0) -> np.ndarray:
    """Concentric sinusoidal rings: circular level lines with radial period."""
    x, y = _coords(ny, nx)
    r = np.hypot(x, y)
    return 0.5 + 0.4 * np.sin(2.0 * math.pi * r / period)


def x_crossing(ny: int, nx: int, half_width: float = 1.5, background: float = 0.1) -> np.ndarray:
    """Two bright straight ridges crossing at the image center."""
    x, y = _coords(ny, nx)
    d1 = np.abs(x * math.sin(0.5) - y * math.cos(0.5))
    d2 = np.abs(x * math.sin(-0.6) - y * math.cos(-0.6))
    w = 2.0 * half_width * half_width
    ridges = np.exp(-d1 * d1 / w) + np.exp(-d2 * d2 / w)
    return np.clip(background + (1.0 - background) * ridges, 0.0, 1.0)


def box_mask(ny: int, nx: int, cy: int, cx: int, half: int) -> np.ndarray:
    mask = np.zeros((ny, nx), dtype=bool)
    mask[cy - half : cy + half + 1, cx - half : cx + half + 1] = True
    return mask


def sector_annulus_mask(
    ny: int, nx: int, r_inner: float, r_outer: float, angle0: float, angle1: float
) -> np.ndarray:
    """Annular sector occlusion (radii in pixels, angles in radians)."""
    x, y = _coords(ny, nx)
    r = np.hypot(x, y)
    a = np.mod(np.arctan2(y, x) - angle0, 2.0 * math.pi)
    return (r >= r_inner) & (r <= r_outer) & (a <= np.mod(angle1 - angle0, 2.0 * math.pi))


def add_gaussian_noise(img: np.ndarray, sigma: float, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return np.clip(img + rng.normal(0.0, sigma, img.shape), 0.0, 1.0)


def smooth_random_field(shape: tuple[int, int, int], seed: int, smooth: float = 2.0) -> np.ndarray:
    """Smooth bounded random field in [-1, 1] for stability experiments."""
    from scipy import ndimage

    rng = np.random.default_rng(seed)
    f = ndimage.gaussian_filter(rng.normal(size=shape), smooth, mode="wrap")
    return f / np.abs(f).max()
