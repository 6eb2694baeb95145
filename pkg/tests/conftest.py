"""Shared fixtures and helpers for the test suite."""

ACCEPTANCE_RESULTS: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_RESULTS:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in ACCEPTANCE_RESULTS:
            terminalreporter.write_line(line)

import numpy as np
import pytest

from srmcf import GridSpec
from srmcf.synthetic import smooth_random_field


@pytest.fixture
def small_grid() -> GridSpec:
    return GridSpec(nx=16, ny=12, ntheta=8)


@pytest.fixture
def medium_grid() -> GridSpec:
    return GridSpec(nx=32, ny=32, ntheta=16)


def random_field(grid: GridSpec, seed: int) -> np.ndarray:
    return smooth_random_field(grid.shape, seed)


def analytic_field(grid: GridSpec, L: float = 10.0):
    """Smooth test function with pi-periodic theta dependence and its exact
    frame derivatives X1 f, X2 f, X3 f.

    f = sin(2 pi x / L) cos(2 pi y / L) exp(cos 2 theta).
    """
    X, Y, T = grid.meshgrid()
    w = 2.0 * np.pi / L
    s, c = np.sin(w * X), np.cos(w * X)
    sy, cy = np.sin(w * Y), np.cos(w * Y)
    e = np.exp(np.cos(2.0 * T))
    f = s * cy * e
    fx = w * c * cy * e
    fy = -w * s * sy * e
    ft = -2.0 * np.sin(2.0 * T) * f
    x1 = np.cos(T) * fx + np.sin(T) * fy
    x2 = ft
    x3 = -np.sin(T) * fx + np.cos(T) * fy
    return f, {"X1": x1, "X2": x2, "X3": x3}
