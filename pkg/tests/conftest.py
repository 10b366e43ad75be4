import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def sphere_quadrature_weights(grid):
    """2-D quadrature weights w[i, k] for integrals over the sphere."""
    return np.outer(grid.theta_weights, np.full(grid.n_phi, 2.0 * np.pi / grid.n_phi))


def grid_angles(grid):
    return np.meshgrid(grid.theta, grid.phi, indexing="ij")


def grid_unit_vectors(grid):
    th, ph = grid_angles(grid)
    return np.stack([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)], axis=-1)


def angles_from_unit_vectors(vec):
    theta = np.arccos(np.clip(vec[..., 2], -1.0, 1.0))
    phi = np.arctan2(vec[..., 1], vec[..., 0])
    return theta, phi
