"""Seeded synthetic inputs used by the tests, the experiment scripts and the CLI fixtures."""

from __future__ import annotations

import numpy as np

from .regression import Dataset


def correlated_groups(
    seed: int = 0,
    n_obs: int = 100,
    group_sizes: tuple = (3, 3),
    noise: float = 1e-6,
    coefficients: tuple | None = None,
    response_noise: float = 0.1,
) -> Dataset:
    """Groups of near-duplicate columns; each group is one latent factor plus tiny noise.

    The response is a linear combination of the latent factors plus Gaussian noise.
    """
    rng = np.random.default_rng(seed)
    latent = rng.standard_normal((n_obs, len(group_sizes)))
    cols, labels = [], []
    for g, size in enumerate(group_sizes):
        for k in range(size):
            cols.append(latent[:, g] + noise * rng.standard_normal(n_obs))
            labels.append(f"{chr(ord('a') + g)}{k + 1}")
    coef = np.asarray(coefficients if coefficients is not None else np.arange(1, len(group_sizes) + 1), float)
    y = latent @ coef + response_noise * rng.standard_normal(n_obs)
    return Dataset(np.column_stack(cols), y, tuple(labels))


def tight_clusters(seed: int = 0, sizes: tuple = (3, 3), spread: float = 0.05, gap: float = 10.0) -> np.ndarray:
    """Points in the plane: each cluster sits within ``spread`` of its centre, centres ``gap`` apart."""
    rng = np.random.default_rng(seed)
    pts = []
    for i, size in enumerate(sizes):
        centre = np.array([gap * i, 0.0])
        pts.append(centre + rng.uniform(-spread, spread, size=(size, 2)))
    return np.vstack(pts)


def pair_with_correlation(r: float, n_obs: int = 200, seed: int = 0) -> np.ndarray:
    """Two columns whose sample Pearson correlation is exactly ``r`` (up to rounding)."""
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((n_obs, 2))
    z -= z.mean(axis=0)
    q, _ = np.linalg.qr(z)
    u, v = q[:, 0], q[:, 1]
    return np.column_stack([u, r * u + np.sqrt(1 - r * r) * v])
