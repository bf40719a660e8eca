"""Planar embeddings of distance matrices by stress majorization.

Coordinates start from classical scaling (eigendecomposition of the
double-centered squared-distance matrix) and are refined by iterated
Guttman transforms, which never increase the raw stress
``sum_{i<j} (D_ij - |z_i - z_j|)**2``.  The seed only perturbs
degenerate starts (coincident points that the transform could not
separate); well-posed inputs embed the same way for every seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


@dataclass
class Embedding:
    """Planar coordinates for a distance matrix, with convergence trace."""

    labels: list
    coordinates: np.ndarray
    stress: float
    iterations: int
    seed: int
    history: list = field(default_factory=list)   # stress after each step

    def to_dict(self):
        return {
            "labels": list(self.labels),
            "coords": [[float(v) for v in row] for row in self.coordinates],
            "stress": self.stress,
            "iterations": self.iterations,
            "seed": self.seed,
        }


def _check_matrix(matrix):
    d = np.asarray(matrix, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise ValueError(f"distance matrix must be square, got shape {d.shape}")
    if not np.all(np.isfinite(d)):
        raise ValueError("distance matrix has non-finite entries")
    if np.any(d < 0):
        raise ValueError("distance matrix has negative entries")
    if not np.allclose(d, d.T, atol=1e-9, rtol=0.0):
        raise ValueError("distance matrix is not symmetric")
    if np.any(np.abs(np.diag(d)) > 1e-9):
        raise ValueError("distance matrix diagonal must be zero")
    return (d + d.T) / 2.0


def raw_stress(matrix, coords) -> float:
    """``sum_{i<j} (D_ij - |z_i - z_j|)**2`` at the given coordinates."""
    d = np.asarray(matrix, dtype=float)
    z = np.asarray(coords, dtype=float)
    diff = z[:, None, :] - z[None, :, :]
    dist = np.sqrt((diff ** 2).sum(axis=2))
    iu = np.triu_indices(d.shape[0], k=1)
    return float(((d[iu] - dist[iu]) ** 2).sum())


def classical_coordinates(matrix, dims=2) -> np.ndarray:
    """Classical scaling: top eigenpairs of the double-centered -D**2/2.

    Negative eigenvalues (non-Euclidean parts) are clamped to zero.
    """
    d = np.asarray(matrix, dtype=float)
    n = d.shape[0]
    j = np.eye(n) - np.ones((n, n)) / n
    b = -0.5 * j @ (d ** 2) @ j
    eigvals, eigvecs = np.linalg.eigh(b)
    top = np.argsort(eigvals)[::-1][:dims]
    vals = np.clip(eigvals[top], 0.0, None)
    coords = eigvecs[:, top] * np.sqrt(vals)[None, :]
    if coords.shape[1] < dims:
        coords = np.hstack(
            [coords, np.zeros((n, dims - coords.shape[1]))]
        )
    return coords


def _pairwise(z):
    diff = z[:, None, :] - z[None, :, :]
    return np.sqrt((diff ** 2).sum(axis=2))


def mds_embed(
    matrix, labels=None, seed=0, dims=2, max_iter=300, tol=1e-12
) -> Embedding:
    """Embed a distance matrix in the plane by stress majorization.

    The matrix must be square, symmetric, nonnegative with a zero
    diagonal.  Iterates the Guttman transform from a classical-scaling
    start until the relative stress improvement drops below ``tol`` or
    ``max_iter`` steps; stress is non-increasing along the way (the
    transform minimizes a majorizing quadratic touching at the current
    point).  Output coordinates are centered at the origin.
    """
    d = _check_matrix(matrix)
    n = d.shape[0]
    if labels is None:
        labels = [str(i) for i in range(n)]
    labels = [str(x) for x in labels]
    if len(labels) != n:
        raise ValueError(f"{len(labels)} labels for a {n}x{n} matrix")

    z = classical_coordinates(d, dims=dims)
    # A degenerate start (distinct targets, coincident points) would sit
    # in a fixed point of the transform; nudge it apart, seeded.
    dist = _pairwise(z)
    stuck = (dist == 0.0) & (d > 0.0)
    np.fill_diagonal(stuck, False)
    if stuck.any():
        rng = np.random.default_rng(seed)
        scale = 1e-6 * max(float(d.max()), 1.0)
        z = z + rng.normal(0.0, scale, size=z.shape)

    stress = raw_stress(d, z)
    history = [stress]
    iterations = 0
    for _ in range(max_iter):
        dist = _pairwise(z)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(dist > 0.0, d / np.where(dist > 0.0, dist, 1.0), 0.0)
        b = -ratio
        np.fill_diagonal(b, 0.0)
        np.fill_diagonal(b, -b.sum(axis=1))
        z_next = (b @ z) / n
        next_stress = raw_stress(d, z_next)
        iterations += 1
        z = z_next
        history.append(next_stress)
        if stress <= 0.0:
            stress = next_stress
            break
        improvement = (stress - next_stress) / stress
        stress = next_stress
        if improvement < tol:
            break
    z = z - z.mean(axis=0, keepdims=True)
    stress = raw_stress(d, z)
    return Embedding(labels, z, stress, iterations, int(seed), history)
