"""Gaussian radial-basis class potential, mutual class potential,
normalized potential and 2-D grid export.

The potential of a point x against a collection X is the sum of
exp(-(d(X_i, x)/gamma)^2) over the collection.  The classic definition is
written with the L1 distance, but the undersampling and guided-sampling
procedures work with L2, so the norm is a parameter with per-algorithm
defaults documented in each consumer.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .data import L1, Dataset, NormKind, pairwise_distances


@dataclass(frozen=True)
class PotentialParams:
    """RBF spread gamma (> 0) and the norm used inside the exponent."""

    gamma: float
    norm: NormKind = L1

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")


def batch_potential(points, X, params: PotentialParams) -> np.ndarray:
    """Class potential of each query point against collection X."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    X = np.asarray(X, dtype=float)
    if X.size == 0:
        return np.zeros(points.shape[0])
    d = pairwise_distances(points, X, params.norm)
    return np.exp(-np.square(d / params.gamma)).sum(axis=1)


def potential(x, X, params: PotentialParams) -> float:
    """Sum of Gaussian RBF contributions of X at the point x.

    Ranges from 0 (empty collection or everything far away) to len(X)
    (every row coincides with x).
    """
    return float(batch_potential(np.asarray(x, dtype=float)[None, :], X, params)[0])


def mutual_class_potential(x, Xmaj, Xmin, params: PotentialParams) -> float:
    """Majority potential minus minority potential at x.

    Positive values mean the majority class dominates the neighborhood.
    """
    return potential(x, Xmaj, params) - potential(x, Xmin, params)


def batch_mutual_potential(points, Xmaj, Xmin, params: PotentialParams) -> np.ndarray:
    return batch_potential(points, Xmaj, params) - batch_potential(points, Xmin, params)


def normalized_potential(X, anchors, params: PotentialParams) -> np.ndarray:
    """Potentials at the anchor points, scaled to sum to one.

    Raises when every raw potential underflows to zero, which indicates
    that gamma is far too small for the data scale.
    """
    anchors = np.atleast_2d(np.asarray(anchors, dtype=float))
    if anchors.shape[0] < 1:
        raise ValueError("at least one anchor point is required")
    raw = batch_potential(anchors, X, params)
    total = raw.sum()
    if total <= 0.0:
        raise ValueError(
            "all anchor potentials are zero (numerical underflow); "
            "increase gamma"
        )
    return raw / total


@dataclass
class PotentialGrid:
    """Mutual-potential values sampled on a regular 2-D grid.

    ``values[i, j]`` is the mutual class potential at (xs[i], ys[j]);
    CSV export walks the grid row-major in that same order.
    """

    x_min: float
    x_max: float
    y_min: float
    y_max: float
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 2 or min(self.values.shape) < 2:
            raise ValueError("grid resolution must be at least 2 per axis")

    @property
    def xs(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.values.shape[0])

    @property
    def ys(self) -> np.ndarray:
        return np.linspace(self.y_min, self.y_max, self.values.shape[1])

    def write_csv(self, path, header_comment: str | None = None):
        xs, ys = self.xs, self.ys
        with open(path, "w", newline="", encoding="utf-8") as fh:
            if header_comment:
                fh.write(f"# {header_comment}\n")
            writer = csv.writer(fh)
            writer.writerow(["x", "y", "potential"])
            for i in range(len(xs)):
                for j in range(len(ys)):
                    writer.writerow([
                        format(xs[i], ".17g"),
                        format(ys[j], ".17g"),
                        format(self.values[i, j], ".17g"),
                    ])


def potential_grid(ds: Dataset, minority_label, bounds, resolution,
                   params: PotentialParams) -> PotentialGrid:
    """Evaluate the mutual class potential (majority minus the named
    minority class) at every node of a regular grid over a 2-D dataset.

    ``bounds`` is (x_min, x_max, y_min, y_max); ``resolution`` is either a
    single node count for both axes or an (rx, ry) pair.
    """
    if ds.m != 2:
        raise ValueError(f"potential grid requires 2 feature dimensions, got {ds.m}")
    if np.isscalar(resolution):
        rx = ry = int(resolution)
    else:
        rx, ry = (int(r) for r in resolution)
    if rx < 2 or ry < 2:
        raise ValueError("grid resolution must be at least 2 per axis")
    x_min, x_max, y_min, y_max = (float(b) for b in bounds)

    minority_mask = ds.labels == minority_label
    Xmin = ds.features[minority_mask]
    Xmaj = ds.features[~minority_mask]

    xs = np.linspace(x_min, x_max, rx)
    ys = np.linspace(y_min, y_max, ry)
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    nodes = np.column_stack([gx.ravel(), gy.ravel()])
    values = batch_mutual_potential(nodes, Xmaj, Xmin, params).reshape(rx, ry)
    return PotentialGrid(x_min, x_max, y_min, y_max, values)
