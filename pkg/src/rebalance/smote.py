"""Interpolation-based resampling: minority oversampling, majority
undersampling by pairwise merging, their combination, and the random
baselines."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .data import L2, as_random_source, k_nearest_neighbors, \
    round_half_away_from_zero


@dataclass(frozen=True)
class CsmouteParams:
    """Neighbor counts for the two interpolation stages and the fraction
    of the class-size deficit eliminated by oversampling (the rest is
    removed from the majority)."""

    k_smote: int = 5
    k_smute: int = 5
    ratio: float = 0.5

    def __post_init__(self):
        if self.k_smote < 1 or self.k_smute < 1:
            raise ValueError("neighbor counts must be >= 1")
        if not 0.0 <= self.ratio <= 1.0:
            raise ValueError("ratio must lie in [0, 1]")


def smote(Xmin, k: int, n: int, rng) -> np.ndarray:
    """Append n interpolated minority points.

    Each new point lies between a random minority observation and one of
    its k nearest minority neighbors (self excluded) at a uniform random
    position along the segment.  A single-observation minority class
    degrades to duplication with a warning so extreme folds survive.
    """
    Xmin = np.atleast_2d(np.asarray(Xmin, dtype=float))
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return Xmin.copy()
    n_min = Xmin.shape[0]
    if n_min == 0:
        raise ValueError("cannot oversample an empty minority class")
    if n_min == 1:
        warnings.warn("single minority observation: interpolation degrades "
                      "to duplication", stacklevel=2)
        return np.vstack([Xmin, np.repeat(Xmin, n, axis=0)])
    rng = as_random_source(rng)

    k_eff = min(k, n_min - 1)
    neighbors = [k_nearest_neighbors(i, Xmin, k_eff, L2, include_self=False)
                 for i in range(n_min)]
    new_points = np.zeros((n, Xmin.shape[1]))
    for s in range(n):
        i = int(rng.integers(n_min))
        j = neighbors[i][int(rng.integers(len(neighbors[i])))]
        r = rng.uniform()
        new_points[s] = Xmin[i] + r * (Xmin[j] - Xmin[i])
    return np.vstack([Xmin, new_points])


def smute(Xmaj, k: int, n: int, rng) -> np.ndarray:
    """Shrink the majority class by n through pairwise interpolation.

    Each iteration removes a random observation and one of its k nearest
    neighbors from the current collection and inserts a single point
    interpolated between them, for a net loss of one.  k is clamped to
    the shrinking pool; at least one observation must survive.
    """
    Xmaj = np.atleast_2d(np.asarray(Xmaj, dtype=float))
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return Xmaj.copy()
    if n >= Xmaj.shape[0]:
        raise ValueError(
            f"cannot remove {n} of {Xmaj.shape[0]} majority observations")
    rng = as_random_source(rng)

    current = Xmaj.copy()
    for _ in range(n):
        size = current.shape[0]
        i = int(rng.integers(size))
        k_eff = min(k, size - 1)
        nb = k_nearest_neighbors(i, current, k_eff, L2, include_self=False)
        j = int(nb[int(rng.integers(len(nb)))])
        r = rng.uniform()
        merged = current[i] + r * (current[j] - current[i])
        keep = np.ones(size, dtype=bool)
        keep[[i, j]] = False
        current = np.vstack([current[keep], merged[None, :]])
    return current


def csmoute(Xmaj, Xmin, params: CsmouteParams, rng):
    """Split the class-size deficit between oversampling and
    undersampling so the classes end exactly balanced.

    Returns (new majority, new minority).  The oversampled share is
    round(deficit * ratio) with halves rounding away from zero.
    """
    Xmaj = np.atleast_2d(np.asarray(Xmaj, dtype=float))
    Xmin = np.atleast_2d(np.asarray(Xmin, dtype=float))
    if Xmaj.shape[0] < Xmin.shape[0]:
        raise ValueError("majority class must not be smaller than minority")
    rng = as_random_source(rng)

    deficit = Xmaj.shape[0] - Xmin.shape[0]
    n_over = round_half_away_from_zero(deficit * params.ratio)
    n_under = deficit - n_over
    new_min = smote(Xmin, params.k_smote, n_over, rng)
    new_maj = smute(Xmaj, params.k_smute, n_under, rng)
    return new_maj, new_min


def random_oversample(Xmin, n: int, rng) -> np.ndarray:
    """Append n uniform-with-replacement duplicates of existing rows."""
    Xmin = np.atleast_2d(np.asarray(Xmin, dtype=float))
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return Xmin.copy()
    if Xmin.shape[0] == 0:
        raise ValueError("cannot oversample an empty collection")
    rng = as_random_source(rng)
    picks = rng.integers(Xmin.shape[0], size=n)
    return np.vstack([Xmin, Xmin[picks]])


def random_undersample(Xmaj, n: int, rng) -> np.ndarray:
    """Remove n rows chosen uniformly without replacement."""
    Xmaj = np.atleast_2d(np.asarray(Xmaj, dtype=float))
    if n < 0:
        raise ValueError("n must be >= 0")
    if n > Xmaj.shape[0]:
        raise ValueError(
            f"cannot remove {n} of {Xmaj.shape[0]} observations")
    if n == 0:
        return Xmaj.copy()
    rng = as_random_source(rng)
    drop = rng.choice(Xmaj.shape[0], size=n, replace=False)
    keep = np.ones(Xmaj.shape[0], dtype=bool)
    keep[drop] = False
    return Xmaj[keep]
