"""Dataset container, distances, nearest neighbors, seeded randomness and
stratified splitting shared by every resampling algorithm."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class NormKind:
    """Minkowski p-norm used for distance calculation (p >= 1, finite)."""

    p: float = 2.0

    def __post_init__(self):
        if not math.isfinite(self.p) or self.p < 1.0:
            raise ValueError(f"norm order p must be finite and >= 1, got {self.p}")


L1 = NormKind(1.0)
L2 = NormKind(2.0)


def lp(p: float) -> NormKind:
    return NormKind(float(p))


@dataclass(frozen=True)
class Dataset:
    """Feature matrix (n rows, m >= 1 columns) plus one label per row.

    Immutable after construction: the underlying arrays are marked
    read-only, so a Dataset can be shared freely across threads.
    """

    features: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        features = np.asarray(self.features, dtype=float)
        labels = np.asarray(self.labels)
        if features.ndim != 2:
            raise ValueError("features must be a 2-D matrix")
        if features.shape[1] < 1:
            raise ValueError("at least one feature column is required")
        if not np.all(np.isfinite(features)):
            raise ValueError("features contain NaN or infinite values")
        if labels.ndim != 1 or labels.shape[0] != features.shape[0]:
            raise ValueError(
                f"labels length {labels.shape} does not match "
                f"{features.shape[0]} feature rows"
            )
        features = features.copy()
        labels = labels.copy()
        features.setflags(write=False)
        labels.setflags(write=False)
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def m(self) -> int:
        return self.features.shape[1]

    def subset(self, indices) -> "Dataset":
        indices = np.asarray(indices, dtype=int)
        return Dataset(self.features[indices], self.labels[indices])


class RandomSource:
    """Deterministic random stream: PCG64 seeded through a SeedSequence.

    Identical (seed, derivation keys) always reproduce the identical draw
    sequence.  ``derive`` builds an independent child stream from integer
    keys, used e.g. for per-fold seeding; draws are delegated to the
    underlying numpy Generator (``uniform``, ``integers``, ...).
    """

    def __init__(self, seed: int, _spawn_key: tuple = ()):
        seed = int(seed)
        if seed < 0:
            raise ValueError("seed must be a nonnegative integer")
        self.seed = seed
        self._spawn_key = tuple(int(k) for k in _spawn_key)
        sequence = np.random.SeedSequence(seed, spawn_key=self._spawn_key)
        self._generator = np.random.Generator(np.random.PCG64(sequence))

    def derive(self, *keys: int) -> "RandomSource":
        return RandomSource(self.seed, self._spawn_key + tuple(keys))

    def __getattr__(self, name):
        return getattr(self._generator, name)

    def __repr__(self):
        return f"RandomSource(seed={self.seed}, keys={self._spawn_key})"


def as_random_source(rng) -> RandomSource:
    """Accept either a RandomSource or a bare integer seed."""
    if isinstance(rng, RandomSource):
        return rng
    return RandomSource(rng)


def round_half_away_from_zero(x: float) -> int:
    """round() with .5 always moving away from zero, for nonnegative x."""
    if x < 0:
        raise ValueError("only defined for nonnegative values here")
    return int(math.floor(x + 0.5))


def distance(a, b, norm: NormKind = L2) -> float:
    """p-norm distance between two feature vectors of equal dimension."""
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    if a.shape != b.shape:
        raise ValueError(f"dimensionality mismatch: {a.shape} vs {b.shape}")
    diff = np.abs(a - b)
    if norm.p == 1.0:
        return float(diff.sum())
    if norm.p == 2.0:
        return float(np.sqrt(np.square(diff).sum()))
    return float(np.power(diff, norm.p).sum() ** (1.0 / norm.p))


def pairwise_distances(points, pool, norm: NormKind = L2) -> np.ndarray:
    """Distance matrix of shape (len(points), len(pool))."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    pool = np.atleast_2d(np.asarray(pool, dtype=float))
    if points.shape[1] != pool.shape[1]:
        raise ValueError(
            f"dimensionality mismatch: {points.shape[1]} vs {pool.shape[1]}"
        )
    diff = np.abs(points[:, None, :] - pool[None, :, :])
    if norm.p == 1.0:
        return diff.sum(axis=2)
    if norm.p == 2.0:
        return np.sqrt(np.square(diff).sum(axis=2))
    return np.power(diff, norm.p).sum(axis=2) ** (1.0 / norm.p)


def k_nearest_neighbors(query, pool, k: int, norm: NormKind = L2,
                        include_self: bool = True) -> np.ndarray:
    """Indices of the k nearest pool rows, distance ascending.

    Ties are broken by ascending row index, and k is clamped to the number
    of available rows.  ``query`` may be a row index into ``pool`` or a
    bare vector; with ``include_self=False`` the query row itself (for an
    index query) or any row exactly equal to the query vector is excluded.
    """
    pool = np.atleast_2d(np.asarray(pool, dtype=float))
    n = pool.shape[0]
    if n == 0:
        raise ValueError("neighbor pool is empty")
    if k < 1:
        raise ValueError("k must be >= 1")

    if isinstance(query, (int, np.integer)):
        self_index = int(query)
        vector = pool[self_index]
    else:
        self_index = None
        vector = np.asarray(query, dtype=float).ravel()

    dists = pairwise_distances(vector[None, :], pool, norm)[0]
    order = np.lexsort((np.arange(n), dists))
    if not include_self:
        if self_index is not None:
            order = order[order != self_index]
        else:
            equal = np.all(pool == vector[None, :], axis=1)
            order = order[~equal[order]]
    return order[: min(k, len(order))]


def split_by_class(ds: Dataset) -> dict:
    """Map each label to the ascending list of its row indices."""
    out: dict = {}
    for i, label in enumerate(ds.labels):
        out.setdefault(label, []).append(i)
    return {label: np.array(idx, dtype=int) for label, idx in out.items()}


def stratified_k_fold(ds: Dataset, folds: int, rng) -> list:
    """Class-stratified folds: list of (train_indices, test_indices).

    Every class is spread across the test folds as evenly as possible
    (fold counts differ by at most one).  Classes are processed in sorted
    label order so the draw sequence, and therefore the folds, are fully
    determined by the seed.
    """
    if folds < 2:
        raise ValueError("folds must be >= 2")
    rng = as_random_source(rng)
    by_class = split_by_class(ds)
    for label, idx in by_class.items():
        if len(idx) < folds:
            raise ValueError(
                f"class {label!r} has only {len(idx)} observations, "
                f"fewer than {folds} folds"
            )
    test_chunks = [[] for _ in range(folds)]
    for label in sorted(by_class, key=str):
        permuted = rng.permutation(by_class[label])
        for f, chunk in enumerate(np.array_split(permuted, folds)):
            test_chunks[f].extend(chunk.tolist())
    all_indices = np.arange(ds.n)
    result = []
    for chunk in test_chunks:
        test = np.array(sorted(chunk), dtype=int)
        mask = np.ones(ds.n, dtype=bool)
        mask[test] = False
        result.append((all_indices[mask], test))
    return result
