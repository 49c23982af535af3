"""Multiclass resampling through iterative class decomposition.

Classes are processed from largest to smallest; each one is resampled as
a binary problem against a combined majority assembled from an equal
number of randomly drawn observations per strictly larger class.  Later
classes therefore see the synthetic observations (and, for the cleaning
variant, the translations) produced for earlier ones.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .ccr import CcrParams, ccr
from .data import Dataset, as_random_source, split_by_class
from .radial import RboParams, rbo


@dataclass(frozen=True)
class ClassOrder:
    """Labels sorted by descending observation count, size ties broken by
    the lexical order of the label text."""

    labels: tuple
    counts: tuple

    @classmethod
    def of(cls, labels) -> "ClassOrder":
        labels = np.asarray(labels)
        unique, counts = np.unique(labels, return_counts=True)
        order = sorted(range(len(unique)),
                       key=lambda i: (-counts[i], str(unique[i])))
        return cls(tuple(unique[i] for i in order),
                   tuple(int(counts[i]) for i in order))

    def larger_than(self, position: int) -> int:
        """Number of classes with strictly more observations than the
        class at this position."""
        size = self.counts[position]
        return sum(1 for c in self.counts if c > size)


def _draw_quota(pool_size: int, quota: int, rng) -> np.ndarray:
    """Indices for a without-replacement draw of ``quota`` from the pool;
    any shortfall is topped up with replacement (and warned about)."""
    if pool_size >= quota:
        return rng.choice(pool_size, size=quota, replace=False)
    warnings.warn(
        f"combined-majority quota {quota} exceeds pool of {pool_size}; "
        "drawing the shortfall with replacement", stacklevel=3)
    extra = rng.integers(pool_size, size=quota - pool_size)
    return np.concatenate([np.arange(pool_size), extra])


def combined_majority(ds: Dataset, class_position: int, synthetic_pools: dict,
                      rng) -> np.ndarray:
    """Assemble the binary majority for the class at ``class_position`` in
    the descending size order.

    Each strictly larger class contributes floor(largest class size /
    number of larger classes) rows, drawn without replacement from its
    originals plus its synthetic pool.
    """
    rng = as_random_source(rng)
    order = ClassOrder.of(ds.labels)
    n_larger = order.larger_than(class_position)
    if n_larger < 1:
        raise ValueError("the largest class has no combined majority")
    by_class = split_by_class(ds)
    quota = order.counts[0] // n_larger

    blocks = []
    for j in range(n_larger):
        label = order.labels[j]
        pool = ds.features[by_class[label]]
        synth = synthetic_pools.get(label)
        if synth is not None and len(synth):
            pool = np.vstack([pool, np.atleast_2d(synth)])
        blocks.append(pool[_draw_quota(pool.shape[0], quota, rng)])
    return np.vstack(blocks)


def mc_rbo(ds: Dataset, params: RboParams, rng, return_info: bool = False):
    """Radial oversampling for every non-largest class.

    Returns a dict mapping each label to its synthetic observations (the
    largest class maps to an empty array).  Classes are processed largest
    first; the combined majority for a class draws from the originals and
    the already generated synthetics of every strictly larger class.
    With ``return_info`` a per-class record of how many drawn
    combined-majority rows were synthetic is returned alongside.
    """
    rng = as_random_source(rng)
    order = ClassOrder.of(ds.labels)
    by_class = split_by_class(ds)
    m = ds.m

    pools: dict = {label: np.zeros((0, m)) for label in order.labels}
    info = []
    for position, label in enumerate(order.labels):
        n_larger = order.larger_than(position)
        if n_larger == 0:
            continue
        quota = order.counts[0] // n_larger
        blocks = []
        drawn_synthetic = {}
        for j in range(n_larger):
            src = order.labels[j]
            originals = ds.features[by_class[src]]
            pool = np.vstack([originals, pools[src]])
            picks = _draw_quota(pool.shape[0], quota, rng)
            drawn_synthetic[src] = int((picks >= originals.shape[0]).sum())
            blocks.append(pool[picks])
        majority = np.vstack(blocks)
        minority = ds.features[by_class[label]]
        if majority.shape[0] > minority.shape[0]:
            pools[label] = rbo(majority, minority, params, rng)
        info.append({"label": label, "majority_size": majority.shape[0],
                     "synthetic_drawn": drawn_synthetic})
    if return_info:
        return pools, info
    return pools


def mc_ccr(ds: Dataset, params: CcrParams, rng, return_info: bool = False):
    """Cleaning and resampling for every non-largest class.

    Synthetic observations are appended to the dataset under their
    generating label, so later classes can draw them into their combined
    majorities; drawn majority rows are written back at their translated
    positions, later translations of the same row overwriting earlier
    ones.  Rows never drawn into any combined majority are untouched.
    """
    rng = as_random_source(rng)
    order = ClassOrder.of(ds.labels)
    quota_base = order.counts[0]

    features = ds.features.copy()
    labels = list(ds.labels)
    class_indices = {label: list(idx) for label, idx in split_by_class(ds).items()}

    info = []
    for position, label in enumerate(order.labels):
        n_larger = order.larger_than(position)
        if n_larger == 0:
            continue
        quota = quota_base // n_larger
        drawn: list = []
        for j in range(n_larger):
            src_rows = np.array(class_indices[order.labels[j]], dtype=int)
            picks = _draw_quota(len(src_rows), quota, rng)
            drawn.extend(src_rows[picks].tolist())
        drawn = np.array(drawn, dtype=int)
        minority_rows = np.array(class_indices[label], dtype=int)
        if len(drawn) <= len(minority_rows):
            info.append({"label": label, "drawn": drawn, "synthetic": (0, 0)})
            continue
        translated, synthetic = ccr(features[drawn], features[minority_rows],
                                    params, rng)
        features[drawn] = translated
        start = len(labels)
        if len(synthetic):
            features = np.vstack([features, synthetic])
            labels.extend([label] * len(synthetic))
            class_indices[label].extend(range(start, start + len(synthetic)))
        info.append({"label": label, "drawn": drawn,
                     "synthetic": (start, start + len(synthetic))})

    result = Dataset(features, np.asarray(labels, dtype=ds.labels.dtype))
    if return_info:
        return result, info
    return result
