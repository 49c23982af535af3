"""Radial-based oversampling and undersampling.

Oversampling hill-climbs synthetic points toward the zero level set of
the mutual class potential, evaluated over a frozen nearest-neighbor
approximation of each seed's surroundings.  Undersampling repeatedly
discards the majority observation with the highest mutual potential,
keeping the remaining potentials current with cheap incremental updates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .data import L1, L2, NormKind, as_random_source, k_nearest_neighbors, \
    pairwise_distances
from .potential import PotentialParams, potential


@dataclass(frozen=True)
class RboParams:
    """Hill-climbing controls for radial oversampling.

    gamma: RBF spread; step: length of one axis-aligned move; iterations:
    moves attempted per synthetic point; k: neighborhood size used to
    approximate the potential; early_stop_prob: chance of abandoning the
    climb at each iteration (0 disables and consumes no draws); norm:
    distance used inside the potential (L1 classically).
    """

    gamma: float
    step: float
    iterations: int
    k: int
    early_stop_prob: float = 0.0
    norm: NormKind = L1

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValueError("gamma must be positive")
        if not self.step > 0:
            raise ValueError("step must be positive")
        if self.iterations < 0:
            raise ValueError("iterations must be >= 0")
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if not 0.0 <= self.early_stop_prob <= 1.0:
            raise ValueError("early_stop_prob must lie in [0, 1]")


@dataclass(frozen=True)
class RbuParams:
    """Radial undersampling controls: RBF spread and removal ratio.

    ratio=1 removes majority observations until the classes balance;
    intermediate ratios remove the corresponding fraction of the deficit.
    The norm defaults to L2, matching the incremental update term.
    """

    gamma: float
    ratio: float
    norm: NormKind = L2

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValueError("gamma must be positive")
        if not 0.0 <= self.ratio <= 1.0:
            raise ValueError("ratio must lie in [0, 1]")


def _climb(x0, Xmaj_nb, Xmin_nb, params: RboParams, rng):
    """Hill-climb one synthetic point; returns (point, |potential| history).

    Draw order per iteration: optional early-stop uniform (only when
    early_stop_prob > 0), axis index, sign.
    """
    pot = PotentialParams(params.gamma, params.norm)
    x = np.array(x0, dtype=float)
    m = x.shape[0]
    current = potential(x, Xmaj_nb, pot) - potential(x, Xmin_nb, pot)
    history = [abs(current)]
    for _ in range(params.iterations):
        if params.early_stop_prob > 0 and rng.uniform() < params.early_stop_prob:
            break
        axis = int(rng.integers(m))
        sign = 1.0 if rng.integers(2) else -1.0
        candidate = x.copy()
        candidate[axis] += sign * params.step
        proposed = (potential(candidate, Xmaj_nb, pot)
                    - potential(candidate, Xmin_nb, pot))
        if abs(proposed) < abs(current):
            x = candidate
            current = proposed
        history.append(abs(current))
    return x, history


def rbo(Xmaj, Xmin, params: RboParams, rng) -> np.ndarray:
    """Generate majority-minus-minority many synthetic minority points.

    Each point starts at a randomly chosen minority observation and moves
    in random axis-aligned steps, keeping only moves that strictly shrink
    the absolute mutual potential over the seed's k-neighborhood (drawn
    from the full dataset once, seed included, and never refreshed).
    Synthetic points never feed back into the potential.
    """
    Xmaj = np.atleast_2d(np.asarray(Xmaj, dtype=float))
    Xmin = np.atleast_2d(np.asarray(Xmin, dtype=float))
    n_maj, n_min = Xmaj.shape[0], Xmin.shape[0]
    if n_min < 1:
        raise ValueError("minority class is empty")
    if n_maj <= n_min:
        raise ValueError("majority class must be strictly larger than minority")
    rng = as_random_source(rng)

    pool = np.vstack([Xmaj, Xmin])
    k = min(params.k, pool.shape[0])
    neighborhoods = []
    for i in range(n_min):
        idx = k_nearest_neighbors(pool[n_maj + i], pool, k, params.norm,
                                  include_self=True)
        neighborhoods.append((pool[idx[idx < n_maj]], pool[idx[idx >= n_maj]]))

    deficit = n_maj - n_min
    synthetic = np.zeros((deficit, Xmin.shape[1]))
    for s in range(deficit):
        seed = int(rng.integers(n_min))
        maj_nb, min_nb = neighborhoods[seed]
        synthetic[s], _ = _climb(Xmin[seed], maj_nb, min_nb, params, rng)
    return synthetic


def rbu(majority, minority, params: RbuParams) -> np.ndarray:
    """Remove ceil(ratio * (majority - minority count)) majority rows.

    Removal always takes the currently highest mutual-potential
    observation (ties going to the lowest row index); after each removal
    the surviving potentials are decremented by the removed observation's
    RBF term, which keeps them exactly equal to a full recomputation.
    Fully deterministic: no randomness is involved.
    """
    K = np.atleast_2d(np.asarray(majority, dtype=float))
    kappa = np.atleast_2d(np.asarray(minority, dtype=float))
    if params.ratio == 0.0:
        return K.copy()
    if K.shape[0] <= kappa.shape[0]:
        raise ValueError(
            "majority must be strictly larger than minority when ratio > 0")

    removals = math.ceil(params.ratio * (K.shape[0] - kappa.shape[0]))
    gamma = params.gamma

    within = np.exp(-np.square(pairwise_distances(K, K, params.norm) / gamma))
    phi = within.sum(axis=1)
    if kappa.shape[0]:
        against = np.exp(
            -np.square(pairwise_distances(K, kappa, params.norm) / gamma))
        phi = phi - against.sum(axis=1)

    alive = np.ones(K.shape[0], dtype=bool)
    for _ in range(removals):
        masked = np.where(alive, phi, -np.inf)
        target = int(np.argmax(masked))  # argmax takes the lowest tied index
        alive[target] = False
        phi = phi - within[:, target]
    return K[alive]
