"""Prototype-based resampling that preserves the shape of the class
potential.

Synthetic observations (prototypes) start as copies of randomly chosen
originals plus jitter, then move under gradient descent so that their
normalized potential at a fixed set of anchor points matches the
normalized potential of the original class.  A displacement penalty on
the oversampled class keeps prototypes from collapsing back onto their
starting copies.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import L1, L2, NormKind, as_random_source, pairwise_distances, \
    round_half_away_from_zero
from .potential import PotentialParams, normalized_potential

ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8
KMEANS_MAX_ITER = 300


@dataclass(frozen=True)
class PaParams:
    """ratio: share of the class-size deficit fixed by oversampling;
    k: anchor count; iterations: optimizer steps; gamma: RBF spread
    (shared by the potential and the displacement penalty); lam:
    displacement penalty weight for the oversampled class; alpha: learning
    rate; epsilon: half-width of the uniform initialization jitter;
    psi_norm: norm inside the normalized potential (L1 classically)."""

    ratio: float = 0.5
    k: int = 10
    iterations: int = 100
    gamma: float = 1.0
    lam: float = 0.01
    alpha: float = 0.1
    epsilon: float = 1e-3
    psi_norm: NormKind = L1

    def __post_init__(self):
        if not 0.0 <= self.ratio <= 1.0:
            raise ValueError("ratio must lie in [0, 1]")
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.iterations < 0:
            raise ValueError("iterations must be >= 0")
        if not self.gamma > 0:
            raise ValueError("gamma must be positive")
        if self.lam < 0:
            raise ValueError("lambda must be >= 0")
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")
        if self.epsilon < 0:
            raise ValueError("epsilon must be >= 0")


@dataclass
class PrototypeSet:
    """Current prototype positions alongside their starting copies."""

    P: np.ndarray
    P0: np.ndarray

    def __post_init__(self):
        self.P = np.atleast_2d(np.asarray(self.P, dtype=float))
        self.P0 = np.atleast_2d(np.asarray(self.P0, dtype=float))
        if self.P.shape != self.P0.shape:
            raise ValueError("P and P0 must have identical shapes")


def generate_anchors(X, k: int, rng) -> np.ndarray:
    """k-means centroids of X (Lloyd iterations to an assignment fixpoint).

    Initialization draws k distinct rows without replacement; clusters
    that lose every member keep their previous centroid.  Deterministic
    given the seed.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    n = X.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"anchor count must lie in [1, {n}], got {k}")
    rng = as_random_source(rng)

    centroids = X[rng.choice(n, size=k, replace=False)].copy()
    assignment = np.full(n, -1)
    for _ in range(KMEANS_MAX_ITER):
        d = pairwise_distances(X, centroids, L2)
        new_assignment = np.argmin(d, axis=1)
        if np.array_equal(new_assignment, assignment):
            break
        assignment = new_assignment
        for j in range(k):
            members = X[assignment == j]
            if members.shape[0]:
                centroids[j] = members.mean(axis=0)
    return centroids


def _rbf_matrix(anchors, P, gamma, norm):
    """exp(-(d/gamma)^2) for every anchor (rows) against every prototype
    (columns), plus the distances it was built from."""
    d = pairwise_distances(anchors, P, norm)
    return np.exp(-np.square(d / gamma)), d


def resemblance_loss(X, anchors, P, P0, gamma: float, lam: float,
                     psi_norm: NormKind = L1) -> float:
    """Squared mismatch of normalized anchor potentials plus the
    displacement penalty lam * sum(exp(-(|P - P0|_2 / gamma)^2))."""
    anchors = np.atleast_2d(np.asarray(anchors, dtype=float))
    P = np.atleast_2d(np.asarray(P, dtype=float))
    P0 = np.atleast_2d(np.asarray(P0, dtype=float))
    params = PotentialParams(gamma, psi_norm)
    target = normalized_potential(X, anchors, params)
    produced = normalized_potential(P, anchors, params)
    mse = float(np.square(target - produced).sum())
    if lam == 0.0 or P.shape[0] == 0:
        return mse
    displacement = np.linalg.norm(P - P0, axis=1)
    return mse + lam * float(np.exp(-np.square(displacement / gamma)).sum())


def loss_gradient(X, anchors, P, P0, gamma: float, lam: float,
                  psi_norm: NormKind = L1) -> np.ndarray:
    """Analytic gradient of the resemblance loss with respect to P.

    When every prototype potential underflows to zero the mismatch term
    is flat at machine precision and its gradient contribution is zero.
    """
    anchors = np.atleast_2d(np.asarray(anchors, dtype=float))
    P = np.atleast_2d(np.asarray(P, dtype=float))
    P0 = np.atleast_2d(np.asarray(P0, dtype=float))
    if P.shape[0] == 0:
        return np.zeros_like(P)
    params = PotentialParams(gamma, psi_norm)
    grad = np.zeros_like(P)

    phi, d = _rbf_matrix(anchors, P, gamma, psi_norm)   # (k, q)
    total = phi.sum()
    if total > 0.0:
        target = normalized_potential(X, anchors, params)
        psi = phi.sum(axis=1) / total
        mismatch = psi - target
        # d(mse)/d(phi_ij) = (2/total) * (mismatch_i - sum_l mismatch_l psi_l)
        coef = (2.0 / total) * (mismatch - float(mismatch @ psi))
        if psi_norm.p == 2.0:
            weighted = coef[:, None] * phi                       # (k, q)
            grad += (-2.0 / gamma ** 2) * (
                P * weighted.sum(axis=0)[:, None] - weighted.T @ anchors)
        elif psi_norm.p == 1.0:
            signs = np.sign(P[None, :, :] - anchors[:, None, :])  # (k, q, m)
            w = coef[:, None] * d * phi                           # (k, q)
            grad += (-2.0 / gamma ** 2) * np.einsum("ij,ijd->jd", w, signs)
        else:
            raise ValueError(
                "analytic gradient supports the L1 and L2 norms only")

    if lam > 0.0:
        offset = P - P0
        displacement = np.linalg.norm(offset, axis=1)
        reg = np.exp(-np.square(displacement / gamma))
        grad += lam * (-2.0 / gamma ** 2) * reg[:, None] * offset
    return grad


def optimize_prototypes(X, anchors, P0, params: PaParams, lam: float,
                        rng) -> np.ndarray:
    """Jitter the starting copies, then run the configured number of Adam
    steps against the resemblance loss.  Returns the final positions."""
    P0 = np.atleast_2d(np.asarray(P0, dtype=float))
    rng = as_random_source(rng)
    P = P0 + rng.uniform(-params.epsilon, params.epsilon, size=P0.shape)
    if P.shape[0] == 0:
        return P

    m1 = np.zeros_like(P)
    m2 = np.zeros_like(P)
    for t in range(1, params.iterations + 1):
        g = loss_gradient(X, anchors, P, P0, params.gamma, lam, params.psi_norm)
        m1 = ADAM_BETA1 * m1 + (1 - ADAM_BETA1) * g
        m2 = ADAM_BETA2 * m2 + (1 - ADAM_BETA2) * np.square(g)
        m1_hat = m1 / (1 - ADAM_BETA1 ** t)
        m2_hat = m2 / (1 - ADAM_BETA2 ** t)
        P = P - params.alpha * m1_hat / (np.sqrt(m2_hat) + ADAM_EPS)
    return P


def pa(Xmaj, Xmin, params: PaParams, rng):
    """Balance the classes with potential-preserving prototypes.

    The deficit splits into round(ratio * deficit) synthetic minority
    prototypes (appended to the originals, displacement-penalized) and a
    replacement majority of n_maj - remaining-deficit prototypes
    (unpenalized).  Returns (new majority, new minority); both classes end
    at exactly n_min + n_over observations.

    Anchor count is clamped to the dataset size so small folds survive.
    """
    Xmaj = np.atleast_2d(np.asarray(Xmaj, dtype=float))
    Xmin = np.atleast_2d(np.asarray(Xmin, dtype=float))
    n_maj, n_min = Xmaj.shape[0], Xmin.shape[0]
    if n_min < 1 or n_maj < 1:
        raise ValueError("both classes must be nonempty")
    if n_maj < n_min:
        raise ValueError("majority class must not be smaller than minority")
    rng = as_random_source(rng)

    everything = np.vstack([Xmaj, Xmin])
    anchors = generate_anchors(everything, min(params.k, everything.shape[0]),
                               rng)

    deficit = n_maj - n_min
    n_over = round_half_away_from_zero(params.ratio * deficit)
    n_under = n_maj - (deficit - n_over)

    proto0_min = Xmin[rng.integers(n_min, size=n_over)]
    proto0_maj = Xmaj[rng.integers(n_maj, size=n_under)]
    protos_min = optimize_prototypes(Xmin, anchors, proto0_min, params,
                                     params.lam, rng)
    protos_maj = optimize_prototypes(Xmaj, anchors, proto0_maj, params, 0.0,
                                     rng)
    return protos_maj, np.vstack([Xmin, protos_min])
