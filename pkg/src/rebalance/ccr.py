"""Combined cleaning and resampling.

Spherical regions grow around every minority observation on a fixed
energy budget, with the expansion cost scaling with the number of
majority observations already enclosed.  Enclosed majority observations
are pushed to the sphere boundary and synthetic minority points are
drawn inside the spheres, more of them for the smaller (harder) spheres.
The radial variant additionally partitions each sphere into low / equal /
high minority-potential regions and restricts sampling to one of them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import L2, NormKind, RandomSource, as_random_source, distance, \
    pairwise_distances
from .potential import PotentialParams, batch_potential, potential

SAMPLING_REGIONS = ("L", "E", "H", "LEH")


@dataclass(frozen=True)
class CcrParams:
    """Energy budget for sphere expansion plus the distance norm."""

    energy: float
    norm: NormKind = L2

    def __post_init__(self):
        if not self.energy > 0:
            raise ValueError(f"energy must be positive, got {self.energy}")


@dataclass
class SphereExpansion:
    """One minority-centered sphere: final radius and how many majority
    observations its expansion consumed."""

    center: np.ndarray
    radius: float
    consumed: int


def expand_sphere(center, sorted_distances, energy: float) -> SphereExpansion:
    """Grow a sphere around ``center`` until the energy budget is spent.

    ``sorted_distances`` are the ascending distances to the majority
    observations.  Reaching the next observation costs (gap to it) times
    the count of observations reached so far including it; when the
    budget cannot cover a full step the radius grows by the affordable
    fraction and expansion stops.  Leftover budget after the last
    observation keeps buying radius at the final rate, and with no
    majority at all the whole budget converts to radius at rate one.
    """
    center = np.asarray(center, dtype=float)
    d = np.asarray(sorted_distances, dtype=float).ravel()
    if energy < 0:
        raise ValueError("energy must be nonnegative")
    if d.size and np.any(np.diff(d) < 0):
        raise ValueError("distances must be sorted ascending")

    if d.size == 0:
        return SphereExpansion(center, float(energy), 0)

    radius = 0.0
    e = float(energy)
    n_r = 0
    consumed = 0
    for d_j in d:
        n_r += 1
        delta = (d_j - radius) * n_r
        if e - delta > 0:
            radius = float(d_j)
            e -= delta
            consumed += 1
        else:
            radius += e / n_r
            return SphereExpansion(center, radius, consumed)
    # every majority observation consumed, leftover budget still buys radius
    radius += e / n_r
    return SphereExpansion(center, radius, consumed)


def compute_translations(Xmaj, spheres, norm: NormKind = L2,
                         rng: RandomSource | None = None) -> np.ndarray:
    """Accumulated push-out vectors for majority observations.

    Every majority observation strictly inside a sphere is pushed radially
    onto its boundary; overlapping spheres simply add their push vectors.
    A majority observation exactly coincident with a sphere center has no
    radial direction, so a uniformly random one is drawn (requires rng).
    The caller applies the result once: Xmaj + t.
    """
    Xmaj = np.atleast_2d(np.asarray(Xmaj, dtype=float))
    t = np.zeros_like(Xmaj)
    for sphere in spheres:
        if sphere.radius <= 0:
            continue
        dists = pairwise_distances(sphere.center[None, :], Xmaj, norm)[0]
        for j in np.flatnonzero(dists < sphere.radius):
            d_j = dists[j]
            if d_j == 0.0:
                if rng is None:
                    raise ValueError(
                        "majority observation coincides with a sphere center; "
                        "a RandomSource is required to pick a push direction"
                    )
                direction = rng.standard_normal(Xmaj.shape[1])
                while not np.any(direction):
                    direction = rng.standard_normal(Xmaj.shape[1])
                t[j] += direction * (sphere.radius / distance(
                    direction, np.zeros_like(direction), norm))
            else:
                t[j] += (sphere.radius - d_j) / d_j * (Xmaj[j] - sphere.center)
    return t


def proportional_sample_counts(radii, n_maj: int, n_min: int) -> np.ndarray:
    """How many synthetic points each sphere generates.

    The class-size deficit is split proportionally to inverse radius
    (smaller spheres breed more points) and floored, so the total can fall
    short of the deficit by less than the number of spheres.
    """
    radii = np.asarray(radii, dtype=float).ravel()
    if np.any(radii <= 0):
        raise ValueError("all sphere radii must be positive")
    if n_maj < n_min:
        raise ValueError("majority class must not be smaller than minority")
    deficit = n_maj - n_min
    weights = (1.0 / radii) / (1.0 / radii).sum()
    return np.floor(weights * deficit).astype(int)


def sample_inside_ball(center, radius: float, count: int, rng) -> np.ndarray:
    """Uniform draws from an L2 ball: Gaussian direction times radius
    times U^(1/m).  Draw order: standard_normal((count, m)), uniform(count)."""
    center = np.asarray(center, dtype=float)
    m = center.shape[0]
    if count == 0:
        return np.zeros((0, m))
    directions = rng.standard_normal((count, m))
    norms = np.linalg.norm(directions, axis=1)
    while np.any(norms == 0):  # probability-zero guard
        redo = norms == 0
        directions[redo] = rng.standard_normal((int(redo.sum()), m))
        norms = np.linalg.norm(directions, axis=1)
    radii = radius * rng.uniform(size=count) ** (1.0 / m)
    return center[None, :] + directions / norms[:, None] * radii[:, None]


def _expand_all_spheres(Xmaj, Xmin, energy, norm):
    spheres = []
    for x_i in Xmin:
        dists = pairwise_distances(x_i[None, :], Xmaj, norm)[0]
        order = np.lexsort((np.arange(len(dists)), dists))
        spheres.append(expand_sphere(x_i, dists[order], energy))
    return spheres


def _check_binary_input(Xmaj, Xmin):
    Xmaj = np.atleast_2d(np.asarray(Xmaj, dtype=float))
    Xmin = np.atleast_2d(np.asarray(Xmin, dtype=float))
    if Xmin.shape[0] == 0:
        raise ValueError("minority class is empty")
    if Xmaj.shape[0] == 0:
        raise ValueError("majority class is empty")
    if Xmaj.shape[0] < Xmin.shape[0]:
        raise ValueError("majority class must not be smaller than minority")
    if Xmaj.shape[1] != Xmin.shape[1]:
        raise ValueError("class feature dimensions differ")
    return Xmaj, Xmin


def ccr(Xmaj, Xmin, params: CcrParams, rng):
    """Energy-based cleaning plus proportional oversampling.

    Returns (translated majority, synthetic minority points).  The
    majority count never changes; enclosed majority observations are only
    translated.  Synthetic points are drawn uniformly inside the sphere of
    their generating minority observation.
    """
    Xmaj, Xmin = _check_binary_input(Xmaj, Xmin)
    rng = as_random_source(rng)

    spheres = _expand_all_spheres(Xmaj, Xmin, params.energy, params.norm)
    translated = Xmaj + compute_translations(Xmaj, spheres, params.norm, rng)

    counts = proportional_sample_counts(
        [s.radius for s in spheres], Xmaj.shape[0], Xmin.shape[0])
    synthetic = [sample_inside_ball(s.center, s.radius, g, rng)
                 for s, g in zip(spheres, counts)]
    synthetic = (np.vstack(synthetic) if synthetic
                 else np.zeros((0, Xmin.shape[1])))
    return translated, synthetic


def guided_sample(x, r: float, Xmin, gamma: float, region: str, c: int, n: int,
                  rng, norm: NormKind = L2) -> np.ndarray:
    """Draw n synthetic points from one potential region of an r-ball.

    c uniform candidates estimate the range of minority potential inside
    the ball; the range splits into low / equal / high thirds around the
    potential of the center itself.  Points are then drawn with
    replacement from the candidates falling in the requested region, with
    the center always available as a fallback.  Region "LEH" skips the
    partitioning entirely and draws fresh uniform points from the ball,
    which reproduces the plain energy-based sampling law draw for draw.
    """
    if region not in SAMPLING_REGIONS:
        raise ValueError(f"region must be one of {SAMPLING_REGIONS}, got {region!r}")
    if c < 1:
        raise ValueError("candidate count c must be >= 1")
    if n < 0:
        raise ValueError("sample count n must be >= 0")
    x = np.asarray(x, dtype=float)
    rng = as_random_source(rng)

    if region == "LEH":
        return sample_inside_ball(x, r, n, rng)

    candidates = sample_inside_ball(x, r, c, rng)
    params = PotentialParams(gamma, norm)
    z = batch_potential(candidates, Xmin, params)
    phi_center = potential(x, Xmin, params)
    bound_low = phi_center - (phi_center - z.min()) / 3.0
    bound_high = phi_center + (z.max() - phi_center) / 3.0

    if region == "L":
        keep = z < bound_low
    elif region == "H":
        keep = z > bound_high
    else:
        keep = (z >= bound_low) & (z <= bound_high)

    suitable = np.vstack([x[None, :], candidates[keep]])
    picks = rng.integers(suitable.shape[0], size=n)
    return suitable[picks]


def rb_ccr(Xmaj, Xmin, energy: float, gamma: float, region: str = "H",
           c: int = 100, rng=None):
    """Cleaning identical to plain ccr under the L2 norm, with synthetic
    points drawn by the potential-guided sampler instead of uniformly."""
    Xmaj, Xmin = _check_binary_input(Xmaj, Xmin)
    if rng is None:
        raise ValueError("an rng (RandomSource or seed) is required")
    params = CcrParams(energy, L2)
    rng = as_random_source(rng)

    spheres = _expand_all_spheres(Xmaj, Xmin, params.energy, params.norm)
    translated = Xmaj + compute_translations(Xmaj, spheres, params.norm, rng)

    counts = proportional_sample_counts(
        [s.radius for s in spheres], Xmaj.shape[0], Xmin.shape[0])
    synthetic = [guided_sample(s.center, s.radius, Xmin, gamma, region, c, g, rng)
                 for s, g in zip(spheres, counts)]
    synthetic = (np.vstack(synthetic) if synthetic
                 else np.zeros((0, Xmin.shape[1])))
    return translated, synthetic
