"""Random draws and deterministic representation points from a discrete posterior.

The random route uses inverse-CDF lookup over the cumulative masses, driven
by the splitmix64 generator (Steele, Lea & Flood 2014): output k is
mix(seed + (k+1) * 0x9E3779B97F4A7C15) with the standard two-round
xor-multiply mix, mapped to (0, 1) doubles via the top 53 bits.  The
generator is stateless in k, so substreams for worker partitions derive
deterministically from (seed, partition start).

The deterministic route walks the quantile grid u_j = (2j-1)/(2N) through
the cumulative masses with a resumable forward scan (O(M+N)): atom i is
emitted while u_j falls in [q_{i-1}, q_i), so selected indices never move
backward and zero-mass atoms (empty intervals) are skipped naturally.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dacore import DiscretePosterior

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


def splitmix64(seed: int, n: int, start: int = 0) -> np.ndarray:
    """n consecutive splitmix64 outputs for stream positions start..start+n-1."""
    k = np.arange(start + 1, start + n + 1, dtype=np.uint64)
    z = np.uint64(seed & 0xFFFFFFFFFFFFFFFF) + k * _GAMMA
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


def uniforms(seed: int, n: int, start: int = 0) -> np.ndarray:
    """n doubles in (0, 1): top 53 bits of splitmix64, offset by 2^-54."""
    bits = splitmix64(seed, n, start)
    return (bits >> np.uint64(11)).astype(np.float64) * 2.0**-53 + 2.0**-54


def draw(dp: DiscretePosterior, n: int, seed: int) -> np.ndarray:
    """n independent categorical draws from dp, materialized as support rows.

    Identical (dp, n, seed) give identical output on every platform.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    u = uniforms(seed, n)
    cum = np.cumsum(dp.masses)
    idx = np.searchsorted(cum, u, side="right")
    idx = np.minimum(idx, dp.m - 1)
    return dp.support[idx]


@dataclass
class RepresentationPointSet:
    """Deterministic size-N compression of a discrete posterior."""

    points: np.ndarray
    multiplicities: dict
    n: int
    jitter_scale: float = 0.0
    atom_indices: np.ndarray = field(default=None, repr=False)

    def to_csv(self, path) -> None:
        """Points with a multiplicity column.

        Without jitter, one row per distinct atom; with jitter every point
        is distinct, so each row carries multiplicity 1.
        """
        if self.jitter_scale > 0.0:
            body = np.column_stack([self.points, np.ones(len(self.points))])
        else:
            idx = np.array(sorted(self.multiplicities), dtype=int)
            counts = np.array([self.multiplicities[i] for i in idx], dtype=float)
            first = {}
            for row, i in enumerate(self.atom_indices):
                first.setdefault(int(i), row)
            rows = np.array([first[int(i)] for i in idx])
            body = np.column_stack([self.points[rows], counts])
        np.savetxt(path, body, delimiter=",", fmt="%.17g")


def representation_points(
    dp: DiscretePosterior, n: int, jitter_seed: int | None = None
) -> RepresentationPointSet:
    """Representation points X_j = a_{i_j} for the grid u_j = (2j-1)/(2N).

    i_j is the minimal index >= i_{j-1} with u_j in [q_{i_j - 1}, q_{i_j});
    if floating-point accumulation leaves u_j at or above q_M, the point is
    clamped to the last positive-mass atom.  With ``jitter_seed`` set, each
    coordinate gets independent uniform noise of half-width 1/(2N), clipped
    to the target support.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    q = np.concatenate([[0.0], np.cumsum(dp.masses)])
    u = (2.0 * np.arange(1, n + 1) - 1.0) / (2.0 * n)
    last_positive = int(np.flatnonzero(dp.masses > 0.0)[-1])
    idx = np.empty(n, dtype=np.int64)
    i = 1
    for j in range(n):
        while i <= dp.m and not (q[i - 1] <= u[j] < q[i]):
            i += 1
        idx[j] = last_positive if i > dp.m else i - 1
        if i > dp.m:
            i = dp.m  # stay resumable after a clamp
    points = dp.support[idx].copy()
    jitter_scale = 0.0
    if jitter_seed is not None:
        jitter_scale = 1.0 / (2.0 * n)
        noise = uniforms(jitter_seed, points.size).reshape(points.shape)
        points += jitter_scale * (2.0 * noise - 1.0)
        points = _clip_to_support(points, dp.support_signature)
    mult = {}
    for i in idx:
        mult[int(i)] = mult.get(int(i), 0) + 1
    return RepresentationPointSet(
        points=points, multiplicities=mult, n=n, jitter_scale=jitter_scale, atom_indices=idx
    )


def _clip_to_support(points: np.ndarray, signature) -> np.ndarray:
    if not signature:
        return points
    tiny = np.finfo(np.float64).tiny
    for j, sig in enumerate(signature):
        if sig == "positive":
            points[:, j] = np.maximum(points[:, j], tiny)
        elif isinstance(sig, tuple) and sig[0] == "interval":
            points[:, j] = np.clip(points[:, j], sig[1], sig[2])
    return points
