"""Low-discrepancy support point sets on the unit hypercube.

Three generators are provided:

* ``sobol_points`` -- the Sobol' sequence in Gray-code order, driven by an
  embedded direction-number table (Joe & Kuo new-joe-kuo-6 values) for up to
  100 dimensions.  By default the leading all-zeros point is skipped.
* ``halton_points`` -- the Halton sequence with the first 50 primes as bases.
* ``midpoint_grid_1d`` -- the one-dimensional grid {(2i-1)/(2M)}, i.e. the
  minimax-distance design on [0, 1].

All outputs are plain float64 arrays; generation is deterministic, so two
calls with the same arguments return bit-identical points.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .exceptions import CapacityError

_SOBOL_MAX_DIM = 100
_SOBOL_BITS = 30
_HALTON_MAX_DIM = 50

# First 50 primes, bases for the Halton sequence.
_PRIMES = (
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67,
    71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131, 137, 139,
    149, 151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223,
    227, 229,
)


@dataclass
class SupportPointSet:
    """An ordered set of points in [0, 1)^d with generation provenance.

    Attributes
    ----------
    points : ndarray, shape (M, d)
        The points, one per row.
    generator : str
        One of ``"sobol"``, ``"halton"``, ``"midpoint1d"``, ``"user"``.
    skip : int
        Number of leading sequence points dropped before ``points`` begins.
    """

    points: np.ndarray
    generator: str
    skip: int = 0

    def __post_init__(self):
        pts = np.ascontiguousarray(np.atleast_2d(np.asarray(self.points, dtype=np.float64)))
        if pts.ndim != 2 or pts.shape[0] < 1:
            raise ValueError("points must form a nonempty (M, d) array")
        if np.any(pts < 0.0) or np.any(pts >= 1.0):
            raise ValueError("every coordinate must lie in [0, 1)")
        self.points = pts

    @property
    def m(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def to_csv(self, path) -> None:
        """Write one row per point, d columns, 17 significant digits."""
        np.savetxt(path, self.points, delimiter=",", fmt="%.17g")


def from_array(points) -> SupportPointSet:
    """Wrap a user-supplied array of unit-hypercube points."""
    return SupportPointSet(points=np.asarray(points, dtype=np.float64), generator="user", skip=0)


@dataclass
class _SobolTables:
    poly_degree: np.ndarray
    poly_coeff: np.ndarray
    minit: list = field(default_factory=list)


def _load_sobol_tables() -> _SobolTables:
    deg = [0]  # dimension 1: van der Corput, no polynomial needed
    coeff = [0]
    minit = [[]]
    text = resources.files("qda.data").joinpath("joe_kuo_d100.txt").read_text()
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#") or line.startswith("d "):
            continue
        vals = [int(v) for v in line.split()]
        d, s, a = vals[0], vals[1], vals[2]
        assert d == len(deg) + 1, "table rows must be consecutive dimensions"
        deg.append(s)
        coeff.append(a)
        minit.append(vals[3 : 3 + s])
    return _SobolTables(np.array(deg), np.array(coeff), minit)


_TABLES: _SobolTables | None = None


def _direction_integers(d: int) -> np.ndarray:
    """Direction integers V[j, k] (dimension j, bit k) scaled to _SOBOL_BITS."""
    global _TABLES
    if _TABLES is None:
        _TABLES = _load_sobol_tables()
    nbits = _SOBOL_BITS
    V = np.zeros((d, nbits), dtype=np.uint64)
    # dimension 1: van der Corput in base 2
    V[0, :] = [1 << (nbits - k) for k in range(1, nbits + 1)]
    for j in range(1, d):
        s = int(_TABLES.poly_degree[j])
        a = int(_TABLES.poly_coeff[j])
        m = list(_TABLES.minit[j])
        for k in range(s + 1, nbits + 1):
            new = m[k - s - 1] ^ (m[k - s - 1] << s)
            for i in range(1, s):
                if (a >> (s - 1 - i)) & 1:
                    new ^= m[k - i - 1] << i
            m.append(new)
        V[j, :] = [m[k - 1] << (nbits - k) for k in range(1, nbits + 1)]
    return V


def sobol_points(m: int, d: int, skip: int = 1) -> SupportPointSet:
    """Points ``skip .. skip+m-1`` of the d-dimensional Sobol' sequence.

    The sequence is in Gray-code order (point 0 is the origin), so the
    default ``skip=1`` drops the all-zeros point.  Deterministic across runs
    and platforms; the direction numbers ship with the package.

    Parameters
    ----------
    m : int
        Number of points, >= 1.
    d : int
        Dimension, 1..100.
    skip : int
        Leading points to drop, >= 0.
    """
    if m < 1 or skip < 0:
        raise ValueError("m must be >= 1 and skip >= 0")
    if not 1 <= d <= _SOBOL_MAX_DIM:
        raise CapacityError(f"sobol supports 1 <= d <= {_SOBOL_MAX_DIM}, got {d}")
    if skip + m > (1 << _SOBOL_BITS):
        raise CapacityError(f"skip + m exceeds the 2^{_SOBOL_BITS} sequence capacity")
    V = _direction_integers(d)
    idx = np.arange(skip, skip + m, dtype=np.uint64)
    gray = idx ^ (idx >> np.uint64(1))
    acc = np.zeros((m, d), dtype=np.uint64)
    for bit in range(_SOBOL_BITS):
        mask = (gray >> np.uint64(bit)) & np.uint64(1)
        acc ^= mask[:, None] * V[:, bit][None, :]
    pts = acc.astype(np.float64) / float(1 << _SOBOL_BITS)
    return SupportPointSet(points=pts, generator="sobol", skip=skip)


def _radical_inverse(idx: np.ndarray, base: int) -> np.ndarray:
    out = np.zeros(idx.shape, dtype=np.float64)
    denom = 1.0
    i = idx.copy()
    while np.any(i > 0):
        denom *= base
        i, digit = np.divmod(i, base)
        out += digit / denom
    return out


def halton_points(m: int, d: int, start: int = 1) -> SupportPointSet:
    """First m Halton points; coordinate j is the radical inverse in the
    j-th prime base of the 1-based point index.

    ``start`` shifts the first index used and exists so that multi-stage
    runs can take disjoint slices of the sequence.
    """
    if m < 1 or start < 1:
        raise ValueError("m must be >= 1 and start >= 1")
    if not 1 <= d <= _HALTON_MAX_DIM:
        raise CapacityError(f"halton supports 1 <= d <= {_HALTON_MAX_DIM}, got {d}")
    idx = np.arange(start, start + m, dtype=np.int64)
    pts = np.empty((m, d), dtype=np.float64)
    for j in range(d):
        pts[:, j] = _radical_inverse(idx, _PRIMES[j])
    return SupportPointSet(points=pts, generator="halton", skip=start - 1)


def midpoint_grid_1d(m: int) -> SupportPointSet:
    """The strictly increasing grid {(2i-1)/(2M)}, i = 1..M, on [0, 1]."""
    if m < 1:
        raise ValueError("m must be >= 1")
    i = np.arange(1, m + 1, dtype=np.float64)
    pts = ((2.0 * i - 1.0) / (2.0 * m))[:, None]
    return SupportPointSet(points=pts, generator="midpoint1d", skip=0)
