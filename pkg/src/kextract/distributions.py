"""Dense distributions over n-bit strings and min-entropy geometry.

Masses live in a read-only float64 array indexed by string value. All
sizes here are tiny (n <= 16), so exhaustive formulas are preferred over
sampling throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

MASS_TOL = 1e-12


@dataclass(frozen=True)
class Distribution:
    """A probability distribution over all 2^n strings of length n."""

    n: int
    mass: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.mass, dtype=np.float64, copy=True)
        if arr.shape != (1 << self.n,):
            raise ValueError(f"mass must have shape ({1 << self.n},)")
        if (arr < 0).any():
            raise ValueError("negative mass")
        if abs(float(arr.sum()) - 1.0) > MASS_TOL:
            raise ValueError(f"mass sums to {arr.sum()!r}, not 1")
        arr.setflags(write=False)
        object.__setattr__(self, "mass", arr)

    @classmethod
    def uniform(cls, n: int) -> "Distribution":
        size = 1 << n
        return cls(n, np.full(size, 1.0 / size))

    @classmethod
    def point(cls, n: int, a: int) -> "Distribution":
        arr = np.zeros(1 << n)
        arr[a] = 1.0
        return cls(n, arr)


@dataclass(frozen=True)
class FlatSource:
    """Uniform distribution on an explicit support set."""

    n: int
    support: tuple[int, ...]

    def __post_init__(self) -> None:
        sup = tuple(sorted(set(self.support)))
        if not sup:
            raise ValueError("flat source needs a nonempty support")
        if sup[0] < 0 or sup[-1] >= (1 << self.n):
            raise ValueError("support value out of range")
        object.__setattr__(self, "support", sup)

    @property
    def size(self) -> int:
        return len(self.support)

    def to_distribution(self) -> Distribution:
        arr = np.zeros(1 << self.n)
        arr[list(self.support)] = 1.0 / len(self.support)
        return Distribution(self.n, arr)


def min_entropy(d: Distribution) -> float:
    """-log2 of the largest point mass."""
    return float(-np.log2(d.mass.max()))


def statistical_distance(a: Distribution, b: Distribution) -> float:
    """Half the L1 distance between the mass vectors."""
    if a.n != b.n:
        raise ValueError("distributions live on different lengths")
    return float(0.5 * np.abs(a.mass - b.mass).sum())


def one_sided_distance(a: Distribution, b: Distribution) -> float:
    """Total overshoot of a over b; equals statistical_distance exactly."""
    if a.n != b.n:
        raise ValueError("distributions live on different lengths")
    return float(np.maximum(a.mass - b.mass, 0.0).sum())


def heavy_set(d: Distribution, k: int, t: float) -> set[int]:
    """Values whose mass strictly exceeds t * 2^-k."""
    if t <= 0:
        raise ValueError("t must be positive")
    return set(int(v) for v in np.flatnonzero(d.mass > t * 2.0 ** (-k)))


def flatten_top(d: Distribution, top_k: int) -> tuple[Distribution, float]:
    """Average the top_k heaviest masses in place.

    Ties are broken toward smaller values. Returns the flattened
    distribution and its min-entropy; the averaged mass is the new
    maximum, so the min-entropy is -log2(top mass sum / top_k).
    """
    size = d.mass.size
    if not 1 <= top_k <= size:
        raise ValueError(f"top_k must be in [1, {size}]")
    order = np.lexsort((np.arange(size), -d.mass))
    top = order[:top_k]
    avg = float(d.mass[top].sum()) / top_k
    arr = d.mass.copy()
    arr[top] = avg
    flattened = Distribution(d.n, arr)
    return flattened, float(-np.log2(avg))


def dist_to_min_entropy(d: Distribution, k: int) -> float:
    """Exact statistical distance from d to the min-entropy-k ball.

    The nearest distribution with all masses <= 2^-k clips every
    overshoot and redistributes it under the cap, so the distance is
    sum_a max(mass(a) - 2^-k, 0). Requires k <= n or the ball is empty.
    """
    if not 0 <= k <= d.n:
        raise ValueError(f"k must be in [0, {d.n}]")
    return float(np.maximum(d.mass - 2.0 ** (-k), 0.0).sum())


def dist_to_json(d: Distribution) -> dict:
    """{n, mass: [...]} with masses as decimal strings.

    repr() round-trips float64 exactly, so fixture files never drift.
    """
    return {"n": d.n, "mass": [repr(float(v)) for v in d.mass]}


def dist_from_json(doc: dict) -> Distribution:
    return Distribution(int(doc["n"]), np.array([float(s) for s in doc["mass"]]))


def push_forward(table, x: FlatSource, y: FlatSource) -> Distribution:
    """Output distribution of a two-source table on independent flat sources.

    Each (a, b) in the support product is equally likely, so the mass of
    color z is its census in the support rectangle divided by the
    rectangle size.
    """
    if x.n != table.n or y.n != table.n:
        raise ValueError("flat source length does not match the table")
    grid = table.colors[np.ix_(list(x.support), list(y.support))]
    counts = np.bincount(grid.ravel().astype(np.int64), minlength=1 << table.m)
    return Distribution(table.m, counts / grid.size)
