"""Entropy machinery: binary entropy and its inverse, the star convolution,
Mrs. Gerber's lower bound, and exact Shannon quantities on finite joints.

Everything is in bits (base-2 logs) with the convention 0 * log 0 = 0.
Probabilities are clamped at 1e-300 before taking logs so a denormal cannot
turn into a NaN.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_LOG_FLOOR = 1e-300
_SUM_TOL = 1e-12


def binary_entropy(p: float) -> float:
    """h(p) = -p log2 p - (1-p) log2 (1-p)."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability out of range: {p}")
    if p == 0.0 or p == 1.0:
        return 0.0
    return -p * math.log2(max(p, _LOG_FLOOR)) - (1.0 - p) * math.log2(max(1.0 - p, _LOG_FLOOR))


def binary_entropy_inv(y: float) -> float:
    """The unique p in [0, 1/2] with h(p) = y, by bisection.

    h is strictly increasing on [0, 1/2], so bisection is total; 200 rounds
    shrink the bracket far below double precision.
    """
    if not 0.0 <= y <= 1.0:
        raise ValueError(f"entropy out of range: {y}")
    if y == 0.0:
        return 0.0
    if y == 1.0:
        return 0.5
    lo, hi = 0.0, 0.5
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if binary_entropy(mid) < y:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-16:
            break
    return 0.5 * (lo + hi)


def star(a: float, b: float) -> float:
    """Binary convolution a * (1-b) + b * (1-a): the flip rate of an XOR of
    two independent Bernoulli bits. Commutative and associative, with 0 as
    identity and 1/2 absorbing."""
    if not 0.0 <= a <= 1.0 or not 0.0 <= b <= 1.0:
        raise ValueError(f"probabilities out of range: {a}, {b}")
    return a * (1.0 - b) + b * (1.0 - a)


def star_iter(q: float, n: int) -> float:
    """n-fold star of q with itself: (1 - (1-2q)^n) / 2.

    n = 0 returns 0 by convention (an empty XOR is the constant 0).
    """
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"probability out of range: {q}")
    if n < 0:
        raise ValueError("negative fold count")
    if n == 0:
        return 0.0
    return 0.5 * (1.0 - (1.0 - 2.0 * q) ** n)


def mgl_lower_bound(cond_entropies: list[float]) -> float:
    """Mrs. Gerber's lower bound on H of an XOR of independent bits.

    Given H(A_i | B_i) for independent pairs (A_i, B_i), returns
    h(star over i of h^{-1}(H(A_i|B_i))), a lower bound on
    H(A_0 ^ ... ^ A_{n-1} | B_0..B_{n-1}). The two-term case is the classic
    statement; associativity of star gives the n-ary fold.
    """
    if len(cond_entropies) == 0:
        raise ValueError("need at least one conditional entropy")
    acc = 0.0
    for y in cond_entropies:
        if not 0.0 <= y <= 1.0:
            raise ValueError(f"conditional entropy out of range: {y}")
        acc = star(acc, binary_entropy_inv(y))
    return binary_entropy(acc)


# ----------------------------------------------------------------------
# Finite distributions
# ----------------------------------------------------------------------

def _validated(p: np.ndarray, ndim: int) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.ndim != ndim:
        raise ValueError(f"expected {ndim}-dimensional probabilities, got shape {p.shape}")
    if np.any(p < 0.0):
        raise ValueError("negative probability entry")
    if abs(float(p.sum()) - 1.0) > _SUM_TOL:
        raise ValueError(f"probabilities sum to {float(p.sum())}, not 1")
    return p


@dataclass(frozen=True, eq=False)
class DiscreteDistribution:
    """Probabilities over a finite indexed outcome set."""

    p: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", _validated(self.p, 1))

    @classmethod
    def uniform(cls, n: int) -> "DiscreteDistribution":
        return cls(np.full(n, 1.0 / n))

    @classmethod
    def point(cls, n: int, index: int) -> "DiscreteDistribution":
        p = np.zeros(n)
        p[index] = 1.0
        return cls(p)

    def __len__(self) -> int:
        return len(self.p)


@dataclass(frozen=True, eq=False)
class JointDistribution:
    """Probabilities over a product outcome set A x B (rows are A)."""

    p: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", _validated(self.p, 2))

    def marginal_a(self) -> np.ndarray:
        return self.p.sum(axis=1)

    def marginal_b(self) -> np.ndarray:
        return self.p.sum(axis=0)


def _as_array(dist) -> np.ndarray:
    return dist.p if hasattr(dist, "p") else np.asarray(dist, dtype=float)


def entropy(dist) -> float:
    """H of a distribution (DiscreteDistribution or raw probability array)."""
    p = _as_array(dist).ravel()
    nz = p[p > 0.0]
    return float(-np.sum(nz * np.log2(np.maximum(nz, _LOG_FLOOR))))


def conditional_entropy(joint) -> float:
    """H(A | B) from a joint with rows indexed by A, columns by B."""
    p = _as_array(joint)
    pb = p.sum(axis=0)
    total = 0.0
    for j in range(p.shape[1]):
        if pb[j] <= 0.0:
            continue
        col = p[:, j]
        nz = col[col > 0.0]
        total -= float(np.sum(nz * np.log2(np.maximum(nz / pb[j], _LOG_FLOOR))))
    return total


def mutual_information(joint) -> float:
    """I(A; B) from a joint, computed in relative-entropy form.

    Sum of p(a,b) log2( p(a,b) / (p(a) p(b)) ), which keeps floating error
    from driving the result materially negative.
    """
    p = _as_array(joint)
    pa = p.sum(axis=1)
    pb = p.sum(axis=0)
    prod = np.outer(pa, pb)
    mask = p > 0.0
    vals = p[mask] * np.log2(np.maximum(p[mask], _LOG_FLOOR) / np.maximum(prod[mask], _LOG_FLOOR))
    return float(np.sum(vals))
