"""Leakage channel models.

A channel is a dense row-stochastic matrix P(out | in). Shares leak through
per-share channels that act independently, so joints across shares (and
across the bits of one share) are Kronecker products. Alphabet indices
follow the field convention: an input index is the share's integer value,
and in product constructions the earlier factor occupies the more
significant digits.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .infotheory import binary_entropy, binary_entropy_inv

_ROW_TOL = 1e-12

DEFAULT_ENUMERATION_CAP = 1 << 24
_CAP_ENV_VAR = "SHAMIRLEAK_ENUM_CAP"


class EnumerationCapError(RuntimeError):
    """An exact enumeration would exceed the configured state-space cap."""


def enumeration_cap() -> int:
    """Current cap on exact-enumeration work, overridable via environment."""
    raw = os.environ.get(_CAP_ENV_VAR)
    if raw is None:
        return DEFAULT_ENUMERATION_CAP
    cap = int(raw)
    if cap < 1:
        raise ValueError(f"{_CAP_ENV_VAR} must be a positive integer")
    return cap


@dataclass(frozen=True, eq=False)
class Channel:
    """Discrete memoryless channel as a row-stochastic matrix."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=float)
        if m.ndim != 2:
            raise ValueError(f"channel matrix must be 2-dimensional, got shape {m.shape}")
        if np.any(m < 0.0):
            raise ValueError("negative transition probability")
        rows = m.sum(axis=1)
        if np.any(np.abs(rows - 1.0) > _ROW_TOL):
            raise ValueError("channel rows must each sum to 1")
        object.__setattr__(self, "matrix", m)

    @property
    def input_size(self) -> int:
        return self.matrix.shape[0]

    @property
    def output_size(self) -> int:
        return self.matrix.shape[1]

    def to_config(self) -> dict:
        return {"kind": "matrix", "rows": self.matrix.tolist()}


def bsc(q: float) -> Channel:
    """Binary symmetric channel flipping the bit with probability q."""
    if not 0.0 <= q <= 0.5:
        raise ValueError(f"crossover probability must be in [0, 1/2], got {q}")
    return Channel(np.array([[1.0 - q, q], [q, 1.0 - q]]))


def identity_channel(n: int) -> Channel:
    """Perfect leak: output equals input."""
    return Channel(np.eye(n))


def uniform_channel(n_in: int, n_out: int) -> Channel:
    """Completely noisy: output independent of input."""
    return Channel(np.full((n_in, n_out), 1.0 / n_out))


def null_channel(n_in: int) -> Channel:
    """Single-output channel: the share is not observed at all."""
    return Channel(np.ones((n_in, 1)))


def per_bit_channel(base: Channel, l: int) -> Channel:
    """Apply a binary-input channel independently to each of l bits.

    Input index is the l-bit integer; output index has one base-output digit
    per bit, most significant digit for bit l-1. Transition probabilities
    multiply across bits.
    """
    if base.input_size != 2:
        raise ValueError("per-bit base channel must have binary input")
    if l < 1:
        raise ValueError("need at least one bit")
    m = np.ones((1, 1))
    for _ in range(l):
        m = np.kron(base.matrix, m)
    return Channel(m)


def product_channel(channels: list[Channel]) -> Channel:
    """Independent channels side by side, on the product alphabet.

    Index layout: the first channel occupies the most significant digits of
    both the input and output index.
    """
    if len(channels) == 0:
        raise ValueError("need at least one channel")
    in_size = math.prod(c.input_size for c in channels)
    out_size = math.prod(c.output_size for c in channels)
    if in_size * out_size > enumeration_cap():
        raise EnumerationCapError(
            f"state space too large: {in_size} x {out_size} product-channel entries "
            f"exceed the cap of {enumeration_cap()}"
        )
    m = np.ones((1, 1))
    for c in channels:
        m = np.kron(m, c.matrix)
    return Channel(m)


def bsc_eps(q: float) -> float:
    """Per-bit leakage rate of BSC(q): its capacity 1 - h(q)."""
    if not 0.0 <= q <= 0.5:
        raise ValueError(f"crossover probability must be in [0, 1/2], got {q}")
    return 1.0 - binary_entropy(q)


def q_from_eps(eps: float) -> float:
    """Crossover probability of the BSC with per-bit leakage rate eps."""
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"leakage rate must be in [0, 1], got {eps}")
    return binary_entropy_inv(1.0 - eps)


def channel_leakage_rate(
    channel: Channel, l: int, tol: float = 1e-9, max_iters: int = 10_000
) -> float:
    """Worst-case per-bit leakage rate: channel capacity divided by l.

    Capacity is computed by Blahut-Arimoto ascent with the standard
    sandwich stopping rule: for the current input distribution r, the
    per-letter divergences D(x) give sum r(x) D(x) <= C <= max_x D(x), and
    iteration stops when the gap closes below tol. The max over input
    distributions is what makes the rate valid for every secret
    distribution at once.
    """
    if channel.input_size != (1 << l):
        raise ValueError(
            f"channel input size {channel.input_size} does not match 2^{l}"
        )
    p = channel.matrix
    n = channel.input_size
    r = np.full(n, 1.0 / n)
    mask = p > 0.0
    logp = np.zeros_like(p)
    logp[mask] = np.log2(p[mask])
    for _ in range(max_iters):
        out = r @ p
        # D(x) = sum_y p(y|x) log2( p(y|x) / out(y) ); r stays strictly
        # positive under the multiplicative update, so out(y) > 0 wherever
        # some p(y|x) > 0 and the clamp below never bites on the support.
        logout = np.log2(np.maximum(out, 1e-300))
        d = np.sum(np.where(mask, p * (logp - logout[np.newaxis, :]), 0.0), axis=1)
        upper = float(np.max(d))
        lower = float(np.dot(r, d))
        if upper - lower <= tol:
            return max(lower, 0.0) / l
        r = r * np.exp2(d - upper)
        r /= r.sum()
    raise RuntimeError(
        f"capacity iteration did not converge within {max_iters} iterations"
    )


@dataclass(frozen=True)
class LeakageProfile:
    """Per-honest-share leakage rates plus the scheme shape they apply to."""

    eps: tuple[float, ...]
    l: int
    N: int
    t: int
    t_prime: int

    def __post_init__(self) -> None:
        if not 0 <= self.t_prime < self.t:
            raise ValueError(f"need 0 <= t' < t, got t'={self.t_prime}, t={self.t}")
        if self.t > self.N:
            raise ValueError(f"threshold {self.t} exceeds party count {self.N}")
        if len(self.eps) != self.N - self.t_prime:
            raise ValueError(
                f"expected {self.N - self.t_prime} honest-share rates, got {len(self.eps)}"
            )
        for e in self.eps:
            if not 0.0 <= e <= 1.0:
                raise ValueError(f"leakage rate out of range: {e}")
