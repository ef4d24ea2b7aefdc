"""Shamir's threshold scheme over GF(2^l), plus two relatives.

The basic scheme hides a secret s as the constant term of a random
polynomial P(x) = s + p_1 x + ... + p_{t-1} x^{t-1}; party i holds
P(gamma_i). Any t shares recover s by Lagrange interpolation at 0, and in
characteristic 2 the usual alternating signs disappear, so recovery is a
plain linear combination s = sum c_i s_i.

Also here: the all-ones additive scheme (s is the XOR of all N shares) and
the collusion reduction, which rewrites a scheme conditioned on t' known
shares as a smaller scheme over the remaining parties.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dataclass_field

from .field import FieldSpec, gf_inv, gf_mul


class ThresholdError(ValueError):
    """Too few shares to meet the reconstruction threshold."""


@dataclass(frozen=True)
class ShamirParams:
    """Parameters of one Shamir instance: field, party count, threshold, points."""

    spec: FieldSpec
    N: int
    t: int
    gammas: tuple[int, ...]

    def __post_init__(self) -> None:
        if not 1 <= self.t <= self.N:
            raise ValueError(f"need 1 <= t <= N, got t={self.t}, N={self.N}")
        if self.N > self.spec.order - 1:
            raise ValueError(
                f"N={self.N} parties need N distinct nonzero points, "
                f"but GF(2^{self.spec.l}) has only {self.spec.order - 1}"
            )
        if len(self.gammas) != self.N:
            raise ValueError(f"expected {self.N} evaluation points, got {len(self.gammas)}")
        self.spec.validate(*self.gammas)
        if 0 in self.gammas:
            raise ValueError("evaluation points must be nonzero (0 would expose the secret)")
        if len(set(self.gammas)) != self.N:
            raise ValueError("evaluation points must be pairwise distinct")

    @classmethod
    def with_default_points(cls, spec: FieldSpec, N: int, t: int) -> "ShamirParams":
        """Evaluation points gamma_i = i for i = 1..N."""
        return cls(spec, N, t, tuple(range(1, N + 1)))

    def to_config(self) -> dict:
        return {
            "kind": "shamir",
            "N": self.N,
            "t": self.t,
            "gammas": list(self.gammas),
            "field": self.spec.to_config(),
        }


def _eval_poly(secret: int, coeffs: tuple[int, ...], x: int, spec: FieldSpec) -> int:
    """P(x) for P = secret + coeffs[0] x + coeffs[1] x^2 + ... (Horner)."""
    acc = 0
    for c in reversed(coeffs):
        acc = gf_mul(acc ^ c, x, spec)
    return acc ^ secret


def share(
    secret: int,
    params: ShamirParams,
    coeffs: tuple[int, ...] | None = None,
    seed: int | None = None,
) -> tuple[int, ...]:
    """Split a secret into N shares.

    Either pass the t-1 polynomial coefficients explicitly (deterministic
    mode) or pass a seed and they are drawn uniformly. Randomness always
    requires an explicit seed so every experiment is reproducible.
    """
    params.spec.validate(secret)
    if coeffs is not None and seed is not None:
        raise ValueError("pass either explicit coeffs or a seed, not both")
    if coeffs is None:
        if params.t == 1:
            coeffs = ()
        elif seed is None:
            raise ValueError("random sharing requires an explicit seed")
        else:
            rng = random.Random(seed)
            coeffs = tuple(rng.randrange(params.spec.order) for _ in range(params.t - 1))
    coeffs = tuple(coeffs)
    if len(coeffs) != params.t - 1:
        raise ValueError(f"expected {params.t - 1} coefficients, got {len(coeffs)}")
    params.spec.validate(*coeffs)
    return tuple(_eval_poly(secret, coeffs, g, params.spec) for g in params.gammas)


def lagrange_coefficients(points: tuple[int, ...], spec: FieldSpec) -> tuple[int, ...]:
    """Multipliers c_i with P(0) = sum c_i P(points_i) for deg(P) < len(points).

    c_i = prod_{j != i} points_j / (points_i + points_j). As a sanity anchor
    the coefficients XOR-interpolate the constant polynomial 1, so they always
    sum to 1.
    """
    if len(points) == 0:
        raise ValueError("need at least one interpolation point")
    spec.validate(*points)
    if 0 in points:
        raise ValueError("interpolation points must be nonzero")
    if len(set(points)) != len(points):
        raise ValueError("interpolation points must be distinct")
    out = []
    for i, gi in enumerate(points):
        c = 1
        for j, gj in enumerate(points):
            if j == i:
                continue
            c = gf_mul(c, gf_mul(gj, gf_inv(gi ^ gj, spec), spec), spec)
        out.append(c)
    return tuple(out)


def reconstruct(points_and_shares: list[tuple[int, int]], params: ShamirParams) -> int:
    """Recover the secret from at least t (point, share) pairs.

    Interpolates through every pair given, which coincides with any t-subset
    interpolation when the shares come from a genuine sharing.
    """
    if len(points_and_shares) < params.t:
        raise ThresholdError(
            f"got {len(points_and_shares)} shares, threshold is {params.t}"
        )
    pts = tuple(p for p, _ in points_and_shares)
    if len(set(pts)) != len(pts):
        raise ValueError("duplicate evaluation points")
    for p in pts:
        if p not in params.gammas:
            raise ValueError(f"point {p} is not one of the scheme's evaluation points")
    cs = lagrange_coefficients(pts, params.spec)
    out = 0
    for c, (_, s) in zip(cs, points_and_shares):
        out ^= gf_mul(c, s, params.spec)
    return out


def vandermonde_inverse_first_row(params: ShamirParams) -> tuple[int, ...]:
    """Recovery coefficients via the Vandermonde matrix, for t = N.

    Builds V[i][j] = gammas_i^j, inverts it by Gaussian elimination over
    GF(2^l), and returns the first row of the inverse. Deliberately a second
    algorithm for the same vector as lagrange_coefficients, kept independent
    so the two can cross-check each other.
    """
    if params.t != params.N:
        raise ValueError("Vandermonde recovery row is defined for t = N")
    spec = params.spec
    n = params.N
    # V[i][j] = gamma_i^j, then eliminate on [V | I].
    aug = []
    for i, g in enumerate(params.gammas):
        row = []
        p = 1
        for _ in range(n):
            row.append(p)
            p = gf_mul(p, g, spec)
        row.extend(1 if k == i else 0 for k in range(n))
        aug.append(row)
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise RuntimeError("singular Vandermonde matrix; points were not distinct")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = gf_inv(aug[col][col], spec)
        aug[col] = [gf_mul(inv, v, spec) for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a ^ gf_mul(f, b, spec) for a, b in zip(aug[r], aug[col])]
    # Inverse sits in the right half; its row 0 maps shares to P(0).
    return tuple(aug[0][n:])


@dataclass(frozen=True)
class LinearScheme:
    """A linear N-party scheme with a full-set recovery rule s = sum c_i s_i.

    kind "shamir" wraps ShamirParams; kind "all_ones" is the additive scheme
    where the first N-1 shares are uniform i.i.d. and the last one completes
    the XOR. all_shares() enumerates, for a fixed secret, every equally
    likely share vector, which is what the exact-enumeration oracle consumes.
    """

    spec: FieldSpec
    N: int
    t: int
    recovery_coefficients: tuple[int, ...]
    kind: str
    params: ShamirParams | None = None

    @classmethod
    def from_shamir(cls, params: ShamirParams) -> "LinearScheme":
        cs = lagrange_coefficients(params.gammas, params.spec)
        return cls(params.spec, params.N, params.t, cs, "shamir", params)

    def randomness_count(self) -> int:
        """Number of equally likely share vectors per secret."""
        if self.kind == "shamir":
            return self.spec.order ** (self.t - 1)
        return self.spec.order ** (self.N - 1)

    def all_shares(self, secret: int) -> list[tuple[int, ...]]:
        """Every share vector for this secret, each with equal probability."""
        self.spec.validate(secret)
        q = self.spec.order
        if self.kind == "shamir":
            return [
                share(secret, self.params, coeffs=cs)
                for cs in itertools.product(range(q), repeat=self.t - 1)
            ]
        out = []
        for head in itertools.product(range(q), repeat=self.N - 1):
            last = secret
            for s in head:
                last ^= s
            out.append(head + (last,))
        return out

    def to_config(self) -> dict:
        if self.kind == "shamir":
            return self.params.to_config()
        return {"kind": "all_ones", "N": self.N, "field": self.spec.to_config()}


def all_ones_scheme(N: int, spec: FieldSpec) -> LinearScheme:
    """Additive N-out-of-N scheme with recovery equation s = s_1 ^ ... ^ s_N."""
    if N < 1:
        raise ValueError("need at least one party")
    return LinearScheme(spec, N, N, (1,) * N, "all_ones")


def _interpolate_eval(
    points: tuple[int, ...], values: tuple[int, ...], x: int, spec: FieldSpec
) -> int:
    """Evaluate at x the unique degree < len(points) polynomial through the pairs."""
    out = 0
    for j, (gj, vj) in enumerate(zip(points, values)):
        term = vj
        for m, gm in enumerate(points):
            if m == j:
                continue
            term = gf_mul(term, gf_mul(x ^ gm, gf_inv(gj ^ gm, spec), spec), spec)
        out ^= term
    return out


@dataclass(frozen=True)
class ReducedScheme:
    """A Shamir scheme conditioned on t' known shares, as a scheme in its own right.

    Fixing the shares of a set C of t' parties restricts the sharing
    polynomial to a coset G + h*Q, where h(x) = prod_{j in C} (x + gamma_j),
    G interpolates the known values on C, and Q is a fresh uniform polynomial
    of degree < t - t'. Each remaining share is then an invertible affine
    image of a fresh ShamirSS(N-t', t-t') share:

        s_i = h(gamma_i) * Q(gamma_i) + G(gamma_i),
        Q(0) = (s + G(0)) / h(0)  (the remapped secret).

    all_shares() takes the original secret and produces the conditional
    distribution of the honest share vector, so the enumeration oracle can
    check this description against the original scheme directly.
    """

    params: ShamirParams  # the reduced (N - t', t - t') instance on honest points
    alphas: tuple[int, ...]  # h(gamma_i) per honest party, all nonzero
    betas: tuple[int, ...]  # G(gamma_i) per honest party
    secret_mul: int  # 1 / h(0)
    secret_add: int  # G(0)

    @property
    def spec(self) -> FieldSpec:
        return self.params.spec

    @property
    def N(self) -> int:
        return self.params.N

    @property
    def t(self) -> int:
        return self.params.t

    def map_secret(self, secret: int) -> int:
        """The reduced scheme's secret corresponding to an original secret."""
        return gf_mul(secret ^ self.secret_add, self.secret_mul, self.spec)

    def randomness_count(self) -> int:
        return self.spec.order ** (self.params.t - 1)

    def all_shares(self, secret: int) -> list[tuple[int, ...]]:
        """Conditional honest-share vectors for an original secret, equally likely."""
        self.spec.validate(secret)
        inner = LinearScheme.from_shamir(self.params)
        mapped = self.map_secret(secret)
        spec = self.spec
        out = []
        for vec in inner.all_shares(mapped):
            out.append(
                tuple(
                    gf_mul(a, v, spec) ^ b
                    for a, v, b in zip(self.alphas, vec, self.betas)
                )
            )
        return out


def collusion_reduce(
    params: ShamirParams,
    colluders: tuple[int, ...],
    colluder_shares: tuple[int, ...],
) -> ReducedScheme:
    """Condition a Shamir scheme on the shares of t' < t colluding parties.

    colluders are 0-based party indices; colluder_shares their observed
    values. Returns the equivalent ShamirSS(N-t', t-t') description over the
    honest parties (see ReducedScheme). With no colluders this is the
    original scheme unchanged.
    """
    t_prime = len(colluders)
    if t_prime != len(colluder_shares):
        raise ValueError("one share value per colluder required")
    if len(set(colluders)) != t_prime:
        raise ValueError("duplicate colluder indices")
    for idx in colluders:
        if not 0 <= idx < params.N:
            raise ValueError(f"colluder index {idx} out of range")
    if t_prime >= params.t:
        raise ValueError("colluders can reconstruct the secret")
    params.spec.validate(*colluder_shares)

    spec = params.spec
    c_points = tuple(params.gammas[i] for i in colluders)
    honest = tuple(i for i in range(params.N) if i not in set(colluders))
    honest_points = tuple(params.gammas[i] for i in honest)

    def h_at(x: int) -> int:
        out = 1
        for g in c_points:
            out = gf_mul(out, x ^ g, spec)
        return out

    def g_at(x: int) -> int:
        if t_prime == 0:
            return 0
        return _interpolate_eval(c_points, colluder_shares, x, spec)

    reduced = ShamirParams(spec, params.N - t_prime, params.t - t_prime, honest_points)
    return ReducedScheme(
        params=reduced,
        alphas=tuple(h_at(g) for g in honest_points),
        betas=tuple(g_at(g) for g in honest_points),
        secret_mul=gf_inv(h_at(0), spec),
        secret_add=g_at(0),
    )
