"""Exact brute-force ground truth for leakage quantities.

Everything here enumerates: the joint distribution of (secret, leakages) is
assembled by walking every equally likely share vector and every channel
transition, never by sampling. The resulting mutual informations are the
reference values that the closed-form bounds are checked against, so they
must be deterministic and tight; probabilities are accumulated with
compensated (Kahan) summation in a fixed iteration order.
"""
from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass

import numpy as np

from .channels import Channel, EnumerationCapError, bsc, enumeration_cap, identity_channel, per_bit_channel
from .infotheory import mutual_information
from .scheme import LinearScheme, ReducedScheme, ShamirParams


@dataclass(frozen=True)
class ExactLeakageResult:
    """Exact leakage of one scheme/channel/distribution configuration.

    space is the number of entries in the stored joint (secrets times joint
    leakage outcomes); ms is wall time, reported for scale but excluded from
    any determinism comparison.
    """

    total_mi: float
    per_bit_mi: tuple[float, ...]
    space: int
    ms: int

    def to_json(self) -> str:
        return json.dumps(
            {
                "total_mi": float(f"{self.total_mi:.12g}"),
                "per_bit_mi": [float(f"{v:.12g}") for v in self.per_bit_mi],
                "space": self.space,
                "ms": self.ms,
            }
        )


def _as_scheme(scheme) -> LinearScheme | ReducedScheme:
    if isinstance(scheme, ShamirParams):
        return LinearScheme.from_shamir(scheme)
    if isinstance(scheme, (LinearScheme, ReducedScheme)):
        return scheme
    raise TypeError(f"not a scheme: {scheme!r}")


def _kahan_add(acc: np.ndarray, comp: np.ndarray, term: np.ndarray) -> None:
    """One compensated-summation step, elementwise over numpy arrays."""
    y = term - comp
    t = acc + y
    comp[...] = (t - acc) - y
    acc[...] = t


def leakage_matrix(scheme, channels: list[Channel]) -> np.ndarray:
    """Conditional distribution P(leakage | secret) as a dense matrix.

    Row s is the distribution of the joint leakage vector given secret s,
    averaged over the scheme's randomness. Column index packs the per-share
    outputs with share 0 in the most significant digits (the same layout as
    product_channel).
    """
    sch = _as_scheme(scheme)
    if len(channels) != sch.N:
        raise ValueError(f"expected {sch.N} per-share channels, got {len(channels)}")
    q = sch.spec.order
    for ch in channels:
        if ch.input_size != q:
            raise ValueError(
                f"channel input size {ch.input_size} does not match field order {q}"
            )
    total_out = math.prod(ch.output_size for ch in channels)
    count = sch.randomness_count()
    work = q * count * total_out
    cap = enumeration_cap()
    if work > cap:
        raise EnumerationCapError(
            f"state space too large: {q} secrets x {count} share vectors x "
            f"{total_out} leakage outcomes = {work} exceeds the cap of {cap}"
        )
    rows = [ch.matrix for ch in channels]
    weight = 1.0 / count
    acc = np.zeros((q, total_out))
    comp = np.zeros_like(acc)
    for s in range(q):
        for shares in sch.all_shares(s):
            vec = rows[0][shares[0]]
            for i in range(1, sch.N):
                vec = np.kron(vec, rows[i][shares[i]])
            _kahan_add(acc[s], comp[s], weight * vec)
    return acc


def _secret_bits(q: int, bit: int) -> np.ndarray:
    return np.array([(s >> bit) & 1 for s in range(q)])


def _bitwise_joint(joint: np.ndarray, bit: int) -> np.ndarray:
    bits = _secret_bits(joint.shape[0], bit)
    return np.stack([joint[bits == 0].sum(axis=0), joint[bits == 1].sum(axis=0)])


def exact_mi(scheme, channels: list[Channel], secret_dist) -> ExactLeakageResult:
    """Exact I(secret; leakages) plus every per-bit I(secret bit; leakages)."""
    start = time.perf_counter()
    sch = _as_scheme(scheme)
    p = np.asarray(getattr(secret_dist, "p", secret_dist), dtype=float)
    q = sch.spec.order
    if p.shape != (q,):
        raise ValueError(f"secret distribution must have {q} entries")
    cond = leakage_matrix(sch, channels)
    joint = p[:, np.newaxis] * cond
    total = mutual_information(joint)
    per_bit = tuple(
        mutual_information(_bitwise_joint(joint, i)) for i in range(sch.spec.l)
    )
    ms = int(round((time.perf_counter() - start) * 1000))
    return ExactLeakageResult(
        total_mi=total,
        per_bit_mi=per_bit,
        space=int(joint.size),
        ms=ms,
    )


def exact_bitwise_mi(scheme, channels: list[Channel], secret_dist, bit: int) -> float:
    """Exact I(bit i of the secret; leakages)."""
    sch = _as_scheme(scheme)
    if not 0 <= bit < sch.spec.l:
        raise ValueError(f"bit index {bit} out of range for l={sch.spec.l}")
    return exact_mi(sch, channels, secret_dist).per_bit_mi[bit]


def exact_conditional_mi_given_colluders(
    params: ShamirParams,
    colluders: tuple[int, ...],
    channels: list[Channel],
    secret_dist,
) -> float:
    """Exact I(secret; honest leakages and colluder shares).

    Colluders see their shares exactly, so their channels are replaced by
    identity channels before enumerating. Below threshold the colluder
    shares alone carry no information, which makes this also the conditional
    mutual information given the colluder shares.
    """
    if len(set(colluders)) != len(colluders):
        raise ValueError("duplicate colluder indices")
    for idx in colluders:
        if not 0 <= idx < params.N:
            raise ValueError(f"colluder index {idx} out of range")
    if len(colluders) >= params.t:
        raise ValueError("colluders can reconstruct the secret")
    q = params.spec.order
    chans = list(channels)
    for idx in colluders:
        chans[idx] = identity_channel(q)
    return exact_mi(params, chans, secret_dist).total_mi


# ----------------------------------------------------------------------
# Parity distributions and the Markov-collapse check
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class ParityDistribution:
    """Distribution on {0,1}^k whose mass depends only on the vector's parity.

    Mass alpha sits on the even-parity half, split uniformly, and 1 - alpha
    on the odd half. Any k-1 of the coordinates are i.i.d. uniform; all the
    dependence hides in the last one.
    """

    k: int
    alpha: float

    def __post_init__(self) -> None:
        if self.k < 2:
            raise ValueError("need at least two coordinates")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")

    def pmf(self) -> np.ndarray:
        half = 1 << (self.k - 1)
        p = np.empty(1 << self.k)
        for x in range(1 << self.k):
            even = bin(x).count("1") % 2 == 0
            p[x] = self.alpha / half if even else (1.0 - self.alpha) / half
        return p


def parity_markov_gap(pmf: np.ndarray, q: float) -> tuple[float, float]:
    """How far S(X) - S(Y) - Y is from a Markov chain, for X ~ pmf through
    per-bit BSC(q), where S is the parity map.

    Returns (|I(S(X);Y) - I(S(X);S(Y))|, the largest |P(S(X)=s | Y=y) -
    P(S(X)=s | S(Y)=parity(y))| over outcomes with positive probability).
    Both vanish exactly when pmf is a parity distribution; a generic pmf
    breaks the collapse.
    """
    pmf = np.asarray(pmf, dtype=float)
    n = len(pmf)
    k = n.bit_length() - 1
    if 1 << k != n:
        raise ValueError("pmf length must be a power of two")
    trans = per_bit_channel(bsc(q), k).matrix
    joint_xy = pmf[:, np.newaxis] * trans
    parity = np.array([bin(v).count("1") % 2 for v in range(n)])
    joint_sy = np.stack(
        [joint_xy[parity == 0].sum(axis=0), joint_xy[parity == 1].sum(axis=0)]
    )
    joint_ss = np.stack(
        [joint_sy[:, parity == 0].sum(axis=1), joint_sy[:, parity == 1].sum(axis=1)],
        axis=1,
    )
    gap_mi = abs(mutual_information(joint_sy) - mutual_information(joint_ss))

    p_y = joint_sy.sum(axis=0)
    p_sy = joint_ss.sum(axis=0)
    gap_markov = 0.0
    for y in range(n):
        if p_y[y] <= 0.0:
            continue
        for s in range(2):
            via_y = joint_sy[s, y] / p_y[y]
            via_parity = joint_ss[s, parity[y]] / p_sy[parity[y]]
            gap_markov = max(gap_markov, abs(via_y - via_parity))
    return gap_mi, gap_markov


def markov_gap(k: int, q: float, alpha: float) -> tuple[float, float]:
    """parity_markov_gap for the parity distribution with the given alpha."""
    if not 2 <= k <= 12:
        raise ValueError(f"k must be in [2, 12], got {k}")
    if not 0.0 <= q <= 0.5:
        raise ValueError(f"crossover probability must be in [0, 1/2], got {q}")
    return parity_markov_gap(ParityDistribution(k, alpha).pmf(), q)


# ----------------------------------------------------------------------
# Worst-case distribution search
# ----------------------------------------------------------------------

def sampled_secret_distributions(
    q: int, trials: int, seed: int
) -> list[np.ndarray]:
    """Uniform, every point mass, and `trials` symmetric-Dirichlet draws."""
    rng = np.random.default_rng(seed)
    dists = [np.full(q, 1.0 / q)]
    for s in range(q):
        p = np.zeros(q)
        p[s] = 1.0
        dists.append(p)
    for _ in range(trials):
        dists.append(rng.dirichlet(np.ones(q)))
    return dists


def mis_estimate(scheme, channels: list[Channel], trials: int, seed: int) -> float:
    """Lower estimate of the worst-case per-bit leakage max over secret
    distributions.

    Takes the maximum of the exact per-bit mutual informations over sampled
    distributions (uniform, all point masses, Dirichlet(1) draws). The true
    maximum over all distributions is not solved for, so treat this as a
    floor on it, never the value itself.
    """
    if trials < 1:
        raise ValueError("need at least one sampled distribution")
    sch = _as_scheme(scheme)
    cond = leakage_matrix(sch, channels)
    best = 0.0
    for p in sampled_secret_distributions(sch.spec.order, trials, seed):
        joint = p[:, np.newaxis] * cond
        for i in range(sch.spec.l):
            best = max(best, mutual_information(_bitwise_joint(joint, i)))
    return best
