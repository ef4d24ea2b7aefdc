"""Closed-form leakage bounds and security-metric conversions.

Three bound families, all driven by per-share leakage rates eps_i:

* the sum bound: I(secret; leakages)/l is at most the sum of the honest
  shares' rates;
* the bitwise bound: each secret bit leaks at most delta^(2(n_tilde - t')),
  where delta = 1 - 2 h^{-1}(1 - eps) and n_tilde counts the summands in
  the thinnest bitwise recovery equation;
* the metric conversions: a mutual-information bound eta translates into
  distinguishing/semantic security bounds of sqrt(2 eta).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .bitexpand import expand
from .channels import LeakageProfile
from .infotheory import binary_entropy_inv
from .scheme import LinearScheme

NO_BITWISE_NOTE = "no applicable bitwise bound"


def delta_from_eps(eps: float) -> float:
    """Decay base delta = 1 - 2 h^{-1}(1 - eps); increases with the leak."""
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"leakage rate must be in [0, 1], got {eps}")
    return 1.0 - 2.0 * binary_entropy_inv(1.0 - eps)


def bound_sum(profile: LeakageProfile) -> float:
    """Sum of the honest shares' per-bit leakage rates (unclamped).

    Bounds I(secret; all leakages)/l. The raw sum can exceed 1; callers
    wanting the trivially valid per-bit form clamp to 1.
    """
    return float(sum(profile.eps))


def bound_bitwise(n_tilde: int, t_prime: int, eps: float) -> float:
    """Per-secret-bit leakage bound delta^(2(n_tilde - t_prime)).

    Vacuously 1 when n_tilde equals t_prime (every summand may be exposed).
    n_tilde = 0 only happens for an all-zero recovery rule, where the
    exponent is 0 and the bound is again the vacuous 1.
    """
    if t_prime < 0:
        raise ValueError(f"negative colluder count: {t_prime}")
    if n_tilde < t_prime:
        raise ValueError(
            f"n_tilde={n_tilde} smaller than colluder count {t_prime}"
        )
    return delta_from_eps(eps) ** (2 * (n_tilde - t_prime))


def mis_to_ds_ss(eta_mis: float) -> tuple[float, float]:
    """Distinguishing and semantic security bounds from an MIS bound.

    Both equal sqrt(2 eta_mis); the semantic metric never exceeds the
    distinguishing one, so the shared envelope is the tightest statement
    available for either.
    """
    if eta_mis < 0.0:
        raise ValueError(f"negative mutual-information bound: {eta_mis}")
    v = math.sqrt(2.0 * eta_mis)
    return v, v


@dataclass(frozen=True)
class BoundReport:
    """All bounds for one configuration, with inputs echoed."""

    eta_mis_bound: float  # total-secret MIS bound, l * sum(eps)
    eta_ds_bound: float
    eta_ss_bound: float  # numerically equal envelope; eta_ss <= eta_ds
    sum_bound_raw: float  # sum(eps), bits per bit, unclamped
    sum_bound: float  # min(sum(eps), 1)
    per_bit_bound: float | None  # delta^(2(n_tilde - t_prime)); None if inapplicable
    per_bit_ds_bound: float | None
    per_bit_ss_bound: float | None
    delta: float
    n_tilde: int | None
    bitwise_note: str
    eps: tuple[float, ...]
    N: int
    t: int
    t_prime: int
    l: int

    def to_json(self) -> str:
        def fmt(v):
            return None if v is None else float(f"{v:.12g}")

        return json.dumps(
            {
                "eta_mis_bound": fmt(self.eta_mis_bound),
                "eta_ds_bound": fmt(self.eta_ds_bound),
                "eta_ss_bound": fmt(self.eta_ss_bound),
                "sum_bound_raw": fmt(self.sum_bound_raw),
                "sum_bound": fmt(self.sum_bound),
                "per_bit_bound": fmt(self.per_bit_bound),
                "per_bit_ds_bound": fmt(self.per_bit_ds_bound),
                "per_bit_ss_bound": fmt(self.per_bit_ss_bound),
                "delta": fmt(self.delta),
                "n_tilde": self.n_tilde,
                "bitwise_note": self.bitwise_note,
                "eps": [fmt(e) for e in self.eps],
                "N": self.N,
                "t": self.t,
                "t_prime": self.t_prime,
                "l": self.l,
            }
        )


def report(
    profile: LeakageProfile,
    scheme: LinearScheme,
    n_tilde: int | None = None,
    bsc_leakage: bool = True,
    uniform_secret: bool = True,
) -> BoundReport:
    """Assemble every bound for a scheme under a leakage profile.

    n_tilde defaults to the bitwise expansion of the scheme's recovery
    coefficients; all-ones schemes always use n_tilde = N (each secret bit
    is the XOR of the same bit of every share). The bitwise bound takes the
    largest eps when rates differ (conservative). It is only stated for
    per-bit BSC leakage or for uniform secrets; in any other configuration
    the report carries a note instead of a number.
    """
    if n_tilde is None:
        n_tilde = expand(scheme.recovery_coefficients, scheme.spec).min_summands
    if scheme.kind == "all_ones":
        n_tilde = scheme.N

    sum_raw = bound_sum(profile)
    eta_mis = profile.l * sum_raw
    eta_ds, eta_ss = mis_to_ds_ss(eta_mis)
    worst_eps = max(profile.eps)
    delta = delta_from_eps(worst_eps)

    if bsc_leakage or uniform_secret:
        per_bit = bound_bitwise(n_tilde, profile.t_prime, worst_eps)
        per_bit_ds, per_bit_ss = mis_to_ds_ss(per_bit)
        note = ""
    else:
        per_bit = per_bit_ds = per_bit_ss = None
        note = NO_BITWISE_NOTE

    return BoundReport(
        eta_mis_bound=eta_mis,
        eta_ds_bound=eta_ds,
        eta_ss_bound=eta_ss,
        sum_bound_raw=sum_raw,
        sum_bound=min(sum_raw, 1.0),
        per_bit_bound=per_bit,
        per_bit_ds_bound=per_bit_ds,
        per_bit_ss_bound=per_bit_ss,
        delta=delta,
        n_tilde=n_tilde,
        bitwise_note=note,
        eps=profile.eps,
        N=profile.N,
        t=profile.t,
        t_prime=profile.t_prime,
        l=profile.l,
    )
