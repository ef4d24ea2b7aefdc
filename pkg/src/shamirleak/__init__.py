"""Shamir secret sharing over GF(2^l) under statistical leakage.

The library splits into a scheme half (field arithmetic, sharing,
reconstruction, bitwise recovery equations) and an analysis half (leakage
channels, closed-form security bounds, and exact enumeration oracles that
verify the bounds). The CLI in shamirleak.cli drives configuration-based
sweeps over both.
"""
from .bitexpand import BitwiseSystem, expand, verify_system
from .bounds import (
    BoundReport,
    bound_bitwise,
    bound_sum,
    delta_from_eps,
    mis_to_ds_ss,
    report,
)
from .channels import (
    Channel,
    EnumerationCapError,
    LeakageProfile,
    bsc,
    bsc_eps,
    channel_leakage_rate,
    enumeration_cap,
    identity_channel,
    null_channel,
    per_bit_channel,
    product_channel,
    q_from_eps,
    uniform_channel,
)
from .field import DEFAULT_POLYS, FieldSpec, gf_add, gf_inv, gf_mul, gf_pow, is_irreducible, mul_matrix
from .infotheory import (
    DiscreteDistribution,
    JointDistribution,
    binary_entropy,
    binary_entropy_inv,
    conditional_entropy,
    entropy,
    mgl_lower_bound,
    mutual_information,
    star,
    star_iter,
)
from .oracle import (
    ExactLeakageResult,
    ParityDistribution,
    exact_bitwise_mi,
    exact_conditional_mi_given_colluders,
    exact_mi,
    leakage_matrix,
    markov_gap,
    mis_estimate,
    parity_markov_gap,
    sampled_secret_distributions,
)
from .scheme import (
    LinearScheme,
    ReducedScheme,
    ShamirParams,
    ThresholdError,
    all_ones_scheme,
    collusion_reduce,
    lagrange_coefficients,
    reconstruct,
    share,
    vandermonde_inverse_first_row,
)

__version__ = "0.1.0"
