"""Leakage channels and the capacity-based per-bit rate."""
import numpy as np
import pytest

from shamirleak.channels import (
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

EPS_Q01 = 0.53100440641071878  # 1 - h(0.1)


def test_channel_validation():
    with pytest.raises(ValueError):
        Channel(np.array([[0.5, 0.6], [0.5, 0.5]]))  # row sums off
    with pytest.raises(ValueError):
        Channel(np.array([[1.2, -0.2], [0.5, 0.5]]))  # negative entry
    with pytest.raises(ValueError):
        Channel(np.array([0.5, 0.5]))  # not a matrix


def test_bsc_matrix():
    ch = bsc(0.1)
    assert np.allclose(ch.matrix, [[0.9, 0.1], [0.1, 0.9]])
    with pytest.raises(ValueError):
        bsc(0.6)
    with pytest.raises(ValueError):
        bsc(-0.1)


def test_bsc_eps_anchor_and_inverse():
    assert abs(bsc_eps(0.1) - EPS_Q01) < 1e-15
    assert bsc_eps(0.5) == 0.0
    assert bsc_eps(0.0) == 1.0
    for q in np.linspace(0.0, 0.5, 40):
        assert abs(q_from_eps(bsc_eps(float(q))) - q) < 1e-9
    for eps in np.linspace(0.0, 1.0, 40):
        assert abs(bsc_eps(q_from_eps(float(eps))) - eps) < 1e-9


def test_per_bit_channel_entries():
    q, l = 0.2, 2
    ch = per_bit_channel(bsc(q), l)
    assert ch.matrix.shape == (4, 4)
    for x in range(4):
        for y in range(4):
            d = bin(x ^ y).count("1")
            assert abs(ch.matrix[x, y] - q**d * (1 - q) ** (l - d)) < 1e-15


def test_per_bit_channel_single_bit_is_base():
    base = bsc(0.3)
    assert np.array_equal(per_bit_channel(base, 1).matrix, base.matrix)


def test_product_channel_shapes_and_rows():
    prod = product_channel([bsc(0.1), identity_channel(4), null_channel(3)])
    assert prod.input_size == 2 * 4 * 3
    assert prod.output_size == 2 * 4 * 1
    assert np.allclose(prod.matrix.sum(axis=1), 1.0)


def test_product_channel_factor_order():
    # first factor indexes the most significant digit of the joint alphabet
    prod = product_channel([identity_channel(2), bsc(0.0)])
    x = 1 * 2 + 0  # first input 1, second input 0
    out = np.argmax(prod.matrix[x])
    assert out == 1 * 2 + 0


def test_identity_null_uniform_channels():
    assert np.array_equal(identity_channel(3).matrix, np.eye(3))
    assert np.array_equal(null_channel(4).matrix, np.ones((4, 1)))
    u = uniform_channel(3, 5)
    assert np.allclose(u.matrix, 1.0 / 5)


def test_leakage_rate_per_bit_bsc_closed_form():
    for q in (0.05, 0.1, 0.25, 0.4):
        for l in (1, 2, 3):
            rate = channel_leakage_rate(per_bit_channel(bsc(q), l), l)
            assert abs(rate - bsc_eps(q)) < 1e-9


def test_leakage_rate_extremes():
    assert abs(channel_leakage_rate(identity_channel(8), 3) - 1.0) < 1e-9
    assert channel_leakage_rate(uniform_channel(8, 4), 3) < 1e-9
    assert channel_leakage_rate(null_channel(4), 2) < 1e-12


def test_leakage_rate_random_channel_bounds():
    rng = np.random.default_rng(4)
    m = rng.random((4, 6))
    m /= m.sum(axis=1, keepdims=True)
    rate = channel_leakage_rate(Channel(m), 2)
    assert 0.0 <= rate <= 1.0
    # deterministic across calls
    assert rate == channel_leakage_rate(Channel(m), 2)


def test_enumeration_cap_default_and_override(monkeypatch):
    monkeypatch.delenv("SHAMIRLEAK_ENUM_CAP", raising=False)
    assert enumeration_cap() == 1 << 24
    monkeypatch.setenv("SHAMIRLEAK_ENUM_CAP", "1000")
    assert enumeration_cap() == 1000


def test_product_channel_respects_cap(monkeypatch):
    monkeypatch.setenv("SHAMIRLEAK_ENUM_CAP", "64")
    with pytest.raises(EnumerationCapError):
        product_channel([identity_channel(16), identity_channel(16)])


def test_leakage_profile_validation():
    LeakageProfile((0.5, 0.5), 3, 3, 2, 1)
    with pytest.raises(ValueError):
        LeakageProfile((0.5,), 3, 3, 2, 2)  # t' >= t
    with pytest.raises(ValueError):
        LeakageProfile((0.5, 0.5), 3, 3, 4, 0)  # t > N
    with pytest.raises(ValueError):
        LeakageProfile((0.5,), 3, 3, 2, 0)  # wrong eps count
    with pytest.raises(ValueError):
        LeakageProfile((1.5, 0.5, 0.5), 3, 3, 2, 0)  # eps out of range
