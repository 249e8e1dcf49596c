"""Closed-form exponents, geometry and the binary/DMC helpers.

Scalar anchors were derived by hand from the closed forms (and double-checked
by independent quadrature / optimization oracles below) before being frozen.
"""

import itertools
import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.optimize import brentq

from redalert.errors import InfeasibleDesignError, InvalidArgumentError
from redalert.exponents import (
    BscParams,
    ChannelParams,
    DecoderGeometry,
    alpha_for_rate,
    awgn_capacity,
    binary_convolution,
    binary_entropy,
    binary_kl,
    binary_measures,
    bsc_capacity,
    bsc_conical,
    bsc_red_alert_exponent,
    conical_exponent,
    converse_geometry,
    decoder_geometry,
    derive_design_params,
    dmc_capacity_exponent,
    gaussian_kl,
    log_v_min,
    red_alert_exponent,
)

UNIT = ChannelParams(p_avg=1.0, p_alert=1.0, noise_var=1.0)
LN2 = math.log(2.0)


def test_awgn_capacity_values():
    assert awgn_capacity(UNIT) == pytest.approx(0.5 * math.log(2.0), rel=1e-14)
    assert awgn_capacity(ChannelParams(3.0, 3.0, 1.0)) == pytest.approx(
        0.5 * math.log(4.0), rel=1e-14
    )


def test_channel_params_validation():
    with pytest.raises(InvalidArgumentError):
        ChannelParams(p_avg=0.0, p_alert=1.0, noise_var=1.0)
    with pytest.raises(InvalidArgumentError):
        ChannelParams(p_avg=2.0, p_alert=1.0, noise_var=1.0)
    with pytest.raises(InvalidArgumentError):
        ChannelParams(p_avg=1.0, p_alert=1.0, noise_var=0.0)


def test_red_alert_exponent_anchor():
    # unit powers and noise at rate 0.2 nats
    assert red_alert_exponent(UNIT, 0.2) == pytest.approx(1.512864, abs=5e-7)


def test_red_alert_exponent_endpoints():
    # R = 0: the coherent gain is 2 sqrt(P_a P)
    p = ChannelParams(2.0, 3.0, 0.5)
    expected0 = (3.0 + 2.0 + 2.0 * math.sqrt(3.0 * 2.0)) / 1.0
    assert red_alert_exponent(p, 0.0) == pytest.approx(expected0, rel=1e-12)
    # R = C: coherent gain vanishes
    cap = awgn_capacity(p)
    # the coherent-gain radicand hits zero only up to roundoff, and the
    # square root turns that 1e-16 into 1e-8
    assert red_alert_exponent(p, cap) == pytest.approx(
        (3.0 + 2.0) / (2.0 * 0.5) - cap, abs=1e-7
    )


def test_red_alert_exponent_monotonicity():
    cap = awgn_capacity(UNIT)
    rates = np.linspace(0.0, cap, 25)
    vals = [red_alert_exponent(UNIT, float(r)) for r in rates]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    # increasing in the red-alert power at fixed rate
    e1 = red_alert_exponent(ChannelParams(1.0, 1.0, 1.0), 0.2)
    e2 = red_alert_exponent(ChannelParams(1.0, 2.0, 1.0), 0.2)
    assert e2 > e1


def test_red_alert_exponent_invalid_rate():
    with pytest.raises(InvalidArgumentError):
        red_alert_exponent(UNIT, -0.1)
    with pytest.raises(InvalidArgumentError):
        red_alert_exponent(UNIT, awgn_capacity(UNIT) + 0.05)


def test_gaussian_kl_quadrature_oracle():
    cases = [(0.5, 1.2, -0.8, 0.7), (0.0, 2.0, 1.0, 1.0), (-1.5, 0.4, 0.5, 3.0)]
    for m0, v0, m1, v1 in cases:
        def integrand(x):
            p = math.exp(-((x - m0) ** 2) / (2 * v0)) / math.sqrt(2 * math.pi * v0)
            logratio = (
                -((x - m0) ** 2) / (2 * v0)
                + ((x - m1) ** 2) / (2 * v1)
                + 0.5 * math.log(v1 / v0)
            )
            return p * logratio

        lo = m0 - 12 * math.sqrt(v0)
        hi = m0 + 12 * math.sqrt(v0)
        numeric, _ = quad(integrand, lo, hi, limit=200)
        assert gaussian_kl(m0, v0, m1, v1) == pytest.approx(numeric, abs=1e-9)
    assert gaussian_kl(1.0, 2.0, 1.0, 2.0) == 0.0
    with pytest.raises(InvalidArgumentError):
        gaussian_kl(0.0, 0.0, 0.0, 1.0)


def test_kl_identity_with_exponent():
    for p_avg, mult, nv in itertools.product((0.5, 1.0, 4.0), (1, 2, 5), (0.25, 1.0, 2.0)):
        params = ChannelParams(p_avg, mult * p_avg, nv)
        cap = awgn_capacity(params)
        for frac in (0.1, 0.5, 0.9):
            rate = frac * cap
            alpha = alpha_for_rate(params, rate)
            kl = gaussian_kl(
                math.sqrt((1.0 - alpha) * p_avg),
                alpha * p_avg + nv,
                -math.sqrt(mult * p_avg),
                nv,
            )
            assert red_alert_exponent(params, rate) == pytest.approx(kl, rel=1e-12)


def test_design_params_solve_the_rate_equations():
    params = ChannelParams(2.0, 2.0, 1.0)
    d = derive_design_params(params, n=128, rate=0.2, epsilon=0.05)
    # alpha: R + eps = ln(1 + alpha P / N) / 2
    assert 0.5 * math.log1p(d.alpha * 2.0) == pytest.approx(0.25, rel=1e-12)
    # lambda: R + eps/2 = ln(1 + (alpha P - lambda) / N) / 2
    assert 0.5 * math.log1p(d.alpha * 2.0 - d.lam) == pytest.approx(0.225, rel=1e-12)
    assert 0.0 < d.alpha <= 1.0
    assert 0.0 < d.lam < d.alpha * 2.0


def test_design_params_infeasible():
    with pytest.raises(InfeasibleDesignError):
        derive_design_params(UNIT, n=16, rate=0.3, epsilon=0.1)  # 0.4 > C = 0.3466


def test_decoder_geometry_matches_hand_formula():
    params = ChannelParams(1.0, 2.0, 0.5)
    alpha, lam, delta = 0.6, 0.1, 0.02
    g = decoder_geometry(params, alpha, lam, delta)
    offset = 2.0 * math.sqrt(2.0 * 0.4)
    l2n = 2.0 + 1.0 + 0.5 + offset - lam - delta
    assert g.min_distance_sq_per_dim == pytest.approx(l2n, rel=1e-13)
    sin_sq = (0.6 + 0.5 - 0.1) / (2.0 + 1.0 + offset + 0.5 - 0.1)
    assert g.half_angle == pytest.approx(math.asin(math.sqrt(sin_sq)) + delta, rel=1e-13)
    assert g.beta == pytest.approx((l2n - 0.5) / 0.5, rel=1e-13)


def test_decoder_geometry_validation():
    with pytest.raises(InvalidArgumentError):
        decoder_geometry(UNIT, alpha=1.5, lam=0.0, delta=0.0)
    with pytest.raises(InvalidArgumentError):
        decoder_geometry(UNIT, alpha=0.5, lam=0.6, delta=0.0)
    with pytest.raises(InvalidArgumentError):
        decoder_geometry(UNIT, alpha=0.5, lam=0.0, delta=-0.1)
    with pytest.raises(InvalidArgumentError):
        DecoderGeometry(min_distance_sq_per_dim=2.0, half_angle=1.8, beta=1.0)
    with pytest.raises(InvalidArgumentError):
        DecoderGeometry(min_distance_sq_per_dim=2.0, half_angle=0.5, beta=0.0)


def test_converse_equals_zero_slack_decoder():
    for p_avg, mult, nv in itertools.product((0.5, 1.0, 4.0), (1, 3), (0.5, 1.0)):
        params = ChannelParams(p_avg, mult * p_avg, nv)
        cap = awgn_capacity(params)
        for frac in (0.2, 0.6, 0.95):
            rate = frac * cap
            g1 = converse_geometry(params, rate)
            g2 = decoder_geometry(params, alpha_for_rate(params, rate), 0.0, 0.0)
            assert g1.min_distance_sq_per_dim == pytest.approx(
                g2.min_distance_sq_per_dim, rel=1e-12
            )
            assert g1.half_angle == pytest.approx(g2.half_angle, abs=1e-12)
            assert g1.beta == pytest.approx(g2.beta, rel=1e-12)


def test_converse_geometry_anchor():
    g = converse_geometry(UNIT, 0.2)
    assert g.min_distance_sq_per_dim == pytest.approx(4.425728, abs=5e-7)
    assert g.half_angle == pytest.approx(0.61945, abs=5e-5)


def test_exponent_assembly_identity():
    # beta/2 - ln(1+beta)/2 - ln sin(psi) recovers the exponent
    for rate in (0.05, 0.2, 0.3):
        g = converse_geometry(UNIT, rate)
        assembled = g.beta / 2.0 - 0.5 * math.log1p(g.beta) - math.log(math.sin(g.half_angle))
        assert assembled == pytest.approx(red_alert_exponent(UNIT, rate), abs=1e-10)


def test_log_v_min_formula_and_validation():
    n, rate, gamma, nv = 64, 0.3, 0.1, 1.0
    from scipy.special import gammaln

    expected = (
        n * (rate - gamma)
        + n / 2.0 * math.log(n * math.pi * (nv - gamma))
        - gammaln(n / 2.0 + 1.0)
    )
    assert log_v_min(n, rate, gamma, nv) == pytest.approx(expected, rel=1e-13)
    with pytest.raises(InvalidArgumentError):
        log_v_min(n, rate, 0.0, nv)
    with pytest.raises(InvalidArgumentError):
        log_v_min(n, 0.2, 0.3, nv)


def test_conical_exponent_variants():
    params = ChannelParams(1.0, 1.0, 1.0)
    # corrected variant coincides with the optimal exponent at capacity
    cap = awgn_capacity(params)
    assert conical_exponent(params, cap, "corrected") == pytest.approx(
        red_alert_exponent(params, cap), abs=1e-9
    )
    # at zero rate the corrected conical exponent stays below the optimum
    assert conical_exponent(params, 0.0, "corrected") == pytest.approx(1.50437, abs=1e-4)
    assert conical_exponent(params, 0.0, "corrected") < red_alert_exponent(params, 0.0)
    # the printed variant overshoots the optimum near capacity
    assert conical_exponent(params, cap, "printed") > red_alert_exponent(params, cap)
    with pytest.raises(InvalidArgumentError):
        conical_exponent(params, 0.1, "bogus")


def test_binary_helpers():
    assert binary_entropy(0.5) == pytest.approx(LN2, rel=1e-14)
    assert binary_entropy(0.0) == 0.0
    assert binary_entropy(1.0) == 0.0
    assert binary_convolution(0.7, 0.11) == pytest.approx(0.656, rel=1e-12)
    assert binary_convolution(0.5, 0.3) == pytest.approx(0.5, rel=1e-12)
    assert binary_kl(0.5, 0.5) == 0.0
    assert binary_kl(0.3, 0.0) == math.inf
    assert binary_kl(0.0, 0.0) == 0.0
    m = binary_measures(0.7, 0.11)
    assert m.convolution == pytest.approx(0.656, rel=1e-12)
    with pytest.raises(InvalidArgumentError):
        binary_entropy(1.2)


def test_binary_kl_quadrature_free_oracle():
    # check against a direct summation definition
    for a, b in [(0.89, 0.11), (0.5, 0.11), (0.2, 0.4)]:
        direct = a * math.log(a / b) + (1 - a) * math.log((1 - a) / (1 - b))
        assert binary_kl(a, b) == pytest.approx(direct, rel=1e-14)


def test_bsc_params_validation():
    with pytest.raises(InvalidArgumentError):
        BscParams(crossover=0.5, composition=0.7)
    with pytest.raises(InvalidArgumentError):
        BscParams(crossover=0.1, composition=1.5)


def test_bsc_red_alert_exponent_anchors():
    p = 0.11
    cap = bsc_capacity(p)
    assert cap == pytest.approx(LN2 - binary_entropy(p), rel=1e-14)
    # zero rate: the far branch puts all mass at 1 - p
    assert bsc_red_alert_exponent(p, 0.0) == pytest.approx(1.630778, abs=5e-7)
    assert bsc_red_alert_exponent(p, 0.0) == pytest.approx(binary_kl(0.89, p), rel=1e-12)
    # at capacity: uniform output
    assert bsc_red_alert_exponent(p, cap) == pytest.approx(binary_kl(0.5, p), abs=1e-9)
    assert bsc_red_alert_exponent(p, cap) == pytest.approx(0.468757, abs=5e-7)


def test_bsc_red_alert_exponent_brentq_oracle():
    # independent root-finder for h(w) = R + h(p) on [1/2, 1-p]
    p, rate = 0.2, 0.15
    w = brentq(lambda x: binary_entropy(x) - (rate + binary_entropy(p)), 0.5, 1.0 - p,
               xtol=1e-14)
    assert bsc_red_alert_exponent(p, rate) == pytest.approx(binary_kl(w, p), abs=1e-10)


def test_bsc_red_alert_exponent_decreasing():
    p = 0.11
    cap = bsc_capacity(p)
    vals = [bsc_red_alert_exponent(p, f * cap) for f in np.linspace(0, 1, 12)]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    with pytest.raises(InvalidArgumentError):
        bsc_red_alert_exponent(p, cap + 0.01)


def test_bsc_conical_anchors():
    res = bsc_conical(0.11, 0.7)
    assert res.rate == pytest.approx(0.264349, abs=5e-7)
    assert res.rate == pytest.approx(binary_entropy(0.7) - binary_entropy(0.11), rel=1e-12)
    assert res.exponent == pytest.approx(binary_kl(0.656, 0.11), rel=1e-12)
    assert res.log_weight_tail_bound_per_n == pytest.approx(-binary_kl(0.7, 0.5), rel=1e-12)
    # fixed-composition code with the same exponent has strictly higher rate
    fixed_rate = binary_entropy(0.656) - binary_entropy(0.11)
    assert fixed_rate == pytest.approx(0.297138, abs=5e-7)
    assert res.rate < fixed_rate
    with pytest.raises(InvalidArgumentError):
        bsc_conical(0.11, 0.5)


def test_bsc_conical_weight_tail_vanishes_at_half():
    assert bsc_conical(0.11, 0.5 + 1e-9).log_weight_tail_bound_per_n == pytest.approx(
        0.0, abs=1e-12
    )


def test_dmc_bsc_matches_closed_forms():
    p = 0.11
    res = dmc_capacity_exponent([[1 - p, p], [p, 1 - p]])
    assert res.capacity == pytest.approx(bsc_capacity(p), abs=1e-9)
    assert res.exponent == pytest.approx(binary_kl(0.5, p), abs=1e-9)


def test_dmc_noiseless_channel_infinite_exponent():
    res = dmc_capacity_exponent([[1.0, 0.0], [0.0, 1.0]])
    assert res.capacity == pytest.approx(LN2, abs=1e-9)
    assert res.exponent == math.inf


def test_dmc_bec_capacity_closed_form():
    # erasure channel with erasure probability 0.3: capacity 0.7 ln 2; the
    # capacity-achieving output has mass on the erasure symbol that every row
    # also carries, while each input's non-erasure atom misses the other
    # row's support, so the at-capacity divergence is infinite
    e = 0.3
    w = [[1 - e, e, 0.0], [0.0, e, 1 - e]]
    res = dmc_capacity_exponent(w)
    assert res.capacity == pytest.approx((1 - e) * LN2, abs=1e-8)
    assert res.exponent == math.inf


def test_dmc_validation():
    with pytest.raises(InvalidArgumentError):
        dmc_capacity_exponent([[0.5, 0.4]])
    with pytest.raises(InvalidArgumentError):
        dmc_capacity_exponent([[1.1, -0.1]])
