"""Closed-form quantities: capacity, design parameters, the optimal red-alert
exponent, decoder/converse geometry, conical and BSC exponents, and the
DMC-at-capacity formula.

Rates are in nats throughout; the CLI layer converts to bits on request.
"""

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.special import gammaln

from .errors import InfeasibleDesignError, InvalidArgumentError

ConicalVariant = Literal["printed", "corrected"]


@dataclass(frozen=True)
class ChannelParams:
    """AWGN channel: average power, red-alert power and noise variance (linear)."""

    p_avg: float
    p_alert: float
    noise_var: float

    def __post_init__(self):
        if self.p_avg <= 0:
            raise InvalidArgumentError(f"p_avg must be positive, got {self.p_avg}")
        if self.p_alert < self.p_avg:
            raise InvalidArgumentError(
                f"p_alert must be at least p_avg, got {self.p_alert} < {self.p_avg}"
            )
        if self.noise_var <= 0:
            raise InvalidArgumentError(f"noise_var must be positive, got {self.noise_var}")


@dataclass(frozen=True)
class DesignParams:
    """Blocklength, rate, slack and the derived (alpha, lambda) power split."""

    n: int
    rate: float
    epsilon: float
    alpha: float
    lam: float

    def __post_init__(self):
        if self.n < 1:
            raise InvalidArgumentError(f"blocklength must be >= 1, got {self.n}")
        if self.rate < 0:
            raise InvalidArgumentError(f"rate must be nonnegative, got {self.rate}")
        if self.epsilon <= 0:
            raise InvalidArgumentError(f"epsilon must be positive, got {self.epsilon}")
        if not 0.0 < self.alpha <= 1.0:
            raise InvalidArgumentError(f"alpha must lie in (0, 1], got {self.alpha}")
        if self.lam < 0:
            raise InvalidArgumentError(f"lambda must be nonnegative, got {self.lam}")


@dataclass(frozen=True)
class DecoderGeometry:
    """Standard-message acceptance region: distance threshold and cone half-angle."""

    min_distance_sq_per_dim: float  # L^2 / n
    half_angle: float  # psi, radians
    beta: float  # (L^2/n - N)/N

    def __post_init__(self):
        if not 0.0 < self.half_angle < math.pi / 2:
            raise InvalidArgumentError(
                f"half_angle must lie in (0, pi/2), got {self.half_angle}"
            )
        if self.beta <= 0:
            raise InvalidArgumentError(f"beta must be positive, got {self.beta}")


@dataclass(frozen=True)
class BscParams:
    """BSC crossover probability and codeword composition."""

    crossover: float
    composition: float

    def __post_init__(self):
        if not 0.0 < self.crossover < 0.5:
            raise InvalidArgumentError(
                f"crossover must lie in (0, 1/2), got {self.crossover}"
            )
        if not 0.0 <= self.composition <= 1.0:
            raise InvalidArgumentError(
                f"composition must be a probability, got {self.composition}"
            )


@dataclass(frozen=True)
class BinaryMeasures:
    entropy_of_a: float
    convolution: float
    kl_a_b: float


@dataclass(frozen=True)
class DmcResult:
    capacity: float
    exponent: float
    best_input: int


def awgn_capacity(params: ChannelParams) -> float:
    """AWGN capacity (nats/use): ln(1 + P_avg/N)/2."""
    return 0.5 * math.log1p(params.p_avg / params.noise_var)


def derive_design_params(
    params: ChannelParams, n: int, rate: float, epsilon: float
) -> DesignParams:
    """Solve the power-split equations for alpha and lambda.

    alpha satisfies R + eps = ln(1 + alpha P/N)/2 and lambda satisfies
    R + eps/2 = ln(1 + (alpha P - lambda)/N)/2.
    """
    if rate < 0 or epsilon <= 0:
        raise InvalidArgumentError("need rate >= 0 and epsilon > 0")
    cap = awgn_capacity(params)
    if rate + epsilon >= cap:
        raise InfeasibleDesignError(
            f"rate + epsilon = {rate + epsilon} is not below capacity {cap}"
        )
    nvar = params.noise_var
    alpha = nvar / params.p_avg * math.expm1(2.0 * (rate + epsilon))
    lam = alpha * params.p_avg - nvar * math.expm1(2.0 * rate + epsilon)
    return DesignParams(n=n, rate=rate, epsilon=epsilon, alpha=alpha, lam=lam)


def alpha_for_rate(params: ChannelParams, rate: float) -> float:
    """Zero-slack power fraction: alpha = (N/P_avg)(e^{2R} - 1)."""
    return params.noise_var / params.p_avg * math.expm1(2.0 * rate)


def red_alert_exponent(params: ChannelParams, rate: float) -> float:
    """Optimal red-alert exponent of the AWGN channel at rate R (nats)."""
    p, pa, nvar = params.p_avg, params.p_alert, params.noise_var
    radicand = pa * (p + nvar * (1.0 - math.exp(2.0 * rate)))
    if rate < 0 or radicand < -1e-12 * pa * (p + nvar):
        raise InvalidArgumentError(f"rate {rate} outside [0, capacity]")
    radicand = max(radicand, 0.0)
    return (pa + p + 2.0 * math.sqrt(radicand)) / (2.0 * nvar) - rate


def gaussian_kl(mean0: float, var0: float, mean1: float, var1: float) -> float:
    """KL divergence D(N(mean0, var0) || N(mean1, var1)) in nats."""
    if var0 <= 0 or var1 <= 0:
        raise InvalidArgumentError("variances must be positive")
    return 0.5 * ((var0 + (mean0 - mean1) ** 2) / var1 - 1.0 - math.log(var0 / var1))


def decoder_geometry(
    params: ChannelParams, alpha: float, lam: float, delta: float
) -> DecoderGeometry:
    """Achievability geometry (distance threshold and cone half-angle)."""
    if not 0.0 < alpha <= 1.0:
        raise InvalidArgumentError(f"alpha must lie in (0, 1], got {alpha}")
    if lam < 0 or lam >= alpha * params.p_avg:
        raise InvalidArgumentError(
            f"lambda must lie in [0, alpha * p_avg), got {lam}"
        )
    if delta < 0:
        raise InvalidArgumentError(f"delta must be nonnegative, got {delta}")
    p, pa, nvar = params.p_avg, params.p_alert, params.noise_var
    offset_term = 2.0 * math.sqrt(pa * (1.0 - alpha) * p)
    l2n = pa + p + nvar + offset_term - lam - delta
    if l2n <= nvar:
        raise InvalidArgumentError("slack too large: distance threshold fell below noise level")
    sin_sq = (alpha * p + nvar - lam) / (pa + p + offset_term + nvar - lam)
    psi = math.asin(math.sqrt(sin_sq)) + delta
    beta = (l2n - nvar) / nvar
    return DecoderGeometry(min_distance_sq_per_dim=l2n, half_angle=psi, beta=beta)


def converse_geometry(params: ChannelParams, rate: float) -> DecoderGeometry:
    """Converse packing geometry; coincides with the zero-slack decoder geometry."""
    p, pa, nvar = params.p_avg, params.p_alert, params.noise_var
    radicand = pa * (p + nvar * (1.0 - math.exp(2.0 * rate)))
    if rate < 0 or radicand < -1e-12 * pa * (p + nvar):
        raise InvalidArgumentError(f"rate {rate} outside [0, capacity]")
    radicand = max(radicand, 0.0)
    l2n = pa + p + nvar + 2.0 * math.sqrt(radicand)
    psi = math.asin(math.sqrt(nvar * math.exp(2.0 * rate) / l2n))
    beta = (l2n - nvar) / nvar
    return DecoderGeometry(min_distance_sq_per_dim=l2n, half_angle=psi, beta=beta)


def log_v_min(n: int, rate: float, gamma: float, noise_var: float) -> float:
    """ln of the minimum total decoding volume the standard messages require."""
    if n < 1:
        raise InvalidArgumentError(f"blocklength must be >= 1, got {n}")
    if not 0.0 < gamma < min(rate, noise_var):
        raise InvalidArgumentError(
            f"gamma must lie in (0, min(rate, noise_var)), got {gamma}"
        )
    return (
        n * (rate - gamma)
        + (n / 2.0) * math.log(n * math.pi * (noise_var - gamma))
        - gammaln(n / 2.0 + 1.0)
    )


def conical_exponent(
    params: ChannelParams, rate: float, variant: ConicalVariant = "corrected"
) -> float:
    """Red-alert exponent of the conical construction.

    `printed` is the formula exactly as stated for the conical code; it exceeds
    the optimal exponent near capacity. `corrected` restores the noise variance
    in the cone-angle numerator (matching the offset-code angle bound) and is
    the default for comparisons.
    """
    p, pa, nvar = params.p_avg, params.p_alert, params.noise_var
    cap = awgn_capacity(params)
    if rate < 0 or rate > cap + 1e-12:
        raise InvalidArgumentError(f"rate {rate} outside [0, capacity]")
    shrink = math.exp(-2.0 * (cap - rate))  # e^{-2(C-R)} = sin^2 theta
    coherent = 2.0 * math.sqrt(pa * p * max(1.0 - shrink, 0.0))
    if variant == "printed":
        return (pa + p + coherent) / (2.0 * nvar) + 0.5 * math.log((p + nvar) / p) - rate
    if variant == "corrected":
        beta_c = (pa + p + coherent) / nvar
        return beta_c / 2.0 - 0.5 * math.log((p * shrink + nvar) / nvar)
    raise InvalidArgumentError(f"unknown conical variant {variant!r}")


def binary_entropy(p: float) -> float:
    """h_B(p) in nats, with 0 ln 0 = 0."""
    if not 0.0 <= p <= 1.0:
        raise InvalidArgumentError(f"probability required, got {p}")
    if p in (0.0, 1.0):
        return 0.0
    return -p * math.log(p) - (1.0 - p) * math.log(1.0 - p)


def binary_convolution(a: float, b: float) -> float:
    """a * b := a(1-b) + b(1-a)."""
    for v in (a, b):
        if not 0.0 <= v <= 1.0:
            raise InvalidArgumentError(f"probability required, got {v}")
    return a * (1.0 - b) + b * (1.0 - a)


def binary_kl(a: float, b: float) -> float:
    """D(a || b) in nats; +inf when b is degenerate and a has mismatched support."""
    for v in (a, b):
        if not 0.0 <= v <= 1.0:
            raise InvalidArgumentError(f"probability required, got {v}")
    if b in (0.0, 1.0):
        return 0.0 if a == b else math.inf
    out = 0.0
    if a > 0.0:
        out += a * math.log(a / b)
    if a < 1.0:
        out += (1.0 - a) * math.log((1.0 - a) / (1.0 - b))
    return out


def binary_measures(a: float, b: float) -> BinaryMeasures:
    """Entropy of a, binary convolution a*b and D(a || b), all in nats."""
    return BinaryMeasures(
        entropy_of_a=binary_entropy(a),
        convolution=binary_convolution(a, b),
        kl_a_b=binary_kl(a, b),
    )


def bsc_capacity(p: float) -> float:
    """BSC capacity in nats: ln 2 - h_B(p)."""
    if not 0.0 < p < 0.5:
        raise InvalidArgumentError(f"crossover must lie in (0, 1/2), got {p}")
    return math.log(2.0) - binary_entropy(p)


def bsc_red_alert_exponent(p: float, rate: float) -> float:
    """Optimal BSC red-alert exponent at rate R (nats).

    Solves h_B(w) = R + h_B(p) for the unique w in [1/2, 1 - p] by bisection
    and returns D(w || p). On this branch the exponent decreases in R, equals
    D(1 - p || p) at zero rate and matches the DMC at-capacity formula at C.
    """
    cap = bsc_capacity(p)
    if rate < 0 or rate > cap + 1e-12:
        raise InvalidArgumentError(f"rate {rate} outside [0, {cap}]")
    target = min(rate + binary_entropy(p), math.log(2.0))
    # h_B is flat at 1/2, so bisection loses half the digits near capacity
    if target >= math.log(2.0) - 1e-13:
        return binary_kl(0.5, p)
    lo, hi = 0.5, 1.0 - p  # h_B is decreasing here: h(lo) = ln 2 >= target >= h(hi)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if binary_entropy(mid) >= target:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-15:
            break
    w = 0.5 * (lo + hi)
    return binary_kl(w, p)


@dataclass(frozen=True)
class BscConicalResult:
    rate: float
    exponent: float
    log_weight_tail_bound_per_n: float


def bsc_conical(p: float, q: float) -> BscConicalResult:
    """Rate, exponent and per-symbol weight-tail bound of the BSC conical code."""
    if not 0.5 < q < 1.0:
        raise InvalidArgumentError(f"composition must lie in (1/2, 1), got {q}")
    if not 0.0 < p < 0.5:
        raise InvalidArgumentError(f"crossover must lie in (0, 1/2), got {p}")
    qp = binary_convolution(q, p)
    return BscConicalResult(
        rate=binary_entropy(q) - binary_entropy(p),
        exponent=binary_kl(qp, p),
        log_weight_tail_bound_per_n=-binary_kl(q, 0.5),
    )


def _kl_row(p_ref: np.ndarray, row: np.ndarray) -> float:
    """D(p_ref || row) for discrete distributions; +inf outside row support."""
    mask = p_ref > 0
    if np.any(row[mask] == 0):
        return math.inf
    return float(np.sum(p_ref[mask] * np.log(p_ref[mask] / row[mask])))


def dmc_capacity_exponent(
    transition_matrix, tol: float = 1e-10, max_iter: int = 100_000
) -> DmcResult:
    """Capacity of a DMC by Blahut-Arimoto and the at-capacity red-alert exponent.

    Returns max_x D(p*_Y || p_{Y|x}) over inputs, where p*_Y is the
    capacity-achieving output distribution.
    """
    w = np.asarray(transition_matrix, dtype=float)
    if w.ndim != 2 or w.shape[0] < 1 or w.shape[1] < 1:
        raise InvalidArgumentError("transition matrix must be 2-D and nonempty")
    if np.any(w < 0) or np.any(np.abs(w.sum(axis=1) - 1.0) > 1e-12):
        raise InvalidArgumentError("rows must be nonnegative and sum to 1 within 1e-12")
    n_in = w.shape[0]
    px = np.full(n_in, 1.0 / n_in)
    support = w > 0
    capacity = 0.0
    for _ in range(max_iter):
        py = px @ w
        # D(W(.|x) || py) per input; py > 0 wherever some active row is
        ratios = np.zeros_like(w)
        np.divide(w, py[None, :], out=ratios, where=support)
        d = np.sum(np.where(support, w * np.log(np.where(support, ratios, 1.0)), 0.0), axis=1)
        i_lower = float(px @ d)
        i_upper = float(np.max(d))
        capacity = i_lower
        if i_upper - i_lower <= tol:
            break
        px = px * np.exp(d - np.max(d))
        px /= px.sum()
    py = px @ w
    kls = np.array([_kl_row(py, w[x]) for x in range(n_in)])
    best = int(np.argmax(kls))
    return DmcResult(capacity=capacity, exponent=float(kls[best]), best_input=best)
