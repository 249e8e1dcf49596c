"""Error-probability estimation.

The missed-detection probability of the conical-shell decoder factorizes
exactly into a radial chi-square event and an angular solid-angle event, so
it is evaluated with special functions rather than Monte Carlo. False alarm
and message error are estimated by simulation with per-trial RNG substreams,
making the results independent of how trials are batched.
"""

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .codec import (
    AwgnChannel,
    BscChannel,
    Channel,
    Codebook,
    _PURPOSE_TRIAL,
    decode_awgn_batch,
    decode_bsc,
    substream,
)
from .errors import InsufficientTrialsError, InvalidArgumentError
from .exponents import (
    ChannelParams,
    DecoderGeometry,
    binary_convolution,
    converse_geometry,
    red_alert_exponent,
)
from .geometry import log_solid_angle_exact
from .ldp import log_chi_square_survival
from scipy.special import gammaln, logsumexp


@dataclass(frozen=True)
class ErrorEstimates:
    log_p_md: Optional[float]
    p_fa: float
    p_msg: Optional[float]  # None when no trial decoded to a standard message
    p_msg_unconditional: float
    trials: int
    ci95: dict

    def __post_init__(self):
        if self.log_p_md is not None and self.log_p_md > 1e-12:
            raise InvalidArgumentError("log_p_md must be <= 0")


@dataclass(frozen=True)
class ExponentFit:
    per_n_estimates: list  # [(n, -(1/n) log p_md)]
    limit_estimate: float
    deficits: list


def exact_pmd_log(n: int, noise_var: float, geom) -> float:
    """ln p_MD for the conical-shell decoder, exact.

    The missed-detection event is {||z|| >= L} intersect {angle(z, axis) <= psi}
    and the two factors are independent for isotropic Gaussian noise.
    `geom` needs attributes min_distance_sq_per_dim and half_angle.
    """
    if n < 2:
        raise InvalidArgumentError(f"need n >= 2, got {n}")
    if noise_var <= 0:
        raise InvalidArgumentError(f"noise variance must be positive, got {noise_var}")
    psi = geom.half_angle
    if psi > math.pi / 2:
        raise InvalidArgumentError(f"half-angle {psi} exceeds pi/2")
    l2n = geom.min_distance_sq_per_dim
    if l2n < 0:
        raise InvalidArgumentError("squared distance threshold must be nonnegative")
    radial = log_chi_square_survival(n, n * l2n / noise_var)
    angular = log_solid_angle_exact(n, psi) if psi > 0 else -math.inf
    return radial + angular


def mc_error_rates(
    cb: Codebook,
    decoder,
    channel: Channel,
    trials: int,
    seed: int,
    workers: int = 1,
) -> ErrorEstimates:
    """Monte Carlo p_FA and p_MSG for a codebook/decoder pair.

    `decoder` is a DecoderGeometry for AWGN codebooks or an integer weight
    threshold for BSC codebooks. Each trial draws its message and noise from
    a substream keyed by (seed, trial index), so the outcome is a pure
    function of (codebook, decoder, channel, trials, seed) regardless of the
    chunking implied by `workers`.
    """
    if trials < 1:
        raise InvalidArgumentError(f"need at least one trial, got {trials}")
    if workers < 1:
        raise InvalidArgumentError(f"workers must be >= 1, got {workers}")
    m = cb.num_standard
    n = cb.n

    false_alarms = 0
    msg_errors = 0
    decoded_standard = 0

    chunk = max(1, math.ceil(trials / max(workers, math.ceil(trials / 4096))))
    for start in range(0, trials, chunk):
        count = min(chunk, trials - start)
        messages = np.empty(count, dtype=np.int64)
        ys = _empty_outputs(cb, count)
        for i in range(count):
            rng = substream(seed, _PURPOSE_TRIAL, start + i)
            w = int(rng.integers(1, m + 1))
            messages[i] = w
            ys[i] = _apply_channel(cb.standard[w - 1], channel, rng, n)
        decisions = _decode_batch(ys, cb, decoder)
        false_alarms += int(np.sum(decisions == 0))
        nonzero = decisions != 0
        decoded_standard += int(np.sum(nonzero))
        msg_errors += int(np.sum(decisions[nonzero] != messages[nonzero]))

    p_fa = false_alarms / trials
    p_msg = msg_errors / decoded_standard if decoded_standard > 0 else None
    p_msg_unconditional = (msg_errors + false_alarms) / trials
    ci = {"p_fa": _ci95(p_fa, trials)}
    if p_msg is not None:
        ci["p_msg"] = _ci95(p_msg, decoded_standard)
    return ErrorEstimates(
        log_p_md=None,
        p_fa=p_fa,
        p_msg=p_msg,
        p_msg_unconditional=p_msg_unconditional,
        trials=trials,
        ci95=ci,
    )


def _empty_outputs(cb: Codebook, count: int) -> np.ndarray:
    if cb.kind in ("bsc_fixed", "bsc_conical"):
        return np.empty((count, cb.n), dtype=np.uint8)
    return np.empty((count, cb.n))


def _apply_channel(x: np.ndarray, channel: Channel, rng: np.random.Generator, n: int):
    if isinstance(channel, AwgnChannel):
        if channel.noise_var > 0:
            return x + math.sqrt(channel.noise_var) * rng.standard_normal(n)
        return x.astype(float)
    if isinstance(channel, BscChannel):
        flips = (rng.random(n) < channel.crossover).astype(np.uint8)
        return np.bitwise_xor(x, flips)
    raise InvalidArgumentError(f"unknown channel {channel!r}")


def _decode_batch(ys: np.ndarray, cb: Codebook, decoder) -> np.ndarray:
    if cb.kind in ("offset", "conical"):
        if not isinstance(decoder, DecoderGeometry):
            raise InvalidArgumentError("AWGN codebooks require a DecoderGeometry decoder")
        return decode_awgn_batch(ys, cb, decoder)
    threshold = int(decoder)
    return np.array([decode_bsc(y, cb, threshold) for y in ys], dtype=np.int64)


def _ci95(p: float, count: int) -> float:
    return 1.96 * math.sqrt(max(p * (1.0 - p), 0.0) / count)


def mc_pmd_validate(
    n: int,
    noise_var: float,
    geom,
    trials: int,
    seed: int,
) -> tuple:
    """Direct Monte Carlo check of exact_pmd_log at small n.

    Simulates noise around the red alert codeword (no codebook needed) and
    counts membership in the standard-message region. Returns (estimate,
    ci95_half_width). Raises when the exact value predicts fewer than 10 hits.
    """
    expected = trials * math.exp(min(exact_pmd_log(n, noise_var, geom), 0.0))
    if expected < 10:
        raise InsufficientTrialsError(
            f"expected hit count {expected:.2f} < 10; increase trials or loosen the geometry"
        )
    min_dist_sq = n * geom.min_distance_sq_per_dim
    cos_thresh = math.cos(geom.half_angle)
    sigma = math.sqrt(noise_var)
    sqrt_n = math.sqrt(n)
    hits = 0
    chunk = 200_000
    done = 0
    idx = 0
    while done < trials:
        take = min(chunk, trials - done)
        rng = substream(seed, _PURPOSE_TRIAL, idx)
        idx += 1
        z = sigma * rng.standard_normal((take, n))
        norms_sq = np.einsum("ij,ij->i", z, z)
        # axis from the red alert codeword toward the origin is the 1 direction
        cosines = z.sum(axis=1) / (sqrt_n * np.sqrt(np.maximum(norms_sq, 1e-300)))
        hits += int(np.sum((norms_sq >= min_dist_sq) & (cosines >= cos_thresh)))
        done += take
    p_hat = hits / trials
    return p_hat, _ci95(p_hat, trials)


def exponent_fit(
    params: ChannelParams, rate: float, n_grid: Sequence[int]
) -> ExponentFit:
    """Finite-n exponent estimates -(1/n) ln p_MD at the idealized geometry."""
    n_grid = list(n_grid)
    if any(b <= a for a, b in zip(n_grid, n_grid[1:])):
        raise InvalidArgumentError("n_grid must be strictly ascending")
    if any(n < 2 for n in n_grid):
        raise InvalidArgumentError("every n must be >= 2")
    geom = converse_geometry(params, rate)
    target = red_alert_exponent(params, rate)
    estimates = []
    deficits = []
    for n in n_grid:
        est = -exact_pmd_log(n, params.noise_var, geom) / n
        estimates.append((n, est))
        deficits.append(est - target)
    return ExponentFit(
        per_n_estimates=estimates,
        limit_estimate=estimates[-1][1],
        deficits=deficits,
    )


def bsc_exact_pmd(n: int, p: float, weight_threshold: int) -> float:
    """ln P(weight(y) >= threshold | red alert sent) for the BSC weight test."""
    if not 0.0 < p < 1.0:
        raise InvalidArgumentError(f"crossover must lie in (0, 1), got {p}")
    if not 0 <= weight_threshold <= n:
        raise InvalidArgumentError(
            f"threshold must lie in 0..{n}, got {weight_threshold}"
        )
    if weight_threshold == 0:
        return 0.0
    k = np.arange(weight_threshold, n + 1)
    log_terms = (
        gammaln(n + 1)
        - gammaln(k + 1)
        - gammaln(n - k + 1)
        + k * math.log(p)
        + (n - k) * math.log1p(-p)
    )
    return float(logsumexp(log_terms))


def default_bsc_threshold(n: int, p: float, q: float) -> int:
    """Weight threshold biased 4 sigma below the standard-codeword mean weight."""
    qp = binary_convolution(q, p)
    tau = math.ceil(n * qp - 4.0 * math.sqrt(n * qp * (1.0 - qp)))
    return min(max(tau, 0), n)
