"""End-to-end simulation runs: build a codebook, estimate error rates,
evaluate the exact missed-detection probability, and package the result as a
JSON-serializable record."""

import math
from typing import Optional

from .codec import (
    AwgnChannel,
    BscChannel,
    DEFAULT_CODEWORD_CAP,
    build_bsc_codebook,
    build_offset_codebook,
)
from .errors import InvalidArgumentError
from .estimate import (
    bsc_exact_pmd,
    default_bsc_threshold,
    exact_pmd_log,
    mc_error_rates,
)
from .exponents import (
    ChannelParams,
    DesignParams,
    decoder_geometry,
    derive_design_params,
)


def default_decoder_slack(params: ChannelParams, design: DesignParams) -> float:
    """Finite-n slack for the conical-shell thresholds.

    Four standard deviations of the per-dimension squared distance between
    the red alert codeword and a standard codeword plus noise, clipped so the
    widened cone stays inside (0, pi/2).
    """
    p, pa, nvar = params.p_avg, params.p_alert, params.noise_var
    c = math.sqrt(pa) + math.sqrt((1.0 - design.alpha) * p)
    s2 = design.alpha * p - design.lam + nvar
    sd = math.sqrt((4.0 * c * c * s2 + 2.0 * s2 * s2) / design.n)
    offset_term = 2.0 * math.sqrt(pa * (1.0 - design.alpha) * p)
    psi0 = math.asin(
        math.sqrt(
            (design.alpha * p + nvar - design.lam)
            / (pa + p + offset_term + nvar - design.lam)
        )
    )
    return min(4.0 * sd, 0.9 * (math.pi / 2 - psi0))


def run_awgn_simulation(
    params: ChannelParams,
    n: int,
    rate: float,
    epsilon: float,
    trials: int,
    seed: int,
    delta: Optional[float] = None,
    workers: int = 1,
    codeword_cap: int = DEFAULT_CODEWORD_CAP,
) -> dict:
    design = derive_design_params(params, n, rate, epsilon)
    if delta is None:
        delta = default_decoder_slack(params, design)
    cb = build_offset_codebook(params, design, seed, cap=codeword_cap)
    geom = decoder_geometry(params, design.alpha, design.lam, delta)
    est = mc_error_rates(cb, geom, AwgnChannel(params.noise_var), trials, seed,
                         workers=workers)
    log_p_md = exact_pmd_log(n, params.noise_var, geom)
    return {
        "mode": "awgn",
        "params": {
            "p_avg": params.p_avg,
            "p_alert": params.p_alert,
            "noise_var": params.noise_var,
        },
        "design": {
            "n": n,
            "rate_nats": rate,
            "epsilon_nats": epsilon,
            "alpha": design.alpha,
            "lambda": design.lam,
            "num_standard": cb.num_standard,
        },
        "geometry": {
            "min_distance_sq_per_dim": geom.min_distance_sq_per_dim,
            "half_angle": geom.half_angle,
            "beta": geom.beta,
            "delta": delta,
        },
        "estimates": {
            "log_p_md": log_p_md,
            "p_fa": est.p_fa,
            "p_msg": est.p_msg,
            "p_msg_unconditional": est.p_msg_unconditional,
            "ci95": est.ci95,
        },
        "trials": trials,
        "seed": seed,
    }


def run_bsc_simulation(
    crossover: float,
    composition: float,
    n: int,
    rate: float,
    trials: int,
    seed: int,
    weight_threshold: Optional[int] = None,
    workers: int = 1,
    codeword_cap: int = DEFAULT_CODEWORD_CAP,
) -> dict:
    if not 0.0 < crossover < 0.5:
        raise InvalidArgumentError(f"crossover must lie in (0, 1/2), got {crossover}")
    cb = build_bsc_codebook(n, rate, composition, "bsc_fixed", seed, cap=codeword_cap)
    if weight_threshold is None:
        weight_threshold = default_bsc_threshold(n, crossover, composition)
    est = mc_error_rates(cb, weight_threshold, BscChannel(crossover), trials, seed,
                         workers=workers)
    log_p_md = bsc_exact_pmd(n, crossover, weight_threshold)
    return {
        "mode": "bsc",
        "params": {"crossover": crossover, "composition": composition},
        "design": {
            "n": n,
            "rate_nats": rate,
            "weight_threshold": weight_threshold,
            "num_standard": cb.num_standard,
        },
        "estimates": {
            "log_p_md": log_p_md,
            "p_fa": est.p_fa,
            "p_msg": est.p_msg,
            "p_msg_unconditional": est.p_msg_unconditional,
            "ci95": est.ci95,
        },
        "trials": trials,
        "seed": seed,
    }
