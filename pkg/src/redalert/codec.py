"""Codebook construction, channel simulation and decoding.

Constructions are pure functions of (params, design, seed). Codeword payloads
are generated from counter-based Philox streams keyed by (seed, purpose,
codeword index), so regeneration is deterministic and order-independent.
"""

import json
import math
from dataclasses import dataclass
from typing import Literal, Optional, Union

import numpy as np

from .errors import (
    CandidateExhaustedError,
    EmptyCodebookError,
    InvalidArgumentError,
    TooManyCodewordsError,
)
from .exponents import ChannelParams, DecoderGeometry, DesignParams, awgn_capacity
from .geometry import ConeSpec, region_contains

CodebookKind = Literal["offset", "conical", "bsc_fixed", "bsc_conical"]

DEFAULT_CODEWORD_CAP = 2**20
DEFAULT_CANDIDATE_CAP = 2**22

# stream purposes for the counter-based RNG
_PURPOSE_CODEWORD = 0
_PURPOSE_TRIAL = 1
_PURPOSE_CANDIDATE = 2


@dataclass(frozen=True)
class AwgnChannel:
    noise_var: float

    def __post_init__(self):
        if self.noise_var < 0:
            raise InvalidArgumentError(f"noise_var must be nonnegative, got {self.noise_var}")


@dataclass(frozen=True)
class BscChannel:
    crossover: float

    def __post_init__(self):
        if not 0.0 <= self.crossover < 0.5:
            raise InvalidArgumentError(
                f"crossover must lie in [0, 1/2), got {self.crossover}"
            )


Channel = Union[AwgnChannel, BscChannel]


@dataclass(frozen=True, eq=False)
class Codebook:
    n: int
    red_alert: np.ndarray
    standard: np.ndarray  # shape (M, n)
    design: Optional[DesignParams]
    kind: CodebookKind
    seed: int

    @property
    def num_standard(self) -> int:
        return self.standard.shape[0]

    def header(self) -> dict:
        """JSON-serializable header; payloads are regenerable from the seed."""
        out = {
            "kind": self.kind,
            "n": self.n,
            "m": int(self.num_standard),
            "seed": int(self.seed),
        }
        if self.design is not None:
            out["design"] = {
                "n": self.design.n,
                "rate": self.design.rate,
                "epsilon": self.design.epsilon,
                "alpha": self.design.alpha,
                "lambda": self.design.lam,
            }
        return out

    def header_json(self) -> str:
        return json.dumps(self.header(), sort_keys=True)


@dataclass(frozen=True, eq=False)
class ChannelOutput:
    y: np.ndarray
    true_message: int


def substream(seed: int, purpose: int, index: int) -> np.random.Generator:
    """Independent Philox stream keyed by (seed, purpose), counter offset by index."""
    bg = np.random.Philox(key=[np.uint64(seed), np.uint64(purpose)],
                          counter=[0, 0, np.uint64(index), 0])
    return np.random.Generator(bg)


def _message_count(n: int, rate: float, cap: int) -> int:
    log_m = n * rate
    if log_m > math.log(cap) + 1e-9:
        raise TooManyCodewordsError(
            f"ceil(e^(n R)) with n R = {log_m:.3f} nats exceeds the cap of {cap} codewords",
            required_log_count=log_m,
        )
    return max(1, math.ceil(math.exp(log_m) - 1e-9))


def _gaussian_rows(seed: int, purpose: int, count: int, n: int, sigma: float) -> np.ndarray:
    """count x n i.i.d. N(0, sigma^2) rows, one Philox stream per row."""
    out = np.empty((count, n))
    for i in range(count):
        out[i] = substream(seed, purpose, i).standard_normal(n)
    if sigma != 1.0:
        out *= sigma
    return out


def build_offset_codebook(
    params: ChannelParams,
    design: DesignParams,
    seed: int,
    cap: int = DEFAULT_CODEWORD_CAP,
) -> Codebook:
    """Offset construction: red alert at -sqrt(P_alert) 1, standard codewords
    i.i.d. N(0, alpha P - lambda) shifted by sqrt((1-alpha) P) 1."""
    n = design.n
    m = _message_count(n, design.rate, cap)
    var = design.alpha * params.p_avg - design.lam
    if var <= 0:
        raise InvalidArgumentError("codeword variance alpha*P - lambda must be positive")
    offset = math.sqrt((1.0 - design.alpha) * params.p_avg)
    standard = _gaussian_rows(seed, _PURPOSE_CODEWORD, m, n, math.sqrt(var))
    standard += offset
    red_alert = -math.sqrt(params.p_alert) * np.ones(n)
    return Codebook(n=n, red_alert=red_alert, standard=standard,
                    design=design, kind="offset", seed=seed)


def expurgate_to_peak_power(cb: Codebook, limit: float):
    """Drop standard codewords with ||x||^2 > n*limit.

    Returns (codebook, realized_rate) with realized_rate = ln(M')/n.
    """
    if limit < 0:
        raise InvalidArgumentError("power limit must be nonnegative")
    norms_sq = np.einsum("ij,ij->i", cb.standard, cb.standard)
    keep = norms_sq <= cb.n * limit
    if not np.any(keep):
        raise EmptyCodebookError(f"no codeword satisfies the peak power limit {limit}")
    survivors = cb.standard[keep]
    realized_rate = math.log(survivors.shape[0]) / cb.n
    out = Codebook(n=cb.n, red_alert=cb.red_alert, standard=survivors,
                   design=cb.design, kind=cb.kind, seed=cb.seed)
    return out, realized_rate


def build_conical_codebook(
    params: ChannelParams,
    n: int,
    rate: float,
    epsilon: float,
    seed: int,
    cap: int = DEFAULT_CODEWORD_CAP,
    candidate_cap: int = DEFAULT_CANDIDATE_CAP,
) -> Codebook:
    """Conical construction: i.i.d. N(0, P - eps) candidates filtered to the
    cone of half-angle theta + eps around the all-ones axis."""
    cap_rate = awgn_capacity(params)
    if not 0.0 <= rate < cap_rate - epsilon:
        raise InvalidArgumentError(
            f"need 0 <= rate < capacity - epsilon = {cap_rate - epsilon}, got {rate}"
        )
    if params.p_avg - epsilon <= 0:
        raise InvalidArgumentError("epsilon must be below p_avg for the candidate variance")
    m = _message_count(n, rate, cap)
    log_candidates = n * (cap_rate - epsilon)
    if log_candidates > math.log(candidate_cap) + 1e-9:
        raise TooManyCodewordsError(
            f"ceil(e^(n(C - eps))) with exponent {log_candidates:.3f} exceeds the "
            f"candidate cap of {candidate_cap}",
            required_log_count=log_candidates,
        )
    n_cand = max(m, math.ceil(math.exp(log_candidates) - 1e-9))
    theta = math.asin(math.exp(-(cap_rate - rate)))
    keep_angle = min(theta + epsilon, math.pi)
    cos_thresh = math.cos(keep_angle)
    sigma = math.sqrt(params.p_avg - epsilon)
    axis = np.ones(n) / math.sqrt(n)

    kept = []
    chunk = 4096
    drawn = 0
    idx = 0
    while drawn < n_cand and len(kept) < m:
        take = min(chunk, n_cand - drawn)
        rows = _gaussian_rows_block(seed, _PURPOSE_CANDIDATE, idx, take, n, sigma)
        idx += 1
        drawn += take
        norms = np.linalg.norm(rows, axis=1)
        cosines = rows @ axis / np.maximum(norms, 1e-300)
        inside = cosines >= cos_thresh
        for row in rows[inside]:
            kept.append(row)
            if len(kept) == m:
                break
    if len(kept) < m:
        raise CandidateExhaustedError(
            f"only {len(kept)} of the required {m} candidates fell inside the cone"
        )
    standard = np.array(kept)
    red_alert = -math.sqrt(params.p_alert) * np.ones(n)
    return Codebook(n=n, red_alert=red_alert, standard=standard,
                    design=None, kind="conical", seed=seed)


def _gaussian_rows_block(seed, purpose, block_index, count, n, sigma):
    """A block of candidate rows from a single stream (blocks are independent)."""
    rng = substream(seed, purpose, block_index)
    return sigma * rng.standard_normal((count, n))


def build_bsc_codebook(
    n: int,
    rate_nats: float,
    q: float,
    kind: Literal["bsc_fixed", "bsc_conical"],
    seed: int,
    cap: int = DEFAULT_CODEWORD_CAP,
    candidate_cap: int = DEFAULT_CANDIDATE_CAP,
) -> Codebook:
    """BSC constructions: fixed composition (weight exactly ceil(nq)) or
    conical (Bernoulli(1/2) candidates filtered to weight >= ceil(nq))."""
    if not 0.5 < q < 1.0:
        raise InvalidArgumentError(f"composition must lie in (1/2, 1), got {q}")
    weight = math.ceil(n * q)
    if weight > n:
        raise InvalidArgumentError(f"required weight {weight} exceeds blocklength {n}")
    m = _message_count(n, rate_nats, cap)
    if kind == "bsc_fixed":
        standard = np.zeros((m, n), dtype=np.uint8)
        for w in range(m):
            rng = substream(seed, _PURPOSE_CODEWORD, w)
            ones = rng.choice(n, size=weight, replace=False)
            standard[w, ones] = 1
    elif kind == "bsc_conical":
        kept = []
        chunk = 4096
        idx = 0
        drawn = 0
        while len(kept) < m and drawn < candidate_cap:
            take = min(chunk, candidate_cap - drawn)
            rng = substream(seed, _PURPOSE_CANDIDATE, idx)
            idx += 1
            drawn += take
            cands = (rng.random((take, n)) < 0.5).astype(np.uint8)
            heavy = cands.sum(axis=1) >= weight
            for row in cands[heavy]:
                kept.append(row)
                if len(kept) == m:
                    break
        if len(kept) < m:
            raise CandidateExhaustedError(
                f"only {len(kept)} of {m} Bernoulli(1/2) candidates reached weight {weight}"
            )
        standard = np.array(kept, dtype=np.uint8)
    else:
        raise InvalidArgumentError(f"unknown BSC codebook kind {kind!r}")
    red_alert = np.zeros(n, dtype=np.uint8)
    return Codebook(n=n, red_alert=red_alert, standard=standard,
                    design=None, kind=kind, seed=seed)


def transmit(cb: Codebook, message: int, channel: Channel,
             rng: np.random.Generator) -> ChannelOutput:
    """Send codeword `message` (0 = red alert) through the channel."""
    if not 0 <= message <= cb.num_standard:
        raise InvalidArgumentError(
            f"message must lie in 0..{cb.num_standard}, got {message}"
        )
    x = cb.red_alert if message == 0 else cb.standard[message - 1]
    if isinstance(channel, AwgnChannel):
        if cb.kind not in ("offset", "conical"):
            raise InvalidArgumentError(f"AWGN channel incompatible with {cb.kind} codebook")
        noise = (math.sqrt(channel.noise_var) * rng.standard_normal(cb.n)
                 if channel.noise_var > 0 else np.zeros(cb.n))
        return ChannelOutput(y=x + noise, true_message=message)
    if isinstance(channel, BscChannel):
        if cb.kind not in ("bsc_fixed", "bsc_conical"):
            raise InvalidArgumentError(f"BSC channel incompatible with {cb.kind} codebook")
        flips = (rng.random(cb.n) < channel.crossover).astype(np.uint8)
        return ChannelOutput(y=np.bitwise_xor(x, flips), true_message=message)
    raise InvalidArgumentError(f"unknown channel {channel!r}")


def decode_awgn(y, cb: Codebook, geom: DecoderGeometry) -> int:
    """Conical-shell rule, then nearest neighbor among the standard codewords.

    Returns 0 (red alert) unless y lies in the closed cone of half-angle psi
    around the axis from the red alert codeword toward the origin AND at
    distance >= L from the red alert codeword.
    """
    y = np.asarray(y, dtype=float)
    if y.shape != (cb.n,):
        raise InvalidArgumentError(f"received vector must have length {cb.n}")
    min_distance = math.sqrt(cb.n * geom.min_distance_sq_per_dim)
    cone = ConeSpec(apex=cb.red_alert, axis_point=np.zeros(cb.n),
                    half_angle=geom.half_angle)
    if not region_contains(y, cone, min_distance):
        return 0
    dists = np.linalg.norm(cb.standard - y[None, :], axis=1)
    return int(np.argmin(dists)) + 1


def decode_awgn_batch(ys: np.ndarray, cb: Codebook, geom: DecoderGeometry,
                      codeword_chunk: int = 8192) -> np.ndarray:
    """Vectorized decode_awgn over rows of ys; identical decisions."""
    ys = np.asarray(ys, dtype=float)
    min_distance_sq = cb.n * geom.min_distance_sq_per_dim
    rel = ys - cb.red_alert[None, :]
    dist_sq = np.einsum("ij,ij->i", rel, rel)
    axis = (np.zeros(cb.n) - cb.red_alert)
    axis /= np.linalg.norm(axis)
    cosines = np.clip(rel @ axis / np.maximum(np.sqrt(dist_sq), 1e-300), -1.0, 1.0)
    angles = np.arccos(cosines)
    standard_region = (dist_sq >= min_distance_sq) & (angles <= geom.half_angle)
    # the apex itself decodes to red alert whenever L > 0
    standard_region &= (dist_sq > 0) | (min_distance_sq <= 0)

    out = np.zeros(ys.shape[0], dtype=np.int64)
    idx = np.nonzero(standard_region)[0]
    if idx.size:
        sel = ys[idx]
        best = np.zeros(idx.size, dtype=np.int64)
        best_val = np.full(idx.size, np.inf)
        y_sq = np.einsum("ij,ij->i", sel, sel)
        m = cb.num_standard
        for start in range(0, m, codeword_chunk):
            block = cb.standard[start:start + codeword_chunk]
            b_sq = np.einsum("ij,ij->i", block, block)
            d = sel @ block.T
            d *= -2.0
            d += b_sq[None, :]
            d += y_sq[:, None]
            local_best = np.argmin(d, axis=1)
            local_val = d[np.arange(idx.size), local_best]
            better = local_val < best_val
            best[better] = local_best[better] + start
            best_val[better] = local_val[better]
        out[idx] = best + 1
    return out


def decode_bsc(y, cb: Codebook, weight_threshold: int) -> int:
    """Weight test for the red alert, then nearest standard codeword in Hamming
    distance (ties to the smallest index)."""
    y = np.asarray(y, dtype=np.uint8)
    if y.shape != (cb.n,):
        raise InvalidArgumentError(f"received vector must have length {cb.n}")
    if not 0 <= weight_threshold <= cb.n:
        raise InvalidArgumentError(
            f"weight threshold must lie in 0..{cb.n}, got {weight_threshold}"
        )
    if int(y.sum()) < weight_threshold:
        return 0
    dists = np.bitwise_xor(cb.standard, y[None, :]).sum(axis=1)
    return int(np.argmin(dists)) + 1
