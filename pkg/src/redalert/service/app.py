"""FastAPI service exposing the exponent sweeps, figure data and simulations."""

import math

from fastapi import FastAPI, HTTPException

from ..codec import DEFAULT_CODEWORD_CAP
from ..errors import (
    CandidateExhaustedError,
    EmptyCodebookError,
    InfeasibleDesignError,
    InsufficientTrialsError,
    InvalidArgumentError,
    TooManyCodewordsError,
)
from ..exponents import ChannelParams
from ..figures import db_to_linear, exponent_sweep, figure_csv
from ..simulate import run_awgn_simulation, run_bsc_simulation
from .schemas import (
    ExponentRequest,
    ExponentResponse,
    ExponentRow,
    FigureRequest,
    FigureResponse,
    SimulateRequest,
    SimulateResponse,
)

LN2 = math.log(2.0)

app = FastAPI(title="redalert", version="0.1.0")

_INVALID = (InvalidArgumentError, InfeasibleDesignError, EmptyCodebookError,
            InsufficientTrialsError, ValueError)
_RESOURCE = (TooManyCodewordsError, CandidateExhaustedError)


def _http_error(exc: Exception) -> HTTPException:
    if isinstance(exc, _RESOURCE):
        return HTTPException(status_code=409,
                             detail={"code": "resource-cap", "message": str(exc)})
    return HTTPException(status_code=400,
                         detail={"code": "invalid-input", "message": str(exc)})


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/exponent", response_model=ExponentResponse)
def exponent(req: ExponentRequest) -> ExponentResponse:
    try:
        params = ChannelParams(
            p_avg=db_to_linear(req.channel.p_avg_db),
            p_alert=db_to_linear(req.channel.p_alert_db),
            noise_var=req.channel.noise_var,
        )
        rows = exponent_sweep(params, points=req.points)
    except _INVALID as exc:
        raise _http_error(exc) from exc
    scale = 1.0 / LN2 if req.units == "bits" else 1.0
    return ExponentResponse(
        units=req.units,
        rows=[
            ExponentRow(
                rate=rate * scale,
                e_offset=e_off * scale,
                e_conical_printed=e_p * scale,
                e_conical_corrected=e_c * scale,
                capacity=cap * scale,
            )
            for rate, e_off, e_p, e_c, cap in rows
        ],
    )


@app.post("/figure", response_model=FigureResponse)
def figure(req: FigureRequest) -> FigureResponse:
    try:
        csv = figure_csv(req.name, points=req.points)
    except _INVALID as exc:
        raise _http_error(exc) from exc
    return FigureResponse(name=req.name, csv=csv)


@app.post("/simulate", response_model=SimulateResponse)
def simulate(req: SimulateRequest) -> SimulateResponse:
    cap = req.codeword_cap if req.codeword_cap is not None else DEFAULT_CODEWORD_CAP
    try:
        if req.awgn is not None:
            params = ChannelParams(
                p_avg=db_to_linear(req.awgn.p_avg_db),
                p_alert=db_to_linear(req.awgn.p_alert_db),
                noise_var=req.awgn.noise_var,
            )
            result = run_awgn_simulation(
                params,
                n=req.n,
                rate=req.rate_in_nats,
                epsilon=req.epsilon_in_nats,
                trials=req.trials,
                seed=req.seed,
                delta=req.delta,
                workers=req.workers,
                codeword_cap=cap,
            )
        else:
            result = run_bsc_simulation(
                crossover=req.bsc.p,
                composition=req.bsc.q,
                n=req.n,
                rate=req.rate_in_nats,
                trials=req.trials,
                seed=req.seed,
                weight_threshold=req.weight_threshold,
                workers=req.workers,
                codeword_cap=cap,
            )
    except _RESOURCE as exc:
        raise _http_error(exc) from exc
    except _INVALID as exc:
        raise _http_error(exc) from exc
    return SimulateResponse(result=result)
