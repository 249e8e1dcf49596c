"""Pydantic request/response models for the HTTP service."""

import math
from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator

LN2 = math.log(2.0)


class AwgnChannelConfig(BaseModel):
    p_avg_db: float
    p_alert_db: float
    noise_var: float = 1.0


class BscChannelConfig(BaseModel):
    p: float = Field(gt=0.0, lt=0.5)
    q: float = Field(gt=0.5, lt=1.0)


class RateMixin(BaseModel):
    """Exactly one of rate_nats / rate_bits must be given."""

    rate_nats: Optional[float] = None
    rate_bits: Optional[float] = None

    @model_validator(mode="after")
    def _one_rate(self):
        if (self.rate_nats is None) == (self.rate_bits is None):
            raise ValueError("exactly one of rate_nats or rate_bits must be set")
        return self

    @property
    def rate_in_nats(self) -> float:
        if self.rate_nats is not None:
            return self.rate_nats
        return self.rate_bits * LN2


class ExponentRequest(BaseModel):
    channel: AwgnChannelConfig
    points: int = 101
    units: Literal["nats", "bits"] = "nats"


class ExponentRow(BaseModel):
    rate: float
    e_offset: float
    e_conical_printed: float
    e_conical_corrected: float
    capacity: float


class ExponentResponse(BaseModel):
    units: Literal["nats", "bits"]
    rows: list[ExponentRow]


class FigureRequest(BaseModel):
    name: Literal["fig7", "fig8", "fig10"]
    points: int = 201


class FigureResponse(BaseModel):
    name: str
    csv: str


class SimulateRequest(RateMixin):
    awgn: Optional[AwgnChannelConfig] = None
    bsc: Optional[BscChannelConfig] = None
    n: int = Field(ge=2)
    epsilon_nats: Optional[float] = None
    epsilon_bits: Optional[float] = None
    trials: int = Field(ge=1, default=10_000)
    seed: int = Field(ge=0, default=0)
    delta: Optional[float] = None
    weight_threshold: Optional[int] = None
    workers: int = Field(ge=1, default=1)
    codeword_cap: Optional[int] = None

    @model_validator(mode="after")
    def _one_channel(self):
        if (self.awgn is None) == (self.bsc is None):
            raise ValueError("exactly one of awgn or bsc must be set")
        if self.awgn is not None:
            if (self.epsilon_nats is None) == (self.epsilon_bits is None):
                raise ValueError(
                    "awgn simulations need exactly one of epsilon_nats or epsilon_bits"
                )
        return self

    @property
    def epsilon_in_nats(self) -> Optional[float]:
        if self.epsilon_nats is not None:
            return self.epsilon_nats
        if self.epsilon_bits is not None:
            return self.epsilon_bits * LN2
        return None


class SimulateResponse(BaseModel):
    result: dict
