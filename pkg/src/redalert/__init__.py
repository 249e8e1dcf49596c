"""Red-alert unequal error protection laboratory for AWGN and BSC channels."""

from .exponents import (
    ChannelParams,
    DecoderGeometry,
    DesignParams,
    awgn_capacity,
    bsc_red_alert_exponent,
    conical_exponent,
    converse_geometry,
    decoder_geometry,
    derive_design_params,
    red_alert_exponent,
)

__all__ = [
    "ChannelParams",
    "DecoderGeometry",
    "DesignParams",
    "awgn_capacity",
    "bsc_red_alert_exponent",
    "conical_exponent",
    "converse_geometry",
    "decoder_geometry",
    "derive_design_params",
    "red_alert_exponent",
]

__version__ = "0.1.0"
