"""Rate sweeps and figure-data generation (CSV emission, no plotting)."""

import math
from io import StringIO

from .errors import InvalidArgumentError
from .exponents import (
    ChannelParams,
    awgn_capacity,
    conical_exponent,
    red_alert_exponent,
)

LN2 = math.log(2.0)

SCHEMA_VERSION = 1

FIGURE_NAMES = ("fig7", "fig8", "fig10")


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def exponent_sweep(params: ChannelParams, points: int = 101):
    """Table of (rate_nats, e_offset, e_conical_printed, e_conical_corrected,
    capacity) over `points` rates in [0, C]."""
    if points < 2:
        raise InvalidArgumentError(f"need at least 2 sweep points, got {points}")
    cap = awgn_capacity(params)
    rows = []
    for i in range(points):
        rate = cap * i / (points - 1)
        rows.append(
            (
                rate,
                red_alert_exponent(params, rate),
                conical_exponent(params, rate, "printed"),
                conical_exponent(params, rate, "corrected"),
                cap,
            )
        )
    return rows


def _fmt(value: float) -> str:
    return repr(float(value))


def _write_csv(header_note: str, columns, rows) -> str:
    buf = StringIO()
    buf.write(f"# redalert csv schema v{SCHEMA_VERSION}; {header_note}\n")
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join("" if v is None else _fmt(v) for v in row) + "\n")
    return buf.getvalue()


def _offset_family_csv(name: str, p_avg_db: float, points: int) -> str:
    p_avg = db_to_linear(p_avg_db)
    multipliers = (1, 2, 3)
    params_by_mult = {
        k: ChannelParams(p_avg=p_avg, p_alert=k * p_avg, noise_var=1.0)
        for k in multipliers
    }
    cap = awgn_capacity(params_by_mult[1])
    rows = []
    for i in range(points):
        rate = cap * i / (points - 1)
        rows.append(
            (rate, rate / LN2)
            + tuple(red_alert_exponent(params_by_mult[k], rate) for k in multipliers)
        )
    columns = ["rate_nats", "rate_bits"] + [f"e_alert_{k}x" for k in multipliers]
    note = (
        f"{name}: optimal red-alert exponent, p_avg = {p_avg_db} dB, noise_var = 1, "
        "p_alert multipliers 1x/2x/3x; Shannon 1959 sphere-packing overlay omitted"
    )
    return _write_csv(note, columns, rows)


def _offset_vs_conical_csv(points: int) -> str:
    """Offset vs conical exponents for p_avg in {0, 5, 10} dB, p_alert = 2 p_avg.

    Capacities differ per power level, so each level carries its own rate
    column; all levels share a normalized rate-fraction grid so every curve
    ends exactly at its own capacity.
    """
    levels = (0, 5, 10)
    columns = ["rate_frac"]
    per_level = []
    for db in levels:
        p_avg = db_to_linear(db)
        params = ChannelParams(p_avg=p_avg, p_alert=2 * p_avg, noise_var=1.0)
        per_level.append((params, awgn_capacity(params)))
        tag = f"p{db}db"
        columns += [
            f"rate_nats_{tag}",
            f"e_offset_{tag}",
            f"e_conical_corrected_{tag}",
            f"e_conical_printed_{tag}",
        ]
    rows = []
    for i in range(points):
        frac = i / (points - 1)
        row = [frac]
        for params, cap in per_level:
            rate = frac * cap
            row += [
                rate,
                red_alert_exponent(params, rate),
                conical_exponent(params, rate, "corrected"),
                conical_exponent(params, rate, "printed"),
            ]
        rows.append(tuple(row))
    note = (
        "fig10: offset vs conical red-alert exponents, p_avg in {0,5,10} dB, "
        "p_alert = 2 p_avg, noise_var = 1; rate columns are per power level "
        "because capacities differ"
    )
    return _write_csv(note, columns, rows)


def figure_csv(name: str, points: int = 201) -> str:
    """CSV for one of the named figure reproductions."""
    if name == "fig7":
        return _offset_family_csv("fig7", -5.0, points)
    if name == "fig8":
        return _offset_family_csv("fig8", 15.0, points)
    if name == "fig10":
        return _offset_vs_conical_csv(points)
    raise InvalidArgumentError(f"unknown figure {name!r}; expected one of {FIGURE_NAMES}")
