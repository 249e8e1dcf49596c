"""Rate sweeps and figure CSV generation."""

import csv
import math

import numpy as np
import pytest

from redalert.errors import InvalidArgumentError
from redalert.exponents import ChannelParams, awgn_capacity, red_alert_exponent
from redalert.figures import db_to_linear, exponent_sweep, figure_csv


def _parse(text):
    lines = [l for l in text.splitlines() if not l.startswith("#")]
    rows = list(csv.reader(lines))
    return rows[0], np.array(rows[1:], dtype=float)


def test_db_to_linear():
    assert db_to_linear(0.0) == 1.0
    assert db_to_linear(10.0) == pytest.approx(10.0, rel=1e-14)
    assert db_to_linear(-5.0) == pytest.approx(10 ** -0.5, rel=1e-14)


def test_exponent_sweep_shape_and_endpoints():
    params = ChannelParams(1.0, 2.0, 1.0)
    rows = exponent_sweep(params, points=11)
    assert len(rows) == 11
    cap = awgn_capacity(params)
    assert rows[0][0] == 0.0
    assert rows[-1][0] == pytest.approx(cap, rel=1e-14)
    for rate, e_off, _, _, c in rows:
        assert c == pytest.approx(cap, rel=1e-14)
        assert e_off == pytest.approx(red_alert_exponent(params, rate), rel=1e-12)
    with pytest.raises(InvalidArgumentError):
        exponent_sweep(params, points=1)


@pytest.mark.parametrize("name", ["fig7", "fig8", "fig10"])
def test_figure_csv_deterministic(name):
    assert figure_csv(name, points=41) == figure_csv(name, points=41)


def test_unknown_figure():
    with pytest.raises(InvalidArgumentError):
        figure_csv("fig9")


@pytest.mark.parametrize("name,p_avg_db", [("fig7", -5.0), ("fig8", 15.0)])
def test_alert_power_family_curves(name, p_avg_db):
    header, data = _parse(figure_csv(name, points=41))
    assert header[:2] == ["rate_nats", "rate_bits"]
    p_avg = db_to_linear(p_avg_db)
    cap = awgn_capacity(ChannelParams(p_avg, p_avg, 1.0))
    assert data[-1, 0] == pytest.approx(cap, rel=1e-12)
    for k, col in ((1, 2), (2, 3), (3, 4)):
        curve = data[:, col]
        # positive everywhere including capacity, strictly decreasing in rate
        assert np.all(curve > 0)
        assert np.all(np.diff(curve) < 0)
        params = ChannelParams(p_avg, k * p_avg, 1.0)
        assert curve[0] == pytest.approx(red_alert_exponent(params, 0.0), rel=1e-12)
    # higher alert power gives a uniformly larger exponent
    assert np.all(data[:, 3] > data[:, 2])
    assert np.all(data[:, 4] > data[:, 3])


def test_offset_vs_conical_curves():
    header, data = _parse(figure_csv("fig10", points=41))
    assert header[0] == "rate_frac"
    for db in (0, 5, 10):
        tag = f"p{db}db"
        rate = data[:, header.index(f"rate_nats_{tag}")]
        off = data[:, header.index(f"e_offset_{tag}")]
        cor = data[:, header.index(f"e_conical_corrected_{tag}")]
        p_avg = db_to_linear(db)
        params = ChannelParams(p_avg, 2 * p_avg, 1.0)
        cap = awgn_capacity(params)
        assert rate[-1] == pytest.approx(cap, rel=1e-12)
        assert np.all(off >= cor - 1e-12)
        assert abs(off[-1] - cor[-1]) < 1e-9
        assert np.all(off[:-1] > cor[:-1] + 1e-6)  # strict gap away from capacity
        assert np.all(np.diff(off) < 0)
        assert off[-1] > 0


def test_csv_header_is_commented_schema_line():
    text = figure_csv("fig7", points=5)
    first = text.splitlines()[0]
    assert first.startswith("# redalert csv schema v")
