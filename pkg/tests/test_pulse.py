import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from cvpulse.pulse import (
    DeviceTimingConfig, EdgeTiming, Instruction, PulseEnvelope, PulseSchedule,
    build_two_qubit_schedule, envelope_area, envelope_sample, reduction_ratio, snap, total_time,
)

DT = 2 / 9


@settings(max_examples=30, deadline=None)
@given(st.floats(0.01, 1), st.floats(1, 30), st.floats(0, 60), st.floats(0, 300))
def test_envelope_area_matches_quadrature(a, sigma, tau_r, tau_w):
    e = PulseEnvelope(a, sigma, tau_r, tau_w)
    if e.duration == 0:
        return
    pts = [tau_r, tau_r + tau_w] if 0 < tau_r < e.duration else None
    num, _ = quad(lambda t: envelope_sample(e, min(t, math.nextafter(e.duration, 0))),
                  0, e.duration, points=pts, limit=200)
    assert envelope_area(e) == pytest.approx(num, rel=1e-7, abs=1e-9)


def test_envelope_peak_and_bounds():
    e = PulseEnvelope(0.5, 10, 20, 40)
    assert e.duration == 80
    assert envelope_sample(e, 30) == 0.5
    assert envelope_sample(e, 0) < 0.5
    with pytest.raises(ValueError):
        envelope_sample(e, 80)
    with pytest.raises(ValueError):
        PulseEnvelope(1.5, 1, 1, 1)


@settings(max_examples=100, deadline=None)
@given(st.floats(0, 1e4))
def test_snap_rounds_up_to_grid_and_is_idempotent(t):
    s = snap(t, DT)
    assert s >= t - 1e-6 * DT
    assert s - t < DT
    assert snap(s, DT) == pytest.approx(s)
    assert abs(s / DT - round(s / DT)) < 1e-6


def test_overlap_is_rejected():
    with pytest.raises(ValueError, match="overlapping"):
        PulseSchedule((Instruction("d0", 0, 10, "a"), Instruction("d0", 5, 10, "b")))
    PulseSchedule((Instruction("d0", 0, 10, "a"), Instruction("d1", 5, 10, "b")))


def test_then_is_sequential():
    a = PulseSchedule((Instruction("d0", 0, 10, "a"),))
    b = PulseSchedule((Instruction("d1", 0, 4, "b"),))
    assert total_time(a.then(b)) == 14
    assert total_time(a.merged(b)) == 10


def test_cx_and_cv_templates(device):
    cfg = device.timing
    cx = build_two_qubit_schedule("CX", cfg, (1, 4))
    assert total_time(cx) == pytest.approx(2080 * DT)
    for ins in cx.instructions:
        assert abs(ins.start / DT - round(ins.start / DT)) < 1e-6
    labels = {i.label for i in cx.instructions}
    assert {"CR+", "CR-", "cancel+", "cancel-", "X(pi) echo"} <= labels
    assert {i.channel for i in cx.instructions} == {"d1", "d4", "u3"}


def test_model_cv_halves_the_cr_segment():
    cfg = DeviceTimingConfig(35.5, 128 * DT, {(1, 4): EdgeTiming(1, 4, 624 * DT)})
    assert cfg.cr_total_ns((1, 4), "CV") == pytest.approx(440 * DT)
    assert total_time(build_two_qubit_schedule("CV", cfg, (1, 4))) == pytest.approx(1200 * DT)


def test_reversed_pair_adds_hadamard_layers(device):
    fwd = total_time(build_two_qubit_schedule("CX", device.timing, (1, 4)))
    rev = total_time(build_two_qubit_schedule("CX", device.timing, (4, 1)))
    assert rev - fwd == pytest.approx(2 * 160 * DT)


def test_unknown_pair_and_kind():
    cfg = DeviceTimingConfig(35.5, 28.4, {(1, 4): EdgeTiming(1, 4, 100)})
    with pytest.raises(KeyError):
        build_two_qubit_schedule("CX", cfg, (0, 4))
    with pytest.raises(ValueError):
        build_two_qubit_schedule("SWAP", cfg, (1, 4))


def test_reduction_ratio():
    assert reduction_ratio(994, 343) == pytest.approx(0.6549, abs=1e-4)
    with pytest.raises(ValueError):
        reduction_ratio(0, 1)


def test_text_and_json_exports(device):
    s = build_two_qubit_schedule("CV", device.timing, (1, 4))
    text = s.to_text()
    assert text.splitlines()[0] == "channel,start_ns,duration_ns,label"
    d = json.loads(s.to_json())
    assert d["total_ns"] == pytest.approx(total_time(s))
    assert len(d["instructions"]) == len(s.instructions)


def test_short_edge_cv_keeps_only_the_flanks():
    cfg = DeviceTimingConfig(35.5, 128 * DT, {(0, 1): EdgeTiming(0, 1, 119 * DT)})
    assert cfg.cr_total_ns((0, 1), "CV") == pytest.approx(256 * DT)
    with pytest.raises(ValueError):
        cfg.cr_total_ns((0, 1), "CV", flat_top_override=-1.0)
