"""Device configuration file: timing, per-edge CR data, readout confusion.

The file is a single JSON document::

    {
      "timing": {"dt_ns": ..., "single_qubit_pulse_ns": ..., "cr_edge_ns": ...},
      "edges": {"1-4": {"cr_flat_top_ns": ..., "control_channel": "u3",
                        "cv_cr_flat_top_ns": ..., "cr_coefficients": {...}}},
      "confusion": {"1": [[p00, p01], [p10, p11]]},
      "nominal_durations": {"tau_cx_ns": ..., "t_cv_ns": ...},
      "layouts": {"two_qubit": [1, 4], "three_qubit": [0, 1, 4]},
      "gate_durations_ns": {"SWAP": ...},
      "reported_totals_ns": {...}
    }

Edge keys read "control-target" in the native CR direction. Only ``timing``
and ``edges`` are required.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .crmodel import CRCoefficients
from .pulse import DEFAULT_DT_NS, DeviceTimingConfig, EdgeTiming


@dataclass(frozen=True)
class DeviceConfig:
    timing: DeviceTimingConfig
    cr_coefficients: dict = field(default_factory=dict)  # (c, t) -> CRCoefficients
    confusion: dict = field(default_factory=dict)        # qubit -> 2x2 array
    tau_cx_ns: float | None = None
    t_cv_ns: float | None = None
    layouts: dict = field(default_factory=dict)
    gate_durations_ns: dict = field(default_factory=dict)
    reported_totals_ns: dict = field(default_factory=dict)

    def nominal(self, kind: str) -> float:
        """Nominal CR duration used as the sweep centre for ``kind`` in {CV, CX}."""
        if self.tau_cx_ns is None:
            raise ValueError("config has no nominal_durations.tau_cx_ns")
        if kind.upper() == "CX":
            return self.tau_cx_ns
        return self.t_cv_ns if self.t_cv_ns is not None else self.tau_cx_ns / 2

    def layout(self, num_qubits: int):
        key = {2: "two_qubit", 3: "three_qubit"}.get(num_qubits)
        return self.layouts.get(key) if key else None


def _pair(key: str) -> tuple[int, int]:
    try:
        a, b = (int(s) for s in key.split("-"))
    except ValueError:
        raise ValueError(f"edge key {key!r} must look like 'control-target'") from None
    return a, b


def parse_device_config(d: dict) -> DeviceConfig:
    try:
        t = d["timing"]
        edges_raw = d["edges"]
    except KeyError as exc:
        raise ValueError(f"device config is missing {exc}") from None
    edges, coeffs = {}, {}
    for key, e in edges_raw.items():
        pair = _pair(key)
        edges[pair] = EdgeTiming(pair[0], pair[1], float(e["cr_flat_top_ns"]),
                                 e.get("control_channel", ""),
                                 e.get("cv_cr_flat_top_ns"))
        if "cr_coefficients" in e:
            coeffs[pair] = CRCoefficients.from_dict(e["cr_coefficients"])
    timing = DeviceTimingConfig(
        single_qubit_pulse_ns=float(t["single_qubit_pulse_ns"]),
        cr_edge_ns=float(t["cr_edge_ns"]),
        edges=edges,
        dt=float(t.get("dt_ns", DEFAULT_DT_NS)),
        **{k: float(t[k]) for k in ("cr_sigma_ns", "cr_amplitude", "cancel_amplitude",
                                    "single_qubit_amplitude") if k in t},
    )
    confusion = {}
    for q, m in d.get("confusion", {}).items():
        m = np.asarray(m, dtype=float)
        if m.shape != (2, 2) or np.any(m < 0) or np.any(m > 1) or not np.allclose(m.sum(axis=0), 1):
            raise ValueError(f"confusion matrix for qubit {q} must be 2x2 column-stochastic")
        confusion[int(q)] = m
    nom = d.get("nominal_durations", {})
    tau_cx = nom.get("tau_cx_ns")
    t_cv = nom.get("t_cv_ns")
    if tau_cx is not None and tau_cx <= 0 or t_cv is not None and t_cv <= 0:
        raise ValueError("nominal durations must be positive")
    return DeviceConfig(
        timing=timing, cr_coefficients=coeffs, confusion=confusion,
        tau_cx_ns=None if tau_cx is None else float(tau_cx),
        t_cv_ns=None if t_cv is None else float(t_cv),
        layouts={k: [int(q) for q in v] for k, v in d.get("layouts", {}).items()},
        gate_durations_ns={k: float(v) for k, v in d.get("gate_durations_ns", {}).items()},
        reported_totals_ns={k: float(v) for k, v in d.get("reported_totals_ns", {}).items()},
    )


def load_device_config(path) -> DeviceConfig:
    try:
        d = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: not valid JSON ({exc})") from None
    return parse_device_config(d)
