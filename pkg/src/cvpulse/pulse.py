"""Gaussian-square envelopes, multi-channel pulse schedules, gate-time accounting.

All times are in ns. Schedules are immutable; builders return legalized
schedules whose starts and durations are multiples of the device granularity.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

DEFAULT_DT_NS = 2.0 / 9.0
_SNAP_EPS = 1e-6


@dataclass(frozen=True)
class PulseEnvelope:
    """Flat-top pulse with Gaussian flanks of length ``tau_r`` and width ``tau_w``."""

    amplitude: float
    sigma: float
    tau_r: float
    tau_w: float

    def __post_init__(self):
        if not 0.0 <= self.amplitude <= 1.0:
            raise ValueError("amplitude must lie in [0, 1]")
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")
        if self.tau_r < 0 or self.tau_w < 0:
            raise ValueError("edge length and flat-top width must be non-negative")

    @property
    def duration(self) -> float:
        return envelope_duration(self)


def envelope_duration(e: PulseEnvelope) -> float:
    return 2.0 * e.tau_r + e.tau_w


def envelope_sample(e: PulseEnvelope, t: float) -> float:
    """Envelope value at time ``t`` in [0, duration).

    The Gaussian flanks are centred on the flat-top joins (t = tau_r and
    t = tau_r + tau_w) so that the waveform is continuous and peaks at A.
    """
    td = envelope_duration(e)
    if not 0.0 <= t < td:
        raise ValueError(f"t={t} outside [0, {td})")
    if t < e.tau_r:
        return e.amplitude * math.exp(-0.5 * ((t - e.tau_r) / e.sigma) ** 2)
    if t < e.tau_r + e.tau_w:
        return e.amplitude
    return e.amplitude * math.exp(-0.5 * ((t - e.tau_r - e.tau_w) / e.sigma) ** 2)


def envelope_area(e: PulseEnvelope) -> float:
    """Integral of the envelope: A tau_w plus two half-Gaussian-truncated flanks."""
    edge = e.sigma * math.sqrt(math.pi / 2.0) * math.erf(e.tau_r / (e.sigma * math.sqrt(2.0)))
    return e.amplitude * (e.tau_w + 2.0 * edge)


def snap(t: float, dt: float) -> float:
    """Round ``t`` up to the next multiple of ``dt`` (idempotent on the grid)."""
    return math.ceil(t / dt - _SNAP_EPS) * dt


@dataclass(frozen=True)
class Instruction:
    channel: str
    start: float
    duration: float
    label: str
    envelope: PulseEnvelope | None = None

    @property
    def end(self) -> float:
        return self.start + self.duration

    @property
    def virtual(self) -> bool:
        return self.duration == 0.0


@dataclass(frozen=True)
class PulseSchedule:
    instructions: tuple[Instruction, ...] = ()
    dt: float = DEFAULT_DT_NS

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt granularity must be positive")
        by_channel: dict[str, list[Instruction]] = {}
        for ins in self.instructions:
            if ins.start < 0 or ins.duration < 0:
                raise ValueError(f"negative time in instruction {ins}")
            if ins.duration > 0:
                by_channel.setdefault(ins.channel, []).append(ins)
        for ch, items in by_channel.items():
            items.sort(key=lambda i: i.start)
            for a, b in zip(items, items[1:]):
                if b.start < a.end - 1e-9:
                    raise ValueError(f"overlapping instructions on {ch}: {a.label!r} and {b.label!r}")

    @property
    def channels(self) -> list[str]:
        seen = []
        for ins in self.instructions:
            if ins.channel not in seen:
                seen.append(ins.channel)
        return seen

    def shifted(self, offset: float) -> "PulseSchedule":
        return PulseSchedule(tuple(replace(i, start=i.start + offset) for i in self.instructions), self.dt)

    def legalized(self) -> "PulseSchedule":
        return PulseSchedule(tuple(
            replace(i, start=snap(i.start, self.dt), duration=snap(i.duration, self.dt))
            for i in self.instructions), self.dt)

    def then(self, other: "PulseSchedule") -> "PulseSchedule":
        """Sequential composition: ``other`` starts when this schedule ends."""
        return PulseSchedule(self.instructions + other.shifted(total_time(self)).instructions, self.dt)

    def merged(self, other: "PulseSchedule", offset: float = 0.0) -> "PulseSchedule":
        """Overlay ``other`` shifted by ``offset``; raises on channel conflicts."""
        return PulseSchedule(self.instructions + other.shifted(offset).instructions, self.dt)

    def to_text(self) -> str:
        lines = ["channel,start_ns,duration_ns,label"]
        for i in sorted(self.instructions, key=lambda i: (i.start, i.channel)):
            lines.append(f"{i.channel},{i.start:.4f},{i.duration:.4f},{i.label}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps({
            "dt_ns": self.dt,
            "total_ns": total_time(self),
            "instructions": [
                {"channel": i.channel, "start_ns": i.start, "duration_ns": i.duration, "label": i.label}
                for i in sorted(self.instructions, key=lambda i: (i.start, i.channel))
            ],
        }, indent=2)


def total_time(s: PulseSchedule) -> float:
    return max((i.end for i in s.instructions), default=0.0)


@dataclass(frozen=True)
class EdgeTiming:
    """Calibrated CR data for one coupled pair, native direction control -> target."""

    control: int
    target: int
    cr_flat_top_ns: float
    control_channel: str = ""
    cv_cr_flat_top_ns: float | None = None

    @property
    def channel(self) -> str:
        return self.control_channel or f"u{self.control}_{self.target}"


@dataclass(frozen=True)
class DeviceTimingConfig:
    single_qubit_pulse_ns: float
    cr_edge_ns: float
    edges: dict = field(default_factory=dict)  # (control, target) -> EdgeTiming
    dt: float = DEFAULT_DT_NS
    cr_sigma_ns: float = 14.2
    cr_amplitude: float = 0.5
    cancel_amplitude: float = 0.05
    single_qubit_amplitude: float = 0.2

    def __post_init__(self):
        for name in ("single_qubit_pulse_ns", "cr_edge_ns", "dt"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        for e in self.edges.values():
            if e.cr_flat_top_ns < 0:
                raise ValueError("CR flat top must be non-negative")

    def edge(self, pair) -> tuple[EdgeTiming, bool]:
        """Edge data for ``pair`` and whether the pair runs against the native direction."""
        a, b = pair
        if (a, b) in self.edges:
            return self.edges[(a, b)], False
        if (b, a) in self.edges:
            return self.edges[(b, a)], True
        raise KeyError(f"no coupled edge between qubits {a} and {b}")

    def single_qubit_ns(self) -> float:
        return snap(self.single_qubit_pulse_ns, self.dt)

    def cr_total_ns(self, pair, kind: str = "CX", flat_top_override: float | None = None) -> float:
        """Length of one echo CR segment (both flanks plus flat top)."""
        edge, _ = self.edge(pair)
        cx_total = snap(2 * self.cr_edge_ns + edge.cr_flat_top_ns, self.dt)
        if flat_top_override is not None:
            flat = flat_top_override
        elif kind == "CX":
            return cx_total
        elif edge.cv_cr_flat_top_ns is not None:
            flat = edge.cv_cr_flat_top_ns
        else:
            # half the CX interaction time, flanks unchanged; on edges too short
            # for that the flat top vanishes and only the flanks remain
            flat = max(0.0, cx_total / 2 - 2 * self.cr_edge_ns)
        if flat < 0:
            raise ValueError("CR flat top must be non-negative")
        return snap(2 * self.cr_edge_ns + flat, self.dt)


def _gaussian_pulse(cfg: DeviceTimingConfig, channel: str, start: float, label: str) -> Instruction:
    dur = cfg.single_qubit_ns()
    env = PulseEnvelope(cfg.single_qubit_amplitude, dur / 4, dur / 2, 0.0)
    return Instruction(channel, start, dur, label, env)


def single_qubit_schedule(cfg: DeviceTimingConfig, qubit: int, label: str, pulses: int = 1) -> PulseSchedule:
    """``pulses`` back-to-back drive pulses; zero pulses gives a virtual (frame) update."""
    ch = f"d{qubit}"
    if pulses == 0:
        return PulseSchedule((Instruction(ch, 0.0, 0.0, f"{label} (virtual)"),), cfg.dt)
    sq = cfg.single_qubit_ns()
    return PulseSchedule(tuple(_gaussian_pulse(cfg, ch, k * sq, label) for k in range(pulses)), cfg.dt)


def build_two_qubit_schedule(kind: str, cfg: DeviceTimingConfig, pair,
                             cr_flat_top_override: float | None = None) -> PulseSchedule:
    """Echoed CR template for CX ([.]^1/2 locals) or CV ([.]^1/4 locals).

    Layout per native edge c -> t::

        d_c : ZI^k (virtual) | X(pi) |        | X(pi) |
        d_t : IX^k           |        cancel+ |       | cancel-
        u   :                |   CR+          |       |   CR-

    A pair given against the native direction is wrapped in Hadamard layers
    on both qubits.
    """
    if kind not in ("CX", "CV", "CVdg"):
        raise ValueError(f"no pulse template for {kind!r}")
    edge, reverse = cfg.edge(pair)
    c, t = edge.control, edge.target
    k = "1/2" if kind == "CX" else ("1/4" if kind == "CV" else "-1/4")
    sq = cfg.single_qubit_ns()
    cr = cfg.cr_total_ns(pair, "CX" if kind == "CX" else "CV", cr_flat_top_override)
    flat = cr - 2 * cfg.cr_edge_ns
    cr_env = PulseEnvelope(cfg.cr_amplitude, cfg.cr_sigma_ns, cfg.cr_edge_ns, flat)
    cancel_env = PulseEnvelope(cfg.cancel_amplitude, cfg.cr_sigma_ns, cfg.cr_edge_ns, flat)
    dc, dt_, u = f"d{c}", f"d{t}", edge.channel
    ins = [
        Instruction(dc, 0.0, 0.0, f"ZI^{k} (virtual)"),
        _gaussian_pulse(cfg, dc, 0.0, "X(pi) echo"),
        Instruction(dt_, 0.0, sq, f"IX^{k}",
                    PulseEnvelope(cfg.single_qubit_amplitude, sq / 4, sq / 2, 0.0)),
        Instruction(u, sq, cr, "CR+", cr_env),
        Instruction(dt_, sq, cr, "cancel+", cancel_env),
        _gaussian_pulse(cfg, dc, sq + cr, "X(pi) echo"),
        Instruction(u, 2 * sq + cr, cr, "CR-", cr_env),
        Instruction(dt_, 2 * sq + cr, cr, "cancel-", cancel_env),
    ]
    core = PulseSchedule(tuple(ins), cfg.dt).legalized()
    if not reverse:
        return core
    h = PulseSchedule((_gaussian_pulse(cfg, dc, 0.0, "H"), _gaussian_pulse(cfg, dt_, 0.0, "H")), cfg.dt)
    return h.then(core).then(h).legalized()


def reduction_ratio(baseline_ns: float, improved_ns: float) -> float:
    """Fractional gate-time saving (baseline - improved) / baseline."""
    if baseline_ns <= 0:
        raise ValueError("baseline time must be positive")
    return (baseline_ns - improved_ns) / baseline_ns
