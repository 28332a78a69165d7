"""Cross-resonance Hamiltonian model, effective ZX evolution and trial gates.

Coefficients are angular frequencies in rad/s; every duration crossing this
module's API is in nanoseconds.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kernels
from .gates import CV, CX, I2, X, de_power, pauli
from .linalg import expm_hermitian, kron

NS = 1e-9

ZP_TERMS = ("I", "X", "Y", "Z")
IQ_TERMS = ("X", "Y", "Z")


@dataclass(frozen=True)
class CRCoefficients:
    """Interaction strengths of the CR Hamiltonian (rad/s).

    ``amplitude`` and ``phase`` describe the drive that produced these
    strengths; they are carried as metadata and never used to derive them.
    """

    omega_ZI: float = 0.0
    omega_ZX: float = 0.0
    omega_ZY: float = 0.0
    omega_ZZ: float = 0.0
    omega_IX: float = 0.0
    omega_IY: float = 0.0
    omega_IZ: float = 0.0
    amplitude: float = 0.0
    phase: float = 0.0

    def __post_init__(self):
        vals = [self.omega_ZI, self.omega_ZX, self.omega_ZY, self.omega_ZZ,
                self.omega_IX, self.omega_IY, self.omega_IZ, self.amplitude, self.phase]
        if not all(np.isfinite(vals)):
            raise ValueError("CR coefficients must be finite")
        if self.amplitude < 0:
            raise ValueError("drive amplitude must be non-negative")

    @classmethod
    def from_dict(cls, d: dict) -> "CRCoefficients":
        known = {f for f in cls.__dataclass_fields__}
        extra = set(d) - known
        if extra:
            raise ValueError(f"unknown CR coefficient fields: {sorted(extra)}")
        return cls(**{k: float(v) for k, v in d.items()})

    def negated(self) -> "CRCoefficients":
        """All interaction strengths sign-flipped (a phase-flipped drive)."""
        return CRCoefficients(
            -self.omega_ZI, -self.omega_ZX, -self.omega_ZY, -self.omega_ZZ,
            -self.omega_IX, -self.omega_IY, -self.omega_IZ,
            self.amplitude, (self.phase + np.pi) % (2 * np.pi))


@dataclass(frozen=True)
class TrialGateSpec:
    kind: str
    tau_d: float
    nominal_duration: float

    def __post_init__(self):
        if self.kind not in ("CV", "CX"):
            raise ValueError(f"trial gate kind must be CV or CX, got {self.kind!r}")
        if self.tau_d < 0:
            raise ValueError("tau_d must be non-negative")
        if self.nominal_duration <= 0:
            raise ValueError("nominal duration must be positive")


def build_cr_hamiltonian(c: CRCoefficients) -> np.ndarray:
    h = np.zeros((4, 4), dtype=np.complex128)
    for p in ZP_TERMS:
        h += 0.5 * getattr(c, f"omega_Z{p}") * kron(pauli("Z"), pauli(p))
    for q in IQ_TERMS:
        h += 0.5 * getattr(c, f"omega_I{q}") * kron(I2, pauli(q))
    return h


def evolve_cr(c: CRCoefficients, t_ns: float) -> np.ndarray:
    """exp(-i t H_CR) for a duration in ns."""
    if t_ns < 0:
        raise ValueError("evolution time must be non-negative")
    return expm_hermitian(build_cr_hamiltonian(c), t_ns * NS)


def zx_angle(omega_zx: float, t_ns: float) -> float:
    """Exponent theta reached by the effective ZX drive: omega_ZX t / pi."""
    return omega_zx * t_ns * NS / np.pi


def zx_unitary(theta: float) -> np.ndarray:
    return de_power("Z", "X", theta)


_LOCAL_EXPONENT = {"CV": 0.25, "CX": 0.5}
_NOMINAL_THETA = {"CV": -0.25, "CX": -0.5}
_TARGET = {"CV": CV, "CX": CX}


def trial_theta(kind: str, tau_d, nominal):
    """theta(tau_d): -tau_d/(4 t_CV) for CV, -tau_d/(2 tau_CX) for CX."""
    scale = 4.0 if kind == "CV" else 2.0
    return -np.asarray(tau_d, dtype=float) / (scale * nominal)


def trial_gate(spec: TrialGateSpec) -> np.ndarray:
    k = _LOCAL_EXPONENT[spec.kind]
    theta = float(trial_theta(spec.kind, spec.tau_d, spec.nominal_duration))
    return de_power("Z", "I", k) @ zx_unitary(theta) @ de_power("I", "X", k)


def echo_composite(c_plus: CRCoefficients, c_minus: CRCoefficients, t_ns: float) -> np.ndarray:
    """(X(x)I) U_CR(c_minus, t) (X(x)I) U_CR(c_plus, t)."""
    xi = kron(X, I2)
    return xi @ evolve_cr(c_minus, t_ns) @ xi @ evolve_cr(c_plus, t_ns)


def analytic_sweep_fidelity(kind: str, nominal: float, grid) -> np.ndarray:
    """cos^2(pi dtheta / 2), dtheta measured from the nominal exponent."""
    dtheta = trial_theta(kind, grid, nominal) - _NOMINAL_THETA[kind]
    return np.cos(0.5 * np.pi * dtheta) ** 2


def fidelity_sweep(kind: str, nominal: float, grid, workers: int = 1) -> list[tuple[float, float]]:
    """Process fidelity of the trial gate against the exact gate over ``grid`` (ns).

    Matrices are built per grid point (optionally on ``workers`` threads) and
    scored in one batched kernel call; output order follows ``grid``.
    """
    if kind not in _TARGET:
        raise ValueError(f"sweep kind must be CV or CX, got {kind!r}")
    grid = [float(g) for g in grid]
    if not grid:
        raise ValueError("sweep grid is empty")
    if min(grid) < 0:
        raise ValueError("sweep durations must be non-negative")

    def build(tau):
        return trial_gate(TrialGateSpec(kind, tau, nominal))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            mats = list(pool.map(build, grid))
    else:
        mats = [build(t) for t in grid]
    fids = kernels.batch_trace_fidelity(np.stack(mats), _TARGET[kind])
    return [(t, float(min(1.0, f))) for t, f in zip(grid, fids)]
