"""Named gates, parametric families and unitary-level fidelities.

Two-qubit matrices use control (x) target ordering: the first listed qubit is
the most significant tensor factor.
"""
from __future__ import annotations

import numpy as np

from .linalg import as_matrix, kron

SQRT1_2 = 1.0 / np.sqrt(2.0)

I2 = np.eye(2, dtype=np.complex128)
X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)

PAULI = {"I": I2, "X": X, "Y": Y, "Z": Z}
PAULI_INDEX = ("I", "X", "Y", "Z")

H = SQRT1_2 * np.array([[1, 1], [1, -1]], dtype=np.complex128)
T = np.diag([1, np.exp(1j * np.pi / 4)]).astype(np.complex128)
TDG = T.conj().T
V = 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=np.complex128)


def controlled(u) -> np.ndarray:
    """|0><0| (x) I + |1><1| (x) u for a single-qubit ``u``."""
    m = np.eye(4, dtype=np.complex128)
    m[2:, 2:] = u
    return m


CX = controlled(X)
CV = controlled(V)
CVDG = controlled(V.conj().T)
SWAP = np.eye(4, dtype=np.complex128)[[0, 2, 1, 3]]
ISWAP = np.array([[1, 0, 0, 0], [0, 0, 1j, 0], [0, 1j, 0, 0], [0, 0, 0, 1]], dtype=np.complex128)
SQISWAP = np.array([
    [1, 0, 0, 0],
    [0, SQRT1_2, 1j * SQRT1_2, 0],
    [0, 1j * SQRT1_2, SQRT1_2, 0],
    [0, 0, 0, 1],
], dtype=np.complex128)
SQSWAP = np.array([
    [1, 0, 0, 0],
    [0, (1 + 1j) / 2, (1 - 1j) / 2, 0],
    [0, (1 - 1j) / 2, (1 + 1j) / 2, 0],
    [0, 0, 0, 1],
], dtype=np.complex128)
# CX(0->1) . CX(1->0): back-to-back CX gates with alternating controls
DCX = CX @ (SWAP @ CX @ SWAP)
TOFFOLI = np.eye(8, dtype=np.complex128)
TOFFOLI[6:, 6:] = X

# name -> (number of qubits, number of real parameters)
GATE_SPECS = {
    "CV": (2, 0), "CVdg": (2, 0), "CX": (2, 0), "SWAP": (2, 0), "iSWAP": (2, 0),
    "DCX": (2, 0), "SQiSWAP": (2, 0), "SQSWAP": (2, 0), "Toffoli": (3, 0),
    "H": (1, 0), "X": (1, 0), "Z": (1, 0), "T": (1, 0), "Tdg": (1, 0),
    "U2": (1, 2), "U3": (1, 3), "DEpow": (2, 3),
}
GATE_NAMES = tuple(GATE_SPECS)

_FIXED = {
    "CV": CV, "CVdg": CVDG, "CX": CX, "SWAP": SWAP, "iSWAP": ISWAP, "DCX": DCX,
    "SQiSWAP": SQISWAP, "SQSWAP": SQSWAP, "Toffoli": TOFFOLI,
    "H": H, "X": X, "Z": Z, "T": T, "Tdg": TDG,
}


def pauli(label: str) -> np.ndarray:
    try:
        return PAULI[label]
    except KeyError:
        raise ValueError(f"unknown Pauli label {label!r}") from None


def de_power(d: str, e: str | None, theta: float) -> np.ndarray:
    """[DE]^theta = exp(-i pi theta/2 D(x)E); with ``e=None`` the one-qubit [D]^theta.

    Pauli strings square to the identity, so the closed form
    cos(pi theta/2) I - i sin(pi theta/2) P is exact.
    """
    p = pauli(d) if e is None else kron(pauli(d), pauli(e))
    a = 0.5 * np.pi * theta
    return np.cos(a) * np.eye(p.shape[0], dtype=np.complex128) - 1j * np.sin(a) * p


def u3(theta: float, phi: float, lam: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([
        [c, -np.exp(1j * lam) * s],
        [np.exp(1j * phi) * s, np.exp(1j * (phi + lam)) * c],
    ], dtype=np.complex128)


def u2(phi: float, lam: float) -> np.ndarray:
    return SQRT1_2 * np.array([
        [1, -np.exp(1j * lam)],
        [np.exp(1j * phi), np.exp(1j * (phi + lam))],
    ], dtype=np.complex128)


def gate_arity(name: str) -> tuple[int, int]:
    """(qubits, parameters) for a gate name."""
    try:
        return GATE_SPECS[name]
    except KeyError:
        raise ValueError(f"unknown gate {name!r}") from None


def named_gate(name: str, params=()) -> np.ndarray:
    """Matrix of a named gate.

    ``DEpow`` takes ``[d, e, theta]`` with d, e indices into ``I, X, Y, Z``.
    """
    _, nparams = gate_arity(name)
    params = list(params)
    if len(params) != nparams:
        raise ValueError(f"{name} takes {nparams} parameters, got {len(params)}")
    if name == "U2":
        return u2(*params)
    if name == "U3":
        return u3(*params)
    if name == "DEpow":
        d, e, theta = params
        if d != int(d) or e != int(e) or not (0 <= d < 4 and 0 <= e < 4):
            raise ValueError("DEpow Pauli indices must be integers in 0..3")
        return de_power(PAULI_INDEX[int(d)], PAULI_INDEX[int(e)], theta)
    return _FIXED[name].copy()


def process_fidelity(u, v) -> float:
    """|Tr(u^dag v)|^2 / d^2; equals 1 exactly when u and v agree up to phase."""
    u = as_matrix(u, "u")
    v = as_matrix(v, "v")
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    d = u.shape[0]
    return float(min(1.0, abs(np.vdot(u, v)) ** 2 / d**2))


def average_gate_fidelity(u, v) -> float:
    """(d^2 F_p + d) / (d^2 + d), the average-gate-fidelity variant (reporting only)."""
    d = np.asarray(u).shape[0]
    fp = process_fidelity(u, v)
    return (d * d * fp + d) / (d * d + d)


def reverse_qubit_order(u) -> np.ndarray:
    """Convert between most- and least-significant-first qubit ordering."""
    u = as_matrix(u, "u")
    n = int(round(np.log2(u.shape[0])))
    if 2**n != u.shape[0]:
        raise ValueError("dimension is not a power of two")
    perm = [int(format(i, f"0{n}b")[::-1], 2) for i in range(2**n)] if n else [0]
    return u[np.ix_(perm, perm)]

