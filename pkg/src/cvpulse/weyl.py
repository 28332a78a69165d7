"""Canonical (KAK) coordinates, local invariants and n-gate reachability.

Coordinates follow U = k1 exp{-(i/2)(a XX + b YY + c ZZ)} k2, so CX sits at
[pi/2, 0, 0], SWAP at [pi/2, pi/2, pi/2] and the usual sqrt(SWAP) matrix at
[pi/4, pi/4, pi/4]. (With the opposite sign in the exponent sqrt(SWAP) and its
inverse trade places; base points and the reachable sets are unaffected.) The chamber is the tetrahedron
with vertices O=[0,0,0], A1=[pi,0,0], A2=[pi/2,pi/2,0], A3=[pi/2,pi/2,pi/2].
On its base (c = 0) the points [a, b, 0] and [pi - a, b, 0] are the same
class; :func:`canonical_coordinates` returns the one with a <= pi/2 and
:func:`mirror` gives the other.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .gates import X, Y, Z
from .linalg import check_unitary, kron

PI = np.pi
REACH_SLACK = 1e-9
EQUIV_TOL = 1e-8

MAGIC = np.sqrt(0.5) * np.array([
    [1, 0, 0, 1j],
    [0, 1j, 1, 0],
    [0, 1j, -1, 0],
    [1, 0, 0, -1j],
], dtype=np.complex128)
MAGIC_DAG = MAGIC.conj().T

# Eigenvalue signs of XX, YY, ZZ on each magic-basis vector (rows).
_SIGNS = np.real(np.array([
    np.diag(MAGIC_DAG @ kron(P, P) @ MAGIC) for P in (X, Y, Z)
])).T


class WeylPoint(NamedTuple):
    a: float
    b: float
    c: float

    def as_array(self) -> np.ndarray:
        return np.array(self, dtype=float)

    def close_to(self, other, tol: float = EQUIV_TOL) -> bool:
        return bool(np.max(np.abs(self.as_array() - np.asarray(other, dtype=float))) <= tol)


class LocalInvariants(NamedTuple):
    g1_re: float
    g1_im: float
    g2: float


def _check_two_qubit(u) -> np.ndarray:
    u = check_unitary(u, "two-qubit gate", atol=1e-8)
    if u.shape != (4, 4):
        raise ValueError(f"expected a 4x4 unitary, got {u.shape}")
    return u


def canonical_gate(a: float, b: float, c: float) -> np.ndarray:
    """exp{-(i/2)(a XX + b YY + c ZZ)}, diagonal in the magic basis."""
    h = -0.5 * (_SIGNS @ np.array([a, b, c]))
    return MAGIC @ np.diag(np.exp(1j * h)) @ MAGIC_DAG


def raw_coordinates(u) -> np.ndarray:
    """Some coordinate triple of ``u``'s class, before folding into the chamber."""
    u = _check_two_qubit(u)
    su = u / np.linalg.det(u) ** 0.25
    um = MAGIC_DAG @ su @ MAGIC
    m = um.T @ um
    # eigenvalues of the symmetric unitary m are exp(2 i h_k)
    phases = np.sort(np.angle(np.linalg.eigvals(m)) / 2)[::-1]
    # the h_k sum to zero; remove the multiple of pi the branch cut introduced
    excess = int(np.round(phases.sum() / PI))
    if excess > 0:
        phases[:excess] -= PI
    elif excess < 0:
        phases[len(phases) + excess:] += PI
    return -0.5 * (_SIGNS.T @ phases)


def fold(raw, tol: float = 1e-12) -> WeylPoint:
    """Map any coordinate triple to its chamber representative.

    Uses the local symmetries: shifts by pi in any coordinate, simultaneous
    sign flips of two coordinates, and permutations.
    """
    v = np.asarray(raw, dtype=float).copy()
    # into (-pi/2, pi/2]
    v = v - PI * np.ceil(v / PI - 0.5)
    v = v[np.argsort(-np.abs(v), kind="stable")]
    if v[0] < 0:
        v[0], v[2] = -v[0], -v[2]
    if v[1] < 0:
        v[1], v[2] = -v[1], -v[2]
    if v[2] < -tol:
        v = np.array([PI - v[0], v[1], -v[2]])
    elif v[2] < 0:
        v[2] = 0.0
    v[np.abs(v) < tol] = 0.0
    return WeylPoint(*map(float, v))


def canonical_coordinates(u) -> WeylPoint:
    return fold(raw_coordinates(u))


def mirror(p) -> WeylPoint:
    """The other representative of a base point: [a, b, 0] <-> [pi - a, b, 0]."""
    a, b, c = p
    if abs(c) > REACH_SLACK:
        raise ValueError("only base points (c = 0) have a mirror representative")
    return WeylPoint(PI - a, b, 0.0)


def local_invariants(u) -> LocalInvariants:
    """Makhlin invariants G1 = tr^2(m)/(16 det U), G2 = (tr^2(m) - tr(m^2))/(4 det U)."""
    u = _check_two_qubit(u)
    um = MAGIC_DAG @ u @ MAGIC
    m = um.T @ um
    det = np.linalg.det(u)
    tr = np.trace(m)
    g1 = tr**2 / (16 * det)
    g2 = (tr**2 - np.trace(m @ m)) / (4 * det)
    return LocalInvariants(float(g1.real), float(g1.imag), float(g2.real))


def invariants_from_coordinates(p) -> LocalInvariants:
    """Closed-form Makhlin invariants of the class at ``p``."""
    a, b, c = p
    ca, cb, cc = np.cos(a), np.cos(b), np.cos(c)
    sa, sb, sc = np.sin(a), np.sin(b), np.sin(c)
    g1_re = (ca * cb * cc) ** 2 - (sa * sb * sc) ** 2
    g1_im = -0.25 * np.sin(2 * a) * np.sin(2 * b) * np.sin(2 * c)
    g2 = 4 * (ca * cb * cc) ** 2 - 4 * (sa * sb * sc) ** 2 - np.cos(2 * a) * np.cos(2 * b) * np.cos(2 * c)
    return LocalInvariants(float(g1_re), float(g1_im), float(g2))


def locally_equivalent(u, v, tol: float = EQUIV_TOL) -> bool:
    return canonical_coordinates(u).close_to(canonical_coordinates(v), tol)


def in_chamber(p, tol: float = REACH_SLACK) -> bool:
    a, b, c = p
    return (a + tol >= b >= c - tol) and c >= -tol and a + b <= PI + tol


def reachable_two(gamma: float, p, slack: float = REACH_SLACK) -> bool:
    """Can two [gamma, 0, 0] gates (plus locals) reach ``p``?

    Only base points qualify. Reachable set: a + b <= 2 gamma, or its mirror
    image a - b >= pi - 2 gamma.
    """
    if not 0 < gamma <= PI / 2 + slack:
        raise ValueError("gamma must lie in (0, pi/2]")
    a, b, c = p
    if abs(c) > slack:
        return False
    return (-slack <= a + b <= 2 * gamma + slack) or (a - b >= PI - 2 * gamma - slack)


def reachable_n(gamma: float, n: int, p, slack: float = REACH_SLACK) -> bool:
    """Can n >= 3 [gamma, 0, 0] gates (plus locals) reach ``p``?

    Reachable set is the union of a + b + c <= n gamma and a - b - c >= pi - n gamma.
    """
    if n < 3:
        raise ValueError("reachable_n needs n >= 3; use reachable_two for n = 2")
    if not 0 < gamma <= PI / 2 + slack:
        raise ValueError("gamma must lie in (0, pi/2]")
    a, b, c = p
    return (-slack <= a + b + c <= n * gamma + slack) or (a - b - c >= PI - n * gamma - slack)


NAMED_POINTS = {
    "O": ((0.0, 0.0, 0.0), "identity"),
    "L": ((PI / 2, 0.0, 0.0), "CX, CY, CZ"),
    "A2": ((PI / 2, PI / 2, 0.0), "DCX, iSWAP"),
    "A3": ((PI / 2, PI / 2, PI / 2), "SWAP"),
    "B3": ((PI / 4, PI / 4, PI / 4), "sqrt(SWAP)"),
    "B": ((PI / 4, PI / 4, 0.0), "sqrt(iSWAP)"),
    "C1": ((PI / 4, 0.0, 0.0), "CV"),
}


def classify_named_point(p, tol: float = EQUIV_TOL) -> str | None:
    """Label of the named chamber point at ``p`` (either base representative), else None."""
    p = np.asarray(p, dtype=float)
    candidates = [p]
    if abs(p[2]) <= tol:
        candidates.append(np.array([PI - p[0], p[1], 0.0]))
    for label, (coords, _) in NAMED_POINTS.items():
        for q in candidates:
            if np.max(np.abs(q - np.asarray(coords))) <= tol:
                return label
    return None


__all__ = [
    "WeylPoint", "LocalInvariants", "canonical_gate", "raw_coordinates", "fold",
    "canonical_coordinates", "mirror", "local_invariants", "invariants_from_coordinates",
    "locally_equivalent", "in_chamber", "reachable_two", "reachable_n",
    "NAMED_POINTS", "classify_named_point",
]
