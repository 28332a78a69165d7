"""Small dense complex linear algebra: tensor products, Hermitian exponentials,
PSD square roots, and comparison up to a global phase.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``.
"""
from __future__ import annotations

from functools import reduce

import numpy as np

UNITARY_ATOL = 1e-10
HERMITIAN_ATOL = 1e-12
PSD_CLAMP = 1e-8
MAX_DIM = 16


def as_matrix(m, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite square complex matrix or raise ``ValueError``."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be square, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} has non-finite entries")
    return a


def is_unitary(u, atol: float = UNITARY_ATOL) -> bool:
    u = np.asarray(u, dtype=np.complex128)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return bool(np.allclose(u.conj().T @ u, np.eye(u.shape[0]), rtol=0, atol=atol))


def is_hermitian(h, atol: float = HERMITIAN_ATOL) -> bool:
    h = np.asarray(h, dtype=np.complex128)
    return h.ndim == 2 and h.shape[0] == h.shape[1] and bool(
        np.allclose(h, h.conj().T, rtol=0, atol=atol))


def check_unitary(u, name: str = "matrix", atol: float = UNITARY_ATOL) -> np.ndarray:
    u = as_matrix(u, name)
    if not is_unitary(u, atol):
        raise ValueError(f"{name} is not unitary (tol {atol:g})")
    return u


def kron(*mats) -> np.ndarray:
    """Tensor product; the leftmost factor is the most significant."""
    return reduce(np.kron, [np.asarray(m, dtype=np.complex128) for m in mats])


def expm_hermitian(h, t: float = 1.0) -> np.ndarray:
    """exp(-i t H) for Hermitian H via eigendecomposition.

    The result is unitary by construction because the eigenvectors returned
    by ``eigh`` are orthonormal.
    """
    h = as_matrix(h, "h")
    if not is_hermitian(h):
        raise ValueError("expm_hermitian requires a Hermitian operator")
    h = 0.5 * (h + h.conj().T)
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * t * w)) @ v.conj().T


def sqrtm_psd(m) -> np.ndarray:
    """Principal square root of a Hermitian positive semidefinite matrix.

    Eigenvalues in [-1e-8, 0) are treated as noise and clamped to zero;
    anything more negative raises ``ValueError``. Positive eigenvalues at the
    rounding floor of ``eigh`` are zeroed as well, otherwise a rank-deficient
    input picks up O(1e-8) garbage from square roots of ~1e-16 noise.
    """
    m = as_matrix(m, "m")
    if not is_hermitian(m, atol=1e-8):
        raise ValueError("sqrtm_psd requires a Hermitian matrix")
    m = 0.5 * (m + m.conj().T)
    w, v = np.linalg.eigh(m)
    if w.min() < -PSD_CLAMP:
        raise ValueError(f"matrix is not PSD (min eigenvalue {w.min():.3e})")
    floor = 64 * np.finfo(float).eps * max(w.max(), 0.0)
    w = np.where(w > floor, w, 0.0)
    s = (v * np.sqrt(w)) @ v.conj().T
    return 0.5 * (s + s.conj().T)


def phase_distance(u, v, return_info: bool = False):
    """Max-entry distance between ``u`` and ``v`` after removing a global phase.

    The phase is chosen as alpha = -arg Tr(u^dag v). When that trace vanishes
    the phase is undefined; alpha = 0 is used and the result is flagged as
    degenerate.

    Args:
        u, v: square matrices of equal shape.
        return_info: if True return ``(distance, alpha, degenerate)``.
    """
    u = as_matrix(u, "u")
    v = as_matrix(v, "v")
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    tr = np.vdot(u, v)  # = Tr(u^dag v)
    degenerate = abs(tr) < 1e-12
    alpha = 0.0 if degenerate else -float(np.angle(tr))
    dist = float(np.max(np.abs(u - np.exp(1j * alpha) * v)))
    if return_info:
        return dist, alpha, degenerate
    return dist


def format_matrix(m, precision: int = 12) -> str:
    """Serialise to the text format: one row per line, ``re+imj`` entries."""
    m = as_matrix(m)
    rows = []
    for row in m:
        rows.append(",".join(f"{z.real:.{precision}g}{z.imag:+.{precision}g}j" for z in row))
    return "\n".join(rows) + "\n"


def parse_matrix(text: str) -> np.ndarray:
    """Inverse of :func:`format_matrix`; tolerant of whitespace and blank lines."""
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        rows.append([complex(tok.replace(" ", "")) for tok in line.split(",")])
    if not rows or any(len(r) != len(rows) for r in rows):
        raise ValueError("matrix text must describe a non-empty square matrix")
    if len(rows) > MAX_DIM:
        raise ValueError(f"matrices beyond dim {MAX_DIM} are not supported")
    return as_matrix(np.array(rows, dtype=np.complex128))
