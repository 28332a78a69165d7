"""Hot inner loops: layered-circuit fidelity with gradient, batched trace fidelity.

Each kernel exists twice: an explicit-loop version compiled with numba
(``nb_*``) and a vectorised numpy version (``np_*``). The public names
dispatch on :data:`cvpulse._accel.USE_NUMBA`.
"""
import numpy as np

from ._accel import USE_NUMBA, njit

__all__ = [
    "layered_cost_grad",
    "batch_trace_fidelity",
    "nb_layered_cost_grad",
    "np_layered_cost_grad",
    "nb_batch_trace_fidelity",
    "np_batch_trace_fidelity",
]


# ---------------------------------------------------------------------------
# U3 and its partial derivatives
# ---------------------------------------------------------------------------

@njit
def _u3_and_derivs(theta, phi, lam, out):
    """Fill out[0] = U3, out[1..3] = d/dtheta, d/dphi, d/dlam."""
    c = np.cos(0.5 * theta)
    s = np.sin(0.5 * theta)
    ep = np.exp(1j * phi)
    el = np.exp(1j * lam)
    epl = ep * el
    out[0, 0, 0] = c
    out[0, 0, 1] = -el * s
    out[0, 1, 0] = ep * s
    out[0, 1, 1] = epl * c
    out[1, 0, 0] = -0.5 * s
    out[1, 0, 1] = -0.5 * el * c
    out[1, 1, 0] = 0.5 * ep * c
    out[1, 1, 1] = -0.5 * epl * s
    out[2, 0, 0] = 0.0
    out[2, 0, 1] = 0.0
    out[2, 1, 0] = 1j * ep * s
    out[2, 1, 1] = 1j * epl * c
    out[3, 0, 0] = 0.0
    out[3, 0, 1] = -1j * el * s
    out[3, 1, 0] = 0.0
    out[3, 1, 1] = 1j * epl * c


@njit
def _kron22(a, b, out):
    for i in range(2):
        for j in range(2):
            for k in range(2):
                for l in range(2):
                    out[2 * i + k, 2 * j + l] = a[i, j] * b[k, l]


@njit
def _mm4(a, b, out):
    for i in range(4):
        for j in range(4):
            acc = 0j
            for k in range(4):
                acc += a[i, k] * b[k, j]
            out[i, j] = acc


@njit
def _trace_kron(e, a, b):
    # Tr(E (a (x) b)) = sum E[(i,j),(k,l)] a[k,i] b[l,j]
    acc = 0j
    for i in range(2):
        for j in range(2):
            for k in range(2):
                for l in range(2):
                    acc += e[2 * i + j, 2 * k + l] * a[k, i] * b[l, j]
    return acc


@njit
def nb_layered_cost_grad(x, basis, target_dag, k):
    """1 - |Tr(T^dag W)|^2/16 and its gradient for W = L_k B ... B L_0.

    ``x`` holds 6(k+1) angles; layer j uses x[6j:6j+3] on qubit 0 and
    x[6j+3:6j+6] on qubit 1 as U3 triples.
    """
    nl = k + 1
    u = np.empty((nl, 2, 4, 2, 2), dtype=np.complex128)
    layers = np.empty((nl, 4, 4), dtype=np.complex128)
    for j in range(nl):
        _u3_and_derivs(x[6 * j], x[6 * j + 1], x[6 * j + 2], u[j, 0])
        _u3_and_derivs(x[6 * j + 3], x[6 * j + 4], x[6 * j + 5], u[j, 1])
        _kron22(u[j, 0, 0], u[j, 1, 0], layers[j])

    # right[j] = B L_{j-1} ... B L_0, left[j] = L_k B ... L_{j+1} B
    right = np.empty((nl, 4, 4), dtype=np.complex128)
    left = np.empty((nl, 4, 4), dtype=np.complex128)
    tmp = np.empty((4, 4), dtype=np.complex128)
    right[0] = np.eye(4, dtype=np.complex128)
    for j in range(1, nl):
        _mm4(layers[j - 1], right[j - 1], tmp)
        _mm4(basis, tmp, right[j])
    left[nl - 1] = np.eye(4, dtype=np.complex128)
    for j in range(nl - 2, -1, -1):
        _mm4(left[j + 1], layers[j + 1], tmp)
        _mm4(tmp, basis, left[j])

    grad = np.empty(6 * nl)
    e = np.empty((4, 4), dtype=np.complex128)
    tau = 0j
    for j in range(nl):
        # E_j = R_j T^dag A_j so that Tr(T^dag W) = Tr(E_j L_j)
        _mm4(right[j], target_dag, tmp)
        _mm4(tmp, left[j], e)
        if j == 0:
            tau = _trace_kron(e, u[j, 0, 0], u[j, 1, 0])
        for p in range(3):
            d0 = _trace_kron(e, u[j, 0, p + 1], u[j, 1, 0])
            d1 = _trace_kron(e, u[j, 0, 0], u[j, 1, p + 1])
            grad[6 * j + p] = -2.0 * (np.conj(tau) * d0).real / 16.0
            grad[6 * j + 3 + p] = -2.0 * (np.conj(tau) * d1).real / 16.0
    cost = 1.0 - (tau.real * tau.real + tau.imag * tau.imag) / 16.0
    return cost, grad


def _np_u3_stack(theta, phi, lam):
    c = np.cos(0.5 * theta)
    s = np.sin(0.5 * theta)
    ep = np.exp(1j * phi)
    el = np.exp(1j * lam)
    z = np.zeros_like(ep)
    return np.array([
        [[c, -el * s], [ep * s, ep * el * c]],
        [[-0.5 * s, -0.5 * el * c], [0.5 * ep * c, -0.5 * ep * el * s]],
        [[z, z], [1j * ep * s, 1j * ep * el * c]],
        [[z, -1j * el * s], [z, 1j * ep * el * c]],
    ], dtype=np.complex128)


def np_layered_cost_grad(x, basis, target_dag, k):
    """Numpy twin of :func:`nb_layered_cost_grad`."""
    x = np.asarray(x, dtype=float)
    nl = k + 1
    ang = x.reshape(nl, 2, 3)
    u = [[_np_u3_stack(*ang[j, q]) for q in range(2)] for j in range(nl)]
    layers = [np.kron(u[j][0][0], u[j][1][0]) for j in range(nl)]

    right = [np.eye(4, dtype=complex)]
    for j in range(1, nl):
        right.append(basis @ layers[j - 1] @ right[j - 1])
    left = [None] * nl
    left[nl - 1] = np.eye(4, dtype=complex)
    for j in range(nl - 2, -1, -1):
        left[j] = left[j + 1] @ layers[j + 1] @ basis

    tau = np.trace(right[0] @ target_dag @ left[0] @ layers[0])
    grad = np.empty(6 * nl)
    for j in range(nl):
        e = right[j] @ target_dag @ left[j]
        for p in range(3):
            d0 = np.trace(e @ np.kron(u[j][0][p + 1], u[j][1][0]))
            d1 = np.trace(e @ np.kron(u[j][0][0], u[j][1][p + 1]))
            grad[6 * j + p] = -2.0 * (np.conj(tau) * d0).real / 16.0
            grad[6 * j + 3 + p] = -2.0 * (np.conj(tau) * d1).real / 16.0
    return 1.0 - abs(tau) ** 2 / 16.0, grad


@njit
def nb_batch_trace_fidelity(us, v):
    """|Tr(v^dag u_n)|^2 / d^2 for each u_n in a (N, d, d) stack."""
    n, d, _ = us.shape
    out = np.empty(n)
    for m in range(n):
        acc = 0j
        for i in range(d):
            for j in range(d):
                acc += np.conj(v[i, j]) * us[m, i, j]
        out[m] = (acc.real * acc.real + acc.imag * acc.imag) / (d * d)
    return out


def np_batch_trace_fidelity(us, v):
    """Numpy twin of :func:`nb_batch_trace_fidelity`."""
    us = np.asarray(us, dtype=complex)
    d = us.shape[-1]
    tr = np.einsum("ij,nij->n", np.conj(v), us)
    return np.abs(tr) ** 2 / d**2


if USE_NUMBA:
    layered_cost_grad = nb_layered_cost_grad
    batch_trace_fidelity = nb_batch_trace_fidelity
else:
    layered_cost_grad = np_layered_cost_grad
    batch_trace_fidelity = np_batch_trace_fidelity
