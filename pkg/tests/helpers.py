"""Independent reference computations used as test oracles."""

import numpy as np

PAULI = [
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
]
ID2 = np.eye(2, dtype=complex)


def correlation_by_trace(rho):
    """T_jk = tr(sigma_j (x) sigma_k rho) by explicit Kronecker products."""
    t = np.zeros((3, 3))
    for j in range(3):
        for k in range(3):
            t[j, k] = np.trace(np.kron(PAULI[j], PAULI[k]) @ rho).real
    return t


def local_vectors_by_trace(rho):
    r = np.array([np.trace(np.kron(PAULI[j], ID2) @ rho).real for j in range(3)])
    s = np.array([np.trace(np.kron(ID2, PAULI[j]) @ rho).real for j in range(3)])
    return r, s


def rotation_by_trace(u):
    r = np.zeros((3, 3))
    for k in range(3):
        for kp in range(3):
            r[k, kp] = 0.5 * np.trace(PAULI[k] @ u @ PAULI[kp] @ u.conj().T).real
    return r


def wootters_by_eigenvalues(rho):
    """Concurrence from sqrt of the eigenvalues of rho times its spin flip."""
    yy = np.kron(PAULI[1], PAULI[1])
    ev = np.linalg.eigvals(rho @ yy @ rho.conj() @ yy)
    lam = np.sort(np.sqrt(np.clip(ev.real, 0, None)))[::-1]
    return max(0.0, lam[0] - lam[1:].sum()), lam


def werner(w):
    phi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    return w * np.outer(phi, phi).astype(complex) + (1 - w) * np.eye(4) / 4


def bell_diagonal(t1, t2, t3):
    """(I + sum_i t_i sigma_i (x) sigma_i) / 4."""
    rho = np.eye(4, dtype=complex)
    for t, p in zip((t1, t2, t3), PAULI):
        rho = rho + t * np.kron(p, p)
    return rho / 4
