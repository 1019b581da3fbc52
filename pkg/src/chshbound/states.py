"""Two-qubit states: validation, Pauli decomposition, families and sampling.

Conventions: the computational basis is ordered ``|00>, |01>, |10>, |11>``
with the first tensor factor belonging to Alice, and it is the eigenbasis of
``sigma_z`` (``|0>`` has eigenvalue +1). Pure states are plain complex
vectors of length 4 and density matrices are complex 4x4 arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.transform import Rotation
from scipy.stats import unitary_group

from .errors import (
    BadProbability,
    BadRank,
    BadShape,
    BadSign,
    NotARotation,
    NotNormalized,
    NotPSD,
    NumericalFailure,
    TraceNotOne,
)
from .qmat import DEFAULT_TOLERANCES, Tolerances, hermitian_eigensystem, is_rotation

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = np.stack([SIGMA_X, SIGMA_Y, SIGMA_Z])

# PAULI_PRODUCTS[j, k] = sigma_j (x) sigma_k, index 0 meaning the identity.
_BASIS = np.stack([I2, SIGMA_X, SIGMA_Y, SIGMA_Z])
PAULI_PRODUCTS = np.einsum("aij,bkl->abikjl", _BASIS, _BASIS).reshape(4, 4, 4, 4)

NORM_TOL = 1e-10


def ket(label: str) -> np.ndarray:
    """Computational basis ket, e.g. ``ket("01")``."""
    if len(label) != 2 or set(label) - {"0", "1"}:
        raise ValueError(f"expected a two-bit label, got {label!r}")
    out = np.zeros(4, dtype=complex)
    out[int(label, 2)] = 1.0
    return out


def projector(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def validate_pure(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (4,):
        raise BadShape(f"a two-qubit pure state has 4 amplitudes, got shape {psi.shape}")
    if not np.all(np.isfinite(psi)):
        raise NumericalFailure("amplitudes contain non-finite values")
    norm2 = float(np.vdot(psi, psi).real)
    if abs(norm2 - 1.0) > NORM_TOL:
        raise NotNormalized(f"NotNormalized: sum |amplitude|^2 = {norm2!r}")
    return psi


def validate_density(m, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Check that ``m`` is a two-qubit density matrix and return it as complex.

    Raises
    ------
    BadShape, NotHermitian, TraceNotOne, NotPSD
        Naming the violated invariant and its magnitude.
    """
    m = np.asarray(m, dtype=complex)
    if m.shape != (4, 4):
        raise BadShape(f"BadShape: expected a 4x4 matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NumericalFailure("matrix contains non-finite values")
    evals, _ = hermitian_eigensystem(m, tol)
    trace = np.trace(m)
    if abs(trace - 1.0) > NORM_TOL:
        raise TraceNotOne(f"TraceNotOne: trace = {trace.real:.12g}{trace.imag:+.3g}j")
    if evals[-1] < -tol.psd_tol:
        raise NotPSD(f"NotPSD: smallest eigenvalue {evals[-1]:.6g} < -{tol.psd_tol:.1e}")
    return m


@dataclass(frozen=True)
class BlochDecomposition:
    """Local Bloch vectors ``r`` (Alice), ``s`` (Bob) and correlation matrix ``T``.

    ``rho = (I + r.sigma (x) I + I (x) s.sigma + sum_jk T_jk sigma_j (x) sigma_k) / 4``
    """

    r: np.ndarray
    s: np.ndarray
    T: np.ndarray

    def reconstruct(self) -> np.ndarray:
        coeffs = np.zeros((4, 4))
        coeffs[0, 0] = 1.0
        coeffs[1:, 0] = self.r
        coeffs[0, 1:] = self.s
        coeffs[1:, 1:] = self.T
        return np.einsum("ab,abij->ij", coeffs, PAULI_PRODUCTS) / 4


def pauli_coefficients(rho) -> np.ndarray:
    """All 16 expectation values ``tr(sigma_a (x) sigma_b rho)``, a, b = 0..3."""
    rho = np.asarray(rho, dtype=complex)
    return np.einsum("abij,ji->ab", PAULI_PRODUCTS, rho).real


def bloch_decompose(rho) -> BlochDecomposition:
    coeffs = pauli_coefficients(rho)
    return BlochDecomposition(r=coeffs[1:, 0].copy(), s=coeffs[0, 1:].copy(), T=coeffs[1:, 1:].copy())


def correlation_matrix(rho) -> np.ndarray:
    """``T_jk = tr(sigma_j (x) sigma_k rho)``."""
    return pauli_coefficients(rho)[1:, 1:].copy()


# ---------------------------------------------------------------------------
# Pure states with diagonal correlation matrices
# ---------------------------------------------------------------------------

def _check_delta(delta) -> int:
    if delta not in (1, -1):
        raise BadSign(f"BadSign: delta must be +1 or -1, got {delta!r}")
    return int(delta)


def gamma_state(theta: float) -> np.ndarray:
    """``cos(theta)|00> + sin(theta)|11>``; T = diag(sin 2theta, -sin 2theta, 1)."""
    return np.cos(theta) * ket("00") + np.sin(theta) * ket("11")


def omega_state(theta: float) -> np.ndarray:
    """``cos(theta)|01> + sin(theta)|10>``; T = diag(sin 2theta, sin 2theta, -1)."""
    return np.cos(theta) * ket("01") + np.sin(theta) * ket("10")


def lambda_state(theta: float, delta: int) -> np.ndarray:
    """T = diag(delta cos 2theta, -delta, cos 2theta)."""
    delta = _check_delta(delta)
    even = (ket("00") + delta * ket("11")) / np.sqrt(2)
    odd = (ket("01") - delta * ket("10")) / np.sqrt(2)
    return np.cos(theta) * even + 1j * np.sin(theta) * odd


def phi_state(theta: float, delta: int) -> np.ndarray:
    """T = diag(delta, -delta cos 2theta, cos 2theta)."""
    delta = _check_delta(delta)
    even = (ket("00") + delta * ket("11")) / np.sqrt(2)
    odd = (ket("01") + delta * ket("10")) / np.sqrt(2)
    return np.cos(theta) * even + np.sin(theta) * odd


def vw_state(p: float, theta: float) -> np.ndarray:
    """Rank-two mixture ``p |g(theta)><g(theta)| + (1-p) |g'(theta)><g'(theta)|``.

    Here ``g(theta) = cos(theta)|00> + sin(theta)|11>`` and ``g'`` swaps the two
    coefficients. Every such state saturates the concurrence bound on CHSH
    violation; the local-unitary orbit of this family is exactly the set of
    saturating states.
    """
    if not (0.0 <= p <= 1.0):
        raise BadProbability(f"BadProbability: p = {p!r} is outside [0, 1]")
    first = gamma_state(theta)
    second = np.sin(theta) * ket("00") + np.cos(theta) * ket("11")
    return p * projector(first) + (1 - p) * projector(second)


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------

def random_pure(seed=None) -> np.ndarray:
    """Unitarily invariant random pure state from normalised complex Gaussians.

    ``seed`` may be anything accepted by :func:`numpy.random.default_rng`,
    including an existing ``Generator`` (which is then advanced).
    """
    rng = np.random.default_rng(seed)
    psi = rng.normal(size=4) + 1j * rng.normal(size=4)
    return psi / np.linalg.norm(psi)


def random_density(seed=None, rank: int = 4) -> np.ndarray:
    """Hilbert-Schmidt (Ginibre) random state ``G G^H / tr(G G^H)``, G of shape 4 x rank."""
    if rank not in (1, 2, 3, 4):
        raise BadRank(f"BadRank: rank must be 1, 2, 3 or 4, got {rank!r}")
    rng = np.random.default_rng(seed)
    g = rng.normal(size=(4, rank)) + 1j * rng.normal(size=(4, rank))
    rho = g @ g.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real


def random_unitary(seed=None) -> np.ndarray:
    """Haar-random 2x2 unitary."""
    rng = np.random.default_rng(seed)
    return unitary_group.rvs(2, random_state=rng)


# ---------------------------------------------------------------------------
# Local unitaries and their Bloch rotations
# ---------------------------------------------------------------------------

def apply_local_unitary(rho, u_a, u_b) -> np.ndarray:
    """``(U_A (x) U_B) rho (U_A (x) U_B)^H``."""
    u = np.kron(np.asarray(u_a, dtype=complex), np.asarray(u_b, dtype=complex))
    out = u @ np.asarray(rho, dtype=complex) @ u.conj().T
    return 0.5 * (out + out.conj().T)


def rotation_from_unitary(u) -> np.ndarray:
    """Bloch rotation ``R_kk' = tr(sigma_k U sigma_k' U^H) / 2`` of a qubit unitary.

    Conjugating a state by ``U_A (x) U_B`` maps its correlation matrix to
    ``R_A T R_B^T``. The global phase of ``U`` drops out.
    """
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2):
        raise BadShape(f"expected a 2x2 unitary, got shape {u.shape}")
    conj = np.einsum("ij,bjk,lk->bil", u, PAULIS, u.conj())
    return 0.5 * np.einsum("aij,bji->ab", PAULIS, conj).real


def unitary_from_rotation(r) -> np.ndarray:
    """SU(2) element whose Bloch rotation is ``r``.

    The double cover leaves a sign free; the representative with
    ``Re tr U >= 0`` is returned (for half-turns, where the trace vanishes,
    the first nonzero axis component is made positive).
    """
    r = np.asarray(r, dtype=float)
    if r.shape != (3, 3) or not is_rotation(r, atol=1e-8):
        raise NotARotation("NotARotation: matrix is not orthogonal with determinant +1")
    x, y, z, w = Rotation.from_matrix(r).as_quat()
    q = np.array([w, x, y, z])
    nonzero = np.flatnonzero(np.abs(q) > 1e-12)
    if q[nonzero[0]] < 0:
        q = -q
    w, x, y, z = q
    return w * I2 - 1j * (x * SIGMA_X + y * SIGMA_Y + z * SIGMA_Z)
