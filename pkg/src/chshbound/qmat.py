"""Small dense matrix numerics shared by the rest of the package.

Everything here works on 2x2, 3x3 and 4x4 numpy arrays. The routines wrap
LAPACK (through numpy) and pin down the conventions the analysis relies on:
descending eigenvalue order, and signed singular value decompositions whose
orthogonal factors are proper rotations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadShape, NotHermitian, NumericalFailure


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerance policy, passed explicitly to every check.

    Attributes
    ----------
    eig_tol : float
        Allowed Hermiticity defect of a matrix handed to an eigensolver.
    compare_tol : float
        Threshold for deciding that two computed quantities coincide
        (degenerate singular values, bound saturation, condition residuals).
    psd_tol : float
        Most negative eigenvalue still accepted as zero.
    """

    eig_tol: float = 1e-10
    compare_tol: float = 1e-8
    psd_tol: float = 1e-10

    def __post_init__(self):
        for name in ("eig_tol", "compare_tol", "psd_tol"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be a positive finite number, got {value!r}")


DEFAULT_TOLERANCES = Tolerances()


@dataclass(frozen=True)
class SignedSvd3:
    """``m = U @ diag(values) @ V.T`` with ``det(U) = det(V) = +1``.

    ``values`` are signed and ordered by nonincreasing magnitude. The
    ``degenerate`` pair flags adjacent magnitudes that agree within the
    comparison tolerance, i.e. ``(|t1|~|t2|, |t2|~|t3|)``.
    """

    U: np.ndarray
    V: np.ndarray
    values: np.ndarray
    degenerate: tuple[bool, bool]

    @property
    def magnitudes(self) -> np.ndarray:
        return np.abs(self.values)

    def reconstruct(self) -> np.ndarray:
        return self.U @ np.diag(self.values) @ self.V.T


def _require_square(m: np.ndarray, sizes: tuple[int, ...]) -> np.ndarray:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] not in sizes:
        raise BadShape(f"expected a square matrix of size {sizes}, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NumericalFailure("matrix has non-finite entries")
    return m


def hermiticity_defect(m: np.ndarray) -> float:
    """Largest entrywise deviation ``max |m - m^H|``."""
    m = np.asarray(m)
    return float(np.max(np.abs(m - m.conj().T)))


def hermitian_eigensystem(m, tol: Tolerances = DEFAULT_TOLERANCES):
    """Eigen-decompose a Hermitian 2x2 or 4x4 matrix.

    Returns
    -------
    eigenvalues : ndarray, shape (n,)
        Real eigenvalues in descending order.
    eigenvectors : ndarray, shape (n, n)
        Orthonormal eigenvectors stored as columns, matching ``eigenvalues``.

    Raises
    ------
    NotHermitian
        If ``max |m - m^H|`` exceeds ``tol.eig_tol``.
    """
    m = _require_square(m, (2, 4))
    defect = hermiticity_defect(m)
    if defect > tol.eig_tol:
        raise NotHermitian(f"NotHermitian: max |m - m^H| = {defect:.3e} exceeds {tol.eig_tol:.1e}")
    herm = 0.5 * (m + m.conj().T)
    w, v = np.linalg.eigh(herm.astype(complex))
    return w[::-1].copy(), v[:, ::-1].copy()


def svd3(m, tol: Tolerances = DEFAULT_TOLERANCES) -> SignedSvd3:
    """Signed SVD of a real 3x3 matrix with both factors in SO(3).

    LAPACK returns nonnegative singular values and factors that may be
    reflections. Each column pair ``(u_k, v_k)`` is first normalised so that
    the largest-magnitude entry of ``u_k`` is positive (this only fixes the
    output for a given input, it does not change the product). A factor with
    determinant -1 then has its third column negated together with the third
    singular value.
    """
    m = np.asarray(_require_square(m, (3,)), dtype=float)
    u, s, vh = np.linalg.svd(m)
    v = vh.T.copy()
    values = s.astype(float).copy()

    for k in range(3):
        pivot = np.argmax(np.abs(u[:, k]))
        if u[pivot, k] < 0:
            u[:, k] *= -1
            v[:, k] *= -1

    if np.linalg.det(u) < 0:
        u[:, 2] *= -1
        values[2] *= -1
    if np.linalg.det(v) < 0:
        v[:, 2] *= -1
        values[2] *= -1

    # Within runs of magnitudes equal up to rounding, order terms by their
    # contribution t_k <u_k, v_k> to tr(m). Columns move together, so the
    # product is kept; the run threshold is tight so magnitudes stay ordered.
    mags = np.abs(values)
    tie = 64 * np.finfo(float).eps * mags[0]
    trace_weight = values * np.einsum("ik,ik->k", u, v)
    order = list(range(3))
    start = 0
    while start < 3:
        stop = start + 1
        while stop < 3 and mags[stop - 1] - mags[stop] <= tie:
            stop += 1
        order[start:stop] = sorted(order[start:stop], key=lambda k: -trace_weight[k])
        start = stop
    if order != [0, 1, 2]:
        u, v, values = u[:, order], v[:, order], values[order]
        if np.linalg.det(u) < 0:
            u[:, 2] *= -1
            v[:, 2] *= -1

    mags = np.abs(values)
    degenerate = (
        bool(mags[0] - mags[1] < tol.compare_tol),
        bool(mags[1] - mags[2] < tol.compare_tol),
    )
    return SignedSvd3(U=u, V=v, values=values, degenerate=degenerate)


def is_rotation(r, atol: float = 1e-10) -> bool:
    r = np.asarray(r, dtype=float)
    if r.shape != (3, 3):
        return False
    return bool(
        np.max(np.abs(r @ r.T - np.eye(3))) <= atol and abs(np.linalg.det(r) - 1.0) <= atol
    )
