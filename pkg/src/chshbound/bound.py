"""The concurrence bound ``N(rho) <= 2 sqrt(1 + C^2)`` and its saturating set.

A state saturates the bound exactly when it is a local-unitary image of
``vw_state(p, theta)``. :func:`certify` checks this two ways: operationally
(the slack vanishes) and structurally (by rotating the state into the
canonical frame and reading off ``p`` and ``theta``).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .entanglement import concurrence, concurrence_pure, eof
from .errors import NotPSD, OutOfRange
from .nonlocality import nonlocality
from .qmat import DEFAULT_TOLERANCES, Tolerances, hermitian_eigensystem, svd3
from .states import (
    SIGMA_X,
    apply_local_unitary,
    correlation_matrix,
    projector,
    unitary_from_rotation,
    validate_pure,
    vw_state,
)

RECONSTRUCTION_TOL = 1e-7


@dataclass(frozen=True)
class Recovered:
    """Parameters with ``rho = (U_A (x) U_B) vw_state(p, theta) (U_A (x) U_B)^H``."""

    p: float
    theta: float
    u_a: np.ndarray
    u_b: np.ndarray

    def state(self) -> np.ndarray:
        return apply_local_unitary(vw_state(self.p, self.theta), self.u_a, self.u_b)


@dataclass(frozen=True)
class QMembership:
    concurrence: float
    eof: float
    nonlocality: float
    bound: float
    slack: float
    operational_member: bool
    structural_member: bool
    recovered: Recovered | None = None
    reconstruction_error: float = np.inf
    degenerate_frame: bool = False

    @property
    def verdicts_agree(self) -> bool:
        return self.operational_member == self.structural_member


def bound_value(c: float) -> float:
    """``2 sqrt(1 + C^2)``, between 2 and ``2 sqrt 2``."""
    if not (-1e-12 <= c <= 1 + 1e-9):
        raise OutOfRange(f"OutOfRange: concurrence {c!r} outside [0, 1]")
    c = min(max(c, 0.0), 1.0)
    return float(2 * np.sqrt(1 + c * c))


def check_pure_relation(psi) -> float:
    """``|N(psi) - 2 sqrt(1 + C(psi)^2)|`` for a pure state."""
    psi = validate_pure(psi)
    return abs(nonlocality(projector(psi)).value - bound_value(concurrence_pure(psi)))


def _canonical_rotations(t: np.ndarray, tol: Tolerances):
    """Rotations (R_A, R_B) with ``R_A T R_B^T = diag(|t2|, -|t3|, |t1|)``.

    The largest singular direction goes to z, the other two to x and y with
    the sign pattern of ``diag(sin 2theta, -sin 2theta, 1)``. When ``det T > 0``
    no such pair exists and the y entry keeps a positive sign instead.
    """
    dec = svd3(t, tol)
    u, v, vals = dec.U, dec.V, dec.values
    sgn = np.where(vals >= 0, 1.0, -1.0)
    left = np.column_stack([sgn[1] * u[:, 1], -sgn[2] * u[:, 2], sgn[0] * u[:, 0]])
    right = np.column_stack([v[:, 1], v[:, 2], v[:, 0]])
    if np.linalg.det(left) < 0:
        left[:, 1] *= -1
    return left.T, right.T, dec


def _recover_parameters(block: np.ndarray):
    """``(p, theta)`` from the {|00>, |11>} block, with p >= 1/2 and theta in [0, pi/4]."""
    s = float(np.clip(2 * block[0, 3].real, 0.0, 1.0))
    m = float(block[0, 0].real - block[3, 3].real)  # (2p - 1) cos 2theta
    c = np.sqrt(max(0.0, 1 - s * s))
    theta = 0.5 * np.arctan2(s, c)
    if c < 1e-12:
        return 1.0, theta
    p = 0.5 * (1 + min(abs(m) / c, 1.0))
    return float(p), float(theta)


def _structural(rho: np.ndarray, tol: Tolerances):
    evals, _ = hermitian_eigensystem(rho, tol)
    if evals[2] > RECONSTRUCTION_TOL:
        return None, np.inf, False

    r_a, r_b, dec = _canonical_rotations(correlation_matrix(rho), tol)
    # Tie at the top: a near-Bell state with the unit correlation on either axis.
    degenerate_frame = bool(dec.degenerate[0])
    w_a = unitary_from_rotation(r_a)
    w_b = unitary_from_rotation(r_b)
    frame = apply_local_unitary(rho, w_a, w_b)
    if frame[0, 0].real < frame[3, 3].real:
        # X (x) X fixes the canonical correlation matrix and swaps |00>, |11>
        w_a, w_b = SIGMA_X @ w_a, SIGMA_X @ w_b
        frame = apply_local_unitary(rho, w_a, w_b)

    p, theta = _recover_parameters(frame)
    recovered = Recovered(p=p, theta=theta, u_a=w_a.conj().T, u_b=w_b.conj().T)
    error = float(np.max(np.abs(recovered.state() - rho)))
    return recovered, error, degenerate_frame


def certify(rho, tol: Tolerances = DEFAULT_TOLERANCES) -> QMembership:
    """Evaluate the bound on ``rho`` and decide membership of the saturating set.

    The operational verdict is ``slack <= tol.compare_tol``. The structural
    verdict requires rank at most two, then rotates ``T`` into the form
    ``diag(s, -s, 1)`` with local unitaries, reads ``p`` and ``theta`` from the
    resulting X-shaped matrix and checks that the reconstruction reproduces
    ``rho`` to ``1e-7``. The representative with ``p >= 1/2`` and
    ``theta <= pi/4`` is reported.
    """
    rho = np.asarray(rho, dtype=complex)
    c, _ = concurrence(rho, tol)
    n = nonlocality(rho, tol).value
    bound = bound_value(c)
    slack = bound - n
    recovered, error, degenerate_frame = _structural(rho, tol)
    structural = recovered is not None and error <= RECONSTRUCTION_TOL
    return QMembership(
        concurrence=c,
        eof=eof(c),
        nonlocality=n,
        bound=bound,
        slack=float(slack),
        operational_member=bool(slack <= tol.compare_tol),
        structural_member=bool(structural),
        recovered=recovered if structural else None,
        reconstruction_error=error,
        degenerate_frame=degenerate_frame,
    )


def vw_matrix(c: float, alpha: float, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """``[[1 - alpha, C], [C, 1 + alpha]] / 2`` on the {|01>, |10>} block.

    Raises
    ------
    NotPSD
        If ``C^2 > 1 - alpha^2``.
    """
    if c * c > 1 - alpha * alpha + tol.psd_tol:
        raise NotPSD(f"NotPSD: C^2 = {c * c:.6g} exceeds 1 - alpha^2 = {1 - alpha * alpha:.6g}")
    rho = np.zeros((4, 4), dtype=complex)
    rho[1, 1] = (1 - alpha) / 2
    rho[2, 2] = (1 + alpha) / 2
    rho[1, 2] = rho[2, 1] = c / 2
    return rho
