"""When do two states share an optimal CHSH operator?

Two criteria are implemented side by side:

* the structural test on the correlation matrices ``T`` and ``F`` (common
  singular frames, the same magnitude ordering, proportional leading signed
  singular values), and
* a direct certificate that exhibits an operator optimal for both states.

On inputs where ``T^T T`` or ``F^T F`` has a degenerate second eigenvalue the
optimal operator is a family rather than a point; the certificate searches
that family exactly and is the authoritative answer.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateTheta, OutOfRange, ZeroCorrelation
from .nonlocality import ChshOperator, chsh_value, nonlocality
from .qmat import DEFAULT_TOLERANCES, Tolerances, svd3
from .states import (
    correlation_matrix,
    gamma_state,
    ket,
    projector,
    random_pure,
)

CERTIFICATE_TOL = 1e-7
DISTINCT_TOL = 1e-6

# Mixing weights for T + c F; irrational-ish so accidental ties are unlikely.
_FRAME_WEIGHTS = (0.6180339887498949, -0.4142135623730951, 1.7320508075688772)


@dataclass(frozen=True)
class SharedOperatorVerdict:
    cond_same_frames: bool
    cond_same_order: bool
    cond_ratio: bool
    certificate: bool
    degenerate_path: bool
    details: dict = field(default_factory=dict)
    operator: ChshOperator | None = None

    @property
    def conditions_hold(self) -> bool:
        return self.cond_same_frames and self.cond_same_order and self.cond_ratio

    @property
    def shared(self) -> bool:
        return self.certificate


def _common_frame(t: np.ndarray, f: np.ndarray, tol: Tolerances):
    best = None
    for c in _FRAME_WEIGHTS:
        dec = svd3(t + c * f, tol)
        dt = dec.U.T @ t @ dec.V
        df = dec.U.T @ f @ dec.V
        off = max(
            np.max(np.abs(dt - np.diag(np.diag(dt)))),
            np.max(np.abs(df - np.diag(np.diag(df)))),
        )
        if best is None or off < best[0]:
            best = (float(off), np.diag(dt).copy(), np.diag(df).copy())
    return best


def _order_residual(mt: np.ndarray, mf: np.ndarray) -> float:
    """Largest strength of an ordering inversion between two magnitude lists."""
    worst = 0.0
    for i in range(3):
        for j in range(3):
            worst = max(worst, min(mt[i] - mt[j], mf[j] - mf[i]))
    return float(worst)


def _best_family_member(t: np.ndarray, f: np.ndarray, tol: Tolerances):
    """Optimal operator of the state with correlations ``t`` that scores best on ``f``.

    Optimal operators have coefficients ``s T (I - n n^T)`` with ``n`` a unit
    vector in the eigenspace of the smallest eigenvalues of ``T^T T``; their
    score on ``f`` is ``s (tr(T^T F) - n^T M n)`` with ``M = sym(T^T F)``, so
    the best ``n`` is the lowest eigenvector of ``M`` restricted to that space.
    """
    dec = svd3(t, tol)
    mags = dec.magnitudes
    cluster = [k for k in range(3) if mags[k] - mags[2] < tol.compare_tol]
    basis = dec.V[:, cluster]
    m = t.T @ f
    m = 0.5 * (m + m.T)
    w, x = np.linalg.eigh(basis.T @ m @ basis)
    normal = basis @ x[:, 0]
    normal /= np.linalg.norm(normal)
    scale = 2 / np.sqrt(mags[0] ** 2 + mags[1] ** 2)
    return scale * t @ (np.eye(3) - np.outer(normal, normal))


def shared_conditions(rho, varrho, tol: Tolerances = DEFAULT_TOLERANCES,
                      certificate_tol: float = CERTIFICATE_TOL) -> SharedOperatorVerdict:
    """Test whether ``rho`` and ``varrho`` admit a common optimal CHSH operator.

    Raises
    ------
    ZeroCorrelation
        If either correlation matrix vanishes.
    """
    t = correlation_matrix(rho)
    f = correlation_matrix(varrho)
    rep_t = nonlocality(rho, tol)
    rep_f = nonlocality(varrho, tol)
    if rep_t.zero_correlation or rep_f.zero_correlation:
        raise ZeroCorrelation("ZeroCorrelation: a correlation matrix vanishes")

    frame_res, dt, df = _common_frame(t, f, tol)
    same_frames = frame_res <= tol.compare_tol

    mt, mf = np.abs(dt), np.abs(df)
    order_res = _order_residual(mt, mf)
    same_order = order_res <= tol.compare_tol

    key = mt / np.linalg.norm(mt) + mf / np.linalg.norm(mf)
    top = np.argsort(-key, kind="stable")[:2]
    lead_t = dt[top] / np.linalg.norm(dt[top])
    lead_f = df[top] / np.linalg.norm(df[top])
    ratio_res = float(np.max(np.abs(lead_t - lead_f)))
    ratio = ratio_res <= tol.compare_tol

    n_rho, n_varrho = rep_t.value, rep_f.value
    candidates = [
        _best_family_member(t, f, tol),
        _best_family_member(f, t, tol),
    ]
    best_op, best_gap = None, np.inf
    for w in candidates:
        op = ChshOperator(W=w)
        gap = max(n_rho - chsh_value(rho, op), n_varrho - chsh_value(varrho, op))
        if gap < best_gap:
            best_op, best_gap = op, gap
    certificate = bool(best_gap <= certificate_tol)

    details = {
        "frame_residual": frame_res,
        "order_residual": order_res,
        "ratio_residual": ratio_res,
        "certificate_gap": float(best_gap),
        "N_rho": n_rho,
        "N_varrho": n_varrho,
    }
    return SharedOperatorVerdict(
        cond_same_frames=bool(same_frames),
        cond_same_order=bool(same_order),
        cond_ratio=bool(ratio),
        certificate=certificate,
        degenerate_path=bool(rep_t.degenerate or rep_f.degenerate),
        details=details,
        operator=best_op if certificate else None,
    )


def s_theta_plus(theta: float) -> ChshOperator:
    """``2 / sqrt(1 + sin^2 2theta) * (sin 2theta X(x)X + Z(x)Z)``."""
    s = np.sin(2 * theta)
    return ChshOperator(W=2 / np.sqrt(1 + s * s) * np.diag([s, 0.0, 1.0]))


def s_theta_minus(theta: float) -> ChshOperator:
    """``2 / sqrt(1 + sin^2 2theta) * (-sin 2theta Y(x)Y + Z(x)Z)``."""
    s = np.sin(2 * theta)
    return ChshOperator(W=2 / np.sqrt(1 + s * s) * np.diag([0.0, -s, 1.0]))


def theorem2_pair(theta: float, u_a, u_b):
    """The locally rotated pair ``cos|00> + sin|11>``, ``sin|00> + cos|11>`` and its two shared operators.

    Returns
    -------
    psi, psi2 : ndarray
        ``(U_A (x) U_B)`` applied to both members.
    s_plus, s_minus : ChshOperator
        ``S_theta+`` and ``S_theta-`` conjugated by the same local unitaries.
    """
    if not (0.0 <= theta < np.pi):
        raise OutOfRange(f"OutOfRange: theta = {theta!r} outside [0, pi)")
    u = np.kron(np.asarray(u_a, dtype=complex), np.asarray(u_b, dtype=complex))
    psi = u @ gamma_state(theta)
    psi2 = u @ (np.sin(theta) * ket("00") + np.cos(theta) * ket("11"))
    return psi, psi2, s_theta_plus(theta).conjugated(u_a, u_b), s_theta_minus(theta).conjugated(u_a, u_b)


@dataclass(frozen=True)
class ProbeReport:
    theta: float
    trials: int
    violations: int
    min_residual: float
    skipped: int


def probe_no_triple(theta: float, trials: int = 10_000, seed=0,
                    tol: Tolerances = DEFAULT_TOLERANCES) -> ProbeReport:
    """Random search for a third pure state whose optimum is reached by ``S_theta+``.

    Samples Haar-random pure states, discards those within ``1e-6`` infidelity
    of either pair member, and records ``N(chi) - tr(chi chi^H S_theta+)``.
    A residual at or below ``tol.compare_tol`` counts as a violation. This is a
    falsification harness: zero violations is evidence, not proof.
    """
    if abs(np.cos(2 * theta)) < 2e-6:
        raise DegenerateTheta(f"DegenerateTheta: theta = {theta!r} makes both pair members coincide")
    rng = np.random.default_rng(seed)
    op = s_theta_plus(theta)
    first = gamma_state(theta)
    second = np.sin(theta) * ket("00") + np.cos(theta) * ket("11")
    violations = skipped = 0
    min_res = np.inf
    for _ in range(trials):
        chi = random_pure(rng)
        fid = max(abs(np.vdot(first, chi)) ** 2, abs(np.vdot(second, chi)) ** 2)
        if 1 - fid <= DISTINCT_TOL:
            skipped += 1
            continue
        rho = projector(chi)
        residual = nonlocality(rho, tol).value - chsh_value(rho, op)
        min_res = min(min_res, residual)
        if residual <= tol.compare_tol:
            violations += 1
    return ProbeReport(theta=float(theta), trials=trials, violations=violations,
                       min_residual=float(min_res), skipped=skipped)
