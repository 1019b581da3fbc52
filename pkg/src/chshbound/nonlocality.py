"""Maximal CHSH violation of two-qubit states and the settings that attain it.

A CHSH operator ``S = A (x) (B + B') + A' (x) (B - B')`` built from qubit
observables ``A = a.sigma`` etc. is fully described by its 3x3 Pauli
coefficient matrix ``W = a (b + b')^T + a' (b - b')^T``, and its expectation
in a state with correlation matrix ``T`` is ``sum_jk W_jk T_jk``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadResolution
from .qmat import DEFAULT_TOLERANCES, Tolerances, svd3
from .states import PAULI_PRODUCTS, correlation_matrix, rotation_from_unitary

ZERO_CORRELATION = 1e-12
TSIRELSON = 2 * np.sqrt(2)


@dataclass(frozen=True)
class ChshSetting:
    """Unit measurement directions for Alice (``a``, ``a2``) and Bob (``b``, ``b2``).

    ``mix_angle`` is the angle with ``b + b2 = 2 cos(mix_angle) c`` and
    ``b - b2 = 2 sin(mix_angle) c2`` for orthonormal ``c``, ``c2``.
    """

    a: np.ndarray
    a2: np.ndarray
    b: np.ndarray
    b2: np.ndarray
    mix_angle: float

    def operator(self) -> "ChshOperator":
        return ChshOperator.from_setting(self)


@dataclass(frozen=True)
class ChshOperator:
    W: np.ndarray
    setting: ChshSetting | None = None

    @classmethod
    def from_setting(cls, setting: ChshSetting) -> "ChshOperator":
        w = np.outer(setting.a, setting.b + setting.b2) + np.outer(setting.a2, setting.b - setting.b2)
        return cls(W=w, setting=setting)

    def matrix(self) -> np.ndarray:
        """The 4x4 operator ``sum_jk W_jk sigma_j (x) sigma_k``."""
        return np.einsum("jk,jkab->ab", self.W, PAULI_PRODUCTS[1:, 1:])

    def conjugated(self, u_a, u_b) -> "ChshOperator":
        """Operator ``(U_A (x) U_B) S (U_A (x) U_B)^H``; its coefficients are ``R_A W R_B^T``."""
        r_a = rotation_from_unitary(u_a)
        r_b = rotation_from_unitary(u_b)
        setting = None
        if self.setting is not None:
            s = self.setting
            setting = ChshSetting(r_a @ s.a, r_a @ s.a2, r_b @ s.b, r_b @ s.b2, s.mix_angle)
        return ChshOperator(W=r_a @ self.W @ r_b.T, setting=setting)


@dataclass(frozen=True)
class NonlocalityReport:
    """Maximal CHSH value and one optimal operator.

    ``lambda1 >= lambda2`` are the two largest eigenvalues of ``T^T T``.
    ``degenerate`` marks ``lambda2 ~ lambda3`` (the optimal operator is then
    not unique), ``rank_deficient`` marks ``lambda2 ~ 0`` and
    ``zero_correlation`` marks ``T ~ 0``, where every setting gives zero.
    """

    value: float
    lambda1: float
    lambda2: float
    operator: ChshOperator
    setting: ChshSetting
    degenerate: bool
    rank_deficient: bool
    zero_correlation: bool = False


def chsh_value(rho, op: ChshOperator) -> float:
    """``tr(rho S)`` evaluated as ``sum_jk W_jk T_jk``."""
    return float(np.sum(op.W * correlation_matrix(rho)))


def _orthogonal_unit(v: np.ndarray) -> np.ndarray:
    axis = np.zeros(3)
    axis[np.argmin(np.abs(v))] = 1.0
    w = axis - np.dot(axis, v) * v
    return w / np.linalg.norm(w)


def _optimal_from_correlation(t: np.ndarray, tol: Tolerances) -> NonlocalityReport:
    dec = svd3(t, tol)
    mags = dec.magnitudes
    lam1, lam2 = float(mags[0] ** 2), float(mags[1] ** 2)
    u, v = dec.U, dec.V

    if lam1 <= ZERO_CORRELATION:
        e3 = np.array([0.0, 0.0, 1.0])
        setting = ChshSetting(a=e3, a2=e3.copy(), b=e3.copy(), b2=e3.copy(), mix_angle=0.0)
        return NonlocalityReport(
            value=0.0, lambda1=lam1, lambda2=lam2, operator=ChshOperator.from_setting(setting),
            setting=setting, degenerate=bool(dec.degenerate[1]), rank_deficient=True,
            zero_correlation=True,
        )

    # c, c2 are the top right singular directions; T c = t1 u1, so a = sign(t1) u1.
    c, c2 = v[:, 0], v[:, 1]
    a = np.sign(dec.values[0]) * u[:, 0]
    rank_deficient = bool(mags[1] <= tol.compare_tol)
    # with lambda2 = 0 the weight of a2 is zero and any unit vector will do
    a2 = np.sign(dec.values[1]) * u[:, 1] if mags[1] > 0.0 else u[:, 1]
    total = lam1 + lam2
    mix = float(np.arctan2(np.sqrt(lam2), np.sqrt(lam1)))
    cos_m, sin_m = np.sqrt(lam1 / total), np.sqrt(lam2 / total)
    setting = ChshSetting(
        a=a, a2=a2, b=cos_m * c + sin_m * c2, b2=cos_m * c - sin_m * c2, mix_angle=mix
    )
    return NonlocalityReport(
        value=float(2 * np.sqrt(total)),
        lambda1=lam1,
        lambda2=lam2,
        operator=ChshOperator.from_setting(setting),
        setting=setting,
        degenerate=bool(dec.degenerate[1]),
        rank_deficient=rank_deficient,
    )


def nonlocality(rho, tol: Tolerances = DEFAULT_TOLERANCES) -> NonlocalityReport:
    """Maximal CHSH expectation ``2 sqrt(lambda1 + lambda2)`` with an optimal setting.

    The optimal coefficient matrix is
    ``W = 2 / sqrt(lambda1 + lambda2) * T (|mu1><mu1| + |mu2><mu2|)`` where
    ``mu1, mu2`` are the leading eigenvectors of ``T^T T``.
    """
    return _optimal_from_correlation(correlation_matrix(rho), tol)


def optimal_chsh(rho, tol: Tolerances = DEFAULT_TOLERANCES) -> tuple[ChshOperator, ChshSetting]:
    report = nonlocality(rho, tol)
    return report.operator, report.setting


def optimal_family_operator(t: np.ndarray, normal: np.ndarray) -> np.ndarray:
    """Coefficients ``2 / sqrt(l1 + l2) * T (I - n n^T)`` for a unit normal ``n``.

    Optimal whenever ``n`` lies in the eigenspace of the smallest eigenvalue of
    ``T^T T``; this parametrises all optimal operators when that is degenerate.
    """
    mags = np.linalg.svd(t, compute_uv=False)
    scale = 2 / np.sqrt(mags[0] ** 2 + mags[1] ** 2)
    return scale * t @ (np.eye(3) - np.outer(normal, normal))


# ---------------------------------------------------------------------------
# Brute-force oracle
# ---------------------------------------------------------------------------

def fibonacci_sphere(n: int) -> np.ndarray:
    """``n`` nearly uniform unit vectors (golden-angle spiral)."""
    k = np.arange(n) + 0.5
    z = 1 - 2 * k / n
    phi = np.pi * (1 + np.sqrt(5)) * k
    rho = np.sqrt(1 - z * z)
    return np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])


def _pair_values(t: np.ndarray, b: np.ndarray, b2: np.ndarray) -> np.ndarray:
    # best a, a2 for given Bob directions: a || T(b + b2), a2 || T(b - b2)
    return np.linalg.norm((b + b2) @ t.T, axis=-1) + np.linalg.norm((b - b2) @ t.T, axis=-1)


def _tangent_basis(v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    e1 = _orthogonal_unit(v)
    return e1, np.cross(v, e1)


def _refine(t: np.ndarray, b: np.ndarray, b2: np.ndarray, step: float, iters: int):
    best = float(_pair_values(t, b, b2))
    for _ in range(iters):
        improved = False
        for which in (0, 1):
            base = b if which == 0 else b2
            for direction in _tangent_basis(base):
                for sign in (1.0, -1.0):
                    cand = base + sign * step * direction
                    cand /= np.linalg.norm(cand)
                    val = float(_pair_values(t, cand, b2) if which == 0 else _pair_values(t, b, cand))
                    if val > best:
                        best = val
                        if which == 0:
                            b = base = cand
                        else:
                            b2 = base = cand
                        improved = True
                        break
        if not improved:
            step *= 0.5
    return best, b, b2


def brute_force_nonlocality(rho, grid_steps: int = 64, refine_iters: int = 50, seed=0,
                            starts: int = 4) -> float:
    """Maximal CHSH value found by direct search over Bob's two directions.

    Alice's optimal directions are analytic for fixed ``b, b2``, so only
    ``S^2 x S^2`` is searched: every pair from a randomly rotated Fibonacci
    grid of ``grid_steps`` points, then pattern-search refinement from the
    best ``starts`` pairs. Every returned value is attained by an explicit
    setting, so it never exceeds the true maximum beyond rounding.
    """
    if grid_steps < 8:
        raise BadResolution(f"BadResolution: grid_steps must be >= 8, got {grid_steps}")
    t = correlation_matrix(rho)
    rng = np.random.default_rng(seed)
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    grid = fibonacci_sphere(grid_steps) @ (q * np.sign(np.diag(r))).T

    values = _pair_values(t, grid[:, None, :], grid[None, :, :])
    order = np.argsort(values, axis=None)[::-1][:starts]
    step = np.sqrt(4 * np.pi / grid_steps)
    best = 0.0
    for flat in order:
        i, j = np.unravel_index(flat, values.shape)
        val, _, _ = _refine(t, grid[i].copy(), grid[j].copy(), step, refine_iters)
        best = max(best, val)
    return best
