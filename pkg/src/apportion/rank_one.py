"""
Unitary apportionment of rank-one matrices.

Every rank-one matrix is unitarily similar to gamma e_0 (alpha e_0^T +
beta e_1^T) by two Householder reflections; from that canonical form a
unitary with uniform columns u_0 = 1/sqrt(n) and a suitably chosen u_1
makes the conjugate uniform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg as la
from .errors import DomainError
from .report import INCONCLUSIVE, UNIFORM, ApportionReport

RANK_TOL = 1e-10
BRANCH_TOL = 1e-12


@dataclass(frozen=True)
class RankOneCanonical:
    gamma: complex
    alpha: float
    beta: float
    U: np.ndarray

    def form(self) -> np.ndarray:
        n = self.U.shape[0]
        C = np.zeros((n, n), dtype=np.complex128)
        C[0, 0] = self.gamma * self.alpha
        C[0, 1] = self.gamma * self.beta
        return C


def _svals(A: np.ndarray) -> np.ndarray:
    # sqrt(eig(A*A)) cannot resolve sigma_1/sigma_0 below ~1e-8, so rank
    # decisions use a direct SVD
    return np.linalg.svd(A, compute_uv=False)


def numerical_rank(A, rel: float = RANK_TOL) -> int:
    s = _svals(la.as_cmatrix(A))
    if s[0] == 0:
        return 0
    return int(np.sum(s > rel * s[0]))


def _require_rank_one(A: np.ndarray) -> None:
    s = _svals(A)
    if s[0] == 0:
        raise DomainError("matrix is zero (rank 0)")
    if s.size > 1 and s[1] >= RANK_TOL * s[0]:
        raise DomainError(f"matrix is not rank one (sigma_1/sigma_0 = {s[1] / s[0]:.3e})")


def factor_rank_one(A):
    """Factor a rank-one A as x y* with ||x|| = 1."""
    A = la.as_cmatrix(A)
    _require_rank_one(A)
    j = int(np.argmax(np.linalg.norm(A, axis=0)))
    x = A[:, j] / np.linalg.norm(A[:, j])
    y = la.adjoint(A) @ x
    return x, y


def canonical_rank_one(A) -> RankOneCanonical:
    A = la.as_cmatrix(A)
    n = A.shape[0]
    x, y = factor_rank_one(A)
    fro = la.frobenius(A)
    lam = complex(np.trace(A))
    if abs(lam) < BRANCH_TOL * fro:
        lam = 0j
    if n == 1:
        return RankOneCanonical(la.sgn(lam), abs(lam), 0.0, np.eye(1, dtype=np.complex128))

    e0 = la.basis(n, 0)
    H1 = la.householder(x, e0)
    z = H1 @ y
    zhat = z.copy()
    zhat[0] = 0.0
    beta = float(np.linalg.norm(zhat))
    if beta < BRANCH_TOL * np.linalg.norm(z):
        H2 = np.eye(n, dtype=np.complex128)
        beta = 0.0
    else:
        # z_0 = conj(lambda); sgn(0) = 1 on the traceless branch
        target = la.sgn(np.conj(lam)) * beta * la.basis(n, 1)
        if np.linalg.norm(zhat - target) < BRANCH_TOL * beta:
            H2 = np.eye(n, dtype=np.complex128)
        else:
            H2 = la.householder(zhat, target)
    return RankOneCanonical(la.sgn(lam), abs(lam), beta, H2 @ H1)


def second_column(n: int, ratio: float) -> np.ndarray:
    """
    Column u_1 making u_0 + ratio * u_1 uniform, where ratio = beta / alpha > 0.
    """
    if n % 2 == 0:
        return np.array([1j if k % 2 == 0 else -1j for k in range(n)]) / math.sqrt(n)
    a = (1.0 - math.sqrt(ratio * ratio + 1.0)) / ((n - 1) * math.sqrt(n) * ratio)
    b = math.sqrt(max(1.0 / (n - 1) - n * a * a, 0.0))
    u = np.empty(n, dtype=np.complex128)
    u[0] = (1 - n) * a
    u[1::2] = a + 1j * b
    u[2::2] = a - 1j * b
    return u


def apportion_rank_one(A, tol: float = la.DEFAULT_TOL) -> ApportionReport:
    """Unitary V with V A V* uniform, for A of rank at most one."""
    A = la.as_cmatrix(A)
    n = A.shape[0]
    fro = la.frobenius(A)
    kappa = fro / n
    if fro == 0:
        V = np.eye(n, dtype=np.complex128)
        return ApportionReport(UNIFORM, V, 0.0, 0.0, matrix=A.copy())
    _require_rank_one(A)
    if n == 1:
        V = np.eye(1, dtype=np.complex128)
        return ApportionReport(UNIFORM, V, kappa, 0.0, matrix=A.copy())

    canon = canonical_rank_one(A)
    if canon.alpha == 0.0 or canon.beta == 0.0:
        V = la.dft(n) @ canon.U
    else:
        u0 = np.ones(n, dtype=np.complex128) / math.sqrt(n)
        u1 = second_column(n, canon.beta / canon.alpha)
        V = la.extend_to_unitary([u0, u1], n) @ canon.U
    B = V @ A @ la.adjoint(V)
    flag, _ = la.is_uniform(B, tol)
    residual = float(np.max(np.abs(np.abs(B) - kappa)))
    return ApportionReport(UNIFORM if flag else INCONCLUSIVE, V, kappa, residual, matrix=B)
