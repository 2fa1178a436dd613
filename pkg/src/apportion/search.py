"""
Numerical apportionment searches and closed-form small cases.

The searches minimize a smoothed version of the max-entry objective: the
power mean (mean |b_kj|^p)^(1/p) with p annealed through 2, 4, ..., 64.
Unitary iterates move by Cayley transforms of skew-Hermitian steps, GL
iterates by (I + X) M followed by det normalization.  Gradients are central
finite differences in the step coordinates.  A Levenberg-Marquardt polish
(scipy) finishes from the best annealed point.  Nothing found numerically
is ever reported as a theorem.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.optimize import least_squares

from . import linalg as la
from .certify import certify_not_u_apportionable
from .errors import DomainError, PreconditionError
from .report import INCONCLUSIVE, INFEASIBLE, UNIFORM, ApportionReport

P_SCHEDULE = (2, 4, 8, 16, 32, 64)
FD_STEP = 1e-6
TAU_FLOOR = 1e-12
COND_WEIGHT = 1e-8
COND_CAP = 1e8
SEARCH_TOL = 1e-6
DRIFT_TOL = 1e-8

THM_PSD = "psd-rank"
THM_TRANSLATION = "translation-certificate"
THM_2X2_DOUBLE = "2x2-double-eigenvalue"
THM_2X2_REAL = "2x2-real-ratio"


# --------------------------------------------------------------------------
# parametrizations


def skew_hermitian(t: np.ndarray, n: int) -> np.ndarray:
    """Skew-Hermitian matrix from n^2 real coordinates."""
    S = np.zeros((n, n), dtype=np.complex128)
    S[np.diag_indices(n)] = 1j * t[:n]
    iu = np.triu_indices(n, 1)
    k = len(iu[0])
    z = t[n:n + k] + 1j * t[n + k:n + 2 * k]
    S[iu] = z
    S[(iu[1], iu[0])] = -np.conj(z)
    return S


def cayley(S: np.ndarray) -> np.ndarray:
    """(I - S)(I + S)^{-1}, unitary for skew-Hermitian S."""
    I = np.eye(S.shape[0])
    return np.linalg.solve((I + S).T, (I - S).T).T


def general_step(t: np.ndarray, n: int) -> np.ndarray:
    return (t[:n * n] + 1j * t[n * n:]).reshape(n, n)


def sl_normalize(M: np.ndarray) -> np.ndarray:
    n = M.shape[0]
    d = np.linalg.det(M)
    return M / d ** (1.0 / n)


# --------------------------------------------------------------------------
# objectives


def power_mean(x: np.ndarray, p: float) -> float:
    m = float(np.max(x))
    if m == 0:
        return 0.0
    return m * float(np.mean((x / m) ** p)) ** (1.0 / p)


def _cond(M: np.ndarray) -> float:
    s = np.linalg.svd(M, compute_uv=False)
    return math.inf if s[-1] == 0 else float(s[0] / s[-1])


def u_residual(B: np.ndarray, kappa: float) -> float:
    return la.max_norm(B) - kappa


def spectral_drift(A: np.ndarray, B: np.ndarray) -> float:
    """Distance between spec(A) and spec(B), relative to the spectral radius of A."""
    a, b = _eigs(A), _eigs(B)
    rho = max(float(np.max(np.abs(a))), la.max_norm(A), 1e-300)
    return la.match_multisets(a, b) / rho


def gl_residual(B: np.ndarray) -> float:
    """max | |b| - mean |b| |, relative to mean |b|."""
    mag = np.abs(B)
    c = float(np.mean(mag))
    if c == 0:
        return 0.0
    return float(np.max(np.abs(mag - c))) / c


# --------------------------------------------------------------------------
# generic annealed descent


@dataclass
class _Problem:
    dim: int
    move: Callable[[np.ndarray, np.ndarray], np.ndarray]  # (state, t) -> state
    surrogate: Callable[[np.ndarray, float], float]        # (state, p) -> value
    residual: Callable[[np.ndarray], float]                # exact residual


def _fd_gradient(prob: _Problem, X: np.ndarray, p: float) -> np.ndarray:
    g = np.zeros(prob.dim)
    e = np.zeros(prob.dim)
    for k in range(prob.dim):
        e[k] = FD_STEP
        g[k] = (prob.surrogate(prob.move(X, e), p) - prob.surrogate(prob.move(X, -e), p)) / (2 * FD_STEP)
        e[k] = 0.0
    return g


def _anneal(prob: _Problem, X: np.ndarray, iters: int) -> tuple[np.ndarray, int, list[float]]:
    best_X, best_r = X, prob.residual(X)
    history = [best_r]
    steps = 0
    if best_r < 1e-14:
        return best_X, steps, history
    per_p = max(1, iters // len(P_SCHEDULE))
    for p in P_SCHEDULE:
        f = prob.surrogate(X, p)
        tau = 0.1
        for _ in range(per_p):
            g = _fd_gradient(prob, X, p)
            gn = float(np.linalg.norm(g))
            if gn < 1e-14:
                break
            d = -g / gn
            tau = min(2 * tau, 1.0)
            while tau >= TAU_FLOOR:
                Y = prob.move(X, tau * d)
                fy = prob.surrogate(Y, p)
                if fy < f:
                    X, f = Y, fy
                    break
                tau *= 0.5
            else:
                break
            steps += 1
            r = prob.residual(X)
            if r < best_r:
                best_X, best_r = X, r
            history.append(best_r)
            if best_r < 1e-14:
                return best_X, steps, history
    return best_X, steps, history


def _run_restarts(run: Callable[[int], tuple], restarts: int, jobs: int) -> list[tuple]:
    idx = range(max(1, restarts))
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(run, idx))
    return [run(k) for k in idx]


def _rng(seed: int, restart: int) -> np.random.Generator:
    return np.random.default_rng([int(seed) & (2**64 - 1), restart])


# --------------------------------------------------------------------------
# theorem checks


def _eigs(A: np.ndarray) -> np.ndarray:
    if A.shape[0] <= 8:
        return la.small_eig(A)
    return np.linalg.eigvals(A)


def gl_theorem_verdict(A) -> Optional[str]:
    """A closed-form reason why A is not GL-apportionable, if one applies."""
    A = la.as_cmatrix(A)
    if A.shape != (2, 2) or la.max_norm(A) == 0:
        return None
    lam = _eigs(A)
    scale = max(abs(lam[0]), abs(lam[1]))
    if scale == 0:
        return None
    if abs(lam[0] - lam[1]) <= 1e-12 * scale:
        return THM_2X2_DOUBLE
    a, b = sorted(lam, key=abs, reverse=True)
    r = b / a
    if abs(r.imag) <= 1e-12 and min(abs(r.real), abs(r.real + 1)) > 1e-12:
        return THM_2X2_REAL
    return None


def u_theorem_verdict(A) -> Optional[str]:
    """A closed-form reason why A is not unitarily apportionable, if one applies."""
    A = la.as_cmatrix(A)
    n = A.shape[0]
    if n < 2 or la.max_norm(A) == 0:
        return None
    scale = la.max_norm(A)
    if np.max(np.abs(A - A.conj().T)) <= 1e-12 * scale:
        lam, _ = la.hermitian_eig(A)
        if lam[-1] >= -1e-10 * scale and int(np.sum(lam > 1e-10 * lam[0])) >= 2:
            return THM_PSD
    if not certify_not_u_apportionable(A).inconclusive:
        return THM_TRANSLATION
    return gl_theorem_verdict(A)


# --------------------------------------------------------------------------
# unitary search


def _u_problem(A: np.ndarray, kappa: float) -> _Problem:
    n = A.shape[0]

    def move(U, t):
        return cayley(skew_hermitian(t, n)) @ U

    def surrogate(U, p):
        return power_mean(np.abs(U @ A @ U.conj().T).ravel(), p)

    def residual(U):
        return u_residual(U @ A @ U.conj().T, kappa)

    return _Problem(n * n, move, surrogate, residual)


def _u_polish(A: np.ndarray, U: np.ndarray, kappa: float) -> np.ndarray:
    n = A.shape[0]
    if kappa == 0:
        return U

    def res(t):
        V = cayley(skew_hermitian(t, n)) @ U
        return (np.abs(V @ A @ V.conj().T).ravel() - kappa) / kappa

    sol = least_squares(res, np.zeros(n * n), method="trf", xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=200 * n * n)
    V = cayley(skew_hermitian(sol.x, n)) @ U
    before = u_residual(U @ A @ U.conj().T, kappa)
    after = u_residual(V @ A @ V.conj().T, kappa)
    return V if after < before else U


def search_unitary(A, restarts: int = 4, iters: int = 300, seed: int = 0, jobs: int = 1,
                   tol: float = SEARCH_TOL, polish: bool = True) -> ApportionReport:
    A = la.as_cmatrix(A)
    n = A.shape[0]
    kappa = la.frobenius(A) / n
    prob = _u_problem(A, kappa)
    I = np.eye(n, dtype=np.complex128)
    if prob.residual(I) < 1e-14:
        # already uniform: skip the restarts
        r0 = prob.residual(I)
        return ApportionReport(UNIFORM, I, kappa, max(r0, 0.0), 0, seed, A.copy(), None, [r0])

    def run(k: int):
        U0 = np.eye(n, dtype=np.complex128) if k == 0 else la.random_unitary(n, _rng(seed, k))
        U, steps, hist = _anneal(prob, U0, iters)
        if polish:
            U = _u_polish(A, U, kappa)
            hist.append(min(hist[-1], prob.residual(U)))
        return prob.residual(U), k, U, steps, hist

    results = _run_restarts(run, restarts, jobs)
    r, k, U, steps, hist = min(results, key=lambda t: (t[0], t[1]))
    B = U @ A @ U.conj().T
    flag, _ = la.is_uniform(B, tol)
    status, theorem = (UNIFORM, None) if flag else (INCONCLUSIVE, u_theorem_verdict(A))
    if theorem is not None:
        status = INFEASIBLE
    total = sum(t[3] for t in results)
    return ApportionReport(status, U, kappa, max(r, 0.0) if r > -1e-12 else r, total, seed, B, theorem, hist)


# --------------------------------------------------------------------------
# GL search


def _gl_problem(A: np.ndarray) -> _Problem:
    n = A.shape[0]
    I = np.eye(n)

    def conj(M):
        return M @ A @ np.linalg.inv(M)

    def move(M, t):
        return sl_normalize((I + general_step(t, n)) @ M)

    def surrogate(M, p):
        mag = np.abs(conj(M)).ravel()
        m2 = power_mean(mag, 2)
        if m2 == 0:
            return 0.0
        return power_mean(mag, p) / m2 + COND_WEIGHT * _cond(M) ** 2

    def residual(M):
        return gl_residual(conj(M))

    return _Problem(2 * n * n, move, surrogate, residual)


def _gl_polish(A: np.ndarray, M: np.ndarray) -> np.ndarray:
    n = A.shape[0]
    I = np.eye(n)

    def res(t):
        N = (I + general_step(t, n)) @ M
        mag = np.abs(N @ A @ np.linalg.inv(N)).ravel()
        c = float(np.mean(mag))
        return mag / c - 1.0 if c > 0 else mag

    sol = least_squares(res, np.zeros(2 * n * n), method="trf", xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=100 * n * n)
    N = sl_normalize((I + general_step(sol.x, n)) @ M)
    # an ill-conditioned N can make B look uniform while it has drifted
    # away from being similar to A
    if _cond(N) > COND_CAP or spectral_drift(A, N @ A @ np.linalg.inv(N)) > DRIFT_TOL:
        return M
    before = gl_residual(M @ A @ np.linalg.inv(M))
    after = gl_residual(N @ A @ np.linalg.inv(N))
    return N if after < before else M


def search_gl(A, restarts: int = 4, iters: int = 300, seed: int = 0, jobs: int = 1,
              tol: float = SEARCH_TOL, polish: bool = True) -> ApportionReport:
    A = la.as_cmatrix(A)
    n = A.shape[0]
    prob = _gl_problem(A)
    I = np.eye(n, dtype=np.complex128)
    if prob.residual(I) < 1e-14:
        r0 = float(np.max(np.abs(np.abs(A) - np.mean(np.abs(A)))))
        return ApportionReport(UNIFORM, I, float(np.mean(np.abs(A))), r0, 0, seed, A.copy(), None, [prob.residual(I)])

    def run(k: int):
        # the identity is a poor start here: |b_ij| is not differentiable
        # where an off-diagonal entry vanishes, so central differences stall
        rng = _rng(seed, k)
        M0 = sl_normalize(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
        M, steps, hist = _anneal(prob, M0, iters)
        if polish:
            M = _gl_polish(A, M)
            hist.append(min(hist[-1], prob.residual(M)))
        return prob.residual(M), k, M, steps, hist

    results = _run_restarts(run, restarts, jobs)
    r, k, M, steps, hist = min(results, key=lambda t: (t[0], t[1]))
    B = M @ A @ np.linalg.inv(M)
    kappa = float(np.mean(np.abs(B)))
    r = float(np.max(np.abs(np.abs(B) - kappa)))
    status = UNIFORM if r < tol * (1.0 + kappa) and spectral_drift(A, B) <= DRIFT_TOL else INCONCLUSIVE
    theorem = None
    if status != UNIFORM:
        theorem = gl_theorem_verdict(A)
        if theorem is not None:
            status = INFEASIBLE
    total = sum(t[3] for t in results)
    # history holds the best relative residual after each accepted step
    return ApportionReport(status, M, kappa, r, total, seed, B, theorem, hist)


# --------------------------------------------------------------------------
# uniformity ratio search


def uar_estimate(A, restarts: int = 4, iters: int = 300, seed: int = 0, jobs: int = 1) -> float:
    """Estimate inf over unitaries of max|b| / min|b| for B = U A U^*."""
    A = la.as_cmatrix(A)
    n = A.shape[0]
    if la.max_norm(A) == 0:
        raise DomainError("the uniformity ratio is undefined for the zero matrix")

    def move(U, t):
        return cayley(skew_hermitian(t, n)) @ U

    def surrogate(U, p):
        mag = np.abs(U @ A @ U.conj().T).ravel() + 1e-300
        # log of a smoothed max over a smoothed min
        return math.log(power_mean(mag, p)) + math.log(power_mean(1.0 / mag, p))

    def residual(U):
        return la.uniformity_ratio(U @ A @ U.conj().T) - 1.0

    prob = _Problem(n * n, move, surrogate, residual)
    r0 = residual(np.eye(n))
    if r0 < 1e-14:
        return 1.0 + r0

    def run(k: int):
        U0 = np.eye(n, dtype=np.complex128) if k == 0 else la.random_unitary(n, _rng(seed, k))
        U, _, _ = _anneal(prob, U0, iters)
        kappa = la.frobenius(A) / n
        V = _u_polish(A, U, kappa)
        r = min(prob.residual(U), prob.residual(V))
        return r, k

    results = _run_restarts(run, restarts, jobs)
    return 1.0 + min(results)[0]


# --------------------------------------------------------------------------
# membership test and decomposition


def additive_apport_test(A, M, tol: float = 1e-9) -> bool:
    """M apportions A iff the n^2-point DFT of vec(B o conj B) lies along e_0."""
    A = la.as_cmatrix(A)
    M = la.as_cmatrix(M)
    if _cond(M) >= 1e12:
        raise DomainError("M is singular or too ill-conditioned")
    B = M @ A @ np.linalg.inv(M)
    v = la.vec(B * np.conj(B))
    nv = float(np.linalg.norm(v))
    if nv == 0:
        return True
    Fv = la.dft(v.size) @ v
    return bool(np.max(np.abs(Fv[1:])) < tol * nv)


def verify_decomposition(A, M, kappa: float) -> float:
    """max-norm of A - kappa^2 M^{-1} (conj(M A M^{-1}))^{o -1} M."""
    A = la.as_cmatrix(A)
    M = la.as_cmatrix(M)
    Minv = np.linalg.inv(M)
    B = M @ A @ Minv
    return la.max_norm(A - kappa**2 * Minv @ la.hadamard_inverse(np.conj(B)) @ M)


# --------------------------------------------------------------------------
# 2 x 2 closed forms


def realizable_real_pair(r) -> tuple[bool, Optional[np.ndarray]]:
    """Is {1, r} the spectrum of some uniform 2 x 2 matrix?  With a witness."""
    if isinstance(r, (int, np.integer)) or hasattr(r, "denominator"):
        zero, minus_one = r == 0, r == -1
    else:
        zero, minus_one = abs(r) <= 1e-12, abs(r + 1) <= 1e-12
    if zero:
        return True, 0.5 * np.ones((2, 2), dtype=np.complex128)
    if minus_one:
        return True, la.hadamard2().astype(np.complex128) / math.sqrt(2)
    return False, None


def constant_spectrum_check(lam: complex, tol: float = 1e-12) -> bool:
    """Is {lam, lam} the spectrum of some uniform 2 x 2 matrix?"""
    return abs(lam) <= tol


def similarity_2x2(c: complex, x: complex, y: complex, z: complex) -> np.ndarray:
    """M diag(1, c) M^{-1} for M = [[x, y], [z, (1 + yz)/x]]."""
    if x == 0:
        raise DomainError("x must be nonzero")
    k = 1 - c
    return np.array([[1 + k * y * z, -k * x * y],
                     [k * (1 + y * z) * z / x, c - k * y * z]], dtype=np.complex128)


def example_family(a: float, theta: float, tol: float = 1e-10) -> ApportionReport:
    """M = [[a, 1/a], [a, e^{i theta}/a]] apportions diag(2, 0) with kappa = 1/|sin(theta/2)|."""
    if a == 0:
        raise DomainError("a must be nonzero")
    if not 0 < theta < 2 * math.pi:
        raise DomainError("theta must lie strictly between 0 and 2 pi")
    A = np.diag([2.0, 0.0]).astype(np.complex128)
    M = np.array([[a, 1 / a], [a, np.exp(1j * theta) / a]], dtype=np.complex128)
    B = M @ A @ np.linalg.inv(M)
    flag, kappa = la.is_uniform(B, tol)
    return ApportionReport(UNIFORM if flag else INCONCLUSIVE, M, kappa, gl_residual(B) * kappa, matrix=B)


# --------------------------------------------------------------------------
# uniform matrices with prescribed spectra


def _require_uniform(B: np.ndarray, name: str = "B") -> None:
    if not la.is_uniform(B)[0]:
        raise DomainError(f"{name} is not uniform")


def spectra_zero_pad(B, r: int) -> np.ndarray:
    """(F_r (x) I)(E_00 (x) B)(F_r (x) I)^*: uniform, spectrum spec(B) plus (r-1)n zeros."""
    B = la.as_cmatrix(B)
    _require_uniform(B)
    if r < 1:
        raise PreconditionError("r must be positive")
    n = B.shape[0]
    F = la.kron(la.dft(r), np.eye(n))
    E = np.zeros((r, r))
    E[0, 0] = 1.0
    return F @ la.kron(E, B) @ F.conj().T


def kron_uniform(B1, B2) -> np.ndarray:
    B1, B2 = la.as_cmatrix(B1), la.as_cmatrix(B2)
    _require_uniform(B1, "B1")
    _require_uniform(B2, "B2")
    return la.kron(B1, B2)
