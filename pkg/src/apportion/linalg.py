"""
Dense complex linear algebra used throughout the package.

Matrices are plain ``numpy`` arrays of dtype ``complex128``; ``as_cmatrix``
validates and converts.  The eigensolvers are written out here (cyclic
Jacobi for Hermitian input, Durand-Kerner on the characteristic polynomial
for small general input) so that numerical cross-checks never compare a
routine against itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, NumericError, PreconditionError

DEFAULT_TOL = 1e-9


def as_cmatrix(A) -> np.ndarray:
    """Return ``A`` as a square, finite ``complex128`` array."""
    M = np.array(A, dtype=np.complex128)
    if M.ndim == 0:
        M = M.reshape(1, 1)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] == 0:
        raise DomainError(f"expected a nonempty square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise DomainError("matrix entries must be finite")
    return M


def sgn(z: complex) -> complex:
    """Complex sign with sgn(0) = 1."""
    r = abs(z)
    return complex(1.0) if r == 0 else complex(z) / r


def basis(n: int, i: int) -> np.ndarray:
    e = np.zeros(n, dtype=np.complex128)
    e[i] = 1.0
    return e


def ones(n: int) -> np.ndarray:
    """All-ones matrix J_n."""
    return np.ones((n, n), dtype=np.complex128)


def unit(n: int, k: int, j: int) -> np.ndarray:
    """Matrix unit E_kj of size n."""
    E = np.zeros((n, n), dtype=np.complex128)
    E[k, j] = 1.0
    return E


def hadamard2() -> np.ndarray:
    return np.array([[1, 1], [1, -1]], dtype=np.complex128)


def adjoint(A: np.ndarray) -> np.ndarray:
    return A.conj().T


# --------------------------------------------------------------------------
# Norms


@dataclass(frozen=True)
class NormReport:
    max: float
    frobenius: float
    spectral: float
    nuclear: float


def max_norm(A) -> float:
    return float(np.max(np.abs(A)))


def frobenius(A) -> float:
    return float(np.sqrt(np.sum(np.abs(A) ** 2)))


def singular_values(A) -> np.ndarray:
    """Singular values (descending) as square roots of the eigenvalues of A*A."""
    A = as_cmatrix(A)
    lam, _ = hermitian_eig(adjoint(A) @ A)
    return np.sqrt(np.clip(lam, 0.0, None))


def norms(A) -> NormReport:
    A = as_cmatrix(A)
    s = singular_values(A)
    return NormReport(
        max=max_norm(A),
        frobenius=frobenius(A),
        spectral=float(s[0]),
        nuclear=float(np.sum(s)),
    )


def schatten(A, p: float) -> float:
    """Schatten-p norm; ``p = inf`` gives the spectral norm."""
    s = singular_values(A)
    if math.isinf(p):
        return float(s[0])
    return float(np.sum(s**p) ** (1.0 / p))


# --------------------------------------------------------------------------
# Special matrices


def root_of_unity(n: int) -> complex:
    """The primitive n-th root of unity used everywhere: exp(-2 pi i / n)."""
    return complex(np.exp(-2j * np.pi / n))


def dft(n: int) -> np.ndarray:
    """
    Unitary DFT matrix, (F_n)_{kj} = omega^{kj} / sqrt(n).

    omega = exp(-2 pi i / n); with this sign the eigenvalue multiplicities
    of F_n follow the McClellan-Parks table (i has the smallest count when
    4 | n).
    """
    if n < 1:
        raise DomainError("n must be positive")
    k = np.arange(n)
    # reduce kj mod n before exponentiating so large n keeps full accuracy
    return np.exp(-2j * np.pi * (np.outer(k, k) % n) / n) / np.sqrt(n)


def cyclic_shift(n: int) -> np.ndarray:
    """Permutation matrix with C e_i = e_{(i+1) mod n}."""
    if n < 1:
        raise DomainError("n must be positive")
    C = np.zeros((n, n), dtype=np.complex128)
    C[(np.arange(n) + 1) % n, np.arange(n)] = 1.0
    return C


def is_unitary(U, tol: float = 1e-10) -> bool:
    U = np.asarray(U)
    return bool(np.max(np.abs(adjoint(U) @ U - np.eye(U.shape[0]))) < tol)


def householder(v, w, tol: float = 1e-10) -> np.ndarray:
    """
    Unitary U with U v = w for vectors of equal 2-norm.

    Uses I - u u*/(u* v) with u = v - w.  That matrix is unitary only when
    w* v is real, so for non-real w* v the reflector is built towards the
    phase-rotated target e^{i phi} w and followed by a rotation acting on
    span{w} alone.  Both factors fix every vector orthogonal to v and w.
    """
    v = np.asarray(v, dtype=np.complex128).ravel()
    w = np.asarray(w, dtype=np.complex128).ravel()
    if v.shape != w.shape:
        raise PreconditionError("v and w must have the same length")
    nv, nw = np.linalg.norm(v), np.linalg.norm(w)
    if abs(nv - nw) > tol * max(1.0, nv):
        raise PreconditionError(f"norm mismatch: |v| = {nv}, |w| = {nw}")
    n = v.size
    I = np.eye(n, dtype=np.complex128)
    if np.linalg.norm(v - w) <= 1e-15 * max(1.0, nv):
        return I
    inner = np.vdot(w, v)
    phase = sgn(inner)
    target = phase * w
    u = v - target
    denom = np.vdot(u, v)
    if abs(denom) <= 1e-300:
        H = I
    else:
        H = I - np.outer(u, u.conj()) / denom
    if abs(phase - 1.0) <= 1e-15:
        return H
    # rotate phase * w back to w, identity on the orthogonal complement of w
    wh = w / nw
    R = I + (np.conj(phase) - 1.0) * np.outer(wh, wh.conj())
    return R @ H


def extend_to_unitary(cols: Sequence, n: int, tol: float = 1e-10) -> np.ndarray:
    """
    Complete orthonormal columns to an n x n unitary matrix.

    Candidates e_0, e_1, ... are orthogonalized (modified Gram-Schmidt, two
    passes) against the current columns; candidates whose residual falls
    below 1e-8 are skipped.
    """
    Q = [np.asarray(c, dtype=np.complex128).ravel() for c in cols]
    for c in Q:
        if c.size != n:
            raise PreconditionError("column length differs from n")
    if Q:
        G = np.array(Q)
        if np.max(np.abs(G.conj() @ G.T - np.eye(len(Q)))) > tol:
            raise PreconditionError("input columns are not orthonormal")
    for k in range(n):
        if len(Q) == n:
            break
        r = basis(n, k)
        for _ in range(2):
            for q in Q:
                r = r - np.vdot(q, r) * q
        nr = np.linalg.norm(r)
        if nr < 1e-8:
            continue
        Q.append(r / nr)
    if len(Q) != n:
        raise NumericError("failed to complete the basis")
    return np.array(Q).T


# --------------------------------------------------------------------------
# Eigensolvers


def _is_hermitian(H: np.ndarray, tol: float) -> bool:
    return bool(np.max(np.abs(H - adjoint(H))) < tol)


def hermitian_eig(H, tol: float = 1e-10, max_sweeps: int = 100):
    """
    Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi sweeps.

    Returns ``(lam, V)`` with ``lam`` real and nonincreasing and ``V``
    unitary such that H = V diag(lam) V*.
    """
    H = as_cmatrix(H)
    if not _is_hermitian(H, tol * max(1.0, max_norm(H))):
        raise PreconditionError("matrix is not Hermitian")
    n = H.shape[0]
    A = 0.5 * (H + adjoint(H))
    V = np.eye(n, dtype=np.complex128)
    scale = max(frobenius(A), 1e-300)
    iu = np.triu_indices(n, 1)
    for _ in range(max_sweeps):
        off = math.sqrt(2.0 * float(np.sum(np.abs(A[iu]) ** 2)))
        if off <= 1e-12 * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                h = A[p, q]
                ah = abs(h)
                if ah <= 1e-300:
                    continue
                a, b = A[p, p].real, A[q, q].real
                tau = (b - a) / (2.0 * ah)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                ph = h / ah
                # R = diag(1, conj(ph)) @ [[c, s], [-s, c]]
                R = np.array([[c, s], [-s * np.conj(ph), c * np.conj(ph)]])
                idx = [p, q]
                A[:, idx] = A[:, idx] @ R
                A[idx, :] = adjoint(R) @ A[idx, :]
                A[p, q] = A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
                V[:, idx] = V[:, idx] @ R
    else:
        off = math.sqrt(2.0 * float(np.sum(np.abs(A[iu]) ** 2)))
        if off > 1e-12 * scale:
            raise NumericError("Jacobi iteration did not converge")
    lam = np.real(np.diag(A)).copy()
    order = np.argsort(-lam, kind="stable")
    return lam[order], V[:, order]


def normal_eig(A, tol: float = 1e-9) -> np.ndarray:
    """
    Eigenvalues of a normal matrix via a generic Hermitian combination.

    Re(A) + c Im(A) (with Re, Im the Hermitian parts) shares eigenvectors
    with A for generic real c; Rayleigh quotients then give the eigenvalues.
    """
    A = as_cmatrix(A)
    if np.max(np.abs(A @ adjoint(A) - adjoint(A) @ A)) > tol * max(1.0, max_norm(A)) ** 2:
        raise PreconditionError("matrix is not normal")
    re = 0.5 * (A + adjoint(A))
    im = (A - adjoint(A)) / 2j
    _, V = hermitian_eig(re + math.sqrt(2.0) / 3.0 * im)
    return np.einsum("ij,ik,kj->j", V.conj(), A, V)


def charpoly(A) -> np.ndarray:
    """Characteristic polynomial coefficients (leading 1 first), Faddeev-LeVerrier."""
    A = as_cmatrix(A)
    n = A.shape[0]
    coeffs = np.zeros(n + 1, dtype=np.complex128)
    coeffs[0] = 1.0
    M = np.zeros_like(A)
    I = np.eye(n, dtype=np.complex128)
    for k in range(1, n + 1):
        M = A @ M + coeffs[k - 1] * I
        coeffs[k] = -np.trace(A @ M) / k
    return coeffs


def _poly_derivative_value(coeffs: np.ndarray, z: complex, k: int) -> complex:
    # k-th derivative divided by k!
    d = len(coeffs) - 1
    total = 0j
    for i, a in enumerate(coeffs):
        p = d - i
        if p >= k:
            total += a * math.comb(p, k) * z ** (p - k)
    return total


def _poly_abs_bound(coeffs: np.ndarray, z: complex, k: int) -> float:
    d = len(coeffs) - 1
    r = abs(z)
    return sum(abs(a) * math.comb(d - i, k) * r ** (d - i - k) for i, a in enumerate(coeffs) if d - i >= k)


def durand_kerner(coeffs, tol: float = 1e-14, max_iter: int = 2000) -> np.ndarray:
    """All roots of a monic polynomial by simultaneous (Weierstrass) iteration."""
    c = np.asarray(coeffs, dtype=np.complex128)
    c = c / c[0]
    d = len(c) - 1
    if d == 0:
        return np.zeros(0, dtype=np.complex128)
    radius = 1.0 + float(np.max(np.abs(c[1:])))
    z = radius * (0.4 + 0.9j) ** np.arange(d)
    absc = np.abs(c)
    for _ in range(max_iter):
        pz = np.polyval(c, z)
        # stop once every residual is at rounding level (multiple roots
        # converge only linearly, so step size alone is not a usable test)
        if np.all(np.abs(pz) <= 8 * np.finfo(float).eps * np.polyval(absc, np.abs(z))):
            return z
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        denom = np.prod(diff, axis=1)
        if np.any(denom == 0):
            z = z + 1e-8 * radius * (np.arange(d) + 1)
            continue
        step = pz / denom
        z = z - step
        if np.max(np.abs(step)) <= tol * max(1.0, float(np.max(np.abs(z)))):
            return z
    raise NumericError("Durand-Kerner iteration did not converge")


def _polish_clusters(coeffs: np.ndarray, roots: np.ndarray) -> np.ndarray:
    # Perturbed m-fold roots scatter by O(eps^(1/m)) but keep an accurate
    # centroid; merge a cluster only if the polynomial really has a
    # root of that multiplicity at the centroid.
    roots = roots.copy()
    scale = max(1.0, float(np.max(np.abs(roots)))) if roots.size else 1.0
    unused = list(range(roots.size))
    while unused:
        i = unused.pop(0)
        cluster = [i] + [j for j in unused if abs(roots[j] - roots[i]) < 1e-3 * scale]
        if len(cluster) == 1:
            continue
        centre = complex(np.mean(roots[cluster]))
        ok = all(
            abs(_poly_derivative_value(coeffs, centre, k)) <= 1e-6 * _poly_abs_bound(coeffs, centre, k)
            for k in range(len(cluster))
        )
        if ok:
            roots[cluster] = centre
            for j in cluster[1:]:
                unused.remove(j)
    return roots


def small_eig(A, max_n: int = 8) -> np.ndarray:
    """Eigenvalues (unordered multiset) of a small matrix via its characteristic polynomial."""
    A = as_cmatrix(A)
    n = A.shape[0]
    if n > max_n:
        raise DomainError(f"small_eig supports n <= {max_n}, got {n}")
    s = max(max_norm(A), 1e-300)
    # scale so coefficients stay O(1)
    coeffs = charpoly(A / s)
    roots = durand_kerner(coeffs)
    roots = _polish_clusters(coeffs, roots)
    return roots * s


def match_multisets(a, b) -> float:
    """Max distance under the best greedy pairing of two equal-size complex multisets."""
    a = list(np.asarray(a, dtype=np.complex128).ravel())
    b = list(np.asarray(b, dtype=np.complex128).ravel())
    if len(a) != len(b):
        return math.inf
    worst = 0.0
    for x in sorted(a, key=lambda z: (round(z.real, 6), round(z.imag, 6))):
        j = min(range(len(b)), key=lambda k: abs(b[k] - x))
        worst = max(worst, abs(b[j] - x))
        b.pop(j)
    return worst


# --------------------------------------------------------------------------
# Uniformity


def is_uniform(A, tol: float = DEFAULT_TOL) -> tuple[bool, float]:
    """
    Uniformity test: every |a_kj| within tol * (c + 1) of c = mean |a_kj|.
    """
    if tol < 0:
        raise PreconditionError("tol must be nonnegative")
    mags = np.abs(as_cmatrix(A))
    c = float(np.mean(mags))
    return bool(np.max(np.abs(mags - c)) <= tol * (c + 1.0)), c


def uniformity_ratio(A) -> float:
    mags = np.abs(as_cmatrix(A))
    top = float(np.max(mags))
    if top == 0:
        raise DomainError("uniformity ratio undefined for the zero matrix")
    low = float(np.min(mags))
    return math.inf if low == 0 else top / low


# --------------------------------------------------------------------------
# Products


def kron(A, B) -> np.ndarray:
    return np.kron(np.asarray(A, dtype=np.complex128), np.asarray(B, dtype=np.complex128))


def vec(A) -> np.ndarray:
    """Column-stacking vectorization."""
    return np.asarray(A, dtype=np.complex128).flatten(order="F")


def hadamard(A, B) -> np.ndarray:
    return np.asarray(A, dtype=np.complex128) * np.asarray(B, dtype=np.complex128)


def hadamard_inverse(A) -> np.ndarray:
    A = np.asarray(A, dtype=np.complex128)
    if np.any(A == 0):
        raise DomainError("entrywise inverse needs all entries nonzero")
    return 1.0 / A


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary (QR of a complex Gaussian, phases fixed)."""
    Z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2.0)
    Q, R = np.linalg.qr(Z)
    d = np.diag(R)
    return Q * (d / np.abs(d))
