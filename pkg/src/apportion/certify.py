"""
Certificates that a matrix is *not* unitarily apportionable, and bounds on
the unitary apportionment gap.

The translation test: if some complex c has |c| strictly larger than

    S/n + sqrt((S/n)^2 + ||A - cI||_F^2 / (n(n-1))),   S = sum_k |a_kk - c|,

then A admits no unitary similarity to a uniform matrix.  The test is only
sufficient; a failed search is reported as ``none-found`` and means nothing.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import linalg as la
from .errors import DomainError, PreconditionError

TRANSLATION = "translation-violation"
PSD_RANK = "psd-rank"
NONE_FOUND = "none-found"

N_ANGLES = 24
N_RADII = 20


@dataclass(frozen=True)
class Certificate:
    kind: str
    witness_c: Optional[complex] = None
    lhs: float = 0.0
    rhs: float = 0.0
    # True/False when the verdict is proved, None when inconclusive
    u_apportionable: Optional[bool] = None

    @property
    def inconclusive(self) -> bool:
        return self.u_apportionable is None

    def to_dict(self) -> dict:
        c = self.witness_c
        return {
            "kind": self.kind,
            "witness_c": None if c is None else [c.real, c.imag],
            "lhs": self.lhs,
            "rhs": self.rhs,
            "u_apportionable": self.u_apportionable,
            "inconclusive": self.inconclusive,
        }


def translation_rhs(A, c: complex) -> float:
    A = la.as_cmatrix(A)
    n = A.shape[0]
    if n < 2:
        raise DomainError("the translation bound needs n >= 2")
    S = float(np.sum(np.abs(np.diag(A) - c))) / n
    shifted = A - c * np.eye(n)
    return S + math.sqrt(S * S + la.frobenius(shifted) ** 2 / (n * (n - 1)))


def _score(A: np.ndarray, c: complex) -> float:
    return abs(c) - translation_rhs(A, c)


def _candidates(A: np.ndarray) -> list[complex]:
    diag = [complex(d) for d in np.diag(A)]
    cands = diag + [complex(np.mean(np.diag(A)))]
    rmax = 4.0 * la.max_norm(A)
    if rmax > 0:
        for i in range(1, N_RADII + 1):
            r = rmax * i / N_RADII
            for k in range(N_ANGLES):
                cands.append(cmath.rect(r, 2 * math.pi * k / N_ANGLES))
    return cands


def _refine(A: np.ndarray, c: complex, score: float, step: float) -> tuple[complex, float]:
    # compass search on the real plane, halving the step on failure
    dirs = (1, -1, 1j, -1j, (1 + 1j) / math.sqrt(2), (1 - 1j) / math.sqrt(2),
            (-1 + 1j) / math.sqrt(2), (-1 - 1j) / math.sqrt(2))
    floor = 1e-12 * max(1.0, abs(c), step)
    for _ in range(400):
        if step < floor:
            break
        best = None
        for d in dirs:
            cand = c + step * d
            s = _score(A, cand)
            if s > score and (best is None or s > best[1]):
                best = (cand, s)
        if best is None:
            step *= 0.5
        else:
            c, score = best
    return c, score


def certify_not_u_apportionable(A) -> Certificate:
    """Search for a translation that violates the necessary condition."""
    A = la.as_cmatrix(A)
    n = A.shape[0]
    if n < 2:
        raise DomainError("certificates need n >= 2")
    scored = [(_score(A, c), c) for c in _candidates(A)]
    # deterministic reduction: max score, then smaller |c|, then smaller arg
    scored.sort(key=lambda t: (-t[0], abs(t[1]), cmath.phase(t[1]) % (2 * math.pi)))
    best_score, best_c = scored[0]
    step = max(la.max_norm(A), 1e-12) / N_RADII
    c, score = _refine(A, best_c, best_score, step)
    rhs = translation_rhs(A, c)
    # strict violation with a margin above rounding
    if abs(c) - rhs > 1e-12 * (1.0 + abs(c)):
        return Certificate(TRANSLATION, c, abs(c), rhs, u_apportionable=False)
    return Certificate(NONE_FOUND, c, abs(c), rhs, u_apportionable=None)


def psd_apportionability(H, tol: float = 1e-10) -> Certificate:
    """A positive semidefinite H is unitarily apportionable iff rank H <= 1."""
    H = la.as_cmatrix(H)
    scale = max(1.0, la.max_norm(H))
    if np.max(np.abs(H - la.adjoint(H))) > tol * scale:
        raise PreconditionError("matrix is not Hermitian")
    lam, _ = la.hermitian_eig(H)
    if lam[-1] < -tol * max(1.0, abs(lam[0])):
        raise DomainError("matrix is not positive semidefinite")
    rank = int(np.sum(lam > tol * max(lam[0], 0.0))) if lam[0] > 0 else 0
    return Certificate(PSD_RANK, None, float(rank), 1.0, u_apportionable=rank <= 1)


@dataclass(frozen=True)
class UBounds:
    lower: float
    upper: float
    normal_upper: Optional[float]


def u_bounds(A) -> UBounds:
    """Bounds ||A||_F/n <= u(A) <= ||A||_2, and u(A) <= ||A||_*/n for normal A."""
    A = la.as_cmatrix(A)
    n = A.shape[0]
    r = la.norms(A)
    comm = A @ la.adjoint(A) - la.adjoint(A) @ A
    normal = r.nuclear / n if np.max(np.abs(comm)) < 1e-9 else None
    return UBounds(r.frobenius / n, r.spectral, normal)


def equiangular_test_matrix(B, theta: float, tol: float = 1e-10) -> np.ndarray:
    """
    B*B + (cos(theta) - 1) I for a d x n matrix B with unit columns.

    It is unitarily apportionable iff some unitary U makes the columns of
    B U equiangular with angle theta.
    """
    B = np.asarray(B, dtype=np.complex128)
    if B.ndim != 2:
        raise PreconditionError("B must be a matrix")
    if np.max(np.abs(np.linalg.norm(B, axis=0) - 1.0)) > tol:
        raise PreconditionError("columns of B must have unit norm")
    if not 0 < theta < math.pi / 2:
        raise PreconditionError("theta must lie in (0, pi/2)")
    n = B.shape[1]
    return la.adjoint(B) @ B + (math.cos(theta) - 1.0) * np.eye(n)


def frame_constant(B) -> float:
    """kappa = sqrt(||B*B - I||_F^2 / (n(n-1))), the constant B*B - I would need."""
    B = np.asarray(B, dtype=np.complex128)
    n = B.shape[1]
    G = la.adjoint(B) @ B - np.eye(n)
    return math.sqrt(la.frobenius(G) ** 2 / (n * (n - 1)))
