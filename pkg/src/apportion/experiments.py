"""
Data-producing experiments for two open questions.  Nothing here claims an
answer; each function returns the numbers a reader would want to look at.

* sharpness of u(A) <= ||A||_2 when ||A||_*/n < ||A||_2
* whether spec(B) plus one zero is realized by a uniform matrix
"""

from __future__ import annotations

import numpy as np

from . import linalg as la
from .certify import u_bounds
from .search import search_gl, search_unitary


def spectral_bound_rows(samples: int = 10, n: int = 3, seed: int = 0, restarts: int = 2, iters: int = 150) -> list[dict]:
    """Searched u(A) against the Frobenius lower bound and the spectral upper bound."""
    rng = np.random.default_rng(seed)
    rows = []
    for k in range(samples):
        A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        b = u_bounds(A)
        nuclear = la.norms(A).nuclear / n
        if not nuclear < b.upper:
            continue
        rep = search_unitary(A, restarts=restarts, iters=iters, seed=seed + k)
        u_est = rep.kappa + rep.residual
        rows.append({
            "sample": k,
            "frobenius_over_n": b.lower,
            "nuclear_over_n": nuclear,
            "u_estimate": u_est,
            "spectral": b.upper,
            "gap_to_spectral": b.upper - u_est,
        })
    return rows


def zero_augmented_rows(n: int = 2, samples: int = 5, seed: int = 0, restarts: int = 4, iters: int = 200) -> list[dict]:
    """
    For random uniform B, try to apportion diag(spec(B), 0) numerically.
    A small residual is evidence, not proof, that spec(B) plus {0} is realizable.
    """
    rng = np.random.default_rng(seed)
    rows = []
    for k in range(samples):
        B = np.exp(2j * np.pi * rng.random((n, n)))
        lam = la.small_eig(B)
        D = np.diag(np.concatenate([lam, [0.0]]))
        rep = search_gl(D, restarts=restarts, iters=iters, seed=seed + k)
        rows.append({
            "sample": k,
            "spectrum": [[z.real, z.imag] for z in lam],
            "residual": rep.residual,
            "status": rep.status,
        })
    return rows
