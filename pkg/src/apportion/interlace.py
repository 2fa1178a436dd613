"""
Masked copies of a Hermitian matrix driven by a gracefully labelled
loop-graph, and the eigenvalue bounds they give.

The base mask is X = J - A_G o (J + I): ones everywhere except zeros on the
non-loop edges and -1 on the loop.  M_k is M o (X shifted cyclically by k
along both indices).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg as la
from .errors import DomainError
from .labelings import LoopGraph, is_graceful


@dataclass(frozen=True)
class MaskFamily:
    base: np.ndarray
    graph: LoopGraph
    members: tuple
    spectra: tuple
    thetas: np.ndarray

    @property
    def n(self) -> int:
        return self.graph.n


@dataclass(frozen=True)
class BoundRow:
    index: int
    lower: float
    value: float
    upper: float
    ok: bool


def base_mask(G: LoopGraph) -> np.ndarray:
    n = G.n
    A = G.adjacency()
    return np.ones((n, n), dtype=np.int64) - A * (np.ones((n, n), dtype=np.int64) + np.eye(n, dtype=np.int64))


def masks(G: LoopGraph) -> list[np.ndarray]:
    # entry (i, j) of mask k is X[i + k, j + k], indices mod n
    X = base_mask(G)
    return [np.roll(X, (-k, -k), axis=(0, 1)) for k in range(G.n)]


def mask_family(M, G: LoopGraph, tol: float = 1e-10) -> MaskFamily:
    M = la.as_cmatrix(M)
    n = G.n
    if n < 3:
        raise DomainError("mask families need n >= 3")
    if M.shape != (n, n):
        raise DomainError("matrix and graph sizes differ")
    if np.max(np.abs(M - M.conj().T), initial=0.0) > tol * max(1.0, la.max_norm(M)):
        raise DomainError("matrix is not Hermitian")
    if not is_graceful(G):
        raise DomainError("graph is not gracefully labelled")
    members = tuple(M * X for X in masks(G))
    spectra = tuple(la.hermitian_eig(Mk)[0] for Mk in members)
    thetas = np.sort(np.concatenate(spectra))[::-1]
    return MaskFamily(M, G, members, spectra, thetas)


def check_sum_identity(fam: MaskFamily) -> float:
    """max-norm of sum_k M_k - (n-2) M."""
    n = fam.n
    if n < 4:
        raise DomainError("the sum identity needs n >= 4")
    return la.max_norm(sum(fam.members) - (n - 2) * fam.base)


def interlacing_bounds(fam: MaskFamily) -> list[BoundRow]:
    """Per-index check of n/(n-2) theta_{l+n^2-n} <= lambda_l(M) <= n/(n-2) theta_l."""
    n = fam.n
    if n < 4:
        raise DomainError("the interlacing bounds need n >= 4")
    lam, _ = la.hermitian_eig(fam.base)
    s = n / (n - 2)
    rows = []
    for ell in range(n):
        lo = s * fam.thetas[ell + n * n - n]
        hi = s * fam.thetas[ell]
        v = float(lam[ell])
        slack = 1e-9 * (1.0 + abs(v))
        rows.append(BoundRow(ell, float(lo), v, float(hi), bool(lo - slack <= v <= hi + slack)))
    return rows
