"""
Cyclic blowups of loop-graphs and functional digraphs.

For a loop-graph on n vertices the blowup lives in dimension N = (2n-1)^2.
The block unitary U_n has (i, j)-block C^j diag(w)^i / sqrt(2n-1) where
w = (1, omega, ..., omega^{2n-2}), and permutation matrices P of size 2n-1
act through U_n (I (x) P) U_n^*.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from . import linalg as la
from .errors import DomainError, SizeError
from .labelings import LoopGraph, ZnFunction, is_rho_labeling
from .report import INCONCLUSIVE, UNIFORM, ApportionReport

MAX_DIM = 400
EXHAUSTIVE_MAX_N = 4


@dataclass(frozen=True)
class BlowupOperator:
    n: int
    N: int
    U: np.ndarray

    @property
    def m(self) -> int:
        return 2 * self.n - 1

    def conjugate(self, inner: np.ndarray) -> np.ndarray:
        """U (I_m (x) inner) U^* for an m x m matrix ``inner``."""
        # U (I (x) X) U^* = sum_j U[:, block j] X U[:, block j]^*
        m = self.m
        blocks = self.U.reshape(self.N, m, m)  # column block j -> blocks[:, j, :]
        out = np.zeros((self.N, self.N), dtype=np.complex128)
        for j in range(m):
            Bj = blocks[:, j, :]
            out += Bj @ inner @ Bj.conj().T
        return out


def _check_size(n: int) -> None:
    if n < 2:
        raise DomainError("blowups need n >= 2")
    if (2 * n - 1) ** 2 > MAX_DIM:
        raise SizeError(f"blowup dimension {(2 * n - 1) ** 2} exceeds {MAX_DIM}")


@lru_cache(maxsize=8)
def _block_unitary(n: int) -> BlowupOperator:
    m = 2 * n - 1
    C = la.cyclic_shift(m)
    w = la.root_of_unity(m) ** np.arange(m)
    Cpow = [np.linalg.matrix_power(C, j) for j in range(m)]
    N = m * m
    U = np.zeros((N, N), dtype=np.complex128)
    for i in range(m):
        D = np.diag(w**i)
        for j in range(m):
            U[i * m:(i + 1) * m, j * m:(j + 1) * m] = Cpow[j] @ D
    U /= math.sqrt(m)
    U.setflags(write=False)
    return BlowupOperator(n, N, U)


def block_unitary(n: int) -> BlowupOperator:
    _check_size(n)
    op = _block_unitary(n)
    if not la.is_unitary(op.U, 1e-10):
        raise ArithmeticError("block unitary failed its unitarity check")
    return op


def _pad(A: np.ndarray, m: int) -> np.ndarray:
    out = np.zeros((m, m), dtype=np.complex128)
    k = A.shape[0]
    out[:k, :k] = A
    return out


def cyclic_blowup(G: LoopGraph, n: Optional[int] = None) -> np.ndarray:
    """H_G = U_n (I (x) (A_G (+) O)) U_n^*."""
    n = G.n if n is None else n
    if G.n > n:
        raise DomainError("graph has more vertices than n")
    op = block_unitary(n)
    return op.conjugate(_pad(G.adjacency().astype(np.complex128), op.m))


def permutation_matrix(perm: Sequence[int]) -> np.ndarray:
    """P with P e_v = e_{perm[v]}."""
    perm = [int(p) for p in perm]
    m = len(perm)
    if sorted(perm) != list(range(m)):
        raise DomainError("not a permutation")
    P = np.zeros((m, m))
    P[perm, range(m)] = 1.0
    return P


def _as_permutation(P) -> list[int]:
    P = np.asarray(P)
    m = P.shape[0]
    if P.shape != (m, m) or not np.array_equal(P, np.rint(np.real(P))):
        raise DomainError("not a permutation matrix")
    Pr = np.rint(np.real(P)).astype(int)
    if np.any((Pr != 0) & (Pr != 1)) or np.any(Pr.sum(0) != 1) or np.any(Pr.sum(1) != 1):
        raise DomainError("not a permutation matrix")
    return [int(np.argmax(Pr[:, v])) for v in range(m)]


def group_element(P, n: int) -> np.ndarray:
    """U_n (I (x) P) U_n^* for a (2n-1) x (2n-1) permutation matrix P."""
    P = np.asarray(P)
    if P.shape != (2 * n - 1, 2 * n - 1):
        raise DomainError(f"expected a {2 * n - 1} x {2 * n - 1} permutation matrix")
    _as_permutation(P)
    return block_unitary(n).conjugate(P.astype(np.complex128))


def labeling_permutation(labels: Sequence[int], m: int) -> list[int]:
    """Complete a vertex embedding v -> labels[v] to a permutation of range(m)."""
    labels = [int(v) for v in labels]
    used = set(labels)
    if len(used) != len(labels) or any(not 0 <= v < m for v in labels):
        raise DomainError("labeling is not an injection into range(m)")
    free = [p for p in range(m) if p not in used]
    return labels + free


def apportion_blowup(G: LoopGraph, labels: Sequence[int], tol: float = la.DEFAULT_TOL) -> ApportionReport:
    """Apportion H_G by the group element built from a rho-labeling of G."""
    n = G.n
    if len(G.edges) != n or len(G.loops) != 1:
        raise DomainError("expected n-1 non-loop edges and one loop")
    if not is_rho_labeling(G, labels):
        raise DomainError("labeling is not a rho-labeling")
    m = 2 * n - 1
    Q = group_element(permutation_matrix(labeling_permutation(labels, m)), n)
    H = cyclic_blowup(G)
    B = Q @ H @ Q.conj().T
    kappa = 1.0 / m
    flag, _ = la.is_uniform(B, tol)
    residual = float(np.max(np.abs(np.abs(B) - kappa)))
    return ApportionReport(UNIFORM if flag else INCONCLUSIVE, Q, kappa, residual, matrix=B)


def function_adjacency(f: ZnFunction) -> np.ndarray:
    A = np.zeros((f.n, f.n))
    A[np.arange(f.n), list(f.table)] = 1.0
    return A


def tf_matrix(f: ZnFunction) -> np.ndarray:
    """T_f = U_n (I (x) (A_f (+) O)) U_n^*, with (A_f)_{i,j} = 1 iff j = f(i)."""
    op = block_unitary(f.n)
    return op.conjugate(_pad(function_adjacency(f), op.m))


def _permute_inner(Ahat: np.ndarray, perm: Sequence[int], m: int) -> np.ndarray:
    # (I (x) P) X (I (x) P)^T acts on index (b, r) as (b, perm[r])
    idx = (np.arange(m)[:, None] * m + np.asarray(perm)[None, :]).ravel()
    out = np.empty_like(Ahat)
    out[np.ix_(idx, idx)] = Ahat
    return out


def frak_u_min(A, n: int, mode: str = "exhaustive", subgroup: str = "full",
               samples: int = 2000, seed: int = 0) -> tuple[float, list[int]]:
    """
    min over the finite group of ||V A V^*||_max.  ``subgroup`` is "full"
    (all permutations of range(2n-1)) or "prime" (P' (+) I_{n-1}).
    Ties go to the lexicographically smallest permutation.
    """
    op = block_unitary(n)
    m = op.m
    A = la.as_cmatrix(A)
    if A.shape != (op.N, op.N):
        raise DomainError(f"expected a {op.N} x {op.N} matrix")
    k = m if subgroup == "full" else n if subgroup == "prime" else None
    if k is None:
        raise DomainError("subgroup must be 'full' or 'prime'")
    tail = list(range(k, m))
    if mode == "exhaustive":
        if n > EXHAUSTIVE_MAX_N:
            raise SizeError(f"exhaustive group search limited to n <= {EXHAUSTIVE_MAX_N}")
        cands = (list(p) + tail for p in itertools.permutations(range(k)))
    elif mode == "sampled":
        rng = np.random.default_rng(seed)
        cands = sorted({tuple(rng.permutation(k).tolist()) for _ in range(samples)})
        cands = (list(p) + tail for p in cands)
    else:
        raise DomainError("mode must be 'exhaustive' or 'sampled'")
    # V A V^* = U (I (x) P) U^* A U (I (x) P^T) U^*; entry magnitudes only
    # need the permuted inner matrix conjugated back by U
    Ahat = op.U.conj().T @ A @ op.U
    best_val, best_p = math.inf, None
    for p in cands:
        B = op.U @ _permute_inner(Ahat, p, m) @ op.U.conj().T
        val = la.max_norm(B)
        if val < best_val - 1e-12:
            best_val, best_p = val, p
    return float(best_val), best_p


def orthogonality_check(f: ZnFunction, perm: Sequence[int], tol: float = 1e-10) -> bool:
    """(V T_f V^*) o (V U (I (x) ((A_f - E_00)^T (+) O)) U^* V^*) == O."""
    if not f.is_contracting:
        raise DomainError("function is not contracting")
    n = f.n
    op = block_unitary(n)
    m = op.m
    Af = function_adjacency(f)
    R = Af.copy()
    R[0, 0] -= 1.0
    V = group_element(permutation_matrix(perm), n)
    X = V @ tf_matrix(f) @ V.conj().T
    Y = V @ op.conjugate(_pad(R.T, m)) @ V.conj().T
    return bool(np.max(np.abs(X * Y)) <= tol)


def u_gap(n: int) -> float:
    """1/(2n-1) - sqrt((2n-1)n)/(2n-1)^2."""
    m = 2 * n - 1
    return 1.0 / m - math.sqrt(m * n) / m**2


def apportion_prime_search(G: LoopGraph, tol: float = la.DEFAULT_TOL) -> ApportionReport:
    """Find P' (+) I_{n-1} apportioning H_G by exhaustive search over S_n."""
    n = G.n
    H = cyclic_blowup(G)
    _, perm = frak_u_min(H, n, subgroup="prime")
    V = group_element(permutation_matrix(perm), n)
    B = V @ H @ V.conj().T
    kappa = 1.0 / (2 * n - 1)
    flag, _ = la.is_uniform(B, tol)
    residual = float(np.max(np.abs(np.abs(B) - kappa)))
    return ApportionReport(UNIFORM if flag else INCONCLUSIVE, V, kappa, residual, matrix=B)
