"""
Loop-graphs, functions on Z_n, rho- and graceful labelings.

Graphs are labelled: two ``LoopGraph`` objects are equal only when their
edge sets coincide exactly, no isomorphism testing is done.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import DomainError, PreconditionError, SizeError


@dataclass(frozen=True)
class LoopGraph:
    n: int
    edges: frozenset

    def __init__(self, n: int, edges: Iterable = ()):
        if n < 1:
            raise DomainError("a loop-graph needs at least one vertex")
        canon = set()
        for e in edges:
            i, j = (int(v) for v in e)
            if not (0 <= i < n and 0 <= j < n):
                raise DomainError(f"edge {{{i},{j}}} out of range for n = {n}")
            canon.add((min(i, j), max(i, j)))
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "edges", frozenset(canon))

    @property
    def loops(self) -> list[tuple[int, int]]:
        return sorted(e for e in self.edges if e[0] == e[1])

    @property
    def non_loop_edges(self) -> list[tuple[int, int]]:
        return sorted(e for e in self.edges if e[0] != e[1])

    def adjacency(self, size: int | None = None) -> np.ndarray:
        """0/1 adjacency matrix, optionally zero-padded to ``size``."""
        size = self.n if size is None else size
        if size < self.n:
            raise DomainError("padding size smaller than the graph")
        A = np.zeros((size, size), dtype=np.int64)
        for i, j in self.edges:
            A[i, j] = A[j, i] = 1
        return A

    def neighbours(self) -> list[list[int]]:
        nb: list[list[int]] = [[] for _ in range(self.n)]
        for i, j in self.non_loop_edges:
            nb[i].append(j)
            nb[j].append(i)
        return nb

    def __repr__(self) -> str:
        return f"LoopGraph(n={self.n}, edges={sorted(self.edges)})"


@dataclass(frozen=True)
class ZnFunction:
    """A function Z_n -> Z_n stored as its value table."""

    table: tuple

    def __init__(self, table: Sequence[int]):
        t = tuple(int(v) for v in table)
        n = len(t)
        if n == 0:
            raise DomainError("empty function table")
        if any(not 0 <= v < n for v in t):
            raise DomainError("function values must lie in 0..n-1")
        object.__setattr__(self, "table", t)

    @property
    def n(self) -> int:
        return len(self.table)

    def __call__(self, i: int) -> int:
        return self.table[i]

    def __len__(self) -> int:
        return len(self.table)

    def compose(self, other: "ZnFunction") -> "ZnFunction":
        """self o other, i.e. i -> self(other(i))."""
        return ZnFunction([self.table[other.table[i]] for i in range(self.n)])

    @property
    def is_non_increasing(self) -> bool:
        return all(v <= i for i, v in enumerate(self.table))

    @property
    def is_contracting(self) -> bool:
        return self.table[0] == 0 and all(v < i for i, v in enumerate(self.table) if i)

    @property
    def fixed_points(self) -> list[int]:
        return [i for i, v in enumerate(self.table) if v == i]

    def preimage(self, value: int) -> list[int]:
        return [i for i, v in enumerate(self.table) if v == value]

    def conjugate(self, perm: Sequence[int]) -> "ZnFunction":
        """pi o f o pi^{-1} for the permutation i -> perm[i]."""
        inv = [0] * self.n
        for i, p in enumerate(perm):
            inv[p] = i
        return ZnFunction([perm[self.table[inv[i]]] for i in range(self.n)])


def contracting_functions(n: int) -> Iterator[ZnFunction]:
    """All of CON_n (f(0) = 0, f(i) < i), (n-1)! functions."""
    ranges = [range(1)] + [range(i) for i in range(1, n)]
    for t in itertools.product(*ranges):
        yield ZnFunction(t)


def non_increasing_functions(n: int) -> Iterator[ZnFunction]:
    """All of NIF_n (f(i) <= i), n! functions."""
    for t in itertools.product(*[range(i + 1) for i in range(n)]):
        yield ZnFunction(t)


def edge_length(i: int, j: int, n: int) -> int:
    d = abs(i - j)
    return min(d, n - d)


def is_rho_labeling(G: LoopGraph, labels: Sequence[int]) -> bool:
    """
    True iff the labels embed G in the complete loop-graph on 2m-1 vertices
    (m = number of edges) with every edge length 0..m-1 used exactly once.
    """
    m = len(G.edges)
    if len(labels) != G.n:
        raise PreconditionError("need one label per vertex")
    labels = [int(v) for v in labels]
    if len(set(labels)) != len(labels):
        raise PreconditionError("labeling is not injective")
    if m == 0:
        return False
    modulus = 2 * m - 1
    if any(not 0 <= v < modulus for v in labels):
        raise PreconditionError(f"labels must lie in 0..{modulus - 1}")
    lengths = sorted(edge_length(labels[u], labels[v], modulus) for u, v in G.edges)
    return lengths == list(range(m))


def is_graceful(G: LoopGraph) -> bool:
    """Is the identity labeling of G (n vertices, n-1 edges, one loop) graceful?"""
    if len(G.loops) != 1 or len(G.non_loop_edges) != G.n - 1:
        raise DomainError("graceful check needs n-1 non-loop edges and exactly one loop")
    return is_rho_labeling(G, list(range(G.n)))


def nif_to_loopgraph(f: ZnFunction) -> LoopGraph:
    """The gracefully labelled loop-graph attached to a non-increasing function."""
    if not f.is_non_increasing:
        raise DomainError("function is not non-increasing")
    n = f.n
    edges = [(f(i) + n - 1 - i, f(i)) for i in range(n - 1)]
    edges.append((f(n - 1), f(n - 1)))
    return LoopGraph(n, edges)


def loopgraph_to_nif(G: LoopGraph) -> ZnFunction:
    """Inverse of ``nif_to_loopgraph``."""
    n = G.n
    if len(G.loops) != 1 or len(G.non_loop_edges) != n - 1:
        raise DomainError("expected n-1 non-loop edges and exactly one loop")
    table: list[int | None] = [None] * n
    table[n - 1] = G.loops[0][0]
    for lo, hi in G.non_loop_edges:
        i = lo + n - 1 - hi
        if not 0 <= i <= n - 2 or table[i] is not None:
            raise DomainError("loop-graph is not gracefully labelled")
        table[i] = lo
    return ZnFunction(table)


def underlying_graphs(f: ZnFunction) -> tuple[list[tuple[int, int]], LoopGraph]:
    """Arcs (i, f(i)) of the functional digraph and its underlying loop-graph."""
    arcs = [(i, f(i)) for i in range(f.n)]
    return arcs, LoopGraph(f.n, arcs)


def cyclic_decomposition_check(A, n: int) -> bool:
    """sum_i C^i A C^{-i} == J for a 0/1 matrix of size 2n-1, exact integers."""
    A = np.asarray(A)
    m = 2 * n - 1
    if A.shape != (m, m):
        raise DomainError(f"expected a {m} x {m} matrix")
    Ai = np.rint(np.real(A)).astype(np.int64)
    if not np.array_equal(Ai, A) or not np.array_equal(Ai, Ai.T) or np.any((Ai != 0) & (Ai != 1)):
        raise PreconditionError("expected a symmetric 0/1 matrix")
    total = np.zeros_like(Ai)
    for i in range(m):
        total += np.roll(Ai, (i, i), axis=(0, 1))
    return bool(np.all(total == 1))


# --------------------------------------------------------------------------
# Composition iteration


def _bfs_dist(nb: list[list[int]], src: int) -> list[int]:
    dist = [-1] * len(nb)
    dist[src] = 0
    q = deque([src])
    while q:
        u = q.popleft()
        for v in nb[u]:
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                q.append(v)
    return dist


def tree_diameter(G: LoopGraph) -> int:
    nb = G.neighbours()
    d0 = _bfs_dist(nb, 0)
    if min(d0) < 0:
        raise DomainError("graph is not connected")
    far = max(range(G.n), key=lambda v: d0[v])
    return max(_bfs_dist(nb, far))


def _run_is_terminal(f: ZnFunction) -> bool:
    n = f.n
    run = f.preimage(f(n - 1))
    return run == list(range(n - len(run), n))


def composition_preconditions(f: ZnFunction) -> list[str]:
    """Names of the failed preconditions of the composition step (empty if none)."""
    failed = []
    if not f.is_contracting:
        return ["contracting"]
    if not _run_is_terminal(f):
        failed.append("consecutive-preimage")
    _, G = underlying_graphs(f)
    dist = _bfs_dist(G.neighbours(), 0)
    if dist[f.n - 1] != tree_diameter(G):
        failed.append("diameter-path")
    return failed


def _apply_rule(f: ZnFunction) -> ZnFunction:
    n = f.n
    run = set(f.preimage(f(n - 1)))
    return ZnFunction([f(f(i)) if i in run else f(i) for i in range(n)])


def compose_step(f: ZnFunction) -> ZnFunction:
    """
    One local composition step: g = f o f on the preimage run of f(n-1),
    g = f elsewhere.  The zero function is the terminal point and maps to
    itself.
    """
    if f.is_contracting and all(v == 0 for v in f.table):
        return f
    failed = composition_preconditions(f)
    if failed:
        raise DomainError("composition preconditions failed: " + ", ".join(failed))
    return _apply_rule(f)


def depth_labeling(f: ZnFunction) -> list[int]:
    """
    Relabeling perm (vertex v -> perm[v]) making f contracting with a
    deepest vertex at n-1 and its siblings occupying the top labels.
    Requires f to have a single fixed point reachable from every vertex.
    """
    n = f.n
    fixed = f.fixed_points
    if len(fixed) != 1:
        raise DomainError("need exactly one fixed point")
    root = fixed[0]
    children: list[list[int]] = [[] for _ in range(n)]
    for v in range(n):
        if v != root:
            children[f(v)].append(v)
    depth = [-1] * n
    depth[root] = 0
    q = deque([root])
    while q:
        u = q.popleft()
        for v in children[u]:
            depth[v] = depth[u] + 1
            q.append(v)
    if min(depth) < 0:
        raise DomainError("function digraph has a cycle other than the fixed point")
    deepest = max(range(n), key=lambda v: (depth[v], v))
    sib = set(children[f(deepest)])
    # sort by depth; within the last level push the sibling group to the end
    order = sorted(range(n), key=lambda v: (depth[v], v in sib, v == deepest, v))
    perm = [0] * n
    for label, v in enumerate(order):
        perm[v] = label
    return perm


def iterate_composition(f: ZnFunction, max_steps: int = 10_000) -> list[ZnFunction]:
    """
    Iterate the composition step from a contracting f until the zero
    function, relabeling by ``depth_labeling`` before each step.  Returns
    the trace (including f and the final zero function).
    """
    if not f.is_contracting:
        raise DomainError("function is not contracting")
    trace = [f]
    cur = f
    for _ in range(max_steps):
        if all(v == 0 for v in cur.table):
            return trace
        cur = cur.conjugate(depth_labeling(cur))
        cur = _apply_rule(cur)
        trace.append(cur)
    raise DomainError("composition iteration did not terminate")


def max_induced_labels(f: ZnFunction, max_n: int = 8, chunk: int = 5040) -> int:
    """
    max over pi in S_n of |{ |pi f pi^{-1}(i) - i| : i }|, exhaustively,
    permutations in lexicographic order, early exit once the count hits n.
    """
    n = f.n
    if n > max_n:
        raise SizeError(f"exhaustive permutation search limited to n <= {max_n}")
    table = np.array(f.table)
    idx = np.arange(n)
    best = 0
    perms = itertools.permutations(range(n))
    while True:
        block = list(itertools.islice(perms, chunk))
        if not block:
            return best
        P = np.array(block)
        Pinv = np.argsort(P, axis=1)
        conj = np.take_along_axis(P, table[Pinv], axis=1)
        d = np.sort(np.abs(conj - idx), axis=1)
        counts = 1 + np.sum(d[:, 1:] != d[:, :-1], axis=1)
        best = max(best, int(counts.max()))
        if best == n:
            return best
