"""
The edge-labeling polynomial

    p_f(x) = prod_{i<j} ((x_{f(j)} - x_j)^2 - (x_{f(i)} - x_i)^2)

kept as a multiset of linear factors, and recovery of G_f and f from it.
"""

from __future__ import annotations

import itertools
from collections import Counter, deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .errors import DomainError, StructuralError
from .labelings import LoopGraph, ZnFunction

BINOMIAL = "binomial"
TRINOMIAL = "trinomial"
QUADRINOMIAL = "quadrinomial"
ZERO = "zero"


@dataclass(frozen=True)
class LinearForm:
    coeffs: tuple

    @classmethod
    def make(cls, coeffs: Sequence[int]) -> tuple["LinearForm", int]:
        """Canonical form (first nonzero coefficient positive) and the sign removed."""
        c = tuple(int(v) for v in coeffs)
        lead = next((v for v in c if v), 0)
        if lead < 0:
            return cls(tuple(-v for v in c)), -1
        return cls(c), 1

    @property
    def n(self) -> int:
        return len(self.coeffs)

    @property
    def support(self) -> list[int]:
        return [v for v, a in enumerate(self.coeffs) if a]

    @property
    def kind(self) -> str:
        nz = sorted(a for a in self.coeffs if a)
        if not nz:
            return ZERO
        if nz == [-1, 1]:
            return BINOMIAL
        if nz in ([-2, 1, 1], [-1, -1, 2]):
            return TRINOMIAL
        if nz == [-1, -1, 1, 1]:
            return QUADRINOMIAL
        raise StructuralError(f"unexpected coefficient pattern {nz}")

    def evaluate(self, x: Sequence[int]) -> int:
        return sum(a * int(v) for a, v in zip(self.coeffs, x))

    def __str__(self) -> str:
        terms = []
        for v, a in enumerate(self.coeffs):
            if a:
                sign = "-" if a < 0 else "+"
                mag = "" if abs(a) == 1 else str(abs(a))
                terms.append(f"{sign} {mag}x{v}")
        s = " ".join(terms) or "0"
        return s[2:] if s.startswith("+ ") else s


@dataclass
class FactorMultiset:
    n: int
    forms: Counter = field(default_factory=Counter)
    sign: int = 1

    @property
    def has_zero(self) -> bool:
        return any(f.kind == ZERO for f in self.forms)

    @property
    def total(self) -> int:
        return sum(self.forms.values())

    def evaluate(self, x: Sequence[int]) -> int:
        out = self.sign
        for form, mult in self.forms.items():
            out *= form.evaluate(x) ** mult
        return out

    def by_kind(self, kind: str) -> Counter:
        return Counter({f: k for f, k in self.forms.items() if f.kind == kind})


def _form(n: int, terms: Iterable[tuple[int, int]]) -> list[int]:
    c = [0] * n
    for v, a in terms:
        c[v] += a
    return c


def edge_labeling_factors(f: ZnFunction) -> FactorMultiset:
    n = f.n
    fac = FactorMultiset(n)
    for i, j in itertools.combinations(range(n), 2):
        plus = _form(n, [(f(j), 1), (j, -1), (f(i), 1), (i, -1)])
        minus = _form(n, [(f(j), 1), (j, -1), (f(i), -1), (i, 1)])
        for c in (plus, minus):
            form, s = LinearForm.make(c)
            fac.forms[form] += 1
            fac.sign *= s
    return fac


def pf_direct(f: ZnFunction, x: Sequence[int]) -> int:
    """p_f evaluated straight from its defining product, exact integers."""
    x = [int(v) for v in x]
    out = 1
    for i, j in itertools.combinations(range(f.n), 2):
        out *= (x[f(j)] - x[j]) ** 2 - (x[f(i)] - x[i]) ** 2
    return out


def pf_nonzero(f: ZnFunction) -> bool:
    """p_f is not identically zero iff at most one fixed point and no 2-cycles."""
    if len(f.fixed_points) > 1:
        return False
    return not any(f(f(i)) == i and f(i) != i for i in range(f.n))


@dataclass(frozen=True)
class Recovery:
    has_fixed_point: bool
    graph: Optional[LoopGraph]


def _binomial_of(tri: LinearForm) -> LinearForm:
    # trinomial +-(2r - s - t) pairs with the binomial (s - t)
    s, t = [v for v, a in enumerate(tri.coeffs) if abs(a) == 1]
    c = [0] * tri.n
    c[s], c[t] = 1, -1
    return LinearForm.make(c)[0]


def recover_graph(fac: FactorMultiset) -> Recovery:
    """Edges of G_f (loop excluded) from the factors of p_f."""
    if fac.has_zero:
        raise DomainError("p_f is identically zero")
    binomials = fac.by_kind(BINOMIAL)
    for tri in sorted(fac.by_kind(TRINOMIAL), key=lambda t: t.coeffs):
        need = _binomial_of(tri)
        k = fac.forms[tri]
        if binomials[need] < k:
            raise StructuralError(f"trinomial {tri} has no matching binomial {need}")
        binomials[need] -= k
    q = +binomials  # drop zero counts
    if fac.n == 1:
        # p_f is the empty product; the only map on Z_1 fixes 0
        return Recovery(True, LoopGraph(1, []))
    if not q:
        return Recovery(False, None)
    edges = []
    for b, k in sorted(q.items(), key=lambda t: t[0].coeffs):
        if k % 2:
            raise StructuralError(f"binomial {b} left with odd multiplicity {k}")
        u, v = b.support
        edges.extend([(u, v)] * (k // 2))
    if len(set(edges)) != len(edges):
        raise StructuralError("repeated edge in recovered graph")
    return Recovery(True, LoopGraph(fac.n, edges))


def recover_function(G: LoopGraph, fixed_point: int) -> ZnFunction:
    """Orient the non-loop edges of G towards ``fixed_point`` by BFS."""
    n = G.n
    if not 0 <= fixed_point < n:
        raise DomainError("fixed point out of range")
    if len(G.non_loop_edges) != n - 1:
        raise DomainError("expected n-1 non-loop edges")
    nb = G.neighbours()
    table = [-1] * n
    table[fixed_point] = fixed_point
    q = deque([fixed_point])
    while q:
        x = q.popleft()
        for v in nb[x]:
            if table[v] < 0:
                table[v] = x
                q.append(v)
    if min(table) < 0:
        raise DomainError("graph is not connected")
    return ZnFunction(table)


def write_factors(fac: FactorMultiset, path) -> None:
    lines = [f"# n = {fac.n}, sign = {fac.sign}"]
    for form, k in sorted(fac.forms.items(), key=lambda t: t[0].coeffs):
        lines.extend([" ".join(str(a) for a in form.coeffs)] * k)
    Path(path).write_text("\n".join(lines) + "\n")


def parse_factors(text: str) -> FactorMultiset:
    rows = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            rows.append([int(tok) for tok in line.split()])
    if not rows:
        raise DomainError("empty factor list")
    n = len(rows[0])
    if any(len(r) != n for r in rows):
        raise DomainError("factor rows have different lengths")
    fac = FactorMultiset(n)
    for r in rows:
        form, s = LinearForm.make(r)
        fac.forms[form] += 1
        fac.sign *= s
    return fac


def read_factors(path) -> FactorMultiset:
    return parse_factors(Path(path).read_text())
