"""File formats: matrices as JSON, loop-graphs and functions as plain text."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import DomainError
from .labelings import LoopGraph, ZnFunction


def _num(x: float) -> str:
    # 17 significant digits round-trips any double exactly
    x = float(x)
    if not np.isfinite(x):
        raise DomainError("matrix entries must be finite")
    return f"{x:.17g}"


def _square(A) -> np.ndarray:
    A = np.asarray(A, dtype=np.complex128)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DomainError("expected a square matrix")
    return A


def matrix_to_obj(A) -> dict:
    A = _square(A)
    return {"n": A.shape[0], "entries": [[float(z.real), float(z.imag)] for z in A.ravel()]}


def matrix_from_obj(obj) -> np.ndarray:
    try:
        n = int(obj["n"])
        entries = obj["entries"]
    except (KeyError, TypeError) as exc:
        raise DomainError("matrix document needs fields 'n' and 'entries'") from exc
    if len(entries) != n * n:
        raise DomainError(f"expected {n * n} entries, got {len(entries)}")
    vals = []
    for e in entries:
        if isinstance(e, (int, float)):
            vals.append(complex(e))
        elif len(e) == 2:
            vals.append(complex(float(e[0]), float(e[1])))
        else:
            raise DomainError("each entry must be [re, im]")
    return np.array(vals, dtype=np.complex128).reshape(n, n)


def dumps_matrix(A) -> str:
    A = _square(A)
    body = ", ".join(f"[{_num(z.real)}, {_num(z.imag)}]" for z in A.ravel())
    return f'{{"n": {A.shape[0]}, "entries": [{body}]}}'


def loads_matrix(text: str) -> np.ndarray:
    try:
        return matrix_from_obj(json.loads(text))
    except json.JSONDecodeError as exc:
        raise DomainError(f"malformed matrix document: {exc}") from exc


def read_matrix(path) -> np.ndarray:
    return loads_matrix(Path(path).read_text())


def write_matrix(A, path) -> None:
    Path(path).write_text(dumps_matrix(A) + "\n")


def _data_lines(text: str) -> list[str]:
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


def parse_loopgraph(text: str) -> LoopGraph:
    lines = _data_lines(text)
    if not lines:
        raise DomainError("empty loop-graph file")
    try:
        n = int(lines[0])
        edges = [tuple(int(t) for t in ln.split()) for ln in lines[1:]]
    except ValueError as exc:
        raise DomainError(f"malformed loop-graph file: {exc}") from exc
    if any(len(e) != 2 for e in edges):
        raise DomainError("each edge line needs two vertices")
    if len(set((min(e), max(e)) for e in edges)) != len(edges):
        raise DomainError("duplicate edge")
    return LoopGraph(n, edges)


def format_loopgraph(G: LoopGraph) -> str:
    return "\n".join([str(G.n)] + [f"{i} {j}" for i, j in sorted(G.edges)]) + "\n"


def parse_function(text: str) -> ZnFunction:
    lines = _data_lines(text)
    if len(lines) != 2:
        raise DomainError("function file needs a size line and a value line")
    try:
        n = int(lines[0])
        vals = [int(t) for t in lines[1].split()]
    except ValueError as exc:
        raise DomainError(f"malformed function file: {exc}") from exc
    if len(vals) != n:
        raise DomainError(f"expected {n} values, got {len(vals)}")
    return ZnFunction(vals)


def format_function(f: ZnFunction) -> str:
    return f"{f.n}\n{' '.join(str(v) for v in f.table)}\n"


def read_loopgraph(path) -> LoopGraph:
    return parse_loopgraph(Path(path).read_text())


def read_function(path) -> ZnFunction:
    return parse_function(Path(path).read_text())
