"""
Command-line front end.

Exit codes: 0 success or a true check, 1 a check that came out false,
2 usage error, 3 domain or numeric error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from importlib import metadata
from typing import Any, Optional

import numpy as np

from . import blowup, certify, interlace, labelings, linalg as la, recovery, search
from . import io as aio
from .errors import ApportionError
from .rank_one import apportion_rank_one

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3


class Result:
    """What a subcommand produced: structured payload, human lines, exit code."""

    def __init__(self, payload: dict, lines: list[str], code: int = EXIT_OK):
        self.payload = payload
        self.lines = lines
        self.code = code


def _version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0"


def _c(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _fmt_c(z: complex) -> str:
    z = complex(z)
    if z.imag == 0:
        return f"{z.real:.12g}"
    return f"{z.real:.12g}{z.imag:+.12g}i"


def _fmt_matrix(A) -> list[str]:
    A = np.asarray(A)
    return ["  " + "  ".join(_fmt_c(z) for z in row) for row in A]


def _report_payload(rep) -> dict:
    return {
        "status": rep.status,
        "kappa": rep.kappa,
        "residual": rep.residual,
        "iterations": rep.iterations,
        "seed": rep.seed,
        "theorem": rep.theorem,
        "transform": aio.matrix_to_obj(rep.transform),
        "matrix": None if rep.matrix is None else aio.matrix_to_obj(rep.matrix),
    }


def _report_lines(rep, seed: Optional[int] = None) -> list[str]:
    lines = [f"status: {rep.status}", f"kappa: {rep.kappa:.17g}", f"residual: {rep.residual:.3e}"]
    if rep.theorem:
        lines.append(f"theorem: {rep.theorem}")
    if seed is not None:
        lines.append(f"seed: {seed}")
    if rep.matrix is not None and rep.matrix.shape[0] <= 12:
        lines.append("result:")
        lines.extend(_fmt_matrix(rep.matrix))
    return lines


def _labels(text: Optional[str], n: int) -> list[int]:
    if text is None:
        return list(range(n))
    return [int(t) for t in text.replace(",", " ").split()]


# --------------------------------------------------------------------------
# subcommands


def cmd_norms(a) -> Result:
    r = la.norms(aio.read_matrix(a.matrix))
    d = {"max": r.max, "frobenius": r.frobenius, "spectral": r.spectral, "nuclear": r.nuclear}
    return Result(d, [f"{k}: {v:.17g}" for k, v in d.items()])


def cmd_uniform_check(a) -> Result:
    A = aio.read_matrix(a.matrix)
    flag, c = la.is_uniform(A, a.tol)
    return Result({"uniform": flag, "c": c}, [f"uniform: {flag}", f"c: {c:.17g}"], EXIT_OK if flag else EXIT_FALSE)


def cmd_apportion_rank1(a) -> Result:
    rep = apportion_rank_one(aio.read_matrix(a.matrix), a.tol)
    return Result(_report_payload(rep), _report_lines(rep), EXIT_OK if rep.uniform else EXIT_FALSE)


def cmd_certify(a) -> Result:
    cert = certify.certify_not_u_apportionable(aio.read_matrix(a.matrix))
    lines = [f"kind: {cert.kind}", f"lhs: {cert.lhs:.17g}", f"rhs: {cert.rhs:.17g}"]
    if cert.witness_c is not None:
        lines.append(f"witness c: {_fmt_c(cert.witness_c)}")
    return Result(cert.to_dict(), lines, EXIT_FALSE if cert.inconclusive else EXIT_OK)


def cmd_psd_check(a) -> Result:
    cert = certify.psd_apportionability(aio.read_matrix(a.matrix))
    ok = bool(cert.u_apportionable)
    return Result(cert.to_dict(), [f"rank: {int(cert.lhs)}", f"u-apportionable: {ok}"], EXIT_OK if ok else EXIT_FALSE)


def cmd_rho_check(a) -> Result:
    G = aio.read_loopgraph(a.graph)
    labels = _labels(a.labels, G.n)
    ok = labelings.is_rho_labeling(G, labels)
    return Result({"rho": ok, "labels": labels}, [f"rho-labeling: {ok}"], EXIT_OK if ok else EXIT_FALSE)


def cmd_graceful_check(a) -> Result:
    ok = labelings.is_graceful(aio.read_loopgraph(a.graph))
    return Result({"graceful": ok}, [f"graceful: {ok}"], EXIT_OK if ok else EXIT_FALSE)


def cmd_nif(a) -> Result:
    if a.inverse:
        f = labelings.loopgraph_to_nif(aio.read_loopgraph(a.path))
        return Result({"function": list(f.table)}, aio.format_function(f).splitlines())
    G = labelings.nif_to_loopgraph(aio.read_function(a.path))
    return Result({"n": G.n, "edges": [list(e) for e in sorted(G.edges)]}, aio.format_loopgraph(G).splitlines())


def cmd_compose(a) -> Result:
    f = aio.read_function(a.function)
    if a.iterate:
        trace = labelings.iterate_composition(f)
        tables = [list(g.table) for g in trace]
        return Result({"trace": tables}, [" ".join(map(str, t)) for t in tables])
    g = labelings.compose_step(f)
    return Result({"function": list(g.table)}, aio.format_function(g).splitlines())


def cmd_blowup(a) -> Result:
    H = blowup.cyclic_blowup(aio.read_loopgraph(a.graph))
    return Result({"matrix": aio.matrix_to_obj(H)}, aio.dumps_matrix(H).splitlines())


def cmd_blowup_apportion(a) -> Result:
    G = aio.read_loopgraph(a.graph)
    if a.search:
        rep = blowup.apportion_prime_search(G, a.tol)
    else:
        rep = blowup.apportion_blowup(G, _labels(a.labels, G.n), a.tol)
    lines = [f"status: {rep.status}", f"kappa: {rep.kappa:.17g}", f"residual: {rep.residual:.3e}"]
    return Result(_report_payload(rep), lines, EXIT_OK if rep.uniform else EXIT_FALSE)


def cmd_tf(a) -> Result:
    T = blowup.tf_matrix(aio.read_function(a.function))
    return Result({"matrix": aio.matrix_to_obj(T)}, aio.dumps_matrix(T).splitlines())


def cmd_frak_min(a) -> Result:
    if a.function:
        f = aio.read_function(a.path)
        A, n = blowup.tf_matrix(f), f.n
    else:
        A = aio.read_matrix(a.path)
        n = a.n if a.n else (int(round(math.sqrt(A.shape[0]))) + 1) // 2
    val, perm = blowup.frak_u_min(A, n, a.mode, a.subgroup, seed=a.seed)
    fro = la.frobenius(A) / A.shape[0]
    d = {"value": val, "permutation": perm, "frobenius_over_N": fro, "gap": val - fro}
    lines = [f"min max-norm: {val:.17g}", f"permutation: {' '.join(map(str, perm))}",
             f"gap: {val - fro:.17g}"]
    if a.mode == "sampled":
        lines.append(f"seed: {a.seed}")
    return Result(d, lines)


def cmd_interlace(a) -> Result:
    fam = interlace.mask_family(aio.read_matrix(a.matrix), aio.read_loopgraph(a.graph))
    resid = interlace.check_sum_identity(fam)
    rows = interlace.interlacing_bounds(fam)
    ok = all(r.ok for r in rows)
    d = {"sum_identity_residual": resid,
         "bounds": [{"index": r.index, "lower": r.lower, "value": r.value, "upper": r.upper, "ok": r.ok} for r in rows]}
    lines = [f"sum identity residual: {resid:.3e}"]
    lines += [f"{r.index}: {r.lower:.12g} <= {r.value:.12g} <= {r.upper:.12g}  {'ok' if r.ok else 'FAIL'}" for r in rows]
    return Result(d, lines, EXIT_OK if ok else EXIT_FALSE)


def cmd_recover(a) -> Result:
    if a.factors:
        fac = recovery.read_factors(a.path)
    else:
        fac = recovery.edge_labeling_factors(aio.read_function(a.path))
    rec = recovery.recover_graph(fac)
    d: dict[str, Any] = {"has_fixed_point": rec.has_fixed_point, "edges": None, "function": None}
    lines = [f"fixed point: {rec.has_fixed_point}"]
    if rec.graph is not None:
        d["edges"] = [list(e) for e in rec.graph.non_loop_edges]
        lines.append("edges: " + " ".join(f"{i}-{j}" for i, j in rec.graph.non_loop_edges))
        f = recovery.recover_function(rec.graph, a.fixed_point)
        d["function"] = list(f.table)
        lines.append("function: " + " ".join(map(str, f.table)))
    return Result(d, lines)


def _search_result(rep, seed: int) -> Result:
    return Result(_report_payload(rep), _report_lines(rep, seed), EXIT_OK if rep.uniform else EXIT_FALSE)


def cmd_search_u(a) -> Result:
    rep = search.search_unitary(aio.read_matrix(a.matrix), a.restarts, a.iters, a.seed, a.jobs, a.tol)
    return _search_result(rep, a.seed)


def cmd_search_gl(a) -> Result:
    rep = search.search_gl(aio.read_matrix(a.matrix), a.restarts, a.iters, a.seed, a.jobs, a.tol)
    return _search_result(rep, a.seed)


def cmd_spectra(a) -> Result:
    if a.real_pair is not None:
        ok, W = search.realizable_real_pair(a.real_pair)
        d = {"realizable": ok, "witness": None if W is None else aio.matrix_to_obj(W)}
        lines = [f"realizable: {ok}"] + ([] if W is None else _fmt_matrix(W))
        return Result(d, lines, EXIT_OK if ok else EXIT_FALSE)
    if a.matrix is None:
        raise argparse.ArgumentTypeError("spectra needs a matrix or --real-pair")
    A = aio.read_matrix(a.matrix)
    if a.zero_pad:
        A = search.spectra_zero_pad(A, a.zero_pad)
    if a.kron:
        A = search.kron_uniform(A, aio.read_matrix(a.kron))
    lam = la.small_eig(A) if A.shape[0] <= 8 else np.linalg.eigvals(A)
    lam = sorted(lam, key=lambda z: (round(z.real, 9), round(z.imag, 9)))
    d = {"spectrum": [_c(z) for z in lam]}
    if a.zero_pad or a.kron:
        d["matrix"] = aio.matrix_to_obj(A)
    return Result(d, ["spectrum: " + ", ".join(_fmt_c(z) for z in lam)])


def cmd_uar(a) -> Result:
    val = search.uar_estimate(aio.read_matrix(a.matrix), a.restarts, a.iters, a.seed, a.jobs)
    return Result({"uar": val}, [f"uar estimate: {val:.17g}", f"seed: {a.seed}"])


# --------------------------------------------------------------------------
# parser


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--tol", type=float, default=la.DEFAULT_TOL)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=4)
    p.add_argument("--iters", type=int, default=300)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--format", choices=("human", "structured"), default="human")
    p.add_argument("--out", default=None)
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="apportion", description="Matrix apportionment tools.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.set_defaults(func=func)
        return sp

    for name, func, h in [
        ("norms", cmd_norms, "max, Frobenius, spectral and nuclear norms"),
        ("uniform-check", cmd_uniform_check, "is the matrix uniform"),
        ("apportion-rank1", cmd_apportion_rank1, "unitarily apportion a rank-one matrix"),
        ("certify", cmd_certify, "search for a not-unitarily-apportionable certificate"),
        ("psd-check", cmd_psd_check, "unitary apportionability of a PSD matrix"),
        ("search-u", cmd_search_u, "numerical unitary apportionment"),
        ("search-gl", cmd_search_gl, "numerical GL apportionment"),
        ("uar", cmd_uar, "estimate the unitary apportionability ratio"),
    ]:
        add(name, func, h).add_argument("matrix")

    sp = add("rho-check", cmd_rho_check, "check a rho-labeling of a loop-graph")
    sp.add_argument("graph")
    sp.add_argument("--labels", help="vertex labels, default identity")
    add("graceful-check", cmd_graceful_check, "is the identity labeling graceful").add_argument("graph")

    sp = add("nif", cmd_nif, "non-increasing function to graceful loop-graph")
    sp.add_argument("path")
    sp.add_argument("--inverse", action="store_true", help="read a loop-graph and return its function")

    sp = add("compose", cmd_compose, "one composition step on a contracting function")
    sp.add_argument("function")
    sp.add_argument("--iterate", action="store_true", help="iterate down to the zero function")

    add("blowup", cmd_blowup, "cyclic blowup matrix of a loop-graph").add_argument("graph")
    sp = add("blowup-apportion", cmd_blowup_apportion, "apportion a blowup from a rho-labeling")
    sp.add_argument("graph")
    sp.add_argument("--labels")
    sp.add_argument("--search", action="store_true", help="search the S_n subgroup instead")
    add("tf", cmd_tf, "blowup matrix of a function").add_argument("function")

    sp = add("frak-min", cmd_frak_min, "minimum max-norm over the finite blowup group")
    sp.add_argument("path")
    sp.add_argument("--function", action="store_true", help="input is a function; use its T_f")
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
    sp.add_argument("--subgroup", choices=("full", "prime"), default="full")

    sp = add("interlace", cmd_interlace, "mask family sum identity and eigenvalue bounds")
    sp.add_argument("matrix")
    sp.add_argument("graph")

    sp = add("recover", cmd_recover, "recover G_f and f from edge-labeling factors")
    sp.add_argument("path")
    sp.add_argument("--factors", action="store_true", help="input is a factor list, not a function")
    sp.add_argument("--fixed-point", type=int, default=0)

    sp = add("spectra", cmd_spectra, "spectra of uniform constructions")
    sp.add_argument("matrix", nargs="?")
    sp.add_argument("--zero-pad", type=int, default=0)
    sp.add_argument("--kron", default=None)
    sp.add_argument("--real-pair", type=float, default=None)
    return parser


def _render(res: Result, args) -> str:
    if args.format == "structured":
        meta = {
            "command": args.command,
            "seed": args.seed,
            "tol": args.tol,
            "restarts": args.restarts,
            "iters": args.iters,
            "version": _version(),
            "numpy": np.__version__,
        }
        return json.dumps({"result": res.payload, "meta": meta}, sort_keys=True, indent=1) + "\n"
    return "\n".join(res.lines) + "\n"


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    try:
        res = args.func(args)
    except (FileNotFoundError, IsADirectoryError, argparse.ArgumentTypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ApportionError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    text = _render(res, args)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return res.code


if __name__ == "__main__":
    sys.exit(main())
