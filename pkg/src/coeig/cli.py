"""Command-line front end: JSON matrix sets in, JSON reports out.

Exit codes: 0 success (including negative certificates), 1 input error,
2 numerical failure, 3 oracle/algorithm disagreement under ``--compare``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .exceptions import InputError, NumericalFailureError
from .eigvec import common_eigenvector, common_eigenvector_report
from .lie_closure import (
    ClosureStrategy,
    closure_residual_max,
    generate_lie_algebra,
    independent_indices,
)
from .linalg import Tolerances
from .matrixfile import (
    MatrixSet,
    load_matrix_set,
    matrix_to_entries,
    save_matrix_set,
    vector_to_entries,
)
from .oracle import InstanceKind, InstanceSpec, brute_force_common_eigenvector, make_instance
from .triangulate import triangulation_report

EIGENVALUE_MATCH_TOL = 1e-6


class _Parser(argparse.ArgumentParser):
    """Argparse that reports usage problems through the input-error path."""

    def error(self, message):
        raise InputError(message)


def _emit(payload) -> None:
    print(json.dumps(payload, indent=2))


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    return value


def _merged_tolerances(mset: MatrixSet, args) -> Tolerances:
    merged = dict(mset.tolerance_overrides)
    for key, flag in (("rank_rel", "tol_rank"), ("eig_cluster_rel", "tol_eig"),
                      ("residual_rel", "tol_res")):
        value = getattr(args, flag, None)
        if value is not None:
            merged[key] = value
    return Tolerances(**merged)


def _add_tolerance_flags(parser) -> None:
    parser.add_argument("--tol-rank", type=float, default=None, metavar="F",
                        help="relative singular-value cutoff for rank decisions")
    parser.add_argument("--tol-eig", type=float, default=None, metavar="F",
                        help="relative eigenvalue clustering radius")
    parser.add_argument("--tol-res", type=float, default=None, metavar="F",
                        help="relative verification residual bound")


def _result_payload(result) -> dict:
    return {
        "vector": vector_to_entries(result.vector),
        "eigenvalues": vector_to_entries(result.eigenvalues),
        "residuals": [float(r) for r in result.residuals],
    }


def cmd_eigvec(args) -> int:
    mset = load_matrix_set(args.file)
    tol = _merged_tolerances(mset, args)
    report = common_eigenvector_report(mset.matrices, tol)
    payload = {"command": "eigvec", "names": mset.names}
    if report.result is not None:
        payload["found"] = True
        payload.update(_result_payload(report.result))
    else:
        payload["found"] = False
        payload["certificate"] = "T_trivial"
        payload["closure_dim"] = report.closure.dim
    if args.stats:
        closure = report.closure
        payload["stats"] = {
            "fast_path": report.fast_path,
            "closure_dim": closure.dim if closure is not None else None,
            "commutators_computed": closure.stats.commutators_computed if closure else None,
            "elements_accepted": closure.stats.elements_accepted if closure else None,
            "shemesh_dim": report.shemesh_dim,
        }
    _emit(payload)
    return 0


def cmd_triangulate(args) -> int:
    mset = load_matrix_set(args.file)
    tol = _merged_tolerances(mset, args)
    report = triangulation_report(mset.matrices, tol)
    if report.result is None:
        _emit({"command": "triangulate", "names": mset.names,
               "triangulable": False, "failure_depth": report.failure_depth})
        return 0
    result = report.result
    n = result.q.shape[0]
    max_lower = [
        float(np.max(np.abs(np.tril(t, -1)))) if n > 1 else 0.0 for t in result.triangs
    ]
    payload = {
        "command": "triangulate",
        "names": mset.names,
        "triangulable": True,
        "n": n,
        "q": matrix_to_entries(result.q),
        "triangs": [matrix_to_entries(t) for t in result.triangs],
        "diagonals": [vector_to_entries(d) for d in result.diagonal_sequences],
        "max_lower_residual": max_lower,
    }
    if args.check:
        unitary_defect = float(np.linalg.norm(result.q.conj().T @ result.q - np.eye(n)))
        recon = [
            float(np.linalg.norm(result.q @ t @ result.q.conj().T - a))
            for a, t in zip(mset.matrices, result.triangs)
        ]
        scales = [float(np.linalg.norm(a)) for a in mset.matrices]
        payload["checks"] = {
            "q_unitary_defect": unitary_defect,
            "q_unitary_ok": bool(unitary_defect <= 1e-10 * n),
            "max_lower_residual": max_lower,
            "lower_ok": bool(all(r <= tol.residual_rel * s for r, s in zip(max_lower, scales))),
            "reconstruction_error": recon,
            "reconstruction_ok": bool(all(r <= 1e-8 * s for r, s in zip(recon, scales))),
        }
    _emit(payload)
    return 0


def cmd_lie_closure(args) -> int:
    mset = load_matrix_set(args.file)
    tol = _merged_tolerances(mset, args)
    strategy = ClosureStrategy(args.strategy)
    keep = independent_indices(mset.matrices, tol)
    removed = [i for i in range(len(mset.matrices)) if i not in keep]
    basis = generate_lie_algebra([mset.matrices[i] for i in keep], tol, strategy)
    provenance = []
    for entry in basis.provenance:
        if entry[0] == "generator":
            provenance.append({"kind": "generator", "input_index": keep[entry[1]]})
        else:
            provenance.append({"kind": "bracket", "parents": [entry[1], entry[2]]})
    _emit({
        "command": "lie-closure",
        "names": mset.names,
        "strategy": strategy.value,
        "dim": basis.dim,
        "removed_indices": removed,
        "provenance": provenance,
        "commutators_computed": basis.stats.commutators_computed,
        "elements_accepted": basis.stats.elements_accepted,
        "closure_residual_max": closure_residual_max(basis),
    })
    return 0


def cmd_oracle(args) -> int:
    mset = load_matrix_set(args.file)
    tol = _merged_tolerances(mset, args)
    results = brute_force_common_eigenvector(mset.matrices, tol)
    payload = {
        "command": "oracle",
        "names": mset.names,
        "count": len(results),
        "results": [_result_payload(r) for r in results],
    }
    code = 0
    if args.compare:
        algorithm = common_eigenvector(mset.matrices, tol)
        oracle_found = bool(results)
        algorithm_found = algorithm is not None
        eigenvalues_match = None
        if algorithm_found and oracle_found:
            eigenvalues_match = bool(any(
                np.max(np.abs(algorithm.eigenvalues - r.eigenvalues)) <= EIGENVALUE_MATCH_TOL
                for r in results
            ))
        agree = algorithm_found == oracle_found and eigenvalues_match is not False
        payload["compare"] = {
            "algorithm_found": algorithm_found,
            "oracle_found": oracle_found,
            "eigenvalues_match": eigenvalues_match,
            "agree": agree,
        }
        if not agree:
            code = 3
    _emit(payload)
    return code


def cmd_gen(args) -> int:
    if args.seed is not None:
        seed = args.seed
    elif os.environ.get("COEIG_SEED"):
        try:
            seed = int(os.environ["COEIG_SEED"])
        except ValueError:
            raise InputError(f"COEIG_SEED must be an integer, got {os.environ['COEIG_SEED']!r}")
    else:
        seed = 0
    spec = InstanceSpec(n=args.n, k=args.k, kind=InstanceKind(args.kind), seed=seed)
    matrices = make_instance(spec)
    names = [f"A{i + 1}" for i in range(spec.k)]
    save_matrix_set(args.output, names, matrices)
    _emit({"command": "gen", "path": args.output, "kind": spec.kind.value,
           "n": spec.n, "k": spec.k, "seed": spec.seed})
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="coeig",
                     description="Common eigenvectors and simultaneous triangulation "
                                 "of complex matrix sets.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eigvec", help="compute a common eigenvector or certify none exists")
    p.add_argument("file", help="matrix-set JSON file")
    p.add_argument("--stats", action="store_true", help="include instrumentation counters")
    _add_tolerance_flags(p)
    p.set_defaults(func=cmd_eigvec)

    p = sub.add_parser("triangulate", help="compute a simultaneous unitary triangulation")
    p.add_argument("file", help="matrix-set JSON file")
    p.add_argument("--check", action="store_true", help="re-verify all result invariants")
    _add_tolerance_flags(p)
    p.set_defaults(func=cmd_triangulate)

    p = sub.add_parser("lie-closure", help="generate a basis of the generated Lie algebra")
    p.add_argument("file", help="matrix-set JSON file")
    p.add_argument("--strategy", choices=[s.value for s in ClosureStrategy],
                   default=ClosureStrategy.NEW_AGAINST_GENERATORS.value)
    _add_tolerance_flags(p)
    p.set_defaults(func=cmd_lie_closure)

    p = sub.add_parser("oracle", help="brute-force eigenvalue-combination search")
    p.add_argument("file", help="matrix-set JSON file")
    p.add_argument("--compare", action="store_true",
                   help="also run the main algorithm and report agreement")
    _add_tolerance_flags(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("gen", help="generate a seeded instance file")
    p.add_argument("--kind", required=True, choices=[m.value for m in InstanceKind])
    p.add_argument("--n", required=True, type=int, help="matrix size")
    p.add_argument("--k", required=True, type=int, help="number of matrices")
    p.add_argument("--seed", type=int, default=None,
                   help="RNG seed (falls back to COEIG_SEED, then 0)")
    p.add_argument("-o", "--output", required=True, help="output file path")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except InputError as exc:
        _emit({"error": {"kind": "input", "message": str(exc)}})
        return 1
    except NumericalFailureError as exc:
        _emit({"error": {"kind": "numerical", "message": str(exc),
                         "diagnostics": _jsonable(exc.diagnostics)}})
        return 2


if __name__ == "__main__":
    sys.exit(main())
