"""Command line front end.

    posmaps builtin example1 --theta 1.2566370614 --out m.json
    posmaps analyze m.json --checks kpos,schwarz --out report.json
    posmaps classify m.json --lambda-angle 1.2566370614 --vector x.json
    posmaps check m.json --kind kpos --k 2

Exit codes: 0 success / no violation, 1 violation found (check), 2 bad input,
3 eigensolver failure, 4 not an eigenvector, 5 eigenvector pattern violation.
Reports go to stdout (or ``--out``); diagnostics go to stderr.
"""
from __future__ import annotations

import argparse
import cmath
import sys
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .checks import CheckReport, cp_test, k_positivity_test, positivity_sample_test, schwarz_violation_search
from .classify import (Classification, ClassificationError, NotAnEigenvector, PatternViolation, ZeroVector,
                       classify_eigenvector)
from .config import DEFAULT_TOLERANCES, ToleranceSet
from .matalg import State
from .papermaps import BUILTINS, EXAMPLE2_CONTINUOUS_UNSUPPORTED, builtin
from .serialize import (SchemaError, decode_element_file, decode_map_file, decode_state, dumps, encode_complex,
                        encode_element, encode_map_file, load_json, write_json)
from .spectral import eigendecompose, group_closure, is_ergodic, peripheral_structure_tests
from .supermap import SuperMap, map_flags

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_SOLVER, EXIT_NOT_EIGEN, EXIT_PATTERN = 0, 1, 2, 3, 4, 5
CHECK_KINDS = ("positivity", "kpos", "cp", "schwarz")


def classification_to_dict(c: Classification) -> dict:
    out = {
        "case": c.case.value,
        "coefficients": list(c.coefficients),
        "witnesses": [encode_element(w) for w in c.witnesses],
    }
    if c.e is not None:
        out["e"] = encode_element(c.e)
        out["e_perp"] = encode_element(c.e_perp)
    out["residuals"] = dict(c.residuals)
    return out


def _jsonable(v):
    if isinstance(v, complex):
        return encode_complex(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


def check_report_to_dict(r: CheckReport) -> dict:
    return {
        "kind": r.kind,
        "k": r.k,
        "trials": r.trials,
        "violations": r.violations,
        "worst_value": r.worst_value,
        "first_violation_trial": r.first_violation_trial,
        "certifies": r.certifies,
        "heuristic": r.heuristic,
        "seed": r.seed,
        "tol": r.tol,
        "witness": encode_element(r.witness) if r.witness is not None else None,
    }


def run_check(f: SuperMap, kind: str, k: int = 2, trials: int = 1000, seed: int = 0,
              tol: float = DEFAULT_TOLERANCES.psd_tol) -> CheckReport:
    if kind == "positivity":
        return positivity_sample_test(f, trials, seed, tol)
    if kind == "kpos":
        return k_positivity_test(f, k, trials, seed, tol)
    if kind == "cp":
        return cp_test(f, tol, trials, seed)
    if kind == "schwarz":
        return schwarz_violation_search(f, trials, seed, tol)
    raise ValueError(f"unknown check kind {kind!r}")


def analyze_map(f: SuperMap, state: Optional[State] = None, tols: ToleranceSet = DEFAULT_TOLERANCES,
                checks: Sequence[str] = (), k: int = 2, trials: int = 1000, seed: int = 0,
                descriptor: Optional[dict] = None) -> dict:
    """Full analysis as a JSON-ready dict (spectrum, peripheral eigenspaces, classifications,
    ergodicity, group closure, structure residuals and optional positivity checks)."""
    data = eigendecompose(f, tols)
    erg = is_ergodic(data, tols.cluster_tol)
    per = data.peripheral
    group = group_closure([c.value for c in per], tols.eps_peripheral) if per else None
    structure = peripheral_structure_tests(f, data, tols.eps_peripheral)

    peripheral = []
    for c in per:
        entry = {
            "value": encode_complex(c.value),
            "multiplicity": c.multiplicity,
            "basis": [encode_element(b) for b in c.basis],
            "classifications": None,
        }
        if erg.ergodic:
            results = []
            for b in c.basis:
                try:
                    results.append(classification_to_dict(classify_eigenvector(f, c.value, b, tols)))
                except ClassificationError as exc:
                    results.append({"error": type(exc).__name__, "message": str(exc),
                                    "diagnostics": _jsonable(exc.diagnostics)})
            entry["classifications"] = results
        peripheral.append(entry)

    report = {
        "input": dict(descriptor or {}, algebra={"blocks": list(f.algebra.block_sizes)}, dim=f.algebra.dim),
        "tolerances": tols.to_dict(),
        "map_flags": map_flags(f, state, 1e-10),
        "spectrum": [
            {"value": encode_complex(c.value), "multiplicity": c.multiplicity, "algebraic": c.algebraic}
            for c in data.clusters
        ],
        "peripheral": peripheral,
        "ergodicity": {"ergodic": erg.ergodic, "fixed_dim": erg.fixed_dim},
        "group_closure": None if group is None else {
            "is_group": group.is_group,
            "has_identity": group.has_identity,
            "missing": [[encode_complex(a), encode_complex(b)] for a, b in group.missing],
            "missing_conjugates": [encode_complex(v) for v in group.missing_conjugates],
        },
        "structure_tests": {
            "max_adjoint_residual": structure.max_adjoint_residual,
            "max_jordan_residual": structure.max_jordan_residual,
            "max_xxstar_residual": structure.max_xxstar_residual,
            "pairs_tested": structure.pairs_tested,
            "failures": list(structure.failures),
        },
        "checks": {kind: check_report_to_dict(run_check(f, kind, k, trials, seed, tols.psd_tol)) for kind in checks},
        "warnings": list(data.warnings),
    }
    return report


def _parse_complex(text: str) -> complex:
    text = text.strip()
    if "," in text:
        re_, im = text.split(",", 1)
        return complex(float(re_), float(im))
    return complex(text.replace("i", "j"))


def _emit(doc, out: Optional[str]) -> None:
    if out:
        write_json(out, doc)
    else:
        sys.stdout.write(dumps(doc))


def _load_map(path: str):
    return decode_map_file(load_json(path))


def cmd_builtin(args) -> int:
    if args.name == "example2-continuous":
        print(f"error: {EXAMPLE2_CONTINUOUS_UNSUPPORTED}", file=sys.stderr)
        return EXIT_USAGE
    if args.name not in BUILTINS:
        print(f"error: unknown builtin {args.name!r}; choose from {', '.join(BUILTINS)}", file=sys.stderr)
        return EXIT_USAGE
    if args.name != "flip" and args.theta is None:
        print(f"error: builtin {args.name} requires --theta", file=sys.stderr)
        return EXIT_USAGE
    if args.name == "example1-continuous" and (args.t is None or args.t < 0):
        print("error: example1-continuous requires --t >= 0", file=sys.stderr)
        return EXIT_USAGE
    built = builtin(args.name, args.theta, args.t)
    meta = {"label": built.label, "builtin": {"name": args.name}}
    if "theta" in built.params:
        meta["builtin"]["theta"] = built.params["theta"]
        meta["lambda0"] = encode_complex(cmath.exp(1j * built.params["theta"]))
    if args.t is not None:
        meta["builtin"]["t"] = float(args.t)
    _emit(encode_map_file(built.map, built.state, meta), args.out)
    return EXIT_OK


def cmd_analyze(args) -> int:
    try:
        f, state, meta = _load_map(args.map_file)
        if args.state:
            doc = load_json(args.state)
            state = decode_state(doc.get("state", doc), f.algebra)
        tols = DEFAULT_TOLERANCES.replace(eps_peripheral=args.eps_peripheral, cluster_tol=args.cluster_tol,
                                          eps_residual=args.eps_residual, psd_tol=args.psd_tol)
        checks = [c for c in (args.checks or "").split(",") if c]
        for c in checks:
            if c not in CHECK_KINDS:
                raise SchemaError(f"unknown check kind {c!r}")
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    descriptor = {"map_file": args.map_file, "meta": meta}
    try:
        report = analyze_map(f, state, tols, checks, args.k, args.trials, args.seed, descriptor)
    except np.linalg.LinAlgError as exc:
        print(f"error: eigensolver failed: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    for w in report["warnings"]:
        print(f"warning: {w}", file=sys.stderr)
    _emit(report, args.out)
    return EXIT_OK


def cmd_classify(args) -> int:
    try:
        f, _, _ = _load_map(args.map_file)
        if args.lambda_angle is not None:
            lam = cmath.exp(1j * args.lambda_angle)
        elif args.lam is not None:
            lam = _parse_complex(args.lam)
        else:
            raise ValueError("one of --lambda or --lambda-angle is required")
        x = decode_element_file(load_json(args.vector), f.algebra)
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    tols = DEFAULT_TOLERANCES.replace(eps_peripheral=args.eps_peripheral, cluster_tol=args.cluster_tol,
                                      eps_residual=args.eps_residual)
    try:
        c = classify_eigenvector(f, lam, x, tols)
    except ZeroVector as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NotAnEigenvector as exc:
        print(f"not an eigenvector: {exc}", file=sys.stderr)
        return EXIT_NOT_EIGEN
    except PatternViolation as exc:
        print(f"pattern violation: {exc}", file=sys.stderr)
        sys.stdout.write(dumps({"error": "PatternViolation", "message": str(exc),
                                "diagnostics": _jsonable(exc.diagnostics)}))
        return EXIT_PATTERN
    _emit({"lambda": encode_complex(lam), "tolerances": tols.to_dict(), "classification": classification_to_dict(c)},
          None)
    return EXIT_OK


def cmd_check(args) -> int:
    try:
        f, _, _ = _load_map(args.map_file)
        if args.kind == "kpos" and args.k < 1:
            raise ValueError("--k must be >= 1")
        if args.trials < 1:
            raise ValueError("--trials must be >= 1")
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    r = run_check(f, args.kind, args.k, args.trials, args.seed, args.tol)
    sys.stdout.write(dumps(check_report_to_dict(r)))
    return EXIT_VIOLATION if r.violated else EXIT_OK


def _add_tolerance_flags(p, with_psd=True):
    p.add_argument("--eps-peripheral", type=float, default=None)
    p.add_argument("--cluster-tol", type=float, default=None)
    p.add_argument("--eps-residual", type=float, default=None)
    if with_psd:
        p.add_argument("--psd-tol", type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="posmaps", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("builtin", help="write one of the built-in example maps to a map file")
    p.add_argument("name", help=f"one of {', '.join(BUILTINS)}")
    p.add_argument("--theta", type=float, help="phase angle of lambda0 in radians")
    p.add_argument("--t", type=float, help="time parameter for example1-continuous")
    p.add_argument("--out", help="output path (default: stdout)")
    p.set_defaults(func=cmd_builtin)

    p = sub.add_parser("analyze", help="spectral analysis and eigenvector classification")
    p.add_argument("map_file")
    p.add_argument("--state", help="state file (overrides the state in the map file)")
    _add_tolerance_flags(p)
    p.add_argument("--checks", help=f"comma separated subset of {','.join(CHECK_KINDS)}")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("classify", help="classify one eigenvector")
    p.add_argument("map_file")
    p.add_argument("--lambda", dest="lam", help="eigenvalue as 're,im' or a Python complex literal")
    p.add_argument("--lambda-angle", type=float, help="eigenvalue exp(i*angle), angle in radians")
    p.add_argument("--vector", required=True, help="element file")
    _add_tolerance_flags(p, with_psd=False)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("check", help="positivity / k-positivity / CP / Schwarz checks")
    p.add_argument("map_file")
    p.add_argument("--kind", choices=CHECK_KINDS, required=True)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=DEFAULT_TOLERANCES.psd_tol)
    p.set_defaults(func=cmd_check)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
