"""Command-line front end.

Subcommands
-----------
analyze : entanglement analysis of one target (closed form where known,
          multistart numerics always), emitted as a JSON report.
verify  : run the cross-validation suites; one JSON line per check.
sweep   : closed-form tables over (q, p) families as CSV or JSON.

Exit codes: 0 ok, 1 verification failure, 2 usage error, 3 numerical
failure.  Reports are deterministic given --seed (default 42).
GEOENT_THREADS caps worker threads for sweep rows; output order is fixed
by input order regardless.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .distance import critical_identities, gradient
from .errors import DomainError, GeoentError, MultistartError, NumericalError
from .hessian import build_hessian, eig_symmetric
from .optimize import OptimOptions, default_seed_list, multistart
from .states import load_state, make_dicke, make_ring
from .symmetric import solve_dicke, solve_ring
from .verify import run_suite

SCHEMA = "geoent/1"
SWEEP_COLUMNS = ["family", "q", "p", "dcSquared", "tau", "e1", "e2", "e3", "e4", "classification"]
QMAX_LIMIT = 12

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


def _thread_workers() -> int:
    raw = os.environ.get("GEOENT_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _emit(text: str, out_path):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
            if not text.endswith("\n"):
                fh.write("\n")
    else:
        print(text)


def _spectrum_json(spec):
    return {
        "eigenvalues": spec.eigenvalues.tolist(),
        "zeroModes": spec.zero_modes,
        "classification": spec.classification,
    }


def _target_from_args(args):
    sources = [args.dicke is not None, args.ring is not None, args.state is not None]
    if sum(sources) != 1:
        raise DomainError("exactly one of --dicke, --ring, --state is required")
    if args.dicke is not None:
        try:
            q, p = (int(x) for x in args.dicke.split(","))
        except ValueError as exc:
            raise DomainError(f"--dicke expects 'q,p', got {args.dicke!r}") from exc
        return make_dicke(q, p), {"kind": "dicke", "q": q, "p": p}
    if args.ring is not None:
        return make_ring(args.ring), {"kind": "ring", "q": args.ring, "p": None}
    try:
        target = load_state(args.state, norm_tol=args.norm_tol)
    except OSError as exc:
        raise DomainError(f"cannot read state file {args.state}: {exc}") from exc
    return target, {"kind": "file", "q": target.q, "p": None, "path": args.state}


def cmd_analyze(args) -> int:
    target, descriptor = _target_from_args(args)
    opts = OptimOptions(seed_list=default_seed_list(args.starts, base=args.seed))
    best = multistart(target, args.starts, opts)
    spec = eig_symmetric(build_hessian(target, best.params), params=best.params)
    ident = critical_identities(target, best.params)

    report = {
        "schema": SCHEMA,
        "target": descriptor,
        "dcSquared": best.dsq,
        "dNSquared": 2.0 * best.dsq,
        "cosThetaCSq": ident.cos_theta_c ** 2,
        "params": best.params.pairs.tolist(),
        "spectrum": _spectrum_json(spec),
        "numeric": {
            "dsq": best.dsq,
            "gradNorm": best.grad_norm,
            "iters": best.iters,
            "starts": args.starts,
            "seed": args.seed,
            "criticalResidual": ident.cd_residual,
        },
        "provenance": "numeric",
        "tolerances": {"gradTol": opts.grad_tol, "normTol": args.norm_tol},
    }

    kind = descriptor["kind"]
    if kind == "dicke" and descriptor["q"] >= 3 and 1 <= descriptor["p"] <= descriptor["q"] - 1:
        sol = solve_dicke(descriptor["q"], descriptor["p"])
        closed_params = sol.product_params()
        closed_spec = eig_symmetric(build_hessian(target, closed_params), params=closed_params)
        expected = sol.spectrum_list()
        report["analytic"] = {
            "alpha0": sol.alpha0,
            "alpha1": sol.alpha1,
            "pairNorm": sol.pair_norm,
            "prodNorm": sol.prod_norm,
            "dcSquared": sol.dc_squared,
            "eigenvalues": list(sol.eigenvalues),
            "multiplicities": list(sol.multiplicities),
        }
        report["dcSquared"] = sol.dc_squared
        report["dNSquared"] = 2.0 * sol.dc_squared
        report["cosThetaCSq"] = sol.prod_norm
        report["provenance"] = "both"
        report["residuals"] = {
            "dcSquared": abs(sol.dc_squared - best.dsq),
            "spectrum": float(
                np.max(np.abs(closed_spec.eigenvalues - expected)) / np.max(np.abs(expected))
            ),
            "gradientAtClosedForm": float(np.max(np.abs(gradient(target, closed_params)))),
        }
    elif kind == "ring":
        sol = solve_ring(descriptor["q"])
        sym_params = sol.product_params()
        sym_spec = eig_symmetric(build_hessian(target, sym_params), params=sym_params)
        report["analytic"] = {
            "alpha0": sol.alpha0,
            "alpha1": sol.alpha1,
            "pairNorm": sol.pair_norm,
            "prodNorm": sol.prod_norm,
            "stationaryDsq": sol.dc_squared,
            "blockEigenvalues": list(sol.eigenvalues),
            "multiplicities": list(sol.multiplicities),
            "symmetricPointSpectrum": _spectrum_json(sym_spec),
        }
        report["provenance"] = "both"
        report["residuals"] = {
            "gradientAtClosedForm": float(np.max(np.abs(gradient(target, sym_params)))),
            "bestBelowStationary": sol.dc_squared - best.dsq,
        }
    _emit(json.dumps(report, indent=2), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.qmax > QMAX_LIMIT:
        raise DomainError(f"--qmax must be <= {QMAX_LIMIT}, got {args.qmax}")
    if args.qmax < 3:
        raise DomainError(f"--qmax must be >= 3, got {args.qmax}")
    all_ok = True
    for rec in run_suite(args.suite, args.qmax):
        print(json.dumps(rec))
        all_ok = all_ok and rec["pass"]
    print(json.dumps({"suite": args.suite, "qmax": args.qmax, "allPass": all_ok}))
    return EXIT_OK if all_ok else EXIT_VERIFY_FAIL


def _parse_qrange(text: str):
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError as exc:
        raise DomainError(f"--qrange expects 'lo:hi', got {text!r}") from exc
    if lo < 3 or hi > QMAX_LIMIT:
        if lo <= hi:  # empty ranges are fine regardless of bounds
            raise DomainError(f"--qrange must lie within 3:{QMAX_LIMIT}, got {text}")
    return lo, hi


def _dicke_row(q, p):
    sol = solve_dicke(q, p)
    e1, e2, e3, e4 = sol.eigenvalues
    return {
        "family": "dicke",
        "q": q,
        "p": p,
        "dcSquared": sol.dc_squared,
        "tau": sol.diag,
        "e1": e1,
        "e2": e2,
        "e3": e3,
        "e4": e4,
        "classification": "local-minimum",
    }


def _ring_row(q):
    sol = solve_ring(q)
    sym_params = sol.product_params()
    spec = eig_symmetric(build_hessian(make_ring(q), sym_params), params=sym_params)
    e1, e2, e3, e4 = sol.eigenvalues
    return {
        "family": "ring",
        "q": q,
        "p": None,
        "dcSquared": sol.dc_squared,
        "tau": sol.diag,
        "e1": e1,
        "e2": e2,
        "e3": e3,
        "e4": e4,
        "classification": spec.classification,
    }


def cmd_sweep(args) -> int:
    lo, hi = _parse_qrange(args.qrange)
    tasks = []
    for q in range(lo, hi + 1):
        if args.family == "dicke":
            tasks.extend((q, p) for p in range(1, q))
        else:
            tasks.append((q, None))
    workers = _thread_workers()

    def compute(task):
        q, p = task
        return _dicke_row(q, p) if args.family == "dicke" else _ring_row(q)

    if workers > 1 and tasks:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(compute, tasks))
    else:
        rows = [compute(t) for t in tasks]

    if args.format == "json":
        _emit(json.dumps({"schema": SCHEMA, "columns": SWEEP_COLUMNS, "rows": rows}, indent=2), args.out)
    else:
        lines = [",".join(SWEEP_COLUMNS)]
        for row in rows:
            cells = []
            for col in SWEEP_COLUMNS:
                val = row[col]
                if val is None:
                    cells.append("")
                elif isinstance(val, float):
                    cells.append(repr(val))
                else:
                    cells.append(str(val))
            lines.append(",".join(cells))
        _emit("\n".join(lines), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="geoent",
        description="Geometric entanglement of multi-qubit states via closest product states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("analyze", help="analyze one target state")
    pa.add_argument("--dicke", metavar="Q,P", help="Dicke target with q qubits, p excitations")
    pa.add_argument("--ring", type=int, metavar="Q", help="cyclic two-excitation ring target")
    pa.add_argument("--state", metavar="FILE", help="JSON state file {'q':..,'coeffs':[..]}")
    pa.add_argument("--starts", type=int, default=32, help="multistart count (default 32)")
    pa.add_argument("--seed", type=int, default=42, help="base RNG seed (default 42)")
    pa.add_argument("--norm-tol", type=float, default=1e-9, dest="norm_tol",
                    help="state-file norm tolerance (default 1e-9)")
    pa.add_argument("--out", metavar="FILE", help="write the report here instead of stdout")
    pa.set_defaults(func=cmd_analyze)

    pv = sub.add_parser("verify", help="run cross-validation suites")
    pv.add_argument("--suite", choices=["gradient", "hessian", "eigen", "schmidt", "all"],
                    default="all")
    pv.add_argument("--qmax", type=int, default=6, help=f"largest qubit count (<= {QMAX_LIMIT})")
    pv.set_defaults(func=cmd_verify)

    ps = sub.add_parser("sweep", help="closed-form tables over a target family")
    ps.add_argument("--family", choices=["dicke", "ring"], required=True)
    ps.add_argument("--qrange", required=True, metavar="LO:HI", help="inclusive qubit range")
    ps.add_argument("--format", choices=["json", "csv"], default="json")
    ps.add_argument("--out", metavar="FILE", help="write the table here instead of stdout")
    ps.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (NumericalError, MultistartError) as exc:
        print(json.dumps({"schema": SCHEMA, "error": {"type": type(exc).__name__, "message": str(exc)}}))
        return EXIT_NUMERICAL
    except GeoentError as exc:
        print(json.dumps({"schema": SCHEMA, "error": {"type": type(exc).__name__, "message": str(exc)}}))
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
