"""Command-line front end.

    dioexp exponent sigma --vector phi --Q 100000
    dioexp flow --vector liouville:10:5 --T 40 --out runs/liou
    dioexp subspace --hyperplane 0,liouville:10:4 --H 1000000
    dioexp formulas hyperplane --json '{"omega": "4", "n": 2}'
    dioexp verify --scale 0.01

Results go to stdout (JSON with --json) and, with --out, to a directory of
report/manifest JSON, CSV tables and PNG figures.  Progress goes to stderr.
Exit codes: 0 ok, 1 verification failure, 2 usage, 3 search budget.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

from . import acceptance, formulas
from .errors import DioexpError, ParseError, SearchBudgetExceeded
from .exterior import SubspaceSpec
from .flow import (
    DEFAULT_STEP,
    DEFAULT_T_MAX,
    PolynomialMap,
    cusp_profile,
    estimate_gamma,
    gamma_to_sigma,
    loglog_slope,
    trace,
)
from .manifest import ExperimentManifest
from .pipeline import subspace_sigma
from .scalars import DEFAULT_PRECISION, parse_matrix, parse_vector, to_text
from .search import matrix_omega_estimate, omega_estimate, sigma_estimate

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


def heartbeat(msg):
    print(f"[dioexp] {msg}", file=sys.stderr, flush=True)


def _num(x):
    if x is None:
        return None
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    return x


def _emit(report, args, files=None):
    """Attach the manifest, write files under --out, print the report."""
    manifest = ExperimentManifest(
        command=[args.command] + ([args.kind] if getattr(args, "kind", None) else []),
        inputs={k: v for k, v in report.pop("_inputs", {}).items()},
        bounds={k: getattr(args, k) for k in ("Q", "H", "T", "step", "samples") if getattr(args, k, None) is not None},
        seed=getattr(args, "seed", None),
        precision=getattr(args, "precision", None),
    )
    report["manifest_sha256"] = manifest.digest()
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for name, content in (files or {}).items():
            path = out / name
            if callable(content):
                content(path)
            else:
                path.write_text(content)
            manifest.outputs[name] = name
        manifest.outputs["report.json"] = "report.json"
        (out / "report.json").write_text(json.dumps(report, sort_keys=True, indent=2) + "\n")
        manifest.save(out / "manifest.json")
    if args.json:
        print(json.dumps(report, sort_keys=True))
    else:
        for k in sorted(report):
            if not isinstance(report[k], (dict, list)):
                print(f"{k}: {report[k]}")
    return EXIT_OK


# -- exponent -------------------------------------------------------------------


def cmd_exponent(args):
    from .plotting import plot_witnesses

    if args.kind == "matrix" or args.matrix:
        if not args.matrix:
            raise ParseError("matrix exponent needs --matrix")
        rows = parse_matrix(args.matrix)
        heartbeat(f"matrix exponent of a {len(rows)}x{len(rows[0])} matrix, Q={args.Q}")
        est = matrix_omega_estimate(rows, args.Q, args.precision)
        if args.kind == "sigma" and len(rows[0]) != 1:
            raise ParseError("sigma needs a column (one entry per row)")
        inputs = {"matrix": [[to_text(x) for x in r] for r in rows]}
    else:
        if not args.vector:
            raise ParseError("need --vector or --matrix")
        y = parse_vector(args.vector)
        heartbeat(f"{args.kind} exponent of a {len(y)}-vector, Q={args.Q}")
        fn = sigma_estimate if args.kind == "sigma" else omega_estimate
        est = fn(y, args.Q, args.precision)
        inputs = {"vector": [to_text(x) for x in y]}
    report = {k: _num(v) for k, v in est.to_dict().items()}
    report.update(kind=args.kind, display=est.display(), _inputs=inputs,
                  tolerance_context="finite-Q tail estimate; a lower bound for the limsup")
    files = {"witnesses.csv": est.witnesses_csv(),
             "witnesses.png": lambda p: plot_witnesses(est, p, f"{args.kind} exponent")}
    report["witnesses_path"] = "witnesses.csv" if args.out else None
    return _emit(report, args, files)


# -- flow -----------------------------------------------------------------------


def cmd_flow(args):
    from .plotting import plot_cusp, plot_flow

    if args.curve_dim:
        f = PolynomialMap.monomial_curve(args.curve_dim)
        eps = [Fraction(e) for e in (args.eps or "1/2,1/4,1/8,1/16,1/32,1/64,1/128,1/256").split(",")]
        heartbeat(f"cusp profile of x -> (x..x^{args.curve_dim}) at t={args.T}, {args.samples} samples")
        m = cusp_profile(f, [(0, 1)], Fraction(args.T), eps, args.samples, args.seed)
        try:
            slope = loglog_slope([float(e) for e in eps], m)
        except ValueError:
            slope = None
        report = {"t": args.T, "eps": [float(e) for e in eps], "measure": m, "slope": slope,
                  "samples": args.samples, "seed": args.seed, "_inputs": {"curve_dim": args.curve_dim, "eps": [str(e) for e in eps]}}
        csv = "eps,measure\n" + "".join(f"{float(e)!r},{x!r}\n" for e, x in zip(eps, m))
        files = {"cusp.csv": csv, "cusp.png": lambda p: plot_cusp([float(e) for e in eps], m, p, slope)}
        return _emit(report, args, files)
    if not args.vector:
        raise ParseError("flow needs --vector (or --curve-dim for a cusp profile)")
    y = parse_vector(args.vector)
    heartbeat(f"flow trace of a {len(y)}-vector up to T={args.T}")
    tr = trace(y, args.T, args.step, args.precision)
    g = estimate_gamma(tr)
    report = {
        "n": len(y), "T": args.T, "step": args.step,
        "gamma_hat": g.gamma_hat, "gamma_raw": g.raw, "divergent": g.divergent,
        "witness_times": g.witness_times,
        "sigma_from_gamma": "inf" if g.divergent else float(gamma_to_sigma(g.gamma_hat, len(y))),
        "_inputs": {"vector": [to_text(x) for x in y]},
        "tolerance_context": "tail max of delta(t)/t over t >= T/3",
    }
    files = {"trace.csv": tr.to_csv(), "trace.png": lambda p: plot_flow(tr, p, g)}
    return _emit(report, args, files)


# -- subspace -------------------------------------------------------------------


def _spec_from_args(args):
    if args.hyperplane:
        return SubspaceSpec.hyperplane(parse_vector(args.hyperplane))
    if args.line:
        a, b = parse_vector(args.line)
        return SubspaceSpec.line_r3(a, b)
    if args.matrix and args.n and args.s:
        return SubspaceSpec(args.n, args.s, parse_matrix(args.matrix))
    raise ParseError("subspace needs --hyperplane, --line, or --matrix with --n and --s")


def cmd_subspace(args):
    spec = _spec_from_args(args)
    rep, sectors = subspace_sigma(spec, args.H, heartbeat)
    rep = json.loads(json.dumps(rep, default=_num).replace("Infinity", '"inf"'))
    rep["_inputs"] = {"n": spec.n, "s": spec.s, "A": [[to_text(x) for x in r] for r in spec.A]}
    rep["tolerance_context"] = "sector estimates are finite-height lower bounds"
    files = {f"sector_{e.extra['j']}.csv": e.witnesses_csv() for e in sectors}
    return _emit(rep, args, files)


# -- formulas -------------------------------------------------------------------


def _ext(x):
    return formulas.ExtendedExponent.from_json(x)


FORMULAS = {
    "sigma-L": lambda d: formulas.sigma_L_from_sigmas([_ext(s) for s in d["sigmas"]], d["n"]),
    "hyperplane": lambda d: formulas.hyperplane_sigma(_ext(d["omega"]), d["n"]),
    "line": lambda d: formulas.line_r3_sigma(_ext(d["sigma"]), _ext(d["omega"]), check=d.get("check", True)),
    "transference": lambda d: formulas.transference_bounds(_ext(d["omega"]), d["n"]),
    "check-pair": lambda d: formulas.check_pair(_ext(d["omega"]), _ext(d["sigma"]), d["n"],
                                                Fraction(d.get("slack", 0))),
    "abequi": lambda d: formulas.abequi_convert(Fraction(d["a"]), Fraction(d["b"]), Fraction(d["v"])),
    "bounds": lambda d: formulas.bounds_check(_ext(d["sigma"]), d["n"], d["s"]),
}


def _out(v):
    if isinstance(v, formulas.ExtendedExponent):
        return v.to_json()
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, tuple):
        return [_out(x) for x in v]
    return v


def cmd_formulas(args):
    try:
        data = json.loads(args.input or "{}")
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad JSON input: {exc}") from exc
    try:
        value = FORMULAS[args.kind](data)
    except KeyError as exc:
        raise ParseError(f"missing field {exc}") from exc
    report = {"formula": args.kind, "input": data, "value": _out(value), "_inputs": data}
    args.json = True
    return _emit(report, args)


# -- verify ---------------------------------------------------------------------


def cmd_verify(args):
    only = [int(k) for k in args.only.split(",")] if args.only else None
    results = acceptance.run(only, args.scale, args.inject_fault, heartbeat)
    report = {"scale": args.scale, "fault": args.inject_fault,
              "results": [{k: v for k, v in r.to_dict().items() if k != "seconds"} for r in results],
              "passed": sum(r.passed for r in results), "total": len(results),
              "_inputs": {"only": only, "scale": args.scale, "fault": args.inject_fault}}
    if args.json:
        _emit(report, args)
    else:
        for r in results:
            print(r.line())
        args.json = False
        report.pop("results")
        _emit(report, args)
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


# -- parser ---------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="dioexp", description="Diophantine exponents of vectors and subspaces.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="directory for report, manifest, CSV and PNG files")
    common.add_argument("--json", action="store_true", help="print the report as one JSON line")
    common.add_argument("--precision", type=int, default=DEFAULT_PRECISION, help="working bits")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("exponent", parents=[common], help="direct best-approximation search")
    e.add_argument("kind", choices=["sigma", "omega", "matrix"])
    e.add_argument("--vector")
    e.add_argument("--matrix", help="rows separated by ';'")
    e.add_argument("--Q", type=int, default=10 ** 4)

    f = sub.add_parser("flow", parents=[common], help="diagonal-flow trace or cusp profile")
    f.add_argument("--vector")
    f.add_argument("--T", type=float, default=DEFAULT_T_MAX)
    f.add_argument("--step", type=float, default=DEFAULT_STEP)
    f.add_argument("--curve-dim", type=int, help="cusp profile of x -> (x, ..., x^d) instead of a trace")
    f.add_argument("--eps", help="comma-separated thresholds for the cusp profile")
    f.add_argument("--samples", type=int, default=10 ** 4)
    f.add_argument("--seed", type=int, default=0)

    s = sub.add_parser("subspace", parents=[common], help="sigma(L) from the sector exponents")
    s.add_argument("--hyperplane", help="a_1,...,a_n for x -> (a_1 x_1 + ... + a_n, x)")
    s.add_argument("--line", help="a,b for x -> (ax, bx, x)")
    s.add_argument("--matrix")
    s.add_argument("--n", type=int)
    s.add_argument("--s", type=int)
    s.add_argument("--H", type=int, default=10 ** 4)

    m = sub.add_parser("formulas", parents=[common], help="closed-form evaluators (JSON in, JSON out)")
    m.add_argument("kind", choices=sorted(FORMULAS))
    m.add_argument("input", nargs="?", help="JSON object of arguments")

    v = sub.add_parser("verify", parents=[common], help="run the acceptance suite")
    v.add_argument("--only", help="comma-separated criterion numbers")
    v.add_argument("--scale", type=float, default=1.0, help="multiplier on Q, H and sample counts")
    v.add_argument("--inject-fault", choices=["contraction_sign"], help="break a code path on purpose")
    return p


COMMANDS = {"exponent": cmd_exponent, "flow": cmd_flow, "subspace": cmd_subspace,
            "formulas": cmd_formulas, "verify": cmd_verify}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ParseError as exc:
        print(f"dioexp: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SearchBudgetExceeded as exc:
        print(f"dioexp: search budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (DioexpError, ValueError) as exc:
        print(f"dioexp: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
