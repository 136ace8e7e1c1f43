"""Command line front end: ``evonet {simulate,solve,meanfield,fit,compare}``.

Exit codes: 0 success, 2 invalid parameters or input, 3 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import analysis, bdp, meanfield
from .errors import (
    CsvParseError,
    InsufficientData,
    InvalidComparison,
    InvalidParameter,
    NotScaleFree,
    OutOfDomain,
)
from .io import (
    RunManifest,
    manifest_path,
    read_distribution,
    sibling,
    write_column_csv,
    write_curve,
    write_distribution,
)
from .models import AbParams, EvolveParams, run_ensemble

EXIT_OK, EXIT_INVALID, EXIT_RUNTIME = 0, 2, 3


class UsageError(Exception):
    pass


def _band(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"band must be 'lo,hi', got {text!r}") from None
    if not 0 <= lo < hi:
        raise argparse.ArgumentTypeError(f"band needs 0 <= lo < hi, got {text!r}")
    return lo, hi


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _emit(lines: dict, stream=None) -> None:
    stream = stream or sys.stdout
    for key, value in lines.items():
        stream.write(f"{key}: {value}\n")


# -- simulate ------------------------------------------------------------


def cmd_simulate(args) -> int:
    if args.runs < 1:
        raise UsageError("--runs must be >= 1")
    if args.t < 0:
        raise UsageError("--t must be >= 0")
    if args.model == "evolve":
        n0 = args.n0 if args.n0 is not None else args.m + 1
        params = EvolveParams(n0, args.m, args.c, args.seed)
    else:
        n0 = args.n0 if args.n0 is not None else args.m
        params = AbParams(n0, args.m, args.p, args.q, args.seed)

    t0 = time.perf_counter()
    runs = run_ensemble(params, args.t, args.runs, args.snapshot, args.workers, args.edges is not None)
    wall = time.perf_counter() - t0

    out = Path(args.out)
    outputs = [str(out)]
    if args.runs == 1:
        final = runs[0].final
        write_distribution(out, final)
    else:
        final = analysis.average_runs([r.final for r in runs])
        write_distribution(out, final)
        se_path = sibling(out, ".se")
        write_column_csv(se_path, "se", final.stderr)
        outputs.append(str(se_path))
    for ts in sorted(set(args.snapshot)):
        hists = [r.snapshots[ts] for r in runs if ts in r.snapshots]
        if not hists:
            continue
        path = sibling(out, f"_t{ts}")
        write_distribution(path, hists[0] if len(hists) == 1 else analysis.average_runs(hists))
        outputs.append(str(path))
    if args.edges is not None:
        with open(args.edges, "w", encoding="utf-8", newline="\n") as fh:
            fh.writelines(f"{i} {j}\n" for i, j in runs[0].edges)
        outputs.append(str(args.edges))

    alive = [r.alive[-1] for r in runs]
    manifest = RunManifest(
        command="simulate",
        params={"model": args.model, **_params_dict(params)},
        seeds=[r.seed for r in runs],
        t=args.t,
        wall_time=wall,
        outputs=outputs,
        results={"alive_final": alive, "alive_final_mean": sum(alive) / len(alive)},
    )
    manifest.write(manifest_path(out))
    _emit({"output": out, "runs": args.runs, "alive_final_mean": manifest.results["alive_final_mean"]})
    return EXIT_OK


def _params_dict(params) -> dict:
    d = {k: getattr(params, k) for k in params.__dataclass_fields__ if k != "seed"}
    if isinstance(params, AbParams):
        d["r"] = params.r
    return d


# -- solve ---------------------------------------------------------------


def _rate_model(args) -> bdp.RateModel:
    if args.model == "ab":
        return bdp.RateModel.ab(args.m, args.p, args.q, clamp=args.clamp)
    if args.model == "pure-birth":
        return bdp.RateModel.pure_birth(args.m, clamp=args.clamp)
    return bdp.RateModel.evolving(args.m, args.c, clamp=args.clamp)


def cmd_solve(args) -> int:
    if args.S >= args.t:
        raise UsageError(f"need S < t, got S={args.S}, t={args.t}")
    rates = _rate_model(args)
    res = bdp.solve(rates, args.S, args.t, eps=args.eps)
    out = Path(args.out)
    write_distribution(out, res.distribution)
    results = {"total_mass": res.accumulator.total() / (args.t - args.S + 1)}
    if rates.absorbing_zero:
        results["non_isolated_estimate"] = bdp.non_isolated_estimate(res.distribution, args.t)
    manifest = RunManifest(
        command="solve",
        params={"model": args.model, **rates.describe(), "eps": args.eps},
        S=args.S,
        t=args.t,
        wall_time=res.wall_time,
        outputs=[str(out)],
        results=results,
    )
    manifest.write(manifest_path(out))
    _emit({"output": out, "wall_time": f"{res.wall_time:.3f}", **results})
    return EXIT_OK


# -- meanfield -----------------------------------------------------------


def cmd_meanfield(args) -> int:
    if args.model == "ab":
        sol = meanfield.solve_ab(args.m, args.p, args.q)
        report = {
            "model": "ab",
            "beta": sol.beta,
            "gamma": sol.gamma,
            "tau": sol.tau,
            "m_plus_tau": sol.m + sol.tau,
            "q_max": sol.q_max,
            "scale_free": sol.scale_free,
        }
        kind = "ab"
    else:
        sol = meanfield.solve_evolving(args.m, args.c, args.mu)
        report = {
            "model": "evolve",
            "beta": sol.beta,
            "B": sol.B,
            "gamma": sol.gamma,
            "feasible": sol.feasible,
            "regime": sol.regime,
            "mu": sol.mu,
            "C": sol.C,
        }
        kind = sol.regime if args.form == "auto" else args.form
    _emit(report)
    if args.out:
        k, p = meanfield.curve(kind, sol, args.kmax)
        write_curve(args.out, k, p)
        body = {"command": "meanfield", "curve": kind, "kmax": args.kmax, **report}
        manifest_path(args.out).write_text(json.dumps(body, indent=2) + "\n")
    if args.json:
        Path(args.json).write_text(json.dumps(report, indent=2) + "\n")
    return EXIT_OK


# -- fit / compare -------------------------------------------------------


def cmd_fit(args) -> int:
    P = read_distribution(args.input)
    fit = analysis.fit_exponent(P, args.band, log_binned=args.log_bin)
    report = fit.as_dict()
    report["band"] = list(fit.band)
    _emit(report)
    if args.json:
        Path(args.json).write_text(json.dumps(report, indent=2) + "\n")
    return EXIT_OK


def cmd_compare(args) -> int:
    A = read_distribution(args.a)
    B = read_distribution(args.b)
    if args.nonzero:
        A, B = A.conditioned_nonzero(), B.conditioned_nonzero()
    rep = analysis.compare(A, B, args.band)
    report = rep.as_dict()
    _emit(report)
    if args.json:
        Path(args.json).write_text(json.dumps(report, indent=2) + "\n")
    return EXIT_OK


# -- parser --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="evonet", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="simulate a network model and write its degree histogram")
    s.add_argument("--model", choices=["evolve", "ab"], required=True)
    s.add_argument("--n0", type=int, default=None, help="initial nodes (default m+1 for evolve, m for ab)")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--c", type=int, default=0)
    s.add_argument("--p", type=float, default=0.0)
    s.add_argument("--q", type=float, default=0.0)
    s.add_argument("--t", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--runs", type=int, default=1)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--snapshot", type=_int_list, default=[])
    s.add_argument("--edges", default=None, help="write the (first) run's edge list here")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("solve", help="birth-and-death degree distribution")
    s.add_argument("--model", choices=["evolve", "ab", "pure-birth"], required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--c", type=int, default=0)
    s.add_argument("--p", type=float, default=0.0)
    s.add_argument("--q", type=float, default=0.0)
    s.add_argument("--S", type=int, default=4)
    s.add_argument("--t", type=int, required=True)
    s.add_argument("--clamp", choices=sorted(bdp.CLAMP_MODES), default="renorm")
    s.add_argument("--eps", type=float, default=0.0, help="tail truncation threshold (0 keeps full support)")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("meanfield", help="continuum-theory exponents and density curve")
    s.add_argument("--model", choices=["evolve", "ab"], required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--c", type=int, default=0)
    s.add_argument("--p", type=float, default=0.0)
    s.add_argument("--q", type=float, default=0.0)
    s.add_argument("--mu", type=float, default=None)
    s.add_argument("--form", choices=["auto", "continuum", "piecewise"], default="auto")
    s.add_argument("--kmax", type=int, default=1000)
    s.add_argument("--out", default=None)
    s.add_argument("--json", default=None)
    s.set_defaults(func=cmd_meanfield)

    s = sub.add_parser("fit", help="least-squares degree exponent of a k,p CSV")
    s.add_argument("input")
    s.add_argument("--band", type=_band, default=analysis.DEFAULT_BAND)
    s.add_argument("--log-bin", action="store_true")
    s.add_argument("--json", default=None)
    s.set_defaults(func=cmd_fit)

    s = sub.add_parser("compare", help="distance metrics between two k,p CSVs")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--band", type=_band, default=analysis.DEFAULT_BAND)
    s.add_argument("--nonzero", action="store_true", help="renormalize both over k >= 1 first")
    s.add_argument("--json", default=None)
    s.set_defaults(func=cmd_compare)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, InvalidParameter, OutOfDomain, NotScaleFree, CsvParseError) as exc:
        print(f"evonet {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (InsufficientData, InvalidComparison, OSError, RuntimeError) as exc:
        print(f"evonet {args.command}: failed: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
