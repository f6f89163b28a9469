"""Command-line driver.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
3 search budget exhausted, 4 declared density violated.

All randomness comes from ``--seed`` through Python's ``random.Random``
(Mersenne Twister seeded with the integer), so reruns are byte-identical;
``--no-timings`` drops the only nondeterministic report fields.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

from .approx import PLANAR, DensityProfile, linear_cover
from .balls import BallSystem, all_balls, format_balls, parse_balls, random_balls
from .errors import BallCoverError, BudgetError, DensityWitnessError, InputError
from .graph import format_graph, gen_broom_counterexample, gen_family, parse_graph
from .lp import exact_nu, exact_tau, solve_nu_star, solve_tau_star, vc_dimension
from .minors import MinorModel, verify_minor_model

SCHEMA = 1
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET, EXIT_DENSITY = 0, 1, 2, 3, 4


def _qstr(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _default_budget() -> int:
    return int(os.environ.get("BALLCOVER_BUDGET", 10**7))


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_json(report: dict, out: str | None) -> None:
    _emit(json.dumps(report, indent=2, sort_keys=True) + "\n", out)


def _load(graph_path: str, balls_path: str):
    g = parse_graph(_read(graph_path))
    return g, parse_balls(g, _read(balls_path))


def _report(command: str, args, g, h: BallSystem) -> dict:
    return {
        "schema": SCHEMA,
        "command": command,
        "instance": {
            "graph": args.graph,
            "balls": args.balls,
            "seed": getattr(args, "seed", None),
            "vertex_count": g.vertex_count,
            "ball_count": len(h),
        },
        "values": {},
        "certificates": {},
        "flags": {},
    }


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_gen(args) -> int:
    if args.family == "broom":
        if args.k is None or args.ell is None:
            raise InputError("broom needs --k and --ell")
        inst = gen_broom_counterexample(args.k, args.ell, args.spacing)
        _emit(format_graph(inst.graph), args.out)
        labels = args.labels or (args.out + ".labels.json" if args.out else None)
        if labels:
            Path(labels).write_text(json.dumps(inst.to_json(), indent=2, sort_keys=True) + "\n")
        return EXIT_OK
    g = gen_family(args.family, n=args.n, rows=args.rows, cols=args.cols, seed=args.seed,
                   keep=args.keep, subdivisions=args.subdivisions)
    _emit(format_graph(g), args.out)
    return EXIT_OK


def cmd_balls(args) -> int:
    g = parse_graph(_read(args.graph))
    if args.mode == "all-radius":
        if args.radius is None or args.radius < 0:
            raise InputError("all-radius needs a nonnegative --radius")
        h = all_balls(g, args.radius)
    elif args.mode == "random":
        if args.count is None or args.max_radius is None:
            raise InputError("random needs --count and --max-radius")
        h = random_balls(g, args.count, args.max_radius, args.seed)
    else:
        if not args.input:
            raise InputError("file mode needs --input")
        h = parse_balls(g, _read(args.input))
    _emit(format_balls(h), args.out)
    return EXIT_OK


def cmd_solve(args) -> int:
    g, h = _load(args.graph, args.balls)
    report = _report("solve", args, g, h)
    values, certs, timings = report["values"], report["certificates"], {}
    code = EXIT_OK
    try:
        for which in args.which:
            start = time.perf_counter()
            if which == "nu":
                value, cert = exact_nu(h, budget=args.budget)
                if not h.is_matching(cert):
                    raise AssertionError("matching certificate failed verification")
                values["nu"], certs["matching"] = value, cert
            elif which == "tau":
                value, cert = exact_tau(h, budget=args.budget)
                if not h.is_transversal(cert):
                    raise AssertionError("transversal certificate failed verification")
                values["tau"], certs["transversal"] = value, cert
            elif which == "nu-star":
                sol = solve_nu_star(h)
                values["nu_star"], certs["nu_star_weights"] = _qstr(sol.objective), sol.to_json()["weights"]
            elif which == "tau-star":
                sol = solve_tau_star(h)
                values["tau_star"], certs["tau_star_weights"] = _qstr(sol.objective), sol.to_json()["weights"]
            elif which == "vc":
                values["vc"] = vc_dimension(h, budget=args.budget)
            timings[which] = round(time.perf_counter() - start, 6)
    except BudgetError as exc:
        report["flags"]["budget_exhausted"] = str(exc)
        report["flags"]["best_bound"] = exc.best
        code = EXIT_BUDGET
    _check_chain(values)
    if not args.no_timings:
        report["timings"] = timings
    _emit_json(report, args.out)
    return code


def _check_chain(values: dict) -> None:
    nu, tau = values.get("nu"), values.get("tau")
    nus = Fraction(values["nu_star"]) if "nu_star" in values else None
    taus = Fraction(values["tau_star"]) if "tau_star" in values else None
    if nus is not None and taus is not None and nus != taus:
        raise AssertionError("nu* != tau*")
    star = nus if nus is not None else taus
    if star is not None and ((nu is not None and nu > star) or (tau is not None and star > tau)):
        raise AssertionError("duality chain nu <= nu* = tau* <= tau violated")
    if nu is not None and tau is not None and nu > tau:
        raise AssertionError("nu > tau")


def _profile(args) -> DensityProfile:
    if args.profile == "planar":
        return PLANAR
    if args.d is None or args.t is None:
        raise InputError("custom profile needs --d and --t")
    return DensityProfile(Fraction(args.d), args.t)


def cmd_cover(args) -> int:
    g, h = _load(args.graph, args.balls)
    profile = _profile(args)
    report = _report("cover", args, g, h)
    report["instance"]["profile"] = {"d": _qstr(profile.d), "t": profile.t}
    start = time.perf_counter()
    try:
        cert = linear_cover(h, profile, seed=args.seed, trial_budget=args.trial_budget,
                            budget=args.budget)
    except DensityWitnessError as exc:
        report["flags"]["density_witness"] = str(exc)
        if exc.model is not None:
            report["certificates"]["minor_model"] = exc.model.to_json()
            report["values"]["witness_average_degree"] = _qstr(exc.average_degree)
        _emit_json(report, args.out)
        return EXIT_DENSITY
    except BudgetError as exc:
        report["flags"]["budget_exhausted"] = str(exc)
        _emit_json(report, args.out)
        return EXIT_BUDGET
    elapsed = time.perf_counter() - start
    body = cert.to_json()
    report["certificates"]["transversal"] = body.pop("transversal")
    report["certificates"]["matching"] = body.pop("matching")
    report["values"]["ratio_bound"] = body.pop("ratio_bound")
    report["values"]["transversal_size"] = len(cert.transversal)
    report["values"]["matching_size"] = len(cert.matching)
    report["flags"].update(body)
    if not args.no_exact:
        try:
            nu, _ = exact_nu(h, budget=args.budget)
            report["values"]["nu"] = nu
            report["values"]["within_bound_exact"] = len(cert.transversal) <= cert.ratio_bound * nu
        except BudgetError:
            report["flags"]["exact_nu_budget_exhausted"] = True
    if not args.no_timings:
        report["timings"] = {"cover": round(elapsed, 6)}
    _emit_json(report, args.out)
    return EXIT_OK


def _load_ids(path: str, key: str) -> list[int]:
    try:
        data = json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: {exc}") from None
    if isinstance(data, dict):
        data = data.get("certificates", data).get(key)
    if not isinstance(data, list) or not all(isinstance(x, int) for x in data):
        raise InputError(f"{path}: expected a list of integers under {key!r}")
    return data


def cmd_verify(args) -> int:
    if args.kind == "minor-model":
        if len(args.files) != 2:
            raise InputError("minor-model needs GRAPH MODEL")
        g = parse_graph(_read(args.files[0]))
        try:
            data = json.loads(_read(args.files[1]))
        except json.JSONDecodeError as exc:
            raise InputError(f"{args.files[1]}: {exc}") from None
        if "certificates" in data:
            data = data["certificates"].get("minor_model", {})
        model = MinorModel.from_json(data)
        if any(v < 0 or v >= g.vertex_count for bs in model.branch_sets for v in bs):
            print("FAIL range: branch set vertex outside the host")
            return EXIT_FAIL
        report = verify_minor_model(g, model)
        if not report:
            print(f"FAIL {report.clause}: {report.message}")
            return EXIT_FAIL
        print("PASS")
        return EXIT_OK
    if len(args.files) != 3:
        raise InputError(f"{args.kind} needs GRAPH BALLS CERTIFICATE")
    g, h = _load(args.files[0], args.files[1])
    ids = _load_ids(args.files[2], args.kind)
    if args.kind == "transversal":
        if any(not 0 <= v < g.vertex_count for v in ids):
            print("FAIL range: vertex outside the graph")
            return EXIT_FAIL
        missed = [i for i, b in enumerate(h.balls) if not any(v in b for v in ids)]
        if missed:
            print(f"FAIL transversal: ball {missed[0]} is not hit")
            return EXIT_FAIL
    else:
        if any(not 0 <= i < len(h) for i in ids):
            print("FAIL range: ball index out of range")
            return EXIT_FAIL
        if len(set(ids)) != len(ids):
            print("FAIL matching: repeated ball index")
            return EXIT_FAIL
        for a in range(len(ids)):
            for b in range(a + 1, len(ids)):
                if h[ids[a]].intersects(h[ids[b]]):
                    print(f"FAIL matching: balls {ids[a]} and {ids[b]} intersect")
                    return EXIT_FAIL
    print("PASS")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ballcover", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a graph")
    p.add_argument("--family", required=True,
                   choices=["path", "cycle", "complete", "grid", "king-grid", "king-sub",
                            "planar", "tree", "broom"])
    p.add_argument("--n", type=int)
    p.add_argument("--rows", type=int)
    p.add_argument("--cols", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--keep", type=float, default=0.5)
    p.add_argument("--subdivisions", type=int, default=0)
    p.add_argument("--k", type=int)
    p.add_argument("--ell", type=int)
    p.add_argument("--spacing", type=int, default=1)
    p.add_argument("--labels", help="broom labels JSON path (default: OUT.labels.json)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("balls", help="generate a ball system")
    p.add_argument("graph")
    p.add_argument("--mode", required=True, choices=["all-radius", "random", "file"])
    p.add_argument("--radius", type=int)
    p.add_argument("--count", type=int)
    p.add_argument("--max-radius", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--input")
    p.add_argument("--out")
    p.set_defaults(func=cmd_balls)

    p = sub.add_parser("solve", help="exact values with certificates")
    p.add_argument("graph")
    p.add_argument("balls")
    p.add_argument("--which", nargs="+", required=True,
                   choices=["nu", "tau", "nu-star", "tau-star", "vc"])
    p.add_argument("--budget", type=int, default=_default_budget())
    p.add_argument("--no-timings", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("cover", help="linear-ratio transversal with matching certificate")
    p.add_argument("graph")
    p.add_argument("balls")
    p.add_argument("--profile", choices=["planar", "custom"], default="planar")
    p.add_argument("--d")
    p.add_argument("--t", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trial-budget", type=int, default=100)
    p.add_argument("--budget", type=int, default=_default_budget())
    p.add_argument("--no-exact", action="store_true", help="skip the exact nu cross-check")
    p.add_argument("--no-timings", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_cover)

    p = sub.add_parser("verify", help="check a certificate")
    p.add_argument("kind", choices=["transversal", "matching", "minor-model"])
    p.add_argument("files", nargs="+")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetError as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except DensityWitnessError as exc:
        print(f"density witness: {exc}", file=sys.stderr)
        return EXIT_DENSITY
    except BallCoverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
