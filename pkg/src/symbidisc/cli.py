"""Command-line interface. All outputs are JSON on stdout.

Exit codes: 0 success, 1 failed reproduction checks, 2 precondition or
input errors, 3 inconclusive search.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__, counterexample, jsonio
from .cnu import INCONCLUSIVE, check_cnu
from .config import RunConfig
from .eclass import classify
from .errors import SearchBudgetError, SymbidiscError
from .gamma import membership
from .pick import EXTREMAL, np_status, solve_extremal
from .reproduce import available_ids, run_suite
from .spectral import screen, to_gamma_data

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_PRECONDITION = 2
EXIT_INCONCLUSIVE = 3


def _load_json_arg(arg):
    text = arg
    if not arg.lstrip().startswith(("{", "[")):
        with open(arg, "r", encoding="utf-8") as fh:
            text = fh.read()
    return json.loads(text)


def _config_from(args):
    cfg = RunConfig.from_file(args.config) if args.config else RunConfig()
    overrides = {}
    if args.tol is not None:
        overrides["tol"] = args.tol
        overrides["extremal_band"] = args.tol
    if args.seed is not None:
        overrides["seed"] = args.seed
    if getattr(args, "verbose", False):
        overrides["verbose"] = True
    return cfg.with_(**overrides) if overrides else cfg


def _emit(payload):
    sys.stdout.write(jsonio.dumps(payload) + "\n")


def cmd_gamma_check_point(args):
    cfg = _config_from(args)
    pt = jsonio.point_from_json(_load_json_arg(args.point))
    _emit(jsonio.membership_to_json(membership(pt, tol=min(cfg.tol, 1e-9))))
    return EXIT_OK


def cmd_gamma_classify_map(args):
    cfg = _config_from(args)
    h = jsonio.map_from_json(_load_json_arg(args.map))
    rep = classify(h, nu_max=args.nu_max, k_max=args.k_max, seed=cfg.seed)
    _emit(jsonio.eclass_report_to_json(rep))
    return EXIT_OK


def cmd_np_solve(args):
    data = jsonio.np_data_from_json(_load_json_arg(args.data))
    st = np_status(data)
    out = {"status": jsonio.np_status_to_json(st)}
    if st.kind == EXTREMAL:
        out["solution"] = jsonio.blaschke_to_json(solve_extremal(data))
    _emit(out)
    return EXIT_OK


def cmd_cnu_check(args):
    cfg = _config_from(args)
    data = jsonio.gamma_data_from_json(_load_json_arg(args.data))
    rep = check_cnu(data, args.nu, cfg)
    _emit(jsonio.cnu_report_to_json(rep, verbose=cfg.verbose))
    return EXIT_INCONCLUSIVE if rep.status == INCONCLUSIVE else EXIT_OK


def cmd_counterexample(args):
    cfg = _config_from(args)
    nodes = None
    if args.nodes:
        nodes = [jsonio.as_complex(z) for z in _load_json_arg(args.nodes)]
    rep = counterexample.generate(args.nu, args.r, nodes=nodes,
                                  seed=cfg.seed, cfg=cfg)
    payload = jsonio.counterexample_to_json(rep, verbose=cfg.verbose)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(jsonio.dumps(payload) + "\n")
    _emit(payload)
    return EXIT_OK


def cmd_counterexample_verify(args):
    cfg = _config_from(args)
    rep = jsonio.counterexample_from_json(_load_json_arg(args.report))
    ok = counterexample.verify(rep, cfg)
    _emit({"verified": ok})
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_spectral_screen(args):
    cfg = _config_from(args)
    prob = jsonio.spectral_problem_from_json(_load_json_arg(args.problem))
    data = to_gamma_data(prob)
    rep = screen(prob, nu=args.nu, cfg=cfg)
    _emit({"gammaData": jsonio.gamma_data_to_json(data),
           "report": jsonio.cnu_report_to_json(rep, verbose=cfg.verbose)})
    return EXIT_INCONCLUSIVE if rep.status == INCONCLUSIVE else EXIT_OK


def cmd_examples_reproduce(args):
    ids = [args.id] if args.id else None
    results = run_suite(ids=ids, substring=args.filter,
                        tol=args.tol if args.tol is not None else 1e-6)
    payload = {"results": [{"id": r.id, "ok": r.ok, "detail": r.detail}
                           for r in results],
               "passed": sum(r.ok for r in results),
               "total": len(results)}
    _emit(payload)
    return EXIT_OK if all(r.ok for r in results) else EXIT_CHECK_FAILED


def cmd_examples_list(args):
    _emit({"ids": available_ids()})
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(prog="symbidisc",
                                 description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="RunConfig JSON file")
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--verbose", action="store_true")

    g = sub.add_parser("gamma", help="domain membership and map classification")
    gsub = g.add_subparsers(dest="subcommand", required=True)
    p = gsub.add_parser("check-point")
    p.add_argument("point", help="point JSON or file")
    common(p)
    p.set_defaults(func=cmd_gamma_check_point)
    p = gsub.add_parser("classify-map")
    p.add_argument("map", help="map JSON or file")
    p.add_argument("--nu-max", type=int, default=2)
    p.add_argument("--k-max", type=int, default=6)
    common(p)
    p.set_defaults(func=cmd_gamma_classify_map)

    n = sub.add_parser("np", help="classical scalar interpolation")
    nsub = n.add_subparsers(dest="subcommand", required=True)
    p = nsub.add_parser("solve")
    p.add_argument("data", help="data JSON or file")
    common(p)
    p.set_defaults(func=cmd_np_solve)

    c = sub.add_parser("cnu", help="pencil condition checks")
    csub = c.add_subparsers(dest="subcommand", required=True)
    p = csub.add_parser("check")
    p.add_argument("data", help="data JSON or file")
    p.add_argument("--nu", type=int, required=True)
    common(p)
    p.set_defaults(func=cmd_cnu_check)

    p = sub.add_parser("counterexample",
                       help="generate condition-separating data")
    p.add_argument("--nu", type=int, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--nodes", help="JSON array of nodes or file")
    p.add_argument("--out", help="write the report to this file")
    common(p)
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("verify-counterexample",
                       help="independently recheck a report")
    p.add_argument("report", help="report JSON or file")
    common(p)
    p.set_defaults(func=cmd_counterexample_verify)

    s = sub.add_parser("spectral", help="2x2 spectral screening")
    ssub = s.add_subparsers(dest="subcommand", required=True)
    p = ssub.add_parser("screen")
    p.add_argument("problem", help="problem JSON or file")
    p.add_argument("--nu", type=int, default=None)
    common(p)
    p.set_defaults(func=cmd_spectral_screen)

    e = sub.add_parser("examples", help="reproduction suite")
    esub = e.add_subparsers(dest="subcommand", required=True)
    p = esub.add_parser("reproduce")
    p.add_argument("--id", default=None)
    p.add_argument("--filter", default=None)
    common(p)
    p.set_defaults(func=cmd_examples_reproduce)
    p = esub.add_parser("list")
    common(p)
    p.set_defaults(func=cmd_examples_list)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SearchBudgetError as exc:
        _emit({"error": str(exc), "kind": "inconclusive"})
        return EXIT_INCONCLUSIVE
    except (SymbidiscError, json.JSONDecodeError, OSError, KeyError) as exc:
        _emit({"error": str(exc), "kind": type(exc).__name__})
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
