"""ppdm command line: generate, classify, reconstruct, verify, figures.

Exit codes: 0 success, 1 infeasible parameters or ambiguity detected,
2 usage / unreadable input.  Reports go to stdout as JSON; errors go to
stderr as JSON.
"""

import argparse
import json
import os
import sys

from . import figures as figs
from . import io
from .errors import InvalidInput, PPDMError
from .geometry import compute_ppdm
from .reconstruct import reconstruct_configuration
from .sampling import CLASS_IDS, draw_pair
from .uniqueness import AMBIGUOUS, classify
from .verification import verify_pair


class UsageError(Exception):
    pass


def _emit(obj):
    sys.stdout.write(io.dumps(obj))


def _params(text):
    if text is None:
        return {}
    if text.startswith("@"):
        try:
            with open(text[1:]) as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read params file: {exc}")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"params are not valid JSON: {exc}")
    if not isinstance(data, dict):
        raise UsageError("params must be a JSON object")
    return data


def _load_config(path):
    try:
        return io.load_config(path)
    except InvalidInput as exc:
        raise UsageError(str(exc))


def cmd_generate(args):
    if args.class_id not in CLASS_IDS:
        raise UsageError(f"unknown class id {args.class_id!r}; known: {', '.join(CLASS_IDS)}")
    ref, eq, params, _ = draw_pair(args.class_id, args.seed, args.index, _params(args.params))
    os.makedirs(args.out, exist_ok=True)
    io.save_config(ref, os.path.join(args.out, "reference.json"))
    io.save_config(eq, os.path.join(args.out, "equivalent.json"))
    io.save_ppdm(compute_ppdm(ref), os.path.join(args.out, "ppdm.csv"))
    with open(os.path.join(args.out, "params.json"), "w") as fh:
        fh.write(io.dumps({"class_id": args.class_id, "seed": args.seed, "index": args.index,
                           "params": params}))
    _emit({"class_id": args.class_id, "out": args.out,
           "files": ["reference.json", "equivalent.json", "ppdm.csv", "params.json"],
           "verification": verify_pair(ref, eq).to_dict()})
    return 0


def cmd_classify(args):
    config = _load_config(args.config)
    tol = 1e-8 if args.tol is None else args.tol
    report = classify(config, tol=tol, restarts=args.restarts, seed=args.seed)
    _emit(report.to_dict())
    return 1 if report.verdict == AMBIGUOUS else 0


def cmd_reconstruct(args):
    try:
        D = io.load_ppdm(args.ppdm)
    except InvalidInput as exc:
        raise UsageError(str(exc))
    tol = 1e-8 if args.tol is None else args.tol
    res = reconstruct_configuration(D, args.dim, tol=tol)
    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, "reconstructed.json")
    io.save_config(res.configuration, path)
    _emit({"configuration": io.config_to_dict(res.configuration), "file": path,
           **res.to_dict()})
    return 0


def cmd_verify(args):
    a, b = _load_config(args.a), _load_config(args.b)
    if a.dimension != b.dimension:
        raise UsageError("configurations have different dimensions")
    _emit(verify_pair(a, b).to_dict())
    return 0


def cmd_figures(args):
    ids = figs.FIGURE_IDS if args.id == "all" else None
    if ids is None:
        try:
            ids = (int(args.id),)
        except ValueError:
            raise UsageError(f"figure id must be 3..13 or 'all', got {args.id!r}")
        if ids[0] not in figs.FIGURE_IDS:
            raise UsageError(f"unknown figure id {ids[0]}; known: 3..13")
    summary = []
    for f in ids:
        data = figs.write_figure(f, args.out, seed=args.seed, render=args.render)
        summary.append({"figure": f, "class_id": data["class_id"], "verified": data["verified"],
                        "verdicts": [p["verdict"] for p in data["pairwise"]]})
    _emit({"out": args.out, "figures": summary})
    return 0 if all(s["verified"] for s in summary) else 1


def _globals(parser, suppress):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--tol", type=float, default=d(None),
                        help="numerical tolerance (default depends on the command)")
    parser.add_argument("--seed", type=int, default=d(0), help="64-bit seed (default 0)")
    parser.add_argument("--out", default=d("."), help="output directory (default .)")


def build_parser():
    p = argparse.ArgumentParser(prog="ppdm", description=__doc__.split("\n")[0])
    _globals(p, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _globals(common, suppress=True)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", parents=[common], help="write a seeded equivalent pair")
    g.add_argument("--class", dest="class_id", required=True, help=", ".join(CLASS_IDS))
    g.add_argument("--params", help="JSON object (or @file) overriding sampled parameters")
    g.add_argument("--index", type=int, default=0, help="draw index within the seed stream")
    g.set_defaults(func=cmd_generate)

    c = sub.add_parser("classify", parents=[common], help="unique or ambiguous?")
    c.add_argument("--config", required=True)
    c.add_argument("--restarts", type=int, default=32)
    c.set_defaults(func=cmd_classify)

    r = sub.add_parser("reconstruct", parents=[common], help="configuration from a PPDM CSV")
    r.add_argument("--ppdm", required=True)
    r.add_argument("--dim", type=int, choices=(2, 3), required=True)
    r.set_defaults(func=cmd_reconstruct)

    v = sub.add_parser("verify", parents=[common], help="compare two configuration files")
    v.add_argument("a")
    v.add_argument("b")
    v.set_defaults(func=cmd_verify)

    f = sub.add_parser("figures", parents=[common], help="export figure data")
    f.add_argument("--id", default="all", help="3..13 or 'all'")
    f.add_argument("--render", action="store_true", help="also write PNGs (needs matplotlib)")
    f.set_defaults(func=cmd_figures)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(io.dumps({"error": "UsageError", "message": str(exc)}))
        return 2
    except PPDMError as exc:
        sys.stderr.write(io.dumps(exc.to_dict()))
        return 1


if __name__ == "__main__":
    sys.exit(main())
