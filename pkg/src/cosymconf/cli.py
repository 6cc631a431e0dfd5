"""Command-line front end.

Exit status: 0 all gating identities pass, 1 a residual or evaluation failed,
2 usage error.
"""

import argparse
import json
import sys

from .catalog import list_catalog
from .errors import CosymError, UsageError
from .suites import SUITES, TENSORS, RunConfig, run_suite, tensor_dump

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

_CONFIG_KEYS = ("suite", "manifold", "p", "points", "seed", "tol", "out", "m", "trials")


def _parse_tol(items):
    out = {}
    for item in items or ():
        name, sep, val = item.partition("=")
        if not sep or not name:
            raise UsageError(f"--tol expects name=value, got {item!r}")
        try:
            out[name] = float(val)
        except ValueError:
            raise UsageError(f"--tol {name}: {val!r} is not a number") from None
    return out


def _load_config(path):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError("config file must hold a JSON object")
    unknown = set(data) - set(_CONFIG_KEYS)
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    return data


def build_config(args, suite=None):
    """Merge an optional JSON config with command-line flags (flags win)."""
    merged = _load_config(args.config) if getattr(args, "config", None) else {}
    tol = dict(merged.get("tol") or {})
    tol.update(_parse_tol(getattr(args, "tol", None)))
    for key in _CONFIG_KEYS:
        val = getattr(args, key, None)
        if key != "tol" and val is not None:
            merged[key] = val
    if suite is not None:
        merged["suite"] = suite
    merged["tol"] = tol
    if "suite" not in merged:
        raise UsageError("no suite given (use --suite or a config file)")
    try:
        return RunConfig(**merged)
    except TypeError as exc:
        raise UsageError(str(exc)) from None


def _emit(rep, cfg, args):
    text = rep.to_json(include_wall_time=not args.omit_wall_time)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
        for line in rep.summary_lines():
            print(line)
        print(f"overall: {'PASS' if rep.passed else 'FAIL'}  (report written to {cfg.out})")
    else:
        sys.stdout.write(text)
    return EXIT_PASS if rep.passed else EXIT_FAIL


def _cmd_list(args):
    sys.stdout.write(list_catalog())
    print("suites: " + ", ".join(SUITES))
    return EXIT_PASS


def _cmd_run(args):
    cfg = build_config(args)
    return _emit(run_suite(cfg), cfg, args)


def _cmd_oracle(args):
    cfg = build_config(args, suite="theorem-oracle")
    return _emit(run_suite(cfg), cfg, args)


def _cmd_dump(args):
    sys.stdout.write(tensor_dump(args.manifold, args.p, args.tensor, args.point))
    return EXIT_PASS


def _add_report_opts(sp):
    sp.add_argument("--seed", type=int)
    sp.add_argument("--tol", action="append", metavar="NAME=VAL",
                    help="override one identity tolerance (repeatable)")
    sp.add_argument("--out", help="write the JSON report here and print a summary")
    sp.add_argument("--config", help="JSON file with the same keys as the flags")
    sp.add_argument("--omit-wall-time", action="store_true",
                    help="leave wall_time out of the report")


def build_parser():
    ap = argparse.ArgumentParser(prog="cosymconf",
                                 description="Residual suites for cosymplectic conformal connections.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    sp = sub.add_parser("list", help="catalog ids, dimensions and flags")
    sp.set_defaults(func=_cmd_list)

    sp = sub.add_parser("run", help="run one identity suite")
    sp.add_argument("--suite", choices=SUITES)
    sp.add_argument("--manifold")
    sp.add_argument("--p")
    sp.add_argument("--points", type=int)
    sp.add_argument("--m", type=int, help="theorem-oracle only")
    sp.add_argument("--trials", type=int, help="theorem-oracle only")
    _add_report_opts(sp)
    sp.set_defaults(func=_cmd_run)

    sp = sub.add_parser("dump", help="print one tensor at a point")
    sp.add_argument("--tensor", required=True, choices=TENSORS)
    sp.add_argument("--manifold", required=True)
    sp.add_argument("--p")
    sp.add_argument("--point", required=True, help="comma separated chart coordinates")
    sp.set_defaults(func=_cmd_dump)

    sp = sub.add_parser("oracle", help="zero-curvature theorem oracle")
    sp.add_argument("--m", type=int)
    sp.add_argument("--trials", type=int)
    _add_report_opts(sp)
    sp.set_defaults(func=_cmd_oracle)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"cosymconf: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CosymError as exc:
        print(f"cosymconf: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
