"""Command-line front end.

One subcommand per experiment plus ``properties`` for the invariant suite.
Exit codes: 0 success, 1 any error, 2 property-suite failure. The
GRAMXENT_SEED environment variable supplies a default seed; an explicit
--seed (or a seed in --config) wins over it.
"""

import argparse
import dataclasses
import json
import os
import sys

from .errors import GramxentError
from .experiments import (
    RUNNERS,
    default_config,
    emit_results,
)
from .kernels import FAMILIES, GAUSSIAN, KernelSpec
from .verification import (
    DEFAULT_ALPHA_GRID,
    DEFAULT_SIZES,
    TAMPER_MODES,
    run_property_suite,
)

_CONFIG_GRID_KEYS = ("alpha_grid", "n_grid", "d_grid", "shift_grid", "scale_grid")
_CONFIG_SCALAR_KEYS = (
    "seed",
    "replicates",
    "sample_scale",
    "m",
    "output_path",
    "out_format",
)


def _add_experiment_flags(p):
    p.add_argument("--kernel", choices=FAMILIES, default=None)
    p.add_argument("--sigma", type=float, default=None, help="kernel bandwidth")
    p.add_argument("--alpha", type=float, action="append", default=None)
    p.add_argument("--n", type=int, action="append", default=None)
    p.add_argument("--d", type=int, action="append", default=None)
    p.add_argument("--shift", type=float, action="append", default=None)
    p.add_argument("--scale", type=float, action="append", default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None, help="output path (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default=None)
    p.add_argument("--config", default=None, help="JSON config file; flags override")


def _resolve_seed(flag_seed, file_seed):
    if flag_seed is not None:
        return int(flag_seed)
    if file_seed is not None:
        return int(file_seed)
    env = os.environ.get("GRAMXENT_SEED")
    if env is not None:
        return int(env)
    return 0


def _load_config_file(path):
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise GramxentError(f"{path}: config must be a JSON object")
    return data


def _build_config(experiment, args):
    file_cfg = _load_config_file(args.config) if args.config else {}
    known = set(_CONFIG_GRID_KEYS) | set(_CONFIG_SCALAR_KEYS) | {"kernel", "sigma"}
    unknown = set(file_cfg) - known
    if unknown:
        raise GramxentError(f"unknown config keys: {sorted(unknown)}")

    overrides = {}
    for key in _CONFIG_GRID_KEYS:
        if key in file_cfg:
            overrides[key] = tuple(file_cfg[key])
    for key in _CONFIG_SCALAR_KEYS:
        if key in file_cfg and key != "seed":
            overrides[key] = file_cfg[key]

    family = args.kernel or file_cfg.get("kernel")
    sigma = args.sigma if args.sigma is not None else file_cfg.get("sigma")
    if family is not None or sigma is not None:
        overrides["kernel"] = KernelSpec(
            family or GAUSSIAN, 1.0 if sigma is None else float(sigma)
        )

    flag_grids = (
        ("alpha_grid", args.alpha),
        ("n_grid", args.n),
        ("d_grid", args.d),
        ("shift_grid", args.shift),
        ("scale_grid", args.scale),
    )
    for key, values in flag_grids:
        if values:
            overrides[key] = tuple(values)

    overrides["seed"] = _resolve_seed(args.seed, file_cfg.get("seed"))
    if args.out is not None:
        overrides["output_path"] = args.out
    if args.format is not None:
        overrides["out_format"] = args.format
    return default_config(experiment, **overrides)


def _run_experiment(experiment, args):
    config = _build_config(experiment, args)
    rows = RUNNERS[experiment](config)
    emit_results(rows, config.output_path, config.out_format)
    return 0


def _run_properties(args):
    file_cfg = _load_config_file(args.config) if args.config else {}
    seed = _resolve_seed(args.seed, file_cfg.get("seed"))
    sizes = tuple(args.n) if args.n else tuple(file_cfg.get("sizes", DEFAULT_SIZES))
    alphas = (
        tuple(args.alpha)
        if args.alpha
        else tuple(file_cfg.get("alpha_grid", DEFAULT_ALPHA_GRID))
    )
    n_seeds = args.seeds if args.seeds is not None else file_cfg.get("n_seeds", 20)
    reports = run_property_suite(
        seed=seed,
        sizes=sizes,
        alpha_grid=alphas,
        n_seeds=int(n_seeds),
        tamper=args.tamper,
    )
    payload = {
        "seed": seed,
        "sizes": list(sizes),
        "alpha_grid": [float(a) for a in alphas],
        "n_seeds": int(n_seeds),
        "tamper": args.tamper,
        "passed": all(r.passed for r in reports),
        "properties": [dataclasses.asdict(r) for r in reports],
    }
    text = json.dumps(payload, indent=1) + "\n"
    if args.out is None:
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)
    return 0 if payload["passed"] else 2


def build_parser():
    parser = argparse.ArgumentParser(
        prog="gramxent",
        description="Matrix-based cross-entropy experiments and self-checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in RUNNERS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        _add_experiment_flags(p)
    p = sub.add_parser("properties", help="run the invariant suite")
    p.add_argument("--alpha", type=float, action="append", default=None)
    p.add_argument("--n", type=int, action="append", default=None, help="matrix sizes")
    p.add_argument("--seeds", type=int, default=None, help="instances per size")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--tamper", choices=TAMPER_MODES, default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--config", default=None)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "properties":
            return _run_properties(args)
        return _run_experiment(args.command, args)
    except (GramxentError, OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"gramxent: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
