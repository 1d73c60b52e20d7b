"""Command-line entry point ``qbt``.

Subcommands::

    qbt analyze IN.qf4 [--config FILE] [--out DIR]
    qbt verify {plancherel,heisenberg,log,pitt,power} [--lambda L] [--m M] [--n N]
    qbt sparsity [--snr DB] [--seed S]
    qbt invert-sweep
    qbt example {5.1,5.2,5.3,5.4}

Each run writes JSON/CSV reports into ``--out`` and prints one line per
check.  The exit status is 0 iff every check of the invocation passes, 1 if
one fails and 2 on bad input.
"""

import argparse
import json
import os
import sys

from .boostlets import load_config, system_from_config
from .experiments import ExperimentConfig, run_experiment
from .io import read_qf4, write_json
from .quaternion import QField2D, field_norm_sq, make_grid
from .signals import make_gaussian_packet, reference_packet
from .transform import coverage_fraction, export_sweep, sweep
from .uncertainty import (
    check_heisenberg,
    check_logarithmic,
    check_pitt,
    check_power_uncertainty,
)

EXAMPLE_IDS = {"5.1": "ex51", "5.2": "ex52", "5.3": "ex53", "5.4": "ex54"}

# grid used when --grid is not given; the sparsity benchmark runs at 256^2
DEFAULT_GRID = {"ex51": 128, "ex52": 256, "ex53": 128, "ex54": 128}

_EXPERIMENT_KEYS = {"half_width": float, "threshold": float, "snr_db": float, "seed": int, "omega0": float}


def _read_config(path):
    return {} if path is None else load_config(path)


def _system(cfg):
    return system_from_config(cfg).calibrate()


def _experiment_config(args, exp_id, **overrides):
    raw = _read_config(args.config)
    kwargs = {k: t(raw[k]) for k, t in _EXPERIMENT_KEYS.items() if k in raw}
    kwargs.update(overrides)
    system = system_from_config(raw).params()
    n = args.grid if args.grid is not None else int(raw.get("grid", DEFAULT_GRID[exp_id]))
    return ExperimentConfig(n=n, system=system, out_dir=args.out, **kwargs)


def _report_checks(checks):
    for name, ok in checks.items():
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
    return 0 if all(checks.values()) else 1


def cmd_analyze(args):
    F = read_qf4(args.input)
    if not isinstance(F, QField2D):
        raise ValueError(f"{args.input} holds a spectrum, expected a QF4 field")
    system = _system(_read_config(args.config))
    manifest = export_sweep(F, system, args.out)
    with open(manifest) as fh:
        info = json.load(fh)
    ratio = info["energy"] / (system.delta_const * field_norm_sq(F))
    summary = {
        "input": args.input,
        "grid": list(F.shape),
        "delta": system.delta_const,
        "energy": info["energy"],
        "plancherel_ratio": ratio,
        "coverage": info["coverage"],
        "manifest": manifest,
    }
    write_json(os.path.join(args.out, "analyze.json"), summary)
    print(json.dumps(summary, indent=2))
    return 0


def _verify_field(args):
    if args.input is not None:
        return read_qf4(args.input)
    return make_gaussian_packet(reference_packet(), make_grid(args.grid, 4.0))


def cmd_verify(args):
    F = _verify_field(args)
    system = _system(_read_config(args.config))
    if args.kind == "plancherel":
        ratio = sweep(F, system) / (system.delta_const * field_norm_sq(F))
        report = {
            "kind": "Plancherel",
            "ratio": ratio,
            "delta": system.delta_const,
            "coverage": coverage_fraction(F, system),
            "pass": abs(ratio - 1) <= args.tol,
        }
    else:
        if args.kind == "heisenberg":
            rep = check_heisenberg(F, system)
        elif args.kind == "log":
            rep = check_logarithmic(F, system)
        elif args.kind == "pitt":
            rep = check_pitt(F, system, args.lam)
        else:
            rep = check_power_uncertainty(F, system, args.m, args.n)
        report = rep.to_dict()
    os.makedirs(args.out, exist_ok=True)
    write_json(os.path.join(args.out, f"verify_{args.kind}.json"), report)
    print(json.dumps(report, indent=2, default=float))
    return _report_checks({report["kind"]: bool(report["pass"])})


def _run(args, exp_id, **overrides):
    cfg = _experiment_config(args, exp_id, **overrides)
    summary = run_experiment(exp_id, cfg)
    print(f"{exp_id}: reports written to {cfg.out_dir}")
    return _report_checks(summary["checks"])


def cmd_sparsity(args):
    return _run(args, "ex52", snr_db=args.snr, seed=args.seed)


def cmd_invert_sweep(args):
    return _run(args, "ex54")


def cmd_example(args):
    return _run(args, EXAMPLE_IDS[args.id])


def build_parser():
    p = argparse.ArgumentParser(prog="qbt", description="Quaternion boostlet transform toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, grid=True):
        sp.add_argument("--config", help="key = value file with lattice parameters")
        sp.add_argument("--out", default="qbt_out", help="output directory (default: %(default)s)")
        if grid:
            sp.add_argument("--grid", type=int, help="grid size N for generated signals")

    sp = sub.add_parser("analyze", help="transform a QF4 field and export the coefficients")
    sp.add_argument("input", help="QF4 field file")
    common(sp, grid=False)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("verify", help="check Plancherel or an uncertainty inequality")
    sp.add_argument("kind", choices=["plancherel", "heisenberg", "log", "pitt", "power"])
    sp.add_argument("--lambda", dest="lam", type=float, default=0.5, help="Pitt exponent")
    sp.add_argument("--m", type=float, default=1.0, help="tau moment order")
    sp.add_argument("--n", type=float, default=1.0, help="frequency moment order")
    sp.add_argument("--input", help="QF4 field (default: the unit packet on [-4, 4)^2)")
    sp.add_argument("--tol", type=float, default=0.03, help="Plancherel tolerance")
    common(sp)
    sp.set_defaults(func=cmd_verify, grid=128)

    sp = sub.add_parser("sparsity", help="joint vs componentwise sparsity on the noisy two-packet signal")
    sp.add_argument("--snr", type=float, default=10.0, help="noise level in dB")
    sp.add_argument("--seed", type=int, default=ExperimentConfig.seed)
    common(sp)
    sp.set_defaults(func=cmd_sparsity)

    sp = sub.add_parser("invert-sweep", help="reconstruction error over widening lattices")
    common(sp)
    sp.set_defaults(func=cmd_invert_sweep)

    sp = sub.add_parser("example", help="run one of the four worked experiments")
    sp.add_argument("id", choices=sorted(EXAMPLE_IDS))
    common(sp)
    sp.set_defaults(func=cmd_example)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"qbt: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
