"""Command-line entry points: profile tables, runs, sweeps, verdict gating."""

from __future__ import annotations

import argparse
import dataclasses
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import diagnostics as diag
from . import geometry as geo
from . import harness
from .profile import WeightSpec, solve_profile, write_profile_csv


def _resolve_path(raw: str) -> Path:
    path = Path(raw)
    root = os.environ.get("ACFLOW_OUTPUT_ROOT")
    if root and not path.is_absolute():
        path = Path(root) / path
    return path


def _print_verdicts(verdicts) -> None:
    for v in verdicts:
        status = "PASS" if v.passed else "FAIL"
        print(f"{status} {v.check:24s} measured {v.measured:.6g} "
              f"vs {v.threshold:.6g}  {v.note}")


def _cmd_profile(args) -> int:
    sol = solve_profile(args.epsilon, weight=WeightSpec(c=args.weight_c))
    out = _resolve_path(args.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_profile_csv(sol, out, stride=args.stride)
    print(f"wrote {out}")
    return 0


def _cmd_evolve(args) -> int:
    cfg = harness.read_config(args.config)
    eps = cfg.epsilons[0] if args.epsilon is None else float(args.epsilon)
    cfg = dataclasses.replace(cfg, epsilons=(eps,))
    res = harness.run_experiment(cfg, with_global_checks=False)
    print(f"run artifacts in {res.run_dirs[0]}")
    return 0


def _cmd_sweep(args) -> int:
    cfg = harness.read_config(args.config)
    res = harness.run_experiment(cfg, workers=args.workers)
    for d in res.run_dirs:
        print(f"run dir {d}")
    return 0


def _cmd_verify(args) -> int:
    cfg = harness.read_config(args.config)
    res = harness.run_experiment(cfg, workers=args.workers)
    _print_verdicts(res.verdicts)
    n_fail = sum(1 for v in res.verdicts if not v.passed)
    print(f"{len(res.verdicts) - n_fail}/{len(res.verdicts)} checks passed")
    return 0 if n_fail == 0 else 1


def _cmd_kernel_check(args) -> int:
    rng = np.random.default_rng(args.seed)
    rho = rng.uniform(0.0, 2.0, args.samples)
    t = rng.uniform(0.0, 0.95, args.samples)
    ident = float(np.abs(diag.kernel_radial_identity(rho, 1.0, t)).max())
    print(f"radial identity sup over {args.samples} samples: "
          f"{ident:.3e} (cap 1e-12)")
    worst = 0.0
    cases = (("flat", geo.flat_torus(1.0), (0.5, 0.5), 0.25),
             ("sphere", geo.unit_sphere(), (1.2, 2.0), 0.7),
             ("hyperbolic", geo.hyperbolic_disk(2.2), (0.9, 1.0), 0.9))
    for name, form, pole, r0 in cases:
        k = diag.KernelSpec(form=form, pole=pole, s=0.02, r0=r0)
        back = 0.015
        sup = 0.0
        for off in rng.uniform(0.01, 0.49 * r0, 25):
            x = (pole[0] + off, pole[1])
            val, d_t, lap = diag.kernel_evaluate(k, x, 0.005)
            d = geo.geodesic_distance(form, pole, x)
            if form.kappa == 0:
                pred = -val / (2.0 * back)
            elif form.kappa == 1:
                pred = -val * d / math.tan(d) / (2.0 * back)
            else:
                pred = -val * d / math.tanh(d) / (2.0 * back)
            sup = max(sup, abs(d_t + lap - pred) / abs(pred))
        worst = max(worst, sup)
        print(f"heat operator closed form, {name}: rel err {sup:.3e}")
    ok = ident <= 1e-12 and worst <= 1e-10
    print("kernel-check:", "PASS" if ok else "FAIL")
    return 0 if ok else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="acflow",
        description="Phase-field interface flows on curved surfaces: "
                    "profile tables, sweeps, and verdict gating.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("profile",
                       help="solve the 1-d standing profile, write its CSV table")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--weight-c", type=float, default=0.0)
    p.add_argument("--output", default="profile.csv")
    p.add_argument("--stride", type=int, default=1)
    p.set_defaults(func=_cmd_profile)

    p = sub.add_parser("evolve",
                       help="run one sweep member, write its run directory")
    p.add_argument("--config", required=True)
    p.add_argument("--epsilon", type=float, default=None)
    p.set_defaults(func=_cmd_evolve)

    p = sub.add_parser("sweep",
                       help="run every sweep member, write all run directories")
    p.add_argument("--config", required=True)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("verify",
                       help="run the sweep and gate on the verdict set")
    p.add_argument("--config", required=True)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("kernel-check",
                       help="spot-check kernel identities at random samples")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_kernel_check)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except harness.ConfigError as exc:
        print("config errors:", file=sys.stderr)
        for problem in exc.problems:
            print(f"  - {problem}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
