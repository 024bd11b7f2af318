"""Command-line interface: ``waveholtz {spectrum,iterate,sweep,verify}``.

Global flags select the config file, output directory, process count, and
the seed for property-test sampling.  File values override defaults and
``--set section.key=value`` flags override the file.  Exit codes: 0 on
success, 1 when a verification/acceptance property fails, 2 for
configuration or size errors, 3 for numerical failures (divergent iteration
or a singular frequency-domain oracle).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import load_config
from .errors import (
    ConfigurationError,
    DivergenceError,
    EigendecompositionError,
    ResonanceError,
    SizeLimitError,
    WaveHoltzError,
)
from .runner import run_iterate, run_spectrum, run_sweep, write_manifest
from .verify import run_checks


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="waveholtz",
        description="Helmholtz solutions from time-filtered wave solves, "
        "with spectral convergence diagnostics.",
    )
    parser.add_argument("--config", type=Path, default=None, help="INI recipe file")
    parser.add_argument("--out", type=Path, default=None,
                        help="output directory (default runs/<command>)")
    parser.add_argument("--workers", type=int, default=1,
                        help="process count for sweep points")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for property-test sampling")
    parser.add_argument("--set", dest="overrides", action="append", default=[],
                        metavar="SECTION.KEY=VALUE",
                        help="override a config value (repeatable)")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("spectrum", help="eigenvalue portrait or spectral sweep")
    sub.add_parser("iterate", help="run the fixed-point iteration at one frequency")
    sub.add_parser("sweep", help="iterate across a frequency sweep")
    p_verify = sub.add_parser("verify", help="run the property suites")
    p_verify.add_argument("level", nargs="?", default="quick", choices=["quick", "full"])
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out_dir = args.out if args.out is not None else Path("runs") / args.command
    try:
        if args.command == "verify":
            records = run_checks(level=args.level, seed=args.seed, out_dir=out_dir)
            cfg = load_config(args.config, args.overrides)
            write_manifest(out_dir, f"verify {args.level}", cfg, args.seed, args.workers,
                           [Path(out_dir) / "verify.csv"])
            failed = [r for r in records if not r["passed"]]
            for r in records:
                mark = "pass" if r["passed"] else "FAIL"
                print(f"[{mark}] {r['name']}: {r['detail']}")
            print(f"{len(records) - len(failed)}/{len(records)} checks passed")
            return 1 if failed else 0

        cfg = load_config(args.config, args.overrides)
        if args.command == "spectrum":
            summary = run_spectrum(cfg, out_dir, seed=args.seed, workers=args.workers)
            if "eps_star" in summary:
                print(
                    f"eps_star={summary['eps_star']:.6g} kappa={summary['kappa']:.6g} "
                    f"rho={summary['rho']:.6g}"
                )
            else:
                fits = " ".join(f"{k}:{v:+.3f}" for k, v in summary["fits"].items())
                print(f"fitted slopes {fits}")
        elif args.command == "iterate":
            summary = run_iterate(cfg, out_dir, seed=args.seed)
            if summary["converged_at_start"]:
                print("converged at start (zero first update)")
            elif summary["iterations_to_tol"] is not None:
                print(f"reached tolerance in {summary['iterations_to_tol']} iterations")
            else:
                print(f"tolerance not reached in {summary['n_iterations']} iterations")
        elif args.command == "sweep":
            summary = run_sweep(cfg, out_dir, seed=args.seed, workers=args.workers)
            fits = " ".join(f"{k}:{v:+.3f}" for k, v in summary["fits"].items())
            print(f"{len(summary['rows']) - summary['failures']} points ok, "
                  f"{summary['failures']} failed; fitted slopes {fits}")
            if summary["failures"]:
                return 3
        print(f"artifacts in {out_dir}")
        return 0
    except (ConfigurationError, SizeLimitError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (DivergenceError, ResonanceError, EigendecompositionError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except WaveHoltzError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
