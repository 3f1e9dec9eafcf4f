"""Command line entry point: ``squeezelab {verify,husimi,limits,state}``.

Exit codes: 0 success, 1 identity or truncation-guard failure, 2 usage,
config or I/O error.
"""
from __future__ import annotations

import argparse
import sys

from . import reports
from .fock_core import ExpmError, TruncationError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _common(parser: argparse.ArgumentParser) -> None:
    g = parser.add_argument_group("run configuration (flags override --config)")
    g.add_argument("--config", help="JSON file with n_levels, interior_buffer, expm_tol, compare_tol, output_dir")
    g.add_argument("--levels", "--n-levels", "--n_levels", dest="n_levels", type=int, help="basis size N")
    g.add_argument("--buffer", "--interior-buffer", "--interior_buffer", dest="interior_buffer", type=int,
                   help="edge levels excluded from comparisons (default N // 4)")
    g.add_argument("--out", "--output-dir", "--output_dir", dest="output_dir", help="output directory")
    g.add_argument("--compare-tol", "--compare_tol", dest="compare_tol", type=float)
    g.add_argument("--expm-tol", "--expm_tol", dest="expm_tol", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="squeezelab",
        description="Squeezed states and position eigenstates in a truncated Fock space.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run the identity suite and write verify.json")
    _common(p)

    p = sub.add_parser("husimi", help="sample the Husimi Q function of |x> on a grid")
    _common(p)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--re-min", "--re_min", dest="re_min", type=float, default=-4.0)
    p.add_argument("--re-max", "--re_max", dest="re_max", type=float, default=4.0)
    p.add_argument("--im-min", "--im_min", dest="im_min", type=float, default=-4.0)
    p.add_argument("--im-max", "--im_max", dest="im_max", type=float, default=4.0)
    p.add_argument("--n-re", "--n_re", dest="n_re", type=int, default=81)
    p.add_argument("--n-im", "--n_im", dest="n_im", type=int, default=81)
    p.add_argument("--no-figure", dest="figure", action="store_false", help="skip the PNG")

    p = sub.add_parser("limits", help="Yuen and Caves families as r grows")
    _common(p)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--r-list", "--r_list", dest="r_list", type=float, nargs="+",
                   default=list(reports.LIMIT_RS))
    p.add_argument("--no-figure", dest="figure", action="store_false", help="skip the PNG")

    p = sub.add_parser("state", help="dump state amplitudes as JSON")
    _common(p)
    p.add_argument("kind", choices=reports.STATE_KINDS)
    p.add_argument("--alpha", type=float, default=0.0, help="real part of alpha")
    p.add_argument("--alpha-im", "--alpha_im", dest="alpha_im", type=float, default=0.0)
    p.add_argument("--r", type=float, default=0.0)
    p.add_argument("--x", type=float, default=0.0)
    p.add_argument("--p", type=float, default=0.0)
    return parser


def _run(args) -> int:
    config = reports.load_config(
        args.config,
        n_levels=args.n_levels,
        interior_buffer=args.interior_buffer,
        output_dir=args.output_dir,
        compare_tol=args.compare_tol,
        expm_tol=args.expm_tol,
    )
    if args.command == "verify":
        bundle = reports.run_verify(config)
        paths = reports.write_verify(config, bundle)
        for name in bundle["failures"]:
            print(f"FAIL {name}", file=sys.stderr)
        status = EXIT_OK if bundle["passed"] else EXIT_FAIL
    elif args.command == "husimi":
        paths = reports.run_husimi(config, args.x, args.re_min, args.re_max, args.im_min, args.im_max,
                                   args.n_re, args.n_im, figure=args.figure)
        status = EXIT_OK
    elif args.command == "limits":
        paths = reports.run_limits(config, args.x, args.r_list, figure=args.figure)
        status = EXIT_OK
    else:
        paths = reports.run_state(config, args.kind, alpha=complex(args.alpha, args.alpha_im),
                                  r=args.r, x=args.x, p=args.p)
        status = EXIT_OK
    for path in paths:
        print(path)
    return status


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except (TruncationError, ExpmError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (ValueError, TypeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
