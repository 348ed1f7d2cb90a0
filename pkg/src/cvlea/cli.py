"""Command-line front end: ``cvlea classify | diagram | verify``.

Exit codes: 0 success, 1 bad arguments, 2 invalid channel, 3 failed checks.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import diagram as dg
from . import gaussian as g
from . import verify as vf
from . import witness as wt
from .errors import InvalidChannel

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_FAILED = 0, 1, 2, 3

DEFAULTS = {"cutoff": 30, "gamma": wt.DEFAULT_GAMMA, "r": g.LARGE_SQUEEZING, "tol": dg.DEFAULT_TOL}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def classify_report(kappa: float, mu: float) -> dict:
    p = g.make_channel(kappa, mu)
    thr = wt.corollary4_threshold(kappa)
    return {
        "kappa": p.kappa,
        "mu": p.mu,
        "valid": True,
        "mu_ql": p.mu_ql,
        "a": p.a,
        "eta": p.eta,
        "tau": p.tau,
        "quantum_limited": p.is_quantum_limited,
        "entanglement_breaking": g.is_entanglement_breaking(p),
        "nlea_gaussian": g.is_nlea_gaussian(p),
        "nongaussian_threshold": thr,
        "nongaussian_survivable": p.mu < thr,
    }


def cmd_classify(args) -> int:
    if (args.mu is None) == (args.extra_noise is None):
        print("error: give exactly one of MU or --extra-noise", file=sys.stderr)
        return EXIT_USAGE
    mu = args.mu if args.mu is not None else g.quantum_limited_noise(args.kappa) + args.extra_noise
    try:
        if args.extra_noise is not None and args.extra_noise < 0:
            raise InvalidChannel("extra noise must be nonnegative")
        report = classify_report(args.kappa, mu)
    except InvalidChannel as exc:
        if args.json:
            print(json.dumps({"kappa": args.kappa, "mu": mu, "valid": False, "error": str(exc)}))
        else:
            print(f"invalid channel: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True))
        return EXIT_OK
    print(f"channel Phi(kappa={report['kappa']:.12g}, mu={report['mu']:.12g})")
    print(f"  valid:                   yes")
    print(f"  quantum-limited noise:   {report['mu_ql']:.12g}")
    print(f"  extra noise a:           {report['a']:.12g}")
    print(f"  eta / tau:               {report['eta']:.12g} / {report['tau']:.12g}")
    print(f"  quantum limited:         {report['quantum_limited']}")
    print(f"  entanglement breaking:   {report['entanglement_breaking']}")
    print(f"  N-LEA on Gaussian input: {report['nlea_gaussian']}")
    print(
        f"  non-Gaussian survival:   {report['nongaussian_survivable']} "
        f"(threshold {report['nongaussian_threshold']:.12g})"
    )
    return EXIT_OK


def cmd_diagram(args) -> int:
    config = {
        "kind": args.kind,
        "tol": args.tol,
        "gamma": args.gamma,
        "r": args.r,
        "bisection": not args.no_bisection,
        "threads": args.threads,
    }
    kw = {"bisection": not args.no_bisection, "tol": args.tol, "threads": args.threads}
    if args.kind in ("fig1b", "fig3b"):
        grid = dg.default_kappa_grid(args.points, args.kappa_min, args.kappa_max)
        config.update(kappa_min=args.kappa_min, kappa_max=args.kappa_max, points=args.points)
    if args.kind == "fig1b":
        config["energies"] = args.energies
        curves = dg.curve_fig1b(args.energies, grid, **kw)
    elif args.kind == "fig3b":
        curves = dg.curve_fig3b(grid, gamma=args.gamma, **kw)
    else:
        if args.kappa1 is None or args.kappa2 is None:
            print(f"error: {args.kind} needs --kappa1 and --kappa2", file=sys.stderr)
            return EXIT_USAGE
        a_grid = [args.a_max * i / (args.points - 1) for i in range(args.points)]
        config.update(kappa1=args.kappa1, kappa2=args.kappa2, a_max=args.a_max, points=args.points)
        try:
            if args.kind == "fig2b":
                curves = dg.curve_fig2b(args.kappa1, args.kappa2, a_grid, r=args.r, **kw)
            else:
                curves = dg.curve_fig3a(args.kappa1, args.kappa2, a_grid, gamma=args.gamma, **kw)
        except InvalidChannel as exc:
            print(f"invalid channel: {exc}", file=sys.stderr)
            return EXIT_INVALID
    path = dg.export(curves, args.out, args.format, config=config)
    print("config: " + json.dumps(config, sort_keys=True))
    for c in curves:
        print(f"  {c.kind} ({c.method}): {len(c.samples)} samples")
    print(f"wrote {path}")
    return EXIT_OK


def cmd_verify(args) -> int:
    t0 = time.perf_counter()
    checks = vf.run_suite(args.suite, cutoff=args.cutoff)
    elapsed = time.perf_counter() - t0
    ok = all(c.passed for c in checks)
    if args.json:
        print(json.dumps({"suite": args.suite, "passed": ok, "seconds": elapsed,
                          "checks": [c.as_dict() for c in checks]}, indent=2))
    else:
        for c in checks:
            print(c.line())
        print(f"{sum(c.passed for c in checks)}/{len(checks)} passed in {elapsed:.1f}s")
    return EXIT_OK if ok else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="cvlea", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("classify", help="classify a one-mode channel Phi(kappa, mu)")
    c.add_argument("kappa", type=float)
    c.add_argument("mu", type=float, nargs="?", help="total noise (or use --extra-noise)")
    c.add_argument("--extra-noise", "-a", type=float, dest="extra_noise", help="noise above the quantum limit")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_classify)

    d = sub.add_parser("diagram", help="export boundary curves as CSV or JSON")
    d.add_argument("kind", choices=["fig1b", "fig2b", "fig3a", "fig3b"])
    d.add_argument("--out", required=True)
    d.add_argument("--format", choices=["csv", "json"], help="defaults to the file extension")
    d.add_argument("--energies", type=_floats, default=[0.1, 1.0, 10.0])
    d.add_argument("--kappa1", type=float)
    d.add_argument("--kappa2", type=float)
    d.add_argument("--kappa-min", type=float, default=0.05)
    d.add_argument("--kappa-max", type=float, default=8.0)
    d.add_argument("--a-max", type=float, default=1.0)
    d.add_argument("--points", type=int, default=101)
    d.add_argument("--gamma", type=float, default=DEFAULTS["gamma"])
    d.add_argument("--r", type=float, default=DEFAULTS["r"])
    d.add_argument("--tol", type=float, default=DEFAULTS["tol"])
    d.add_argument("--no-bisection", action="store_true")
    d.add_argument("--threads", type=int, default=None, help=f"default: ${dg.THREADS_ENV} or all cores")
    d.set_defaults(func=cmd_diagram)

    v = sub.add_parser("verify", help="run acceptance checks")
    v.add_argument("suite", nargs="?", default="all", choices=["gaussian", "fock", "witness", "all"])
    v.add_argument("--cutoff", type=int, default=None, help="override the Fock cutoff of the checks")
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "points", 2) < 2:
        print("error: --points must be >= 2", file=sys.stderr)
        return EXIT_USAGE
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
