"""Command-line front end.

Exit codes: 0 success, 2 usage, 3 numerical failure, 4 output not
writable, 5 malformed config file.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import __version__, _kernels, tables
from .errors import DomainError, NumericalError
from .figures import FIGURES
from .infotheory import CapacityParams, capacity_coherent, capacity_photon_number
from .noise import OUNoise, sigma_limit_correlated, sigma_ou, sigma_ou_quadrature
from .receiver import BinConvention
from .scan import (
    NOISE_CHOICES,
    ConfigError,
    PARAMETERS,
    RECEIVER_CHOICES,
    evaluate_point,
    parse_config,
    run_scan,
    spec_from_mapping,
)

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL, EXIT_OUTPUT, EXIT_CONFIG = 0, 2, 3, 4, 5

log = logging.getLogger("phasekey")


class UsageError(Exception):
    pass


def _add_noise_flags(p):
    p.add_argument("--noise", choices=NOISE_CHOICES, default=None)
    p.add_argument("--tau", type=float, default=None, help="rescaled time Gamma*t")
    p.add_argument("--lambda", dest="lam", type=float, default=None, help="OU noise strength")
    p.add_argument("--tau-e", dest="tau_e", type=float, default=None, help="OU correlation time")
    p.add_argument("--delta", type=float, default=None, help="OU detuning")


def _add_output_flags(p):
    p.add_argument("--format", choices=("csv", "json"), default=None)
    p.add_argument("--output", default=None, help="file path (default: stdout)")


def _add_channel_flags(p, receiver_choices, receiver_default):
    p.add_argument("--n", type=int, default=None, help="alphabet size")
    p.add_argument("--nbar", type=float, default=None, help="mean photon number of the seed")
    p.add_argument("--receiver", choices=receiver_choices, default=receiver_default)
    p.add_argument("--bin-offset", dest="bin_offset", type=float, default=None,
                   help="bin shift in units of the bin width, in [0, 1)")
    p.add_argument("--epsilon", type=float, default=None, help="series truncation tolerance")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--samples", type=int, default=None, help="add a Monte Carlo estimate")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="phasekey", description="Phase-keyed coherent-state channels under phase diffusion.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mi", help="mutual information at one parameter point")
    _add_channel_flags(p, ("canonical", "husimi-q"), None)
    _add_noise_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("scan", help="mutual information, capacities and ratios over a grid")
    _add_channel_flags(p, RECEIVER_CHOICES, None)
    _add_noise_flags(p)
    p.add_argument("--eta", type=float, default=None, help="coherent-channel transmissivity")
    p.add_argument("--sweep", action="append", default=[], metavar="NAME=VALUES",
                   help="start:stop:count or v1,v2,...; repeatable, first is the slowest axis")
    p.add_argument("--config", default=None, help="flat 'key = value' file; flags override it")
    p.add_argument("--jobs", type=int, default=None)
    _add_output_flags(p)

    p = sub.add_parser("sigma", help="accumulated phase variance sigma(tau)")
    _add_noise_flags(p)
    p.add_argument("--method", choices=("closed", "quadrature", "correlated-limit"), default="closed")
    _add_output_flags(p)

    p = sub.add_parser("capacity", help="reference channel capacities")
    p.add_argument("--nbar", type=float, required=True)
    p.add_argument("--eta", type=float, default=1.0)
    _add_output_flags(p)

    p = sub.add_parser("figure", help="data tables for the standard performance plots")
    p.add_argument("name", choices=sorted(FIGURES))
    p.add_argument("--bin-offset", dest="bin_offset", type=float, default=0.5)
    _add_output_flags(p)
    return parser


def _flag_mapping(args) -> dict:
    """Explicitly given flags, keyed by their config names."""
    names = {"n": "n", "nbar": "nbar", "tau": "tau", "lam": "lambda", "tau_e": "tau-e",
             "delta": "delta", "eta": "eta", "bin_offset": "bin-offset", "receiver": "receiver",
             "noise": "noise", "epsilon": "epsilon", "format": "format", "output": "output",
             "seed": "seed", "samples": "samples", "jobs": "jobs"}
    return {key: getattr(args, attr) for attr, key in names.items()
            if getattr(args, attr, None) is not None}


def _emit(rows, meta, args):
    fmt = args.format or "csv"
    if args.output:
        try:
            tables.write(args.output, rows, meta, fmt)
        except OSError as exc:
            raise OSError(f"cannot write {args.output}: {exc.strerror or exc}") from exc
    else:
        sys.stdout.write(tables.dumps(rows, meta, fmt))


def _check_noise_flags(args):
    noise = args.noise or "static"
    given = [f for f, v in (("--lambda", args.lam), ("--tau-e", args.tau_e), ("--delta", args.delta)) if v is not None]
    if noise == "static" and given:
        raise UsageError(f"{', '.join(given)} only apply to --noise ou")
    return noise


def cmd_mi(args):
    noise = _check_noise_flags(args)
    if args.seed is not None and not args.samples:
        raise UsageError("--seed only applies together with --samples")
    flags = _flag_mapping(args)
    params = {k: flags.get(k, default) for k, (_, default) in PARAMETERS.items()}
    receiver = args.receiver or "canonical"
    epsilon = args.epsilon if args.epsilon is not None else 1e-12
    seed = args.seed if args.seed is not None else 0
    row = evaluate_point(params, receiver, noise, epsilon, args.samples, seed if args.samples else None)
    mi_key = "I_C" if receiver == "canonical" else "I_Q"
    row = {**{k: v for k, v in row.items() if not k.startswith("I_")}, "receiver": receiver,
           "I": row[mi_key], **({"I_mc": row[mi_key + "_mc"]} if args.samples else {})}
    meta = {"version": __version__, "command": "mi", "epsilon": epsilon,
            "bin_offset": params["bin-offset"], "backend": _kernels.BACKEND}
    if args.samples:
        meta["seed"] = seed
    _emit([row], meta, args)


def cmd_scan(args):
    mapping = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                mapping.update(parse_config(fh.read()))
        except OSError as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc.strerror or exc}") from exc
    for key, value in _flag_mapping(args).items():
        mapping.pop(f"sweep.{key}", None)
        mapping[key] = value
    for item in args.sweep:
        name, sep, values = item.partition("=")
        if not sep:
            raise UsageError(f"--sweep expects NAME=VALUES, got {item!r}")
        mapping.pop(name.strip(), None)
        mapping[f"sweep.{name.strip()}"] = values
    try:
        spec = spec_from_mapping(mapping)
    except ConfigError as exc:
        if args.config:
            raise
        raise UsageError(str(exc)) from exc
    rows = run_scan(spec)
    args.format = spec.setting("format")
    args.output = spec.setting("output")
    _emit(rows, spec.meta(), args)


def cmd_sigma(args):
    noise = _check_noise_flags(args)
    tau = args.tau if args.tau is not None else 0.0
    row = {"noise": noise, "tau": tau}
    if noise == "static":
        if args.method != "closed":
            raise UsageError(f"--method {args.method} needs --noise ou")
        row["sigma"] = tau
    else:
        model = OUNoise(
            1.0 if args.lam is None else args.lam,
            1.0 if args.tau_e is None else args.tau_e,
            0.0 if args.delta is None else args.delta,
        )
        row.update({"lambda": model.lam, "tau-e": model.tau_e, "delta": model.delta})
        fn = {"closed": sigma_ou, "quadrature": sigma_ou_quadrature, "correlated-limit": sigma_limit_correlated}[args.method]
        row["method"] = args.method
        row["sigma"] = fn(model, tau)
    _emit([row], {"version": __version__, "command": "sigma"}, args)


def cmd_capacity(args):
    params = CapacityParams(args.eta, args.nbar)
    c_coh = capacity_coherent(params)
    c_phn = capacity_photon_number(args.nbar)
    row = {"nbar": args.nbar, "eta": args.eta, "C_COH": c_coh, "C_PHN": c_phn,
           "coh_over_phn": c_coh / c_phn if c_phn > 0 else None}
    _emit([row], {"version": __version__, "command": "capacity"}, args)


def cmd_figure(args):
    convention = BinConvention(args.bin_offset)
    rows = FIGURES[args.name](convention)
    meta = {"version": __version__, "command": "figure", "figure": args.name,
            "epsilon": 1e-12, "bin_offset": convention.fraction, "backend": _kernels.BACKEND}
    _emit(rows, meta, args)


COMMANDS = {"mi": cmd_mi, "scan": cmd_scan, "sigma": cmd_sigma, "capacity": cmd_capacity, "figure": cmd_figure}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        COMMANDS[args.command](args)
    except (UsageError, DomainError) as exc:
        parser.print_usage(sys.stderr)
        print(f"phasekey {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConfigError as exc:
        print(f"phasekey {args.command}: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"phasekey {args.command}: numerical failure: {exc} {exc.diagnostics}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"phasekey {args.command}: {exc}", file=sys.stderr)
        return EXIT_OUTPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
