"""Command line front end.

Exit codes: 0 success, 1 validation error, 2 I/O or file-format error,
3 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import __version__
from .accel import AccelConfig, run
from .bench import (
    DEFAULT_PARAMS,
    DEFAULT_RESTART,
    ExperimentConfig,
    NoiseSpec,
    add_noise,
    dump_report,
    phantom,
    report_dict,
    run_experiment,
)
from .errors import FormatError, NumericError, ValidationError
from .filters import make_filter
from .io import read_graph_signal, read_pgm, read_signal, write_signal
from .metrics import psnr

EXIT_OK, EXIT_VALIDATION, EXIT_IO, EXIT_NUMERIC = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="graphsmooth", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("phantom", help="write the Modified Shepp-Logan phantom as PGM")
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("addnoise", help="add seeded Gaussian noise to an image or graph signal")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--variance", type=float, default=0.01)
    p.add_argument("--mean", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-clip", action="store_true")

    p = sub.add_parser("denoise", help="run an accelerated self-guided filter")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--filter", choices=("bilateral", "guided", "tv"), required=True)
    p.add_argument("--accel", choices=("repeated", "pcg", "nesterov"), required=True)
    p.add_argument("--iters", type=int, required=True, help="total basic filter calls")
    p.add_argument("--restart-k", type=int, help=f"pcg restart length (default {DEFAULT_RESTART})")
    p.add_argument("--sigma-d", type=float)
    p.add_argument("--sigma-r", type=float)
    p.add_argument("--window", type=int)
    p.add_argument("--eps", type=float)
    p.add_argument("--clean", help="reference image; enables the PSNR trace")
    p.add_argument("--report", help="write a JSON report here")
    p.add_argument("--graph", action="store_true", help="input/output are GSIG graph signals")

    p = sub.add_parser("psnr", help="PSNR between two images or graph signals")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--peak", type=float, default=1.0)

    p = sub.add_parser("bench", help="run a JSON experiment config")
    p.add_argument("--config", required=True)
    return parser


_FILTER_FLAGS = {
    "bilateral": {"window": "window_width", "sigma_d": "sigma_d", "sigma_r": "sigma_r"},
    "guided": {"window": "window_width", "eps": "epsilon"},
    "tv": {"eps": "epsilon"},
}
_FLAG_NAMES = {"window": "--window", "sigma_d": "--sigma-d", "sigma_r": "--sigma-r", "eps": "--eps"}


def _filter_params(args):
    allowed = _FILTER_FLAGS[args.filter]
    params = dict(DEFAULT_PARAMS[args.filter])
    for flag, option in _FLAG_NAMES.items():
        value = getattr(args, flag)
        if value is None:
            continue
        if flag not in allowed:
            raise ValidationError(f"{option} does not apply to --filter {args.filter}")
        params[allowed[flag]] = value
    return params


def _accel_config(args):
    if args.iters < 1:
        raise ValidationError("--iters must be >= 1")
    if args.accel != "pcg":
        if args.restart_k is not None:
            raise ValidationError("--restart-k only applies to --accel pcg")
        return AccelConfig(args.accel, args.iters)
    k = DEFAULT_RESTART if args.restart_k is None else args.restart_k
    if k < 2:
        raise ValidationError("--restart-k must be >= 2")
    if args.iters % k:
        raise ValidationError(f"--iters {args.iters} is not a multiple of --restart-k {k}")
    return AccelConfig("pcg", k, args.iters // k)


def cmd_phantom(args):
    write_signal(args.out, phantom(args.size))
    return EXIT_OK


def cmd_addnoise(args):
    spec = NoiseSpec(args.mean, args.variance, args.seed, not args.no_clip)
    write_signal(args.out, add_noise(read_signal(args.input), spec))
    return EXIT_OK


def cmd_denoise(args):
    params = _filter_params(args)
    config = _accel_config(args)
    if args.graph and args.filter == "guided":
        raise ValidationError("the guided filter is not available with --graph")
    reader = read_graph_signal if args.graph else read_pgm
    noisy = reader(args.input)
    reference = None
    if args.clean is not None:
        reference = reader(args.clean)
        if reference.topology != noisy.topology:
            raise ValidationError("--clean does not match the input's size/graph")
    filt = make_filter(args.filter, noisy.topology, **params)
    report = run(filt, noisy, config, reference=reference)
    write_signal(args.out, report.output)
    if args.report is not None:
        echo = {
            "input": args.input,
            "filter": {"kind": args.filter, **params},
            "accel": {"kind": config.kind, "k_max": config.k_max, "l_max": config.l_max},
            "clean": args.clean,
            "graph": args.graph,
        }
        input_psnr = None if reference is None else psnr(reference, noisy)
        dump_report(report_dict(report, echo, input_psnr), args.report)
    if report.final_psnr is not None:
        print(f"calls={report.basic_filter_calls} psnr={report.final_psnr:.4f}")
    return EXIT_OK


def cmd_psnr(args):
    a = read_signal(args.a)
    b = read_signal(args.b)
    if a.topology != b.topology:
        raise ValidationError("inputs have different sizes or graphs")
    value = psnr(a, b, args.peak)
    print("inf" if math.isinf(value) else f"{value:.4f}")
    return EXIT_OK


def cmd_bench(args):
    config = ExperimentConfig.load(args.config)
    report, doc = run_experiment(config)
    if "report" not in config.outputs:
        print(json.dumps(doc, indent=2, sort_keys=True))
    elif report.final_psnr is not None:
        print(f"calls={report.basic_filter_calls} psnr={report.final_psnr:.4f}")
    return EXIT_OK


COMMANDS = {
    "phantom": cmd_phantom,
    "addnoise": cmd_addnoise,
    "denoise": cmd_denoise,
    "psnr": cmd_psnr,
    "bench": cmd_bench,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except ValidationError as exc:
        print(f"graphsmooth: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (FormatError, OSError) as exc:
        print(f"graphsmooth: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except NumericError as exc:
        print(f"graphsmooth: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
