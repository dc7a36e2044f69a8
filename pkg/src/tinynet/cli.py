"""Command-line entry point: ``tinynet eval|train|gradcheck|exercise``.

Exit codes: 0 ok, 1 usage error, 2 I/O or parse error, 3 validation or
dimension error, 4 gradient check outside tolerance.
"""

from __future__ import annotations

import argparse
import sys

from . import exercises
from .backprop import FULL_BATCH, PER_SAMPLE, NetShape, TrainConfig, sample_gradient, train
from .core import forward
from .errors import (
    DimensionError,
    FormatParseError,
    NonDifferentiableError,
    ValidationError,
)
from .gradcheck import FiniteDiffConfig, compare, finite_diff_gradient
from .io import format_vector, load_dataset, load_network, parse_vector, save_network, write_trace

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_INVALID, EXIT_GRADCHECK = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _vector(text: str):
    try:
        return parse_vector(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _init_range(text: str) -> tuple[float, float]:
    v = _vector(text)
    if v.size != 2:
        raise argparse.ArgumentTypeError(f"expected LO,HI, got {text!r}")
    return float(v[0]), float(v[1])


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tinynet", description="Feed-forward networks trained by backpropagation.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ev = sub.add_parser("eval", help="evaluate a saved network on one input")
    ev.add_argument("--net", required=True)
    ev.add_argument("--input", required=True, type=_vector)

    tr = sub.add_parser("train", help="train a new network on a CSV dataset")
    tr.add_argument("--net-shape", required=True, help="e.g. 3-2s-3ib (s=sigmoid, i=identity, b=bias)")
    tr.add_argument("--data", required=True)
    tr.add_argument("--eta", type=float, default=TrainConfig.eta)
    tr.add_argument("--epochs", type=int, default=TrainConfig.max_epochs)
    tr.add_argument("--target-error", type=float, default=TrainConfig.target_error)
    tr.add_argument("--seed", type=int, default=TrainConfig.seed)
    tr.add_argument("--init-range", type=_init_range,
                    default=(TrainConfig.init_low, TrainConfig.init_high))
    tr.add_argument("--scheme", choices=[PER_SAMPLE, FULL_BATCH], default=PER_SAMPLE)
    tr.add_argument("--out", required=True)
    tr.add_argument("--trace")

    gc = sub.add_parser("gradcheck", help="compare backprop with finite differences")
    gc.add_argument("--net", required=True)
    gc.add_argument("--data", required=True)
    gc.add_argument("--epsilon", type=float, default=FiniteDiffConfig.epsilon)

    ex = sub.add_parser("exercise", help="run the built-in exercises")
    ex_sub = ex.add_subparsers(dest="exercise", required=True, parser_class=_Parser)
    e31 = ex_sub.add_parser("ex31", help="hand-weighted four-neuron network")
    e31.add_argument("--variant", choices=sorted(exercises.EX31_VARIANTS), default="all-ones")
    e31.add_argument("--input", type=_vector, help="omit to print the whole input table")
    e41 = ex_sub.add_parser("ex41", help="train the 3-2-3 network on its single sample")
    e41.add_argument("--seed", type=int, default=TrainConfig.seed)
    e41.add_argument("--eta", type=float, default=TrainConfig.eta)
    e41.add_argument("--out")
    e41.add_argument("--trace")
    return p


def _cmd_eval(args) -> int:
    net = load_network(args.net)
    print(format_vector(forward(net, args.input).output))
    return EXIT_OK


def _print_summary(net_out, report) -> None:
    print(f"epochs_run={report.epochs_run}")
    print(f"converged={str(report.converged).lower()}")
    print(f"final_error={report.final_error!r}")
    print(f"output={format_vector(net_out)}")


def _cmd_train(args) -> int:
    shape = NetShape.parse(args.net_shape)
    config = TrainConfig(
        eta=args.eta,
        max_epochs=args.epochs,
        target_error=args.target_error,
        seed=args.seed,
        init_low=args.init_range[0],
        init_high=args.init_range[1],
        update_scheme=args.scheme,
    )
    dataset = load_dataset(args.data, shape.input_dim, shape.layers[-1].n_neurons)
    net, report = train(shape, dataset, config)
    save_network(net, args.out)
    if args.trace:
        write_trace(report.error_trace, args.trace)
    _print_summary(forward(net, dataset[0].input).output, report)
    return EXIT_OK


def _cmd_gradcheck(args) -> int:
    net = load_network(args.net)
    dataset = load_dataset(args.data, net.input_dim, net.output_dim)
    if not dataset:
        raise ValidationError("dataset is empty")
    cfg = FiniteDiffConfig(epsilon=args.epsilon)
    worst_abs = worst_rel = 0.0
    ok = True
    for s in dataset:
        a, r, passed = compare(sample_gradient(net, s), finite_diff_gradient(net, s, cfg))
        worst_abs, worst_rel, ok = max(worst_abs, a), max(worst_rel, r), ok and passed
    print(f"max_abs_deviation={worst_abs:.3e}")
    print(f"max_rel_deviation={worst_rel:.3e}")
    print("ok" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_GRADCHECK


def _cmd_exercise(args) -> int:
    if args.exercise == "ex31":
        net = exercises.build_ex31(exercises.EX31_VARIANTS[args.variant]())
        if args.input is not None:
            print(format_vector(forward(net, args.input).output))
        else:
            inputs = exercises.EX31_INPUTS
            if args.variant == "and-or":
                inputs = ((0, 0), (0, 1), (1, 0), (1, 1))
            for x in inputs:
                print(f"{format_vector(x)} -> {format_vector(forward(net, x).output)}")
        return EXIT_OK

    net, report = exercises.run_ex41(TrainConfig(seed=args.seed, eta=args.eta))
    if args.out:
        save_network(net, args.out)
    if args.trace:
        write_trace(report.error_trace, args.trace)
    _print_summary(forward(net, exercises.EX41.sample.input).output, report)
    return EXIT_OK


_COMMANDS = {
    "eval": _cmd_eval,
    "train": _cmd_train,
    "gradcheck": _cmd_gradcheck,
    "exercise": _cmd_exercise,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except (OSError, FormatParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValidationError, DimensionError, NonDifferentiableError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
