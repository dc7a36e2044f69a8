"""Ready-made networks for two classic beginner exercises.

The first is a hand-weighted four-neuron summing network (two input neurons
with one weight each, fully connected to two output neurons that each scale
their sum by an output weight).  The second trains a 3-2-3 network on one
sample whose target contains -1, so the output layer is linear.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .backprop import LayerShape, NetShape, TrainConfig, TrainReport, train
from .core import IDENTITY, SIGMOID, Layer, Network, Sample, Threshold
from .errors import ValidationError

# Input rows listed for the all-ones network.
EX31_INPUTS = ((1, 1), (1, 0), (0, 1), (0, 0), (-1, 1), (-1, -1))


@dataclass(frozen=True)
class Ex31Weights:
    """Weights of the four-neuron network.

    ``cross_weights[j][i]`` links input neuron ``i`` to output neuron ``j``.
    ``thresholds`` is ``(in_1, in_2, out_1, out_2)`` when threshold mode is on.
    """

    input_weights: tuple[float, float] = (1.0, 1.0)
    cross_weights: tuple[tuple[float, float], tuple[float, float]] = ((1.0, 1.0), (1.0, 1.0))
    output_weights: tuple[float, float] = (1.0, 1.0)
    thresholds: Optional[tuple[float, float, float, float]] = None

    def __post_init__(self):
        arrays = [self.input_weights, self.cross_weights, self.output_weights]
        shapes = [(2,), (2, 2), (2,)]
        if self.thresholds is not None:
            arrays.append(self.thresholds)
            shapes.append((4,))
        for arr, shape in zip(arrays, shapes):
            a = np.asarray(arr, dtype=np.float64)
            if a.shape != shape or not np.all(np.isfinite(a)):
                raise ValidationError(f"expected finite values of shape {shape}, got {arr!r}")


def build_ex31(weights: Ex31Weights) -> Network:
    """Three stacked layers: per-input scaling, cross connections, per-output scaling.

    The scalar weights of the input and output neurons become diagonal
    matrices; thresholds, when given, sit on the input and cross layers.
    """
    in_act = out_act = IDENTITY
    if weights.thresholds is not None:
        t = weights.thresholds
        in_act = Threshold((t[0], t[1]))
        out_act = Threshold((t[2], t[3]))
    return Network(
        (
            Layer(np.diag(weights.input_weights), in_act),
            Layer(np.asarray(weights.cross_weights), out_act),
            Layer(np.diag(weights.output_weights), IDENTITY),
        ),
        input_dim=2,
    )


def ex31_all_ones() -> Ex31Weights:
    return Ex31Weights()


def ex31_swap() -> Ex31Weights:
    return Ex31Weights(cross_weights=((0.0, 1.0), (1.0, 0.0)))


def ex31_double() -> Ex31Weights:
    return Ex31Weights(cross_weights=((1.0, 0.0), (0.0, 1.0)), output_weights=(2.0, 2.0))


def ex31_and_or(theta_and: float = 1.5, theta_or: float = 0.5) -> Ex31Weights:
    """First output is AND, second is OR, for inputs in {0, 1}.

    Input thresholds of 0.5 pass 0 and 1 through unchanged.  Any
    ``1 <= theta_and < 2`` and ``0 <= theta_or < 1`` works.
    """
    return Ex31Weights(thresholds=(0.5, 0.5, theta_and, theta_or))


EX31_VARIANTS = {
    "all-ones": ex31_all_ones,
    "swap": ex31_swap,
    "double": ex31_double,
    "and-or": ex31_and_or,
}


@dataclass(frozen=True)
class Ex41Task:
    shape: NetShape = NetShape(
        3,
        (LayerShape(2, SIGMOID, True), LayerShape(3, IDENTITY, True)),
    )
    sample: Sample = Sample(np.array([1.0, 0.25, -0.5]), np.array([1.0, -1.0, 0.0]))


EX41 = Ex41Task()


def run_ex41(config: TrainConfig = TrainConfig()) -> tuple[Network, TrainReport]:
    return train(EX41.shape, [EX41.sample], config)
