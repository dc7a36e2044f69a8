"""Squared-error loss, backpropagated gradients and gradient-descent training.

The loss keeps no 1/2 factor, so every gradient carries a factor of 2:
``E = sum_j (O_j - d_j)**2`` and ``dE/dO_j = 2 (O_j - d_j)``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .core import (
    IDENTITY,
    SIGMOID,
    ActivationKind,
    ForwardTrace,
    Identity,
    Layer,
    Network,
    Sample,
    Sigmoid,
    Threshold,
    forward,
    with_bias,
)
from .errors import DimensionError, NonDifferentiableError, ValidationError

PER_SAMPLE = "per_sample"
FULL_BATCH = "full_batch"


@dataclass(frozen=True, eq=False)
class Gradient:
    """dE/dw for every weight, one matrix per layer, shaped like the weights."""

    layers: tuple[np.ndarray, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "layers", tuple(np.asarray(g, dtype=np.float64) for g in self.layers)
        )

    @classmethod
    def zeros_like(cls, net: Network) -> "Gradient":
        return cls(tuple(np.zeros_like(l.weights) for l in net.layers))

    def __add__(self, other: "Gradient") -> "Gradient":
        if [g.shape for g in self.layers] != [g.shape for g in other.layers]:
            raise DimensionError("cannot add gradients of different shapes")
        return Gradient(tuple(a + b for a, b in zip(self.layers, other.layers)))

    def __iter__(self):
        return iter(self.layers)

    def __len__(self):
        return len(self.layers)

    def flat(self) -> np.ndarray:
        return np.concatenate([g.ravel() for g in self.layers])

    def check_congruent(self, net: Network) -> None:
        if len(self.layers) != len(net.layers) or any(
            g.shape != l.weights.shape for g, l in zip(self.layers, net.layers)
        ):
            raise DimensionError("gradient shape does not match the network")


@dataclass(frozen=True)
class TrainConfig:
    eta: float = 0.5
    max_epochs: int = 10_000
    target_error: float = 1e-4
    seed: int = 0
    init_low: float = -0.5
    init_high: float = 0.5
    update_scheme: str = PER_SAMPLE

    def __post_init__(self):
        if not (math.isfinite(self.eta) and self.eta >= 0):
            raise ValidationError(f"eta must be a finite non-negative number, got {self.eta}")
        if int(self.max_epochs) < 1:
            raise ValidationError(f"max_epochs must be >= 1, got {self.max_epochs}")
        if not self.target_error >= 0:
            raise ValidationError(f"target_error must be >= 0, got {self.target_error}")
        if not self.init_low < self.init_high:
            raise ValidationError(
                f"init range must satisfy low < high, got [{self.init_low}, {self.init_high}]"
            )
        if self.update_scheme not in (PER_SAMPLE, FULL_BATCH):
            raise ValidationError(f"unknown update scheme {self.update_scheme!r}")


@dataclass
class TrainReport:
    epochs_run: int = 0
    error_trace: list[float] = field(default_factory=list)
    converged: bool = False

    @property
    def final_error(self) -> float:
        return self.error_trace[-1]


@dataclass(frozen=True)
class LayerShape:
    n_neurons: int
    activation: ActivationKind = SIGMOID
    has_bias: bool = True


@dataclass(frozen=True)
class NetShape:
    """Architecture without weights: input width plus one entry per layer."""

    input_dim: int
    layers: tuple[LayerShape, ...]

    _TOKEN = re.compile(r"^(\d+)([si])$")

    @classmethod
    def parse(cls, spec: str) -> "NetShape":
        """Parse ``3-2s-3i`` style specs; a trailing ``b`` adds bias to every layer.

        >>> NetShape.parse("3-2s-3ib").layers[1]
        LayerShape(n_neurons=3, activation=Identity(), has_bias=True)
        """
        text = spec.strip()
        bias = text.endswith("b")
        if bias:
            text = text[:-1]
        parts = text.split("-")
        if len(parts) < 2 or not parts[0].isdigit() or int(parts[0]) < 1:
            raise ValidationError(f"bad network shape {spec!r}")
        layers = []
        for token in parts[1:]:
            m = cls._TOKEN.match(token)
            if not m or int(m.group(1)) < 1:
                raise ValidationError(f"bad layer token {token!r} in shape {spec!r}")
            kind = SIGMOID if m.group(2) == "s" else IDENTITY
            layers.append(LayerShape(int(m.group(1)), kind, bias))
        return cls(int(parts[0]), tuple(layers))

    def weight_shapes(self) -> list[tuple[int, int]]:
        shapes = []
        fan_in = self.input_dim
        for ls in self.layers:
            shapes.append((ls.n_neurons, fan_in + int(ls.has_bias)))
            fan_in = ls.n_neurons
        return shapes


def neuron_error(o: float, d: float) -> float:
    return (o - d) ** 2


def network_error(outputs, targets) -> float:
    outputs = np.asarray(outputs, dtype=np.float64).ravel()
    targets = np.asarray(targets, dtype=np.float64).ravel()
    if outputs.shape != targets.shape:
        raise DimensionError(f"{outputs.size} outputs vs {targets.size} targets")
    return float(np.sum((outputs - targets) ** 2))


def dataset_error(net: Network, dataset: Iterable[Sample]) -> float:
    """Network error summed over every sample."""
    return sum(network_error(forward(net, s.input).output, s.target) for s in dataset)


def output_delta(o: float, d: float, kind: ActivationKind) -> float:
    """dE/dA for an output neuron with output ``o`` and target ``d``."""
    if isinstance(kind, Sigmoid):
        return 2.0 * (o - d) * o * (1.0 - o)
    if isinstance(kind, Identity):
        return 2.0 * (o - d)
    raise NonDifferentiableError(f"no derivative for {kind}")


def _slope(kind: ActivationKind, out: np.ndarray) -> np.ndarray:
    # dO/dA written in terms of the output, as the sigmoid allows.
    if isinstance(kind, Sigmoid):
        return out * (1.0 - out)
    if isinstance(kind, Identity):
        return np.ones_like(out)
    raise NonDifferentiableError(f"no derivative for {kind}")


def _require_differentiable(net: Network) -> None:
    for k, layer in enumerate(net.layers):
        if isinstance(layer.activation, Threshold):
            raise NonDifferentiableError(f"layer {k} uses a threshold output and cannot be trained")


def backprop_gradient(net: Network, trace: ForwardTrace, target) -> Gradient:
    _require_differentiable(net)
    target = np.asarray(target, dtype=np.float64).ravel()
    if target.size != net.output_dim:
        raise DimensionError(f"target has {target.size} values, network outputs {net.output_dim}")
    if len(trace.outputs) != len(net.layers):
        raise DimensionError("trace does not belong to this network")

    grads: list[np.ndarray] = [None] * len(net.layers)
    last = net.layers[-1]
    out = trace.outputs[-1]
    delta = 2.0 * (out - target) * _slope(last.activation, out)
    for k in range(len(net.layers) - 1, -1, -1):
        layer = net.layers[k]
        x = with_bias(trace.layer_input(k), layer)
        grads[k] = np.outer(delta, x)
        if k == 0:
            break
        below = net.layers[k - 1]
        # Sum the error signal over every neuron this unit feeds; skip the bias column.
        signal = layer.weights[:, : layer.n_inputs].T @ delta
        delta = signal * _slope(below.activation, trace.outputs[k - 1])
    return Gradient(tuple(grads))


def sample_gradient(net: Network, sample: Sample) -> Gradient:
    sample.check(net)
    return backprop_gradient(net, forward(net, sample.input), sample.target)


def apply_update(net: Network, grad: Gradient, eta: float) -> Network:
    """Return a new network with every weight moved by ``-eta * dE/dw``."""
    grad.check_congruent(net)
    return net.with_weights([l.weights - eta * g for l, g in zip(net.layers, grad)])


def init_random(shape: NetShape, config: TrainConfig) -> Network:
    rng = np.random.default_rng(config.seed)
    layers = []
    for ls, wshape in zip(shape.layers, shape.weight_shapes()):
        w = rng.uniform(config.init_low, config.init_high, size=wshape)
        layers.append(Layer(w, ls.activation, ls.has_bias))
    return Network(tuple(layers), shape.input_dim)


def train_network(
    net: Network, dataset: Sequence[Sample], config: TrainConfig
) -> tuple[Network, TrainReport]:
    """Run gradient descent from the given starting weights."""
    if not dataset:
        raise ValidationError("cannot train on an empty dataset")
    _require_differentiable(net)
    for s in dataset:
        s.check(net)

    report = TrainReport()
    for epoch in range(config.max_epochs):
        if config.update_scheme == PER_SAMPLE:
            for s in dataset:
                net = apply_update(net, sample_gradient(net, s), config.eta)
        else:
            total = Gradient.zeros_like(net)
            for s in dataset:
                total = total + sample_gradient(net, s)
            net = apply_update(net, total, config.eta)
        err = dataset_error(net, dataset)
        report.error_trace.append(err)
        report.epochs_run = epoch + 1
        if err <= config.target_error:
            report.converged = True
            break
    return net, report


def train(
    shape: NetShape, dataset: Sequence[Sample], config: TrainConfig
) -> tuple[Network, TrainReport]:
    return train_network(init_random(shape, config), dataset, config)
