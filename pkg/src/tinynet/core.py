"""Layered feed-forward networks and their forward evaluation.

A neuron computes the weighted sum of its inputs (its *activation*) and then
passes that through an output function: identity (a linear neuron), the
logistic sigmoid, or a hard threshold.  Neurons are grouped into layers and a
:class:`Network` is an ordered stack of layers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .errors import DimensionError, ValidationError


@dataclass(frozen=True)
class Identity:
    def __str__(self) -> str:
        return "identity"


@dataclass(frozen=True)
class Sigmoid:
    def __str__(self) -> str:
        return "sigmoid"


@dataclass(frozen=True)
class Threshold:
    """Hard step: 1 when the activation is strictly greater than ``theta``.

    ``theta`` is either one value shared by every neuron of the layer or a
    tuple with one value per neuron.
    """

    theta: Union[float, tuple[float, ...]]

    def __post_init__(self):
        if isinstance(self.theta, (list, tuple, np.ndarray)):
            values = tuple(float(t) for t in self.theta)
            if not values:
                raise ValidationError("threshold list must not be empty")
            object.__setattr__(self, "theta", values)
        else:
            values = (float(self.theta),)
            object.__setattr__(self, "theta", values[0])
        if not all(math.isfinite(t) for t in values):
            raise ValidationError(f"threshold must be finite, got {self.theta!r}")

    @property
    def per_neuron(self) -> bool:
        return isinstance(self.theta, tuple)

    def __str__(self) -> str:
        return f"threshold({self.theta})"


ActivationKind = Union[Identity, Sigmoid, Threshold]

IDENTITY = Identity()
SIGMOID = Sigmoid()


def sigmoid(a: float) -> float:
    # Split on sign so exp never overflows.
    if a >= 0:
        return 1.0 / (1.0 + math.exp(-a))
    e = math.exp(a)
    return e / (1.0 + e)


def _sigmoid_vec(a: np.ndarray) -> np.ndarray:
    out = np.empty_like(a)
    pos = a >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-a[pos]))
    e = np.exp(a[~pos])
    out[~pos] = e / (1.0 + e)
    return out


def weighted_sum(inputs: Sequence[float], weights: Sequence[float]) -> float:
    """Return sum_i inputs[i] * weights[i]."""
    if len(inputs) != len(weights):
        raise DimensionError(
            f"weighted_sum: {len(inputs)} inputs but {len(weights)} weights"
        )
    total = 0.0
    for x, w in zip(inputs, weights):
        total += float(x) * float(w)
    return total


def apply_activation(kind: ActivationKind, a: float) -> float:
    """Evaluate a scalar output function at activation ``a``."""
    if isinstance(kind, Sigmoid):
        return sigmoid(a)
    if isinstance(kind, Identity):
        return float(a)
    if isinstance(kind, Threshold):
        if kind.per_neuron:
            raise DimensionError(
                "per-neuron thresholds need a layer context; use activate()"
            )
        return 1.0 if a > kind.theta else 0.0
    raise TypeError(f"unknown activation kind {kind!r}")


def activate(kind: ActivationKind, a: np.ndarray) -> np.ndarray:
    """Vectorised :func:`apply_activation` over one layer's activations."""
    a = np.asarray(a, dtype=np.float64)
    if isinstance(kind, Sigmoid):
        return _sigmoid_vec(a)
    if isinstance(kind, Identity):
        return a.copy()
    if isinstance(kind, Threshold):
        theta = np.asarray(kind.theta, dtype=np.float64)
        if kind.per_neuron and theta.shape != a.shape:
            raise DimensionError(
                f"{theta.size} thresholds for a layer of {a.size} neurons"
            )
        return (a > theta).astype(np.float64)
    raise TypeError(f"unknown activation kind {kind!r}")


def _frozen(arr) -> np.ndarray:
    out = np.array(arr, dtype=np.float64, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class Layer:
    """One layer of neurons.

    ``weights[j, i]`` connects input ``i`` to neuron ``j``.  With ``has_bias``
    the last column multiplies a constant input of 1.0.
    """

    weights: np.ndarray
    activation: ActivationKind = IDENTITY
    has_bias: bool = False

    def __post_init__(self):
        w = _frozen(self.weights)
        if w.ndim != 2:
            raise ValidationError(f"layer weights must be 2-D, got shape {w.shape}")
        if not np.all(np.isfinite(w)):
            raise ValidationError("layer weights must all be finite")
        object.__setattr__(self, "weights", w)
        if self.n_neurons < 1 or self.n_inputs < 1:
            raise ValidationError(
                f"layer needs >= 1 neuron and >= 1 input, got weights {w.shape}"
                f" with has_bias={self.has_bias}"
            )
        act = self.activation
        if isinstance(act, Threshold) and act.per_neuron and len(act.theta) != self.n_neurons:
            raise ValidationError(
                f"{len(act.theta)} thresholds for a layer of {self.n_neurons} neurons"
            )

    @property
    def n_neurons(self) -> int:
        return self.weights.shape[0]

    @property
    def n_inputs(self) -> int:
        """Inputs excluding the bias column."""
        return self.weights.shape[1] - int(self.has_bias)

    def with_weights(self, weights) -> "Layer":
        return Layer(weights, self.activation, self.has_bias)

    def __eq__(self, other):
        if not isinstance(other, Layer):
            return NotImplemented
        return (
            self.activation == other.activation
            and self.has_bias == other.has_bias
            and np.array_equal(self.weights, other.weights)
        )


@dataclass(frozen=True, eq=False)
class Network:
    layers: tuple[Layer, ...]
    input_dim: int

    def __post_init__(self):
        layers = tuple(self.layers)
        object.__setattr__(self, "layers", layers)
        if not layers:
            raise ValidationError("a network needs at least one layer")
        if int(self.input_dim) < 1:
            raise ValidationError(f"input_dim must be positive, got {self.input_dim}")
        expected = int(self.input_dim)
        for k, layer in enumerate(layers):
            if layer.n_inputs != expected:
                raise ValidationError(
                    f"layer {k} takes {layer.n_inputs} inputs but receives {expected}"
                )
            expected = layer.n_neurons

    @property
    def output_dim(self) -> int:
        return self.layers[-1].n_neurons

    @property
    def differentiable(self) -> bool:
        return not any(isinstance(l.activation, Threshold) for l in self.layers)

    def with_weights(self, weights: Sequence[np.ndarray]) -> "Network":
        if len(weights) != len(self.layers):
            raise DimensionError(
                f"{len(weights)} weight matrices for {len(self.layers)} layers"
            )
        new_layers = []
        for layer, w in zip(self.layers, weights):
            if np.shape(w) != layer.weights.shape:
                raise DimensionError(
                    f"weight shape {np.shape(w)} != layer shape {layer.weights.shape}"
                )
            new_layers.append(layer.with_weights(w))
        return Network(tuple(new_layers), self.input_dim)

    def __call__(self, x) -> np.ndarray:
        return forward(self, x).output

    def __eq__(self, other):
        if not isinstance(other, Network):
            return NotImplemented
        return self.input_dim == other.input_dim and self.layers == other.layers


@dataclass(frozen=True)
class ForwardTrace:
    """Everything backprop needs from one forward pass.

    ``activations[k]`` and ``outputs[k]`` belong to layer ``k``; the input of
    layer ``k`` is ``outputs[k-1]`` (or ``input`` for the first layer).
    """

    input: np.ndarray
    activations: list[np.ndarray] = field(default_factory=list)
    outputs: list[np.ndarray] = field(default_factory=list)

    @property
    def output(self) -> np.ndarray:
        return self.outputs[-1]

    def layer_input(self, k: int) -> np.ndarray:
        return self.input if k == 0 else self.outputs[k - 1]


@dataclass(frozen=True, eq=False)
class Sample:
    input: np.ndarray
    target: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "input", _frozen(np.ravel(self.input)))
        object.__setattr__(self, "target", _frozen(np.ravel(self.target)))

    def check(self, net: Network) -> None:
        if self.input.size != net.input_dim:
            raise DimensionError(
                f"sample has {self.input.size} inputs, network expects {net.input_dim}"
            )
        if self.target.size != net.output_dim:
            raise DimensionError(
                f"sample has {self.target.size} targets, network outputs {net.output_dim}"
            )


def with_bias(x: np.ndarray, layer: Layer) -> np.ndarray:
    return np.append(x, 1.0) if layer.has_bias else x


def forward(net: Network, x) -> ForwardTrace:
    x = np.asarray(x, dtype=np.float64).ravel()
    if x.size != net.input_dim:
        raise DimensionError(f"input has {x.size} values, network expects {net.input_dim}")
    if not np.all(np.isfinite(x)):
        raise ValidationError("network input must be finite")
    trace = ForwardTrace(input=x)
    signal = x
    for layer in net.layers:
        a = layer.weights @ with_bias(signal, layer)
        signal = activate(layer.activation, a)
        trace.activations.append(a)
        trace.outputs.append(signal)
    return trace
