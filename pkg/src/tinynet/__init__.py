"""Small feed-forward neural networks trained by backpropagation."""

from .backprop import (
    Gradient,
    LayerShape,
    NetShape,
    TrainConfig,
    TrainReport,
    apply_update,
    backprop_gradient,
    dataset_error,
    init_random,
    network_error,
    neuron_error,
    output_delta,
    sample_gradient,
    train,
    train_network,
)
from .core import (
    IDENTITY,
    SIGMOID,
    ForwardTrace,
    Identity,
    Layer,
    Network,
    Sample,
    Sigmoid,
    Threshold,
    apply_activation,
    forward,
    sigmoid,
    weighted_sum,
)
from .errors import (
    DimensionError,
    FormatParseError,
    FormatVersionError,
    NetworkError,
    NonDifferentiableError,
    ValidationError,
)
from .gradcheck import FiniteDiffConfig, finite_diff_gradient

__version__ = "0.1.0"
