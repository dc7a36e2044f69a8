"""Central finite-difference gradients, used to audit backprop.

Nothing here touches the backward pass; the only shared code is ``forward``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .backprop import Gradient
from .core import Network, Sample, Threshold, forward
from .errors import NonDifferentiableError, ValidationError

ABS_TOL = 1e-6
REL_TOL = 1e-4


@dataclass(frozen=True)
class FiniteDiffConfig:
    epsilon: float = 1e-6
    scheme: str = "central"

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValidationError(f"epsilon must be positive, got {self.epsilon}")
        if self.scheme != "central":
            raise ValidationError("only central differences are supported")


def _loss(net: Network, sample: Sample) -> float:
    out = forward(net, sample.input).output
    total = 0.0
    for o, d in zip(out, sample.target):
        total += (o - d) * (o - d)
    return total


def finite_diff_gradient(
    net: Network, sample: Sample, cfg: FiniteDiffConfig = FiniteDiffConfig()
) -> Gradient:
    for k, layer in enumerate(net.layers):
        if isinstance(layer.activation, Threshold):
            raise NonDifferentiableError(f"layer {k} is a threshold layer")
    sample.check(net)

    eps = cfg.epsilon
    mats = [np.array(l.weights) for l in net.layers]
    out = []
    for k, w in enumerate(mats):
        g = np.zeros_like(w)
        rows, cols = w.shape
        for r in range(rows):
            for c in range(cols):
                orig = w[r, c]
                w[r, c] = orig + eps
                plus = _loss(net.with_weights(mats), sample)
                w[r, c] = orig - eps
                minus = _loss(net.with_weights(mats), sample)
                w[r, c] = orig
                g[r, c] = (plus - minus) / (2 * eps)
        out.append(g)
    return Gradient(tuple(out))


def compare(analytic: Gradient, numeric: Gradient) -> tuple[float, float, bool]:
    """Return (max abs deviation, max relative deviation, within tolerance).

    An entry passes when ``|a - n| <= max(ABS_TOL, REL_TOL * max(|a|, |n|))``.
    """
    a = analytic.flat()
    n = numeric.flat()
    if a.shape != n.shape:
        raise ValueError("gradients differ in shape")
    diff = np.abs(a - n)
    scale = np.maximum(np.abs(a), np.abs(n))
    with np.errstate(divide="ignore", invalid="ignore"):
        rel = np.where(scale > 0, diff / scale, 0.0)
    ok = bool(np.all(diff <= np.maximum(ABS_TOL, REL_TOL * scale)))
    return float(diff.max(initial=0.0)), float(rel.max(initial=0.0)), ok
