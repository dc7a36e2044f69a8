"""JSON model files, CSV datasets and CSV error traces."""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Sequence, Union

import numpy as np

from .core import IDENTITY, SIGMOID, Identity, Layer, Network, Sample, Sigmoid, Threshold
from .errors import FormatParseError, FormatVersionError, ValidationError

FORMAT_VERSION = 1

PathLike = Union[str, Path]


def _activation_to_json(kind):
    if isinstance(kind, Identity):
        return "identity"
    if isinstance(kind, Sigmoid):
        return "sigmoid"
    theta = kind.theta
    return {"threshold": list(theta) if kind.per_neuron else theta}


def _activation_from_json(value):
    if value == "identity":
        return IDENTITY
    if value == "sigmoid":
        return SIGMOID
    if isinstance(value, dict) and set(value) == {"threshold"}:
        theta = value["threshold"]
        if isinstance(theta, list):
            if not all(isinstance(t, (int, float)) and not isinstance(t, bool) for t in theta):
                raise ValidationError(f"non-numeric threshold {theta!r}")
        elif isinstance(theta, bool) or not isinstance(theta, (int, float)):
            raise ValidationError(f"non-numeric threshold {theta!r}")
        return Threshold(theta)
    raise ValidationError(f"unknown activation {value!r}")


def network_to_dict(net: Network) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "input_dim": net.input_dim,
        "layers": [
            {
                "activation": _activation_to_json(layer.activation),
                "has_bias": layer.has_bias,
                "weights": layer.weights.tolist(),
            }
            for layer in net.layers
        ],
    }


def network_from_dict(doc) -> Network:
    if not isinstance(doc, dict):
        raise FormatParseError("model document must be a JSON object")
    if doc.get("format_version") != FORMAT_VERSION:
        raise FormatVersionError(f"unsupported format_version {doc.get('format_version')!r}")
    try:
        input_dim = doc["input_dim"]
        raw_layers = doc["layers"]
    except KeyError as exc:
        raise FormatParseError(f"model document is missing {exc}") from None
    if not isinstance(input_dim, int) or isinstance(input_dim, bool):
        raise ValidationError(f"input_dim must be an integer, got {input_dim!r}")
    if not isinstance(raw_layers, list):
        raise FormatParseError("'layers' must be a list")

    layers = []
    for k, raw in enumerate(raw_layers):
        if not isinstance(raw, dict) or not {"activation", "has_bias", "weights"} <= set(raw):
            raise FormatParseError(f"layer {k} needs activation, has_bias and weights")
        if not isinstance(raw["has_bias"], bool):
            raise ValidationError(f"layer {k}: has_bias must be true or false")
        rows = raw["weights"]
        if (
            not isinstance(rows, list)
            or not rows
            or not all(isinstance(r, list) for r in rows)
            or len({len(r) for r in rows}) != 1
        ):
            raise ValidationError(f"layer {k}: weights must be a non-empty rectangular 2-D array")
        for r in rows:
            for v in r:
                if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                    raise ValidationError(f"layer {k}: weight {v!r} is not a finite number")
        layers.append(Layer(np.array(rows, dtype=np.float64),
                            _activation_from_json(raw["activation"]), raw["has_bias"]))
    return Network(tuple(layers), input_dim)


def dumps_network(net: Network) -> str:
    # json writes floats with repr(), the shortest string that round-trips exactly.
    return json.dumps(network_to_dict(net), indent=2) + "\n"


def loads_network(text: str) -> Network:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatParseError(f"invalid JSON: {exc}") from None
    return network_from_dict(doc)


def save_network(net: Network, path: PathLike) -> None:
    Path(path).write_text(dumps_network(net))


def load_network(path: PathLike) -> Network:
    return loads_network(Path(path).read_text())


def dataset_header(n_inputs: int, n_outputs: int) -> list[str]:
    return [f"x{i}" for i in range(1, n_inputs + 1)] + [f"d{j}" for j in range(1, n_outputs + 1)]


def parse_dataset(text: str, n_inputs: int, n_outputs: int) -> list[Sample]:
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(f.strip() for f in r)]
    if not rows:
        raise FormatParseError("dataset has no header row")
    header = [h.strip() for h in rows[0]]
    expected = dataset_header(n_inputs, n_outputs)
    if header != expected:
        raise FormatParseError(f"dataset header {','.join(header)!r} != {','.join(expected)!r}")
    samples = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise FormatParseError(
                f"line {lineno}: {len(row)} fields, header has {len(header)}"
            )
        try:
            values = [float(f) for f in row]
        except ValueError:
            raise FormatParseError(f"line {lineno}: non-numeric field in {row!r}") from None
        if not all(math.isfinite(v) for v in values):
            raise FormatParseError(f"line {lineno}: non-finite value")
        samples.append(Sample(np.array(values[:n_inputs]), np.array(values[n_inputs:])))
    return samples


def load_dataset(path: PathLike, n_inputs: int, n_outputs: int) -> list[Sample]:
    return parse_dataset(Path(path).read_text(), n_inputs, n_outputs)


def write_dataset(samples: Sequence[Sample], path: PathLike) -> None:
    n_in, n_out = samples[0].input.size, samples[0].target.size
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(dataset_header(n_in, n_out))
        for s in samples:
            w.writerow([repr(float(v)) for v in (*s.input, *s.target)])


def write_trace(error_trace: Sequence[float], path: PathLike) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["epoch", "error"])
        for epoch, err in enumerate(error_trace, start=1):
            w.writerow([epoch, repr(float(err))])


def read_trace(path: PathLike) -> list[tuple[int, float]]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return [(int(e), float(v)) for e, v in rows[1:]]


def format_vector(values) -> str:
    return ",".join(repr(float(v)) for v in values)


def parse_vector(text: str) -> np.ndarray:
    try:
        return np.array([float(p) for p in text.split(",")], dtype=np.float64)
    except ValueError:
        raise ValueError(f"expected comma-separated numbers, got {text!r}") from None
