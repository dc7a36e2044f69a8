import numpy as np
import pytest

from tinynet import IDENTITY, SIGMOID, Layer, Network, Sample


def random_network(rng, n_layers=None, max_width=5, bias=None, kinds=(SIGMOID, IDENTITY)):
    """Random differentiable network; widths, activations and bias flags are drawn per layer."""
    n_layers = n_layers or int(rng.integers(1, 4))
    input_dim = int(rng.integers(1, max_width + 1))
    layers = []
    fan_in = input_dim
    for _ in range(n_layers):
        width = int(rng.integers(1, max_width + 1))
        has_bias = bool(rng.integers(0, 2)) if bias is None else bias
        kind = kinds[int(rng.integers(0, len(kinds)))]
        w = rng.uniform(-1.5, 1.5, size=(width, fan_in + has_bias))
        layers.append(Layer(w, kind, has_bias))
        fan_in = width
    return Network(tuple(layers), input_dim)


def random_sample(rng, net):
    return Sample(rng.uniform(-1, 1, net.input_dim), rng.uniform(-1, 1, net.output_dim))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


_acceptance = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: exit criterion of the package")


def pytest_runtest_makereport(item, call):
    if item.get_closest_marker("acceptance") is None:
        return
    doc = (item.function.__doc__ or item.name).strip().splitlines()[0]
    failed = call.excinfo is not None
    prev = _acceptance.get(item.name, (doc, False))
    _acceptance[item.name] = (doc, prev[1] or failed)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_acceptance, key=lambda n: int(n.split("_")[2])):
        doc, failed = _acceptance[name]
        number = name.split("_")[2]
        terminalreporter.write_line(f"{'FAIL' if failed else 'PASS'}  [{number}] {doc}")
