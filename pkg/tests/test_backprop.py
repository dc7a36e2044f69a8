import numpy as np
import pytest

from conftest import random_network, random_sample
from tinynet import (
    IDENTITY,
    SIGMOID,
    DimensionError,
    Gradient,
    Layer,
    LayerShape,
    NetShape,
    Network,
    NonDifferentiableError,
    Sample,
    Threshold,
    TrainConfig,
    ValidationError,
    apply_update,
    backprop_gradient,
    finite_diff_gradient,
    forward,
    init_random,
    network_error,
    neuron_error,
    output_delta,
    sample_gradient,
    train,
    train_network,
)
from tinynet.exercises import EX41


def single_neuron(w=0.0):
    return Network((Layer(np.array([[w]]), IDENTITY),), 1)


class TestErrors:
    def test_neuron_error(self):
        assert neuron_error(0.7, 0.7) == 0
        assert neuron_error(1, 0) == 1
        # 0.2689414 ** 2
        assert neuron_error(0.7310586, 1) == pytest.approx(0.07232947663396, rel=1e-12)

    def test_network_error(self):
        assert network_error([0.2, 0.4], [0.2, 0.4]) == 0
        assert network_error([1, 0], [0, 1]) == 2
        assert network_error([0.5, 0.5, 0.5], [1, -1, 0]) == 2.75

    def test_network_error_dims(self):
        with pytest.raises(DimensionError):
            network_error([1, 2], [1])


class TestOutputDelta:
    def test_at_target(self):
        assert output_delta(0.3, 0.3, SIGMOID) == 0
        assert output_delta(0.3, 0.3, IDENTITY) == 0

    def test_sigmoid_half(self):
        assert output_delta(0.5, 0, SIGMOID) == 0.25

    @pytest.mark.parametrize("o", [0.0, 1.0])
    @pytest.mark.parametrize("d", [-1.0, 0.3, 2.0])
    def test_sigmoid_saturation(self, o, d):
        assert output_delta(o, d, SIGMOID) == 0

    def test_identity_keeps_factor_two(self):
        assert output_delta(0.75, 0.25, IDENTITY) == 2 * (0.75 - 0.25)

    def test_threshold_rejected(self):
        with pytest.raises(NonDifferentiableError):
            output_delta(1, 0, Threshold(0.5))


class TestBackpropGradient:
    def test_zero_at_target(self, rng):
        net = random_network(rng, n_layers=3)
        x = rng.uniform(-1, 1, net.input_dim)
        trace = forward(net, x)
        grad = backprop_gradient(net, trace, trace.output)
        assert all(np.all(g == 0) for g in grad)

    def test_dead_hidden_neuron(self):
        hidden = Layer(np.array([[0.3, -0.2, 0.1], [0.5, 0.4, -0.6]]), SIGMOID, True)
        # hidden neuron 0 feeds nothing downstream
        out = Layer(np.array([[0.0, 0.7, 0.2], [0.0, -0.3, 0.1]]), IDENTITY, True)
        net = Network((hidden, out), 2)
        grad = sample_gradient(net, Sample([0.4, -0.9], [1.0, -1.0]))
        assert np.all(grad.layers[0][0] == 0)
        assert np.any(grad.layers[0][1] != 0)

    def test_output_layer_formula(self):
        # single sigmoid layer: dE/dw_ji = 2 (O_j - d_j) O_j (1 - O_j) x_i
        w = np.array([[0.2, -0.4], [0.7, 0.1]])
        net = Network((Layer(w, SIGMOID),), 2)
        x, d = np.array([1.0, 0.5]), np.array([0.0, 1.0])
        o = 1 / (1 + np.exp(-(w @ x)))
        expected = np.outer(2 * (o - d) * o * (1 - o), x)
        np.testing.assert_allclose(sample_gradient(net, Sample(x, d)).layers[0], expected, rtol=1e-14)

    def test_ex41_matches_finite_differences(self):
        net = init_random(EX41.shape, TrainConfig(seed=7))
        analytic = sample_gradient(net, EX41.sample)
        numeric = finite_diff_gradient(net, EX41.sample)
        for a, n in zip(analytic, numeric):
            np.testing.assert_allclose(a, n, rtol=1e-6, atol=1e-9)

    def test_random_networks_match_finite_differences(self, rng):
        for _ in range(30):
            net = random_network(rng)
            s = random_sample(rng, net)
            a, n = sample_gradient(net, s).flat(), finite_diff_gradient(net, s).flat()
            assert np.all(np.abs(a - n) <= np.maximum(1e-6, 1e-4 * np.abs(n)))

    def test_threshold_layer_rejected(self):
        net = Network((Layer(np.ones((1, 1)), Threshold(0.0)),), 1)
        with pytest.raises(NonDifferentiableError):
            backprop_gradient(net, forward(net, [1.0]), [1.0])

    def test_target_dims(self):
        net = single_neuron()
        with pytest.raises(DimensionError):
            backprop_gradient(net, forward(net, [1.0]), [1.0, 2.0])


class TestApplyUpdate:
    def test_eta_zero(self, rng):
        net = random_network(rng)
        g = Gradient(tuple(np.ones_like(l.weights) for l in net.layers))
        assert apply_update(net, g, 0.0) == net

    def test_single_step(self):
        net = apply_update(single_neuron(0.0), Gradient((np.array([[0.25]]),)), 0.5)
        assert net.layers[0].weights[0, 0] == -0.125

    def test_zero_gradient(self, rng):
        net = random_network(rng)
        assert apply_update(net, Gradient.zeros_like(net), 0.7) == net

    def test_input_not_mutated(self):
        net = single_neuron(1.0)
        apply_update(net, Gradient((np.array([[1.0]]),)), 0.5)
        assert net.layers[0].weights[0, 0] == 1.0

    def test_shape_mismatch(self):
        with pytest.raises(DimensionError):
            apply_update(single_neuron(), Gradient((np.ones((2, 2)),)), 0.1)


class TestInitRandom:
    def test_deterministic(self):
        cfg = TrainConfig(seed=3)
        assert init_random(EX41.shape, cfg) == init_random(EX41.shape, cfg)

    def test_default_range(self):
        net = init_random(NetShape.parse("5-5s-5s-5ib"), TrainConfig(seed=11))
        w = np.concatenate([l.weights.ravel() for l in net.layers])
        assert w.min() >= -0.5 and w.max() <= 0.5

    def test_seeds_differ(self):
        assert init_random(EX41.shape, TrainConfig(seed=0)) != init_random(EX41.shape, TrainConfig(seed=1))

    def test_shapes(self):
        net = init_random(EX41.shape, TrainConfig())
        assert [l.weights.shape for l in net.layers] == [(2, 4), (3, 3)]


class TestNetShape:
    def test_parse(self):
        shape = NetShape.parse("3-2s-3i")
        assert shape == NetShape(3, (LayerShape(2, SIGMOID, False), LayerShape(3, IDENTITY, False)))

    def test_parse_bias(self):
        assert all(l.has_bias for l in NetShape.parse("3-2s-3ib").layers)

    @pytest.mark.parametrize("bad", ["", "3", "3-2", "3-2x", "0-1i", "3-0s", "a-2s"])
    def test_parse_errors(self, bad):
        with pytest.raises(ValidationError):
            NetShape.parse(bad)


class TestTrain:
    def test_hand_iterated_scalar(self):
        data = [Sample([1.0], [2.0])]
        cfg = TrainConfig(eta=0.25, max_epochs=1, target_error=0.0)
        net, report = train_network(single_neuron(0.0), data, cfg)
        assert net.layers[0].weights[0, 0] == 1.0
        net, _ = train_network(net, data, cfg)
        assert net.layers[0].weights[0, 0] == 1.5

    def test_scalar_error_trace_decreases(self):
        data = [Sample([1.0], [2.0])]
        _, report = train_network(single_neuron(0.0), data, TrainConfig(eta=0.25, max_epochs=20, target_error=0.0))
        # w_n = 2 - 2 * 0.5**n, so E_n = 4 * 0.25**n
        assert report.error_trace[:3] == [1.0, 0.25, 0.0625]
        assert all(b < a for a, b in zip(report.error_trace, report.error_trace[1:]))

    def test_eta_zero(self):
        cfg = TrainConfig(eta=0.0, max_epochs=5)
        net, report = train(EX41.shape, [EX41.sample], cfg)
        assert net == init_random(EX41.shape, cfg)
        assert len(set(report.error_trace)) == 1 and not report.converged
        assert report.epochs_run == 5

    def test_fixed_point(self):
        net = single_neuron(2.0)
        after, report = train_network(net, [Sample([1.0], [2.0])], TrainConfig(max_epochs=1))
        assert after == net and report.converged

    def test_full_batch_uses_summed_gradient(self, rng):
        net = random_network(rng, n_layers=2)
        data = [random_sample(rng, net) for _ in range(3)]
        after, _ = train_network(net, data, TrainConfig(eta=0.1, max_epochs=1, target_error=0, update_scheme="full_batch"))
        total = sample_gradient(net, data[0]) + sample_gradient(net, data[1]) + sample_gradient(net, data[2])
        assert after == apply_update(net, total, 0.1)

    def test_per_sample_updates_in_order(self, rng):
        net = random_network(rng, n_layers=2)
        data = [random_sample(rng, net) for _ in range(3)]
        after, _ = train_network(net, data, TrainConfig(eta=0.1, max_epochs=1, target_error=0))
        expected = net
        for s in data:
            expected = apply_update(expected, sample_gradient(expected, s), 0.1)
        assert after == expected

    def test_ex41_converges(self):
        net, report = train(EX41.shape, [EX41.sample], TrainConfig(seed=42))
        assert report.converged and report.final_error < 1e-3
        assert report.epochs_run == len(report.error_trace)

    def test_descent_small_eta(self):
        _, report = train(EX41.shape, [EX41.sample], TrainConfig(eta=0.01, max_epochs=100, target_error=0))
        assert all(b <= a + 1e-12 for a, b in zip(report.error_trace, report.error_trace[1:]))

    def test_deterministic(self):
        cfg = TrainConfig(seed=5)
        a = train(EX41.shape, [EX41.sample], cfg)
        b = train(EX41.shape, [EX41.sample], cfg)
        assert a[0] == b[0] and a[1] == b[1]

    def test_rejects_empty(self):
        with pytest.raises(ValidationError):
            train(EX41.shape, [], TrainConfig())

    def test_rejects_threshold(self):
        net = Network((Layer(np.ones((1, 1)), Threshold(0.0)),), 1)
        with pytest.raises(NonDifferentiableError):
            train_network(net, [Sample([1.0], [1.0])], TrainConfig())

    def test_rejects_bad_sample(self):
        with pytest.raises(DimensionError):
            train(EX41.shape, [Sample([1.0, 2.0], [1.0, 2.0, 3.0])], TrainConfig())


class TestTrainConfig:
    def test_defaults(self):
        cfg = TrainConfig()
        assert (cfg.eta, cfg.init_low, cfg.init_high, cfg.max_epochs, cfg.target_error) == (0.5, -0.5, 0.5, 10000, 1e-4)
        assert cfg.update_scheme == "per_sample"

    @pytest.mark.parametrize(
        "kwargs",
        [dict(eta=-0.1), dict(max_epochs=0), dict(init_low=1, init_high=1), dict(update_scheme="momentum"), dict(target_error=-1)],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ValidationError):
            TrainConfig(**kwargs)
