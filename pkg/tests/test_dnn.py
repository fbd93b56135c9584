"""MLP forward/backward correctness, dataset generation, training behavior."""

import math

import numpy as np
import pytest

from ris_rqsm.channel import ChannelMatrix, coas_select, sample_channel
from ris_rqsm.dnn import (
    Dataset,
    MlpParams,
    TrainConfig,
    evaluate,
    forward,
    generate_dataset,
    init_params,
    load_checkpoint,
    loss_and_gradients,
    predict_labels,
    predict_subset,
    save_checkpoint,
    train,
)
from ris_rqsm.errors import ConfigurationError

from oracles import finite_difference_gradients


def zero_params(sizes, meta=None):
    weights = [np.zeros((a, b)) for a, b in zip(sizes, sizes[1:])]
    biases = [np.zeros(b) for b in sizes[1:]]
    return MlpParams(weights, biases, meta or {})


def relu_margin(params, x):
    """Smallest |pre-activation| across hidden layers, for kink-safe FD tests."""
    h = x
    margin = np.inf
    for w, b in zip(params.weights[:-1], params.biases[:-1]):
        z = h @ w + b
        margin = min(margin, float(np.min(np.abs(z))))
        h = np.maximum(z, 0.0)
    return margin


def safe_gradient_case(seed, sizes, batch):
    """Random params/inputs redrawn (deterministically) away from ReLU kinks."""
    for attempt in range(50):
        rng = np.random.default_rng(seed + 1000 * attempt)
        params = init_params(sizes, rng)
        x = rng.standard_normal((batch, sizes[0]))
        y = rng.integers(1, sizes[-1] + 1, size=batch)
        if relu_margin(params, x) > 1e-4:
            return params, x, y
    raise AssertionError("could not find a kink-free random case")


class TestForward:
    def test_zero_network_is_uniform(self):
        params = zero_params((4, 3, 6))
        probs = forward(params, np.ones(4))
        np.testing.assert_allclose(probs, np.full(6, 1 / 6), rtol=1e-15)

    def test_probabilities_sum_to_one(self):
        rng = np.random.default_rng(2)
        params = init_params((8, 5, 5, 3), rng)
        x = 10 * rng.standard_normal((40, 8))
        probs = forward(params, x)
        assert np.all(probs >= 0)
        np.testing.assert_allclose(probs.sum(axis=1), 1.0, atol=1e-12)

    def test_output_bias_shift_invariance(self):
        rng = np.random.default_rng(3)
        params = init_params((4, 6, 3), rng)
        x = rng.standard_normal(4)
        base = forward(params, x)
        params.biases[-1] += 7.5
        np.testing.assert_allclose(forward(params, x), base, atol=1e-12)

    def test_dimension_mismatch(self):
        params = zero_params((4, 3, 2))
        with pytest.raises(ValueError):
            forward(params, np.ones(5))


class TestLossAndGradients:
    def test_uniform_network_loss_is_log_classes(self):
        params = zero_params((4, 3, 6))
        x = np.random.default_rng(0).standard_normal((10, 4))
        y = np.ones(10, dtype=int)
        loss, _, _ = loss_and_gradients(params, x, y)
        assert loss == pytest.approx(math.log(6), rel=1e-12)

    def test_confident_correct_prediction_has_tiny_loss(self):
        params = zero_params((2, 2))
        params.weights[0] = np.array([[50.0, -50.0], [0.0, 0.0]])
        x = np.array([[1.0, 0.0]])
        loss, _, _ = loss_and_gradients(params, x, np.array([1]))
        assert loss < 1e-8

    @pytest.mark.parametrize("seed", range(8))
    def test_gradients_match_finite_differences(self, seed):
        sizes = (4, 3, 3, 2)
        params, x, y = safe_gradient_case(seed, sizes, batch=6)
        _, grads_w, grads_b = loss_and_gradients(params, x, y)
        fd_w, fd_b = finite_difference_gradients(
            lambda p: loss_and_gradients(p, x, y)[0], params
        )
        for g, fd in zip(grads_w + grads_b, fd_w + fd_b):
            # Components below ~1e-4 sit at the roundoff floor of central
            # differences (~1e-9 absolute at step 1e-6); hold those to the
            # floor instead of a meaningless relative ratio.
            denom = np.maximum(np.abs(g) + np.abs(fd), 1e-4)
            assert np.max(np.abs(g - fd) / denom) < 1e-5

    def test_empty_minibatch_rejected(self):
        params = zero_params((2, 2))
        with pytest.raises(ValueError):
            loss_and_gradients(params, np.empty((0, 2)), np.empty(0, dtype=int))


class TestDataset:
    def test_shapes_and_label_range(self):
        rng = np.random.default_rng(1)
        ds = generate_dataset(1000, 8, 4, 2, rng)
        assert ds.features.shape == (1000, 64)
        assert ds.labels.min() >= 1 and ds.labels.max() <= 6
        assert len(ds.train_idx) == 900 and len(ds.val_idx) == 100
        assert set(ds.val_idx) == set(range(900, 1000))

    def test_deterministic_under_seed(self):
        a = generate_dataset(500, 8, 4, 2, np.random.default_rng(7))
        b = generate_dataset(500, 8, 4, 2, np.random.default_rng(7))
        np.testing.assert_array_equal(a.features, b.features)
        np.testing.assert_array_equal(a.labels, b.labels)

    def test_labels_match_selection_oracle(self):
        rng = np.random.default_rng(2)
        n, n_rx, n_sel = 8, 4, 2
        ds = generate_dataset(200, n, n_rx, n_sel, rng)
        half = ds.features.shape[1] // 2
        for row, label in zip(ds.features, ds.labels):
            vec = row[:half] + 1j * row[half:]
            h = ChannelMatrix(vec.reshape(n_rx, n).T)
            assert coas_select(h, n_sel).subset.label == label

    def test_label_histogram_is_uniform(self):
        rng = np.random.default_rng(3)
        ds = generate_dataset(100_000, 8, 4, 2, rng)
        counts = np.bincount(ds.labels, minlength=7)[1:]
        p = 1 / 6
        sigma = math.sqrt(100_000 * p * (1 - p))
        assert np.all(np.abs(counts - 100_000 * p) < 3 * sigma)

    def test_zero_samples_rejected(self):
        with pytest.raises(ValueError):
            generate_dataset(0, 8, 4, 2, np.random.default_rng(0))


class TestTraining:
    def small_dataset(self, n=4000, seed=4):
        return generate_dataset(n, 8, 4, 2, np.random.default_rng(seed))

    def test_loss_decreases(self):
        ds = self.small_dataset()
        config = TrainConfig(n_samples=4000, epochs=3, hidden_layers=(32, 32), seed=0)
        result = train(ds, config)
        assert result.history["train_loss"][-1] < result.history["train_loss"][0]

    def test_beats_chance_quickly(self):
        # Ranking squared norms from raw coefficients is slow to learn at the
        # production learning rate; a hotter rate is fine for this smoke test.
        ds = self.small_dataset(n=8000)
        config = TrainConfig(
            n_samples=8000, epochs=12, hidden_layers=(64, 64),
            learning_rate=5e-3, augment_permutations=True, seed=1,
        )
        result = train(ds, config)
        assert result.history["val_acc"][-1] > 0.30  # chance is 1/6

    def test_separable_two_class_problem(self):
        rng = np.random.default_rng(5)
        x = rng.standard_normal((600, 2))
        labels = np.where(x[:, 0] + 0.5 * x[:, 1] > 0, 1, 2)
        x += 0.05 * np.sign(x[:, 0] + 0.5 * x[:, 1])[:, None]  # margin
        ds = Dataset(
            features=x, labels=labels,
            train_idx=np.arange(500), val_idx=np.arange(500, 600),
            n_reflectors=1, n_rx=2, n_sel=1,
        )
        config = TrainConfig(
            n_samples=600, epochs=60, minibatch=64, hidden_layers=(16,),
            learning_rate=5e-3, seed=2,
        )
        result = train(ds, config)
        assert result.history["train_acc"][-1] >= 0.99

    def test_training_is_deterministic(self):
        ds = self.small_dataset(n=1500)
        config = TrainConfig(n_samples=1500, epochs=2, hidden_layers=(16,), seed=9)
        a = train(ds, config)
        b = train(ds, config)
        for wa, wb in zip(a.params.weights, b.params.weights):
            np.testing.assert_array_equal(wa, wb)
        assert a.history == b.history

    def test_initial_loss_invariant_to_row_order(self):
        ds = self.small_dataset(n=1000)
        rng = np.random.default_rng(10)
        perm = rng.permutation(len(ds.train_idx))
        params = init_params((64, 16, 6), np.random.default_rng(3))
        base, _ = evaluate(params, ds.features[ds.train_idx], ds.labels[ds.train_idx])
        shuf, _ = evaluate(
            params, ds.features[ds.train_idx][perm], ds.labels[ds.train_idx][perm]
        )
        assert shuf == pytest.approx(base, rel=1e-10)

    def test_oversized_minibatch_rejected(self):
        ds = self.small_dataset(n=100)
        config = TrainConfig(n_samples=100, epochs=1, minibatch=256, hidden_layers=(8,))
        with pytest.raises(ConfigurationError):
            train(ds, config)

    def test_max_steps_caps_training(self):
        ds = self.small_dataset(n=2000)
        config = TrainConfig(
            n_samples=2000, epochs=50, minibatch=256, hidden_layers=(8,),
            max_steps=3, seed=0,
        )
        result = train(ds, config)
        assert len(result.history["train_loss"]) == 1

    def test_augmented_training_is_deterministic(self):
        ds = self.small_dataset(n=1500)
        config = TrainConfig(
            n_samples=1500, epochs=2, hidden_layers=(16,), seed=9,
            augment_permutations=True,
        )
        a = train(ds, config)
        b = train(ds, config)
        for wa, wb in zip(a.params.weights, b.params.weights):
            np.testing.assert_array_equal(wa, wb)

    def test_averaged_readout_is_deterministic_and_distinct(self):
        ds = self.small_dataset(n=1500)
        base = TrainConfig(n_samples=1500, epochs=2, hidden_layers=(16,), seed=9)
        avg = TrainConfig(n_samples=1500, epochs=2, hidden_layers=(16,), seed=9,
                          average_weights=True)
        raw = train(ds, base)
        ema1 = train(ds, avg)
        ema2 = train(ds, avg)
        for a, b in zip(ema1.params.weights, ema2.params.weights):
            np.testing.assert_array_equal(a, b)
        assert not np.array_equal(raw.params.weights[0], ema1.params.weights[0])

    def test_augmentation_requires_channel_features(self):
        ds = Dataset(
            features=np.random.default_rng(0).standard_normal((100, 3)),
            labels=np.ones(100, dtype=np.int64),
            train_idx=np.arange(90), val_idx=np.arange(90, 100),
            n_reflectors=8, n_rx=4, n_sel=2,
        )
        config = TrainConfig(
            n_samples=100, epochs=1, minibatch=32, hidden_layers=(8,),
            augment_permutations=True,
        )
        with pytest.raises(ConfigurationError):
            train(ds, config)


class TestPermutationTables:
    def test_permuted_views_keep_selection_semantics(self):
        from ris_rqsm.dnn import _permutation_tables

        n, n_rx, n_sel = 8, 4, 2
        feat_map, label_map = _permutation_tables(n, n_rx, n_sel)
        rng = np.random.default_rng(3)
        ds = generate_dataset(50, n, n_rx, n_sel, rng)
        half = ds.features.shape[1] // 2
        for pi in range(feat_map.shape[0]):
            permuted = ds.features[:, feat_map[pi]]
            relabeled = label_map[pi, ds.labels - 1] + 1
            for row, label in zip(permuted[:5], relabeled[:5]):
                vec = row[:half] + 1j * row[half:]
                h = ChannelMatrix(vec.reshape(n_rx, n).T)
                assert coas_select(h, n_sel).subset.label == label


class TestPrediction:
    def test_zero_network_breaks_ties_toward_first_label(self):
        params = zero_params((64, 8, 6), meta={"n_rx": 4, "n_sel": 2})
        h = sample_channel(8, 4, np.random.default_rng(0))
        assert predict_subset(params, h).indices == (1, 2)

    def test_prediction_is_pure(self):
        rng = np.random.default_rng(1)
        params = init_params((64, 16, 6), rng, meta={"n_rx": 4, "n_sel": 2})
        h = sample_channel(8, 4, rng)
        assert predict_subset(params, h) == predict_subset(params, h)

    def test_predict_labels_batch(self):
        params = zero_params((4, 3, 5))
        labels = predict_labels(params, np.ones((7, 4)))
        np.testing.assert_array_equal(labels, np.ones(7, dtype=int))

    def test_missing_meta_is_an_error(self):
        params = zero_params((64, 8, 6))
        h = sample_channel(8, 4, np.random.default_rng(0))
        with pytest.raises(ConfigurationError):
            predict_subset(params, h)


class TestEvaluate:
    def test_perfect_and_uniform_predictors(self):
        x = np.eye(3)
        labels = np.array([1, 2, 3])
        perfect = zero_params((3, 3))
        perfect.weights[0] = 100 * np.eye(3)
        _, acc = evaluate(perfect, x, labels)
        assert acc == 1.0
        uniform = zero_params((3, 3))
        loss, acc = evaluate(uniform, x, labels)
        assert loss == pytest.approx(math.log(3), rel=1e-12)

    def test_repeatable(self):
        rng = np.random.default_rng(6)
        params = init_params((5, 4, 3), rng)
        x = rng.standard_normal((50, 5))
        y = rng.integers(1, 4, size=50)
        assert evaluate(params, x, y) == evaluate(params, x, y)

    def test_empty_partition_rejected(self):
        with pytest.raises(ValueError):
            evaluate(zero_params((2, 2)), np.empty((0, 2)), np.empty(0, dtype=int))


class TestCheckpoint:
    def test_round_trip(self, tmp_path):
        rng = np.random.default_rng(8)
        params = init_params((10, 7, 4), rng, meta={"n_rx": 4, "n_sel": 2, "seed": 8})
        path = tmp_path / "model.npz"
        save_checkpoint(path, params)
        loaded = load_checkpoint(path)
        assert loaded.layer_sizes == params.layer_sizes
        assert loaded.meta == params.meta
        for a, b in zip(loaded.weights, params.weights):
            np.testing.assert_array_equal(a, b)

    def test_dimension_chain_validated(self, tmp_path):
        rng = np.random.default_rng(9)
        params = init_params((6, 5, 3), rng)
        path = tmp_path / "model.npz"
        save_checkpoint(path, params)
        import numpy as _np

        with _np.load(path) as data:
            arrays = dict(data)
        arrays["w1"] = np.zeros((99, 3))
        _np.savez(path, **arrays)
        with pytest.raises(ConfigurationError):
            load_checkpoint(path)
