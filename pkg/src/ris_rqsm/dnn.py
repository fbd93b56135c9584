"""Feed-forward subset classifier: dataset generation, training, inference.

A plain numpy MLP (ReLU hidden layers, softmax output) learns to imitate
the norm-based antenna selector from raw channel coefficients.  Training
is softmax cross-entropy under Adam, fully deterministic for a fixed seed.
No input preprocessing is applied; the real/imaginary channel parts are
fed directly.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field, asdict
from itertools import combinations

import numpy as np

from .channel import AntennaSubset, feature_dim, feature_vector, label_to_subset, n_subsets
from .errors import ConfigurationError

__all__ = [
    "MlpParams",
    "TrainConfig",
    "TrainResult",
    "Dataset",
    "DEFAULT_HIDDEN_LAYERS",
    "init_params",
    "forward",
    "loss_and_gradients",
    "train",
    "evaluate",
    "predict_subset",
    "predict_labels",
    "generate_dataset",
    "save_checkpoint",
    "load_checkpoint",
]

DEFAULT_HIDDEN_LAYERS = (256, 256, 256, 256)

CHECKPOINT_VERSION = 1


@dataclass
class MlpParams:
    """Layer weights/biases; weights[i] has shape (fan_in, fan_out)."""

    weights: list[np.ndarray]
    biases: list[np.ndarray]
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if len(self.weights) != len(self.biases):
            raise ValueError("weights and biases must pair up")
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.ndim != 2 or b.shape != (w.shape[1],):
                raise ValueError(f"layer {i}: weight {w.shape} and bias {b.shape} mismatch")
            if i > 0 and self.weights[i - 1].shape[1] != w.shape[0]:
                raise ValueError(
                    f"layer {i}: fan-in {w.shape[0]} != previous fan-out "
                    f"{self.weights[i - 1].shape[1]}"
                )

    @property
    def layer_sizes(self) -> tuple[int, ...]:
        return (self.weights[0].shape[0],) + tuple(w.shape[1] for w in self.weights)

    @property
    def n_inputs(self) -> int:
        return self.weights[0].shape[0]

    @property
    def n_outputs(self) -> int:
        return self.weights[-1].shape[1]

    def copy(self) -> "MlpParams":
        return MlpParams(
            [w.copy() for w in self.weights],
            [b.copy() for b in self.biases],
            dict(self.meta),
        )


@dataclass
class TrainConfig:
    """Hyperparameters for one training run."""

    n_samples: int = 1_000_000
    validation_fraction: float = 0.10
    minibatch: int = 256
    learning_rate: float = 5e-4
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    epochs: int = 400
    max_steps: int | None = None
    hidden_layers: tuple[int, ...] = DEFAULT_HIDDEN_LAYERS
    augment_permutations: bool = False
    augment_phases: bool = False
    average_weights: bool = False
    init: str = "auto"
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 < self.validation_fraction < 1.0:
            raise ConfigurationError("validation fraction must lie in (0, 1)")
        if self.n_samples < 1 or self.minibatch < 1 or self.epochs < 1:
            raise ConfigurationError("sample, minibatch and epoch counts must be positive")
        if self.learning_rate <= 0:
            raise ConfigurationError("learning rate must be positive")
        if self.max_steps is not None and self.max_steps < 1:
            raise ConfigurationError("max_steps must be positive when set")
        if self.init not in ("auto", "he-uniform", "antenna-blocks"):
            raise ConfigurationError(f"unknown init scheme {self.init!r}")

    def digest(self) -> str:
        payload = json.dumps(asdict(self), sort_keys=True, default=str)
        return hashlib.sha256(payload.encode()).hexdigest()[:16]


@dataclass
class Dataset:
    """Feature rows, 1-based labels, and the train/validation partition."""

    features: np.ndarray
    labels: np.ndarray
    train_idx: np.ndarray
    val_idx: np.ndarray
    n_reflectors: int
    n_rx: int
    n_sel: int

    def __post_init__(self) -> None:
        n = self.features.shape[0]
        if self.labels.shape != (n,):
            raise ValueError("one label per feature row required")
        joined = np.concatenate([self.train_idx, self.val_idx])
        if len(np.unique(joined)) != n or len(joined) != n:
            raise ValueError("train/validation partition must be disjoint and exhaustive")


@dataclass
class TrainResult:
    params: MlpParams
    history: dict


def generate_dataset(
    n_samples: int,
    n_reflectors: int,
    n_rx: int,
    n_sel: int,
    rng: np.random.Generator,
    validation_fraction: float = 0.10,
) -> Dataset:
    """Draw channels, label each with the norm-based selection, stack features.

    The last ``validation_fraction`` of the rows (in generation order) form
    the validation split.
    """
    if n_samples < 1:
        raise ValueError("need at least one sample")
    if not 0.0 < validation_fraction < 1.0:
        raise ConfigurationError("validation fraction must lie in (0, 1)")
    p = feature_dim(n_reflectors, n_rx)
    features = np.empty((n_samples, p))
    labels = np.empty(n_samples, dtype=np.int64)
    block = 8192
    start = 0
    ranks = _subset_rank_lut(n_rx, n_sel)
    while start < n_samples:
        b = min(block, n_samples - start)
        h = (
            rng.standard_normal((b, n_reflectors, n_rx))
            + 1j * rng.standard_normal((b, n_reflectors, n_rx))
        ) / np.sqrt(2.0)
        # Column-major vectorization per sample: all of column 1, then column 2, ...
        vec = h.transpose(0, 2, 1).reshape(b, n_reflectors * n_rx)
        features[start : start + b, :p // 2] = vec.real
        features[start : start + b, p // 2 :] = vec.imag
        norms = np.sum(np.abs(h) ** 2, axis=1)
        top = np.sort(np.argsort(-norms, axis=1, kind="stable")[:, :n_sel], axis=1)
        labels[start : start + b] = ranks[tuple(top.T)]
        start += b
    n_val = int(round(n_samples * validation_fraction))
    n_val = min(max(n_val, 0), n_samples - 1)
    return Dataset(
        features=features,
        labels=labels,
        train_idx=np.arange(0, n_samples - n_val),
        val_idx=np.arange(n_samples - n_val, n_samples),
        n_reflectors=n_reflectors,
        n_rx=n_rx,
        n_sel=n_sel,
    )


def _subset_rank_lut(n_rx: int, n_sel: int) -> np.ndarray:
    """Dense lookup from sorted 0-based index tuples to the 1-based label."""
    lut = np.zeros((n_rx,) * n_sel, dtype=np.int64)
    for rank, combo in enumerate(combinations(range(n_rx), n_sel), start=1):
        lut[combo] = rank
    return lut


def init_params(
    layer_sizes, rng: np.random.Generator, meta: dict | None = None
) -> MlpParams:
    """He-style scaled uniform weights (variance 2/fan_in), zero biases."""
    sizes = [int(s) for s in layer_sizes]
    if len(sizes) < 2:
        raise ValueError("need input and output sizes at minimum")
    weights, biases = [], []
    for fan_in, fan_out in zip(sizes, sizes[1:]):
        limit = math.sqrt(6.0 / fan_in)
        weights.append(rng.uniform(-limit, limit, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    return MlpParams(weights, biases, meta or {})


def selector_init_params(
    layer_sizes,
    n_reflectors: int,
    n_rx: int,
    rng: np.random.Generator,
    meta: dict | None = None,
) -> MlpParams:
    """Initialization tuned for ranking per-antenna channel energies.

    First-layer units are mirrored pairs (w, -w) each supported on a single
    antenna's real/imaginary block, so layer one starts as random
    per-antenna magnitude features; the remaining layers use a reduced
    uniform scale that trains markedly faster at small Adam step sizes than
    the plain fan-in rule.  All weights remain fully trainable.
    """
    sizes = [int(s) for s in layer_sizes]
    if len(sizes) < 3:
        raise ValueError("need at least one hidden layer")
    d = n_reflectors * n_rx
    if sizes[0] != 2 * d:
        raise ValueError(
            f"input size {sizes[0]} does not match a {n_reflectors}x{n_rx} channel"
        )
    width = sizes[1]
    half = width // 2
    per_antenna = max(half // n_rx, 1)
    limit = math.sqrt(6.0 / (2 * n_reflectors))
    w1 = np.zeros((sizes[0], width))
    for antenna in range(n_rx):
        rows = np.concatenate(
            [
                np.arange(antenna * n_reflectors, (antenna + 1) * n_reflectors),
                d + np.arange(antenna * n_reflectors, (antenna + 1) * n_reflectors),
            ]
        )
        for unit in range(per_antenna):
            col = antenna * per_antenna + unit
            if col >= half:
                break
            w1[rows, col] = rng.uniform(-limit, limit, size=rows.size)
    # Any leftover columns (width not divisible) get dense small weights.
    for col in range(n_rx * per_antenna, half):
        w1[:, col] = rng.uniform(-0.25 * limit, 0.25 * limit, size=sizes[0])
    w1[:, half : 2 * half] = -w1[:, :half]
    if width % 2 == 1:
        w1[:, -1] = rng.uniform(-0.25 * limit, 0.25 * limit, size=sizes[0])
    # Spread first-layer kinks into the active range so the next layer can
    # assemble piecewise-quadratic responses immediately; mirrored pairs
    # share their knot.
    b1 = np.zeros(width)
    knots = rng.uniform(-1.0, 0.0, size=half)
    b1[:half] = knots
    b1[half : 2 * half] = knots
    weights = [w1]
    biases = [b1]
    for fan_in, fan_out in zip(sizes[1:], sizes[2:]):
        lim = 0.25 * math.sqrt(6.0 / fan_in)
        weights.append(rng.uniform(-lim, lim, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    return MlpParams(weights, biases, meta or {})


def _forward_cached(params: MlpParams, x: np.ndarray):
    """Activations of every layer for a 2-D input batch."""
    acts = [x]
    h = x
    n_layers = len(params.weights)
    for i, (w, b) in enumerate(zip(params.weights, params.biases)):
        z = h @ w + b
        h = z if i == n_layers - 1 else np.maximum(z, 0.0)
        acts.append(h)
    logits = acts[-1]
    shifted = logits - logits.max(axis=1, keepdims=True)
    expz = np.exp(shifted)
    probs = expz / expz.sum(axis=1, keepdims=True)
    return acts, probs


def forward(params: MlpParams, features: np.ndarray) -> np.ndarray:
    """Class probabilities for one feature vector or a batch of rows."""
    x = np.asarray(features, dtype=np.float64)
    single = x.ndim == 1
    if single:
        x = x[None, :]
    if x.shape[1] != params.n_inputs:
        raise ValueError(
            f"feature length {x.shape[1]} != network input size {params.n_inputs}"
        )
    _, probs = _forward_cached(params, x)
    return probs[0] if single else probs


def loss_and_gradients(params: MlpParams, features: np.ndarray, labels: np.ndarray):
    """Mean cross-entropy over the minibatch and gradients for every tensor.

    ``labels`` are 1-based class indices.
    """
    x = np.atleast_2d(np.asarray(features, dtype=np.float64))
    y = np.asarray(labels, dtype=np.int64) - 1
    if x.shape[0] == 0:
        raise ValueError("minibatch must not be empty")
    acts, probs = _forward_cached(params, x)
    n = x.shape[0]
    loss = float(-np.mean(np.log(probs[np.arange(n), y] + 1e-300)))
    delta = probs.copy()
    delta[np.arange(n), y] -= 1.0
    delta /= n
    grads_w = [np.empty_like(w) for w in params.weights]
    grads_b = [np.empty_like(b) for b in params.biases]
    for i in range(len(params.weights) - 1, -1, -1):
        grads_w[i] = acts[i].T @ delta
        grads_b[i] = delta.sum(axis=0)
        if i > 0:
            delta = (delta @ params.weights[i].T) * (acts[i] > 0)
    return loss, grads_w, grads_b


def evaluate(params: MlpParams, features: np.ndarray, labels: np.ndarray):
    """(mean cross-entropy, argmax accuracy) on the given rows."""
    x = np.atleast_2d(np.asarray(features, dtype=np.float64))
    y = np.asarray(labels, dtype=np.int64)
    if x.shape[0] == 0:
        raise ValueError("cannot evaluate on an empty partition")
    losses = 0.0
    correct = 0
    block = 16384
    for start in range(0, x.shape[0], block):
        xb = x[start : start + block]
        yb = y[start : start + block] - 1
        _, probs = _forward_cached(params, xb)
        losses += float(-np.sum(np.log(probs[np.arange(xb.shape[0]), yb] + 1e-300)))
        correct += int(np.sum(np.argmax(probs, axis=1) == yb))
    n = x.shape[0]
    return losses / n, correct / n


def _permutation_tables(n_reflectors: int, n_rx: int, n_sel: int):
    """Feature-index and label remaps for every receive-antenna permutation.

    Relabeling an i.i.d. channel by a fixed antenna permutation leaves the
    sample distribution unchanged, so permuted copies of training rows are
    statistically fresh samples; the subset label moves along with the
    permutation.
    """
    from itertools import permutations

    if n_rx > 8:
        raise ConfigurationError("permutation augmentation supported for n_rx <= 8")
    perms = list(permutations(range(n_rx)))
    subsets = list(combinations(range(n_rx), n_sel))
    rank = {s: i for i, s in enumerate(subsets)}
    label_map = np.zeros((len(perms), len(subsets)), dtype=np.int64)
    block = np.arange(2 * n_reflectors * n_rx).reshape(2, n_rx, n_reflectors)
    feat_map = np.zeros((len(perms), 2 * n_reflectors * n_rx), dtype=np.int64)
    for pi, perm in enumerate(perms):
        for si, s in enumerate(subsets):
            label_map[pi, si] = rank[tuple(sorted(perm[c] for c in s))]
        inv = np.argsort(np.asarray(perm))
        feat_map[pi] = block[:, inv, :].reshape(-1)
    return feat_map, label_map


def train(dataset: Dataset, config: TrainConfig) -> TrainResult:
    """Adam training with per-epoch shuffling under the configured seed.

    Records training/validation loss and accuracy once per epoch.  With a
    fixed seed and thread count the returned parameters are bit-identical
    across runs.  ``augment_permutations`` shows each minibatch through a
    random receive-antenna permutation (features and labels move together)
    and ``augment_phases`` additionally re-rolls every entry's phase; both
    transforms preserve the fading distribution and the selection label, so
    they act as free extra samples and close most of the generalization gap
    at small sample counts without touching the optimizer settings.
    """
    x_train = dataset.features[dataset.train_idx]
    y_train = dataset.labels[dataset.train_idx]
    x_val = dataset.features[dataset.val_idx]
    y_val = dataset.labels[dataset.val_idx]
    if config.minibatch > x_train.shape[0]:
        raise ConfigurationError(
            f"minibatch {config.minibatch} exceeds training set size {x_train.shape[0]}"
        )
    p = dataset.features.shape[1]
    channel_shaped = p == feature_dim(dataset.n_reflectors, dataset.n_rx)
    if (config.augment_permutations or config.augment_phases) and not channel_shaped:
        raise ConfigurationError(
            "augmentation needs channel-shaped features (expected width "
            f"{feature_dim(dataset.n_reflectors, dataset.n_rx)}, got {p})"
        )
    feat_map = label_map = None
    if config.augment_permutations:
        feat_map, label_map = _permutation_tables(
            dataset.n_reflectors, dataset.n_rx, dataset.n_sel
        )
    t = n_subsets(dataset.n_rx, dataset.n_sel)
    sizes = (p,) + tuple(config.hidden_layers) + (t,)
    rng = np.random.default_rng(config.seed)
    meta = {
        "n_reflectors": dataset.n_reflectors,
        "n_rx": dataset.n_rx,
        "n_sel": dataset.n_sel,
        "seed": config.seed,
        "config_digest": config.digest(),
    }
    scheme = config.init
    if scheme == "auto":
        scheme = "antenna-blocks" if channel_shaped and len(sizes) >= 3 else "he-uniform"
    if scheme == "antenna-blocks":
        if not channel_shaped:
            raise ConfigurationError(
                "antenna-blocks initialization needs channel-shaped features"
            )
        params = selector_init_params(
            sizes, dataset.n_reflectors, dataset.n_rx, rng, meta
        )
    else:
        params = init_params(sizes, rng, meta)
    m_w = [np.zeros_like(w) for w in params.weights]
    v_w = [np.zeros_like(w) for w in params.weights]
    m_b = [np.zeros_like(b) for b in params.biases]
    v_b = [np.zeros_like(b) for b in params.biases]
    averaged = params.copy() if config.average_weights else None
    decay = 0.999
    history = {"train_loss": [], "train_acc": [], "val_loss": [], "val_acc": []}
    step = 0
    lr, b1, b2, eps = config.learning_rate, config.beta1, config.beta2, config.epsilon
    done = False
    for _epoch in range(config.epochs):
        order = rng.permutation(x_train.shape[0])
        for start in range(0, x_train.shape[0], config.minibatch):
            batch = order[start : start + config.minibatch]
            xb, yb = x_train[batch], y_train[batch]
            if feat_map is not None:
                views = rng.integers(feat_map.shape[0], size=xb.shape[0])
                xb = np.take_along_axis(xb, feat_map[views], axis=1)
                yb = label_map[views, yb - 1] + 1
            if config.augment_phases:
                # Per-entry rotation: circularly-symmetric fading keeps both
                # the distribution and the norm-based label invariant.
                d = p // 2
                theta = rng.uniform(0.0, 2.0 * np.pi, size=(xb.shape[0], d))
                cos_t, sin_t = np.cos(theta), np.sin(theta)
                re, im = xb[:, :d], xb[:, d:]
                xb = np.concatenate(
                    [re * cos_t - im * sin_t, re * sin_t + im * cos_t], axis=1
                )
            _, grads_w, grads_b = loss_and_gradients(params, xb, yb)
            step += 1
            corr1 = 1.0 - b1**step
            corr2 = 1.0 - b2**step
            for i in range(len(params.weights)):
                m_w[i] = b1 * m_w[i] + (1 - b1) * grads_w[i]
                v_w[i] = b2 * v_w[i] + (1 - b2) * grads_w[i] ** 2
                params.weights[i] -= lr * (m_w[i] / corr1) / (np.sqrt(v_w[i] / corr2) + eps)
                m_b[i] = b1 * m_b[i] + (1 - b1) * grads_b[i]
                v_b[i] = b2 * v_b[i] + (1 - b2) * grads_b[i] ** 2
                params.biases[i] -= lr * (m_b[i] / corr1) / (np.sqrt(v_b[i] / corr2) + eps)
                if averaged is not None:
                    averaged.weights[i] = (
                        decay * averaged.weights[i] + (1 - decay) * params.weights[i]
                    )
                    averaged.biases[i] = (
                        decay * averaged.biases[i] + (1 - decay) * params.biases[i]
                    )
            if config.max_steps is not None and step >= config.max_steps:
                done = True
                break
        # History tracks the parameters train() will return.
        report = averaged if averaged is not None else params
        tr_loss, tr_acc = evaluate(report, x_train, y_train)
        va_loss, va_acc = evaluate(report, x_val, y_val)
        history["train_loss"].append(tr_loss)
        history["train_acc"].append(tr_acc)
        history["val_loss"].append(va_loss)
        history["val_acc"].append(va_acc)
        if done:
            break
    return TrainResult(params=averaged if averaged is not None else params, history=history)


def predict_labels(params: MlpParams, features: np.ndarray) -> np.ndarray:
    """1-based argmax labels for a batch of feature rows (first index on ties)."""
    probs = forward(params, np.atleast_2d(features))
    return np.argmax(probs, axis=1) + 1


def predict_subset(params: MlpParams, channel) -> AntennaSubset:
    """Most probable antenna subset for one channel realization."""
    probs = forward(params, feature_vector(channel))
    label = int(np.argmax(probs)) + 1
    n_rx = params.meta.get("n_rx", channel.n_rx)
    n_sel = params.meta.get("n_sel")
    if n_sel is None:
        raise ConfigurationError(
            "network metadata lacks the selected-antenna count; "
            "train or load through this package to populate it"
        )
    return AntennaSubset(label_to_subset(label, n_rx, n_sel), n_rx)


def save_checkpoint(path, params: MlpParams) -> None:
    """Persist layer sizes, tensors and metadata to a single npz file."""
    arrays = {
        "version": np.array(CHECKPOINT_VERSION),
        "layer_sizes": np.array(params.layer_sizes, dtype=np.int64),
        "meta_json": np.array(json.dumps(params.meta)),
    }
    for i, (w, b) in enumerate(zip(params.weights, params.biases)):
        arrays[f"w{i}"] = w
        arrays[f"b{i}"] = b
    np.savez(path, **arrays)


def load_checkpoint(path) -> MlpParams:
    """Load and validate a checkpoint written by :func:`save_checkpoint`."""
    with np.load(path, allow_pickle=False) as data:
        version = int(data["version"])
        if version != CHECKPOINT_VERSION:
            raise ConfigurationError(
                f"checkpoint version {version} unsupported (expected {CHECKPOINT_VERSION})"
            )
        sizes = tuple(int(s) for s in data["layer_sizes"])
        weights, biases = [], []
        for i in range(len(sizes) - 1):
            w = data[f"w{i}"]
            b = data[f"b{i}"]
            if w.shape != (sizes[i], sizes[i + 1]) or b.shape != (sizes[i + 1],):
                raise ConfigurationError(
                    f"checkpoint layer {i} has shape {w.shape}, "
                    f"expected {(sizes[i], sizes[i + 1])}"
                )
            weights.append(w)
            biases.append(b)
        meta = json.loads(str(data["meta_json"]))
    return MlpParams(weights, biases, meta)
