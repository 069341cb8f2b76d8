"""Training loop, metrics, and gradient verification.

Training minimizes per-timestep mean squared error with Adam (or plain
SGD), on inputs z-scored per channel with statistics taken from the
training split. Targets stay in meters, so reported RMSE and MAE are in
meters. Everything is seeded and single-threaded: the same config on the
same split reproduces the same history bit for bit.

Batches group samples of equal sequence length (augmented corpora mix
full-length and half-length sequences), shuffled each epoch by a named
per-epoch stream.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import TrainingDivergedError
from .model import HybridModel, ModelConfig, hybrid_backward, hybrid_forward_cached

_STD_FLOOR = 1e-12


@dataclass(frozen=True)
class Normalization:
    """Per-channel z-score statistics from the training split."""

    mean: np.ndarray
    std: np.ndarray

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=np.float64)
        std = np.maximum(np.asarray(self.std, dtype=np.float64), _STD_FLOOR)
        for arr in (mean, std):
            arr.flags.writeable = False
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "std", std)

    def apply(self, channels: np.ndarray) -> np.ndarray:
        return (channels - self.mean) / self.std


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 1e-3
    epochs: int = 20
    batch_size: int = 32
    seed: int = 0
    optimizer: str = "adam"

    def __post_init__(self):
        if self.learning_rate < 0:
            raise ValueError(f"learning_rate must be >= 0, got {self.learning_rate}")
        if self.epochs < 1 or self.batch_size < 1:
            raise ValueError("epochs and batch_size must be >= 1")
        if self.optimizer not in ("adam", "sgd"):
            raise ValueError(f"unknown optimizer {self.optimizer!r}")


def rmse(pred, truth) -> float:
    pred = np.asarray(pred, dtype=np.float64)
    truth = np.asarray(truth, dtype=np.float64)
    if pred.shape != truth.shape:
        raise ValueError(f"shape mismatch: {pred.shape} vs {truth.shape}")
    if pred.size == 0:
        raise ValueError("empty sequences")
    return float(np.sqrt(np.mean((pred - truth) ** 2)))


def mae(pred, truth) -> float:
    pred = np.asarray(pred, dtype=np.float64)
    truth = np.asarray(truth, dtype=np.float64)
    if pred.shape != truth.shape:
        raise ValueError(f"shape mismatch: {pred.shape} vs {truth.shape}")
    if pred.size == 0:
        raise ValueError("empty sequences")
    return float(np.mean(np.abs(pred - truth)))


def fit_normalization(samples) -> Normalization:
    stacked = np.concatenate([s.input.channels for s in samples], axis=0)
    return Normalization(stacked.mean(axis=0), stacked.std(axis=0))


def _epoch_stream(seed: int, epoch: int) -> np.random.Generator:
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence((seed, epoch)))
    )


def _batches(samples, batch_size: int, order) -> list:
    """Index batches of equal sequence length, filled in given order."""
    buckets: dict = {}
    batches = []
    for idx in order:
        length = len(samples[idx].input)
        buckets.setdefault(length, []).append(idx)
        if len(buckets[length]) == batch_size:
            batches.append(buckets.pop(length))
    for length in sorted(buckets):
        batches.append(buckets[length])
    return batches


def _batch_arrays(samples, indices, normalization: Normalization):
    X = np.stack([normalization.apply(samples[i].input.channels) for i in indices])
    target = np.stack([samples[i].target for i in indices])[:, :, None]
    return X, target


class _Adam:
    """Adaptive moment estimation with bias correction."""

    def __init__(self, params: dict, lr: float, beta1=0.9, beta2=0.999, eps=1e-8):
        self.lr, self.beta1, self.beta2, self.eps = lr, beta1, beta2, eps
        self.m = {k: np.zeros_like(v) for k, v in params.items()}
        self.v = {k: np.zeros_like(v) for k, v in params.items()}
        self.t = 0

    def step(self, params: dict, grads: dict):
        self.t += 1
        c1 = 1.0 - self.beta1 ** self.t
        c2 = 1.0 - self.beta2 ** self.t
        for name in params:
            g = grads[name]
            self.m[name] = self.beta1 * self.m[name] + (1.0 - self.beta1) * g
            self.v[name] = self.beta2 * self.v[name] + (1.0 - self.beta2) * g * g
            params[name] = params[name] - self.lr * (self.m[name] / c1) / (
                np.sqrt(self.v[name] / c2) + self.eps
            )


class _Sgd:
    def __init__(self, params: dict, lr: float):
        self.lr = lr

    def step(self, params: dict, grads: dict):
        for name in params:
            params[name] = params[name] - self.lr * grads[name]


def evaluate(model: HybridModel, samples, batch_size: int = 32):
    """(RMSE, MAE) in meters over all timesteps of all samples."""
    samples = list(samples)
    if not samples:
        raise ValueError("no samples to evaluate")
    norm = model.normalization or _identity_normalization(model.config)
    sse = 0.0
    sae = 0.0
    count = 0
    for batch in _batches(samples, batch_size, range(len(samples))):
        X, target = _batch_arrays(samples, batch, norm)
        Y, _ = hybrid_forward_cached(model.params, model.config, X)
        err = Y - target
        sse += float((err ** 2).sum())
        sae += float(np.abs(err).sum())
        count += err.size
    return float(np.sqrt(sse / count)), sae / count


def _identity_normalization(config: ModelConfig) -> Normalization:
    return Normalization(np.zeros(config.input_channels),
                         np.ones(config.input_channels))


def predict(model: HybridModel, channels: np.ndarray) -> np.ndarray:
    """Elevation sequence (T,) for one (T x channels) sensor matrix."""
    norm = model.normalization or _identity_normalization(model.config)
    Y, _ = hybrid_forward_cached(model.params, model.config,
                                 norm.apply(np.asarray(channels))[None])
    return Y[0, :, 0]


def train(model: HybridModel, split, cfg: TrainConfig):
    """Fit on split.train, select the best epoch on split.validation.

    Returns (trained model carrying the best-validation parameters and
    the fitted normalization, per-epoch history). History entries hold
    epoch, train_rmse, val_rmse, val_mae. Raises TrainingDivergedError
    the moment the loss stops being finite.
    """
    train_samples = list(split.train)
    val_samples = list(split.validation)
    if not train_samples or not val_samples:
        raise ValueError("training needs non-empty train and validation sets")

    norm = model.normalization or fit_normalization(train_samples)
    params = {k: v.copy() for k, v in model.params.items()}
    optimizer = (_Adam if cfg.optimizer == "adam" else _Sgd)(params, cfg.learning_rate)

    best_params = {k: v.copy() for k, v in params.items()}
    best_val = np.inf
    history = []
    for epoch in range(1, cfg.epochs + 1):
        order = _epoch_stream(cfg.seed, epoch).permutation(len(train_samples))
        sse = 0.0
        count = 0
        for batch in _batches(train_samples, cfg.batch_size, order):
            X, target = _batch_arrays(train_samples, batch, norm)
            Y, cache = hybrid_forward_cached(params, model.config, X)
            err = Y - target
            loss = float((err ** 2).mean())
            if not np.isfinite(loss):
                raise TrainingDivergedError(epoch)
            sse += float((err ** 2).sum())
            count += err.size
            grads = hybrid_backward(params, model.config, 2.0 * err / err.size, cache)
            optimizer.step(params, grads)

        snapshot = HybridModel(model.config, params, norm)
        val_rmse, val_mae = evaluate(snapshot, val_samples, cfg.batch_size)
        history.append({
            "epoch": epoch,
            "train_rmse": float(np.sqrt(sse / count)),
            "val_rmse": val_rmse,
            "val_mae": val_mae,
        })
        if val_rmse < best_val:
            best_val = val_rmse
            best_params = {k: v.copy() for k, v in params.items()}

    return HybridModel(model.config, best_params, norm), history


def gradient_check(model: HybridModel, channels: np.ndarray, target: np.ndarray,
                   epsilon: float = 1e-5, *, entries_per_param: int = 2,
                   seed: int = 0) -> float:
    """Max relative error between analytic and central-difference grads.

    Checks a seeded random subset of entries of every parameter against
    (loss(p+eps) - loss(p-eps)) / (2 eps) on the MSE loss; relative error
    is |a - n| / max(|a|, |n|, 1e-12).
    """
    if epsilon <= 0:
        raise ValueError(f"epsilon must be > 0, got {epsilon}")
    X = np.asarray(channels, dtype=np.float64)
    if X.ndim == 2:
        X = X[None]
    target = np.asarray(target, dtype=np.float64).reshape(X.shape[0], X.shape[1], 1)
    params = {k: v.copy() for k, v in model.params.items()}

    def loss() -> float:
        Y, _ = hybrid_forward_cached(params, model.config, X)
        return float(((Y - target) ** 2).mean())

    Y, cache = hybrid_forward_cached(params, model.config, X)
    grads = hybrid_backward(params, model.config,
                            2.0 * (Y - target) / target.size, cache)

    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    worst = 0.0
    for name in sorted(params):
        arr = params[name]
        picks = min(entries_per_param, arr.size)
        for flat in rng.choice(arr.size, size=picks, replace=False):
            idx = np.unravel_index(flat, arr.shape)
            saved = arr[idx]
            arr[idx] = saved + epsilon
            hi = loss()
            arr[idx] = saved - epsilon
            lo = loss()
            arr[idx] = saved
            numeric = (hi - lo) / (2.0 * epsilon)
            analytic = grads[name][idx]
            rel = abs(analytic - numeric) / max(abs(analytic), abs(numeric), 1e-12)
            worst = max(worst, rel)
    return worst
