"""Parallel LSTM + transformer-encoder model with a fusion head.

Data flow for a (T x 7) sensor sequence:

    embed (affine 7 -> d)
      |-- LSTM branch: recurrence over time, then per-step affine H -> d
      |-- transformer branch: + positional encoding, then encoder
      |   block(s): multi-head attention, residual, layer norm,
      |   feedforward (ReLU), residual, layer norm
    concatenate per timestep (2d) -> affine -> scalar elevation

Both branches see the same embedded sequence and emit (T x d); the model
maps any finite (T x 7) input to a finite (T x 1) output.

Parameters live in one flat name -> array dict (see init_params for the
naming scheme), which keeps the optimizer, the gradient checker, and the
checkpoint format trivially generic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .attention import init_attention_params, multi_head_backward, multi_head_forward
from .encoding import positional_encoding
from .lstm import init_lstm_params, lstm_backward, lstm_forward

LN_EPS = 1e-5


@dataclass(frozen=True)
class ModelConfig:
    """Architecture hyperparameters."""

    d_model: int = 32
    num_heads: int = 4
    num_blocks: int = 1
    ff_width: int = 64
    lstm_hidden: int = 32
    input_channels: int = 7

    def __post_init__(self):
        if self.d_model < 2 or self.d_model % 2 != 0:
            raise ValueError(f"d_model must be even and >= 2, got {self.d_model}")
        if self.num_heads < 1 or self.d_model % self.num_heads != 0:
            raise ValueError(
                f"num_heads ({self.num_heads}) must divide d_model ({self.d_model})"
            )
        if min(self.num_blocks, self.ff_width, self.lstm_hidden,
               self.input_channels) < 1:
            raise ValueError("all sizes must be >= 1")

    @property
    def d_k(self) -> int:
        return self.d_model // self.num_heads


@dataclass(frozen=True)
class HybridModel:
    """Config + parameters (+ input normalization once trained)."""

    config: ModelConfig
    params: dict
    normalization: "Normalization | None" = None


def init_params(config: ModelConfig, seed: int) -> dict:
    """Seeded uniform fan-in initialization of every parameter.

    Weight entries are U(-1/sqrt(fan_in), +1/sqrt(fan_in)); biases and
    layer-norm offsets start at zero, layer-norm gains at one.
    """
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    d = config.d_model

    def uniform(fan_in, shape):
        bound = 1.0 / np.sqrt(fan_in)
        return rng.uniform(-bound, bound, size=shape)

    params = {
        "embed.W": uniform(config.input_channels, (config.input_channels, d)),
        "embed.b": np.zeros(d),
    }
    params.update(init_lstm_params(rng, config.lstm_hidden, d, "lstm."))
    params["lstm_readout.W"] = uniform(config.lstm_hidden, (config.lstm_hidden, d))
    params["lstm_readout.b"] = np.zeros(d)
    for bi in range(config.num_blocks):
        p = f"block{bi}."
        params.update(init_attention_params(rng, d, config.num_heads,
                                            config.d_k, p + "attn."))
        params[p + "ln1.gain"] = np.ones(d)
        params[p + "ln1.offset"] = np.zeros(d)
        params[p + "ff.W1"] = uniform(d, (d, config.ff_width))
        params[p + "ff.b1"] = np.zeros(config.ff_width)
        params[p + "ff.W2"] = uniform(config.ff_width, (config.ff_width, d))
        params[p + "ff.b2"] = np.zeros(d)
        params[p + "ln2.gain"] = np.ones(d)
        params[p + "ln2.offset"] = np.zeros(d)
    params["fusion.W"] = uniform(2 * d, (2 * d, 1))
    params["fusion.b"] = np.zeros(1)
    return params


def layer_norm_forward(params: dict, prefix: str, x: np.ndarray):
    mean = x.mean(axis=-1, keepdims=True)
    centered = x - mean
    var = (centered ** 2).mean(axis=-1, keepdims=True)
    inv_std = 1.0 / np.sqrt(var + LN_EPS)
    xhat = centered * inv_std
    out = params[f"{prefix}gain"] * xhat + params[f"{prefix}offset"]
    return out, (xhat, inv_std)


def layer_norm_backward(params: dict, prefix: str, d_out: np.ndarray, cache):
    xhat, inv_std = cache
    batch_axes = tuple(range(d_out.ndim - 1))
    grads = {
        f"{prefix}gain": (d_out * xhat).sum(axis=batch_axes),
        f"{prefix}offset": d_out.sum(axis=batch_axes),
    }
    d_xhat = d_out * params[f"{prefix}gain"]
    dx = inv_std * (
        d_xhat
        - d_xhat.mean(axis=-1, keepdims=True)
        - xhat * (d_xhat * xhat).mean(axis=-1, keepdims=True)
    )
    return dx, grads


def _check_input(config: ModelConfig, X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    squeeze = X.ndim == 2
    if squeeze:
        X = X[None, :, :]
    if X.ndim != 3 or X.shape[2] != config.input_channels:
        raise ValueError(
            f"expected (B, T, {config.input_channels}) input, got shape {X.shape}"
        )
    if X.shape[1] < 1:
        raise ValueError("sequence length must be >= 1")
    return X, squeeze


def hybrid_forward(params: dict, config: ModelConfig, X: np.ndarray) -> np.ndarray:
    """Forward pass; (T, 7) -> (T, 1) or batched (B, T, 7) -> (B, T, 1)."""
    X, squeeze = _check_input(config, X)
    Y, _ = hybrid_forward_cached(params, config, X)
    return Y[0] if squeeze else Y


def hybrid_forward_cached(params: dict, config: ModelConfig, X: np.ndarray):
    """Batched forward keeping every intermediate needed for backward."""
    X, _ = _check_input(config, X)
    T = X.shape[1]

    embedded = X @ params["embed.W"] + params["embed.b"]
    hidden_seq, lstm_cache = lstm_forward(params, "lstm.", embedded)
    lstm_out = hidden_seq @ params["lstm_readout.W"] + params["lstm_readout.b"]

    cur = embedded + positional_encoding(T, config.d_model)
    blocks = []
    for bi in range(config.num_blocks):
        p = f"block{bi}."
        attn_out, attn_cache = multi_head_forward(params, p + "attn.", cur)
        res1 = cur + attn_out
        norm1, ln1_cache = layer_norm_forward(params, p + "ln1.", res1)
        ff_pre = norm1 @ params[p + "ff.W1"] + params[p + "ff.b1"]
        ff_act = np.maximum(ff_pre, 0.0)
        ff_out = ff_act @ params[p + "ff.W2"] + params[p + "ff.b2"]
        res2 = norm1 + ff_out
        norm2, ln2_cache = layer_norm_forward(params, p + "ln2.", res2)
        blocks.append({
            "attn": attn_cache, "ln1": ln1_cache, "ln2": ln2_cache,
            "norm1": norm1, "ff_pre": ff_pre, "ff_act": ff_act,
        })
        cur = norm2

    fused = np.concatenate([lstm_out, cur], axis=-1)
    Y = fused @ params["fusion.W"] + params["fusion.b"]
    cache = {
        "X": X, "embedded": embedded, "hidden_seq": hidden_seq,
        "lstm": lstm_cache, "blocks": blocks, "fused": fused,
    }
    return Y, cache


def hybrid_backward(params: dict, config: ModelConfig, d_Y: np.ndarray,
                    cache: dict) -> dict:
    """Gradients of a scalar loss in every parameter, given dLoss/dY."""
    d = config.d_model
    grads = {}

    fused = cache["fused"]
    grads["fusion.W"] = fused.reshape(-1, 2 * d).T @ d_Y.reshape(-1, 1)
    grads["fusion.b"] = d_Y.sum(axis=(0, 1))
    d_fused = d_Y @ params["fusion.W"].T
    d_lstm_out = d_fused[..., :d]
    d_cur = d_fused[..., d:]

    hidden_seq = cache["hidden_seq"]
    H = hidden_seq.shape[-1]
    grads["lstm_readout.W"] = hidden_seq.reshape(-1, H).T @ d_lstm_out.reshape(-1, d)
    grads["lstm_readout.b"] = d_lstm_out.sum(axis=(0, 1))
    d_hidden = d_lstm_out @ params["lstm_readout.W"].T
    lstm_grads, d_embedded = lstm_backward(params, "lstm.", d_hidden, cache["lstm"])
    grads.update(lstm_grads)

    for bi in range(config.num_blocks - 1, -1, -1):
        p = f"block{bi}."
        blk = cache["blocks"][bi]
        d_res2, ln2_grads = layer_norm_backward(params, p + "ln2.", d_cur, blk["ln2"])
        grads.update(ln2_grads)

        d_ff_out = d_res2
        ff_act, ff_pre, norm1 = blk["ff_act"], blk["ff_pre"], blk["norm1"]
        width = ff_act.shape[-1]
        grads[p + "ff.W2"] = ff_act.reshape(-1, width).T @ d_ff_out.reshape(-1, d)
        grads[p + "ff.b2"] = d_ff_out.sum(axis=(0, 1))
        d_ff_act = d_ff_out @ params[p + "ff.W2"].T
        d_ff_pre = d_ff_act * (ff_pre > 0)
        grads[p + "ff.W1"] = norm1.reshape(-1, d).T @ d_ff_pre.reshape(-1, width)
        grads[p + "ff.b1"] = d_ff_pre.sum(axis=(0, 1))
        d_norm1 = d_res2 + d_ff_pre @ params[p + "ff.W1"].T

        d_res1, ln1_grads = layer_norm_backward(params, p + "ln1.", d_norm1, blk["ln1"])
        grads.update(ln1_grads)
        attn_grads, d_attn_in = multi_head_backward(params, p + "attn.",
                                                    d_res1, blk["attn"])
        grads.update(attn_grads)
        d_cur = d_res1 + d_attn_in

    d_embedded = d_embedded + d_cur
    X = cache["X"]
    c = config.input_channels
    grads["embed.W"] = X.reshape(-1, c).T @ d_embedded.reshape(-1, d)
    grads["embed.b"] = d_embedded.sum(axis=(0, 1))
    return grads
