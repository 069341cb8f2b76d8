"""Scaled dot-product attention, single- and multi-head, with backward.

Single head over a (T x d) sequence X:

    Q = X W_q,  K = X W_k,  V = X W_v
    Attention(X) = softmax(Q K^T / sqrt(d_k)) V

Multi-head attention runs independent heads, concatenates their outputs
along the feature axis, and applies one output projection. Per-head
projections are stored stacked: "<prefix>W_q" has shape
(num_heads, d, d_k); the projection "<prefix>W_out" has shape
(num_heads * d_k, d) with bias "<prefix>b_out".
"""

from __future__ import annotations

import numpy as np


def softmax(x: np.ndarray, axis: int = -1) -> np.ndarray:
    """Numerically stable softmax along one axis."""
    shifted = x - x.max(axis=axis, keepdims=True)
    ex = np.exp(shifted)
    return ex / ex.sum(axis=axis, keepdims=True)


def softmax_backward(weights: np.ndarray, d_weights: np.ndarray,
                     axis: int = -1) -> np.ndarray:
    """Gradient in the softmax input given weights = softmax(input)."""
    inner = (d_weights * weights).sum(axis=axis, keepdims=True)
    return weights * (d_weights - inner)


def self_attention(X: np.ndarray, W_q: np.ndarray, W_k: np.ndarray,
                   W_v: np.ndarray):
    """Single-head attention; X may be (T, d) or batched (B, T, d).

    Returns (output, attention weights); each weight row is a convex
    combination over the sequence.
    """
    d_k = W_k.shape[1]
    Q = X @ W_q
    K = X @ W_k
    V = X @ W_v
    scores = Q @ np.swapaxes(K, -1, -2) / np.sqrt(d_k)
    weights = softmax(scores, axis=-1)
    return weights @ V, weights


def init_attention_params(rng: np.random.Generator, d: int, num_heads: int,
                          d_k: int, prefix: str) -> dict:
    bound_in = 1.0 / np.sqrt(d)
    bound_out = 1.0 / np.sqrt(num_heads * d_k)
    return {
        f"{prefix}W_q": rng.uniform(-bound_in, bound_in, size=(num_heads, d, d_k)),
        f"{prefix}W_k": rng.uniform(-bound_in, bound_in, size=(num_heads, d, d_k)),
        f"{prefix}W_v": rng.uniform(-bound_in, bound_in, size=(num_heads, d, d_k)),
        f"{prefix}W_out": rng.uniform(-bound_out, bound_out,
                                      size=(num_heads * d_k, d)),
        f"{prefix}b_out": np.zeros(d),
    }


def multi_head_attention(params: dict, prefix: str, X: np.ndarray) -> np.ndarray:
    """Forward only; X is (B, T, d), output (B, T, d)."""
    out, _ = multi_head_forward(params, prefix, X)
    return out


def multi_head_forward(params: dict, prefix: str, X: np.ndarray):
    """Multi-head attention with cache for the backward pass."""
    W_q, W_k, W_v = (params[f"{prefix}W_{n}"] for n in ("q", "k", "v"))
    num_heads = W_q.shape[0]
    heads = []
    cache = {"X": X, "per_head": []}
    for h in range(num_heads):
        Q = X @ W_q[h]
        K = X @ W_k[h]
        V = X @ W_v[h]
        scores = Q @ np.swapaxes(K, -1, -2) / np.sqrt(W_k[h].shape[1])
        weights = softmax(scores, axis=-1)
        heads.append(weights @ V)
        cache["per_head"].append((Q, K, V, weights))
    concat = np.concatenate(heads, axis=-1)
    cache["concat"] = concat
    out = concat @ params[f"{prefix}W_out"] + params[f"{prefix}b_out"]
    return out, cache


def multi_head_backward(params: dict, prefix: str, d_out: np.ndarray,
                        cache: dict):
    """Returns (parameter gradients, gradient in X)."""
    X = cache["X"]
    W_q, W_k, W_v = (params[f"{prefix}W_{n}"] for n in ("q", "k", "v"))
    W_out = params[f"{prefix}W_out"]
    num_heads, _, d_k = W_q.shape
    flat = X.reshape(-1, X.shape[-1])

    grads = {
        f"{prefix}W_out": cache["concat"].reshape(-1, W_out.shape[0]).T
        @ d_out.reshape(-1, d_out.shape[-1]),
        f"{prefix}b_out": d_out.sum(axis=tuple(range(d_out.ndim - 1))),
        f"{prefix}W_q": np.zeros_like(W_q),
        f"{prefix}W_k": np.zeros_like(W_k),
        f"{prefix}W_v": np.zeros_like(W_v),
    }
    d_concat = d_out @ W_out.T
    dX = np.zeros_like(X)
    scale = 1.0 / np.sqrt(d_k)
    for h in range(num_heads):
        Q, K, V, weights = cache["per_head"][h]
        d_head = d_concat[..., h * d_k:(h + 1) * d_k]
        d_weights = d_head @ np.swapaxes(V, -1, -2)
        dV = np.swapaxes(weights, -1, -2) @ d_head
        d_scores = softmax_backward(weights, d_weights)
        dQ = d_scores @ K * scale
        dK = np.swapaxes(d_scores, -1, -2) @ Q * scale
        grads[f"{prefix}W_q"][h] = flat.T @ dQ.reshape(-1, d_k)
        grads[f"{prefix}W_k"][h] = flat.T @ dK.reshape(-1, d_k)
        grads[f"{prefix}W_v"][h] = flat.T @ dV.reshape(-1, d_k)
        dX += dQ @ W_q[h].T + dK @ W_k[h].T + dV @ W_v[h].T
    return grads, dX
