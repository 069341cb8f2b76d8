"""LSTM cell: gated recurrence with backpropagation through time.

One step, for input a_y and previous state (h_{y-1}, C_{y-1}):

    f_y  = sigmoid(W_f . [h_{y-1}, a_y] + b_f)      forget gate
    i_y  = sigmoid(W_i . [h_{y-1}, a_y] + b_i)      input gate
    C'_y = tanh   (W_c . [h_{y-1}, a_y] + b_c)      candidate state
    C_y  = f_y * C'_{y-1...}                        see below
    O_y  = sigmoid(W_o . [h_{y-1}, a_y] + b_o)      output gate

with the cell-state update C_y = f_y * C_{y-1} + i_y * C'_y and output
h_y = O_y * tanh(C_y). Weight matrices act on the concatenation
[h_{y-1}, a_y], shape (hidden, hidden + input).

Parameters live in a flat dict under a prefix: "<prefix>W_f", ...,
"<prefix>b_o". The sequence forward keeps per-step activations so the
backward pass can run without recomputation.
"""

from __future__ import annotations

import numpy as np

GATE_NAMES = ("f", "i", "c", "o")


def _sigmoid(x):
    # Both branches keep exp() on negative arguments only.
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def init_lstm_params(rng: np.random.Generator, hidden: int, input_size: int,
                     prefix: str) -> dict:
    """Uniform fan-in initialization; biases start at zero."""
    bound = 1.0 / np.sqrt(hidden + input_size)
    params = {}
    for gate in GATE_NAMES:
        params[f"{prefix}W_{gate}"] = rng.uniform(
            -bound, bound, size=(hidden, hidden + input_size))
        params[f"{prefix}b_{gate}"] = np.zeros(hidden)
    return params


def _gates(params: dict, prefix: str, z: np.ndarray):
    """Pre-activations and activations for all four gates; z = [h, a]."""
    f = _sigmoid(z @ params[f"{prefix}W_f"].T + params[f"{prefix}b_f"])
    i = _sigmoid(z @ params[f"{prefix}W_i"].T + params[f"{prefix}b_i"])
    g = np.tanh(z @ params[f"{prefix}W_c"].T + params[f"{prefix}b_c"])
    o = _sigmoid(z @ params[f"{prefix}W_o"].T + params[f"{prefix}b_o"])
    return f, i, g, o


def lstm_step(params: dict, prefix: str, h_prev: np.ndarray,
              c_prev: np.ndarray, x: np.ndarray):
    """One recurrence step; works on single vectors or (B, .) batches."""
    z = np.concatenate([h_prev, x], axis=-1)
    f, i, g, o = _gates(params, prefix, z)
    c = f * c_prev + i * g
    h = o * np.tanh(c)
    return h, c


def lstm_forward(params: dict, prefix: str, inputs: np.ndarray):
    """Run the cell over a (B, T, input) batch from zero initial state.

    Returns the (B, T, hidden) hidden-state sequence and the cache the
    backward pass needs.
    """
    B, T, _ = inputs.shape
    hidden = params[f"{prefix}b_f"].shape[0]
    h = np.zeros((B, hidden))
    c = np.zeros((B, hidden))
    hs = np.empty((B, T, hidden))
    cache = {"z": [], "f": [], "i": [], "g": [], "o": [], "c": [],
             "c_prev": [], "inputs_shape": inputs.shape}
    for t in range(T):
        z = np.concatenate([h, inputs[:, t, :]], axis=-1)
        f, i, g, o = _gates(params, prefix, z)
        c_prev = c
        c = f * c_prev + i * g
        h = o * np.tanh(c)
        hs[:, t, :] = h
        for key, val in (("z", z), ("f", f), ("i", i), ("g", g), ("o", o),
                         ("c", c), ("c_prev", c_prev)):
            cache[key].append(val)
    return hs, cache


def lstm_backward(params: dict, prefix: str, d_hs: np.ndarray, cache: dict):
    """Backpropagate through time.

    d_hs: gradient of the loss in the hidden-state sequence (B, T, H).
    Returns (parameter gradients, gradient in the inputs).
    """
    B, T, input_size = cache["inputs_shape"]
    hidden = d_hs.shape[2]
    grads = {f"{prefix}W_{g}": np.zeros_like(params[f"{prefix}W_{g}"])
             for g in GATE_NAMES}
    grads.update({f"{prefix}b_{g}": np.zeros_like(params[f"{prefix}b_{g}"])
                  for g in GATE_NAMES})
    d_inputs = np.empty((B, T, input_size))

    dh_next = np.zeros((B, hidden))
    dc_next = np.zeros((B, hidden))
    for t in range(T - 1, -1, -1):
        z = cache["z"][t]
        f, i, g, o = (cache[k][t] for k in ("f", "i", "g", "o"))
        c, c_prev = cache["c"][t], cache["c_prev"][t]
        tanh_c = np.tanh(c)

        dh = d_hs[:, t, :] + dh_next
        do = dh * tanh_c
        dc = dh * o * (1.0 - tanh_c ** 2) + dc_next
        df = dc * c_prev
        di = dc * g
        dg = dc * i
        dc_next = dc * f

        # Chain through the gate nonlinearities to pre-activations.
        da = {
            "f": df * f * (1.0 - f),
            "i": di * i * (1.0 - i),
            "c": dg * (1.0 - g ** 2),
            "o": do * o * (1.0 - o),
        }
        dz = np.zeros_like(z)
        for gate, d_pre in da.items():
            grads[f"{prefix}W_{gate}"] += d_pre.T @ z
            grads[f"{prefix}b_{gate}"] += d_pre.sum(axis=0)
            dz += d_pre @ params[f"{prefix}W_{gate}"]
        dh_next = dz[:, :hidden]
        d_inputs[:, t, :] = dz[:, hidden:]
    return grads, d_inputs
