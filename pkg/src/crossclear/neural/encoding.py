"""Sinusoidal positional encoding.

Entry (p, 2l) is sin(p / 10000^(2l/d)) and entry (p, 2l+1) is the cosine
of the same angle, so each (sine, cosine) pair of a row has unit norm and
every entry lies in [-1, 1].
"""

from __future__ import annotations

import numpy as np


def positional_encoding(length: int, d: int) -> np.ndarray:
    """(length x d) table of position features; d must be even."""
    if d % 2 != 0 or d < 2:
        raise ValueError(f"d must be a positive even number, got {d}")
    if length < 1:
        raise ValueError(f"length must be >= 1, got {length}")
    positions = np.arange(length, dtype=np.float64)[:, None]
    pair = np.arange(d // 2, dtype=np.float64)[None, :]
    angles = positions / np.power(10000.0, 2.0 * pair / d)
    table = np.empty((length, d), dtype=np.float64)
    table[:, 0::2] = np.sin(angles)
    table[:, 1::2] = np.cos(angles)
    return table
