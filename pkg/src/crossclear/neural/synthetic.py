"""Synthetic desk-scale corpus for exercising the training stack.

Each sample imitates one instrumented crossing traversal: a smooth random
elevation curve (a few sinusoids plus a hump) is the target, the GPS
altitude channel is that curve plus measurement noise, pitch follows the
grade, vertical acceleration follows its rate of change, and the
remaining channels are plausible clutter. Learning to reproduce the
target therefore amounts to denoising the altitude channel, which a
correctly wired model picks up within a few epochs.

Everything is drawn from per-sample PCG64 streams, so corpora are
reproducible and order-independent.
"""

from __future__ import annotations

import numpy as np

from ..profile import ImuGpsSequence, PairedSample
from ..augment import DatasetSplit, split_counts

SAMPLE_DT_S = 0.02


def make_toy_sample(seed: int, index: int, length: int,
                    altitude_noise_std: float = 0.005) -> PairedSample:
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence((seed, index))))
    t = np.linspace(0.0, 1.0, length)

    elevation = np.zeros(length)
    for k in range(1, 4):
        amp = rng.uniform(0.01, 0.05) / k
        freq = rng.uniform(0.5, 1.5) * k
        phase = rng.uniform(0.0, 2.0 * np.pi)
        elevation += amp * np.sin(2.0 * np.pi * freq * t + phase)
    hump_height = rng.uniform(0.05, 0.3)
    hump_center = rng.uniform(0.35, 0.65)
    hump_width = rng.uniform(0.05, 0.15)
    elevation += hump_height * np.exp(-0.5 * ((t - hump_center) / hump_width) ** 2)

    grade = np.gradient(elevation, t)
    speed = rng.uniform(15.0, 25.0) + 0.1 * rng.standard_normal(length)
    channels = np.column_stack([
        0.05 * rng.standard_normal(length),                      # accel_x
        0.05 * rng.standard_normal(length),                      # accel_y
        np.gradient(grade, t) * 1e-3 + 0.05 * rng.standard_normal(length),
        np.degrees(np.arctan(grade)) + 0.1 * rng.standard_normal(length),
        0.2 * rng.standard_normal(length),                       # roll
        speed,
        elevation + altitude_noise_std * rng.standard_normal(length),
    ])
    return PairedSample(
        input=ImuGpsSequence(np.arange(length) * SAMPLE_DT_S, channels,
                             crossing_id=f"toy-{index:04d}"),
        target=elevation,
        crossing_id=f"toy-{index:04d}",
    )


def make_toy_samples(count: int, length: int, seed: int = 0,
                     altitude_noise_std: float = 0.005) -> list:
    if count < 1 or length < 2:
        raise ValueError("need count >= 1 and length >= 2")
    return [make_toy_sample(seed, i, length, altitude_noise_std)
            for i in range(count)]


def make_toy_split(count: int, length: int, seed: int = 0) -> DatasetSplit:
    """A ready-to-train split using the corpus-wide split proportions."""
    samples = make_toy_samples(count, length, seed)
    n_train, n_test, _ = split_counts(count)
    return DatasetSplit(
        train=tuple(samples[:n_train]),
        test=tuple(samples[n_train:n_train + n_test]),
        validation=tuple(samples[n_train + n_test:]),
        split_seed=seed,
    )
