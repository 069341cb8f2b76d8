"""Dataset augmentation and deterministic splitting.

Two augmentation techniques expand a small corpus of paired samples:

    technique 1: add Gaussian noise to the GPS-altitude input channel;
    technique 2: add Gaussian noise to the elevation target, then split
        the sequence into its even-indexed and odd-indexed halves.

Noise is zero-mean with standard deviation ``fraction x (max - min)`` of
the series being perturbed (default fraction 0.04), drawn per realization
from an independent, named stream: PCG64 seeded with
``SeedSequence((seed, technique_id, sequence_index))``. Streams depend
only on those integers, so augmenting sequences in parallel yields the
same corpus as augmenting sequentially.

With the default replication counts (42 noise copies per original, plus
21 noisy copies each split in two) a 127-sample corpus grows to
127 x (42 + 2 x 21) = 10668 samples, split 7888/1387/1393 into
train/test/validation by a seeded shuffle.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .profile import (
    ImuGpsSequence,
    PairedSample,
    ALTITUDE_CHANNEL,
    target_as_profile_csv,
    write_imugps_csv,
    MANIFEST_HEADER,
)

# Split proportions (train, test, validation).
_SPLIT_NUMERATORS = (7888, 1387, 1393)
_SPLIT_DENOMINATOR = 10668

# Stream namespace ids: 0 reserved for the shuffle, 1 and 2 for the
# augmentation techniques.
_SPLIT_STREAM = 0
TECHNIQUE_NOISE = 1
TECHNIQUE_NOISE_SPLIT = 2


@dataclass(frozen=True)
class AugmentConfig:
    """Knobs for build_dataset; defaults reproduce the 10668-sample corpus."""

    noise_fraction: float = 0.04
    noise_realizations_t1: int = 42
    noise_realizations_t2: int = 21
    seed: int = 0

    def __post_init__(self):
        if self.noise_fraction < 0:
            raise ValueError(f"noise_fraction must be >= 0, got {self.noise_fraction}")
        if self.noise_realizations_t1 < 1 or self.noise_realizations_t2 < 1:
            raise ValueError("noise realization counts must be >= 1")


@dataclass(frozen=True)
class DatasetSplit:
    """Disjoint train/test/validation partition of the augmented corpus."""

    train: tuple
    test: tuple
    validation: tuple
    split_seed: int

    def __len__(self) -> int:
        return len(self.train) + len(self.test) + len(self.validation)


def _stream(seed: int, technique_id: int, sequence_index: int) -> np.random.Generator:
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence((seed, technique_id, sequence_index)))
    )


def noise_augment(sample: PairedSample, n: int, fraction: float, seed: int,
                  *, perturb_target: bool = False,
                  sequence_index: int = 0) -> list[PairedSample]:
    """n independent noisy copies of one sample.

    perturb_target False (technique 1) adds noise to the altitude
    channel; True (technique 2) adds it to the target. The noise std is
    fraction x range of the unperturbed series, so a constant series
    comes back unchanged.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if fraction < 0:
        raise ValueError(f"fraction must be >= 0, got {fraction}")
    technique = TECHNIQUE_NOISE_SPLIT if perturb_target else TECHNIQUE_NOISE
    rng = _stream(seed, technique, sequence_index)
    series = sample.target if perturb_target else sample.input.channels[:, ALTITUDE_CHANNEL]
    std = fraction * (series.max() - series.min())

    out = []
    for j in range(n):
        noise = rng.normal(0.0, std, size=len(series)) if std > 0 else np.zeros(len(series))
        base_id = sample.crossing_id or f"sample{sequence_index:04d}"
        if perturb_target:
            out.append(PairedSample(
                input=sample.input,
                target=sample.target + noise,
                crossing_id=f"{base_id}-t2-{j:03d}",
            ))
        else:
            channels = sample.input.channels.copy()
            channels[:, ALTITUDE_CHANNEL] += noise
            out.append(PairedSample(
                input=ImuGpsSequence(sample.input.timestamps, channels,
                                     crossing_id=sample.input.crossing_id),
                target=sample.target,
                crossing_id=f"{base_id}-t1-{j:03d}",
            ))
    return out


def odd_even_split(sample: PairedSample) -> tuple:
    """Halve a sample into (even-indexed rows, odd-indexed rows).

    Interleaving the two outputs reconstructs the input exactly.
    """
    if len(sample.input) < 2:
        raise ValueError("need at least 2 rows to split")
    base_id = sample.crossing_id or "sample"
    halves = []
    for tag, start in (("even", 0), ("odd", 1)):
        halves.append(PairedSample(
            input=ImuGpsSequence(
                sample.input.timestamps[start::2],
                sample.input.channels[start::2],
                crossing_id=sample.input.crossing_id,
            ),
            target=sample.target[start::2],
            crossing_id=f"{base_id}-{tag}",
        ))
    return tuple(halves)


def split_counts(total: int) -> tuple:
    """Train/test/validation sizes for a corpus of the given size.

    Rounds train and test to the corpus-wide proportions and gives the
    remainder to validation; at the reference size 10668 this lands on
    exactly 7888/1387/1393.
    """
    n_train = round(total * _SPLIT_NUMERATORS[0] / _SPLIT_DENOMINATOR)
    n_test = round(total * _SPLIT_NUMERATORS[1] / _SPLIT_DENOMINATOR)
    n_val = total - n_train - n_test
    if min(n_train, n_test, n_val) < 0:
        raise ValueError(f"corpus of {total} samples is too small to split")
    return n_train, n_test, n_val


def build_dataset(originals, cfg: AugmentConfig) -> DatasetSplit:
    """Augment a corpus with both techniques and split it.

    Per original: t1 noisy copies (altitude channel) plus t2 noisy copies
    of the target each halved even/odd, so the corpus grows by a factor
    of t1 + 2*t2. The shuffle uses its own named stream of cfg.seed, so
    the partition is independent of the noise draws.
    """
    originals = list(originals)
    if not originals:
        raise ValueError("no samples to augment")

    samples = []
    for i, original in enumerate(originals):
        samples.extend(noise_augment(
            original, cfg.noise_realizations_t1, cfg.noise_fraction, cfg.seed,
            perturb_target=False, sequence_index=i,
        ))
    for i, original in enumerate(originals):
        for noisy in noise_augment(
            original, cfg.noise_realizations_t2, cfg.noise_fraction, cfg.seed,
            perturb_target=True, sequence_index=i,
        ):
            samples.extend(odd_even_split(noisy))

    order = _stream(cfg.seed, _SPLIT_STREAM, 0).permutation(len(samples))
    n_train, n_test, _ = split_counts(len(samples))
    shuffled = [samples[k] for k in order]
    return DatasetSplit(
        train=tuple(shuffled[:n_train]),
        test=tuple(shuffled[n_train:n_train + n_test]),
        validation=tuple(shuffled[n_train + n_test:]),
        split_seed=cfg.seed,
    )


def write_dataset(split: DatasetSplit, out_dir) -> dict:
    """Persist a split as per-sample CSV pairs plus per-part manifests.

    Layout: <out_dir>/<part>/<id>.imu.csv + <id>.target.csv and a
    <out_dir>/<part>/manifest.csv listing the pairs. Returns
    {part: manifest path}.
    """
    out_dir = Path(out_dir)
    manifests = {}
    for part in ("train", "test", "validation"):
        part_dir = out_dir / part
        part_dir.mkdir(parents=True, exist_ok=True)
        lines = [",".join(MANIFEST_HEADER)]
        for sample in getattr(split, part):
            sid = sample.crossing_id or "sample"
            imu_name = f"{sid}.imu.csv"
            target_name = f"{sid}.target.csv"
            (part_dir / imu_name).write_text(write_imugps_csv(sample.input),
                                             encoding="utf-8")
            (part_dir / target_name).write_text(target_as_profile_csv(sample),
                                                encoding="utf-8")
            lines.append(f"{sid},{imu_name},{target_name}")
        manifest = part_dir / "manifest.csv"
        manifest.write_text("\n".join(lines) + "\n", encoding="utf-8")
        manifests[part] = manifest
    return manifests
