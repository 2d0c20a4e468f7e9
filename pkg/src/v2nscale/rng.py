"""Seedable, named random streams.

Every run derives all of its randomness from a single integer seed. Each
consumer (environment, agent, episode scheduler, ...) gets its own named
substream so that results do not depend on the order in which modules
happen to draw random numbers.
"""

import zlib

import numpy as np


def _label_entropy(labels: tuple[str, ...]) -> list[int]:
    return [zlib.crc32(label.encode("utf-8")) for label in labels]


def stream(seed: int, *labels: str) -> np.random.Generator:
    """Return a Generator for the substream identified by ``labels``.

    Identical (seed, labels) always yields an identical stream; distinct
    labels yield statistically independent streams.
    """
    entropy = [int(seed) & 0xFFFFFFFFFFFFFFFF] + _label_entropy(labels)
    return np.random.default_rng(np.random.SeedSequence(entropy))
