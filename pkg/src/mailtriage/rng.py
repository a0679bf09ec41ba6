"""Deterministic derivation of per-stage random generators.

Every stochastic stage consumes a generator derived from the top-level seed
plus stable stage labels, so full-pipeline reruns are reproducible and
stages cannot perturb each other by consuming different amounts of
randomness.
"""
from __future__ import annotations

import zlib

import numpy as np


def _entropy(seed: int, parts: tuple[str | int, ...]) -> list[int]:
    values = [int(seed)]
    for part in parts:
        if isinstance(part, str):
            values.append(zlib.crc32(part.encode("utf-8")))
        else:
            values.append(int(part))
    return values


def subrng(seed: int, *parts: str | int) -> np.random.Generator:
    """Generator derived from (seed, *parts); identical inputs, identical stream."""
    return np.random.default_rng(np.random.SeedSequence(_entropy(seed, parts)))


def subseed(seed: int, *parts: str | int) -> int:
    """A derived integer seed, for stages that take a seed rather than a generator."""
    return int(np.random.SeedSequence(_entropy(seed, parts)).generate_state(1, np.uint32)[0])
