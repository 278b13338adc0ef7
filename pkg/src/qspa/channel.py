"""Depolarizing channel sampling and the two-BSC approximation used for decoding.

A depolarizing channel with probability p leaves a qubit alone with
probability 1-p and applies X, Y, or Z with probability p/3 each. The
decoder treats the x and z bit streams as two independent BSCs with
crossover 2p/3, deliberately ignoring the x/z correlation introduced by Y.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# letter draw -> (x, z) bit pair: 0 = X, 1 = Y, 2 = Z
_X_BIT = np.array([1, 1, 0], dtype=np.uint8)
_Z_BIT = np.array([0, 1, 1], dtype=np.uint8)


@dataclass(frozen=True)
class ChannelModel:
    """Depolarizing probability with its derived BSC crossover and LLR."""

    p: float

    def __post_init__(self):
        if not 0.0 <= self.p < 1.0:
            raise ValueError(f"depolarizing probability must be in [0, 1), got {self.p}")

    @property
    def crossover(self) -> float:
        return 2.0 * self.p / 3.0

    @property
    def llr(self) -> float:
        """log((1-q)/q) for q = 2p/3; positive below p = 3/4, infinite at p = 0."""
        q = self.crossover
        if q == 0.0:
            raise ValueError("LLR is infinite at p = 0")
        return math.log((1.0 - q) / q)


def sample_error(model: ChannelModel, n: int, rng: np.random.Generator) -> np.ndarray:
    """Interleaved error vector: each qubit gets I w.p. 1-p, else X/Y/Z uniformly."""
    hit = rng.random(n) < model.p
    letters = rng.integers(0, 3, size=n)
    e = np.zeros(2 * n, dtype=np.uint8)
    e[0::2] = np.where(hit, _X_BIT[letters], 0)
    e[1::2] = np.where(hit, _Z_BIT[letters], 0)
    return e


def llr_vector(model: ChannelModel, n: int) -> np.ndarray:
    """Uniform prior LLRs for the 2n bit variables of an n-qubit code.

    Returned as a vector so per-position reweighting composes cleanly.
    """
    return np.full(2 * n, model.llr, dtype=np.float64)
