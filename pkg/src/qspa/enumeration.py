"""Bit-packed enumeration of Pauli error patterns by weight.

Pattern syndromes are computed as XORs of per-(qubit, letter) template
words, with check bits packed 64 per uint64 word. This keeps exhaustive
scans over millions of patterns in vectorized numpy.

Letters are encoded 0 = X, 1 = Y, 2 = Z with interleaved bit pairs
(1,0), (1,1), (0,1).
"""

from __future__ import annotations

import itertools
import math
from typing import Iterator

import numpy as np

from . import gf2

LETTERS = "XYZ"
LETTER_BITS = ((1, 0), (1, 1), (0, 1))


class EnumerationBudgetError(RuntimeError):
    """Raised when an exhaustive scan would exceed its pattern budget."""


def count_patterns(n: int, weight: int) -> int:
    """Number of Pauli patterns on n qubits with exactly `weight` non-identities."""
    return math.comb(n, weight) * 3**weight


def pack_rows(bits: np.ndarray) -> np.ndarray:
    """Pack rows of a (k, nbits) 0/1 array into (k, W) uint64 words."""
    a = np.asarray(bits, dtype=np.uint8) & 1
    if a.ndim == 1:
        a = a[None, :]
    k, nbits = a.shape
    words = max(1, (nbits + 63) // 64)
    padded = np.zeros((k, words * 64), dtype=np.uint8)
    padded[:, :nbits] = a
    return np.packbits(padded, axis=1).view(np.uint64)


class PauliSyndromePack:
    """Per-(qubit, letter) syndrome template words for a parity-check matrix.

    The syndrome of a pattern is the XOR of the templates of its
    non-identity qubits.
    """

    def __init__(self, h: np.ndarray):
        h = gf2.as_bit_matrix(h)
        checks, cols = h.shape
        if cols % 2 != 0:
            raise ValueError("parity-check matrix must have an even column count")
        self.n = cols // 2
        self.checks = checks
        col_words = pack_rows(h.T)  # (2n, W) one row of words per column of h
        self.words = col_words.shape[1]
        templates = np.empty((self.n, 3, self.words), dtype=np.uint64)
        templates[:, 0, :] = col_words[0::2]  # X: x-bit column
        templates[:, 2, :] = col_words[1::2]  # Z: z-bit column
        templates[:, 1, :] = templates[:, 0, :] ^ templates[:, 2, :]
        self.templates = templates

    def pack_syndrome(self, s: np.ndarray) -> np.ndarray:
        s = gf2.as_bits(s)
        if s.shape[0] != self.checks:
            raise ValueError(f"syndrome length {s.shape[0]} != {self.checks} checks")
        return pack_rows(s)[0]

    def batch_syndromes(self, combos: np.ndarray, letters: tuple[int, ...]) -> np.ndarray:
        """Syndrome words for every support in `combos` under fixed letters.

        combos has shape (m, w); the result has shape (m, W).
        """
        acc = self.templates[combos[:, 0], letters[0]].copy()
        for i in range(1, combos.shape[1]):
            acc ^= self.templates[combos[:, i], letters[i]]
        return acc


class PauliBitPack:
    """Packed interleaved bit templates; packs whole patterns for lexicographic compares.

    np.packbits is big-endian within each byte, so comparing packed bytes
    compares the underlying bit strings lexicographically.
    """

    def __init__(self, n: int):
        self.n = n
        eye = np.eye(2 * n, dtype=np.uint8)
        cols = np.packbits(eye, axis=1)  # (2n, nbytes)
        self.nbytes = cols.shape[1]
        templates = np.empty((n, 3, self.nbytes), dtype=np.uint8)
        templates[:, 0, :] = cols[0::2]
        templates[:, 2, :] = cols[1::2]
        templates[:, 1, :] = templates[:, 0, :] ^ templates[:, 2, :]
        self.templates = templates

    def batch_patterns(self, combos: np.ndarray, letters: tuple[int, ...]) -> np.ndarray:
        acc = self.templates[combos[:, 0], letters[0]].copy()
        for i in range(1, combos.shape[1]):
            acc ^= self.templates[combos[:, i], letters[i]]
        return acc

    @staticmethod
    def unpack(packed: np.ndarray, n: int) -> np.ndarray:
        return np.unpackbits(np.asarray(packed, dtype=np.uint8))[: 2 * n].copy()


def iter_combinations(n: int, weight: int, chunk: int = 1 << 15) -> Iterator[np.ndarray]:
    """Yield (m, weight) arrays of qubit supports in lexicographic order."""
    if weight == 0:
        yield np.zeros((1, 0), dtype=np.int64)
        return
    it = itertools.combinations(range(n), weight)
    while True:
        block = list(itertools.islice(it, chunk))
        if not block:
            return
        yield np.asarray(block, dtype=np.int64)


def iter_letterings(weight: int) -> Iterator[tuple[int, ...]]:
    """All letter assignments for a support of the given weight, X < Y < Z order."""
    return itertools.product(range(3), repeat=weight)


def pattern_vector(n: int, support, letters) -> np.ndarray:
    """Interleaved binary vector for a Pauli pattern given support and letters."""
    v = np.zeros(2 * n, dtype=np.uint8)
    for q, let in zip(support, letters):
        x, z = LETTER_BITS[let]
        v[2 * q] = x
        v[2 * q + 1] = z
    return v
