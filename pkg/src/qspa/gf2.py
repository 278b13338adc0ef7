"""Dense GF(2) linear algebra on numpy uint8 arrays.

Vectors and matrices are plain numpy arrays with entries in {0, 1}.
Binary Pauli vectors use the interleaved per-qubit layout
``[x0, z0, x1, z1, ...]``; block-layout helpers convert to and from the
``[x-block | z-block]`` form used by CSS constructions.

Row reduction always picks the leftmost pivot, so solutions and derived
bases are reproducible across runs.
"""

from __future__ import annotations

from typing import Optional

import numpy as np


def as_bits(a) -> np.ndarray:
    """Coerce to a 1-D uint8 array of bits."""
    v = np.asarray(a, dtype=np.uint8) & 1
    if v.ndim != 1:
        raise ValueError(f"expected a vector, got shape {v.shape}")
    return v


def as_bit_matrix(a) -> np.ndarray:
    """Coerce to a 2-D uint8 array of bits."""
    m = np.asarray(a, dtype=np.uint8) & 1
    if m.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {m.shape}")
    return m


def row_reduce(m) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over GF(2) with leftmost-pivot selection.

    Returns the reduced matrix and the list of pivot columns.
    """
    a = as_bit_matrix(m).copy()
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        hits = np.nonzero(a[r:, c])[0]
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
        others = np.nonzero(a[:, c])[0]
        others = others[others != r]
        if others.size:
            a[others] ^= a[r]
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m) -> int:
    """GF(2) rank via row reduction."""
    return len(row_reduce(m)[1])


def solve(m, s) -> Optional[np.ndarray]:
    """One solution x of M x^T = s^T over GF(2), or None if inconsistent.

    Free variables are set to zero, so the returned solution is the
    canonical pivot-column solution (the zero vector for s = 0).
    """
    a = as_bit_matrix(m)
    b = as_bits(s)
    if b.shape[0] != a.shape[0]:
        raise ValueError(f"rhs length {b.shape[0]} != row count {a.shape[0]}")
    aug = np.concatenate([a, b[:, None]], axis=1)
    red, pivots = row_reduce(aug)
    n = a.shape[1]
    if pivots and pivots[-1] == n:
        return None
    x = np.zeros(n, dtype=np.uint8)
    for r, c in enumerate(pivots):
        x[c] = red[r, n]
    return x


def nullspace_basis(m) -> np.ndarray:
    """Basis of the right null space {x : M x^T = 0}, one row per basis vector.

    The row count equals cols - rank(M); an empty basis has shape (0, cols).
    """
    a = as_bit_matrix(m)
    red, pivots = row_reduce(a)
    cols = a.shape[1]
    pivot_set = set(pivots)
    free = [c for c in range(cols) if c not in pivot_set]
    basis = np.zeros((len(free), cols), dtype=np.uint8)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for r, c in enumerate(pivots):
            basis[i, c] = red[r, f]
    return basis


def independent_rows(m) -> list[int]:
    """Indices of a maximal independent row subset, scanning rows in order."""
    work = as_bit_matrix(m).copy()
    piv_rows: list[int] = []
    piv_cols: list[int] = []
    for i in range(work.shape[0]):
        for pr, pc in zip(piv_rows, piv_cols):
            if work[i, pc]:
                work[i] ^= work[pr]
        nz = np.nonzero(work[i])[0]
        if nz.size:
            piv_rows.append(i)
            piv_cols.append(int(nz[0]))
    return piv_rows


def matvec(m, v) -> np.ndarray:
    """M v^T over GF(2)."""
    a = as_bit_matrix(m)
    x = as_bits(v)
    if a.shape[1] != x.shape[0]:
        raise ValueError(f"matrix cols {a.shape[1]} != vector length {x.shape[0]}")
    return (a.astype(np.int64) @ x.astype(np.int64) & 1).astype(np.uint8)


def swap_xz(v) -> np.ndarray:
    """Swap the (x, z) bit pair of every qubit; works on vectors and matrices."""
    a = np.asarray(v, dtype=np.uint8)
    if a.shape[-1] % 2 != 0:
        raise ValueError("interleaved Pauli data must have even length")
    out = np.empty_like(a)
    out[..., 0::2] = a[..., 1::2]
    out[..., 1::2] = a[..., 0::2]
    return out


def symplectic_product(u, v) -> int:
    """Symplectic inner product of two interleaved binary Pauli vectors.

    Equals sum_i (x_i(u) z_i(v) + z_i(u) x_i(v)) mod 2; it is 1 exactly when
    the corresponding Pauli operators anticommute.
    """
    a = as_bits(u)
    b = as_bits(v)
    if a.shape[0] != b.shape[0]:
        raise ValueError(f"length mismatch: {a.shape[0]} vs {b.shape[0]}")
    return int(np.bitwise_and(a, swap_xz(b)).sum() & 1)


def interleave_blocks(x_block, z_block) -> np.ndarray:
    """Combine separate x and z blocks into the interleaved layout."""
    x = as_bits(x_block)
    z = as_bits(z_block)
    if x.shape[0] != z.shape[0]:
        raise ValueError("x and z blocks must have equal length")
    out = np.empty(2 * x.shape[0], dtype=np.uint8)
    out[0::2] = x
    out[1::2] = z
    return out


def split_blocks(v) -> tuple[np.ndarray, np.ndarray]:
    """Split an interleaved vector into its (x-block, z-block) parts."""
    a = as_bits(v)
    if a.shape[0] % 2 != 0:
        raise ValueError("interleaved Pauli data must have even length")
    return a[0::2].copy(), a[1::2].copy()
