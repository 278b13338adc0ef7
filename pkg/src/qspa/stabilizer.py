"""Stabilizer code model: constructions, syndromes, coset tools, and distances.

A code is held in its binary symplectic representation. Pauli vectors are
interleaved uint8 arrays [x0, z0, x1, z1, ...]; the stabilizer label code B
is self-orthogonal under the symplectic product and the normalizer label
code N is its symplectic dual. The parity-check matrix `h` of N is the
stabilizer generator list with the per-qubit (x, z) pair swapped, so
`h @ e` computes symplectic products of the error against the generators.
Redundant generator rows are kept in `h` (the decoding factor graph uses
every check); the basis `generators_b` tracks the true dimension.
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Optional

import numpy as np

from . import gf2
from .enumeration import (
    EnumerationBudgetError,
    LETTERS,
    PauliSyndromePack,
    count_patterns,
    iter_combinations,
    iter_letterings,
    pattern_vector,
)


class CodeFormatError(ValueError):
    """Raised for unparseable code files."""


class CodeInvariantError(ValueError):
    """Raised when a construction violates a stabilizer-code invariant."""


class Classification(Enum):
    SAME_COSET_OF_B = "same_coset_of_b"
    LOGICAL_ERROR = "logical_error"
    SYNDROME_MISMATCH = "syndrome_mismatch"


_LETTER_TO_BITS = {"X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_BITS_TO_LETTER = {(1, 0): "X", (1, 1): "Y", (0, 1): "Z"}


def pauli_from_ops(n: int, ops) -> np.ndarray:
    """Interleaved vector from (qubit, letter) pairs, e.g. [(3, "X"), (7, "Z")]."""
    v = np.zeros(2 * n, dtype=np.uint8)
    for q, letter in ops:
        if not 0 <= q < n:
            raise ValueError(f"qubit index {q} out of range for n={n}")
        try:
            x, z = _LETTER_TO_BITS[letter.upper()]
        except KeyError:
            raise ValueError(f"unknown Pauli letter {letter!r}") from None
        if v[2 * q] or v[2 * q + 1]:
            raise ValueError(f"qubit {q} assigned twice")
        v[2 * q] = x
        v[2 * q + 1] = z
    return v


def ops_from_pauli(v) -> list[tuple[int, str]]:
    """(qubit, letter) pairs of the non-identity positions of a Pauli vector."""
    bits = gf2.as_bits(v)
    out = []
    for q in range(bits.shape[0] // 2):
        pair = (int(bits[2 * q]), int(bits[2 * q + 1]))
        if pair != (0, 0):
            out.append((q, _BITS_TO_LETTER[pair]))
    return out


def format_pauli(v) -> str:
    """Index notation for a Pauli vector, e.g. '3:X 7:Z'; 'I' for identity."""
    ops = ops_from_pauli(v)
    if not ops:
        return "I"
    return " ".join(f"{q}:{letter}" for q, letter in ops)


def pauli_weight(v) -> int:
    """Number of qubits with a non-identity (x, z) pair."""
    bits = gf2.as_bits(v)
    if bits.shape[0] % 2 != 0:
        raise ValueError("Pauli vector must have even length")
    return int(np.bitwise_or(bits[0::2], bits[1::2]).sum())


@dataclass(eq=False)
class StabilizerCode:
    """A stabilizer code in binary symplectic form.

    h has one row per stabilizer generator (redundant rows kept) and is the
    parity-check matrix of the normalizer label code N; generators_b is an
    (n-k) x 2n basis of the stabilizer label code B; generators_n is an
    (n+k) x 2n basis of N.
    """

    n: int
    k: int
    h: np.ndarray
    generators_b: np.ndarray
    generators_n: np.ndarray
    is_cycle_code: bool
    name: str = ""

    @property
    def stabilizer_rows(self) -> np.ndarray:
        """Raw generator rows (h with each (x, z) pair swapped back)."""
        return gf2.swap_xz(self.h)

    def __repr__(self):
        label = self.name or "code"
        return (
            f"StabilizerCode({label}: n={self.n}, k={self.k}, "
            f"checks={self.h.shape[0]}, cycle={self.is_cycle_code})"
        )


def code_from_stabilizers(
    n: int, rows, *, expected_k: Optional[int] = None, name: str = ""
) -> StabilizerCode:
    """Build and validate a code from raw stabilizer generator rows.

    Rejects non-commuting generator pairs with a diagnostic naming the
    offending rows. k is derived from the generator rank and checked
    against expected_k when given.
    """
    rows = gf2.as_bit_matrix(rows)
    if rows.shape[1] != 2 * n:
        raise CodeInvariantError(
            f"generator rows have length {rows.shape[1]}, expected {2 * n}"
        )
    if rows.shape[0] == 0:
        raise CodeInvariantError("no stabilizer generators given")

    swapped = gf2.swap_xz(rows)
    comm = (rows.astype(np.int64) @ swapped.T.astype(np.int64)) & 1
    bad = np.argwhere(comm)
    if bad.size:
        i, j = int(bad[0][0]), int(bad[0][1])
        raise CodeInvariantError(
            f"generators {i} and {j} anticommute: "
            f"{format_pauli(rows[i])} vs {format_pauli(rows[j])}"
        )

    keep = gf2.independent_rows(rows)
    generators_b = rows[keep].copy()
    k = n - len(keep)
    if k < 0:
        raise CodeInvariantError(f"generator rank {len(keep)} exceeds n={n}")
    if expected_k is not None and k != expected_k:
        raise CodeInvariantError(
            f"generator rank {len(keep)} gives k={k}, expected k={expected_k}"
        )

    h = swapped
    generators_n = gf2.nullspace_basis(h)
    if generators_n.shape[0] != n + k:
        raise CodeInvariantError(
            f"normalizer dimension {generators_n.shape[0]} != n+k = {n + k}"
        )
    if np.any((h.astype(np.int64) @ generators_b.T.astype(np.int64)) & 1):
        raise CodeInvariantError("stabilizer rows do not lie inside the normalizer")

    col_weights = h.sum(axis=0, dtype=np.int64)
    is_cycle = bool(np.all(col_weights == 2))
    return StabilizerCode(
        n=n,
        k=k,
        h=h,
        generators_b=generators_b,
        generators_n=generators_n,
        is_cycle_code=is_cycle,
        name=name,
    )


# ---------------------------------------------------------------------------
# toric code
#
# Qubits are the edges of an L x L torus, indexed row-major with all
# horizontal edges before all vertical edges:
#   h(i, j) = i*L + j          connects vertex (i, j) to (i, j+1 mod L)
#   v(i, j) = L^2 + i*L + j    connects vertex (i, j) to (i+1 mod L, j)
# Checks are ordered star(0,0) .. star(L-1,L-1), then plaquettes likewise.


def toric_horizontal(L: int, i: int, j: int) -> int:
    return (i % L) * L + (j % L)


def toric_vertical(L: int, i: int, j: int) -> int:
    return L * L + (i % L) * L + (j % L)


def build_toric(L: int) -> StabilizerCode:
    """Toric code on an L x L torus: n = 2L^2 qubits, k = 2.

    Stars put X on the four edges at a vertex, plaquettes put Z on the four
    edges around a face. All 2L^2 checks are kept (two are redundant), and
    every column of h has weight two, so the code is a quantum cycle code.
    """
    if L < 2:
        raise ValueError("toric code needs L >= 2")
    n = 2 * L * L
    rows = []
    for i in range(L):
        for j in range(L):
            star = [
                (toric_horizontal(L, i, j), "X"),
                (toric_horizontal(L, i, j - 1), "X"),
                (toric_vertical(L, i, j), "X"),
                (toric_vertical(L, i - 1, j), "X"),
            ]
            rows.append(pauli_from_ops(n, star))
    for i in range(L):
        for j in range(L):
            plaq = [
                (toric_horizontal(L, i, j), "Z"),
                (toric_horizontal(L, i + 1, j), "Z"),
                (toric_vertical(L, i, j), "Z"),
                (toric_vertical(L, i, j + 1), "Z"),
            ]
            rows.append(pauli_from_ops(n, plaq))
    return code_from_stabilizers(n, np.array(rows), expected_k=2, name=f"toric:{L}")


# ---------------------------------------------------------------------------
# bicycle code


def build_bicycle(n: int, k: int, row_weight: int, seed: int) -> StabilizerCode:
    """CSS bicycle code from a seeded random circulant.

    A circulant C of size n/2 with row weight row_weight/2 is drawn from the
    seed; the classical block is [C | C^T], from which rows are deleted one
    at a time (keeping column weights as balanced as possible, ties broken
    by lowest row index) until (n-k)/2 remain. X-type and Z-type stabilizers
    both use the surviving block, giving n-k generators of weight row_weight.
    """
    if n % 2 != 0:
        raise ValueError("bicycle code needs even n")
    if row_weight % 2 != 0:
        raise ValueError("bicycle code needs even row weight")
    if not 0 < k < n:
        raise ValueError("need 0 < k < n")
    if (n - k) % 2 != 0:
        raise ValueError("n - k must be even for the CSS split")
    m = n // 2
    half_weight = row_weight // 2
    if half_weight > m:
        raise ValueError(f"row weight {row_weight} exceeds circulant size {m}")

    rng = np.random.default_rng(seed)
    support = np.sort(rng.choice(m, size=half_weight, replace=False))
    first = np.zeros(m, dtype=np.uint8)
    first[support] = 1
    circ = np.array([np.roll(first, i) for i in range(m)], dtype=np.uint8)
    block = np.hstack([circ, circ.T])

    target = (n - k) // 2
    alive = list(range(m))
    col_sums = block.sum(axis=0, dtype=np.int64)
    while len(alive) > target:
        sub = block[alive].astype(np.int64)
        residual = col_sums[None, :] - sub
        variance = residual.var(axis=1)
        drop = int(np.argmin(variance))
        col_sums = col_sums - block[alive[drop]]
        del alive[drop]
    kept = block[alive]

    zeros = np.zeros_like(kept)
    x_rows = np.empty((kept.shape[0], 2 * n), dtype=np.uint8)
    x_rows[:, 0::2] = kept
    x_rows[:, 1::2] = zeros
    z_rows = np.empty_like(x_rows)
    z_rows[:, 0::2] = zeros
    z_rows[:, 1::2] = kept
    rows = np.vstack([x_rows, z_rows])
    return code_from_stabilizers(
        n, rows, expected_k=k, name=f"bicycle:{n},{k},{row_weight},{seed}"
    )


# ---------------------------------------------------------------------------
# code files
#
# Format: optional '#' comments, then a header line "n k rows", then one
# line per generator listing "index:letter" terms with 0-based qubit
# indices, e.g. "3:X 7:Z 9:Y".


def _strip_lines(text: str) -> list[str]:
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


def loads_code(text: str, *, name: str = "") -> StabilizerCode:
    lines = _strip_lines(text)
    if not lines:
        raise CodeFormatError("empty code file")
    header = lines[0].split()
    if len(header) != 3:
        raise CodeFormatError(f"bad header {lines[0]!r}, expected 'n k rows'")
    try:
        n, k, nrows = (int(tok) for tok in header)
    except ValueError:
        raise CodeFormatError(f"non-integer header {lines[0]!r}") from None
    body = lines[1:]
    if len(body) != nrows:
        raise CodeFormatError(f"expected {nrows} generator rows, found {len(body)}")
    rows = []
    for ln, line in enumerate(body, start=2):
        ops = []
        for tok in line.split():
            try:
                idx, letter = tok.split(":")
                ops.append((int(idx), letter))
            except ValueError:
                raise CodeFormatError(f"line {ln}: bad term {tok!r}") from None
        try:
            rows.append(pauli_from_ops(n, ops))
        except ValueError as exc:
            raise CodeFormatError(f"line {ln}: {exc}") from None
    try:
        return code_from_stabilizers(n, np.array(rows), expected_k=k, name=name)
    except CodeInvariantError as exc:
        raise CodeInvariantError(f"{name or 'code file'}: {exc}") from None


def load_code(path) -> StabilizerCode:
    """Load a stabilizer code from a generator file (see module format notes)."""
    p = Path(path)
    return loads_code(p.read_text(), name=p.stem)


def dump_code(code: StabilizerCode, path) -> None:
    """Write the raw generator rows of a code in the text format."""
    lines = [f"{code.n} {code.k} {code.h.shape[0]}"]
    for row in code.stabilizer_rows:
        lines.append(format_pauli(row))
    Path(path).write_text("\n".join(lines) + "\n")


def parse_alist(path) -> np.ndarray:
    """Dense parity-check matrix from a sparse alist file."""
    tokens = Path(path).read_text().split()
    if len(tokens) < 4:
        raise CodeFormatError("alist file too short")
    vals = [int(t) for t in tokens]
    n, m = vals[0], vals[1]
    max_col, _max_row = vals[2], vals[3]
    col_weights = vals[4 : 4 + n]
    pos = 4 + n + m  # skip row weights
    h = np.zeros((m, n), dtype=np.uint8)
    for col in range(n):
        entries = vals[pos : pos + max_col]
        pos += max_col
        seen = 0
        for e in entries:
            if e == 0:
                continue
            h[e - 1, col] = 1
            seen += 1
        if seen != col_weights[col]:
            raise CodeFormatError(f"alist column {col}: weight mismatch")
    return h


def load_css_alist(x_path, z_path) -> StabilizerCode:
    """CSS code from a pair of alist parity-check matrices (X and Z sectors)."""
    hx = parse_alist(x_path)
    hz = parse_alist(z_path)
    if hx.shape[1] != hz.shape[1]:
        raise CodeFormatError("X and Z alist files disagree on qubit count")
    n = hx.shape[1]
    rows = []
    for row in hx:
        rows.append(gf2.interleave_blocks(row, np.zeros(n, dtype=np.uint8)))
    for row in hz:
        rows.append(gf2.interleave_blocks(np.zeros(n, dtype=np.uint8), row))
    name = f"css:{Path(x_path).stem},{Path(z_path).stem}"
    return code_from_stabilizers(n, np.array(rows), name=name)


def packaged_code_path(name: str) -> Path:
    """Path of a code file shipped with the package (e.g. 'shor', 'five_qubit')."""
    res = importlib.resources.files("qspa").joinpath("data", f"{name}.code")
    return Path(str(res))


# ---------------------------------------------------------------------------
# syndromes, cosets, classification


def syndrome(code: StabilizerCode, e) -> np.ndarray:
    """s = H e^T, one bit per stabilizer generator."""
    v = gf2.as_bits(e)
    if v.shape[0] != 2 * code.n:
        raise ValueError(f"error length {v.shape[0]} != {2 * code.n}")
    return gf2.matvec(code.h, v)


def coset_representative(code: StabilizerCode, s) -> np.ndarray:
    """Deterministic vector t(s) with H t(s)^T = s^T (pivot-column solution)."""
    x = gf2.solve(code.h, s)
    if x is None:
        raise ValueError("inconsistent syndrome: not in the column space of h")
    return x


def classify(code: StabilizerCode, v, e) -> Classification:
    """Relate a decoder output v to the actual error e.

    SAME_COSET_OF_B when v + e is a stabilizer element, LOGICAL_ERROR when
    it is in the normalizer but not the stabilizer, SYNDROME_MISMATCH when
    the two vectors have different syndromes.
    """
    a = gf2.as_bits(v)
    b = gf2.as_bits(e)
    if a.shape[0] != 2 * code.n or b.shape[0] != 2 * code.n:
        raise ValueError("classify needs full-length Pauli vectors")
    diff = a ^ b
    if np.any(gf2.matvec(code.h, diff)):
        return Classification.SYNDROME_MISMATCH
    sympl = gf2.matvec(gf2.swap_xz(code.generators_n), diff)
    if np.any(sympl):
        return Classification.LOGICAL_ERROR
    return Classification.SAME_COSET_OF_B


# ---------------------------------------------------------------------------
# brute-force distances


def min_weight_vector(
    code: StabilizerCode,
    mode: str,
    *,
    max_weight: Optional[int] = None,
    size_cap: int = 120,
    pattern_budget: int = 2_000_000_000,
) -> tuple[int, np.ndarray]:
    """Minimum-weight element of N (mode 'd_n') or N \\ B (mode 'd') with witness.

    Incremental-weight exhaustive scan over Pauli patterns with zero
    syndrome; candidates are classified against B for mode 'd'. Guarded by
    a code-size cap and a scanned-pattern budget.
    """
    if mode not in ("d", "d_n"):
        raise ValueError(f"mode must be 'd' or 'd_n', got {mode!r}")
    if 2 * code.n > size_cap:
        raise EnumerationBudgetError(
            f"2n = {2 * code.n} exceeds the enumeration size cap {size_cap}"
        )
    pack = PauliSyndromePack(code.h)
    n_swapped = gf2.swap_xz(code.generators_n).astype(np.int64)
    cap = max_weight if max_weight is not None else code.n
    scanned = 0
    for w in range(1, cap + 1):
        scanned += count_patterns(code.n, w)
        if scanned > pattern_budget:
            raise EnumerationBudgetError(
                f"pattern budget {pattern_budget} exceeded at weight {w}"
            )
        for combos in iter_combinations(code.n, w):
            for letters in iter_letterings(w):
                syn = pack.batch_syndromes(combos, letters)
                hits = np.nonzero(~syn.any(axis=1))[0]
                for idx in hits:
                    vec = pattern_vector(code.n, combos[idx], letters)
                    if mode == "d_n":
                        return w, vec
                    if np.any((n_swapped @ vec.astype(np.int64)) & 1):
                        return w, vec
    raise EnumerationBudgetError(f"no element found up to weight {cap}")


def min_distance(code: StabilizerCode, mode: str, **kwargs) -> int:
    """Exact minimum Pauli weight over N \\ B ('d') or over N ('d_n')."""
    weight, _ = min_weight_vector(code, mode, **kwargs)
    return weight
