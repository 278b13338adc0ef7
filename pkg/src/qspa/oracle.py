"""Exact reference decoders and exhaustive verification machinery.

ml_nd is the exact minimum-weight decoder over a syndrome coset, found by
incremental-weight exhaustive scan; ml_d_star reuses its output with
coset semantics; ml_d maximizes the total coset probability under the
two-BSC weight model. Witness constructions split a minimum-weight
normalizer (or logical) element into two halves sharing a syndrome, at
least one of which the corresponding decoder must get wrong.
enumerate_failures scans every Pauli pattern of a given weight through an
arbitrary decoder handle, and two_cover_analysis enumerates valid
configurations of a double cover of a Tanner graph and their projections.
"""

from __future__ import annotations

from typing import Callable, Optional

import numpy as np

from . import gf2
from .enumeration import (
    EnumerationBudgetError,
    PauliBitPack,
    PauliSyndromePack,
    count_patterns,
    iter_combinations,
    iter_letterings,
    pattern_vector,
)
from .spa import TannerGraph
from .stabilizer import (
    Classification,
    StabilizerCode,
    classify,
    coset_representative,
    min_weight_vector,
    pauli_weight,
    syndrome,
)

DecoderHandle = Callable[[StabilizerCode, np.ndarray], np.ndarray]


class SyndromeTable:
    """Minimum-weight (lexicographically smallest) representative per syndrome.

    Grown incrementally by error weight; entries found at a lower weight
    are never displaced, and equal-weight collisions keep the smaller
    interleaved bit string (packed-byte order equals bit order).
    """

    def __init__(self, code: StabilizerCode, pattern_budget: int = 50_000_000):
        self.code = code
        self.pattern_budget = pattern_budget
        self._syn_pack = PauliSyndromePack(code.h)
        self._bit_pack = PauliBitPack(code.n)
        self._table: dict[bytes, tuple[int, bytes]] = {}
        self.built_weight = -1
        self._scanned = 0

    def grow(self, weight_cap: int) -> None:
        n = self.code.n
        for w in range(self.built_weight + 1, weight_cap + 1):
            self._scanned += count_patterns(n, w)
            if self._scanned > self.pattern_budget:
                raise EnumerationBudgetError(
                    f"syndrome table budget {self.pattern_budget} exceeded at weight {w}"
                )
            if w == 0:
                key = np.zeros(self._syn_pack.words, dtype=np.uint64).tobytes()
                self._table[key] = (0, bytes(self._bit_pack.nbytes))
                self.built_weight = 0
                continue
            table = self._table
            for combos in iter_combinations(n, w):
                for letters in iter_letterings(w):
                    syns = self._syn_pack.batch_syndromes(combos, letters)
                    bits = self._bit_pack.batch_patterns(combos, letters)
                    for i in range(syns.shape[0]):
                        key = syns[i].tobytes()
                        val = bits[i].tobytes()
                        cur = table.get(key)
                        if cur is None:
                            table[key] = (w, val)
                        elif cur[0] == w and val < cur[1]:
                            table[key] = (w, val)
            self.built_weight = w

    def lookup(self, s) -> Optional[tuple[int, np.ndarray]]:
        key = self._syn_pack.pack_syndrome(s).tobytes()
        hit = self._table.get(key)
        if hit is None:
            return None
        w, val = hit
        return w, PauliBitPack.unpack(np.frombuffer(val, dtype=np.uint8), self.code.n)


def ml_nd(
    code: StabilizerCode,
    s,
    weight_cap: Optional[int] = None,
    *,
    pattern_budget: int = 50_000_000,
    table: Optional[SyndromeTable] = None,
) -> Optional[np.ndarray]:
    """Minimum-weight vector with syndrome s; ties break lexicographically.

    Scans weights upward and stops at the first weight with a match.
    Returns None when a finite weight_cap excludes every candidate; a
    shared SyndromeTable may be passed to amortize repeated queries.
    """
    target = gf2.as_bits(s)
    if target.shape[0] != code.h.shape[0]:
        raise ValueError(f"syndrome length {target.shape[0]} != {code.h.shape[0]}")
    cap = weight_cap if weight_cap is not None else code.n
    if table is not None:
        while True:
            if table.built_weight >= 0:
                hit = table.lookup(target)
                if hit is not None:
                    return hit[1]
            if table.built_weight >= cap:
                return None
            table.grow(table.built_weight + 1)
    if not target.any():
        return np.zeros(2 * code.n, dtype=np.uint8)
    syn_pack = PauliSyndromePack(code.h)
    bit_pack = PauliBitPack(code.n)
    goal = syn_pack.pack_syndrome(target)
    scanned = 0
    for w in range(1, cap + 1):
        scanned += count_patterns(code.n, w)
        if scanned > pattern_budget:
            raise EnumerationBudgetError(
                f"pattern budget {pattern_budget} exceeded at weight {w}"
            )
        best: Optional[bytes] = None
        for combos in iter_combinations(code.n, w):
            for letters in iter_letterings(w):
                syns = syn_pack.batch_syndromes(combos, letters)
                hits = np.nonzero((syns == goal).all(axis=1))[0]
                if hits.size:
                    bits = bit_pack.batch_patterns(combos[hits], letters)
                    for row in bits:
                        val = row.tobytes()
                        if best is None or val < best:
                            best = val
        if best is not None:
            return PauliBitPack.unpack(np.frombuffer(best, dtype=np.uint8), code.n)
    return None


def ml_d_star(code: StabilizerCode, s, **kwargs) -> Optional[np.ndarray]:
    """Representative of the degenerate decoder's coset: ml_nd plus coset semantics."""
    return ml_nd(code, s, **kwargs)


def _logical_generators(code: StabilizerCode) -> np.ndarray:
    """2k rows extending the stabilizer basis to a basis of the normalizer."""
    rows = [r for r in code.generators_b]
    base_rank = len(rows)
    out = []
    for cand in code.generators_n:
        stacked = np.vstack(rows + [cand])
        if gf2.rank(stacked) > len(rows):
            rows.append(cand)
            out.append(cand)
        if len(rows) == code.generators_n.shape[0]:
            break
    assert len(out) == 2 * code.k
    return np.array(out, dtype=np.uint8)


def _span(rows: np.ndarray, width: int) -> np.ndarray:
    """All XOR combinations of the given rows (2^len rows of the span)."""
    span = np.zeros((1, width), dtype=np.uint8)
    for r in rows:
        span = np.vstack([span, span ^ r])
    return span


def ml_d(
    code: StabilizerCode,
    s,
    p: float,
    *,
    member_budget: int = 1 << 22,
) -> np.ndarray:
    """Most probable stabilizer coset for the syndrome under depolarizing noise.

    Enumerates all 2^(2k) logical cosets of t(s) + N; each coset's
    probability sums (r)^PauliWt over its 2^(n-k) members with
    r = (p/3)/(1-p), i.e. every non-identity letter costs p/3. As p -> 0
    the winning coset is the one holding the minimum-Pauli-weight vector.
    Ties break toward the lexicographically smallest member; the returned
    representative is the winning coset's smallest member.
    """
    if not 0.0 < p < 1.0:
        raise ValueError("ml_d needs p in (0, 1)")
    n_b = 1 << (code.n - code.k)
    n_cosets = 1 << (2 * code.k)
    if n_b * n_cosets > member_budget:
        raise EnumerationBudgetError(
            f"2^(n-k) * 2^(2k) = {n_b * n_cosets} exceeds budget {member_budget}"
        )
    t = coset_representative(code, s)
    b_span = _span(code.generators_b, 2 * code.n)
    logicals = _logical_generators(code)
    ratio = (p / 3.0) / (1.0 - p)
    best_key: Optional[tuple[float, bytes]] = None
    best_member: Optional[np.ndarray] = None
    for mask in range(n_cosets):
        ell = np.zeros(2 * code.n, dtype=np.uint8)
        for bit in range(2 * code.k):
            if (mask >> bit) & 1:
                ell ^= logicals[bit]
        members = b_span ^ (t ^ ell)
        weights = np.bitwise_or(members[:, 0::2], members[:, 1::2]).sum(
            axis=1, dtype=np.int64
        )
        prob = float(np.sum(ratio**weights))
        packed = np.packbits(members, axis=1)
        lex_row = int(
            min(range(members.shape[0]), key=lambda i: packed[i].tobytes())
        )
        key = (-prob, packed[lex_row].tobytes())
        if best_key is None or key < best_key:
            best_key = key
            best_member = members[lex_row].copy()
    assert best_member is not None
    return best_member


def _split_support(code: StabilizerCode, v: np.ndarray, head: int) -> tuple[np.ndarray, np.ndarray]:
    """Split v into (tail, head-part) keeping whole qubit pairs; head gets the
    lowest-indexed `head` support qubits."""
    support = [q for q in range(code.n) if v[2 * q] or v[2 * q + 1]]
    v2 = np.zeros_like(v)
    for q in support[:head]:
        v2[2 * q] = v[2 * q]
        v2[2 * q + 1] = v[2 * q + 1]
    v1 = v ^ v2
    return v1, v2


def failing_witness_nd(code: StabilizerCode, **kwargs) -> tuple[np.ndarray, np.ndarray]:
    """Two vectors summing to a minimum-weight normalizer element, one of
    which ml_nd misdecodes; the second part carries floor((d_N-1)/2)+1 weight."""
    d_n, v = min_weight_vector(code, "d_n", **kwargs)
    t_n = (d_n - 1) // 2
    v1, v2 = _split_support(code, v, t_n + 1)
    out = ml_nd(code, syndrome(code, v1), weight_cap=max(pauli_weight(v1), pauli_weight(v2)))
    if out is None or (np.array_equal(out, v1) and np.array_equal(out, v2)):
        raise AssertionError("witness construction failed to produce a misdecode")
    return v1, v2


def failing_witness_d(code: StabilizerCode, **kwargs) -> tuple[np.ndarray, np.ndarray]:
    """Two vectors summing to a minimum-weight logical element, at least one of
    which ml_d_star assigns to the wrong stabilizer coset."""
    d, v = min_weight_vector(code, "d", **kwargs)
    t = (d - 1) // 2
    v1, v2 = _split_support(code, v, t + 1)
    out = ml_d_star(
        code, syndrome(code, v1), weight_cap=max(pauli_weight(v1), pauli_weight(v2))
    )
    assert out is not None
    ok1 = classify(code, out, v1) is Classification.SAME_COSET_OF_B
    ok2 = classify(code, out, v2) is Classification.SAME_COSET_OF_B
    if ok1 and ok2:
        raise AssertionError("witness construction failed to produce a coset misdecode")
    return v1, v2


def all_syndromes(code: StabilizerCode) -> np.ndarray:
    """Every achievable syndrome (the column space of h), 2^(n-k) rows."""
    if code.n - code.k > 20:
        raise EnumerationBudgetError("syndrome space too large to enumerate")
    cols = code.h.T
    keep = gf2.independent_rows(cols)
    return _span(cols[keep], code.h.shape[0])


def first_ml_failure_weight(
    code: StabilizerCode,
    mode: str,
    upto: int,
    table: Optional[SyndromeTable] = None,
) -> int:
    """Smallest error weight (scanning 1..upto) the exact decoder gets wrong.

    mode 'nd' counts a failure when the output differs from the error
    vector; mode 'd_star' when the output sits in a different stabilizer
    coset. Weights below `upto` are scanned exhaustively; the scan at
    `upto` stops at the first failure. Returns -1 when nothing fails.
    """
    if mode not in ("nd", "d_star"):
        raise ValueError("mode must be 'nd' or 'd_star'")
    if table is None:
        table = SyndromeTable(code)
    table.grow(upto)
    lut = table._table
    bit_pack = PauliBitPack(code.n)
    syn_pack = PauliSyndromePack(code.h)
    h_t = code.h.astype(np.int64).T
    n_swap_t = gf2.swap_xz(code.generators_n).astype(np.int64).T
    for w in range(1, upto + 1):
        for combos in iter_combinations(code.n, w, chunk=1 << 12):
            for letters in iter_letterings(w):
                patt = bit_pack.batch_patterns(combos, letters)
                syns = syn_pack.batch_syndromes(combos, letters)
                if mode == "nd":
                    for i in range(patt.shape[0]):
                        if lut[syns[i].tobytes()][1] != patt[i].tobytes():
                            return w
                else:
                    errors = np.unpackbits(patt, axis=1)[:, : 2 * code.n]
                    outputs = np.empty_like(errors)
                    for i in range(patt.shape[0]):
                        outputs[i] = PauliBitPack.unpack(
                            np.frombuffer(lut[syns[i].tobytes()][1], dtype=np.uint8),
                            code.n,
                        )
                    diff = (outputs ^ errors).astype(np.int64)
                    # outputs share the error's syndrome by construction,
                    # so only the logical test can fire
                    logical = ((diff @ n_swap_t) & 1).any(axis=1)
                    if logical.any():
                        return w
    return -1


def ml_d_matches_ml_d_star(
    code: StabilizerCode, p: float, table: Optional[SyndromeTable] = None
) -> bool:
    """True when both degenerate decoders pick the same coset for every syndrome."""
    if table is None:
        table = SyndromeTable(code)
    for s in all_syndromes(code):
        a = ml_d(code, s, p)
        b = ml_nd(code, s, table=table)
        if classify(code, a, b) is not Classification.SAME_COSET_OF_B:
            return False
    return True


def enumerate_failures(
    code: StabilizerCode,
    decoder: DecoderHandle,
    weight: int,
    *,
    pattern_budget: int = 2_000_000,
) -> tuple[list[np.ndarray], int]:
    """Run the decoder on the syndrome of every weight-w Pauli pattern.

    A pattern fails when the decoder output is not in the same stabilizer
    coset as the pattern (covering both syndrome mismatches and logical
    errors). Returns the failing patterns in enumeration order.
    """
    total = count_patterns(code.n, weight)
    if total > pattern_budget:
        raise EnumerationBudgetError(
            f"{total} weight-{weight} patterns exceed budget {pattern_budget}"
        )
    h_t = code.h.astype(np.int64).T
    n_swap_t = gf2.swap_xz(code.generators_n).astype(np.int64).T
    failures: list[np.ndarray] = []
    if weight == 0:
        e = np.zeros(2 * code.n, dtype=np.uint8)
        out = decoder(code, syndrome(code, e))
        if classify(code, out, e) is not Classification.SAME_COSET_OF_B:
            failures.append(e)
        return failures, len(failures)
    bit_pack = PauliBitPack(code.n)
    syn_pack = PauliSyndromePack(code.h)
    for combos in iter_combinations(code.n, weight, chunk=1 << 12):
        for letters in iter_letterings(weight):
            patt_bits = bit_pack.batch_patterns(combos, letters)
            errors = np.unpackbits(patt_bits, axis=1)[:, : 2 * code.n]
            syns_packed = syn_pack.batch_syndromes(combos, letters)
            syns = np.unpackbits(
                syns_packed.view(np.uint8).reshape(syns_packed.shape[0], -1), axis=1
            )[:, : code.h.shape[0]]
            outputs = np.empty_like(errors)
            for i in range(errors.shape[0]):
                outputs[i] = decoder(code, syns[i])
            diff = (outputs ^ errors).astype(np.int64)
            mismatch = ((diff @ h_t) & 1).any(axis=1)
            logical = ((diff @ n_swap_t) & 1).any(axis=1)
            failing = np.nonzero(mismatch | logical)[0]
            for i in failing:
                failures.append(errors[i].copy())
    return failures, len(failures)


def enumerate_binary_failures(
    code: StabilizerCode,
    decoder: DecoderHandle,
    weight: int,
    *,
    pattern_budget: int = 2_000_000,
) -> tuple[list[np.ndarray], int]:
    """Like enumerate_failures but over binary patterns of given Hamming weight.

    Counts error vectors with exactly `weight` ones among the 2n bits
    (an x/z pair on one qubit is a single Pauli but two bits), matching
    the per-component view of the decoding graph.
    """
    import itertools

    total = __import__("math").comb(2 * code.n, weight)
    if total > pattern_budget:
        raise EnumerationBudgetError(
            f"{total} binary weight-{weight} patterns exceed budget {pattern_budget}"
        )
    failures: list[np.ndarray] = []
    for support in itertools.combinations(range(2 * code.n), weight):
        e = np.zeros(2 * code.n, dtype=np.uint8)
        e[list(support)] = 1
        out = decoder(code, syndrome(code, e))
        if classify(code, out, e) is not Classification.SAME_COSET_OF_B:
            failures.append(e)
    return failures, len(failures)


def two_cover_analysis(
    graph: TannerGraph,
    s,
    edge_permutations,
    *,
    config_budget: int = 1 << 16,
) -> list[tuple[np.ndarray, np.ndarray]]:
    """All valid configurations of a 2-cover and their projections.

    Every check and variable is duplicated; a variable with a set swap
    flag crosses sheets on its last Tanner edge, so an odd number of
    swapped variables around a cycle lifts it to a single doubled cycle.
    The lifted syndrome repeats the base syndrome on both check copies.
    Each configuration projects to a pseudocodeword by averaging the two
    variable copies, giving components in {0, 1/2, 1}.
    """
    syn = gf2.as_bits(s)
    if syn.shape[0] != graph.checks:
        raise ValueError(f"syndrome length {syn.shape[0]} != {graph.checks}")
    flags = np.asarray(edge_permutations, dtype=bool)
    if flags.shape[0] != graph.variables:
        raise ValueError("need one swap flag per variable")
    edge_check = np.repeat(np.arange(graph.checks), np.diff(graph.check_ptr))
    lifted = np.zeros((2 * graph.checks, 2 * graph.variables), dtype=np.uint8)
    for v in range(graph.variables):
        lo, hi = graph.var_ptr[v], graph.var_ptr[v + 1]
        slots = graph.var_edge[lo:hi]
        for idx, slot in enumerate(slots):
            c = edge_check[slot]
            crossed = bool(flags[v]) and idx == len(slots) - 1
            if crossed:
                lifted[2 * c, 2 * v + 1] = 1
                lifted[2 * c + 1, 2 * v] = 1
            else:
                lifted[2 * c, 2 * v] = 1
                lifted[2 * c + 1, 2 * v + 1] = 1
    lifted_syn = np.repeat(syn, 2)
    base = gf2.solve(lifted, lifted_syn)
    if base is None:
        return []
    null = gf2.nullspace_basis(lifted)
    dim = null.shape[0]
    if 1 << dim > config_budget:
        raise EnumerationBudgetError(
            f"2^{dim} cover configurations exceed budget {config_budget}"
        )
    out = []
    for mask in range(1 << dim):
        cfg = base.copy()
        for bit in range(dim):
            if (mask >> bit) & 1:
                cfg ^= null[bit]
        omega = (cfg[0::2].astype(np.float64) + cfg[1::2].astype(np.float64)) / 2.0
        out.append((cfg, omega))
    return out
