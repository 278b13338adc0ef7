"""Tanner graphs and syndrome sum-product decoding.

The decoder runs an exact tanh-rule sum-product in the LLR domain on a
flooding schedule. Check-to-variable messages carry the syndrome sign
flip, so the all-zero vector decodes the measured coset directly. The
belief vector at termination is exposed as the pseudocodeword
(component i is the belief that bit i equals one).

Hard-decision ties at belief exactly zero resolve to 0, so symmetric
trapped configurations produce a deterministic output.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from . import gf2
from .kernels import spa_core


class DecodeStatus(Enum):
    SYNDROME_MATCHED = "syndrome_matched"
    SYNDROME_MISMATCH = "syndrome_mismatch"


@dataclass
class TannerGraph:
    """Check/variable adjacency in check-major edge-slot form."""

    checks: int
    variables: int
    check_ptr: np.ndarray  # (checks+1,) slot ranges per check
    edge_var: np.ndarray  # (slots,) variable of each slot, ascending within a check
    var_ptr: np.ndarray  # (variables+1,) ranges into var_edge
    var_edge: np.ndarray  # slot ids grouped by variable, ascending
    column_weights: np.ndarray

    @property
    def is_cycle_graph(self) -> bool:
        return bool(self.column_weights.size == 0 or np.all(self.column_weights == 2))

    def edge_other_check(self) -> np.ndarray:
        """For cycle graphs: the opposite endpoint check of each slot's variable."""
        if not self.is_cycle_graph:
            raise ValueError("graph is not a cycle-code graph (column weights != 2)")
        edge_check = np.repeat(np.arange(self.checks), np.diff(self.check_ptr))
        other = np.empty(self.edge_var.shape[0], dtype=np.int64)
        for v in range(self.variables):
            lo, hi = self.var_ptr[v], self.var_ptr[v + 1]
            s0, s1 = self.var_edge[lo], self.var_edge[hi - 1]
            other[s0] = edge_check[s1]
            other[s1] = edge_check[s0]
        return other


def build_tanner(h) -> TannerGraph:
    """Tanner graph of a parity-check matrix: one check per row, one variable per column."""
    m = np.asarray(h, dtype=np.uint8)
    if m.ndim != 2:
        raise ValueError("parity-check matrix must be 2-D")
    checks, variables = m.shape
    rows, cols = np.nonzero(m)
    order = np.lexsort((cols, rows))
    rows = rows[order].astype(np.int64)
    cols = cols[order].astype(np.int64)
    check_ptr = np.zeros(checks + 1, dtype=np.int64)
    np.add.at(check_ptr, rows + 1, 1)
    check_ptr = np.cumsum(check_ptr)
    var_order = np.lexsort((np.arange(cols.shape[0]), cols))
    var_edge = var_order.astype(np.int64)
    var_ptr = np.zeros(variables + 1, dtype=np.int64)
    np.add.at(var_ptr, cols + 1, 1)
    var_ptr = np.cumsum(var_ptr)
    col_weights = m.sum(axis=0, dtype=np.int64)
    return TannerGraph(
        checks=checks,
        variables=variables,
        check_ptr=check_ptr,
        edge_var=cols,
        var_ptr=var_ptr,
        var_edge=var_edge,
        column_weights=col_weights,
    )


def extract_subgraph(h, variable_indices) -> tuple[np.ndarray, np.ndarray]:
    """Submatrix on chosen columns with the checks that touch them.

    Returns (h_sub, check_indices); rows follow check_indices, columns
    follow variable_indices. Bits outside the chosen variables are treated
    as error-free.
    """
    m = gf2.as_bit_matrix(h)
    cols = np.asarray(variable_indices, dtype=np.int64)
    touched = np.nonzero(m[:, cols].any(axis=1))[0]
    return m[np.ix_(touched, cols)].copy(), touched


@dataclass
class DecodeResult:
    output: np.ndarray
    converged: bool
    iterations_used: int
    trials_used: int
    pseudocodeword: np.ndarray
    status: DecodeStatus
    trace: Optional[np.ndarray] = field(default=None, repr=False)


def _beliefs_to_pseudocodeword(belief: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(np.clip(belief, -500.0, 500.0)))


def _run(graph, llrs, rho, s, max_iters, damping, record_trace):
    llrs = np.asarray(llrs, dtype=np.float64)
    syn = gf2.as_bits(s)
    if llrs.shape[0] != graph.variables:
        raise ValueError(f"llr length {llrs.shape[0]} != {graph.variables} variables")
    if syn.shape[0] != graph.checks:
        raise ValueError(f"syndrome length {syn.shape[0]} != {graph.checks} checks")
    if not 0.0 <= damping < 1.0:
        raise ValueError(f"damping must be in [0, 1), got {damping}")
    hard, belief, iters, converged, trace = spa_core(
        graph.check_ptr,
        graph.edge_var,
        graph.var_ptr,
        graph.var_edge,
        syn,
        llrs,
        rho,
        max_iters,
        float(damping),
        record_trace,
    )
    return DecodeResult(
        output=hard,
        converged=bool(converged),
        iterations_used=int(iters),
        trials_used=0,
        pseudocodeword=_beliefs_to_pseudocodeword(belief),
        status=DecodeStatus.SYNDROME_MATCHED if converged else DecodeStatus.SYNDROME_MISMATCH,
        trace=trace[:iters] if record_trace else None,
    )


def spa_decode(
    graph: TannerGraph,
    llrs,
    s,
    max_iters: int = 100,
    damping: float = 0.0,
    *,
    record_trace: bool = False,
) -> DecodeResult:
    """Syndrome sum-product decoding; exits at the first syndrome match."""
    rho = np.ones(graph.variables, dtype=np.float64)
    return _run(graph, llrs, rho, s, max_iters, damping, record_trace)


def rr_spa_decode(
    graph: TannerGraph,
    llrs,
    s,
    max_iters: int = 100,
    weight_interval: tuple[float, float] = (0.8, 1.0),
    rng: Optional[np.random.Generator] = None,
    damping: float = 0.0,
    *,
    record_trace: bool = False,
) -> DecodeResult:
    """Randomly reweighted sum-product decoding.

    Each variable draws a factor uniformly from the interval; the factor
    scales that variable's extrinsic message sums (and belief sum), so the
    degenerate interval [1, 1] reproduces spa_decode exactly. Factors are
    redrawn on every invocation.
    """
    a, b = weight_interval
    if not (0.0 < a <= b):
        raise ValueError(f"need 0 < a <= b, got interval [{a}, {b}]")
    if rng is None:
        rng = np.random.default_rng()
    rho = rng.uniform(a, b, size=graph.variables)
    return _run(graph, llrs, rho, s, max_iters, damping, record_trace)
