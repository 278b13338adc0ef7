"""Pseudocodeword path decomposition and path-based post-processing.

For cycle-code graphs (every variable has exactly two checks) the
variables are edges of a multigraph on the checks. A mismatching SPA
pseudocodeword is decomposed into check-to-check paths: repeatedly walk
from each unsatisfied check along the largest remaining component until
another unsatisfied check is reached, subtract the cheapest walk's
weight along its edges, and keep it when it ends at a different check.
A selector then covers the unsatisfied checks with disjoint paths,
either greedily by cost or via an exact integral LP (minimum-weight
perfect matching on the unsatisfied-check multigraph).

Flipping a repetition-free check-to-check path flips exactly its two end
checks, so any exact disjoint cover yields an output matching the
syndrome.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal, Optional

import numpy as np
from scipy.optimize import linprog

from . import gf2
from .kernels import decompose_core
from .spa import DecodeResult, DecodeStatus, TannerGraph, spa_decode


class NotCycleCodeError(ValueError):
    """Raised when a cycle-code-only operation gets a general graph."""


@dataclass(frozen=True)
class Path:
    """A repetition-free walk between two distinct unsatisfied checks.

    weight is the minimum pseudocodeword component along the path at
    extraction time; cost = (1 - weight) * length drives selection.
    """

    edges: tuple[int, ...]
    end_checks: tuple[int, int]
    weight: float

    def __post_init__(self):
        if not self.edges:
            raise ValueError("a path needs at least one edge")
        if len(set(self.edges)) != len(self.edges):
            raise ValueError("path edges must not repeat")
        if self.end_checks[0] == self.end_checks[1]:
            raise ValueError("path end checks must differ")
        if not 0.0 <= self.weight <= 1.0:
            raise ValueError(f"path weight must be in [0, 1], got {self.weight}")

    @property
    def cost(self) -> float:
        return (1.0 - self.weight) * len(self.edges)


def _require_cycle_graph(graph: TannerGraph) -> None:
    if not graph.is_cycle_graph:
        raise NotCycleCodeError(
            "path decomposition needs a cycle-code graph (all column weights 2)"
        )


def decompose(
    omega, s, graph: TannerGraph
) -> tuple[list[Path], np.ndarray]:
    """Decompose a pseudocodeword into paths between unsatisfied checks.

    Returns the extracted paths and the residual pseudocodeword. The
    residual never goes negative and the procedure terminates because
    every selection either zeroes a component or empties a check's
    remaining weight (checks whose best walk has weight zero drop out).
    """
    _require_cycle_graph(graph)
    w = np.asarray(omega, dtype=np.float64)
    if w.shape[0] != graph.variables:
        raise ValueError(f"pseudocodeword length {w.shape[0]} != {graph.variables}")
    syn = gf2.as_bits(s)
    if syn.shape[0] != graph.checks:
        raise ValueError(f"syndrome length {syn.shape[0]} != {graph.checks}")
    if not syn.any():
        return [], w.copy()
    edges_flat, offsets, ends, weights, residual, ok = decompose_core(
        graph.check_ptr,
        graph.edge_var,
        graph.edge_other_check(),
        w,
        syn,
    )
    if not ok:
        raise RuntimeError("path decomposition failed to terminate within its guard")
    paths = []
    for i in range(ends.shape[0]):
        lo, hi = offsets[i], offsets[i + 1]
        paths.append(
            Path(
                edges=tuple(int(e) for e in edges_flat[lo:hi]),
                end_checks=(int(ends[i, 0]), int(ends[i, 1])),
                weight=float(min(weights[i], 1.0)),
            )
        )
    return paths, residual


def _unsatisfied(s) -> list[int]:
    return [int(j) for j in np.nonzero(gf2.as_bits(s))[0]]


def greedy_select(
    paths: Iterable[Path], s, n_variables: int
) -> tuple[np.ndarray, bool]:
    """Cover unsatisfied checks with disjoint paths, cheapest first.

    Ties break by lowest path index. Available paths shrink to those whose
    end checks are both still unsatisfied and whose edges avoid the
    current support.
    """
    paths = list(paths)
    v = np.zeros(n_variables, dtype=np.uint8)
    remaining = set(_unsatisfied(s))
    available = [
        i for i, p in enumerate(paths) if set(p.end_checks) <= remaining
    ]
    while remaining and available:
        best = min(available, key=lambda i: (paths[i].cost, i))
        chosen = paths[best]
        for e in chosen.edges:
            v[e] = 1
        remaining -= set(chosen.end_checks)
        support = set(np.nonzero(v)[0])
        available = [
            i
            for i in available
            if set(paths[i].end_checks) <= remaining
            and not support.intersection(paths[i].edges)
        ]
    return v, not remaining


def _integral(x: np.ndarray, tol: float = 1e-6) -> bool:
    return bool(np.all(np.abs(x - np.round(x)) <= tol))


def lp_select(
    paths: Iterable[Path], s, n_variables: int
) -> tuple[np.ndarray, bool]:
    """Minimum-cost exact cover of the unsatisfied checks by disjoint paths.

    Solves min sum(cost_i x_i) with sum_{i: j in ends_i} x_i = 1 per
    unsatisfied check j and x in [0, 1], plus x_i + x_j <= 1 for
    edge-overlapping path pairs; an integral optimum is recovered by
    branch and bound with lowest-index branching. Overlapping selections
    are never emitted and infeasibility reports matched = False.
    """
    paths = list(paths)
    v = np.zeros(n_variables, dtype=np.uint8)
    unsat = _unsatisfied(s)
    if not unsat:
        return v, True
    usable = [i for i, p in enumerate(paths) if set(p.end_checks) <= set(unsat)]
    if not usable:
        return v, False
    sub = [paths[i] for i in usable]
    np_paths = len(sub)
    costs = np.array([p.cost for p in sub], dtype=np.float64)
    row_of = {j: r for r, j in enumerate(unsat)}
    a_eq = np.zeros((len(unsat), np_paths))
    for i, p in enumerate(sub):
        for j in p.end_checks:
            a_eq[row_of[j], i] = 1.0
    b_eq = np.ones(len(unsat))
    supports = [set(p.edges) for p in sub]
    overlap_rows = []
    for i in range(np_paths):
        for j in range(i + 1, np_paths):
            if supports[i] & supports[j]:
                row = np.zeros(np_paths)
                row[i] = row[j] = 1.0
                overlap_rows.append(row)
    a_ub = np.array(overlap_rows) if overlap_rows else None
    b_ub = np.ones(len(overlap_rows)) if overlap_rows else None

    def relax(bounds):
        res = linprog(
            costs,
            A_ub=a_ub,
            b_ub=b_ub,
            A_eq=a_eq,
            b_eq=b_eq,
            bounds=bounds,
            method="highs",
        )
        if not res.success:
            return None
        return res.fun, res.x

    def valid_cover(select: list[int]) -> bool:
        covered: set[int] = set()
        used: set[int] = set()
        for i in select:
            ends = set(sub[i].end_checks)
            if covered & ends or used & supports[i]:
                return False
            covered |= ends
            used |= supports[i]
        return covered == set(unsat)

    best_val = np.inf
    best_sel: Optional[list[int]] = None
    stack = [[(0.0, 1.0)] * np_paths]
    while stack:
        bounds = stack.pop()
        out = relax(bounds)
        if out is None:
            continue
        val, x = out
        if val >= best_val - 1e-9:
            continue
        if _integral(x):
            select = [i for i in range(np_paths) if x[i] > 0.5]
            if valid_cover(select):
                best_val = val
                best_sel = select
                continue
        frac = [i for i in range(np_paths) if abs(x[i] - round(x[i])) > 1e-6]
        if frac:
            branch = frac[0]
        else:
            free = [i for i in range(np_paths) if bounds[i][0] != bounds[i][1]]
            if not free:
                continue
            branch = free[0]
        lo = list(bounds)
        lo[branch] = (0.0, 0.0)
        hi = list(bounds)
        hi[branch] = (1.0, 1.0)
        stack.append(lo)
        stack.append(hi)

    if best_sel is None:
        return v, False
    for i in best_sel:
        for e in sub[i].edges:
            v[e] = 1
    return v, True


Selector = Literal["greedy", "lp"]


def spa_pcwd_decode(
    graph: TannerGraph,
    llrs,
    s,
    max_iters: int = 100,
    selector: Selector = "greedy",
    damping: float = 0.0,
) -> DecodeResult:
    """SPA with pseudocodeword path post-processing on syndrome mismatch.

    When the SPA already matches the syndrome its result is returned
    unchanged; otherwise the terminal pseudocodeword is decomposed and the
    chosen selector builds the output from scratch on the selected paths.
    """
    _require_cycle_graph(graph)
    if selector not in ("greedy", "lp"):
        raise ValueError(f"selector must be 'greedy' or 'lp', got {selector!r}")
    result = spa_decode(graph, llrs, s, max_iters, damping)
    if result.status is DecodeStatus.SYNDROME_MATCHED:
        return result
    paths, _residual = decompose(result.pseudocodeword, s, graph)
    pick = greedy_select if selector == "greedy" else lp_select
    v, matched = pick(paths, s, graph.variables)
    syn = gf2.as_bits(s)
    edge_check = np.repeat(np.arange(graph.checks), np.diff(graph.check_ptr))
    ones = v[graph.edge_var].astype(bool)
    parity = (np.bincount(edge_check[ones], minlength=graph.checks) & 1).astype(np.uint8)
    actual = bool(np.array_equal(parity, syn))
    if matched != actual:
        raise RuntimeError("selector soundness violated: matched flag disagrees with parity")
    return DecodeResult(
        output=v,
        converged=actual,
        iterations_used=result.iterations_used,
        trials_used=0,
        pseudocodeword=result.pseudocodeword,
        status=DecodeStatus.SYNDROME_MATCHED if actual else DecodeStatus.SYNDROME_MISMATCH,
    )
