"""Hot decoding kernels: numba-compiled with a numpy/python fallback.

The backend is chosen once at import from the QSPA_BACKEND environment
variable: "auto" (default, numba when importable), "numba", or "numpy".
The sum-product kernel has a vectorized pure-numpy twin that performs the
same per-node arithmetic in the same order; the path-decomposition kernel
falls back to the interpreted version of the identical function. The
benchmark script compares both paths directly.
"""

from __future__ import annotations

import math
import os

import numpy as np

MSG_CLIP = 30.0  # LLR-domain message clip; bounds achievable belief extremity
_PROD_MAX = 1.0 - 1e-12  # tanh-product clamp keeps atanh finite


def _resolve_backend() -> str:
    choice = os.environ.get("QSPA_BACKEND", "auto").lower()
    if choice not in ("auto", "numba", "numpy"):
        raise ValueError(f"QSPA_BACKEND must be auto|numba|numpy, got {choice!r}")
    if choice == "numpy":
        return "numpy"
    try:
        import numba  # noqa: F401
    except ImportError:
        if choice == "numba":
            raise
        return "numpy"
    return "numba"


BACKEND = _resolve_backend()


# ---------------------------------------------------------------------------
# sum-product core
#
# Graph layout: edge slots are check-major (slot ranges check_ptr[c]:
# check_ptr[c+1] list the variables of check c in ascending column order);
# var_ptr/var_edge group the same slots by variable. Messages live on slots.


def _spa_core_loops(
    check_ptr, edge_var, var_ptr, var_edge, syn, llr, rho, max_iters, damping, record
):
    E = edge_var.shape[0]
    C = check_ptr.shape[0] - 1
    V = var_ptr.shape[0] - 1
    clip = MSG_CLIP
    pmax = _PROD_MAX

    m_vc = np.empty(E, np.float64)
    for e in range(E):
        x = llr[edge_var[e]]
        if x > clip:
            x = clip
        elif x < -clip:
            x = -clip
        m_vc[e] = x
    m_cv = np.zeros(E, np.float64)
    belief = np.zeros(V, np.float64)
    hard = np.zeros(V, np.uint8)
    rows = max_iters if record else 1
    trace = np.zeros((rows, V), np.uint8)

    dmax = 1
    for c in range(C):
        d = check_ptr[c + 1] - check_ptr[c]
        if d > dmax:
            dmax = d
    tanhs = np.empty(dmax, np.float64)
    fwd = np.empty(dmax + 1, np.float64)

    iters = 0
    converged = False
    for it in range(1, max_iters + 1):
        iters = it
        for c in range(C):
            lo = check_ptr[c]
            hi = check_ptr[c + 1]
            d = hi - lo
            for i in range(d):
                tanhs[i] = math.tanh(0.5 * m_vc[lo + i])
            fwd[0] = 1.0
            for i in range(d):
                fwd[i + 1] = fwd[i] * tanhs[i]
            bw = 1.0
            for i in range(d - 1, -1, -1):
                prod = fwd[i] * bw
                bw = bw * tanhs[i]
                if prod > pmax:
                    prod = pmax
                elif prod < -pmax:
                    prod = -pmax
                msg = 2.0 * math.atanh(prod)
                if syn[c] == 1:
                    msg = -msg
                if msg > clip:
                    msg = clip
                elif msg < -clip:
                    msg = -clip
                if damping != 0.0:
                    msg = (1.0 - damping) * msg + damping * m_cv[lo + i]
                m_cv[lo + i] = msg

        for v in range(V):
            lo = var_ptr[v]
            hi = var_ptr[v + 1]
            ssum = 0.0
            for i in range(lo, hi):
                ssum += m_cv[var_edge[i]]
            b = llr[v] + rho[v] * ssum
            belief[v] = b
            hard[v] = 1 if b < 0.0 else 0
            for i in range(lo, hi):
                e = var_edge[i]
                msg = llr[v] + rho[v] * (ssum - m_cv[e])
                if msg > clip:
                    msg = clip
                elif msg < -clip:
                    msg = -clip
                m_vc[e] = msg

        if record:
            for v in range(V):
                trace[it - 1, v] = hard[v]

        matched = True
        for c in range(C):
            par = np.uint8(0)
            for i in range(check_ptr[c], check_ptr[c + 1]):
                par ^= hard[edge_var[i]]
            if par != syn[c]:
                matched = False
                break
        if matched:
            converged = True
            break

    return hard, belief, iters, converged, trace


def _spa_core_numpy(
    check_ptr, edge_var, var_ptr, var_edge, syn, llr, rho, max_iters, damping, record
):
    """Vectorized twin of the loop kernel; identical per-node operation order."""
    E = edge_var.shape[0]
    C = check_ptr.shape[0] - 1
    V = var_ptr.shape[0] - 1

    cdeg = np.diff(check_ptr)
    vdeg = np.diff(var_ptr)
    check_groups = []
    for d in np.unique(cdeg):
        if d == 0:
            continue
        checks_d = np.nonzero(cdeg == d)[0]
        slots = check_ptr[checks_d][:, None] + np.arange(d)[None, :]
        check_groups.append((int(d), checks_d, slots))
    var_groups = []
    for d in np.unique(vdeg):
        vars_d = np.nonzero(vdeg == d)[0]
        slots = var_edge[var_ptr[vars_d][:, None] + np.arange(d)[None, :]] if d else None
        var_groups.append((int(d), vars_d, slots))
    edge_check = np.repeat(np.arange(C), cdeg)

    m_vc = np.clip(llr[edge_var], -MSG_CLIP, MSG_CLIP)
    m_cv = np.zeros(E, np.float64)
    belief = np.zeros(V, np.float64)
    hard = np.zeros(V, np.uint8)
    rows = max_iters if record else 1
    trace = np.zeros((rows, V), np.uint8)
    flip = syn.astype(bool)

    iters = 0
    converged = False
    for it in range(1, max_iters + 1):
        iters = it
        tanh_all = np.tanh(0.5 * m_vc)
        for d, checks_d, slots in check_groups:
            tg = tanh_all[slots]
            fwdg = np.empty((slots.shape[0], d + 1))
            fwdg[:, 0] = 1.0
            for i in range(d):
                fwdg[:, i + 1] = fwdg[:, i] * tg[:, i]
            bw = np.ones(slots.shape[0])
            sflip = flip[checks_d]
            for i in range(d - 1, -1, -1):
                prod = fwdg[:, i] * bw
                bw = bw * tg[:, i]
                np.clip(prod, -_PROD_MAX, _PROD_MAX, out=prod)
                msg = 2.0 * np.arctanh(prod)
                msg[sflip] = -msg[sflip]
                np.clip(msg, -MSG_CLIP, MSG_CLIP, out=msg)
                if damping != 0.0:
                    msg = (1.0 - damping) * msg + damping * m_cv[slots[:, i]]
                m_cv[slots[:, i]] = msg

        for d, vars_d, slots in var_groups:
            if d == 0:
                b = llr[vars_d]
                belief[vars_d] = b
                hard[vars_d] = b < 0.0
                continue
            mg = m_cv[slots]
            ssum = np.zeros(slots.shape[0])
            for i in range(d):
                ssum = ssum + mg[:, i]
            b = llr[vars_d] + rho[vars_d] * ssum
            belief[vars_d] = b
            hard[vars_d] = b < 0.0
            for i in range(d):
                msg = llr[vars_d] + rho[vars_d] * (ssum - mg[:, i])
                np.clip(msg, -MSG_CLIP, MSG_CLIP, out=msg)
                m_vc[slots[:, i]] = msg

        if record:
            trace[it - 1] = hard

        ones = hard[edge_var].astype(bool)
        par = np.bincount(edge_check[ones], minlength=C).astype(np.uint8) & 1
        if np.array_equal(par, syn):
            converged = True
            break

    return hard, belief, iters, converged, trace


# ---------------------------------------------------------------------------
# pseudocodeword path decomposition core (cycle-code graphs only)
#
# Edges of the walk graph are the Tanner variables (each has exactly two
# check endpoints); edge_other[slot] is the opposite endpoint of the
# variable sitting in that check-major slot.


def _walk_loops(check_ptr, edge_var, edge_other, w, in_j, visited, stamp, buf, start):
    cur = start
    nsteps = 0
    wmin = math.inf
    while True:
        best_slot = -1
        best_w = -1.0
        for s in range(check_ptr[cur], check_ptr[cur + 1]):
            var = edge_var[s]
            if visited[var] == stamp:
                continue
            val = w[var]
            if val > best_w:
                best_w = val
                best_slot = s
        if best_slot < 0:
            return 0, 0.0, -1
        var = edge_var[best_slot]
        visited[var] = stamp
        buf[nsteps] = var
        nsteps += 1
        if best_w < wmin:
            wmin = best_w
        cur = edge_other[best_slot]
        if in_j[cur] == 1:
            return nsteps, wmin, cur


def _make_decompose(walk):
    def decompose_core(check_ptr, edge_var, edge_other, omega, unsat):
        C = check_ptr.shape[0] - 1
        V = omega.shape[0]
        w = omega.copy()
        in_j = unsat.copy()
        j_count = 0
        for c in range(C):
            j_count += in_j[c]
        visited = np.full(V, -1, np.int64)
        walk_buf = np.empty(max(V, 1), np.int64)
        max_paths = V + C + 2
        ends = np.zeros((max_paths, 2), np.int64)
        weights = np.zeros(max_paths, np.float64)
        offsets = np.zeros(max_paths + 1, np.int64)
        edges_out = np.empty(max_paths * max(V, 1), np.int64)
        zero_flag = np.zeros(C, np.uint8)
        n_paths = 0
        total = 0
        stamp = 0
        guard = 4 * (V + C) + 16
        rounds = 0
        ok = True
        while j_count > 0:
            rounds += 1
            if rounds > guard:
                ok = False
                break
            for c in range(C):
                zero_flag[c] = 0
            best_j = -1
            best_cost = math.inf
            best_wbar = 0.0
            for j in range(C):
                if in_j[j] == 0:
                    continue
                stamp += 1
                ln, wbar, endp = walk(
                    check_ptr, edge_var, edge_other, w, in_j, visited, stamp, walk_buf, j
                )
                if endp < 0:
                    zero_flag[j] = 1
                    continue
                if wbar == 0.0:
                    zero_flag[j] = 1
                cost = (1.0 - wbar) * ln
                if cost < best_cost:
                    best_cost = cost
                    best_j = j
                    best_wbar = wbar
            if best_j >= 0:
                stamp += 1
                ln, wbar, endp = walk(
                    check_ptr, edge_var, edge_other, w, in_j, visited, stamp, walk_buf, best_j
                )
                for i in range(ln):
                    var = walk_buf[i]
                    w[var] = w[var] - wbar
                if endp != best_j:
                    for i in range(ln):
                        edges_out[total + i] = walk_buf[i]
                    ends[n_paths, 0] = best_j
                    ends[n_paths, 1] = endp
                    weights[n_paths] = wbar
                    total += ln
                    n_paths += 1
                    offsets[n_paths] = total
            for j in range(C):
                if in_j[j] == 1 and zero_flag[j] == 1:
                    in_j[j] = 0
                    j_count -= 1
        return edges_out[:total], offsets[: n_paths + 1], ends[:n_paths], weights[:n_paths], w, ok

    return decompose_core


_decompose_loops = _make_decompose(_walk_loops)

_numba_funcs = None


def numba_kernels():
    """Compile (once) and return the numba variants (spa_core, decompose_core)."""
    global _numba_funcs
    if _numba_funcs is None:
        from numba import njit

        walk = njit(cache=True)(_walk_loops)
        spa = njit(cache=True)(_spa_core_loops)
        decomp = njit(cache=True)(_make_decompose(walk))
        _numba_funcs = (spa, decomp)
    return _numba_funcs


if BACKEND == "numba":
    spa_core, decompose_core = numba_kernels()
else:
    spa_core = _spa_core_numpy
    decompose_core = _decompose_loops
