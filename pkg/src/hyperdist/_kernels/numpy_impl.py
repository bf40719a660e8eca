"""Pure NumPy/Python implementations of the search kernels.

Fallback backend; semantics (including float operation order, solver
visit order and tie handling) mirror the numba backend exactly so both
return identical results.

Conventions shared by all kernels:

* ``vx``/``vy`` are dense value tables indexed by node bitmask;
* a correspondence is a list of pairs, carried as two int64 arrays
  ``px``/``py`` holding each pair's X-side and Y-side bit (``1 << x``,
  ``1 << y``);
* grids for the exhaustive walk are bitmasks over nx*ny pair slots,
  bit ``x*ny + y`` standing for pair (x, y).
"""

from __future__ import annotations

import itertools
import math

import numpy as np

NAME = "numpy"

_COMBOS = {}


def _combo_indices(m, s):
    key = (m, s)
    arr = _COMBOS.get(key)
    if arr is None:
        arr = np.array(
            list(itertools.combinations(range(m), s)), dtype=np.int64
        ).reshape(-1, s)
        _COMBOS[key] = arr
    return arr


def gap_by_order(vx, vy, px, py, kmax):
    """Largest |value gap| across correspondent tuples, per order.

    Entry k is the maximum over nonempty pair subsets of size <= k+1 of
    ``|vx[union of x bits] - vy[union of y bits]|``; tuples with
    repeated pairs collapse to exactly these subsets.
    """
    m = px.shape[0]
    out = np.empty(kmax + 1)
    run = 0.0
    for k in range(kmax + 1):
        s = k + 1
        if s <= m:
            idx = _combo_indices(m, s)
            mx = np.bitwise_or.reduce(px[idx], axis=1)
            my = np.bitwise_or.reduce(py[idx], axis=1)
            gap = float(np.max(np.abs(vx[mx] - vy[my])))
            if gap > run:
                run = gap
        out[k] = run
    return out


def fold_norm(gaps, p):
    """p-norm of an order-gap vector, fixed accumulation order."""
    if math.isinf(p):
        m = 0.0
        for i in range(len(gaps)):
            if gaps[i] > m:
                m = gaps[i]
        return float(m)
    if p == 1.0:
        acc = 0.0
        for i in range(len(gaps)):
            acc += gaps[i]
        return float(acc)
    acc = 0.0
    for i in range(len(gaps)):
        acc += gaps[i] ** p
    return float(acc ** (1.0 / p))


def exhaustive_search(vx, vy, nx, ny, kmax, mode_k, p):
    """Minimize over every covering pair set by full enumeration.

    Objective: the order-``mode_k`` gap when ``mode_k >= 0``, else the
    p-norm of the order-gap vector for orders 0..kmax.  Returns
    ``(best value, first best grid mask in ascending order, tie count)``
    where ties are counted at exact float equality.
    """
    grid = nx * ny
    row = [((1 << ny) - 1) << (x * ny) for x in range(nx)]
    col = [sum(1 << (x * ny + y) for x in range(nx)) for y in range(ny)]
    bit_x = np.array([1 << (b // ny) for b in range(grid)], dtype=np.int64)
    bit_y = np.array([1 << (b % ny) for b in range(grid)], dtype=np.int64)
    best = math.inf
    best_mask = 0
    ties = 0
    for mask in range(1, 1 << grid):
        covered = True
        for m in row:
            if not mask & m:
                covered = False
                break
        if covered:
            for m in col:
                if not mask & m:
                    covered = False
                    break
        if not covered:
            continue
        sel = [b for b in range(grid) if (mask >> b) & 1]
        gaps = gap_by_order(vx, vy, bit_x[sel], bit_y[sel], kmax)
        if mode_k >= 0:
            val = float(gaps[mode_k])
        else:
            val = fold_norm(gaps, p)
        if val < best:
            best, best_mask, ties = val, mask, 1
        elif val == best:
            ties += 1
    return best, best_mask, ties


def bnb_search(vx, vy, nx, ny, kmax, mode_k, p, f0, g0, val0):
    """Exact minimization by depth-first branch and bound.

    Search space: assignments f (one Y partner per X node) followed by
    one X partner for every Y node f left uncovered.  Every minimal
    correspondence is such an assignment and the objective only grows
    when pairs are added, so the family contains an optimum and the
    running objective of committed pairs is a valid lower bound.

    ``f0``/``g0``/``val0`` seed the incumbent (a greedy solution);
    updates require strict improvement, so the result is the first
    strictly improving leaf in visit order, or the seed itself.
    Returns ``(best value, f array, g array)`` with ``g[y] == -1`` for
    Y nodes covered by f.
    """
    smax = kmax + 1
    depth_count = nx + ny
    rows = [[0.0] * (smax + 1) for _ in range(depth_count + 1)]
    cpx = [0] * depth_count
    cpy = [0] * depth_count
    ycov = [0] * ny
    cand = [-1] * depth_count
    state = {
        "cur": 0,
        "best": float(val0),
        "bf": [int(v) for v in f0],
        "bg": [int(v) for v in g0],
    }

    def fold_row(row):
        if mode_k >= 0 or math.isinf(p):
            m = 0.0
            for s in range(1, smax + 1):
                if row[s] > m:
                    m = row[s]
            return m
        run = 0.0
        acc = 0.0
        if p == 1.0:
            for k in range(kmax + 1):
                if row[k + 1] > run:
                    run = row[k + 1]
                acc += run
            return acc
        for k in range(kmax + 1):
            if row[k + 1] > run:
                run = row[k + 1]
            acc += run ** p
        return acc ** (1.0 / p)

    def add_pair(bx, by):
        t = state["cur"]
        prev, nxt = rows[t], rows[t + 1]
        for s in range(smax + 1):
            nxt[s] = prev[s]
        d0 = abs(vx[bx] - vy[by])
        if d0 > nxt[1]:
            nxt[1] = d0
        jmax = min(smax - 1, t)
        for j in range(1, jmax + 1):
            for combo in itertools.combinations(range(t), j):
                mx, my = bx, by
                for i in combo:
                    mx |= cpx[i]
                    my |= cpy[i]
                dd = abs(vx[mx] - vy[my])
                if dd > nxt[j + 1]:
                    nxt[j + 1] = dd
        cpx[t] = bx
        cpy[t] = by
        state["cur"] = t + 1

    def visit(d):
        if d == depth_count:
            state["best"] = fold_row(rows[state["cur"]])
            state["bf"] = [cand[x] for x in range(nx)]
            state["bg"] = [
                cand[nx + y] if cand[nx + y] < nx else -1 for y in range(ny)
            ]
            return
        if d < nx:
            for y in range(ny):
                cand[d] = y
                ycov[y] += 1
                add_pair(1 << d, 1 << y)
                if fold_row(rows[state["cur"]]) < state["best"]:
                    visit(d + 1)
                state["cur"] -= 1
                ycov[y] -= 1
        else:
            y = d - nx
            if ycov[y] > 0:
                cand[d] = nx
                if fold_row(rows[state["cur"]]) < state["best"]:
                    visit(d + 1)
            else:
                for x in range(nx):
                    cand[d] = x
                    add_pair(1 << x, 1 << y)
                    if fold_row(rows[state["cur"]]) < state["best"]:
                        visit(d + 1)
                    state["cur"] -= 1

    visit(0)
    return (
        state["best"],
        np.array(state["bf"], dtype=np.int64),
        np.array(state["bg"], dtype=np.int64),
    )
