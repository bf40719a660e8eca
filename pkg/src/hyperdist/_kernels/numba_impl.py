"""Numba-compiled search kernels (default backend).

Same interface and semantics as ``numpy_impl``; see there for the
conventions.  Kernels release the GIL so matrix computations can run
pairs in parallel threads.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

NAME = "numba"

_JIT = dict(cache=True, nogil=True)


@njit(**_JIT)
def gap_by_order(vx, vy, px, py, kmax):
    m = px.shape[0]
    out = np.empty(kmax + 1)
    best = np.zeros(kmax + 2)
    top = kmax + 1
    if top > m:
        top = m
    combo = np.empty(top + 1, dtype=np.int64)
    for s in range(1, top + 1):
        for i in range(s):
            combo[i] = i
        while True:
            mx = np.int64(0)
            my = np.int64(0)
            for i in range(s):
                mx |= px[combo[i]]
                my |= py[combo[i]]
            d = abs(vx[mx] - vy[my])
            if d > best[s]:
                best[s] = d
            i = s - 1
            while i >= 0 and combo[i] == m - s + i:
                i -= 1
            if i < 0:
                break
            combo[i] += 1
            for q in range(i + 1, s):
                combo[q] = combo[q - 1] + 1
    run = 0.0
    for k in range(kmax + 1):
        s = k + 1
        if s <= m and best[s] > run:
            run = best[s]
        out[k] = run
    return out


@njit(**_JIT)
def fold_norm(gaps, p):
    if math.isinf(p):
        m = 0.0
        for i in range(gaps.shape[0]):
            if gaps[i] > m:
                m = gaps[i]
        return m
    if p == 1.0:
        acc = 0.0
        for i in range(gaps.shape[0]):
            acc += gaps[i]
        return acc
    acc = 0.0
    for i in range(gaps.shape[0]):
        acc += gaps[i] ** p
    return acc ** (1.0 / p)


@njit(**_JIT)
def exhaustive_search(vx, vy, nx, ny, kmax, mode_k, p):
    grid = nx * ny
    row = np.empty(nx, dtype=np.int64)
    col = np.zeros(ny, dtype=np.int64)
    full_row = (np.int64(1) << np.int64(ny)) - 1
    for x in range(nx):
        row[x] = full_row << np.int64(x * ny)
    for y in range(ny):
        for x in range(nx):
            col[y] |= np.int64(1) << np.int64(x * ny + y)
    px = np.empty(grid, dtype=np.int64)
    py = np.empty(grid, dtype=np.int64)
    best = np.inf
    best_mask = np.int64(0)
    ties = np.int64(0)
    total = np.int64(1) << np.int64(grid)
    for mask in range(np.int64(1), total):
        covered = True
        for x in range(nx):
            if mask & row[x] == 0:
                covered = False
                break
        if covered:
            for y in range(ny):
                if mask & col[y] == 0:
                    covered = False
                    break
        if not covered:
            continue
        m = 0
        for b in range(grid):
            if (mask >> np.int64(b)) & 1:
                px[m] = np.int64(1) << np.int64(b // ny)
                py[m] = np.int64(1) << np.int64(b % ny)
                m += 1
        gaps = gap_by_order(vx, vy, px[:m], py[:m], kmax)
        if mode_k >= 0:
            val = gaps[mode_k]
        else:
            val = fold_norm(gaps, p)
        if val < best:
            best = val
            best_mask = mask
            ties = 1
        elif val == best:
            ties += 1
    return best, best_mask, ties


@njit(**_JIT)
def _add_pair(rows, cpx, cpy, combo, t, smax, bx, by, vx, vy):
    for s in range(smax + 1):
        rows[t + 1, s] = rows[t, s]
    d0 = abs(vx[bx] - vy[by])
    if d0 > rows[t + 1, 1]:
        rows[t + 1, 1] = d0
    jmax = smax - 1
    if t < jmax:
        jmax = t
    for j in range(1, jmax + 1):
        for i in range(j):
            combo[i] = i
        while True:
            mx = bx
            my = by
            for i in range(j):
                mx |= cpx[combo[i]]
                my |= cpy[combo[i]]
            dd = abs(vx[mx] - vy[my])
            if dd > rows[t + 1, j + 1]:
                rows[t + 1, j + 1] = dd
            i = j - 1
            while i >= 0 and combo[i] == t - j + i:
                i -= 1
            if i < 0:
                break
            combo[i] += 1
            for q in range(i + 1, j):
                combo[q] = combo[q - 1] + 1
    cpx[t] = bx
    cpy[t] = by


@njit(**_JIT)
def _fold_row(rows, t, smax, kmax, mode_k, p):
    if mode_k >= 0 or math.isinf(p):
        m = 0.0
        for s in range(1, smax + 1):
            if rows[t, s] > m:
                m = rows[t, s]
        return m
    run = 0.0
    if p == 1.0:
        acc = 0.0
        for k in range(kmax + 1):
            if rows[t, k + 1] > run:
                run = rows[t, k + 1]
            acc += run
        return acc
    acc = 0.0
    for k in range(kmax + 1):
        if rows[t, k + 1] > run:
            run = rows[t, k + 1]
        acc += run ** p
    return acc ** (1.0 / p)


@njit(**_JIT)
def bnb_search(vx, vy, nx, ny, kmax, mode_k, p, f0, g0, val0):
    smax = kmax + 1
    depth_count = nx + ny
    rows = np.zeros((depth_count + 1, smax + 1))
    cpx = np.zeros(depth_count, dtype=np.int64)
    cpy = np.zeros(depth_count, dtype=np.int64)
    combo = np.zeros(smax + 1, dtype=np.int64)
    ycov = np.zeros(ny, dtype=np.int64)
    cand = np.full(depth_count, -1, dtype=np.int64)
    best = val0
    bf = f0.copy()
    bg = g0.copy()
    cur = 0
    d = 0
    while d >= 0:
        # next untried candidate at this depth
        nxt = np.int64(-1)
        if d < nx:
            c = cand[d] + 1
            if c < ny:
                nxt = c
        else:
            y = d - nx
            if ycov[y] > 0:
                if cand[d] == -1:
                    nxt = nx  # lone "skip" candidate: y already covered
            else:
                c = cand[d] + 1
                if c < nx:
                    nxt = c
        if nxt == -1:
            # depth exhausted: back out the parent's applied choice
            cand[d] = -1
            d -= 1
            if d >= 0:
                ch = cand[d]
                if d < nx:
                    ycov[ch] -= 1
                    cur -= 1
                elif ch < nx:
                    cur -= 1
            continue
        cand[d] = nxt
        added = False
        if d < nx:
            ycov[nxt] += 1
            _add_pair(rows, cpx, cpy, combo, cur, smax,
                      np.int64(1) << np.int64(d), np.int64(1) << nxt, vx, vy)
            cur += 1
            added = True
        elif nxt < nx:
            _add_pair(rows, cpx, cpy, combo, cur, smax,
                      np.int64(1) << nxt, np.int64(1) << np.int64(d - nx), vx, vy)
            cur += 1
            added = True
        val = _fold_row(rows, cur, smax, kmax, mode_k, p)
        if val >= best:
            # bound: no completion of this prefix can improve strictly
            if added:
                cur -= 1
            if d < nx:
                ycov[nxt] -= 1
            continue
        if d == depth_count - 1:
            best = val
            for x in range(nx):
                bf[x] = cand[x]
            for y2 in range(ny):
                ch = cand[nx + y2]
                bg[y2] = ch if ch < nx else -1
            if added:
                cur -= 1
            continue
        d += 1
    return best, bf, bg
