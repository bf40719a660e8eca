"""Exact correspondence-based distances between high order networks.

The order-k difference of a correspondence is the largest absolute
relationship gap across correspondent tuples of up to k+1 pairs;
the order-k distance minimizes that difference over all covering
correspondences.  Aggregates: the per-order distance vector (orders
minimized independently) and the p-norm distance (one correspondence
minimizing the p-norm of its whole gap vector, an upper bound of the
norm of the distance vector).

Two exact solvers are available:

* ``exhaustive`` walks every covering pair set on a guarded grid and
  reports how many correspondences tie at the optimum;
* ``branch-and-bound`` searches covering assignments (a superset of the
  minimal correspondences, which suffice because adding pairs never
  shrinks a gap) pruning on the running gap of committed pairs.

Distances between same-class validated networks of order >= 1 are
metrics; reports carry caveats for the pseudometric cases (order 0,
general class).
"""

from __future__ import annotations

import itertools
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .core import GENERAL, HighOrderNetwork
from .correspondence import Correspondence, ENUMERATION_GRID_LIMIT

EXHAUSTIVE = "exhaustive"
BRANCH_AND_BOUND = "branch-and-bound"
AUTO = "auto"
_SOLVER_NAMES = {
    EXHAUSTIVE: EXHAUSTIVE,
    BRANCH_AND_BOUND: BRANCH_AND_BOUND,
    "bnb": BRANCH_AND_BOUND,
    AUTO: AUTO,
}

# auto picks exhaustive up to this pair-grid size, branch and bound above
AUTO_EXHAUSTIVE_GRID = 16

CAVEAT_ORDER0 = (
    "order-0 distance is a pseudometric: networks with different node "
    "counts but matching node values are at distance zero"
)
CAVEAT_GENERAL = (
    "general-class distance is a pseudometric: zero distance does not "
    "imply a value-preserving bijection"
)


class ClassMismatchError(ValueError):
    """Distance requested between differently classed networks."""


def _require_complete(net):
    missing = net.missing_keys()
    if missing:
        raise ValueError(
            f"network value table is incomplete ({len(missing)} subsets "
            f"missing, first {list(net.label_key(missing[0]))}); distances "
            f"need every subset value"
        )


def _check_class_pair(netx, nety):
    if netx.kind != GENERAL and nety.kind != GENERAL and netx.kind != nety.kind:
        raise ClassMismatchError(
            f"cannot mix classes: {netx.kind!r} vs {nety.kind!r} "
            f"(general pairs with anything)"
        )


def _pair_bits(corr):
    pairs = corr.sorted_pairs
    px = np.array([1 << x for x, _ in pairs], dtype=np.int64)
    py = np.array([1 << y for _, y in pairs], dtype=np.int64)
    return px, py


def order_difference(netx, nety, corr, k):
    """Largest order-k relationship gap across one correspondence.

    No minimization happens here; this is the objective the solvers
    minimize.
    """
    if not (0 <= k <= min(netx.order, nety.order)):
        raise ValueError(
            f"order {k} outside both networks' range "
            f"(orders {netx.order} and {nety.order})"
        )
    if (corr.nx, corr.ny) != (netx.n, nety.n):
        raise ValueError(
            f"correspondence is {corr.nx}x{corr.ny}, networks are "
            f"{netx.n}x{nety.n}"
        )
    _require_complete(netx)
    _require_complete(nety)
    px, py = _pair_bits(corr)
    gaps = _kernels.gap_by_order(
        netx.mask_values(), nety.mask_values(), px, py, k
    )
    return float(gaps[k])


def order_difference_vector(netx, nety, corr):
    """Order-k differences for every order, as an array of length K+1."""
    if netx.order != nety.order:
        raise ValueError(
            f"orders differ ({netx.order} vs {nety.order}); the difference "
            f"vector needs equal orders"
        )
    if (corr.nx, corr.ny) != (netx.n, nety.n):
        raise ValueError(
            f"correspondence is {corr.nx}x{corr.ny}, networks are "
            f"{netx.n}x{nety.n}"
        )
    _require_complete(netx)
    _require_complete(nety)
    px, py = _pair_bits(corr)
    return _kernels.gap_by_order(
        netx.mask_values(), nety.mask_values(), px, py, netx.order
    )


def _solve_mode(netx, nety, k, p):
    """Validate the (k, p) mode selection; returns (kmax, mode_k, pval)."""
    if (k is None) == (p is None):
        raise ValueError("pass exactly one of k (single order) or p (norm)")
    if k is not None:
        if not (0 <= k <= min(netx.order, nety.order)):
            raise ValueError(
                f"order {k} outside both networks' range "
                f"(orders {netx.order} and {nety.order})"
            )
        return int(k), int(k), math.inf
    if netx.order != nety.order:
        raise ValueError(
            f"orders differ ({netx.order} vs {nety.order}); the p-norm "
            f"distance needs equal orders"
        )
    p = float(p)
    if not (p >= 1.0):
        raise ValueError(f"p must be in [1, inf], got {p}")
    return netx.order, -1, p


def solve_exhaustive(netx, nety, k=None, p=None):
    """Exact minimum by enumerating every covering pair set.

    Returns ``(value, correspondence, tie_count)``; the correspondence
    is the first optimum in ascending pair-bitmask order and the tie
    count says how many correspondences attain the optimum exactly.
    """
    _require_complete(netx)
    _require_complete(nety)
    kmax, mode_k, pval = _solve_mode(netx, nety, k, p)
    grid = netx.n * nety.n
    if grid > ENUMERATION_GRID_LIMIT:
        raise ValueError(
            f"exhaustive enumeration over a {netx.n}x{nety.n} pair grid "
            f"(2**{grid} sets) is guarded off; use the branch-and-bound solver"
        )
    best, mask, ties = _kernels.exhaustive_search(
        netx.mask_values(), nety.mask_values(),
        netx.n, nety.n, kmax, mode_k, pval,
    )
    return float(best), Correspondence.from_mask(int(mask), netx.n, nety.n), int(ties)


def _greedy_seed(vx, vy, nx, ny):
    """Initial incumbent: match nodes by closest order-0 value."""
    node_x = vx[[1 << x for x in range(nx)]]
    node_y = vy[[1 << y for y in range(ny)]]
    gaps = np.abs(node_x[:, None] - node_y[None, :])
    f0 = np.argmin(gaps, axis=1).astype(np.int64)
    g0 = np.full(ny, -1, dtype=np.int64)
    covered = set(int(v) for v in f0)
    for y in range(ny):
        if y not in covered:
            g0[y] = int(np.argmin(gaps[:, y]))
    return f0, g0


def _assignment_pairs(f, g):
    pairs = {(x, int(fy)) for x, fy in enumerate(f)}
    pairs.update((int(gx), y) for y, gx in enumerate(g) if gx >= 0)
    return pairs


def solve_branch_and_bound(netx, nety, k=None, p=None):
    """Exact minimum by branch and bound over covering assignments.

    Handles any node counts (runtime grows exponentially; distances are
    meant for desk-scale networks).  Returns ``(value, correspondence)``.
    """
    _require_complete(netx)
    _require_complete(nety)
    kmax, mode_k, pval = _solve_mode(netx, nety, k, p)
    vx, vy = netx.mask_values(), nety.mask_values()
    nx, ny = netx.n, nety.n
    f0, g0 = _greedy_seed(vx, vy, nx, ny)
    pairs0 = sorted(_assignment_pairs(f0, g0))
    px = np.array([1 << x for x, _ in pairs0], dtype=np.int64)
    py = np.array([1 << y for _, y in pairs0], dtype=np.int64)
    gaps0 = _kernels.gap_by_order(vx, vy, px, py, kmax)
    val0 = float(gaps0[mode_k]) if mode_k >= 0 else float(
        _kernels.fold_norm(gaps0, pval)
    )
    best, f, g = _kernels.bnb_search(
        vx, vy, nx, ny, kmax, mode_k, pval, f0, g0, val0
    )
    corr = Correspondence(frozenset(_assignment_pairs(f, g)), nx, ny)
    return float(best), corr


def _resolve_solver(solver, grid):
    try:
        name = _SOLVER_NAMES[solver]
    except KeyError:
        raise ValueError(
            f"unknown solver {solver!r}; choose 'exhaustive', "
            f"'branch-and-bound' or 'auto'"
        ) from None
    if name == AUTO:
        return EXHAUSTIVE if grid <= AUTO_EXHAUSTIVE_GRID else BRANCH_AND_BOUND
    return name


def _solve(netx, nety, solver, k=None, p=None):
    resolved = _resolve_solver(solver, netx.n * nety.n)
    if resolved == EXHAUSTIVE:
        value, corr, ties = solve_exhaustive(netx, nety, k=k, p=p)
    else:
        value, corr = solve_branch_and_bound(netx, nety, k=k, p=p)
        ties = None
    return value, corr, ties, resolved


@dataclass
class Bottleneck:
    """A tuple pair realizing the reported gap at the optimum."""

    x: tuple
    y: tuple
    order: int
    gap: float

    def to_dict(self):
        return {
            "x": list(self.x),
            "y": list(self.y),
            "order": self.order,
            "gap": self.gap,
        }


def _bottlenecks(netx, nety, corr, k, value):
    """All tuple pairs attaining ``value`` at this correspondence.

    Deduplicated by the node subsets they collapse to, in deterministic
    subset-enumeration order.
    """
    vx, vy = netx.mask_values(), nety.mask_values()
    pairs = corr.sorted_pairs
    found, seen = [], set()
    for size in range(1, min(k + 1, len(pairs)) + 1):
        for combo in itertools.combinations(pairs, size):
            mx = my = 0
            for x, y in combo:
                mx |= 1 << x
                my |= 1 << y
            if abs(vx[mx] - vy[my]) == value and (mx, my) not in seen:
                seen.add((mx, my))
                xs = tuple(netx.labels[i] for i in range(netx.n) if (mx >> i) & 1)
                ys = tuple(nety.labels[i] for i in range(nety.n) if (my >> i) & 1)
                found.append(Bottleneck(xs, ys, k, float(value)))
    return found


@dataclass
class DistanceReport:
    """Result of one distance computation, serializable to the CLI schema."""

    mode: str                      # "order" | "vector" | "pnorm"
    value: float | None = None
    values: list | None = None
    k: int | None = None
    p: float | None = None
    correspondence: list | None = None   # [[x label, y label], ...]
    bottleneck: Bottleneck | None = None
    bottleneck_ties: list = field(default_factory=list)
    caveats: list = field(default_factory=list)
    solver: str | None = None
    tie_count: int | None = None
    order_gaps: list | None = None       # pnorm mode: gap vector at the optimum
    per_order: list | None = None        # vector mode: one report per order

    def to_dict(self):
        out = {"mode": self.mode, "caveats": list(self.caveats),
               "solver": self.solver}
        if self.mode == "pnorm":
            out["p"] = "inf" if math.isinf(self.p) else self.p
        elif self.k is not None:
            out["k"] = self.k
        if self.values is not None:
            out["values"] = list(self.values)
        else:
            out["value"] = self.value
        out["correspondence"] = self.correspondence
        out["bottleneck"] = self.bottleneck.to_dict() if self.bottleneck else None
        if self.bottleneck_ties:
            out["bottleneck_ties"] = [b.to_dict() for b in self.bottleneck_ties]
        if self.tie_count is not None:
            out["tie_count"] = self.tie_count
        if self.order_gaps is not None:
            out["order_gaps"] = list(self.order_gaps)
        if self.per_order is not None:
            out["orders"] = [r.to_dict() for r in self.per_order]
        return out

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _caveats(netx, nety, k=None):
    out = []
    if k == 0:
        out.append(CAVEAT_ORDER0)
    if netx.kind == GENERAL or nety.kind == GENERAL:
        out.append(CAVEAT_GENERAL)
    return out


def order_distance(netx, nety, k, solver=AUTO) -> DistanceReport:
    """Order-k distance: minimum order-k difference over correspondences.

    The report carries the argmin correspondence, every tuple pair
    attaining the optimum gap there, caveats for the pseudometric cases
    and, for the exhaustive solver, the number of tying correspondences.
    """
    _check_class_pair(netx, nety)
    value, corr, ties, resolved = _solve(netx, nety, solver, k=k)
    bots = _bottlenecks(netx, nety, corr, k, value)
    return DistanceReport(
        mode="order",
        k=int(k),
        value=value,
        correspondence=corr.label_pairs(netx.labels, nety.labels),
        bottleneck=bots[0] if bots else None,
        bottleneck_ties=bots,
        caveats=_caveats(netx, nety, k=k),
        solver=resolved,
        tie_count=ties,
    )


def distance_vector(netx, nety, solver=AUTO) -> DistanceReport:
    """Per-order distances, each order minimized independently.

    The argmin correspondences of different orders need not agree, so
    the top-level report nests one order-mode report per order.
    """
    _check_class_pair(netx, nety)
    if netx.order != nety.order:
        raise ValueError(
            f"orders differ ({netx.order} vs {nety.order}); the distance "
            f"vector needs equal orders"
        )
    per_order = [
        order_distance(netx, nety, k, solver=solver)
        for k in range(netx.order + 1)
    ]
    return DistanceReport(
        mode="vector",
        values=[r.value for r in per_order],
        caveats=_caveats(netx, nety, k=0),
        solver=per_order[0].solver,
        per_order=per_order,
    )


def pnorm_distance(netx, nety, p, solver=AUTO) -> DistanceReport:
    """p-norm distance: one correspondence minimizing the gap-vector norm.

    Always at least the p-norm of the distance vector, since a single
    correspondence serves every order here.  The bottleneck reported is
    the tuple pair of the largest-gap order at the optimum.
    """
    _check_class_pair(netx, nety)
    value, corr, ties, resolved = _solve(netx, nety, solver, p=p)
    gaps = order_difference_vector(netx, nety, corr)
    top_k = int(np.argmax(gaps))
    bots = _bottlenecks(netx, nety, corr, top_k, float(gaps[top_k]))
    caveats = _caveats(netx, nety)
    if netx.order == 0:
        caveats = [CAVEAT_ORDER0] + caveats
    return DistanceReport(
        mode="pnorm",
        p=float(p),
        value=value,
        correspondence=corr.label_pairs(netx.labels, nety.labels),
        bottleneck=bots[0] if bots else None,
        bottleneck_ties=bots,
        caveats=caveats,
        solver=resolved,
        tie_count=ties,
        order_gaps=[float(g) for g in gaps],
    )


def _thread_count(n_jobs):
    env = os.environ.get("HYPERDIST_THREADS", "").strip()
    if env:
        cap = int(env)
        if cap < 1:
            raise ValueError("HYPERDIST_THREADS must be >= 1")
    else:
        cap = os.cpu_count() or 1
    return max(1, min(cap, n_jobs))


def distance_matrix(nets, k=None, p=None, solver=AUTO) -> np.ndarray:
    """Pairwise distance matrix over a list of networks.

    All networks must share class and order.  Only one triangle is
    computed (the distance is symmetric) and the diagonal is zero by
    identity.  Pairs run in parallel threads, capped by the
    HYPERDIST_THREADS environment variable.
    """
    nets = list(nets)
    if not nets:
        raise ValueError("need at least one network")
    kinds = {net.kind for net in nets}
    orders = {net.order for net in nets}
    if len(kinds) > 1:
        raise ValueError(f"networks mix classes {sorted(kinds)}")
    if len(orders) > 1:
        raise ValueError(f"networks mix orders {sorted(orders)}")
    for net in nets:
        _require_complete(net)
    n = len(nets)
    out = np.zeros((n, n))
    jobs = [(i, j) for i in range(n) for j in range(i + 1, n)]

    def run(ij):
        i, j = ij
        value, _, _, _ = _solve(nets[i], nets[j], solver, k=k, p=p)
        return i, j, value

    if jobs:
        threads = _thread_count(len(jobs))
        if threads == 1:
            results = map(run, jobs)
        else:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(run, jobs))
        for i, j, value in results:
            out[i, j] = out[j, i] = value
    return out
