"""Correspondences: covering relations between two node sets.

A correspondence between node sets of sizes nx and ny is a set of
(x, y) index pairs in which every x and every y appears at least once.
Distances between networks minimize over these; this module provides
the predicate, a guarded exact enumeration, and relation composition.

Pair sets are also handled as bitmasks over the nx*ny pair grid, bit
``x*ny + y`` standing for pair (x, y); enumeration yields masks in
ascending order, which fixes the tie-breaking order used by the
exhaustive solver.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

# Full enumeration walks 2**(nx*ny) masks; above this grid size callers
# are pointed at the branch-and-bound solver instead.
ENUMERATION_GRID_LIMIT = 25


def _check_sizes(nx, ny):
    if nx < 1 or ny < 1:
        raise ValueError("both node sets must be nonempty")


def is_correspondence(pairs, nx, ny) -> bool:
    """True iff the pair set covers both node sets.

    Raises on indices outside ``0..nx-1`` / ``0..ny-1``.
    """
    _check_sizes(nx, ny)
    seen_x, seen_y = set(), set()
    for x, y in pairs:
        if not (0 <= x < nx and 0 <= y < ny):
            raise ValueError(f"pair ({x}, {y}) outside {nx}x{ny} node sets")
        seen_x.add(x)
        seen_y.add(y)
    return len(seen_x) == nx and len(seen_y) == ny


@dataclass(frozen=True)
class Correspondence:
    """An immutable covering pair set between two node sets."""

    pairs: frozenset
    nx: int
    ny: int

    def __post_init__(self):
        object.__setattr__(self, "pairs", frozenset((int(x), int(y)) for x, y in self.pairs))
        if not is_correspondence(self.pairs, self.nx, self.ny):
            raise ValueError(
                f"pair set does not cover both node sets ({self.nx} x {self.ny})"
            )

    @property
    def sorted_pairs(self) -> tuple:
        return tuple(sorted(self.pairs))

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.sorted_pairs)

    def __contains__(self, pair):
        return tuple(pair) in self.pairs

    def transpose(self) -> "Correspondence":
        """The same relation read from Y to X."""
        return Correspondence(frozenset((y, x) for x, y in self.pairs), self.ny, self.nx)

    def is_minimal(self) -> bool:
        """True iff no pair can be dropped without losing coverage.

        Equivalent formulation: every pair has an endpoint of degree
        one, i.e. the relation is a disjoint union of stars.
        """
        deg_x = {}
        deg_y = {}
        for x, y in self.pairs:
            deg_x[x] = deg_x.get(x, 0) + 1
            deg_y[y] = deg_y.get(y, 0) + 1
        return all(deg_x[x] == 1 or deg_y[y] == 1 for x, y in self.pairs)

    def to_mask(self) -> int:
        mask = 0
        for x, y in self.pairs:
            mask |= 1 << (x * self.ny + y)
        return mask

    @classmethod
    def from_mask(cls, mask, nx, ny) -> "Correspondence":
        pairs = frozenset(
            (b // ny, b % ny) for b in range(nx * ny) if (mask >> b) & 1
        )
        return cls(pairs, nx, ny)

    def label_pairs(self, labels_x, labels_y) -> list:
        return [[labels_x[x], labels_y[y]] for x, y in self.sorted_pairs]


def identity_correspondence(n) -> Correspondence:
    return Correspondence(frozenset((i, i) for i in range(n)), n, n)


def full_correspondence(nx, ny) -> Correspondence:
    return Correspondence(
        frozenset(itertools.product(range(nx), range(ny))), nx, ny
    )


def enumerate_correspondences(nx, ny, minimal_only=False):
    """Yield every correspondence between nx and ny nodes.

    Yields in ascending pair-bitmask order (bit ``x*ny + y``), which is
    the deterministic order the exhaustive solver breaks ties in.  With
    ``minimal_only`` only correspondences with no droppable pair are
    yielded, a strict subset on grids larger than 1x1.
    """
    _check_sizes(nx, ny)
    grid = nx * ny
    if grid > ENUMERATION_GRID_LIMIT:
        raise ValueError(
            f"enumerating 2**{grid} pair sets is off the table; use the "
            f"branch-and-bound solver for grids above {ENUMERATION_GRID_LIMIT}"
        )
    row = [((1 << ny) - 1) << (x * ny) for x in range(nx)]
    col = [sum(1 << (x * ny + y) for x in range(nx)) for y in range(ny)]
    for mask in range(1, 1 << grid):
        if any(not mask & m for m in row) or any(not mask & m for m in col):
            continue
        if minimal_only:
            if not all(
                (mask & row[b // ny]).bit_count() == 1
                or (mask & col[b % ny]).bit_count() == 1
                for b in range(grid)
                if (mask >> b) & 1
            ):
                continue
        yield Correspondence.from_mask(mask, nx, ny)


def compose(first: Correspondence, second: Correspondence) -> Correspondence:
    """Relational composition: pair (x, y) iff some z links x to z to y.

    The composition of two covering relations covers again; the
    constructor re-asserts that.
    """
    if first.ny != second.nx:
        raise ValueError(
            f"cannot compose: middle node sets differ ({first.ny} vs {second.nx})"
        )
    by_z = {}
    for z, y in second.pairs:
        by_z.setdefault(z, []).append(y)
    pairs = frozenset(
        (x, y) for x, z in first.pairs for y in by_z.get(z, ())
    )
    return Correspondence(pairs, first.nx, second.ny)
