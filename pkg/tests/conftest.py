"""Shared fixtures and independent oracles for the test suite.

The oracles here deliberately re-derive results "the slow way" (tuple
products, full subset scans, closed-form counts) so the optimized
kernels are checked against something that cannot share their bugs.
"""

import itertools
import math
from pathlib import Path

import numpy as np
import pytest

import hyperdist as hd

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def three_node_unit():
    return hd.load_network(FIXTURES / "three_node_unit.json")


@pytest.fixture
def two_node_unit():
    return hd.load_network(FIXTURES / "two_node_unit.json")


@pytest.fixture
def four_node_dissimilarity():
    return hd.load_network(FIXTURES / "four_node_dissimilarity.json")


@pytest.fixture
def four_node_proximity():
    return hd.load_network(FIXTURES / "four_node_proximity.json")


@pytest.fixture
def four_node_proximity_dual():
    return hd.load_network(FIXTURES / "four_node_proximity_dual.json")


@pytest.fixture
def expected_values():
    import json

    raw = json.loads((FIXTURES / "four_node_expected.json").read_text())
    split = lambda table: {tuple(k.split("|")): v for k, v in table.items()}
    return {
        "epsilon": raw["epsilon"],
        "dissimilarity_terms": split(raw["dissimilarity_terms"]),
        "proximity_terms": split(raw["proximity_terms"]),
        "dual_values": split(raw["dual_values"]),
        "corpus_records": raw["corpus_records"],
    }


@pytest.fixture(params=["numba", "numpy"])
def backend(request):
    """Run the decorated test under both kernel backends."""
    if request.param not in hd.available_backends():
        pytest.skip(f"backend {request.param} unavailable")
    previous = hd.set_backend(request.param)
    yield request.param
    hd.set_backend(previous)


@pytest.fixture
def announce(capsys):
    """Print a line to the real terminal, bypassing pytest capture."""

    def _announce(line):
        with capsys.disabled():
            print(line, flush=True)

    return _announce


# -- independent oracles ------------------------------------------------------


def naive_order_gap(netx, nety, corr, k):
    """Order-k gap by brute product over (k+1)-tuples of pairs."""
    best = 0.0
    for tup in itertools.product(corr.sorted_pairs, repeat=k + 1):
        xs = tuple(t[0] for t in tup)
        ys = tuple(t[1] for t in tup)
        gap = abs(netx.evaluate(xs, k) - nety.evaluate(ys, k))
        if gap > best:
            best = gap
    return best


def brute_min_distance(netx, nety, k=None, p=None):
    """Minimum over all correspondences via the enumeration generator."""
    best = math.inf
    for corr in hd.enumerate_correspondences(netx.n, nety.n):
        if k is not None:
            val = hd.order_difference(netx, nety, corr, k)
        else:
            gaps = hd.order_difference_vector(netx, nety, corr)
            if math.isinf(p):
                val = float(np.max(gaps))
            else:
                val = float(np.sum(gaps ** p) ** (1.0 / p))
        if val < best:
            best = val
    return best


def correspondence_count(nx, ny):
    """Closed-form covering-relation count by inclusion-exclusion."""
    total = 0
    for i in range(nx + 1):
        for j in range(ny + 1):
            total += (
                (-1) ** (i + j)
                * math.comb(nx, i)
                * math.comb(ny, j)
                * 2 ** ((nx - i) * (ny - j))
            )
    return total


def classical_stress_baseline(matrix, dims=2):
    """Raw stress of plain classical scaling, written out independently."""
    d = np.asarray(matrix, dtype=float)
    n = d.shape[0]
    centering = np.eye(n) - 1.0 / n
    gram = -0.5 * centering @ (d * d) @ centering
    vals, vecs = np.linalg.eigh(gram)
    order = np.argsort(vals)[::-1][:dims]
    coords = vecs[:, order] * np.sqrt(np.maximum(vals[order], 0.0))
    total = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            total += (d[i, j] - np.linalg.norm(coords[i] - coords[j])) ** 2
    return float(total)
