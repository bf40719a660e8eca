"""Network type, tuple collapse, validators, generator, JSON round trips."""

import itertools
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import hyperdist as hd
from hyperdist.core import VALIDATION_ATOL

EPS = 1 / 100


# -- rank and canonical keys --------------------------------------------------


def test_rank_counts_distinct_elements():
    assert hd.rank(("x", "x")) == 1
    assert hd.rank(("y", "x", "y")) == 2
    assert hd.rank((3,)) == 1
    assert hd.rank((0, 1, 2, 1)) == 3


def test_rank_of_empty_tuple_is_an_error():
    with pytest.raises(ValueError):
        hd.rank(())


def test_canonical_key_sorts_and_deduplicates():
    net = hd.random_network(4, 1, seed=0)
    assert net.canonical_key((2, 0, 2, 1)) == (0, 1, 2)
    assert net.canonical_key(("n3", 0, "n0")) == (0, 3)


def test_canonical_key_rejects_unknown_nodes():
    net = hd.random_network(3, 1, seed=0)
    with pytest.raises(hd.NetworkFormatError):
        net.canonical_key(("nope",))
    with pytest.raises(hd.NetworkFormatError):
        net.canonical_key((0, 7))
    with pytest.raises(hd.NetworkFormatError):
        net.canonical_key(())


def test_evaluate_on_reference_network(four_node_dissimilarity):
    net = four_node_dissimilarity
    assert net.evaluate(("A", "B", "D"), 2) == pytest.approx(4 / 9 + 3 * EPS, abs=1e-15)
    # repeated nodes collapse to the lower-rank value
    assert net.evaluate(("A", "A"), 1) == net.evaluate(("A",), 0)
    assert net.evaluate(("B", "A", "B"), 2) == net.evaluate(("A", "B"), 1)


def test_evaluate_checks_tuple_length_and_order(four_node_dissimilarity):
    net = four_node_dissimilarity
    with pytest.raises(ValueError):
        net.evaluate(("A", "B"), 2)
    with pytest.raises(ValueError):
        net.evaluate(("A", "B", "C", "D"), 3)
    with pytest.raises(ValueError):
        net.evaluate(("A",), -1)


@settings(max_examples=200, deadline=None)
@given(data=st.data(), n=st.integers(1, 5), order=st.integers(0, 3))
def test_evaluate_depends_only_on_distinct_node_set(data, n, order):
    net = hd.random_network(n, order, kind="general", seed=data.draw(st.integers(0, 50)))
    k = data.draw(st.integers(0, order))
    distinct = data.draw(
        st.lists(st.integers(0, n - 1), min_size=1, max_size=k + 1, unique=True)
    )
    tup = distinct + data.draw(
        st.lists(st.sampled_from(distinct), min_size=k + 1 - len(distinct),
                 max_size=k + 1 - len(distinct))
    )
    tup = data.draw(st.permutations(tup))
    assert net.evaluate(tuple(tup), k) == net.value(tuple(sorted(set(distinct))))


# -- construction guards ------------------------------------------------------


def test_constructor_rejects_bad_shapes():
    with pytest.raises(hd.NetworkFormatError):
        hd.HighOrderNetwork(-1, ["a"], {})
    with pytest.raises(hd.NetworkFormatError):
        hd.HighOrderNetwork(1, [], {})
    with pytest.raises(hd.NetworkFormatError):
        hd.HighOrderNetwork(1, ["a", "a"], {})
    with pytest.raises(hd.NetworkFormatError):
        hd.HighOrderNetwork(1, ["a"], {}, kind="nope")
    with pytest.raises(hd.NetworkFormatError):
        hd.HighOrderNetwork(1, ["a"], {(0,): math.nan})
    with pytest.raises(hd.NetworkFormatError):
        hd.HighOrderNetwork(1, ["a", "b"], {}, epsilon=-0.1)


def test_constructor_rejects_oversized_and_conflicting_keys():
    with pytest.raises(hd.NetworkFormatError):
        hd.HighOrderNetwork(0, ["a", "b"], {(0, 1): 0.5})
    with pytest.raises(hd.NetworkFormatError):
        hd.HighOrderNetwork(1, ["a", "b"], {(0, 1): 0.5, (1, 0): 0.6})
    # consistent duplicates collapse silently
    net = hd.HighOrderNetwork(
        1, ["a", "b"], {(0, 1): 0.5, (1, 0): 0.5, (0,): 0.1, (1,): 0.2}
    )
    assert net.values[(0, 1)] == 0.5


# -- general validator --------------------------------------------------------


def test_validate_general_passes_constant_half_network():
    net = hd.HighOrderNetwork(1, ["a", "b"], {(0,): 0.5, (1,): 0.5, (0, 1): 0.5})
    report = hd.validate_general(net)
    assert report.ok
    assert any("structural" in note for note in report.notes)


def test_validate_general_flags_range_violation():
    net = hd.HighOrderNetwork(1, ["a", "b"], {(0,): 0.5, (1,): 1.5, (0, 1): 0.5})
    report = hd.validate_general(net)
    assert not report.ok
    assert [v.condition for v in report.violations] == ["value range"]
    assert report.violations[0].keys == (("b",),)


def test_validate_general_flags_incomplete_table():
    net = hd.HighOrderNetwork(1, ["a", "b"], {(0,): 0.5, (1,): 0.5})
    report = hd.validate_general(net)
    assert [v.condition for v in report.violations] == ["incomplete table"]
    assert report.violations[0].keys == ((("a", "b")),)


# -- class validators ---------------------------------------------------------


def test_reference_fixtures_pass_their_validators(
    four_node_dissimilarity, four_node_proximity
):
    assert hd.validate_general(four_node_dissimilarity).ok
    assert hd.validate_dissimilarity(four_node_dissimilarity).ok
    assert hd.validate_general(four_node_proximity).ok
    assert hd.validate_proximity(four_node_proximity).ok


def test_dissimilarity_validator_at_the_slope_bound(expected_values):
    # slope bound here: 1 - (1/2) * (8/9) = 5/9; epsilon 1/18 fits
    terms = expected_values["dissimilarity_terms"]
    net = hd.HighOrderNetwork.from_decomposition(
        "dissimilarity", ["A", "B", "C", "D"], 2, terms, 1 / 18
    )
    assert hd.validate_dissimilarity(net).ok
    # ... even though some raw values now exceed 1 (a general-range matter)
    assert not hd.validate_general(net).ok

    too_big = hd.HighOrderNetwork.from_decomposition(
        "dissimilarity", ["A", "B", "C", "D"], 2, terms, 5 / 9 + 0.01
    )
    report = hd.validate_dissimilarity(too_big)
    assert not report.ok
    assert {v.condition for v in report.violations} == {"epsilon slope bound"}


def test_dissimilarity_validator_flags_negative_term(four_node_dissimilarity):
    values = dict(four_node_dissimilarity.values)
    key = four_node_dissimilarity.canonical_key(("A",))
    values[key] = EPS / 2  # below epsilon * rank
    net = hd.HighOrderNetwork(2, "ABCD", values, kind="dissimilarity", epsilon=EPS)
    report = hd.validate_dissimilarity(net)
    assert any(v.condition == "nonnegative term" for v in report.violations)


def test_dissimilarity_validator_flags_order_decrease(four_node_dissimilarity):
    values = dict(four_node_dissimilarity.values)
    pair = four_node_dissimilarity.canonical_key(("B", "C"))
    values[pair] = 0.1 + 2 * EPS  # pair term below node term of C (5/9)
    net = hd.HighOrderNetwork(2, "ABCD", values, kind="dissimilarity", epsilon=EPS)
    report = hd.validate_dissimilarity(net)
    bad = [v for v in report.violations if v.condition == "order increasing"]
    assert bad and (("B", "C") in bad[0].keys)


def test_proximity_validator_flags_oversized_epsilon(expected_values):
    # rebuilding the same terms with epsilon 0.1 breaks the slope bound:
    # min term is 1/19, and 0.1 > (1/19)/2
    terms = dict(expected_values["proximity_terms"])
    for key in [("C", "D"), ("A", "C", "D"), ("B", "C", "D")]:
        terms[key] = 3 * 0.1
    net = hd.HighOrderNetwork.from_decomposition(
        "proximity", ["A", "B", "C", "D"], 2, terms, 0.1
    )
    report = hd.validate_proximity(net)
    conditions = {v.condition for v in report.violations}
    assert "epsilon slope bound" in conditions


def test_proximity_validator_flags_term_above_one_and_order_increase():
    net = hd.HighOrderNetwork(
        1,
        ["a", "b"],
        {(0,): 0.99, (1,): 0.5, (0, 1): 0.9},
        kind="proximity",
        epsilon=0.05,
    )
    report = hd.validate_proximity(net)
    conditions = {v.condition for v in report.violations}
    # term(a) = 0.99 + 0.05 > 1; term(ab) = 1.0 > term(b) = 0.55
    assert "term above one" in conditions
    assert "order decreasing" in conditions


def test_validators_reject_wrong_class_tag(four_node_proximity):
    with pytest.raises(ValueError):
        hd.validate_dissimilarity(four_node_proximity)
    general = hd.random_network(3, 1, kind="general", seed=1)
    with pytest.raises(ValueError):
        hd.validate_proximity(general)


def test_zero_epsilon_needs_the_relaxed_flag():
    values = {(0,): 0.6, (1,): 0.5, (0, 1): 0.4}
    net = hd.HighOrderNetwork(1, ["a", "b"], values, kind="proximity", epsilon=0.0)
    strict = hd.validate_proximity(net)
    assert [v.condition for v in strict.violations] == ["epsilon positivity"]
    assert hd.validate_proximity(net, relaxed=True).ok
    # negative epsilon is rejected even relaxed (constructor guards it too)
    with pytest.raises(hd.NetworkFormatError):
        hd.HighOrderNetwork(1, ["a", "b"], values, kind="proximity", epsilon=-0.01)


def test_order_zero_networks_skip_the_slope_bound():
    net = hd.HighOrderNetwork(
        0, ["a", "b"], {(0,): 0.7, (1,): 0.6}, kind="proximity", epsilon=0.19
    )
    report = hd.validate_proximity(net)
    assert report.ok
    assert any("vacuous at order 0" in note for note in report.notes)


def test_validation_tolerance_forgives_float_noise():
    wiggle = VALIDATION_ATOL / 2
    net = hd.HighOrderNetwork(
        1,
        ["a", "b"],
        {(0,): 0.1, (1,): 0.1, (0, 1): 0.2 - wiggle},
        kind="dissimilarity",
        epsilon=0.05,
    )
    # pair term 0.1 - wiggle sits a hair under the node terms: tolerated
    assert hd.validate_dissimilarity(net).ok


def test_validate_network_merges_general_and_class_checks():
    values = {(0,): 0.6, (1,): 1.5, (0, 1): 0.4}
    net = hd.HighOrderNetwork(1, ["a", "b"], values, kind="proximity", epsilon=0.01)
    conditions = {v.condition for v in hd.validate_network(net).violations}
    assert "value range" in conditions  # from the general half


# -- random generator ---------------------------------------------------------


@pytest.mark.parametrize("kind", ["general", "dissimilarity", "proximity"])
def test_random_networks_pass_their_validators(kind):
    for seed in range(300):
        n = seed % 5 + 1
        order = seed % 4
        net = hd.random_network(n, order, kind=kind, seed=seed)
        assert net.kind == kind
        assert net.is_complete()
        report = hd.validate_network(net)
        assert report.ok, (kind, seed, report.violations[:2])


def test_random_network_is_seed_deterministic():
    a = hd.random_network(4, 2, kind="proximity", seed=11)
    b = hd.random_network(4, 2, kind="proximity", seed=11)
    c = hd.random_network(4, 2, kind="proximity", seed=12)
    assert a == b
    assert a != c


def test_random_network_argument_errors():
    with pytest.raises(ValueError):
        hd.random_network(0, 1, seed=0)
    with pytest.raises(ValueError):
        hd.random_network(2, -1, seed=0)
    with pytest.raises(ValueError):
        hd.random_network(2, 1, kind="dissimilarity", seed=0, epsilon=0.5)


# -- permutation --------------------------------------------------------------


def test_permuted_network_keeps_values_by_label():
    net = hd.random_network(4, 2, kind="dissimilarity", seed=5)
    perm = [2, 0, 3, 1]
    moved = net.permuted(perm)
    assert hd.validate_network(moved).ok
    for key, val in net.values.items():
        labels = net.label_key(key)
        assert moved.value(moved.canonical_key(labels)) == val
    with pytest.raises(ValueError):
        net.permuted([0, 0, 1, 2])


# -- serialization ------------------------------------------------------------


def test_json_round_trip_is_byte_stable(tmp_path, four_node_proximity):
    first = tmp_path / "a.json"
    second = tmp_path / "b.json"
    hd.save_network(four_node_proximity, first)
    loaded = hd.load_network(first)
    assert loaded == four_node_proximity
    hd.save_network(loaded, second)
    assert first.read_bytes() == second.read_bytes()


def test_loader_canonicalizes_scrambled_keys(tmp_path):
    doc = {
        "order": 1,
        "nodes": ["b", "a"],
        "class": "general",
        "epsilon": 0.0,
        "values": [
            {"key": ["a", "b"], "value": 0.3},
            {"key": ["b"], "value": 0.2},
            {"key": ["a"], "value": 0.1},
        ],
    }
    path = tmp_path / "net.json"
    path.write_text(json.dumps(doc))
    net = hd.load_network(path)
    assert net.labels == ("b", "a")
    assert net.evaluate(("a", "b"), 1) == 0.3
    assert net.evaluate(("a",), 0) == 0.1


def test_loader_rejects_bad_documents(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("not json at all {")
    with pytest.raises(hd.NetworkFormatError):
        hd.load_network(path)
    path.write_text(json.dumps({"order": 1, "nodes": ["a"]}))
    with pytest.raises(hd.NetworkFormatError):
        hd.load_network(path)
    path.write_text(
        json.dumps(
            {
                "order": 1,
                "nodes": ["a", "b"],
                "class": "general",
                "epsilon": 0.0,
                "values": [
                    {"key": ["a"], "value": 0.1},
                    {"key": ["a"], "value": 0.2},
                ],
            }
        )
    )
    with pytest.raises(hd.NetworkFormatError):
        hd.load_network(path)


def test_loader_completeness_is_optional_for_validator_runs(tmp_path):
    doc = {
        "order": 1,
        "nodes": ["a", "b"],
        "class": "general",
        "epsilon": 0.0,
        "values": [{"key": ["a"], "value": 0.1}, {"key": ["b"], "value": 0.2}],
    }
    path = tmp_path / "partial.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(hd.NetworkFormatError):
        hd.load_network(path)
    net = hd.load_network(path, require_complete=False)
    report = hd.validate_general(net)
    assert [v.condition for v in report.violations] == ["incomplete table"]


def test_decomposition_round_trip(four_node_proximity, expected_values):
    terms = {
        four_node_proximity.label_key(k): v
        for k, v in four_node_proximity.decomposition().items()
    }
    for key, expected in expected_values["proximity_terms"].items():
        assert terms[key] == pytest.approx(expected, abs=1e-15)
    general = hd.random_network(3, 1, kind="general", seed=0)
    with pytest.raises(ValueError):
        general.decomposition()


def test_mask_values_layout(two_node_unit):
    table = two_node_unit.mask_values()
    assert table.shape == (4,)
    assert table[0b01] == 1.0 and table[0b10] == 1.0 and table[0b11] == 1.0
    assert math.isnan(table[0])
