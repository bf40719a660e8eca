"""High order networks: weighted complete hypergraphs with class validators.

A network of order K stores one relationship value for every nonempty
subset of its nodes of size at most K+1.  Values are keyed by the
canonical (sorted, deduplicated) index tuple of the subset, so a tuple's
relationship depends only on its set of distinct nodes: reordering
invariance and repeated-node degeneracy are structural rather than
checked properties.

Two value classes refine the general one:

* dissimilarity networks decompose as ``value = term + epsilon * size``
  with nonnegative, order-increasing terms;
* proximity networks decompose as ``value = term - epsilon * size`` with
  order-decreasing terms bounded by one.

Validators report violations instead of raising, so defective networks
can be constructed and inspected.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

GENERAL = "general"
DISSIMILARITY = "dissimilarity"
PROXIMITY = "proximity"
KINDS = (GENERAL, DISSIMILARITY, PROXIMITY)

# Equality-style checks on recomputed terms allow this much roundoff.
# Sign conditions that the definitions state strictly (epsilon > 0) are
# tested with no margin.
VALIDATION_ATOL = 1e-9

# Mask-indexed value tables need 2**n doubles; desk scale (n <= ~12)
# stays far below this cap.
MAX_MASK_NODES = 20


class NetworkFormatError(ValueError):
    """Malformed network file or construction arguments."""


def rank(tup) -> int:
    """Number of distinct elements in a tuple of node ids.

    ``rank((x, x)) == 1`` and ``rank((y, x, y)) == 2``: repeated entries
    do not raise the order of the relationship a tuple addresses.
    """
    if len(tup) == 0:
        raise ValueError("rank of an empty tuple is undefined")
    return len(set(tup))


@dataclass(frozen=True)
class Violation:
    """One failed validator condition."""

    condition: str
    keys: tuple
    observed: tuple
    expected: str

    def to_dict(self) -> dict:
        return {
            "condition": self.condition,
            "keys": [list(k) for k in self.keys],
            "observed": list(self.observed),
            "expected": self.expected,
        }


@dataclass
class ValidationReport:
    """Outcome of a validator run: empty violation list means pass."""

    violations: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, condition, keys, observed, expected):
        self.violations.append(
            Violation(condition, tuple(keys), tuple(observed), expected)
        )

    def merge(self, other: "ValidationReport") -> "ValidationReport":
        self.violations.extend(other.violations)
        self.notes.extend(other.notes)
        return self

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "violations": [v.to_dict() for v in self.violations],
            "notes": list(self.notes),
        }


class HighOrderNetwork:
    """Complete weighted hypergraph over a labelled node set.

    Parameters
    ----------
    order : int
        Largest relationship order K; tuples of up to K+1 nodes carry
        values.
    labels : sequence of str
        Node labels; positions define the dense node indices.
    values : mapping
        Subset key -> value.  Keys may mix labels and indices and may be
        unsorted or contain repeats; they are canonicalized.  The table
        is *not* required to be complete here: completeness is a
        validator concern so that defective networks can be built and
        reported on.
    kind : str
        One of ``general``, ``dissimilarity``, ``proximity``.
    epsilon : float
        Decomposition slope for classed networks (0.0 for general).
    """

    __slots__ = ("order", "labels", "values", "kind", "epsilon", "_index",
                 "_mask_values")

    def __init__(self, order, labels, values, kind=GENERAL, epsilon=0.0):
        if not isinstance(order, int) or order < 0:
            raise NetworkFormatError(f"order must be a nonnegative int, got {order!r}")
        labels = tuple(str(x) for x in labels)
        if not labels:
            raise NetworkFormatError("a network needs at least one node")
        if len(set(labels)) != len(labels):
            raise NetworkFormatError("node labels must be unique")
        if kind not in KINDS:
            raise NetworkFormatError(f"unknown network class {kind!r}")
        epsilon = float(epsilon)
        if not math.isfinite(epsilon) or epsilon < 0.0:
            raise NetworkFormatError(f"epsilon must be finite and >= 0, got {epsilon}")

        self.order = order
        self.labels = labels
        self.kind = kind
        self.epsilon = epsilon
        self._index = {lab: i for i, lab in enumerate(labels)}
        self._mask_values = None

        canon = {}
        for raw_key, val in values.items():
            key = self.canonical_key(tuple(raw_key))
            if len(key) > order + 1:
                raise NetworkFormatError(
                    f"key {raw_key!r} has {len(key)} distinct nodes; order "
                    f"{order} admits at most {order + 1}"
                )
            val = float(val)
            if not math.isfinite(val):
                raise NetworkFormatError(f"value for key {raw_key!r} is not finite")
            if key in canon and canon[key] != val:
                raise NetworkFormatError(
                    f"conflicting values for canonical key {self.label_key(key)}"
                )
            canon[key] = val
        self.values = canon

    # -- node bookkeeping -------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.labels)

    def index(self, node) -> int:
        """Dense index for a label or (validated) index."""
        if isinstance(node, str):
            try:
                return self._index[node]
            except KeyError:
                raise NetworkFormatError(f"unknown node label {node!r}") from None
        i = int(node)
        if not 0 <= i < self.n:
            raise NetworkFormatError(f"node index {i} out of range 0..{self.n - 1}")
        return i

    def canonical_key(self, tup) -> tuple:
        """Sorted, deduplicated index tuple for any node tuple.

        Accepts labels, indices, or a mixture; the result depends only
        on the set of distinct nodes named by the tuple.
        """
        if len(tup) == 0:
            raise NetworkFormatError("empty node tuple")
        return tuple(sorted({self.index(x) for x in tup}))

    def label_key(self, key) -> tuple:
        return tuple(self.labels[i] for i in key)

    # -- value access ------------------------------------------------------

    def value(self, key) -> float:
        """Value at an already-canonical index key."""
        try:
            return self.values[key]
        except KeyError:
            raise NetworkFormatError(
                f"network has no value for subset {self.label_key(key)}"
            ) from None

    def evaluate(self, tup, k: int) -> float:
        """Relationship of order k for a (k+1)-tuple of nodes.

        The tuple may repeat nodes; its value is the one stored for the
        set of distinct nodes it mentions.
        """
        if not 0 <= k <= self.order:
            raise ValueError(f"order {k} outside 0..{self.order}")
        if len(tup) != k + 1:
            raise ValueError(
                f"order-{k} evaluation takes a tuple of {k + 1} nodes, got {len(tup)}"
            )
        return self.value(self.canonical_key(tup))

    def required_keys(self):
        """All canonical keys a complete table must contain."""
        top = min(self.n, self.order + 1)
        for size in range(1, top + 1):
            yield from itertools.combinations(range(self.n), size)

    def missing_keys(self) -> list:
        return [k for k in self.required_keys() if k not in self.values]

    def is_complete(self) -> bool:
        return not self.missing_keys()

    def mask_values(self) -> np.ndarray:
        """Values as a dense array indexed by node bitmask.

        Masks whose subsets carry no value (holes in an incomplete
        table, or sizes above order+1) hold NaN.  Cached; networks are
        treated as immutable after construction.
        """
        if self._mask_values is None:
            if self.n > MAX_MASK_NODES:
                raise ValueError(
                    f"mask table for {self.n} nodes would need 2**{self.n} "
                    f"entries; supported up to {MAX_MASK_NODES} nodes"
                )
            table = np.full(1 << self.n, np.nan)
            for key, val in self.values.items():
                mask = 0
                for i in key:
                    mask |= 1 << i
                table[mask] = val
            self._mask_values = table
        return self._mask_values

    # -- decompositions ----------------------------------------------------

    def decomposition(self) -> dict:
        """Class terms recovered from values: ``value -/+ epsilon * size``."""
        if self.kind == DISSIMILARITY:
            sign = -1.0
        elif self.kind == PROXIMITY:
            sign = 1.0
        else:
            raise ValueError("general networks have no class decomposition")
        return {
            key: val + sign * self.epsilon * len(key)
            for key, val in self.values.items()
        }

    @classmethod
    def from_decomposition(cls, kind, labels, order, terms, epsilon):
        """Build a classed network from decomposition terms.

        ``terms`` maps subset keys (labels or indices) to the class term;
        values become ``term + epsilon*size`` for dissimilarity networks
        and ``term - epsilon*size`` for proximity networks.
        """
        if kind == DISSIMILARITY:
            sign = 1.0
        elif kind == PROXIMITY:
            sign = -1.0
        else:
            raise ValueError("decompositions exist for classed networks only")
        probe = cls(order, labels, {}, kind=kind, epsilon=epsilon)
        values = {}
        for raw_key, term in terms.items():
            key = probe.canonical_key(tuple(raw_key))
            values[key] = float(term) + sign * float(epsilon) * len(key)
        return cls(order, labels, values, kind=kind, epsilon=epsilon)

    # -- transforms ----------------------------------------------------

    def permuted(self, perm) -> "HighOrderNetwork":
        """Copy with node i renumbered to perm[i] (labels travel along)."""
        perm = [int(p) for p in perm]
        if sorted(perm) != list(range(self.n)):
            raise ValueError("perm must be a permutation of 0..n-1")
        new_labels = [None] * self.n
        for i, p in enumerate(perm):
            new_labels[p] = self.labels[i]
        new_values = {
            tuple(sorted(perm[i] for i in key)): val
            for key, val in self.values.items()
        }
        return HighOrderNetwork(
            self.order, new_labels, new_values, kind=self.kind, epsilon=self.epsilon
        )

    # -- equality / repr -----------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, HighOrderNetwork):
            return NotImplemented
        return (
            self.order == other.order
            and self.labels == other.labels
            and self.kind == other.kind
            and self.epsilon == other.epsilon
            and self.values == other.values
        )

    def __repr__(self):
        return (
            f"HighOrderNetwork(order={self.order}, n={self.n}, "
            f"kind={self.kind!r}, epsilon={self.epsilon}, "
            f"entries={len(self.values)})"
        )

    # -- serialization ---------------------------------------------------

    def to_dict(self) -> dict:
        entries = sorted(
            (list(self.label_key(key)), val) for key, val in self.values.items()
        )
        return {
            "order": self.order,
            "nodes": list(self.labels),
            "class": self.kind,
            "epsilon": self.epsilon,
            "values": [{"key": k, "value": v} for k, v in entries],
        }

    @classmethod
    def from_dict(cls, obj) -> "HighOrderNetwork":
        if not isinstance(obj, dict):
            raise NetworkFormatError("network document must be a JSON object")
        missing = {"order", "nodes", "values"} - obj.keys()
        if missing:
            raise NetworkFormatError(f"network document lacks fields {sorted(missing)}")
        kind = obj.get("class", GENERAL)
        epsilon = obj.get("epsilon", 0.0)
        entries = obj["values"]
        if not isinstance(entries, list):
            raise NetworkFormatError("'values' must be a list of key/value entries")
        values = {}
        probe = cls(int(obj["order"]), obj["nodes"], {}, kind=kind, epsilon=epsilon)
        for entry in entries:
            try:
                raw_key, val = entry["key"], entry["value"]
            except (TypeError, KeyError):
                raise NetworkFormatError(f"bad value entry {entry!r}") from None
            key = probe.canonical_key(tuple(raw_key))
            if key in values:
                raise NetworkFormatError(
                    f"duplicate entry for subset {probe.label_key(key)}"
                )
            values[key] = val
        return cls(int(obj["order"]), obj["nodes"], values, kind=kind, epsilon=epsilon)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def save_network(net: HighOrderNetwork, path) -> None:
    """Write a network file; output bytes are stable for equal networks."""
    Path(path).write_text(net.to_json(), encoding="utf-8")


def load_network(path, require_complete=True) -> HighOrderNetwork:
    """Read a network file.

    With ``require_complete`` (the default) a table missing any subset
    key is rejected as a format error; pass False to load defective
    tables for validator inspection.
    """
    text = Path(path).read_text(encoding="utf-8")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise NetworkFormatError(f"{path}: not valid JSON ({exc})") from None
    net = HighOrderNetwork.from_dict(obj)
    if require_complete:
        missing = net.missing_keys()
        if missing:
            shown = ", ".join(str(list(net.label_key(k))) for k in missing[:5])
            raise NetworkFormatError(
                f"{path}: incomplete value table, {len(missing)} subsets "
                f"missing (first: {shown})"
            )
    return net


# -- validators -----------------------------------------------------------


def validate_general(net: HighOrderNetwork) -> ValidationReport:
    """Check the base axioms: complete table and values in [0, 1].

    Reordering invariance and repeated-node collapse hold by the keyed
    representation and are recorded as notes rather than re-derived.
    """
    report = ValidationReport()
    for key in net.missing_keys():
        report.add("incomplete table", [net.label_key(key)], [], "value present")
    for key in sorted(net.values):
        val = net.values[key]
        if val < -VALIDATION_ATOL or val > 1.0 + VALIDATION_ATOL:
            report.add(
                "value range", [net.label_key(key)], [val], "0 <= value <= 1"
            )
    report.notes.append("reordering invariance: structural (subset-keyed storage)")
    report.notes.append("repeated-node collapse: structural (subset-keyed storage)")
    return report


def _epsilon_or_violation(net, epsilon, relaxed, report):
    eps = net.epsilon if epsilon is None else float(epsilon)
    if eps < 0.0 or (eps == 0.0 and not relaxed):
        report.add(
            "epsilon positivity", [], [eps],
            "epsilon > 0 (epsilon == 0 only under the relaxed flag)",
        )
        return None
    return eps


def _facet_pairs(net, terms):
    """Yield (key, facet, term, facet_term) for every one-node removal."""
    for key in sorted(terms):
        if len(key) < 2:
            continue
        for drop in key:
            facet = tuple(i for i in key if i != drop)
            if facet in terms:
                yield key, facet, terms[key], terms[facet]


def validate_dissimilarity(net, epsilon=None, relaxed=False) -> ValidationReport:
    """Check the dissimilarity decomposition ``value = term + epsilon*size``.

    Conditions: epsilon strictly positive (zero allowed only when
    ``relaxed``), terms nonnegative, terms order-increasing under adding
    a node, and for order >= 1 the slope bound
    ``epsilon <= 1 - max(term)/order``.  Value range is the general
    validator's concern and is not re-checked here.
    """
    if net.kind != DISSIMILARITY:
        raise ValueError(f"network class is {net.kind!r}, not {DISSIMILARITY!r}")
    report = ValidationReport()
    for key in net.missing_keys():
        report.add("incomplete table", [net.label_key(key)], [], "value present")
    eps = _epsilon_or_violation(net, epsilon, relaxed, report)
    if eps is None:
        return report
    terms = {key: val - eps * len(key) for key, val in net.values.items()}
    for key in sorted(terms):
        if terms[key] < -VALIDATION_ATOL:
            report.add(
                "nonnegative term", [net.label_key(key)], [terms[key]], "term >= 0"
            )
    for key, facet, t_key, t_facet in _facet_pairs(net, terms):
        if t_key < t_facet - VALIDATION_ATOL:
            report.add(
                "order increasing",
                [net.label_key(key), net.label_key(facet)],
                [t_key, t_facet],
                "term(S) >= term(S minus one node)",
            )
    if net.order >= 1 and terms:
        bound = 1.0 - max(terms.values()) / net.order
        if eps > bound + VALIDATION_ATOL:
            report.add(
                "epsilon slope bound", [], [eps, bound],
                "epsilon <= 1 - max(term)/order",
            )
    elif net.order == 0:
        report.notes.append("epsilon slope bound: vacuous at order 0")
    return report


def validate_proximity(net, epsilon=None, relaxed=False) -> ValidationReport:
    """Check the proximity decomposition ``value = term - epsilon*size``.

    Conditions: epsilon strictly positive (zero allowed only when
    ``relaxed``), terms at most one, terms order-decreasing under adding
    a node, and for order >= 1 the slope bound
    ``epsilon <= min(term)/order``.
    """
    if net.kind != PROXIMITY:
        raise ValueError(f"network class is {net.kind!r}, not {PROXIMITY!r}")
    report = ValidationReport()
    for key in net.missing_keys():
        report.add("incomplete table", [net.label_key(key)], [], "value present")
    eps = _epsilon_or_violation(net, epsilon, relaxed, report)
    if eps is None:
        return report
    terms = {key: val + eps * len(key) for key, val in net.values.items()}
    for key in sorted(terms):
        if terms[key] > 1.0 + VALIDATION_ATOL:
            report.add(
                "term above one", [net.label_key(key)], [terms[key]], "term <= 1"
            )
    for key, facet, t_key, t_facet in _facet_pairs(net, terms):
        if t_key > t_facet + VALIDATION_ATOL:
            report.add(
                "order decreasing",
                [net.label_key(key), net.label_key(facet)],
                [t_key, t_facet],
                "term(S) <= term(S minus one node)",
            )
    if net.order >= 1 and terms:
        bound = min(terms.values()) / net.order
        if eps > bound + VALIDATION_ATOL:
            report.add(
                "epsilon slope bound", [], [eps, bound],
                "epsilon <= min(term)/order",
            )
    elif net.order == 0:
        report.notes.append("epsilon slope bound: vacuous at order 0")
    return report


def validate_network(net, relaxed=False) -> ValidationReport:
    """Run the general checks plus the network's class validator."""
    report = validate_general(net)
    if net.kind == DISSIMILARITY:
        report.merge(validate_dissimilarity(net, relaxed=relaxed))
    elif net.kind == PROXIMITY:
        report.merge(validate_proximity(net, relaxed=relaxed))
    return report


# -- random generation ------------------------------------------------------


def random_network(n, order, kind=GENERAL, seed=0, epsilon=0.01) -> HighOrderNetwork:
    """Seeded random network of a given class that passes its validator.

    General networks draw uniform values.  Classed networks draw
    decomposition terms that respect the class monotonicity by
    construction (facet maxima plus increments, or facet minima minus
    decrements) and are then scaled/placed so the slope bound and value
    range hold with margin.
    """
    if n < 1 or order < 0:
        raise ValueError("need n >= 1 and order >= 0")
    if kind not in KINDS:
        raise ValueError(f"unknown network class {kind!r}")
    rng = np.random.default_rng(seed)
    labels = [f"n{i}" for i in range(n)]
    keys = [
        key
        for size in range(1, min(n, order + 1) + 1)
        for key in itertools.combinations(range(n), size)
    ]

    if kind == GENERAL:
        values = {key: float(rng.random()) for key in keys}
        return HighOrderNetwork(order, labels, values, kind=GENERAL, epsilon=0.0)

    epsilon = float(epsilon)
    if not 0.0 < epsilon <= 0.2:
        raise ValueError("generator supports 0 < epsilon <= 0.2")

    step = 0.3 / max(order, 1)
    terms = {}
    if kind == DISSIMILARITY:
        for key in keys:
            if len(key) == 1:
                terms[key] = rng.uniform(0.0, 0.3)
            else:
                floor = max(terms[f] for f in itertools.combinations(key, len(key) - 1))
                terms[key] = floor + rng.uniform(0.0, step)
        cap = 1.0 - (order + 1) * epsilon - 0.01
        if cap <= 0.0:
            raise ValueError("epsilon too large for the requested order")
        peak = max(terms.values())
        if peak > cap:
            scale = cap / peak
            terms = {key: t * scale for key, t in terms.items()}
    else:
        for key in keys:
            if len(key) == 1:
                terms[key] = rng.uniform(0.55, 0.8)
            else:
                ceil = min(terms[f] for f in itertools.combinations(key, len(key) - 1))
                terms[key] = ceil - rng.uniform(0.0, step)
        floor = (order + 1) * epsilon + 0.01
        short = floor - min(terms.values())
        if short > 0.0:
            if max(terms.values()) + short > 1.0:
                raise ValueError("epsilon too large for the requested order")
            terms = {key: t + short for key, t in terms.items()}

    return HighOrderNetwork.from_decomposition(kind, labels, order, terms, epsilon)
