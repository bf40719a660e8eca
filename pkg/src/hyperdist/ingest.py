"""Coauthorship corpora and their proximity networks.

A corpus is a JSON-lines file, one publication per line:
``{"authors": [...], "year": 2006, "id": "optional"}``.  Given a year
window, an optional center author and a maximum order K, the builder
counts for every author subset S with 1 <= |S| <= K+1 the fraction
p(S) of filtered records whose author set contains S and stores the
relationship value p(S) - epsilon*|S|.  Containment fractions only
shrink when S grows, so the proximity order-decreasing condition holds
by construction; with a center, the center's own value is exactly 1.

Epsilon modes: ``"ignore"`` stores the fractions as-is (epsilon 0, the
network then passes the proximity validator only under its relaxed
flag); ``"auto"`` picks a slope comfortably inside the proximity bound,
falling back to 0 with a warning when the bound collapses; a number is
used verbatim.

``synth_corpus`` generates seeded synthetic corpora from collaboration
profiles, for pipeline smoke tests and demos.
"""

from __future__ import annotations

import itertools
import json
import warnings
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import PROXIMITY, HighOrderNetwork, validate_proximity

AUTO_EPSILON_CEIL = 1e-6


class CorpusFormatError(ValueError):
    """Unusable corpus file or record."""


class EmptyCorpusError(ValueError):
    """No records survive the corpus filter."""


@dataclass(frozen=True)
class PublicationRecord:
    """One publication: authors (deduplicated), year, optional id."""

    authors: tuple
    year: int
    id: str | None = None

    def to_dict(self):
        out = {"authors": list(self.authors), "year": self.year}
        if self.id is not None:
            out["id"] = self.id
        return out


@dataclass(frozen=True)
class CorpusFilter:
    """Record filter and build parameters for one network."""

    start: int
    end: int
    center: str | None = None
    order: int = 1

    def __post_init__(self):
        if self.start > self.end:
            raise ValueError(f"empty year window {self.start}..{self.end}")
        if self.order < 0:
            raise ValueError("order must be >= 0")


@dataclass
class ParseResult:
    """Parsed records plus a line-numbered report of skipped input."""

    records: list
    skipped: list   # (line number, reason)
    warnings: list  # (line number, message)


def _parse_line(obj, line_no, warns):
    if not isinstance(obj, dict):
        raise CorpusFormatError(f"line {line_no}: expected a JSON object")
    if "authors" not in obj or "year" not in obj:
        raise CorpusFormatError(f"line {line_no}: needs 'authors' and 'year'")
    raw = obj["authors"]
    if not isinstance(raw, list) or not all(isinstance(a, str) for a in raw):
        raise CorpusFormatError(f"line {line_no}: 'authors' must be a list of strings")
    if not raw:
        raise CorpusFormatError(f"line {line_no}: empty author list")
    year = obj["year"]
    if isinstance(year, bool) or not isinstance(year, int):
        raise CorpusFormatError(f"line {line_no}: 'year' must be an integer")
    authors = []
    for a in raw:
        if a in authors:
            warns.append((line_no, f"duplicate author {a!r} deduplicated"))
        else:
            authors.append(a)
    rec_id = obj.get("id")
    if rec_id is not None:
        rec_id = str(rec_id)
    return PublicationRecord(tuple(authors), year, rec_id)


def parse_publications(path) -> ParseResult:
    """Read a JSON-lines corpus.

    Lines that are not JSON objects with the required fields are
    collected into the skipped report (with line numbers) rather than
    aborting the parse; an empty author list is an error, as is an
    unreadable file.  Duplicate authors within a line are deduplicated
    with a warning entry.
    """
    text = Path(path).read_text(encoding="utf-8")
    records, skipped, warns = [], [], []
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            skipped.append((line_no, f"not valid JSON ({exc.msg})"))
            continue
        try:
            records.append(_parse_line(obj, line_no, warns))
        except CorpusFormatError as exc:
            if "empty author list" in str(exc):
                raise
            skipped.append((line_no, str(exc)))
    return ParseResult(records, skipped, warns)


def save_corpus(records, path) -> None:
    """Write records as JSON lines (stable field order)."""
    lines = [
        json.dumps(rec.to_dict(), sort_keys=True) for rec in records
    ]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def filter_records(records, cfilter: CorpusFilter) -> list:
    """Records inside the year window that mention the center (if any)."""
    return [
        rec
        for rec in records
        if cfilter.start <= rec.year <= cfilter.end
        and (cfilter.center is None or cfilter.center in rec.authors)
    ]


def _resolve_epsilon(epsilon_mode, min_term, order):
    if epsilon_mode == "ignore":
        return 0.0, True
    if epsilon_mode == "auto":
        bound = min_term / order if order >= 1 else min_term
        eps = min(bound, AUTO_EPSILON_CEIL)
        if eps <= 0.0:
            warnings.warn(
                "proximity slope bound is zero (some subset never occurs); "
                "falling back to epsilon 0 (relaxed class)",
                stacklevel=3,
            )
            return 0.0, True
        return eps, False
    try:
        eps = float(epsilon_mode)
    except (TypeError, ValueError):
        raise ValueError(
            f"epsilon_mode must be 'ignore', 'auto' or a number, "
            f"got {epsilon_mode!r}"
        ) from None
    if eps < 0.0:
        raise ValueError("explicit epsilon must be >= 0")
    return eps, eps == 0.0


def build_proximity_network(records, cfilter, epsilon_mode="ignore"):
    """Containment-fraction proximity network for one corpus filter.

    Every author subset S of size <= order+1 gets the term
    ``p(S) = |records containing S| / |records|`` over the filtered
    records; values are ``p(S) - epsilon*|S|``.  Nodes are the sorted
    distinct authors of the filtered records, so identical corpus and
    filter always produce the identical network.
    """
    kept = filter_records(records, cfilter)
    if not kept:
        raise EmptyCorpusError(
            f"no records in {cfilter.start}..{cfilter.end}"
            + (f" with author {cfilter.center!r}" if cfilter.center else "")
        )
    authors = sorted({a for rec in kept for a in rec.authors})
    order = cfilter.order
    total = len(kept)
    counts = Counter()
    for rec in kept:
        distinct = sorted(set(rec.authors))
        top = min(len(distinct), order + 1)
        for size in range(1, top + 1):
            for sub in itertools.combinations(distinct, size):
                counts[sub] += 1
    terms = {}
    for size in range(1, min(len(authors), order + 1) + 1):
        for sub in itertools.combinations(authors, size):
            terms[sub] = counts.get(sub, 0) / total
    eps, relaxed = _resolve_epsilon(epsilon_mode, min(terms.values()), order)
    net = HighOrderNetwork.from_decomposition(
        PROXIMITY, authors, order, terms, eps
    )
    report = validate_proximity(net, relaxed=relaxed)
    if not report.ok:
        first = report.violations[0]
        raise ValueError(
            f"built network fails the proximity validator "
            f"({first.condition}; epsilon_mode={epsilon_mode!r})"
        )
    return net


# -- synthetic corpora -------------------------------------------------------


@dataclass(frozen=True)
class SynthProfile:
    """Knobs for a synthetic single-center collaboration corpus.

    ``coauthor_weights`` sets how unevenly papers pick coauthors
    (positive, normalized internally); ``group_size_probs`` are the
    probabilities of 0..3 coauthors on a paper (nonnegative, summing to
    1); ``papers`` >= 1.
    """

    name: str
    center: str
    coauthors: tuple
    coauthor_weights: tuple
    group_size_probs: tuple
    papers: int
    years: tuple = (2004, 2008)


# Balanced circle: several regular collaborators, none dominant.
FLAT_PROFILE = SynthProfile(
    name="flat",
    center="F. Center",
    coauthors=("F. Alder", "F. Birch", "F. Cedar", "F. Dogwood", "F. Elm"),
    coauthor_weights=(0.22, 0.21, 0.20, 0.19, 0.18),
    group_size_probs=(0.15, 0.55, 0.25, 0.05),
    papers=60,
)

# Anchored circle: one dominant collaborator plus occasional others.
ANCHORED_PROFILE = SynthProfile(
    name="anchored",
    center="A. Center",
    coauthors=("A. Anchor", "A. Second", "A. Third", "A. Fourth"),
    coauthor_weights=(0.55, 0.25, 0.12, 0.08),
    group_size_probs=(0.05, 0.35, 0.40, 0.20),
    papers=45,
)

PROFILES = {p.name: p for p in (FLAT_PROFILE, ANCHORED_PROFILE)}


def synth_corpus(profile, seed=0, papers=None, years=None) -> list:
    """Seeded synthetic corpus for a collaboration profile.

    ``profile`` is a SynthProfile or one of the preset names
    ``"flat"`` / ``"anchored"``; ``papers`` and ``years`` override the
    profile's own.  Same arguments, same records.
    """
    if isinstance(profile, str):
        try:
            profile = PROFILES[profile]
        except KeyError:
            raise ValueError(
                f"unknown profile {profile!r}; presets: {sorted(PROFILES)}"
            ) from None
    papers = profile.papers if papers is None else int(papers)
    if papers < 1:
        raise ValueError("a corpus needs at least one paper")
    years = tuple(profile.years if years is None else years)
    weights = np.asarray(profile.coauthor_weights, dtype=float)
    if weights.min() <= 0:
        raise ValueError("coauthor weights must be positive")
    weights = weights / weights.sum()
    size_probs = np.asarray(profile.group_size_probs, dtype=float)
    if size_probs.min() < 0 or abs(size_probs.sum() - 1.0) > 1e-9:
        raise ValueError("group size probabilities must be >= 0 and sum to 1")
    rng = np.random.default_rng(seed)
    records = []
    for i in range(papers):
        year = int(rng.integers(years[0], years[1] + 1))
        size = int(rng.choice(len(size_probs), p=size_probs))
        chosen = []
        if size:
            idx = rng.choice(len(weights), size=size, replace=False, p=weights)
            chosen = sorted(profile.coauthors[j] for j in idx)
        records.append(
            PublicationRecord(
                (profile.center, *chosen), year, f"{profile.name}-{seed}-{i:04d}"
            )
        )
    return records
