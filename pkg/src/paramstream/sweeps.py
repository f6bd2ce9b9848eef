"""Batch checks of the streaming algorithms against the exact oracles.

Each ``check_*`` function takes one picklable work item and returns a
:class:`SweepTally`, so sweeps can be spread over processes with
:func:`paramstream.corpus.parallel_map` and merged with :meth:`SweepTally.merge`.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass, field

from .corpus import edges_of_mask, isomorphism_classes, insert_delete_stream, shuffled_orders, vertex_pairs
from .multipass_vc import vc_branching, vc_iterative_compression
from .oracles import (
    StoredGraph,
    disjoint_union,
    fvs_min,
    girth,
    is_vertex_cover,
    longest_path_length,
    treewidth_exact,
    vc_min,
)
from .stream import insert_only
from .threshold import (
    BIDIMENSIONAL_PROBLEMS,
    bidimensional_decide,
    k_fvs_decide,
    k_path_decide,
    k_treewidth_decide,
)

MAX_EXAMPLES = 5


@dataclass
class SweepTally:
    """Counts of checks and failures, with a few failing examples kept."""

    checks: Counter = field(default_factory=Counter)
    failures: Counter = field(default_factory=Counter)
    examples: dict = field(default_factory=dict)
    maxima: dict = field(default_factory=dict)

    def check(self, name: str, ok: bool, example=None) -> None:
        self.checks[name] += 1
        if not ok:
            self.failures[name] += 1
            kept = self.examples.setdefault(name, [])
            if len(kept) < MAX_EXAMPLES:
                kept.append(example)

    def record_max(self, name: str, value) -> None:
        if name not in self.maxima or value > self.maxima[name]:
            self.maxima[name] = value

    def merge(self, other: "SweepTally") -> "SweepTally":
        self.checks.update(other.checks)
        self.failures.update(other.failures)
        for name, kept in other.examples.items():
            mine = self.examples.setdefault(name, [])
            mine.extend(kept[: MAX_EXAMPLES - len(mine)])
        for name, value in other.maxima.items():
            self.record_max(name, value)
        return self

    @property
    def total_failures(self) -> int:
        return sum(self.failures.values())

    @classmethod
    def combine(cls, tallies) -> "SweepTally":
        out = cls()
        for t in tallies:
            out.merge(t)
        return out


# -- multipass vertex cover -----------------------------------------------------

VC_KS = (0, 1, 2, 3)


def check_vc_masks(item: tuple[int, int, int]) -> SweepTally:
    """Both multipass k-VC algorithms against ``vc_min`` on the labeled
    graphs ``lo <= mask < hi`` over ``n`` vertices, edges in index order."""
    n, lo, hi = item
    tally = SweepTally()
    pairs = vertex_pairs(n)
    width = len(pairs)
    for mask in range(lo, hi):
        edges = [pairs[i] for i in range(width) if mask >> i & 1]
        _check_vc_graph(tally, n, edges, (n, mask))
    return tally


def _check_vc_graph(tally: SweepTally, n: int, edges, label) -> None:
    stream = insert_only(n, edges)
    g = StoredGraph.from_edges(n, edges)
    opt = vc_min(g)[0]
    for k in VC_KS:
        for name, run, pass_cap, word_cap in (
            ("branching", vc_branching, 2 ** k, 2 * k + 4),
            ("compression", vc_iterative_compression, 1 + k * 4 ** k, 7 * k + 6),
        ):
            out = run(stream, k)
            tally.check(f"{name} decision", out.decision == (opt <= k), (label, k))
            if out.cover is not None:
                ok = len(out.cover) <= k and is_vertex_cover(g, out.cover)
                tally.check(f"{name} witness", ok, (label, k, sorted(out.cover)))
            tally.check(f"{name} passes", out.passes <= pass_cap, (label, k, out.passes))
            tally.check(f"{name} words", out.peak_words <= word_cap, (label, k, out.peak_words))
            tally.record_max(f"{name} passes k={k}", out.passes)
            tally.record_max(f"{name} words k={k}", out.peak_words)


def check_vc_orders(item: tuple[int, list, int, int]) -> SweepTally:
    """Multipass k-VC on ``orders`` random orders of one graph."""
    n, edges, seed, orders = item
    tally = SweepTally()
    rng = random.Random(seed)
    for order in shuffled_orders(edges, orders, rng):
        _check_vc_graph(tally, n, order, (n, tuple(order)))
    return tally


def vc_work_items(max_n: int, chunk: int = 1 << 15) -> list[tuple[int, int, int]]:
    items = []
    for n in range(1, max_n + 1):
        total = 1 << len(vertex_pairs(n))
        items.extend((n, lo, min(total, lo + chunk)) for lo in range(0, total, chunk))
    return items


# -- threshold algorithms and extremal bounds ---------------------------------------

THRESHOLD_KS = (0, 1, 2, 3, 4)


def check_threshold_graph(item: tuple[int, list, int, int, bool]) -> SweepTally:
    """Threshold deciders against oracles on one graph, over ``orders``
    random orders in each stream model, plus the extremal edge bounds."""
    n, edges, seed, orders, with_bidim = item
    tally = SweepTally()
    rng = random.Random(seed)
    g = StoredGraph.from_edges(n, edges)
    m = len(edges)
    lp = longest_path_length(g)
    tw = treewidth_exact(g)
    fvs = fvs_min(g)[0]
    label = (n, tuple(sorted(edges)))

    tally.check("edges <= tw * n", m <= tw * n, label)
    tally.check("edges <= n * (fvs + 1)", m <= n * (fvs + 1), label)
    if n:
        tally.check("edges >= n*k implies path >= k", lp >= m // n, label)

    truth = {
        "path": lambda k: lp >= k,
        "treewidth": lambda k: tw <= k,
        "fvs": lambda k: fvs <= k,
    }
    deciders = {"path": k_path_decide, "treewidth": k_treewidth_decide, "fvs": k_fvs_decide}
    budgets = {"path": lambda k: n * k, "treewidth": lambda k: n * k, "fvs": lambda k: n * (k + 1)}
    streams = []
    for order in shuffled_orders(edges, orders, rng):
        streams.append(("insert-only", insert_only(n, order)))
        streams.append(("insert-delete", insert_delete_stream(n, order, rng)))
    for model, stream in streams:
        for problem, decide in deciders.items():
            for k in THRESHOLD_KS:
                if problem == "path" and k == 0:
                    continue
                out = decide(stream, k)
                expected = truth[problem](k)
                tally.check(f"{problem} {model}", out.decision == expected, (label, k, model))
                tally.check(f"{problem} threshold", out.threshold == budgets[problem](k), (label, k))
                if out.over_budget and model == "insert-only":
                    tally.check("early abort sound", out.decision == expected, (label, problem, k))
                if model == "insert-only":
                    tally.check(
                        f"{problem} insert-only words",
                        out.peak_words <= 2 * out.threshold + 4,
                        (label, k, out.peak_words, out.threshold),
                    )
                    tally.record_max(f"{problem} insert-only words - 2M", out.peak_words - 2 * out.threshold)
                else:
                    tally.record_max(f"{problem} insert-delete words", out.peak_words)
        if with_bidim:
            vc = vc_min(g)[0]
            bidim_truth = {"treewidth": tw, "vc": vc, "fvs": fvs}
            for name, spec in BIDIMENSIONAL_PROBLEMS.items():
                for k in THRESHOLD_KS:
                    out = bidimensional_decide(stream, k, spec)
                    expected = lp >= k if name == "path" else bidim_truth[name] <= k
                    tally.check(f"bidimensional {name} {model}", out.decision == expected, (label, k))
    return tally


# -- AND / OR composition under disjoint union --------------------------------------

def check_composition(item: tuple[tuple[int, tuple], ...]) -> SweepTally:
    """Treewidth and girth predicates obey the AND law and k-path the OR law
    on the disjoint union of the given graphs."""
    tally = SweepTally()
    parts = [StoredGraph.from_edges(n, edges) for n, edges in item]
    union = disjoint_union(parts)
    tw_parts = [treewidth_exact(p) for p in parts]
    tw_union = treewidth_exact(union, by_component=False)
    girth_parts = [girth(p) for p in parts]
    girth_union = girth(union)
    lp_parts = [longest_path_length(p) for p in parts]
    lp_union = longest_path_length(union)
    label = tuple((n, tuple(e)) for n, e in item)
    for k in range(0, union.n + 1):
        tally.check("treewidth AND", (tw_union <= k) == all(t <= k for t in tw_parts), (label, k))
        tally.check("girth AND", (girth_union > k) == all(x > k for x in girth_parts), (label, k))
        tally.check("path OR", (lp_union >= k) == any(x >= k for x in lp_parts), (label, k))
    return tally


def composition_items(max_n: int, max_parts: int) -> list[tuple]:
    """Multisets of up to ``max_parts`` isomorphism classes with ``1 <= n <= max_n``."""
    classes = [(n, tuple(e)) for n in range(1, max_n + 1) for e in isomorphism_classes(n)]
    out = []
    for size in range(1, max_parts + 1):
        out.extend(itertools.combinations_with_replacement(classes, size))
    return out


def labeled_corpus(max_n: int) -> list[tuple[int, list]]:
    return [(n, edges_of_mask(n, mask)) for n in range(1, max_n + 1) for mask in range(1 << len(vertex_pairs(n)))]
