"""Single-pass "store at most M edges or decide at once" algorithms.

For each problem an extremal bound says that any graph with more than ``M``
edges is a forced instance (YES for path, NO for treewidth and FVS).  The
runner therefore either sees more than ``M`` edges and answers immediately,
or ends the pass holding the whole graph and hands it to an exact oracle.

Insert-only streams keep an explicit edge list.  Insert-delete streams keep an
``M``-sparse recovery sketch of the edge multiset plus a net edge counter and
decide at the end of the stream, since deletions can bring the count back
under ``M``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from .config import DEFAULT_TAU, DESK_BOUNDS, MAX_EDGE_BUDGET
from .oracles import (
    DeskBoundExceeded,
    StoredGraph,
    find_path,
    fvs_min,
    longest_path_length,
    treewidth_exact,
    vc_min,
)
from .sparse_recovery import Overflow, SparseRecoverySketch, decode_edge, encode_edge
from .stream import Model, Op, PassCounter, ReplayableStream, SpaceLedger, word_bits


class BudgetTooLarge(DeskBoundExceeded):
    """The edge budget does not fit a machine word at this ``k``."""


class SketchFailure(RuntimeError):
    """The sketch failed below capacity, which means a bug in the sketch."""


@dataclass(frozen=True)
class BudgetOutcome:
    """What one pass under an edge budget produced.

    ``graph`` is ``None`` exactly when the budget was exceeded.  For
    insert-only streams ``final_count`` is the count at which the pass gave
    up; for insert-delete streams it is the end-of-stream net count.
    """

    budget: int
    graph: StoredGraph | None
    final_count: int
    passes: int
    peak_words: int

    @property
    def over_budget(self) -> bool:
        return self.graph is None


def _check_budget(budget: int) -> None:
    if budget < 0:
        raise ValueError(f"edge budget must be non-negative, got {budget}")
    if budget > MAX_EDGE_BUDGET:
        raise BudgetTooLarge(
            f"edge budget {budget} exceeds {MAX_EDGE_BUDGET}; k is too large for a word-sized counter"
        )


def run_edge_budget(stream: ReplayableStream, budget: int, seed: int | None = 0) -> BudgetOutcome:
    """One pass keeping at most ``budget`` edges (see module docstring).

    ``seed`` feeds the sketch's verification fingerprint in insert-delete
    mode; decisions never depend on it.
    """
    _check_budget(budget)
    counter = PassCounter(stream)
    ledger = SpaceLedger()
    n = stream.n
    if stream.model is Model.INSERT_ONLY:
        ledger.charge(1)  # edge counter
        kept: list[tuple[int, int]] = []
        count = 0
        for u, v in counter.replay_edges():
            count += 1
            if count > budget:
                ledger.charge(2 * len(kept))
                return BudgetOutcome(budget, None, count, counter.passes, ledger.peak_words)
            kept.append((u, v))
        ledger.charge(2 * len(kept))
        return BudgetOutcome(budget, StoredGraph(n, frozenset(kept)), count, counter.passes, ledger.peak_words)

    # A graph on n vertices never has more than C(n, 2) edges, so a larger
    # capacity could never be used.
    capacity = max(1, min(budget, n * (n - 1) // 2))
    sketch = SparseRecoverySketch(capacity, max(1, n * n), seed=seed, ledger=ledger, word_bits=word_bits(n))
    ledger.charge(1)  # net edge counter
    net = 0
    for u, v, op in counter.replay():
        if op is Op.INSERT:
            sketch.insert(encode_edge(u, v, n))
            net += 1
        else:
            sketch.delete(encode_edge(u, v, n))
            net -= 1
    if net > budget:
        return BudgetOutcome(budget, None, net, counter.passes, ledger.peak_words)
    try:
        content = sketch.recover()
    except Overflow as exc:
        raise SketchFailure(f"sketch overflowed with net count {net} <= budget {budget}: {exc}") from exc
    if any(c != 1 for c in content.values()) or len(content) != net:
        raise SketchFailure(f"sketch returned multiplicities {dict(content)} for net count {net}")
    edges = frozenset(decode_edge(x, n) for x in content)
    ledger.charge(2 * len(edges))
    return BudgetOutcome(budget, StoredGraph(n, edges), net, counter.passes, ledger.peak_words)


@dataclass(frozen=True)
class ThresholdDecision:
    """YES/NO from a threshold algorithm, plus the pass's resource use.

    ``witness`` is filled only when the graph was stored and the answer has a
    natural certificate (a path for path, an FVS for FVS, and so on).
    """

    decision: bool
    threshold: int
    over_budget: bool
    witness: object = None
    passes: int = 1
    peak_words: int = 0
    extra: dict = field(default_factory=dict)


def _decided(outcome: BudgetOutcome, decision: bool, witness: object = None) -> ThresholdDecision:
    return ThresholdDecision(
        decision, outcome.budget, outcome.over_budget, witness, outcome.passes, outcome.peak_words
    )


def k_path_decide(stream: ReplayableStream, k: int, bounds=DESK_BOUNDS, seed: int | None = 0) -> ThresholdDecision:
    """Does the graph have a simple path with ``k`` edges?  Budget ``n * k``."""
    if k < 1:
        raise ValueError("k-path needs k >= 1")
    out = run_edge_budget(stream, stream.n * k, seed)
    if out.over_budget:
        return _decided(out, True)
    path = find_path(out.graph, k, bounds)
    return _decided(out, path is not None, path)


def k_treewidth_decide(stream: ReplayableStream, k: int, bounds=DESK_BOUNDS, seed: int | None = 0) -> ThresholdDecision:
    """Is the treewidth at most ``k``?  Budget ``n * k``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    out = run_edge_budget(stream, stream.n * k, seed)
    if out.over_budget:
        return _decided(out, False)
    return _decided(out, treewidth_exact(out.graph, bounds) <= k)


def k_fvs_decide(stream: ReplayableStream, k: int, bounds=DESK_BOUNDS, seed: int | None = 0) -> ThresholdDecision:
    """Is there a feedback vertex set of size at most ``k``?  Budget ``n * (k + 1)``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    out = run_edge_budget(stream, stream.n * (k + 1), seed)
    if out.over_budget:
        return _decided(out, False)
    size, witness = fvs_min(out.graph, bounds)
    return _decided(out, size <= k, witness if size <= k else None)


# -- generic minor-bidimensional problems -------------------------------------

MINIMIZE = "minimize"
MAXIMIZE = "maximize"
GRID_EXPONENT = 10


@dataclass(frozen=True)
class BidimensionalProblemSpec:
    """A minor-bidimensional parameterized problem.

    ``grid_side(k)`` is the smallest ``r`` whose ``r x r`` grid already has
    value at least ``k + 1``.  For a minimisation problem, a grid minor that
    large makes the answer NO; for maximisation it makes it YES.
    ``decide(graph, k)`` answers exactly on a stored graph.
    """

    name: str
    direction: str
    grid_side: Callable[[int], int]
    decide: Callable[[StoredGraph, int], bool]
    grid_exponent: int = GRID_EXPONENT

    def __post_init__(self):
        if self.direction not in (MINIMIZE, MAXIMIZE):
            raise ValueError(f"direction must be {MINIMIZE!r} or {MAXIMIZE!r}")

    def budget(self, n: int, k: int, tau: int = DEFAULT_TAU) -> int:
        return tau * self.grid_side(k) ** self.grid_exponent * n


def _ceil_sqrt(x: int) -> int:
    r = math.isqrt(x)
    return r if r * r == x else r + 1


BIDIMENSIONAL_PROBLEMS: dict[str, BidimensionalProblemSpec] = {
    # the r x r grid has treewidth r
    "treewidth": BidimensionalProblemSpec(
        "treewidth", MINIMIZE, lambda k: k + 1, lambda g, k: treewidth_exact(g) <= k
    ),
    # vertex cover and FVS of the r x r grid are both Theta(r^2)
    "vc": BidimensionalProblemSpec(
        "vc", MINIMIZE, lambda k: _ceil_sqrt(k + 1), lambda g, k: vc_min(g)[0] <= k
    ),
    "fvs": BidimensionalProblemSpec(
        "fvs", MINIMIZE, lambda k: _ceil_sqrt(k + 1), lambda g, k: fvs_min(g)[0] <= k
    ),
    # the r x r grid has a Hamiltonian path with r^2 - 1 edges
    "path": BidimensionalProblemSpec(
        "path", MAXIMIZE, lambda k: _ceil_sqrt(k + 2), lambda g, k: longest_path_length(g) >= k
    ),
}


def bidimensional_decide(
    stream: ReplayableStream,
    k: int,
    spec: BidimensionalProblemSpec | str,
    tau: int = DEFAULT_TAU,
    seed: int | None = 0,
) -> ThresholdDecision:
    """Decide ``spec`` with budget ``tau * grid_side(k)**10 * n``."""
    if isinstance(spec, str):
        try:
            spec = BIDIMENSIONAL_PROBLEMS[spec]
        except KeyError:
            raise ValueError(
                f"unknown bidimensional problem {spec!r}; known: {', '.join(BIDIMENSIONAL_PROBLEMS)}"
            ) from None
    if k < 0:
        raise ValueError("k must be non-negative")
    if tau < 1:
        raise ValueError("tau must be at least 1")
    out = run_edge_budget(stream, spec.budget(stream.n, k, tau), seed)
    if out.over_budget:
        return _decided(out, spec.direction == MAXIMIZE)
    return _decided(out, bool(spec.decide(out.graph, k)))
