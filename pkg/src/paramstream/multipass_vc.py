"""Multipass k-vertex-cover in O(k) words.

Two algorithms over an insert-only stream replayed in a fixed order:

* :func:`vc_branching` walks every k-bit string; bit ``i`` says which
  endpoint of the ``i``-th uncovered edge joins the cover.  At most ``2**k``
  passes.
* :func:`vc_iterative_compression` builds a greedy maximal matching in one
  pass, then tries each subset ``Y`` of the matched vertices ``S`` (``|Y| <=
  k``) as the part of a small cover lying inside ``S``, completing it in one
  pass with the vertices outside ``S`` that are forced by ``S - Y``.  At most
  ``1 + sum_{i<=k} C(2k, i)`` passes.

Edges are oriented ``u < v`` by vertex id.  Space is charged to a ledger:
one word per stored vertex id or counter, and ``ceil(k / w)`` words for a
k-bit string, ``w`` being the word size for the stream's ``n``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .stream import (
    Model,
    ModelError,
    PassCounter,
    ReplayableStream,
    SpaceLedger,
    bitstring_words,
)


@dataclass(frozen=True)
class VCOutcome:
    """Result of a multipass k-VC run; ``cover`` is ``None`` for NO."""

    cover: frozenset[int] | None
    passes: int
    peak_words: int

    @property
    def decision(self) -> bool:
        return self.cover is not None


def _require_insert_only(stream: ReplayableStream) -> None:
    if stream.model is not Model.INSERT_ONLY:
        raise ModelError("multipass vertex cover needs an insert-only stream")


class BranchString:
    """The strings of ``{0,1}^k`` in dictionary order, then exhausted."""

    def __init__(self, k: int):
        self.k = k
        self.value = 0
        self.exhausted = False

    def bit(self, i: int) -> int:
        """Bit ``i`` (1-based, most significant first)."""
        return (self.value >> (self.k - i)) & 1

    def bits(self) -> tuple[int, ...]:
        return tuple(self.bit(i) for i in range(1, self.k + 1))

    def advance(self) -> None:
        if self.value == (1 << self.k) - 1:
            self.exhausted = True
        else:
            self.value += 1

    def __str__(self) -> str:
        return "spade" if self.exhausted else "".join(map(str, self.bits()))


class BoundedSubsetCursor:
    """Subsets of a ground sequence with at most ``k`` elements, in dictionary
    order of their sorted index lists (``{}`` first, a set before its
    extensions).  Holds only the current index list."""

    def __init__(self, ground: tuple[int, ...], k: int, ledger: SpaceLedger | None = None):
        self.ground = ground
        self.k = k
        self.indices: list[int] = []
        self.exhausted = False
        self.ledger = ledger if ledger is not None else SpaceLedger()

    @property
    def current(self) -> frozenset[int]:
        return frozenset(self.ground[i] for i in self.indices)

    def advance(self) -> None:
        idx = self.indices
        nxt = idx[-1] + 1 if idx else 0
        if len(idx) < self.k and nxt < len(self.ground):
            idx.append(nxt)
            self.ledger.charge(1)
            return
        while idx:
            last = idx.pop() + 1
            if last < len(self.ground):
                idx.append(last)
                return
            self.ledger.release(1)
        self.exhausted = True

    def __iter__(self):
        while not self.exhausted:
            yield self.current
            self.advance()


def vc_branching(stream: ReplayableStream, k: int) -> VCOutcome:
    """k-VC by replaying the stream once per string of ``{0,1}^k``.

    For the current string ``X``, the ``i``-th edge seen with neither endpoint
    in ``S`` adds its smaller endpoint when ``X[i] = 0`` and its larger one
    otherwise.  The string fails if an uncovered edge appears after ``k``
    vertices were added; a string reaching the end of the stream yields a
    cover.  Scanning continues after the ``k``-th addition so that a cover
    completed early is still recognised.
    """
    _require_insert_only(stream)
    if k < 0:
        raise ValueError("k must be non-negative")
    ledger = SpaceLedger()
    counter = PassCounter(stream)
    ledger.charge(bitstring_words(k, stream.n))  # X
    ledger.charge(2)  # i and j
    x = BranchString(k)
    while not x.exhausted:
        bits = x.bits()
        cover: set[int] = set()
        i = 0
        ok = True
        for u, v in counter.replay_edges():
            if u in cover or v in cover:
                continue
            if i == k:
                ok = False
                break
            cover.add(v if bits[i] else u)
            i += 1
        # S only grows within a pass, so charging its final size gives the same peak
        ledger.charge(len(cover))
        if ok:
            return VCOutcome(frozenset(cover), counter.passes, ledger.peak_words)
        ledger.release(len(cover))
        x.advance()
    return VCOutcome(None, counter.passes, ledger.peak_words)


def greedy_maximal_matching_pass(
    counter: PassCounter, cap: int, ledger: SpaceLedger | None = None
) -> frozenset[int] | None:
    """One pass of greedy matching; the saturated vertices, or ``None`` as
    soon as the matching would exceed ``cap`` edges."""
    ledger = ledger if ledger is not None else SpaceLedger()
    matched: set[int] = set()
    size = 0
    for u, v in counter.replay_edges():
        if u in matched or v in matched:
            continue
        if size == cap:
            ledger.charge(2 * size)
            return None
        matched.add(u)
        matched.add(v)
        size += 1
    ledger.charge(2 * size)
    return frozenset(matched)


class DisjointStatus(enum.Enum):
    FOUND = "found"
    TOO_BIG = "too-big"
    CONFLICT = "conflict"


@dataclass(frozen=True)
class DisjointOutcome:
    status: DisjointStatus
    cover: frozenset[int] | None = None


def disjoint_vc_pass(
    counter: PassCounter,
    s: frozenset[int],
    y: frozenset[int],
    budget: int,
    ledger: SpaceLedger | None = None,
) -> DisjointOutcome:
    """Complete ``Y`` to a cover avoiding ``S - Y``, in one pass.

    ``S`` must be a vertex cover.  Every outside neighbour of ``S - Y`` is
    forced into the cover; the pass stops with ``TOO_BIG`` once more than
    ``budget - |Y|`` are forced, and with ``CONFLICT`` on an edge inside
    ``S - Y`` (no cover avoiding ``S - Y`` can exist).
    """
    ledger = ledger if ledger is not None else SpaceLedger()
    banned = s - y
    room = budget - len(y)
    forced: set[int] = set()
    outcome = None
    for u, v in counter.replay_edges():
        u_banned = u in banned
        v_banned = v in banned
        if u_banned and v_banned:
            outcome = DisjointOutcome(DisjointStatus.CONFLICT)
            break
        if u_banned or v_banned:
            other = v if u_banned else u
            if other not in s and other not in forced:
                forced.add(other)
                if len(forced) > room:
                    outcome = DisjointOutcome(DisjointStatus.TOO_BIG)
                    break
        elif u not in s and v not in s:
            raise ValueError(f"edge ({u}, {v}) avoids S; S is not a vertex cover")
    # the forced set only grows during the pass; charge its peak size once
    ledger.charge(len(forced)).release(len(forced))
    return outcome or DisjointOutcome(DisjointStatus.FOUND, frozenset(y | forced))


def vc_iterative_compression(stream: ReplayableStream, k: int) -> VCOutcome:
    """k-VC by one matching pass followed by one pass per guessed ``Y``.

    A matching with more than ``k`` edges means NO.  Otherwise its vertex
    set ``S`` (at most ``2k`` vertices) is a cover; if ``|S| <= k`` it is the
    answer.  Else every subset ``Y`` of ``S`` with ``|Y| <= k`` is tried in
    dictionary order as ``X & S`` for an unknown cover ``X`` of size ``<= k``,
    and the first successful completion is returned.  This is complete: for
    any such ``X``, the guess ``Y = X & S`` succeeds.
    """
    _require_insert_only(stream)
    if k < 0:
        raise ValueError("k must be non-negative")
    ledger = SpaceLedger()
    counter = PassCounter(stream)
    ledger.charge(1)  # iteration counter
    matched = greedy_maximal_matching_pass(counter, k, ledger)
    if matched is None:
        return VCOutcome(None, counter.passes, ledger.peak_words)
    if len(matched) <= k:
        return VCOutcome(matched, counter.passes, ledger.peak_words)
    # S is the matched set itself; Y lives in the cursor as indices into S
    cursor = BoundedSubsetCursor(tuple(sorted(matched)), k, ledger)
    for y in cursor:
        outcome = disjoint_vc_pass(counter, matched, y, k, ledger)
        if outcome.status is DisjointStatus.FOUND:
            return VCOutcome(outcome.cover, counter.passes, ledger.peak_words)
    return VCOutcome(None, counter.passes, ledger.peak_words)
