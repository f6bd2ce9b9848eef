"""Small-graph corpora, stream orderings and a process-pool runner.

Graphs here are ``(n, edges)`` pairs with edges as canonical ``(u, v)``
tuples, ``u < v``.  A labeled graph on ``n`` vertices is identified with a
bitmask over ``itertools.combinations(range(n), 2)``.
"""

from __future__ import annotations

import itertools
import os
import random
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Sequence, TypeVar

import numpy as np

from .stream import Model, Op, ReplayableStream, open_stream

Edge = tuple[int, int]
T = TypeVar("T")
R = TypeVar("R")


@lru_cache(maxsize=None)
def vertex_pairs(n: int) -> tuple[Edge, ...]:
    return tuple(itertools.combinations(range(n), 2))


def edges_of_mask(n: int, mask: int) -> list[Edge]:
    pairs = vertex_pairs(n)
    return [pairs[i] for i in range(len(pairs)) if mask >> i & 1]


def labeled_graphs(n: int) -> Iterator[list[Edge]]:
    """Every graph on vertex set ``[0, n)``, ``2**C(n,2)`` of them."""
    for mask in range(1 << len(vertex_pairs(n))):
        yield edges_of_mask(n, mask)


def _edge_permutation_table(n: int) -> np.ndarray:
    """Row ``p`` maps edge index ``e`` to its index under the ``p``-th vertex
    permutation."""
    pairs = vertex_pairs(n)
    index = {e: i for i, e in enumerate(pairs)}
    rows = []
    for perm in itertools.permutations(range(n)):
        rows.append([index[tuple(sorted((perm[u], perm[v])))] for u, v in pairs])
    return np.asarray(rows, dtype=np.int64).reshape(-1, len(pairs))


@lru_cache(maxsize=None)
def isomorphism_class_masks(n: int) -> tuple[int, ...]:
    """One labeled representative (the smallest mask) per isomorphism class.

    Walks masks upward; each unseen mask starts a class whose whole orbit
    under vertex permutations is then marked seen.
    """
    m = len(vertex_pairs(n))
    if m == 0:
        return (0,)
    table = _edge_permutation_table(n)
    weights = np.left_shift(np.int64(1), table)  # weight of edge e under each permutation
    seen = np.zeros(1 << m, dtype=bool)
    reps = []
    pos = 0
    bit_index = np.arange(m)
    while True:
        unseen = np.flatnonzero(~seen[pos:])
        if unseen.size == 0:
            break
        mask = pos + int(unseen[0])
        reps.append(mask)
        bits = (mask >> bit_index) & 1
        seen[(weights * bits).sum(axis=1)] = True
        pos = mask + 1
    return tuple(reps)


def isomorphism_classes(n: int) -> list[list[Edge]]:
    return [edges_of_mask(n, mask) for mask in isomorphism_class_masks(n)]


def random_graph(rng: random.Random, max_n: int, min_n: int = 1) -> tuple[int, list[Edge]]:
    """A ``G(n, p)`` graph with ``n`` and ``p`` themselves drawn uniformly."""
    n = rng.randint(min_n, max_n)
    p = rng.random()
    return n, [e for e in vertex_pairs(n) if rng.random() < p]


def random_graphs(count: int, max_n: int, seed: int) -> list[tuple[int, list[Edge]]]:
    rng = random.Random(seed)
    return [random_graph(rng, max_n) for _ in range(count)]


def shuffled_orders(edges: Sequence[Edge], count: int, rng: random.Random) -> list[list[Edge]]:
    out = []
    for _ in range(count):
        order = list(edges)
        rng.shuffle(order)
        out.append(order)
    return out


def insert_delete_stream(
    n: int, edges: Sequence[Edge], rng: random.Random, decoys: int | None = None
) -> ReplayableStream:
    """An insert-delete stream whose net graph is ``edges``.

    Besides the real edges, some decoy pairs are inserted and later deleted
    (a few of them twice over), and some real edges are deleted and
    re-inserted, all in a random interleaving that keeps every multiplicity
    in ``{0, 1}``.
    """
    real = list(edges)
    others = [e for e in vertex_pairs(n) if e not in set(real)]
    if decoys is None:
        decoys = rng.randint(0, len(others))
    decoy_edges = rng.sample(others, min(decoys, len(others)))
    # per-pair scripts of updates that must stay in order
    scripts: list[list[tuple[int, int, Op]]] = []
    for u, v in real:
        script = [(u, v, Op.INSERT)]
        if rng.random() < 0.25:
            script += [(u, v, Op.DELETE), (u, v, Op.INSERT)]
        scripts.append(script)
    for u, v in decoy_edges:
        script = [(u, v, Op.INSERT), (u, v, Op.DELETE)]
        if rng.random() < 0.25:
            script += [(u, v, Op.INSERT), (u, v, Op.DELETE)]
        scripts.append(script)
    slots = [i for i, s in enumerate(scripts) for _ in s]
    rng.shuffle(slots)
    cursors = [0] * len(scripts)
    updates = []
    for i in slots:
        updates.append(scripts[i][cursors[i]])
        cursors[i] += 1
    return open_stream(updates, n, Model.INSERT_DELETE)


def default_workers() -> int:
    return max(1, os.cpu_count() or 1)


def parallel_map(
    fn: Callable[[T], R], items: Iterable[T], workers: int | None = None, chunksize: int = 1
) -> list[R]:
    """``list(map(fn, items))``, spread over processes when ``workers > 1``.

    ``fn`` must be a module-level function so worker processes can import it.
    """
    items = list(items)
    workers = default_workers() if workers is None else workers
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items, chunksize=chunksize))
