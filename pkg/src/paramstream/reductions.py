"""Hard-instance generators for one-way communication lower bounds.

Each generator turns an input of a communication problem (Perm or Index)
into a graph stream or a 2-CNF whose answer reveals the receiver's bit.
Alice's part of the stream comes first, Bob's part last.  Every generator
returns a :class:`Generated` carrying the instance and the ground-truth bit,
and :func:`extract_bit_via_solver` recovers the bit with an exact oracle.

Conventions (all 1-based on the communication side, 0-based vertex ids):

* A value ``v`` in ``[N]`` is written as ``v - 1`` in ``log2 N`` bits,
  most significant first.  ``B_delta`` concatenates the encodings of
  ``delta(1), ..., delta(N)``.
* Perm bit index ``I`` splits as ``I = (j - 1) * log2 N + l``.
* Index positions map row-major to grid cells:
  ``I -> ((I - 1) // r + 1, (I - 1) % r + 1)``.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .oracles import (
    CnfInstance,
    StoredGraph,
    closed_neighbourhoods,
    fvs_min,
    girth,
    longest_path_length,
    min_dominating_set,
    sat2_solve,
    treewidth_exact,
)
from .stream import ReplayableStream, insert_only


# -- input types ---------------------------------------------------------------

def _log2_exact(n: int) -> int:
    if n < 2 or n & (n - 1):
        raise ValueError(f"N must be a power of two >= 2, got {n}")
    return n.bit_length() - 1


def encode_value(v: int, width: int) -> tuple[int, ...]:
    """``v - 1`` as ``width`` bits, most significant first."""
    return tuple(((v - 1) >> (width - 1 - b)) & 1 for b in range(width))


@dataclass(frozen=True)
class PermInstance:
    """Alice holds a permutation ``delta`` of ``[N]``; Bob a bit index ``I``."""

    N: int
    delta: tuple[int, ...]
    I: int

    def __post_init__(self):
        log_n = _log2_exact(self.N)
        if sorted(self.delta) != list(range(1, self.N + 1)):
            raise ValueError(f"delta must be a permutation of 1..{self.N}, got {self.delta}")
        if not 1 <= self.I <= self.N * log_n:
            raise ValueError(f"I must lie in [1, {self.N * log_n}], got {self.I}")

    @property
    def log_n(self) -> int:
        return _log2_exact(self.N)

    @property
    def j(self) -> int:
        return (self.I - 1) // self.log_n + 1

    @property
    def ell(self) -> int:
        return (self.I - 1) % self.log_n + 1

    def bit_string(self) -> tuple[int, ...]:
        return tuple(b for v in self.delta for b in encode_value(v, self.log_n))

    @property
    def bit(self) -> int:
        return self.bit_string()[self.I - 1]


@dataclass(frozen=True)
class IndexInstance:
    """Alice holds bits ``B`` (length ``N``); Bob an index ``I*`` in ``[N]``."""

    B: tuple[int, ...]
    I: int

    def __post_init__(self):
        if any(b not in (0, 1) for b in self.B):
            raise ValueError("B must be a 0/1 string")
        if not 1 <= self.I <= len(self.B):
            raise ValueError(f"I must lie in [1, {len(self.B)}], got {self.I}")

    @property
    def N(self) -> int:
        return len(self.B)

    @property
    def bit(self) -> int:
        return self.B[self.I - 1]

    def side(self) -> int:
        """``r`` with ``r * r = N``; raises if ``N`` is not a perfect square."""
        r = math.isqrt(self.N)
        if r * r != self.N or r < 1:
            raise ValueError(f"N = {self.N} is not a positive perfect square")
        return r


def grid_cell(index: int, r: int) -> tuple[int, int]:
    """Row-major ``[r*r] -> [r] x [r]``, both 1-based."""
    return (index - 1) // r + 1, (index - 1) % r + 1


@dataclass(frozen=True)
class Generated:
    """A generated instance: ``payload`` is a stream or a CNF."""

    reduction: str
    payload: ReplayableStream | CnfInstance
    truth: int
    params: dict


# -- Perm reductions -------------------------------------------------------------

def _perm_matching(p: PermInstance) -> list[tuple[int, int]]:
    # w_i = i - 1, x_r = N + r - 1
    return [(i - 1, p.N + p.delta[i - 1] - 1) for i in range(1, p.N + 1)]


def _perm_zero_side(p: PermInstance) -> list[int]:
    """Vertex ids of ``x_r`` whose ``l``-th bit is 0."""
    return [p.N + r - 1 for r in range(1, p.N + 1) if encode_value(r, p.log_n)[p.ell - 1] == 0]


def _perm_params(p: PermInstance) -> dict:
    return {"N": p.N, "delta": list(p.delta), "I": p.I}


def gen_perm_5path(p: PermInstance) -> Generated:
    """Graph on ``2N + 2`` vertices with a 5-edge path iff bit ``I`` is 0.

    Vertices ``v = 2N`` and ``y = 2N + 1`` are Bob's: ``v`` joins ``w_j``
    and ``y`` joins every ``x_r`` whose ``l``-th bit is 0.  When the bit is 0
    the path ``v, w_j, x_delta(j), y, x', w'`` needs a second such ``x'``,
    which exists only for ``N >= 4``.
    """
    v, y = 2 * p.N, 2 * p.N + 1
    edges = _perm_matching(p) + [(v, p.j - 1)] + [(y, x) for x in _perm_zero_side(p)]
    return Generated("perm-5path", insert_only(2 * p.N + 2, edges), p.bit, _perm_params(p))


def _perm_one_vertex_graph(p: PermInstance) -> list[tuple[int, int]]:
    v = 2 * p.N
    return _perm_matching(p) + [(v, p.j - 1)] + [(v, x) for x in _perm_zero_side(p)]


def gen_perm_treewidth1(p: PermInstance) -> Generated:
    """Graph on ``2N + 1`` vertices that is a forest iff bit ``I`` is 1.

    Bob's vertex ``v = 2N`` joins ``w_j`` and every ``x_r`` whose ``l``-th
    bit is 0, closing the triangle ``v, w_j, x_delta(j)`` exactly when the
    bit of ``delta(j)`` is 0.
    """
    return Generated("perm-treewidth1", insert_only(2 * p.N + 1, _perm_one_vertex_graph(p)), p.bit, _perm_params(p))


def gen_perm_fvs0(p: PermInstance) -> Generated:
    """Same graph as :func:`gen_perm_treewidth1`, read as a 0-FVS instance."""
    return Generated("perm-fvs0", insert_only(2 * p.N + 1, _perm_one_vertex_graph(p)), p.bit, _perm_params(p))


# -- Index reductions -----------------------------------------------------------

def _index_bipartite(x: IndexInstance, r: int) -> list[tuple[int, int]]:
    # y_a = a - 1, w_b = r + b - 1
    out = []
    for index, b in enumerate(x.B, start=1):
        if b:
            a, c = grid_cell(index, r)
            out.append((a - 1, r + c - 1))
    return out


def _index_params(x: IndexInstance) -> dict:
    return {"B": "".join(map(str, x.B)), "I": x.I}


def gen_index_domset3(x: IndexInstance) -> Generated:
    """Graph on ``2r + 4`` vertices with a dominating set of size 3 iff
    ``B[I*] = 1``.

    Layout: ``y`` at ``0..r-1``, ``w`` at ``r..2r-1``, then ``x1, x2, z1,
    z2``.  ``x1`` joins ``x2`` and every ``y`` but ``y_alpha``; ``z1`` joins
    ``z2`` and every ``w`` but ``w_beta``.
    """
    r = x.side()
    alpha, beta = grid_cell(x.I, r)
    x1, x2, z1, z2 = 2 * r, 2 * r + 1, 2 * r + 2, 2 * r + 3
    edges = _index_bipartite(x, r)
    edges.append((x1, x2))
    edges.append((z1, z2))
    edges.extend((x1, a) for a in range(r) if a != alpha - 1)
    edges.extend((z1, r + c) for c in range(r) if c != beta - 1)
    return Generated("index-domset3", insert_only(2 * r + 4, edges), x.bit, _index_params(x))


def gen_index_girth3(x: IndexInstance) -> Generated:
    """Graph on ``2r + 1`` vertices with girth 3 iff ``B[I*] = 1``; Bob's
    vertex ``z = 2r`` joins ``y_alpha`` and ``w_beta``."""
    r = x.side()
    alpha, beta = grid_cell(x.I, r)
    z = 2 * r
    edges = _index_bipartite(x, r) + [(z, alpha - 1), (z, r + beta - 1)]
    return Generated("index-girth3", insert_only(2 * r + 1, edges), x.bit, _index_params(x))


def gen_index_2sat(x: IndexInstance) -> Generated:
    """2-CNF over ``2h`` variables (``h * h = len(B)``), satisfiable iff
    ``b_{L*} = 0``.

    Variables ``x_i`` are ``0..h-1`` and ``y_j`` are ``h..2h-1``.  Bit ``L``
    at cell ``(i, j)`` contributes ``(x_i or y_j)`` when 0 and
    ``(not x_i or y_j)`` when 1; Bob appends ``(not y_j*)`` and
    ``(x_i* or y_j*)``.
    """
    h = x.side()

    def xl(i: int) -> int:
        return i

    def yl(j: int) -> int:
        return h + j

    clauses = []
    for index, b in enumerate(x.B, start=1):
        i, j = grid_cell(index, h)
        clauses.append((-xl(i) if b else xl(i), yl(j)))
    i_star, j_star = grid_cell(x.I, h)
    clauses.append((-yl(j_star),))
    clauses.append((xl(i_star), yl(j_star)))
    return Generated("index-2sat", CnfInstance(2 * h, tuple(clauses)), x.bit, _index_params(x))


# -- hard distribution for dominating-set estimation -------------------------

@dataclass(frozen=True)
class DomSetEstSample:
    """One draw of the set system ``S'_1..S'_n, T`` on ``n + 1`` vertices.

    Elements of ``[n]`` are vertex ids ``0..n-1`` and element ``n + 1`` is
    vertex ``n``.  ``partitions[i]`` is the 16-block partition behind
    ``sets[i] = S_i`` (8 of its blocks).  ``i_star`` is a vertex id.
    """

    n: int
    beta: int
    partitions: tuple[tuple[frozenset[int], ...], ...]
    sets: tuple[frozenset[int], ...]
    theta: int
    i_star: int
    t_bar: frozenset[int]
    seed: int | None = None

    def closed_sets(self) -> list[frozenset[int]]:
        """``N[i] = {i} | S_i`` for ``i < n`` and ``N[n] = {n} | T``."""
        out = [frozenset({i}) | s for i, s in enumerate(self.sets)]
        t = frozenset(range(self.n)) - self.t_bar
        out.append(frozenset({self.n}) | t)
        return out

    @cached_property
    def neighbourhoods(self) -> tuple[int, ...]:
        """Closed neighbourhoods as bitmasks over ``n + 1`` vertices."""
        masks = []
        for s in self.closed_sets():
            m = 0
            for v in s:
                m |= 1 << v
            masks.append(m)
        return tuple(masks)

    def edge_list(self) -> list[tuple[int, int]]:
        """Undirected edges in vertex-arrival order, each emitted once."""
        seen: set[tuple[int, int]] = set()
        out = []
        for v, s in enumerate(self.closed_sets()):
            for u in sorted(s):
                if u == v:
                    continue
                e = (min(u, v), max(u, v))
                if e not in seen:
                    seen.add(e)
                    out.append(e)
        return out

    def graph(self) -> StoredGraph:
        return StoredGraph(self.n + 1, frozenset(self.edge_list()))

    def stream(self) -> ReplayableStream:
        return insert_only(self.n + 1, self.edge_list())

    def opt_at_most(self, size: int) -> frozenset[int] | None:
        """A set of at most ``size`` vertices whose closed sets cover all
        ``n + 1`` vertices, or ``None``."""
        return min_dominating_set(self.neighbourhoods, max_size=size)


def sample_domset_est(n: int, beta: int, seed: int | None = None, theta: int | None = None) -> DomSetEstSample:
    """Draw from the block formulation of the distribution.

    For each ``i`` a random ``2 * beta`` elements of ``[n]`` are split into
    16 blocks of ``beta / 8``; ``S_i`` is 8 of those blocks.  Bob's
    complement set ``T_bar`` is one block of the partition of ``i*``; it lies
    inside ``S_i*`` exactly when ``theta = 0``.  Passing ``theta`` conditions
    on it.
    """
    if beta < 8 or beta % 8:
        raise ValueError(f"beta must be a positive multiple of 8, got {beta}")
    if 2 * beta > n:
        raise ValueError(f"need 2 * beta <= n, got beta={beta}, n={n}")
    if theta not in (None, 0, 1):
        raise ValueError("theta must be 0, 1 or None")
    rng = random.Random(seed)
    block = beta // 8
    partitions = []
    chosen = []
    sets = []
    for _ in range(n):
        elems = rng.sample(range(n), 2 * beta)
        blocks = tuple(frozenset(elems[b * block:(b + 1) * block]) for b in range(16))
        picked = rng.sample(range(16), 8)
        partitions.append(blocks)
        chosen.append(set(picked))
        sets.append(frozenset().union(*(blocks[b] for b in picked)))
    if theta is None:
        theta = rng.randrange(2)
    i_star = rng.randrange(n)
    inside = sorted(chosen[i_star])
    outside = [b for b in range(16) if b not in chosen[i_star]]
    t_bar = partitions[i_star][rng.choice(inside if theta == 0 else outside)]
    return DomSetEstSample(n, beta, tuple(partitions), tuple(sets), theta, i_star, t_bar, seed)


# -- decoding ------------------------------------------------------------------

REDUCTIONS = (
    "perm-5path",
    "perm-treewidth1",
    "perm-fvs0",
    "index-domset3",
    "index-girth3",
    "index-2sat",
)


def extract_bit_via_solver(reduction: str, payload: ReplayableStream | CnfInstance) -> int:
    """Bob's bit as implied by an exact oracle on the generated instance."""
    if reduction == "index-2sat":
        if not isinstance(payload, CnfInstance):
            raise TypeError("index-2sat expects a CnfInstance")
        return 0 if sat2_solve(payload) else 1
    if not isinstance(payload, ReplayableStream):
        raise TypeError(f"{reduction} expects a stream")
    g = StoredGraph.from_stream(payload)
    if reduction == "perm-5path":
        return 0 if longest_path_length(g) >= 5 else 1
    if reduction == "perm-treewidth1":
        return 1 if treewidth_exact(g) <= 1 else 0
    if reduction == "perm-fvs0":
        return 1 if fvs_min(g)[0] == 0 else 0
    if reduction == "index-domset3":
        return 1 if min_dominating_set(closed_neighbourhoods(g), max_size=3) is not None else 0
    if reduction == "index-girth3":
        return 1 if girth(g) == 3 else 0
    raise ValueError(f"unknown reduction {reduction!r}; known: {', '.join(REDUCTIONS)}")


def generate(reduction: str, instance: PermInstance | IndexInstance) -> Generated:
    gens = {
        "perm-5path": gen_perm_5path,
        "perm-treewidth1": gen_perm_treewidth1,
        "perm-fvs0": gen_perm_fvs0,
        "index-domset3": gen_index_domset3,
        "index-girth3": gen_index_girth3,
        "index-2sat": gen_index_2sat,
    }
    try:
        return gens[reduction](instance)
    except KeyError:
        raise ValueError(f"unknown reduction {reduction!r}; known: {', '.join(REDUCTIONS)}") from None


def all_perm_instances(N: int) -> list[PermInstance]:
    log_n = _log2_exact(N)
    return [
        PermInstance(N, delta, I)
        for delta in itertools.permutations(range(1, N + 1))
        for I in range(1, N * log_n + 1)
    ]


def all_index_instances(N: int) -> list[IndexInstance]:
    return [
        IndexInstance(B, I)
        for B in itertools.product((0, 1), repeat=N)
        for I in range(1, N + 1)
    ]


def random_perm_instance(N: int, rng: random.Random) -> PermInstance:
    delta = list(range(1, N + 1))
    rng.shuffle(delta)
    return PermInstance(N, tuple(delta), rng.randrange(1, N * _log2_exact(N) + 1))


def random_index_instance(N: int, rng: random.Random) -> IndexInstance:
    return IndexInstance(tuple(rng.randrange(2) for _ in range(N)), rng.randrange(1, N + 1))


def parse_bits(text: str | Sequence[int]) -> tuple[int, ...]:
    if isinstance(text, str):
        if set(text) - {"0", "1"}:
            raise ValueError(f"bit string must contain only 0 and 1, got {text!r}")
        return tuple(int(c) for c in text)
    return tuple(text)
