"""Exact desk-scale solvers and the disjoint-union composer.

These run at the end of a stream on a stored graph, and double as ground
truth in tests.  Each graph oracle refuses inputs beyond its bound in
:data:`paramstream.config.DESK_BOUNDS` with :class:`DeskBoundExceeded` rather
than running for hours.  Vertex sets are handled as integer bitmasks
internally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .config import DESK_BOUNDS
from .stream import ReplayableStream, canonical


class DeskBoundExceeded(ValueError):
    """An exact oracle was asked to solve an instance above its desk bound."""


def _refuse(what: str, size: int, bound: int) -> None:
    if size > bound:
        raise DeskBoundExceeded(f"{what}: size {size} exceeds desk bound {bound}")


@dataclass(frozen=True)
class StoredGraph:
    """A simple undirected graph on ``[0, n)`` with canonical ``u < v`` edges."""

    n: int
    edges: frozenset[tuple[int, int]] = frozenset()

    def __post_init__(self):
        clean = frozenset(canonical(u, v) for u, v in self.edges)
        for u, v in clean:
            if u == v or not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"invalid edge ({u}, {v}) for n={self.n}")
        object.__setattr__(self, "edges", clean)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "StoredGraph":
        return cls(n, frozenset(edges))

    @classmethod
    def from_stream(cls, stream: ReplayableStream) -> "StoredGraph":
        return cls(stream.n, frozenset(stream.net_edges()))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def adj(self) -> tuple[int, ...]:
        """Open neighbourhood of each vertex as a bitmask."""
        adj = [0] * self.n
        for u, v in self.edges:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return tuple(adj)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def components(self) -> list[int]:
        """Connected components as vertex bitmasks, in order of least vertex."""
        return _components(self.adj, (1 << self.n) - 1)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _components(adj: Sequence[int], alive: int) -> list[int]:
    comps = []
    rest = alive
    while rest:
        seed = rest & -rest
        comp = seed
        frontier = seed
        while frontier:
            low = frontier & -frontier
            frontier ^= low
            new = adj[low.bit_length() - 1] & alive & ~comp
            comp |= new
            frontier |= new
        comps.append(comp)
        rest &= ~comp
    return comps


def is_vertex_cover(g: StoredGraph, cover: Iterable[int]) -> bool:
    s = set(cover)
    return all(u in s or v in s for u, v in g.edges)


# -- vertex cover ------------------------------------------------------------

def vc_min(g: StoredGraph, bounds=DESK_BOUNDS) -> tuple[int, frozenset[int]]:
    """Minimum vertex cover ``(size, witness)`` by bounded search.

    Branches on a maximum-degree vertex ``v``: either ``v`` is in the cover,
    or all of its neighbours are.  Vertices of degree one are resolved
    without branching (taking the neighbour is always safe).
    """
    _refuse("vc_min", g.n, bounds.vc_vertices)
    adj = g.adj
    best = [g.n + 1, 0]

    def search(alive: int, chosen: int, size: int) -> None:
        if size >= best[0]:
            return
        # forced moves: neighbour of a degree-1 vertex
        changed = True
        while changed:
            changed = False
            rest = alive
            while rest:
                low = rest & -rest
                rest ^= low
                nb = adj[low.bit_length() - 1] & alive
                if nb and not nb & (nb - 1):
                    alive &= ~(nb | low)
                    rest &= alive
                    chosen |= nb
                    size += 1
                    changed = True
                elif not nb:
                    alive &= ~low
            if size >= best[0]:
                return
        top, top_deg, top_nb = -1, 0, 0
        rest = alive
        edges_left = 0
        while rest:
            low = rest & -rest
            rest ^= low
            v = low.bit_length() - 1
            nb = adj[v] & alive
            d = nb.bit_count()
            edges_left += d
            if d > top_deg:
                top, top_deg, top_nb = v, d, nb
        if top_deg == 0:
            best[0], best[1] = size, chosen
            return
        # each cover vertex removes at most top_deg edges
        edges_left //= 2
        if size + -(-edges_left // top_deg) >= best[0]:
            return
        search(alive & ~(1 << top), chosen | (1 << top), size + 1)
        search(alive & ~top_nb & ~(1 << top), chosen | top_nb, size + top_deg)

    search((1 << g.n) - 1, 0, 0)
    return best[0], frozenset(_bits(best[1]))


# -- longest path ------------------------------------------------------------

def longest_path_length(g: StoredGraph, bounds=DESK_BOUNDS) -> int:
    """Number of edges on a longest simple path (0 for a single vertex).

    Exhaustive DFS per connected component, stopping early once a
    Hamiltonian path of the component is found.
    """
    best = 0
    adj = g.adj
    for comp in g.components():
        size = comp.bit_count()
        if size - 1 <= best:
            continue
        _refuse("longest_path_length", size, bounds.longest_path_vertices)
        target = size - 1
        found = [best]

        def dfs(v: int, visited: int, length: int) -> bool:
            if length > found[0]:
                found[0] = length
                if length == target:
                    return True
            nb = adj[v] & ~visited
            while nb:
                low = nb & -nb
                nb ^= low
                if dfs(low.bit_length() - 1, visited | low, length + 1):
                    return True
            return False

        # low-degree starts first: they end Hamiltonian paths most often
        for v in sorted(_bits(comp), key=lambda x: adj[x].bit_count()):
            if dfs(v, 1 << v, 0):
                break
        best = found[0]
    return best


def find_path(g: StoredGraph, length: int, bounds=DESK_BOUNDS) -> tuple[int, ...] | None:
    """Vertices of some simple path with exactly ``length`` edges, or ``None``."""
    if length < 0 or length >= g.n:
        return None
    adj = g.adj
    for comp in g.components():
        size = comp.bit_count()
        if size <= length:
            continue
        _refuse("find_path", size, bounds.longest_path_vertices)
        path: list[int] = []

        def dfs(v: int, visited: int) -> bool:
            path.append(v)
            if len(path) == length + 1:
                return True
            nb = adj[v] & ~visited
            while nb:
                low = nb & -nb
                nb ^= low
                if dfs(low.bit_length() - 1, visited | low):
                    return True
            path.pop()
            return False

        for v in _bits(comp):
            if dfs(v, 1 << v):
                return tuple(path)
    return None


# -- feedback vertex set ------------------------------------------------------

def _acyclic(adj: Sequence[int], alive: int) -> bool:
    edges = sum((adj[v] & alive).bit_count() for v in _bits(alive)) // 2
    return edges == alive.bit_count() - len(_components(adj, alive))


def _two_core(adj: Sequence[int], alive: int) -> int:
    changed = True
    while changed:
        changed = False
        for v in _bits(alive):
            if (adj[v] & alive).bit_count() <= 1:
                alive &= ~(1 << v)
                changed = True
    return alive


def fvs_min(g: StoredGraph, bounds=DESK_BOUNDS) -> tuple[int, frozenset[int]]:
    """Minimum feedback vertex set ``(size, witness)``.

    Vertices outside the 2-core never lie on a cycle, so the search runs over
    subsets of the 2-core in order of increasing size.
    """
    adj = g.adj
    core = _two_core(adj, (1 << g.n) - 1)
    verts = _bits(core)
    _refuse("fvs_min", len(verts), bounds.fvs_vertices)
    for size in range(len(verts) + 1):
        for pick in combinations(verts, size):
            removed = 0
            for v in pick:
                removed |= 1 << v
            if _acyclic(adj, core & ~removed):
                return size, frozenset(pick)
    raise AssertionError("unreachable: removing every core vertex leaves a forest")


# -- treewidth ---------------------------------------------------------------

def _min_degree_upper(adj: Sequence[int], alive: int) -> int:
    """Width of the min-degree elimination ordering."""
    nbrs = {v: adj[v] & alive for v in _bits(alive)}
    width = 0
    while nbrs:
        v = min(nbrs, key=lambda x: (nbrs[x].bit_count(), x))
        nb = nbrs.pop(v)
        width = max(width, nb.bit_count())
        for u in _bits(nb):
            nbrs[u] = (nbrs[u] | nb) & ~(1 << u) & ~(1 << v)
    return width


def _degeneracy(adj: Sequence[int], alive: int) -> int:
    best = 0
    while alive:
        v = min(_bits(alive), key=lambda x: (adj[x] & alive).bit_count())
        best = max(best, (adj[v] & alive).bit_count())
        alive &= ~(1 << v)
    return best


def _component_treewidth(adj: Sequence[int], comp: int, bounds) -> int:
    lo = _degeneracy(adj, comp)
    hi = _min_degree_upper(adj, comp)
    if lo == hi:
        return lo
    verts = _bits(comp)
    _refuse("treewidth_exact", len(verts), bounds.treewidth_vertices)
    # relabel to 0..s-1 so subsets index a dense table
    index = {v: i for i, v in enumerate(verts)}
    s = len(verts)
    local = [0] * s
    for v in verts:
        for u in _bits(adj[v] & comp):
            local[index[v]] |= 1 << index[u]
    full = (1 << s) - 1

    def q_size(done: int, v: int) -> int:
        # vertices outside done+v reachable from v through done
        reach = 1 << v
        frontier = reach
        seen = reach
        while frontier:
            low = frontier & -frontier
            frontier ^= low
            nb = local[low.bit_length() - 1] & ~seen
            seen |= nb
            frontier |= nb & done
        return (seen & ~done & ~(1 << v)).bit_count()

    # tw = min over orderings; table over eliminated prefixes, pruned at hi
    inf = s + 1
    table = {0: -1}
    for size in range(s):
        nxt: dict[int, int] = {}
        for done, val in table.items():
            rest = full & ~done
            while rest:
                low = rest & -rest
                rest ^= low
                v = low.bit_length() - 1
                cand = max(val, q_size(done, v))
                if cand >= hi:
                    continue
                key = done | low
                if cand < nxt.get(key, inf):
                    nxt[key] = cand
        if not nxt:
            return hi
        table = nxt
    return max(lo, min(table.values()))


def treewidth_exact(g: StoredGraph, bounds=DESK_BOUNDS, by_component: bool = True) -> int:
    """Exact treewidth via dynamic programming over elimination prefixes.

    Edgeless graphs have width 0, forests with an edge width 1.  With
    ``by_component`` (the default) each connected component is solved on its
    own and the maximum taken; pass ``False`` to run one search over the
    whole vertex set, which is slower but shares no code path with the
    component split.
    """
    adj = g.adj
    if not g.edges:
        return 0
    parts = g.components() if by_component else [(1 << g.n) - 1]
    return max(_component_treewidth(adj, comp, bounds) for comp in parts)


# -- girth -------------------------------------------------------------------

def girth(g: StoredGraph) -> float:
    """Length of a shortest cycle, ``math.inf`` for forests.

    BFS from every vertex; a non-tree edge ``(a, b)`` met from root ``r``
    closes a walk of length ``d(a) + d(b) + 1`` which contains a cycle, and
    the minimum over all roots is attained by a cycle through its root.
    """
    adj = [_bits(a) for a in g.adj]
    best = math.inf
    for root in range(g.n):
        dist = {root: 0}
        parent = {root: -1}
        queue = [root]
        for a in queue:
            if 2 * dist[a] + 1 >= best:
                break
            for b in adj[a]:
                if b not in dist:
                    dist[b] = dist[a] + 1
                    parent[b] = a
                    queue.append(b)
                elif parent[a] != b and parent[b] != a:
                    best = min(best, dist[a] + dist[b] + 1)
    return best


# -- dominating set ----------------------------------------------------------

def closed_neighbourhoods(g: StoredGraph) -> list[int]:
    return [a | (1 << v) for v, a in enumerate(g.adj)]


def min_dominating_set(
    closed: Sequence[int], max_size: int | None = None
) -> frozenset[int] | None:
    """Smallest set ``S`` with ``OR(closed[s] for s in S)`` covering everything.

    ``closed[v]`` is the bitmask of vertices that ``v`` dominates (itself
    included).  Sizes are tried in increasing order; with ``max_size`` the
    search stops there and returns ``None`` if nothing that small exists.
    """
    n = len(closed)
    full = (1 << n) - 1
    limit = n if max_size is None else min(max_size, n)
    for size in range(limit + 1):
        for pick in combinations(range(n), size):
            cov = 0
            for v in pick:
                cov |= closed[v]
            if cov == full:
                return frozenset(pick)
    return None


def min_cover_branching(closed: Sequence[int]) -> frozenset[int]:
    """Same answer as :func:`min_dominating_set`, by branch and bound.

    Branches on which set covers the uncovered vertex with the fewest
    candidates, pruning with ``ceil(uncovered / largest set)``.  Fast on the
    larger sparse set systems where plain enumeration is hopeless.
    """
    n = len(closed)
    full = (1 << n) - 1
    coverers = [[s for s in range(n) if closed[s] >> v & 1] for v in range(n)]
    widest = max((c.bit_count() for c in closed), default=0)
    best: list = [list(range(n))]

    def search(covered: int, chosen: list[int]) -> None:
        if covered == full:
            if len(chosen) < len(best[0]):
                best[0] = list(chosen)
            return
        missing = (full & ~covered).bit_count()
        if len(chosen) + -(-missing // widest) >= len(best[0]):
            return
        target = min(_bits(full & ~covered), key=lambda v: len(coverers[v]))
        for s in sorted(coverers[target], key=lambda s: -(closed[s] & ~covered).bit_count()):
            chosen.append(s)
            search(covered | closed[s], chosen)
            chosen.pop()

    if n:
        search(0, [])
    else:
        best[0] = []
    return frozenset(best[0])


def domset_min(g: StoredGraph, bounds=DESK_BOUNDS) -> tuple[int, frozenset[int]]:
    """Minimum dominating set ``(size, witness)``."""
    _refuse("domset_min", g.n, bounds.domset_vertices)
    ds = min_dominating_set(closed_neighbourhoods(g))
    return len(ds), ds


def is_dominating_set(g: StoredGraph, s: Iterable[int]) -> bool:
    closed = closed_neighbourhoods(g)
    cov = 0
    for v in s:
        cov |= closed[v]
    return cov == (1 << g.n) - 1


# -- CNF ---------------------------------------------------------------------

@dataclass(frozen=True)
class CnfInstance:
    """``num_vars`` variables; literals are DIMACS-style signed ints ``±(v+1)``."""

    num_vars: int
    clauses: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        cl = tuple(tuple(c) for c in self.clauses)
        for i, c in enumerate(cl):
            for lit in c:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ValueError(f"clause {i}: literal {lit} out of range for {self.num_vars} variables")
                if -lit in c:
                    raise ValueError(f"clause {i} contains both {lit} and {-lit}")
        object.__setattr__(self, "clauses", cl)

    @property
    def width(self) -> int:
        return max((len(c) for c in self.clauses), default=0)


def sat2_solve(cnf: CnfInstance) -> bool:
    """Satisfiability of a 2-CNF via strongly connected components of the
    implication graph (unsatisfiable iff some ``x`` and ``not x`` share one)."""
    if cnf.width > 2:
        raise ValueError("sat2_solve needs clauses of at most two literals")
    nv = cnf.num_vars
    node = lambda lit: 2 * (abs(lit) - 1) + (lit < 0)  # noqa: E731
    graph: list[list[int]] = [[] for _ in range(2 * nv)]
    for c in cnf.clauses:
        if not c:
            return False
        a, b = (c[0], c[0]) if len(c) == 1 else c
        graph[node(-a)].append(node(b))
        graph[node(-b)].append(node(a))
    comp = _tarjan(graph)
    return all(comp[2 * v] != comp[2 * v + 1] for v in range(nv))


def _tarjan(graph: list[list[int]]) -> list[int]:
    """Component id per node, iterative Tarjan."""
    n = len(graph)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    comp = [-1] * n
    stack: list[int] = []
    counter = 0
    ncomp = 0
    for start in range(n):
        if index[start] != -1:
            continue
        work = [(start, 0)]
        while work:
            v, i = work.pop()
            if i == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            recurse = False
            edges = graph[v]
            while i < len(edges):
                w = edges[i]
                i += 1
                if index[w] == -1:
                    work.append((v, i))
                    work.append((w, 0))
                    recurse = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return comp


def satd_brute(cnf: CnfInstance, bounds=DESK_BOUNDS) -> bool:
    """Satisfiability by trying all ``2**N`` assignments (vectorised)."""
    nv = cnf.num_vars
    _refuse("satd_brute", nv, bounds.sat_brute_variables)
    if any(len(c) == 0 for c in cnf.clauses):
        return False
    masks = []
    for c in cnf.clauses:
        pos = neg = 0
        for lit in c:
            if lit > 0:
                pos |= 1 << (lit - 1)
            else:
                neg |= 1 << (-lit - 1)
        masks.append((pos, neg))
    total = 1 << nv
    chunk = 1 << 20
    for start in range(0, total, chunk):
        a = np.arange(start, min(total, start + chunk), dtype=np.int64)
        ok = np.ones(a.shape, dtype=bool)
        for pos, neg in masks:
            ok &= ((a & pos) != 0) | ((~a & neg) != 0)
            if not ok.any():
                break
        if ok.any():
            return True
    return False


def parse_dimacs(text: str) -> CnfInstance:
    nv = None
    clauses: list[tuple[int, ...]] = []
    pending: list[int] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        parts = line.split()
        if not parts or parts[0] in ("c", "truth") or parts[0].startswith("#"):
            continue
        if parts[0] == "p":
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"line {lineno}: expected 'p cnf N M'")
            try:
                nv = int(parts[2])
            except ValueError:
                raise ValueError(f"line {lineno}: bad variable count {parts[2]!r}") from None
            continue
        if nv is None:
            raise ValueError(f"line {lineno}: clause before 'p cnf' header")
        try:
            lits = [int(x) for x in parts]
        except ValueError:
            raise ValueError(f"line {lineno}: non-integer literal") from None
        for lit in lits:
            if abs(lit) > nv:
                raise ValueError(f"line {lineno}: literal {lit} out of range for {nv} variables")
            if lit == 0:
                clauses.append(tuple(pending))
                pending = []
            else:
                pending.append(lit)
    if nv is None:
        raise ValueError("missing 'p cnf' header")
    if pending:
        clauses.append(tuple(pending))
    return CnfInstance(nv, tuple(clauses))


def format_dimacs(cnf: CnfInstance, comments: Sequence[str] = ()) -> str:
    out = [f"c {c}" for c in comments]
    out.append(f"p cnf {cnf.num_vars} {len(cnf.clauses)}")
    out.extend(" ".join(str(x) for x in c) + " 0" for c in cnf.clauses)
    return "\n".join(out) + "\n"


def read_dimacs(path: str | Path) -> CnfInstance:
    return parse_dimacs(Path(path).read_text())


# -- composition -------------------------------------------------------------

def disjoint_union(graphs: Sequence[StoredGraph]) -> StoredGraph:
    """Vertex-disjoint union; block ``i`` is shifted by the sizes before it."""
    offset = 0
    edges = []
    for g in graphs:
        edges.extend((u + offset, v + offset) for u, v in g.edges)
        offset += g.n
    return StoredGraph(offset, frozenset(edges))
