"""Deliberately naive reference solvers, independent of the package oracles."""

from __future__ import annotations

import itertools
import math


def adjacency(n, edges):
    adj = {v: set() for v in range(n)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    return adj


def vc(n, edges):
    for size in range(n + 1):
        for s in itertools.combinations(range(n), size):
            if all(u in s or v in s for u, v in edges):
                return size
    return 0


def is_forest(vertices, edges):
    parent = {v: v for v in vertices}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for u, v in edges:
        if u not in parent or v not in parent:
            continue
        a, b = find(u), find(v)
        if a == b:
            return False
        parent[a] = b
    return True


def fvs(n, edges):
    for size in range(n + 1):
        for s in itertools.combinations(range(n), size):
            keep = set(range(n)) - set(s)
            if is_forest(keep, [(u, v) for u, v in edges if u in keep and v in keep]):
                return size
    return n


def longest_path(n, edges):
    adj = adjacency(n, edges)
    best = 0

    def walk(v, seen, length):
        nonlocal best
        best = max(best, length)
        for w in adj[v]:
            if w not in seen:
                walk(w, seen | {w}, length + 1)

    for v in range(n):
        walk(v, {v}, 0)
    return best


def treewidth(n, edges):
    """Minimum over all elimination orders of the largest clique formed."""
    if not edges:
        return 0
    base = adjacency(n, edges)
    best = n
    for order in itertools.permutations(range(n)):
        adj = {v: set(s) for v, s in base.items()}
        width = 0
        for v in order:
            nb = adj.pop(v)
            width = max(width, len(nb))
            if width >= best:
                break
            for a in nb:
                adj[a].discard(v)
                adj[a] |= nb - {a}
        best = min(best, width)
    return best


def girth(n, edges):
    adj = adjacency(n, edges)
    best = math.inf
    for length in range(3, n + 1):
        for cyc in itertools.permutations(range(n), length):
            if cyc[0] != min(cyc):
                continue
            if all(cyc[(i + 1) % length] in adj[cyc[i]] for i in range(length)):
                return length
    return best


def domset(n, edges):
    adj = adjacency(n, edges)
    for size in range(n + 1):
        for s in itertools.combinations(range(n), size):
            covered = set(s)
            for v in s:
                covered |= adj[v]
            if len(covered) == n:
                return size
    return n


def cnf_satisfiable(num_vars, clauses):
    for bits in itertools.product((False, True), repeat=num_vars):
        if all(any(bits[abs(l) - 1] == (l > 0) for l in c) for c in clauses):
            return True
    return False
