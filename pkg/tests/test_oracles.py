import itertools
import math

import pytest
from hypothesis import given, strategies as st

import brute
from paramstream.config import DeskBounds
from paramstream.oracles import (
    CnfInstance,
    DeskBoundExceeded,
    StoredGraph,
    closed_neighbourhoods,
    disjoint_union,
    domset_min,
    find_path,
    format_dimacs,
    fvs_min,
    girth,
    is_dominating_set,
    is_vertex_cover,
    longest_path_length,
    min_cover_branching,
    min_dominating_set,
    parse_dimacs,
    sat2_solve,
    satd_brute,
    treewidth_exact,
    vc_min,
)
from strategies import graphs


def G(n, edges):
    return StoredGraph.from_edges(n, edges)


K3 = G(3, [(0, 1), (1, 2), (0, 2)])
STAR5 = G(6, [(0, i) for i in range(1, 6)])
P6 = G(6, [(i, i + 1) for i in range(5)])
C5 = G(5, [(i, (i + 1) % 5) for i in range(5)])
TWO_K3 = disjoint_union([K3, K3])
K5 = G(5, list(itertools.combinations(range(5), 2)))
# outer 5-cycle, inner pentagram, spokes
PETERSEN = G(
    10,
    [(i, (i + 1) % 5) for i in range(5)]
    + [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    + [(i, 5 + i) for i in range(5)],
)


def test_vc_examples():
    assert vc_min(G(0, [])) == (0, frozenset())
    size, w = vc_min(K3)
    assert size == 2 and is_vertex_cover(K3, w)
    assert vc_min(STAR5) == (1, frozenset({0}))


def test_longest_path_examples():
    assert longest_path_length(G(1, [])) == 0
    assert longest_path_length(P6) == 5
    assert longest_path_length(K3) == 2


def test_fvs_examples():
    assert fvs_min(P6) == (0, frozenset())
    assert fvs_min(K3)[0] == 1
    size, w = fvs_min(TWO_K3)
    assert size == 2 and len(w & {0, 1, 2}) == 1 and len(w & {3, 4, 5}) == 1


def test_treewidth_examples():
    assert treewidth_exact(P6) == 1
    assert treewidth_exact(STAR5) == 1
    assert treewidth_exact(K3) == 2
    assert treewidth_exact(G(4, [])) == 0
    assert treewidth_exact(K5) == 4


def test_girth_examples():
    assert girth(P6) == math.inf
    assert girth(K3) == 3
    assert girth(C5) == 5


def test_domset_examples():
    assert domset_min(STAR5) == (1, frozenset({0}))
    assert domset_min(G(4, [])) == (4, frozenset(range(4)))
    assert domset_min(K3)[0] == 1


def test_petersen_frozen_values():
    # standard values for the Petersen graph
    assert vc_min(PETERSEN)[0] == 6
    assert girth(PETERSEN) == 5
    assert treewidth_exact(PETERSEN) == 4
    assert fvs_min(PETERSEN)[0] == 3
    assert longest_path_length(PETERSEN) == 9
    assert domset_min(PETERSEN)[0] == 3


def test_sat_examples():
    for solve in (sat2_solve, satd_brute):
        assert solve(CnfInstance(2, ())) is True
        assert solve(CnfInstance(2, ((1, 2),))) is True
        assert solve(CnfInstance(1, ((1,), (-1,)))) is False


def test_cnf_validation():
    with pytest.raises(ValueError):
        CnfInstance(2, ((1, -1),))
    with pytest.raises(ValueError):
        CnfInstance(2, ((3,),))
    with pytest.raises(ValueError):
        sat2_solve(CnfInstance(3, ((1, 2, 3),)))


def test_dimacs_round_trip_and_errors():
    cnf = CnfInstance(3, ((1, -2), (3,), (-1, -3)))
    assert parse_dimacs(format_dimacs(cnf, ["demo"])) == cnf
    with pytest.raises(ValueError, match="line 2"):
        parse_dimacs("p cnf 2 1\n1 5 0\n")
    with pytest.raises(ValueError, match="line 1"):
        parse_dimacs("1 2 0\n")


def test_disjoint_union_examples():
    assert disjoint_union([]) == G(0, [])
    u = disjoint_union([K3, K3])
    assert (u.n, u.m, len(u.components())) == (6, 6, 2)
    assert longest_path_length(disjoint_union([G(2, [(0, 1)]), K3])) == 2


def test_desk_bounds_refuse():
    tiny = DeskBounds(vc_vertices=3, longest_path_vertices=3, fvs_vertices=2, treewidth_vertices=3, domset_vertices=3)
    with pytest.raises(DeskBoundExceeded):
        vc_min(K5, tiny)
    with pytest.raises(DeskBoundExceeded):
        longest_path_length(K5, tiny)
    with pytest.raises(DeskBoundExceeded):
        fvs_min(K5, tiny)
    # K5 is settled by matching lower and upper bounds; Petersen needs the search
    assert treewidth_exact(K5, tiny) == 4
    with pytest.raises(DeskBoundExceeded):
        treewidth_exact(PETERSEN, tiny)
    with pytest.raises(DeskBoundExceeded):
        domset_min(K5, tiny)


def test_find_path():
    assert find_path(P6, 5) == (0, 1, 2, 3, 4, 5)
    assert find_path(P6, 6) is None
    path = find_path(PETERSEN, 9)
    assert len(set(path)) == 10 and all((min(a, b), max(a, b)) in PETERSEN.edges for a, b in zip(path, path[1:]))


# -- agreement with brute force -------------------------------------------------

@given(graphs(max_n=7))
def test_vc_matches_brute(g):
    n, edges = g
    size, w = vc_min(G(n, edges))
    assert size == brute.vc(n, edges)
    assert is_vertex_cover(G(n, edges), w) and len(w) == size


@given(graphs(max_n=7))
def test_fvs_matches_brute(g):
    n, edges = g
    size, w = fvs_min(G(n, edges))
    assert size == brute.fvs(n, edges)
    keep = set(range(n)) - w
    assert brute.is_forest(keep, [(u, v) for u, v in edges if u in keep and v in keep])


@given(graphs(max_n=7))
def test_longest_path_matches_brute(g):
    n, edges = g
    assert longest_path_length(G(n, edges)) == brute.longest_path(n, edges)


@given(graphs(max_n=6))
def test_treewidth_matches_brute(g):
    n, edges = g
    expected = brute.treewidth(n, edges)
    assert treewidth_exact(G(n, edges)) == expected
    assert treewidth_exact(G(n, edges), by_component=False) == expected


@given(graphs(max_n=7))
def test_girth_matches_brute(g):
    n, edges = g
    assert girth(G(n, edges)) == brute.girth(n, edges)


@given(graphs(max_n=7))
def test_domset_matches_brute(g):
    n, edges = g
    size, w = domset_min(G(n, edges))
    assert size == brute.domset(n, edges)
    assert is_dominating_set(G(n, edges), w)
    assert len(min_cover_branching(closed_neighbourhoods(G(n, edges)))) == size


@given(graphs(max_n=7))
def test_cross_oracle_acyclicity(g):
    n, edges = g
    s = G(n, edges)
    acyclic = fvs_min(s)[0] == 0
    assert acyclic == (girth(s) == math.inf) == (treewidth_exact(s) <= 1)


@given(
    st.integers(1, 8).flatmap(
        lambda nv: st.tuples(
            st.just(nv),
            st.lists(
                st.lists(st.integers(1, nv), min_size=1, max_size=2, unique=True).map(
                    lambda vs: tuple(v if (v * 7919) % 3 else -v for v in vs)
                ),
                max_size=14,
            ),
            st.lists(st.booleans(), min_size=28, max_size=28),
        )
    )
)
def test_sat_solvers_match_brute(args):
    nv, clauses, flips = args
    clauses = [tuple(-l if flips[(i + j) % 28] else l for j, l in enumerate(c)) for i, c in enumerate(clauses)]
    cnf = CnfInstance(nv, tuple(clauses))
    expected = brute.cnf_satisfiable(nv, clauses)
    assert sat2_solve(cnf) == expected
    assert satd_brute(cnf) == expected


def test_min_dominating_set_size_cap():
    assert min_dominating_set(closed_neighbourhoods(G(4, [])), max_size=3) is None
