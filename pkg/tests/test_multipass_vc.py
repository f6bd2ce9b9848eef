import itertools

import pytest
from hypothesis import given

import brute
from paramstream.multipass_vc import (
    BoundedSubsetCursor,
    BranchString,
    DisjointStatus,
    disjoint_vc_pass,
    greedy_maximal_matching_pass,
    vc_branching,
    vc_iterative_compression,
)
from paramstream.oracles import StoredGraph, is_vertex_cover
from paramstream.stream import ModelError, PassCounter, insert_only, open_stream
from strategies import graphs

TRIANGLE = [(0, 1), (1, 2), (0, 2)]
P4 = [(0, 1), (1, 2), (2, 3)]


def test_branch_string_enumerates_in_order():
    x = BranchString(3)
    seen = []
    while not x.exhausted:
        seen.append(x.bits())
        x.advance()
    assert seen == list(itertools.product((0, 1), repeat=3))
    x = BranchString(0)
    assert x.bits() == ()
    x.advance()
    assert x.exhausted


@pytest.mark.parametrize("size, k", [(0, 0), (0, 2), (3, 0), (3, 2), (4, 4), (6, 3)])
def test_bounded_subset_cursor(size, k):
    ground = tuple(range(10, 10 + size))
    got = [tuple(sorted(y)) for y in BoundedSubsetCursor(ground, k)]
    expected = sorted(
        (c for r in range(min(k, size) + 1) for c in itertools.combinations(ground, r)),
    )
    assert got == expected  # each subset once, dictionary order


def test_branching_examples():
    out = vc_branching(insert_only(5, []), 0)
    assert out.cover == frozenset() and out.passes == 1
    out = vc_branching(insert_only(3, TRIANGLE), 1)
    assert out.cover is None and out.passes == 2
    # center has the smaller id: string "0" works on the first pass
    out = vc_branching(insert_only(6, [(0, i) for i in range(1, 6)]), 1)
    assert out.cover == frozenset({0}) and out.passes == 1
    # center has the larger id: "0" picks a leaf and fails, "1" succeeds
    out = vc_branching(insert_only(6, [(i, 5) for i in range(5)]), 1)
    assert out.cover == frozenset({5}) and out.passes == 2


def test_branching_keeps_scanning_after_k_picks():
    # a cover found early must still be checked against the rest of the stream
    out = vc_branching(insert_only(4, [(0, 1), (0, 2), (0, 3)]), 1)
    assert out.cover == frozenset({0})


def test_iterative_compression_examples():
    k = 3
    matching = [(2 * i, 2 * i + 1) for i in range(k + 1)]
    out = vc_iterative_compression(insert_only(2 * k + 2, matching), k)
    assert out.cover is None and out.passes == 1
    out = vc_iterative_compression(insert_only(3, TRIANGLE), 2)
    assert out.cover is not None and len(out.cover) <= 2
    assert vc_iterative_compression(insert_only(4, P4), 1).cover is None


def test_matching_pass_examples():
    assert greedy_maximal_matching_pass(PassCounter(insert_only(4, [])), 3) == frozenset()
    assert greedy_maximal_matching_pass(PassCounter(insert_only(4, P4)), 2) == frozenset({0, 1, 2, 3})
    k = 2
    disjoint = insert_only(6, [(0, 1), (2, 3), (4, 5)])
    assert greedy_maximal_matching_pass(PassCounter(disjoint), k) is None


def test_disjoint_pass_examples():
    star = insert_only(6, [(0, i) for i in range(1, 6)])
    out = disjoint_vc_pass(PassCounter(star), frozenset({0, 1}), frozenset({0}), 1)
    assert out.status is DisjointStatus.FOUND and out.cover == frozenset({0})
    # S = {0, 1} covers the star; Y = {} forces all other leaves into X
    out = disjoint_vc_pass(PassCounter(star), frozenset({0, 1}), frozenset(), 2)
    assert out.status is DisjointStatus.CONFLICT
    path = insert_only(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
    # S = {1, 3}, Y = {}: forced {0, 2, 4} exceeds budget 2
    out = disjoint_vc_pass(PassCounter(path), frozenset({1, 3}), frozenset(), 2)
    assert out.status is DisjointStatus.TOO_BIG
    out = disjoint_vc_pass(PassCounter(path), frozenset({1, 3}), frozenset(), 3)
    assert out.status is DisjointStatus.FOUND and out.cover == frozenset({0, 2, 4})
    with pytest.raises(ValueError):
        disjoint_vc_pass(PassCounter(path), frozenset({1}), frozenset(), 3)


def test_insert_delete_rejected():
    s = open_stream([(0, 1, "+")], 2, "insert-delete")
    with pytest.raises(ModelError):
        vc_branching(s, 1)
    with pytest.raises(ModelError):
        vc_iterative_compression(s, 1)


@given(graphs(max_n=7))
def test_both_algorithms_match_brute(g):
    n, edges = g
    opt = brute.vc(n, edges)
    s = insert_only(n, edges)
    sg = StoredGraph.from_edges(n, edges)
    for k in range(5):
        for run, pass_cap, word_cap in (
            (vc_branching, 2**k, 2 * k + 4),
            (vc_iterative_compression, 1 + k * 4**k, 7 * k + 6),
        ):
            out = run(s, k)
            assert out.decision == (opt <= k)
            if out.cover is not None:
                assert len(out.cover) <= k and is_vertex_cover(sg, out.cover)
            assert out.passes <= pass_cap
            assert out.peak_words <= word_cap


@given(graphs(min_n=2, max_n=7))
def test_decision_independent_of_order(g):
    n, edges = g
    rev = list(reversed(edges))
    for k in range(4):
        assert vc_branching(insert_only(n, edges), k).decision == vc_branching(insert_only(n, rev), k).decision
        assert (
            vc_iterative_compression(insert_only(n, edges), k).decision
            == vc_iterative_compression(insert_only(n, rev), k).decision
        )
