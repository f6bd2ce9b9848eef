import random

from hypothesis import given, strategies as st

from paramstream.corpus import (
    edges_of_mask,
    insert_delete_stream,
    isomorphism_class_masks,
    labeled_graphs,
    parallel_map,
    random_graphs,
    vertex_pairs,
)
from paramstream.stream import Model, Op


def test_isomorphism_class_counts():
    # numbers of unlabeled graphs on 1..6 vertices
    assert [len(isomorphism_class_masks(n)) for n in range(1, 7)] == [1, 2, 4, 11, 34, 156]


def test_labeled_graph_count():
    assert sum(1 for _ in labeled_graphs(4)) == 64
    assert edges_of_mask(3, 0b101) == [(0, 1), (1, 2)]


@given(st.integers(0, 2**20), st.integers(2, 8))
def test_insert_delete_stream_net_graph(seed, n):
    rng = random.Random(seed)
    edges = [e for e in vertex_pairs(n) if rng.random() < 0.5]
    s = insert_delete_stream(n, edges, rng)
    assert s.model is Model.INSERT_DELETE
    assert s.net_edges() == set(edges)
    if len(edges) < len(vertex_pairs(n)) and any(op is Op.DELETE for _, _, op in s.updates):
        assert len(s) > len(edges)


def test_random_graphs_reproducible():
    assert random_graphs(20, 12, 3) == random_graphs(20, 12, 3)
    assert all(1 <= n <= 12 for n, _ in random_graphs(50, 12, 4))


def _square(x):
    return x * x


def test_parallel_map_matches_map():
    assert parallel_map(_square, range(10), workers=1) == [x * x for x in range(10)]
    assert parallel_map(_square, range(10), workers=2) == [x * x for x in range(10)]
