import numpy as np
import pytest
from hypothesis import given, strategies as st

from kmorph import fixtures as F
from kmorph.generators import random_kgraph, seeded_rng
from kmorph.skeleton import (Edge, Skeleton, adjacency_matrix, check_wellformed,
                             has_no_sources, make_skeleton)


def test_d1_is_wellformed():
    assert check_wellformed(F.d1().skeleton) == []


def test_empty_vertex_set_is_reported():
    defects = check_wellformed(Skeleton(1, [], []))
    assert [d.kind for d in defects] == ["empty"]


def test_dangling_endpoint_names_the_missing_vertex():
    sk = make_skeleton(1, ["a"], [("e", 1, "z", "a")])
    defects = check_wellformed(sk)
    assert [(d.kind, d.witness) for d in defects] == [("dangling", "z")]


def test_duplicates_and_bad_colors():
    sk = Skeleton(1, ["a", "a"], [Edge("e", 2, "a", "a"), Edge("e", 1, "a", "a")])
    kinds = {(d.kind, d.witness) for d in check_wellformed(sk)}
    assert ("duplicate", "a") in kinds
    assert ("duplicate", "e") in kinds
    assert ("color", "e") in kinds


def test_rank_zero_with_edges_is_rejected():
    sk = make_skeleton(0, ["a"], [("e", 1, "a", "a")])
    assert any(d.kind == "color" for d in check_wellformed(sk))


def test_adjacency_matrices():
    assert adjacency_matrix(F.d1().skeleton, 1).tolist() == [[2]]
    assert adjacency_matrix(F.d2().skeleton, 1).tolist() == [[0, 2], [2, 0]]


def test_adjacency_matrix_rejects_rank_zero():
    with pytest.raises(ValueError):
        adjacency_matrix(F.zero_graph(["a", "b", "c"]).skeleton, 1)


def test_has_no_sources():
    assert has_no_sources(F.d1().skeleton) == (True, None)
    sk = make_skeleton(1, ["u", "w"], [("e", 1, "u", "w")])
    assert has_no_sources(sk) == (False, ("u", 1))
    assert has_no_sources(F.zero_graph(["a"]).skeleton) == (True, None)


@given(st.integers(0, 10**6))
def test_row_and_column_sums_are_degrees(seed):
    g = random_kgraph(seeded_rng(seed), 2)
    sk = g.skeleton
    for c in range(1, sk.rank + 1):
        m = adjacency_matrix(sk, c)
        for i, v in enumerate(sk.vertices):
            assert m[i, :].sum() == len(sk.edges_into(v, c))
            assert m[:, i].sum() == len(sk.edges_out(v, c))


@given(st.integers(0, 10**6), st.integers(0, 3), st.integers(0, 3))
def test_no_sources_is_monotone_under_adding_edges(seed, i, j):
    g = random_kgraph(seeded_rng(seed), 2)
    sk = g.skeleton
    vs = sk.vertices
    extra = Edge("extra", 1 + (i % 2), vs[i % len(vs)], vs[j % len(vs)])
    bigger = Skeleton(sk.rank, vs, list(sk.edges) + [extra])
    if has_no_sources(sk)[0]:
        assert has_no_sources(bigger)[0]


def test_iteration_order_is_sorted():
    sk = make_skeleton(1, ["b", "a"], [("z", 1, "a", "b"), ("y", 1, "a", "b")])
    assert sk.vertices == ("a", "b")
    assert [e.id for e in sk.edges] == ["y", "z"]
    assert sk.edges_into("b", 1) == ("y", "z")
    assert np.array_equal(adjacency_matrix(sk, 1), np.array([[0, 0], [2, 0]]))
