import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from kmorph import fixtures as F
from kmorph.errors import (CubeFailure, DegreeOutOfRange, MalformedSquare, MissingSquare,
                           NonBijectiveSquare, NotComposable)
from kmorph.generators import random_kgraph, seeded_rng
from kmorph.kgraph import (boundary_paths, check_graph_isomorphism, compose, factorize,
                           find_isomorphism, is_locally_convex, paths_of_degree, relabel,
                           restrict_colors, validate_graph, validate_rules)
from kmorph.oracle import candidate_tables, enumerate_rule_sets, naive_category
from kmorph.skeleton import adjacency_matrix, make_skeleton

VALID = F.all_fixture_graphs()


def all_paths_up_to(g, bound):
    for n in itertools.product(*(range(b + 1) for b in bound)):
        yield from paths_of_degree(g, n)


# -- validation --------------------------------------------------------------

def test_skew1_validates():
    g = F.skew1()
    assert g.validated and g.rank == 2 and len(g.rules) == 4


def test_spielberg_cube_failure():
    with pytest.raises(CubeFailure) as info:
        validate_graph(F.spielberg())
    exc = info.value
    assert exc.witness == ("h8", "g6", "f2")
    assert exc.chain_a == [("h8", "g6", "f2"), ("h8", "f5", "g1"),
                           ("f7", "h3", "g1"), ("f7", "g3", "h1")]
    assert exc.chain_b == [("h8", "g6", "f2"), ("g8", "h6", "f2"),
                           ("g8", "f4", "h2"), ("f8", "g4", "h2")]
    assert exc.failures == [("h7", "g5", "f1"), ("h8", "g6", "f2")]


def test_one_graphs_are_always_valid():
    sk = make_skeleton(1, ["a", "b"], [("e", 1, "a", "b"), ("f", 1, "b", "b")])
    assert validate_rules(sk, {}).validated


def test_missing_square():
    sk = F.skew1().skeleton
    rules = dict(F.skew1().rules)
    del rules[("v1", "y")]
    with pytest.raises(MissingSquare) as info:
        validate_rules(sk, rules)
    assert info.value.witness == ("v1", "y")


def test_non_bijective_square():
    sk = F.skew1().skeleton
    rules = dict(F.skew1().rules)
    rules[("v1", "y")] = ("x", "v0")
    with pytest.raises(NonBijectiveSquare) as info:
        validate_rules(sk, rules)
    assert info.value.witness == ("x", "v0")


def test_malformed_squares():
    sk = F.skew1().skeleton
    with pytest.raises(MalformedSquare):
        validate_rules(sk, {("x", "v0"): ("v1", "y")})
    nlc = F.nlc().skeleton
    with pytest.raises(MalformedSquare):
        validate_rules(nlc, {("f", "e"): ("e", "f")})


def test_rank_three_product_is_valid():
    g = F.t_graph(3)
    assert g.validated


@pytest.mark.parametrize("counts", [(1, 2, 2), (2, 1, 2), (2, 2, 1)])
def test_cube_verdict_matches_oracle_on_every_candidate(counts):
    # every endpoint-preserving table on a one-vertex rank-3 skeleton
    edges = [(f"{'abc'[c]}{i}", c + 1, "v", "v") for c in range(3) for i in range(counts[c])]
    sk = make_skeleton(3, ["v"], edges)
    tables = list(candidate_tables(sk))
    assert tables, "expected candidate tables"
    verdicts = set()
    for rules in tables:
        try:
            validate_rules(sk, rules)
            ok = True
        except CubeFailure:
            ok = False
        cat = naive_category(sk, rules, 3)
        assert cat.unique_factorization == ok
        assert cat.confluent == ok
        verdicts.add(ok)
    assert verdicts == {True, False}


# -- path algebra ------------------------------------------------------------

def test_compose_examples():
    g = F.skew1()
    p = compose(g, g.path("v0"), g.path("x"))
    assert p.edges == ("y", "v1") and p.degree == (1, 1)
    d1 = F.d1()
    assert compose(d1, d1.vertex_path("v"), d1.path("x")).edges == ("x",)
    assert compose(d1, d1.path("x"), d1.path("y")).edges == ("x", "y")


def test_compose_not_composable():
    g = F.d2()
    with pytest.raises(NotComposable):
        compose(g, g.path("x0"), g.path("x0"))


def test_factorize_examples():
    g = F.skew1()
    mu, nu = factorize(g, g.path(["y", "v1"]), (0, 1))
    assert (mu.edges, nu.edges) == (("v0",), ("x",))
    p = g.path(["y", "v1"])
    mu, nu = factorize(g, p, p.degree)
    assert mu == p and nu.is_vertex and nu.range == p.source
    d1 = F.d1()
    mu, nu = factorize(d1, d1.path(["x", "y"]), (1,))
    assert (mu.edges, nu.edges) == (("x",), ("y",))


def test_factorize_degree_out_of_range():
    g = F.skew1()
    with pytest.raises(DegreeOutOfRange):
        factorize(g, g.path("x"), (0, 1))


def test_paths_of_degree_examples():
    assert len(paths_of_degree(F.d1(), (3,))) == 8
    assert len(paths_of_degree(F.skew1(), (1, 1))) == 4
    assert len(paths_of_degree(F.d2(), (2,), range="v0")) == 4


def test_paths_are_in_normal_form_and_deterministic():
    g = F.d2_skew_y()
    ps = paths_of_degree(g, (2, 1))
    assert ps == paths_of_degree(g, (2, 1))
    for p in ps:
        colors = [g.color(e) for e in p.edges]
        assert colors == sorted(colors)


def test_boundary_paths():
    g = validate_rules(make_skeleton(1, ["u", "w"], [("e", 1, "u", "w")]), {})
    assert [p.edges for p in boundary_paths(g, "w", (1,))] == [("e",)]
    assert [str(p) for p in boundary_paths(g, "u", (1,))] == ["u"]
    d1 = F.d1()
    assert boundary_paths(d1, "v", (2,)) == paths_of_degree(d1, (2,), range="v")
    z = F.zero_graph(["a"])
    assert [str(p) for p in boundary_paths(z, "a", ())] == ["a"]


def test_local_convexity():
    assert is_locally_convex(F.skew1()) == (True, None)
    assert is_locally_convex(F.nlc()) == (False, ("e", "f"))
    assert is_locally_convex(F.d2())[0]


def test_restrict_colors():
    g = F.skew1()
    d1 = restrict_colors(g, [1])
    assert d1.skeleton == F.d1().skeleton and d1.rules == {}
    assert restrict_colors(g, [1, 2]) == g
    empty = restrict_colors(g, [])
    assert empty.rank == 0 and empty.vertices == g.vertices and not empty.edges


def test_restrict_colors_reversed_order_flips_squares():
    g = F.skew1()
    flipped = validate_graph(restrict_colors(g, [2, 1]))
    assert flipped.color("v0") == 1
    assert flipped.rules[("y", "v1")] == ("v0", "x")


# -- isomorphism -------------------------------------------------------------

def test_relabeled_copy_is_isomorphic():
    g = F.d2_skew_y()
    vmap = {v: "n" + v for v in g.vertices}
    emap = {e.id: "E" + e.id for e in g.edges}
    h = relabel(g, vmap, emap)
    iso = find_isomorphism(g, h)
    assert iso is not None
    assert check_graph_isomorphism(g, h, iso.vmap, iso.emap)


def test_different_vertex_counts_are_not_isomorphic():
    assert find_isomorphism(F.d1(), F.d2()) is None


def test_non_isomorphic_single_vertex_graphs():
    graphs = enumerate_rule_sets(F.single_vertex_skeleton(2, 2))
    trivial = graphs[0]
    twisted = next(g for g in graphs if find_isomorphism(trivial, g) is None)
    assert find_isomorphism(trivial, twisted) is None
    assert find_isomorphism(twisted, trivial) is None


def test_skew1_is_isomorphic_to_itself_by_identity():
    iso = find_isomorphism(F.skew1(), F.skew1())
    assert all(k == v for k, v in iso.vmap.items())
    assert all(k == v for k, v in iso.emap.items())


@given(st.integers(0, 10**6))
def test_random_relabeling_is_found(seed):
    rng = seeded_rng(seed)
    g = random_kgraph(rng, rng.choice([1, 2]))
    h = relabel(g, {v: f"w{v}" for v in g.vertices}, {e.id: f"z{e.id}" for e in g.edges})
    iso = find_isomorphism(g, h)
    assert iso is not None and check_graph_isomorphism(g, h, iso.vmap, iso.emap)
    back = find_isomorphism(h, g)
    assert back is not None


# -- invariants over fixtures ------------------------------------------------

@pytest.mark.parametrize("name", sorted(VALID))
def test_factorize_compose_round_trip(name):
    g = VALID[name]
    for p in all_paths_up_to(g, (2,) * g.rank):
        for m in itertools.product(*(range(d + 1) for d in p.degree)):
            mu, nu = factorize(g, p, m)
            assert mu.degree == m
            assert compose(g, mu, nu) == p
            assert factorize(g, compose(g, mu, nu), mu.degree) == (mu, nu)


@pytest.mark.parametrize("name", sorted(VALID))
def test_compose_is_associative(name):
    g = VALID[name]
    ps = list(all_paths_up_to(g, (1,) * g.rank))
    for a, b, c in itertools.product(ps, repeat=3):
        if a.source == b.range and b.source == c.range:
            assert compose(g, compose(g, a, b), c) == compose(g, a, compose(g, b, c))


@pytest.mark.parametrize("name", sorted(VALID))
def test_adjacency_matrices_commute(name):
    g = VALID[name]
    ms = [adjacency_matrix(g.skeleton, c) for c in range(1, g.rank + 1)]
    for a, b in itertools.combinations(ms, 2):
        assert np.array_equal(a @ b, b @ a)


@given(st.integers(0, 10**6))
def test_random_graph_invariants(seed):
    g = random_kgraph(seeded_rng(seed), 2)
    ms = [adjacency_matrix(g.skeleton, c) for c in (1, 2)]
    assert np.array_equal(ms[0] @ ms[1], ms[1] @ ms[0])
    for p in all_paths_up_to(g, (1, 2)):
        for m in itertools.product(*(range(d + 1) for d in p.degree)):
            mu, nu = factorize(g, p, m)
            assert compose(g, mu, nu) == p
