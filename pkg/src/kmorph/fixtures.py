"""Small named k-graphs, morphs and coverings used by tests and the CLI.

Edge tuples are ``(id, color, source, range)``.
"""

from __future__ import annotations

from .kgraph import KGraph, validate_rules
from .morph import Covering, KMorph, validate_morph
from .skeleton import make_skeleton


def _graph(name, rank, vertices, edges, squares, validate=True) -> KGraph:
    sk = make_skeleton(rank, vertices, edges)
    if validate:
        return validate_rules(sk, squares, name=name)
    return KGraph(sk, squares, name=name)


def _squares(text: str) -> dict[tuple[str, str], tuple[str, str]]:
    """Parse ``"b a = a2 b2; ..."`` into a square table."""
    out = {}
    for item in filter(None, (t.strip() for t in text.split(";"))):
        lhs, rhs = item.split("=")
        out[tuple(lhs.split())] = tuple(rhs.split())
    return out


def d1() -> KGraph:
    """One vertex with two loops of color 1."""
    return _graph("D1", 1, ["v"], [("x", 1, "v", "v"), ("y", 1, "v", "v")], {})


def dn(n: int) -> KGraph:
    """The 1-graph D_n: x_i runs v_{i+1} -> v_i and y_i runs v_i -> v_{i+1}."""
    vs = [f"v{i}" for i in range(n)]
    edges = []
    for i in range(n):
        nxt = vs[(i + 1) % n]
        edges.append((f"x{i}", 1, nxt, vs[i]))
        edges.append((f"y{i}", 1, vs[i], nxt))
    return _graph(f"D{n}", 1, vs, edges, {})


def d2() -> KGraph:
    return dn(2)


def cycle(n: int) -> KGraph:
    """Directed n-cycle: e_i runs c_{i+1} -> c_i."""
    vs = [f"c{i}" for i in range(n)]
    edges = [(f"e{i}", 1, vs[(i + 1) % n], vs[i]) for i in range(n)]
    return _graph(f"C{n}", 1, vs, edges, {})


def cycle_cover(big: int, small: int) -> Covering:
    """Wrap C_big around C_small (``small`` must divide ``big``)."""
    g, h = cycle(big), cycle(small)
    return Covering(g, h, {f"c{i}": f"c{i % small}" for i in range(big)},
                    {f"e{i}": f"e{i % small}" for i in range(big)})


def dn_cover(big: int, small: int) -> Covering:
    """D_big -> D_small by reducing indices; D_1 uses the names v, x, y."""
    g = dn(big)
    if small == 1:
        h = d1()
        return Covering(g, h, {f"v{i}": "v" for i in range(big)},
                        {f"{c}{i}": c for i in range(big) for c in "xy"})
    h = dn(small)
    return Covering(g, h, {f"v{i}": f"v{i % small}" for i in range(big)},
                    {f"{c}{i}": f"{c}{i % small}" for i in range(big) for c in "xy"})


def cover_p() -> Covering:
    """D_2 -> D_1 with x_i -> x and y_i -> y."""
    return dn_cover(2, 1)


def cover_q_literal() -> Covering:
    """The second map D_2 -> D_1 exactly as printed; it is not a covering."""
    return Covering(d2(), d1(), {"v0": "v", "v1": "v"},
                    {"x0": "x", "y0": "y", "x1": "y", "y1": "x"})


def cover_q_prime() -> Covering:
    """A genuine covering D_2 -> D_1 that, paired with ``cover_p``, produces
    the eight D_2 skew rules of :func:`d2_skew_y`."""
    return Covering(d2(), d1(), {"v0": "v", "v1": "v"},
                    {"x0": "y", "y0": "y", "x1": "x", "y1": "x"})


SKEW1_SQUARES = "v0 x = y v1; v0 y = x v1; v1 x = x v0; v1 y = y v0"


def skew1() -> KGraph:
    """Rank-2 graph on one vertex: color 1 {x, y}, color 2 {v0, v1}."""
    edges = [("x", 1, "v", "v"), ("y", 1, "v", "v"), ("v0", 2, "v", "v"), ("v1", 2, "v", "v")]
    return _graph("SKEW1", 2, ["v"], edges, _squares(SKEW1_SQUARES))


def x_fix() -> KMorph:
    """D_1-endomorph whose skew graph is SKEW1."""
    g = d1()
    table = {(a, e): (f, b) for (a, e), (f, b) in _squares(SKEW1_SQUARES).items()}
    return validate_morph(KMorph(g, g, ["v0", "v1"], {"v0": "v", "v1": "v"},
                                 {"v0": "v", "v1": "v"}, table, name="X"))


def pxp() -> KMorph:
    """Two elements over D_1 swapped by both loops."""
    g = d1()
    table = {("u0", "x"): ("x", "u1"), ("u1", "x"): ("x", "u0"),
             ("u0", "y"): ("y", "u1"), ("u1", "y"): ("y", "u0")}
    return validate_morph(KMorph(g, g, ["u0", "u1"], {"u0": "v", "u1": "v"},
                                 {"u0": "v", "u1": "v"}, table, name="PXP"))


# a_ij: a00 loops at v1, a11 loops at v0, a10 runs v1 -> v0, a01 runs v0 -> v1.
Y_ENDPOINTS = {"a00": ("v1", "v1"), "a11": ("v0", "v0"), "a10": ("v0", "v1"), "a01": ("v1", "v0")}
Y_SQUARES = ("a00 y0 = y0 a11; a00 x1 = x1 a11; a10 y0 = x0 a01; a10 x1 = y1 a01; "
             "a11 x0 = y1 a00; a11 y1 = x0 a00; a01 x0 = x1 a10; a01 y1 = y0 a10")


def y_fix() -> KMorph:
    """D_2-endomorph with four elements a_ij (endpoints are (range, source))."""
    g = d2()
    r = {a: e[0] for a, e in Y_ENDPOINTS.items()}
    s = {a: e[1] for a, e in Y_ENDPOINTS.items()}
    return validate_morph(KMorph(g, g, list(Y_ENDPOINTS), r, s, _squares(Y_SQUARES), name="Y"))


def d2_skew_y() -> KGraph:
    """The rank-2 skew graph of D_2 by ``y_fix``, written out directly."""
    base = d2()
    edges = [(e.id, 1, e.source, e.range) for e in base.edges]
    edges += [(a, 2, s, r) for a, (r, s) in Y_ENDPOINTS.items()]
    return _graph("D2xY", 2, base.vertices, edges, _squares(Y_SQUARES))


def nlc() -> KGraph:
    """A valid 2-graph that is not locally convex."""
    return _graph("NLC", 2, ["a", "b", "c"], [("e", 1, "b", "a"), ("f", 2, "c", "a")], {})


SPIELBERG_VERTICES = ["v1", "v2", "v3", "v4", "v5", "v6a", "v6b",
                      "w1a", "w1b", "w2", "w3", "w4", "w5", "w6"]
SPIELBERG_EDGES = [
    ("f1", 1, "v1", "v3"), ("f2", 1, "v1", "v5"), ("f3", 1, "w1a", "w3"), ("f4", 1, "w1b", "w5"),
    ("f5", 1, "v2", "v6a"), ("f6", 1, "v4", "v6b"), ("f7", 1, "w2", "w6"), ("f8", 1, "w4", "w6"),
    ("g1", 2, "v1", "v2"), ("g2", 2, "v1", "v4"), ("g3", 2, "w1a", "w2"), ("g4", 2, "w1b", "w4"),
    ("g5", 2, "v3", "v6b"), ("g6", 2, "v5", "v6a"), ("g7", 2, "w3", "w6"), ("g8", 2, "w5", "w6"),
    ("h1", 3, "v1", "w1a"), ("h2", 3, "v1", "w1b"), ("h3", 3, "v2", "w2"), ("h4", 3, "v3", "w3"),
    ("h5", 3, "v4", "w4"), ("h6", 3, "v5", "w5"), ("h7", 3, "v6b", "w6"), ("h8", 3, "v6a", "w6"),
]


def unique_matching_squares(sk) -> dict[tuple[str, str], tuple[str, str]]:
    """For each two-colored word pick the only reordered word with the same
    endpoints; raise if that word is not unique."""
    squares = {}
    for b in sk.edges:
        for i in range(1, b.color):
            for a in sk.edges_into(b.source, i):
                matches = [(a2, b2) for a2 in sk.edges_into(b.range, i)
                           for b2 in sk.edges_into(sk.s(a2), b.color) if sk.s(b2) == sk.s(a)]
                if len(matches) != 1:
                    raise ValueError(f"{len(matches)} candidate squares for {b.id} {a}")
                squares[(b.id, a)] = matches[0]
    return squares


def spielberg() -> KGraph:
    """Three-colored presentation whose pairwise squares are forced by
    endpoints but which violates the cube condition.  Not validated."""
    sk = make_skeleton(3, SPIELBERG_VERTICES, SPIELBERG_EDGES)
    return KGraph(sk, unique_matching_squares(sk), name="SP")


def spielberg_pairs() -> list[KGraph]:
    """The three rank-2 color restrictions of the Spielberg data, validated."""
    from .kgraph import restrict_colors, validate_graph
    sp = spielberg()
    return [validate_graph(restrict_colors(sp, c)) for c in ((1, 2), (1, 3), (2, 3))]


def t_graph(l: int) -> KGraph:
    """One vertex with one loop per color, all squares trivial."""
    edges = [(f"t{i}", i, "o", "o") for i in range(1, l + 1)]
    squares = {(f"t{j}", f"t{i}"): (f"t{i}", f"t{j}")
               for j in range(1, l + 1) for i in range(1, j)}
    return _graph(f"T{l}", l, ["o"], edges, squares)


def e_graph() -> KGraph:
    """Two vertices L and G joined by one edge X from G to L."""
    return _graph("E", 1, ["G", "L"], [("X", 1, "G", "L")], {})


def zero_graph(vertices) -> KGraph:
    return _graph(None, 0, list(vertices), [], {})


def single_vertex_skeleton(n1: int, n2: int):
    """Rank-2 skeleton on one vertex with n1 color-1 and n2 color-2 loops."""
    edges = [(f"a{i}", 1, "v", "v") for i in range(1, n1 + 1)]
    edges += [(f"b{i}", 2, "v", "v") for i in range(1, n2 + 1)]
    return make_skeleton(2, ["v"], edges)


def all_fixture_graphs() -> dict[str, KGraph]:
    """Every validated fixture graph by name (Spielberg pairs included)."""
    out = {"D1": d1(), "D2": d2(), "SKEW1": skew1(), "D2xY": d2_skew_y(), "NLC": nlc()}
    for g, tag in zip(spielberg_pairs(), ("fg", "fh", "gh")):
        out[f"SP-{tag}"] = g
    return out
