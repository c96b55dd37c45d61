"""Assemble higher-rank graphs from morph data and take them apart again.

A Γ-system over a base l-graph Γ puts a fiber k-graph on every base vertex,
a morph on every base edge, and an element bijection θ on every base square.
:func:`build_bundle` turns it into one (k+l)-graph Σ and runs the generic
validator on it.  Ids in Σ are ``"v/u"`` for fiber vertices, ``"v/e"`` for
fiber edges and ``"B/x"`` for base-colored edges.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping

from .errors import (GraphMismatch, InvalidGroup, NonFunctorialCocycle, NotEndomorph,
                     NotQuasimorphism, PartitionViolation, RegularityFailure)
from .kgraph import KGraph, check_graph_isomorphism, validate_rules
from .morph import KMorph, fibred_product, regularity_check, validate_morph
from .skeleton import Edge, Skeleton

Theta = Mapping[tuple[str, str], tuple[str, str]]


def t_graph(l: int) -> KGraph:
    """One vertex ``o`` with a loop ``t_i`` of every color i."""
    edges = [Edge(f"t{i}", i, "o", "o") for i in range(1, l + 1)]
    squares = {(f"t{j}", f"t{i}"): (f"t{i}", f"t{j}")
               for j in range(1, l + 1) for i in range(1, j)}
    return validate_rules(Skeleton(l, ["o"], edges), squares, name=f"T{l}")


def e_graph() -> KGraph:
    """Vertices ``L`` and ``G`` and one edge ``X`` from G to L."""
    return validate_rules(Skeleton(1, ["G", "L"], [Edge("X", 1, "G", "L")]), {}, name="E")


# -- groups ----------------------------------------------------------------

@dataclass(frozen=True)
class GroupTable:
    elements: tuple[str, ...]
    table: Mapping[tuple[str, str], str]
    identity: str

    def mul(self, a: str, b: str) -> str:
        return self.table[(a, b)]

    def inv(self, a: str) -> str:
        return next(b for b in self.elements if self.table[(a, b)] == self.identity)


def make_group(elements, table: Mapping[tuple[str, str], str]) -> GroupTable:
    """Validate a multiplication table and find its identity."""
    elements = tuple(sorted(elements))
    es = set(elements)
    for a, b in itertools.product(elements, repeat=2):
        if table.get((a, b)) not in es:
            raise InvalidGroup(f"product {a}*{b} missing or outside the group", (a, b))
    ids = [e for e in elements if all(table[(e, a)] == a == table[(a, e)] for a in elements)]
    if len(ids) != 1:
        raise InvalidGroup("no identity element")
    e = ids[0]
    for a in elements:
        if not any(table[(a, b)] == e == table[(b, a)] for b in elements):
            raise InvalidGroup(f"{a} has no inverse", a)
    for a, b, c in itertools.product(elements, repeat=3):
        if table[(table[(a, b)], c)] != table[(a, table[(b, c)])]:
            raise InvalidGroup(f"not associative at ({a}, {b}, {c})", (a, b, c))
    return GroupTable(elements, dict(sorted(table.items())), e)


def cyclic_group(n: int) -> GroupTable:
    names = [str(i) for i in range(n)]
    return make_group(names, {(str(a), str(b)): str((a + b) % n)
                              for a in range(n) for b in range(n)})


def check_cocycle(gam: KGraph, group: GroupTable, c: Mapping[str, str]) -> None:
    """Raise unless ``c(b)c(a) = c(a2)c(b2)`` on every square of Γ."""
    for e in gam.edges:
        if c.get(e.id) not in group.elements:
            raise NonFunctorialCocycle(f"edge {e.id} has no group label", e.id)
    for (b, a), (a2, b2) in gam.rules.items():
        if group.mul(c[b], c[a]) != group.mul(c[a2], c[b2]):
            raise NonFunctorialCocycle(f"labels are not functorial on square {b} {a}", (b, a))


# -- systems and bundles ---------------------------------------------------

@dataclass
class GammaSystem:
    """Generator-level Γ-system.

    ``theta[(B, A)]`` maps element pairs of ``X_B ∗ X_A`` to pairs of
    ``X_A2 ∗ X_B2`` where ``(B, A) -> (A2, B2)`` is a base square.
    """

    base: KGraph
    fibers: dict[str, KGraph]
    morphs: dict[str, KMorph]
    theta: dict[tuple[str, str], dict[tuple[str, str], tuple[str, str]]] = field(default_factory=dict)

    @property
    def fiber_rank(self) -> int:
        return next(iter(self.fibers.values())).rank


@dataclass
class BundledGraph:
    """A (k+l)-graph with a bundle map onto its base.

    ``labels`` sends Σ vertices to base vertices, fiber-colored Σ edges to
    base vertices, and base-colored Σ edges to base edges.  When the bundle
    was built from a system, ``fibers``, ``vertex_embed`` and
    ``element_embed`` record where each input id went.
    """

    graph: KGraph
    base: KGraph
    fiber_rank: int
    labels: dict[str, str]
    fibers: dict[str, KGraph] = field(default_factory=dict)
    vertex_embed: dict[str, dict[str, str]] = field(default_factory=dict)
    element_embed: dict[str, dict[str, str]] = field(default_factory=dict)


def _check_system_shape(sys: GammaSystem) -> None:
    base = sys.base
    if sorted(sys.fibers) != list(base.vertices):
        raise GraphMismatch("system needs exactly one fiber per base vertex")
    if sorted(sys.morphs) != sorted(e.id for e in base.edges):
        raise GraphMismatch("system needs exactly one morph per base edge")
    ranks = {g.rank for g in sys.fibers.values()}
    if len(ranks) != 1:
        raise GraphMismatch("fibers have different ranks")
    for e in base.edges:
        m = sys.morphs[e.id]
        if m.lam != sys.fibers[e.range] or m.gam != sys.fibers[e.source]:
            raise GraphMismatch(f"morph on {e.id} does not connect the fibers at its ends", e.id)


def build_bundle(sys: GammaSystem, name: str | None = None) -> BundledGraph:
    """Assemble Σ from a system and validate it.

    Validation errors (including cube failures) propagate with their
    witnesses expressed in Σ ids.
    """
    _check_system_shape(sys)
    base = sys.base
    k = sys.fiber_rank
    vertices, edges, rules, labels = [], [], {}, {}
    vertex_embed: dict[str, dict[str, str]] = {}
    for v in base.vertices:
        fib = sys.fibers[v]
        emb = vertex_embed[v] = {}
        for u in fib.vertices:
            emb[u] = f"{v}/{u}"
            vertices.append(emb[u])
            labels[emb[u]] = v
        for e in fib.edges:
            emb[e.id] = f"{v}/{e.id}"
            edges.append(Edge(emb[e.id], e.color, emb[e.source], emb[e.range]))
            labels[emb[e.id]] = v
        for (b, a), (a2, b2) in fib.rules.items():
            rules[(emb[b], emb[a])] = (emb[a2], emb[b2])
    element_embed: dict[str, dict[str, str]] = {}
    for B in base.edges:
        m = sys.morphs[B.id]
        emb = element_embed[B.id] = {x: f"{B.id}/{x}" for x in m.elements}
        rng, src = vertex_embed[B.range], vertex_embed[B.source]
        for x in m.elements:
            edges.append(Edge(emb[x], k + B.color, src[m.s[x]], rng[m.r[x]]))
            labels[emb[x]] = B.id
        for (x, e), (f, x2) in m.table.items():
            rules[(emb[x], src[e])] = (rng[f], emb[x2])
    for (B, A), table in sys.theta.items():
        A2, B2 = base.rules[(B, A)]
        eb, ea = element_embed[B], element_embed[A]
        ea2, eb2 = element_embed[A2], element_embed[B2]
        for (x1, x2), (x3, x4) in table.items():
            rules[(eb[x1], ea[x2])] = (ea2[x3], eb2[x4])
    sk = Skeleton(k + base.rank, vertices, edges)
    sigma = validate_rules(sk, rules, name=name)
    return BundledGraph(sigma, base, k, labels, dict(sys.fibers), vertex_embed, element_embed)


def build_linking(X: KMorph, name: str | None = None) -> BundledGraph:
    """The linking graph of X: Λ and Γ joined by X in the top color.

    Ids are ``L/...`` for Λ, ``G/...`` for Γ and ``X/x`` for elements.
    """
    sys = GammaSystem(e_graph(), {"L": X.lam, "G": X.gam}, {"X": X})
    return build_bundle(sys, name=name)


def induced_subgraph(g: KGraph, vertices, colors, name: str | None = None) -> KGraph:
    """Full subgraph on ``vertices`` using only ``colors`` (recolored 1..n).

    The vertex set must be closed under the squares it touches, which holds
    for fibers of a bundle map.
    """
    keep = set(vertices)
    cmap = {c: i + 1 for i, c in enumerate(colors)}
    edges = [Edge(e.id, cmap[e.color], e.source, e.range) for e in g.edges
             if e.color in cmap and e.range in keep and e.source in keep]
    ids = {e.id for e in edges}
    rules = {}
    for (b, a), (a2, b2) in g.rules.items():
        if b in ids and a in ids:
            if cmap[g.color(b)] > cmap[g.color(a)]:
                rules[(b, a)] = (a2, b2)
            else:
                rules[(a2, b2)] = (b, a)
    return validate_rules(Skeleton(len(colors), sorted(keep), edges), rules, name=name)


def _extract_raw(sigma: KGraph, lam_vertices) -> KMorph:
    k = sigma.rank - 1
    if k < 0:
        raise PartitionViolation("need rank at least 1")
    lam_part = set(lam_vertices)
    if not lam_part <= set(sigma.vertices):
        raise PartitionViolation("Λ part is not a set of vertices of Σ")
    for e in sigma.edges:
        if e.color == k + 1:
            if e.source in lam_part or e.range not in lam_part:
                raise PartitionViolation(f"edge {e.id} does not run from the Γ part to the Λ part", e.id)
        elif (e.source in lam_part) != (e.range in lam_part):
            raise PartitionViolation(f"edge {e.id} crosses between the parts", e.id)
    gam_part = set(sigma.vertices) - lam_part
    colors = list(range(1, k + 1))
    lam = induced_subgraph(sigma, lam_part, colors)
    gam = induced_subgraph(sigma, gam_part, colors)
    elems = [e for e in sigma.edges if e.color == k + 1]
    table = {}
    for x in elems:
        for e in gam.edges:
            if e.range == x.source:
                table[(x.id, e.id)] = sigma.rules[(x.id, e.id)]
    return KMorph(lam, gam, [x.id for x in elems], {x.id: x.range for x in elems},
                  {x.id: x.source for x in elems}, table)


def extract_morph(sigma: KGraph | BundledGraph, lam_vertices=None) -> KMorph:
    """Read the morph off a (k+1)-graph whose top-color edges run from the
    Γ part to the Λ part.

    For a bundle over E built from a system, ids are translated back to the
    input fibers and elements; otherwise the morph uses Σ ids.
    """
    if isinstance(sigma, BundledGraph):
        bundle = sigma
        if bundle.base.rank != 1 or len(bundle.base.edges) != 1:
            raise PartitionViolation("bundle base must be a single edge")
        (edge,) = bundle.base.edges
        lam_vertices = [v for v in bundle.graph.vertices if bundle.labels[v] == edge.range]
        raw = _extract_raw(bundle.graph, lam_vertices)
        if not bundle.vertex_embed:
            return validate_morph(raw)
        back_l = {w: u for u, w in bundle.vertex_embed[edge.range].items()}
        back_g = {w: u for u, w in bundle.vertex_embed[edge.source].items()}
        back_x = {w: x for x, w in bundle.element_embed[edge.id].items()}
        table = {(back_x[x], back_g[e]): (back_l[f], back_x[x2])
                 for (x, e), (f, x2) in raw.table.items()}
        X = KMorph(bundle.fibers[edge.range], bundle.fibers[edge.source],
                   [back_x[x] for x in raw.elements],
                   {back_x[x]: back_l[v] for x, v in raw.r.items()},
                   {back_x[x]: back_g[v] for x, v in raw.s.items()}, table)
        return validate_morph(X)
    if lam_vertices is None:
        raise ValueError("need the Λ vertex set for a plain graph")
    return validate_morph(_extract_raw(sigma, lam_vertices))


def endo_skew(lam: KGraph, X: KMorph, name: str | None = None) -> BundledGraph:
    """The skew graph Λ ×_X ℕ: Λ plus the elements of X as top-color edges.

    Ids are kept as they are when vertex, edge and element ids are disjoint;
    otherwise elements are prefixed with ``X/``.
    """
    if X.lam != lam or X.gam != lam:
        raise NotEndomorph("endo_skew needs an endomorph of the given graph")
    k = lam.rank
    taken = set(lam.vertices) | {e.id for e in lam.edges}
    prefix = "X/" if taken & set(X.elements) else ""
    emb = {x: prefix + x for x in X.elements}
    edges = list(lam.edges) + [Edge(emb[x], k + 1, X.s[x], X.r[x]) for x in X.elements]
    rules = dict(lam.rules)
    for (x, e), (f, x2) in X.table.items():
        rules[(emb[x], e)] = (f, emb[x2])
    sigma = validate_rules(Skeleton(k + 1, lam.vertices, edges), rules, name=name)
    labels = {v: "o" for v in lam.vertices}
    labels.update({e.id: "o" for e in lam.edges})
    labels.update({emb[x]: "t1" for x in X.elements})
    ident = {v: v for v in lam.vertices}
    ident.update({e.id: e.id for e in lam.edges})
    return BundledGraph(sigma, t_graph(1), k, labels, {"o": lam}, {"o": ident}, {"t1": emb})


def check_quasimorphism(sigma: KGraph, base: KGraph, labels: Mapping[str, str], k: int) -> None:
    """Raise NotQuasimorphism unless ``labels`` is a bundle map Σ -> base
    with fiber colors 1..k."""
    if sigma.rank != k + base.rank:
        raise NotQuasimorphism(f"rank {sigma.rank} is not {k} + {base.rank}")
    bv = set(base.vertices)
    for v in sigma.vertices:
        if labels.get(v) not in bv:
            raise NotQuasimorphism(f"vertex {v} has no base vertex label", v)
    if {labels[v] for v in sigma.vertices} != bv:
        raise NotQuasimorphism("vertex labeling is not surjective")
    bsk = base.skeleton
    for e in sigma.edges:
        lab = labels.get(e.id)
        if e.color <= k:
            if lab != labels[e.range] or lab != labels[e.source]:
                raise NotQuasimorphism(f"fiber edge {e.id} leaves its fiber", e.id)
        else:
            if lab not in bsk.edge or bsk.color(lab) != e.color - k:
                raise NotQuasimorphism(f"edge {e.id} is not labeled by a base edge of its color", e.id)
            if (labels[e.range], labels[e.source]) != (bsk.r(lab), bsk.s(lab)):
                raise NotQuasimorphism(f"edge {e.id} does not lie over {lab}", e.id)
    for (b, a), (a2, b2) in sigma.rules.items():
        cb, ca = sigma.color(b), sigma.color(a)
        if ca > k:
            if base.rules.get((labels[b], labels[a])) != (labels[a2], labels[b2]):
                raise NotQuasimorphism(f"square {b} {a} does not lie over a base square", (b, a))
        elif cb > k and labels[b] != labels[b2]:
            raise NotQuasimorphism(f"square {b} {a} changes base edge", (b, a))


def degree_labels(sigma: KGraph, base: KGraph, k: int) -> dict[str, str]:
    """The bundle map onto a one-vertex base with one edge per color (such
    as T_l): every vertex and fiber edge goes to the base vertex, and a
    color k+j edge goes to the base edge of color j."""
    if len(base.vertices) != 1 or sorted(e.color for e in base.edges) != list(range(1, base.rank + 1)):
        raise NotQuasimorphism("base needs one vertex and exactly one edge per color")
    (o,) = base.vertices
    by_color = {e.color: e.id for e in base.edges}
    labels = {v: o for v in sigma.vertices}
    labels.update({e.id: o if e.color <= k else by_color[e.color - k] for e in sigma.edges})
    return labels


def extract_system(sigma: KGraph, base: KGraph, labels: Mapping[str, str], k: int) -> GammaSystem:
    """Split a bundle Σ over ``base`` back into fibers, morphs and θ.

    Fiber colors are 1..k; color k+j edges lie over base edges of color j.
    """
    check_quasimorphism(sigma, base, labels, k)
    colors = list(range(1, k + 1))
    fibers = {v: induced_subgraph(sigma, [u for u in sigma.vertices if labels[u] == v], colors,
                                  name=f"F.{v}")
              for v in base.vertices}
    morphs = {}
    for B in base.edges:
        lam, gam = fibers[B.range], fibers[B.source]
        elems = [e for e in sigma.edges if e.color > k and labels[e.id] == B.id]
        table = {}
        for x in elems:
            for e in gam.edges:
                if e.range == x.source:
                    table[(x.id, e.id)] = sigma.rules[(x.id, e.id)]
        morphs[B.id] = validate_morph(KMorph(
            lam, gam, [x.id for x in elems], {x.id: x.range for x in elems},
            {x.id: x.source for x in elems}, table))
    theta = {}
    for (B, A) in base.rules:
        t = {}
        for x1 in morphs[B].elements:
            for x2 in morphs[A].elements:
                if morphs[B].s[x1] == morphs[A].r[x2]:
                    t[(x1, x2)] = sigma.rules[(x1, x2)]
        theta[(B, A)] = t
    return GammaSystem(base, fibers, morphs, theta)


def bundle_system(bundle: BundledGraph) -> GammaSystem:
    return extract_system(bundle.graph, bundle.base, bundle.labels, bundle.fiber_rank)


def check_system_isomorphism(s1: GammaSystem, s2: GammaSystem,
                             vertex_maps: Mapping[str, Mapping[str, str]],
                             element_maps: Mapping[str, Mapping[str, str]]) -> bool:
    """Verify explicit fiber and element maps form a system isomorphism.

    ``vertex_maps[v]`` maps vertex and edge ids of fiber ``v`` of ``s1`` to
    those of ``s2``; ``element_maps[B]`` maps elements of the morph on B.
    """
    if s1.base != s2.base:
        return False
    base = s1.base
    for v in base.vertices:
        f1, f2, m = s1.fibers[v], s2.fibers[v], vertex_maps[v]
        vm = {u: m[u] for u in f1.vertices}
        em = {e.id: m[e.id] for e in f1.edges}
        if not check_graph_isomorphism(f1, f2, vm, em):
            return False
    for B in base.edges:
        X1, X2, th = s1.morphs[B.id], s2.morphs[B.id], element_maps[B.id]
        mr, ms = vertex_maps[B.range], vertex_maps[B.source]
        if sorted(th) != list(X1.elements) or sorted(th.values()) != list(X2.elements):
            return False
        for x in X1.elements:
            if X2.r[th[x]] != mr[X1.r[x]] or X2.s[th[x]] != ms[X1.s[x]]:
                return False
        for (x, e), (f, x2) in X1.table.items():
            if X2.table.get((th[x], ms[e])) != (mr[f], th[x2]):
                return False
    for (B, A), t1 in s1.theta.items():
        A2, B2 = base.rules[(B, A)]
        t2 = s2.theta.get((B, A), {})
        if len(t1) != len(t2):
            return False
        eb, ea, ea2, eb2 = (element_maps[z] for z in (B, A, A2, B2))
        for (x1, x2), (x3, x4) in t1.items():
            if t2.get((eb[x1], ea[x2])) != (ea2[x3], eb2[x4]):
                return False
    return True


# -- group skew products and shift pairs -----------------------------------

def group_system(gam: KGraph, group: GroupTable, c: Mapping[str, str]) -> GammaSystem:
    """The system of 0-graphs induced by a group labeling of Γ."""
    check_cocycle(gam, group, c)
    fiber = KGraph(Skeleton(0, group.elements, []), {}, validated=True)
    morphs = {}
    for e in gam.edges:
        r = {g: g for g in group.elements}
        s = {g: group.mul(g, c[e.id]) for g in group.elements}
        morphs[e.id] = KMorph(fiber, fiber, group.elements, r, s, {}, validated=True)
    theta = {}
    for (B, A), (A2, B2) in gam.rules.items():
        theta[(B, A)] = {(g, group.mul(g, c[B])): (g, group.mul(g, c[A2]))
                         for g in group.elements}
    fibers = {v: fiber for v in gam.vertices}
    return GammaSystem(gam, fibers, morphs, theta)


def group_skew(gam: KGraph, group: GroupTable, c: Mapping[str, str],
               name: str | None = None) -> BundledGraph:
    """Skew product: vertices ``v/g``; edge ``e/g`` runs from
    ``s(e)/(g c(e))`` to ``r(e)/g``."""
    return build_bundle(group_system(gam, group, c), name=name)


@dataclass
class ShiftPair:
    X: KMorph
    Y: KMorph
    skew_x: BundledGraph
    skew_y: BundledGraph


def strong_shift_pair(R: KMorph, S: KMorph) -> ShiftPair:
    """For R from Γ to Λ and S from Λ to Γ, the endomorphs X = R ∗ S of Λ
    and Y = S ∗ R of Γ with both skew graphs."""
    if R.gam != S.lam or S.gam != R.lam:
        raise GraphMismatch("R and S must run in opposite directions")
    for m in (R, S):
        ok, failures = regularity_check(m)
        if not ok:
            raise RegularityFailure(f"morph is not regular: {failures[0]}", failures[0])
    X = validate_morph(fibred_product(R, S))
    Y = validate_morph(fibred_product(S, R))
    return ShiftPair(X, Y, endo_skew(R.lam, X), endo_skew(R.gam, Y))


def spielberg_system() -> GammaSystem:
    """Three 0-morphs over T3 taken from the Spielberg edge data, with θ
    chosen as the only endpoint-preserving matchings."""
    from .fixtures import SPIELBERG_EDGES, SPIELBERG_VERTICES, unique_matching_squares
    from .skeleton import make_skeleton
    sk = make_skeleton(3, SPIELBERG_VERTICES, SPIELBERG_EDGES)
    fiber = KGraph(Skeleton(0, SPIELBERG_VERTICES, []), {}, validated=True)
    morphs = {}
    for i in (1, 2, 3):
        es = [e for e in sk.edges if e.color == i]
        morphs[f"t{i}"] = KMorph(fiber, fiber, [e.id for e in es], {e.id: e.range for e in es},
                                 {e.id: e.source for e in es}, {}, validated=True)
    squares = unique_matching_squares(sk)
    theta = {}
    for (b, a), pair in squares.items():
        key = (f"t{sk.color(b)}", f"t{sk.color(a)}")
        theta.setdefault(key, {})[(b, a)] = pair
    return GammaSystem(t_graph(3), {"o": fiber}, morphs, theta)
