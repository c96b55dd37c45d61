"""k-morphs between k-graphs, coverings, and the morphs they induce.

A morph ``X`` from Γ to Λ is a set of elements with ``r: X -> Λ⁰`` and
``s: X -> Γ⁰``.  The transport table sends ``(x, e)``, for a Γ-edge ``e``
with ``r(e) = s(x)``, to ``(f, x2)`` where ``f`` is a Λ-edge of the same
color, ``r(f) = r(x)``, ``s(f) = r(x2)`` and ``s(x2) = s(e)``.  Think of it
as the square ``x e = f x2``.  Transport along longer paths folds the table
edge by edge.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (EndpointMismatch, GraphMismatch, InvalidCovering, MixedCubeFailure,
                     NoLift, NonBijectiveTransport, NonFunctorialCocycle, NotComposable,
                     NotEndomorph, RegularityFailure, ValidationError)
from .kgraph import GraphIso, KGraph, Path, check_graph_isomorphism
from .skeleton import has_no_sources

Table = Mapping[tuple[str, str], tuple[str, str]]


class KMorph:
    """Morph data.  Use :func:`validate_morph` to check it."""

    def __init__(self, lam: KGraph, gam: KGraph, elements: Iterable[str],
                 r: Mapping[str, str], s: Mapping[str, str], table: Table,
                 name: str | None = None, validated: bool = False):
        self.lam = lam
        self.gam = gam
        self.elements: tuple[str, ...] = tuple(sorted(elements))
        self.r = dict(sorted(r.items()))
        self.s = dict(sorted(s.items()))
        self.table = dict(sorted(table.items()))
        self.inverse_table = {v: k for k, v in self.table.items()}
        self.name = name
        self.validated = validated

    @property
    def rank(self) -> int:
        return self.lam.rank

    @property
    def is_endomorph(self) -> bool:
        return self.lam == self.gam

    def fiber(self, v: str, w: str) -> list[str]:
        """Elements with range ``v`` and source ``w``."""
        return [x for x in self.elements if self.r[x] == v and self.s[x] == w]

    def _key(self):
        return (self.lam, self.gam, self.elements, tuple(self.r.items()),
                tuple(self.s.items()), tuple(self.table.items()))

    def __eq__(self, other):
        return isinstance(other, KMorph) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        label = f"{self.name} " if self.name else ""
        return f"KMorph({label}|X|={len(self.elements)}, rank={self.rank})"


def _mixed_routes(X: KMorph, x: str, b: str, a: str):
    lam, gam, t = X.lam, X.gam, X.table
    a1, b1 = gam.swap(b, a)
    fa, x1 = t[(x, a1)]
    fb, x2 = t[(x1, b1)]
    route1 = (fa, fb, x2)
    gb, y1 = t[(x, b)]
    ga, y2 = t[(y1, a)]
    ga1, gb1 = lam.swap(gb, ga)
    route2 = (ga1, gb1, y2)
    return route1, route2


def validate_morph(X: KMorph) -> KMorph:
    """Check endpoints, per-color bijectivity and the mixed cube condition.

    Returns a validated copy.  Witnesses are least in sorted-id order.
    """
    lam, gam = X.lam, X.gam
    if lam.rank != gam.rank:
        raise GraphMismatch(f"ranks differ: {lam.rank} vs {gam.rank}")
    dup = sorted(x for x, n in Counter(X.elements).items() if n > 1)
    if dup:
        raise ValidationError(f"element {dup[0]} declared twice", dup[0])
    elements = set(X.elements)
    for x in X.elements:
        if x not in X.r or not lam.skeleton.has_vertex(X.r[x]):
            raise EndpointMismatch(f"element {x} has no valid range in Λ", x)
        if x not in X.s or not gam.skeleton.has_vertex(X.s[x]):
            raise EndpointMismatch(f"element {x} has no valid source in Γ", x)
    for key in X.table:
        x, e = key
        if x not in elements or e not in gam.skeleton.edge or gam.r(e) != X.s[x]:
            raise EndpointMismatch(f"transport entry ({x}, {e}) is not composable", key)
    for x in X.elements:
        for e in gam.edges:
            if e.range == X.s[x] and (x, e.id) not in X.table:
                raise NonBijectiveTransport(f"no transport for ({x}, {e.id})", (x, e.id))
    for (x, e), (f, x2) in X.table.items():
        ok = (f in lam.skeleton.edge and x2 in elements and lam.color(f) == gam.color(e)
              and lam.r(f) == X.r[x] and lam.s(f) == X.r[x2] and X.s[x2] == gam.s(e))
        if not ok:
            raise EndpointMismatch(f"transport ({x}, {e}) -> ({f}, {x2}) breaks endpoints", (x, e))
    counts = Counter(X.table.values())
    dup = sorted(v for v, n in counts.items() if n > 1)
    if dup:
        raise NonBijectiveTransport(f"output ({dup[0][0]}, {dup[0][1]}) is hit twice", dup[0])
    for f in lam.edges:
        for x2 in X.elements:
            if X.r[x2] == f.source and (f.id, x2) not in counts:
                raise NonBijectiveTransport(f"output ({f.id}, {x2}) is never hit", (f.id, x2))
    sk = gam.skeleton
    for x in X.elements:
        for b in sorted(e.id for e in gam.edges if e.range == X.s[x]):
            for i in range(1, sk.color(b)):
                for a in sk.edges_into(sk.s(b), i):
                    route1, route2 = _mixed_routes(X, x, b, a)
                    if route1 != route2:
                        raise MixedCubeFailure(
                            f"mixed cube fails at ({x}, {b} {a}): {route1} != {route2}",
                            (x, b, a))
    return KMorph(lam, gam, X.elements, X.r, X.s, X.table, name=X.name, validated=True)


def is_valid_morph(X: KMorph) -> bool:
    try:
        validate_morph(X)
    except ValidationError:
        return False
    return True


def transport(X: KMorph, x: str, gamma: Path) -> tuple[Path, str]:
    """Fold the table along ``gamma`` starting at ``x``."""
    if X.s[x] != gamma.range:
        raise NotComposable(f"s({x}) = {X.s[x]} but r(γ) = {gamma.range}", (x, gamma.range))
    cur = x
    fs = []
    for e in gamma.edges:
        f, cur = X.table[(cur, e)]
        fs.append(f)
    return Path(X.r[x], X.r[cur], tuple(fs), gamma.degree), cur


def transport_inverse(X: KMorph, lam_path: Path, x: str) -> tuple[str, Path]:
    """The unique ``(x2, gamma)`` with ``transport(X, x2, gamma) == (lam_path, x)``."""
    if X.r[x] != lam_path.source:
        raise NotComposable(f"r({x}) = {X.r[x]} but s(λ) = {lam_path.source}",
                            (x, lam_path.source))
    cur = x
    es = []
    for f in reversed(lam_path.edges):
        cur, e = X.inverse_table[(f, cur)]
        es.append(e)
    es.reverse()
    return cur, Path(X.s[cur], X.s[x], tuple(es), lam_path.degree)


# -- basic constructions ---------------------------------------------------

def morph_from_iso(alpha: GraphIso, name: str | None = None) -> KMorph:
    """The morph X(α) for an isomorphism α: Γ -> Λ, with X = Γ⁰."""
    gam, lam = alpha.source, alpha.target
    table = {(e.range, e.id): (alpha.emap[e.id], e.source) for e in gam.edges}
    return KMorph(lam, gam, gam.vertices, alpha.vmap, {v: v for v in gam.vertices},
                  table, name=name, validated=True)


def identity_morph(g: KGraph) -> KMorph:
    ident = GraphIso(g, g, {v: v for v in g.vertices}, {e.id: e.id for e in g.edges})
    return morph_from_iso(ident, name="I")


def empty_morph(lam: KGraph, gam: KGraph) -> KMorph:
    return KMorph(lam, gam, (), {}, {}, {}, validated=True)


def product_id(parts: Sequence[str]) -> str:
    return "(" + ",".join(parts) + ")"


def fibred_product(*morphs: KMorph) -> KMorph:
    """The fibred product X1 ∗ X2 ∗ ... ∗ Xn over the shared vertex sets.

    Elements are chains ``(x1, ..., xn)`` with ``s(x_i) = r(x_{i+1})``,
    named ``"(x1,...,xn)"``.
    """
    if not morphs:
        raise ValueError("need at least one morph")
    for m1, m2 in zip(morphs, morphs[1:]):
        if m1.gam != m2.lam:
            raise GraphMismatch("source graph of one factor differs from range graph of the next")
    if len(morphs) == 1:
        return morphs[0]
    chains: list[tuple[str, ...]] = [(x,) for x in morphs[0].elements]
    for m_prev, m in zip(morphs, morphs[1:]):
        by_range: dict[str, list[str]] = {}
        for y in m.elements:
            by_range.setdefault(m.r[y], []).append(y)
        chains = [c + (y,) for c in chains for y in by_range.get(m_prev.s[c[-1]], ())]
    first, last = morphs[0], morphs[-1]
    names = {c: product_id(c) for c in chains}
    r = {names[c]: first.r[c[0]] for c in chains}
    s = {names[c]: last.s[c[-1]] for c in chains}
    table = {}
    for c in chains:
        for e in last.gam.edges:
            if e.range != last.s[c[-1]]:
                continue
            edge = e.id
            new = list(c)
            for i in range(len(morphs) - 1, -1, -1):
                edge, new[i] = morphs[i].table[(c[i], edge)]
            table[(names[c], e.id)] = (edge, names[tuple(new)])
    return KMorph(first.lam, last.gam, names.values(), r, s, table,
                  validated=all(m.validated for m in morphs))


def power(X: KMorph, n: int) -> KMorph:
    if not X.is_endomorph:
        raise NotEndomorph("power needs an endomorph")
    if n < 0:
        raise ValueError("negative power")
    if n == 0:
        return identity_morph(X.lam)
    return fibred_product(*([X] * n))


def disjoint_union(X1: KMorph, X2: KMorph) -> KMorph:
    """Union of two morphs over the same graphs.

    Element ids are kept unless they clash, in which case every element is
    prefixed with ``1.`` or ``2.``.
    """
    if X1.lam != X2.lam or X1.gam != X2.gam:
        raise GraphMismatch("disjoint union needs the same Λ and Γ")
    clash = set(X1.elements) & set(X2.elements)
    p1, p2 = ("1.", "2.") if clash else ("", "")
    r, s, table = {}, {}, {}
    for m, p in ((X1, p1), (X2, p2)):
        for x in m.elements:
            r[p + x] = m.r[x]
            s[p + x] = m.s[x]
        for (x, e), (f, x2) in m.table.items():
            table[(p + x, e)] = (f, p + x2)
    return KMorph(X1.lam, X1.gam, r.keys(), r, s, table,
                  validated=X1.validated and X2.validated)


# -- isomorphism -----------------------------------------------------------

@dataclass(frozen=True)
class MorphIso:
    source: KMorph
    target: KMorph
    map: Mapping[str, str]


def check_morph_isomorphism(X: KMorph, Y: KMorph, theta: Mapping[str, str]) -> bool:
    """Verify that ``theta`` is a bijection X -> Y respecting r, s and φ."""
    if X.lam != Y.lam or X.gam != Y.gam:
        return False
    if sorted(theta) != list(X.elements) or sorted(theta.values()) != list(Y.elements):
        return False
    for x in X.elements:
        y = theta[x]
        if X.r[x] != Y.r[y] or X.s[x] != Y.s[y]:
            return False
    for (x, e), (f, x2) in X.table.items():
        if Y.table.get((theta[x], e)) != (f, theta[x2]):
            return False
    return True


def find_morph_isomorphism(X: KMorph, Y: KMorph) -> MorphIso | None:
    """Search for an isomorphism X -> Y over the same Λ and Γ.

    Candidates are restricted to the matching (r, s) fiber, and every choice
    is propagated through the transport tables before branching again.
    """
    if X.lam != Y.lam or X.gam != Y.gam:
        raise GraphMismatch("morph isomorphism needs the same Λ and Γ")
    if len(X.elements) != len(Y.elements):
        return None
    fibers_x = Counter((X.r[x], X.s[x]) for x in X.elements)
    fibers_y: dict[tuple[str, str], list[str]] = {}
    for y in Y.elements:
        fibers_y.setdefault((Y.r[y], Y.s[y]), []).append(y)
    if fibers_x != Counter({k: len(v) for k, v in fibers_y.items()}):
        return None
    out_x: dict[str, list[tuple[str, str, str]]] = {x: [] for x in X.elements}
    for (x, e), (f, x2) in X.table.items():
        out_x[x].append((e, f, x2))

    def propagate(theta, used, x, y):
        stack = [(x, y)]
        while stack:
            x, y = stack.pop()
            if x in theta:
                if theta[x] != y:
                    return False
                continue
            if y in used or (X.r[x], X.s[x]) != (Y.r[y], Y.s[y]):
                return False
            theta[x] = y
            used.add(y)
            for e, f, x2 in out_x[x]:
                target = Y.table.get((y, e))
                if target is None or target[0] != f:
                    return False
                stack.append((x2, target[1]))
        return True

    def search(theta, used):
        free = [x for x in X.elements if x not in theta]
        if not free:
            return theta
        x = free[0]
        for y in fibers_y[(X.r[x], X.s[x])]:
            if y in used:
                continue
            t2, u2 = dict(theta), set(used)
            if propagate(t2, u2, x, y):
                found = search(t2, u2)
                if found is not None:
                    return found
        return None

    theta = search({}, set())
    if theta is None:
        return None
    return MorphIso(X, Y, dict(sorted(theta.items())))


def is_invertible(X: KMorph) -> GraphIso | None:
    """Return α: Γ -> Λ with X ≅ X(α) when r and s are bijections."""
    lam, gam = X.lam, X.gam
    if sorted(X.r.values()) != list(lam.vertices) or sorted(X.s.values()) != list(gam.vertices):
        return None
    by_source = {X.s[x]: x for x in X.elements}
    vmap = {w: X.r[by_source[w]] for w in gam.vertices}
    emap = {e.id: X.table[(by_source[e.range], e.id)][0] for e in gam.edges}
    if not check_graph_isomorphism(gam, lam, vmap, emap):
        return None
    alpha = GraphIso(gam, lam, vmap, emap)
    theta = {x: X.s[x] for x in X.elements}
    if not check_morph_isomorphism(X, morph_from_iso(alpha), theta):
        return None
    return alpha


# -- coverings -------------------------------------------------------------

@dataclass(frozen=True)
class Covering:
    """A candidate covering map ``source -> target``."""

    source: KGraph
    target: KGraph
    vmap: Mapping[str, str]
    emap: Mapping[str, str]
    name: str | None = field(default=None, compare=False)

    def apply(self, p: Path) -> Path:
        return Path(self.vmap[p.range], self.vmap[p.source],
                    tuple(self.emap[e] for e in p.edges), p.degree)


def identity_covering(g: KGraph) -> Covering:
    return Covering(g, g, {v: v for v in g.vertices}, {e.id: e.id for e in g.edges})


def compose_coverings(p: Covering, q: Covering) -> Covering:
    """The covering ``p ∘ q`` (apply ``q`` first)."""
    if q.target != p.source:
        raise GraphMismatch("coverings are not composable")
    return Covering(q.source, p.target,
                    {v: p.vmap[w] for v, w in q.vmap.items()},
                    {e: p.emap[f] for e, f in q.emap.items()})


def check_functorial(p: Covering) -> tuple[bool, object]:
    gam, lam = p.source, p.target
    if gam.rank != lam.rank:
        return False, ("rank", gam.rank, lam.rank)
    for v in gam.vertices:
        if v not in p.vmap or not lam.skeleton.has_vertex(p.vmap[v]):
            return False, ("vertex", v)
    for e in gam.edges:
        f = p.emap.get(e.id)
        if f not in lam.skeleton.edge:
            return False, ("edge", e.id)
        fe = lam.skeleton.edge[f]
        if (fe.color, fe.range, fe.source) != (e.color, p.vmap[e.range], p.vmap[e.source]):
            return False, ("edge", e.id)
    for (b, a), (a2, b2) in gam.rules.items():
        if lam.rules.get((p.emap[b], p.emap[a])) != (p.emap[a2], p.emap[b2]):
            return False, ("square", (b, a))
    return True, None


def validate_covering(p: Covering) -> tuple[bool, object]:
    """Check that ``p`` is a covering.

    The witness for a fiber failure is ``(side, vertex, color, edges, images)``.
    """
    ok, witness = check_functorial(p)
    if not ok:
        return False, witness
    gam, lam = p.source, p.target
    for v in gam.vertices:
        w = p.vmap[v]
        for c in range(1, gam.rank + 1):
            for side, mine, theirs in (
                    ("range", gam.skeleton.edges_into(v, c), lam.skeleton.edges_into(w, c)),
                    ("source", gam.skeleton.edges_out(v, c), lam.skeleton.edges_out(w, c))):
                images = tuple(p.emap[e] for e in mine)
                if sorted(images) != sorted(theirs):
                    return False, (side, v, c, mine, images)
    if set(p.vmap.values()) != set(lam.vertices):
        missing = sorted(set(lam.vertices) - set(p.vmap.values()))
        return False, ("vertex-surjectivity", missing[0])
    if set(p.emap.values()) != {e.id for e in lam.edges}:
        missing = sorted({e.id for e in lam.edges} - set(p.emap.values()))
        return False, ("edge-surjectivity", missing[0])
    return True, None


def _require_covering(p: Covering) -> None:
    ok, witness = validate_covering(p)
    if not ok:
        raise InvalidCovering(f"not a covering: {witness}", witness)


def lift_path(p: Covering, lam_path: Path, anchor: str, side: str = "source") -> Path:
    """The unique lift of ``lam_path`` whose ``side`` endpoint is ``anchor``."""
    gam = p.source
    sk = gam.skeleton
    if anchor not in p.vmap:
        raise NoLift(f"{anchor} is not a vertex of the covering graph", anchor)
    if side == "range":
        if p.vmap[anchor] != lam_path.range:
            raise NoLift(f"{anchor} does not lie over r(λ)", anchor)
        cur = anchor
        word = []
        for f in lam_path.edges:
            found = [e for e in sk.edges_into(cur, p.target.color(f)) if p.emap[e] == f]
            if len(found) != 1:
                raise NoLift(f"{len(found)} lifts of {f} at range {cur}", (f, cur))
            word.append(found[0])
            cur = sk.s(found[0])
        return Path(anchor, cur, tuple(word), lam_path.degree)
    if side == "source":
        if p.vmap[anchor] != lam_path.source:
            raise NoLift(f"{anchor} does not lie over s(λ)", anchor)
        cur = anchor
        word = []
        for f in reversed(lam_path.edges):
            found = [e for e in sk.edges_out(cur, p.target.color(f)) if p.emap[e] == f]
            if len(found) != 1:
                raise NoLift(f"{len(found)} lifts of {f} at source {cur}", (f, cur))
            word.append(found[0])
            cur = sk.r(found[0])
        word.reverse()
        return Path(cur, anchor, tuple(word), lam_path.degree)
    raise ValueError(f"side must be 'source' or 'range', not {side!r}")


def _compose_perm(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    """``a ∘ b`` for permutations of 1..m given as image tuples."""
    return tuple(a[b[i] - 1] for i in range(len(b)))


def _invert_perm(a: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(a)
    for i, ai in enumerate(a, start=1):
        inv[ai - 1] = i
    return tuple(inv)


def covering_morph(p: Covering | None = None, q: Covering | None = None,
                   cocycle: Mapping[str, Sequence[int]] | None = None,
                   name: str | None = None) -> KMorph:
    """The morph ``ₚX_q`` of two coverings of the same Γ, with X = Γ⁰.

    ``r = p`` and ``s = q``; either covering may be omitted and then stands
    for the identity.  With a cocycle ``c`` (Γ-edge -> permutation of 1..m,
    as a tuple of images) the elements are ``"v#i"`` and transports twist
    the sheet index by ``c(γ)⁻¹``.
    """
    if p is None and q is None:
        raise ValueError("need at least one covering")
    gam = p.source if p is not None else q.source
    p = p if p is not None else identity_covering(gam)
    q = q if q is not None else identity_covering(gam)
    if p.source != q.source:
        raise GraphMismatch("coverings do not share a source graph")
    _require_covering(p)
    _require_covering(q)
    lam1, lam2 = p.target, q.target
    sk = gam.skeleton
    if cocycle is None:
        sheets, label = [None], (lambda v, i: v)
        perm = {e.id: (1,) for e in gam.edges}
    else:
        perm = {e: tuple(c) for e, c in cocycle.items()}
        m = len(next(iter(perm.values()))) if perm else 1
        if set(perm) != {e.id for e in gam.edges} or any(
                sorted(c) != list(range(1, m + 1)) for c in perm.values()):
            raise NonFunctorialCocycle("cocycle must give a permutation of 1..m for every edge")
        for (b, a), (a2, b2) in gam.rules.items():
            if _compose_perm(perm[b], perm[a]) != _compose_perm(perm[a2], perm[b2]):
                raise NonFunctorialCocycle(f"cocycle is not functorial on square {b} {a}", (b, a))
        sheets, label = list(range(1, m + 1)), (lambda v, i: f"{v}#{i}")
    inv = {e: _invert_perm(c) for e, c in perm.items()}
    r, s, table = {}, {}, {}
    for v in gam.vertices:
        for i in sheets:
            x = label(v, i)
            r[x] = p.vmap[v]
            s[x] = q.vmap[v]
            for e in lam2.skeleton.edges:
                if e.range != q.vmap[v]:
                    continue
                lifted = [g for g in sk.edges_into(v, e.color) if q.emap[g] == e.id]
                if len(lifted) != 1:
                    raise NoLift(f"{len(lifted)} lifts of {e.id} at {v}", (e.id, v))
                g = lifted[0]
                j = inv[g][i - 1] if i is not None else None
                table[(x, e.id)] = (p.emap[g], label(sk.s(g), j))
    return KMorph(lam1, lam2, r.keys(), r, s, table, name=name, validated=True)


# -- regularity and bimodules ----------------------------------------------

def regularity_check(X: KMorph) -> tuple[bool, list[tuple[str, object]]]:
    """Check the regularity hypotheses.

    Returns ``(ok, failures)`` where each failure is ``(clause, witness)``.
    The clauses are: Λ has no sources, Γ has no sources, s is surjective,
    r is surjective.  Row-finiteness and finite-to-one are automatic here.
    """
    failures: list[tuple[str, object]] = []
    ok, w = has_no_sources(X.lam.skeleton)
    if not ok:
        failures.append(("lambda-source", w))
    ok, w = has_no_sources(X.gam.skeleton)
    if not ok:
        failures.append(("gamma-source", w))
    missing = sorted(set(X.gam.vertices) - set(X.s.values()))
    if missing:
        failures.append(("s-not-surjective", missing[0]))
    missing = sorted(set(X.lam.vertices) - set(X.r.values()))
    if missing:
        failures.append(("r-not-surjective", missing[0]))
    return not failures, failures


@dataclass(frozen=True)
class BimodulePresentation:
    """Vertex matrix of X and the left action of Λ-edges.

    ``action[(f, x)] = (x2, gamma)`` means ``transport(x2, gamma) == (f, x)``.
    """

    rows: tuple[str, ...]
    cols: tuple[str, ...]
    matrix: np.ndarray
    action: Mapping[tuple[str, str], tuple[str, Path]]


def vertex_matrix(X: KMorph) -> np.ndarray:
    rows = {v: i for i, v in enumerate(X.lam.vertices)}
    cols = {w: j for j, w in enumerate(X.gam.vertices)}
    m = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for x in X.elements:
        m[rows[X.r[x]], cols[X.s[x]]] += 1
    return m


def bimodule_presentation(X: KMorph) -> BimodulePresentation:
    ok, failures = regularity_check(X)
    if not ok:
        raise RegularityFailure(f"morph is not regular: {failures[0]}", failures[0])
    action = {}
    for f in X.lam.edges:
        single = Path(f.range, f.source, (f.id,), X.lam.degree_of((f.id,)))
        for x in X.elements:
            if X.r[x] == f.source:
                action[(f.id, x)] = transport_inverse(X, single, x)
    return BimodulePresentation(X.lam.vertices, X.gam.vertices, vertex_matrix(X), action)


def relabel_morph(X: KMorph, rename: Mapping[str, str]) -> KMorph:
    """Copy of X with elements renamed."""
    table = {(rename[x], e): (f, rename[x2]) for (x, e), (f, x2) in X.table.items()}
    return KMorph(X.lam, X.gam, [rename[x] for x in X.elements],
                  {rename[x]: v for x, v in X.r.items()},
                  {rename[x]: v for x, v in X.s.items()}, table,
                  name=X.name, validated=X.validated)


def fibred_count(X1: KMorph, X2: KMorph) -> int:
    """|X1 ∗ X2| by counting over the middle vertex set."""
    left = Counter(X1.s.values())
    right = Counter(X2.r.values())
    return sum(left[w] * right[w] for w in left)
