"""k-graphs presented by a skeleton and factorization squares.

A square ``(b, a) -> (a2, b2)`` says the word ``b a`` (``b`` of the higher
color, traversed after ``a``) equals ``a2 b2``.  Words are written range
first, so ``s(b) == r(a)``.  Morphisms are represented by their
color-ascending normal form.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import (CubeFailure, DegreeOutOfRange, MalformedSquare, MissingSquare,
                     NonBijectiveSquare, NotComposable, ValidationError)
from .skeleton import Edge, Skeleton, check_wellformed

Word = tuple[str, ...]
Rules = Mapping[tuple[str, str], tuple[str, str]]


@dataclass(frozen=True)
class Path:
    """A morphism in normal form.  ``edges`` is empty for a vertex."""

    range: str
    source: str
    edges: Word
    degree: tuple[int, ...]

    @property
    def is_vertex(self) -> bool:
        return not self.edges

    def __len__(self):
        return len(self.edges)

    def __str__(self):
        return " ".join(self.edges) if self.edges else self.range


class KGraph:
    """A skeleton together with its square table.

    ``validated`` is True only for graphs returned by :func:`validate_rules`
    or built by constructions that are valid by design.
    """

    def __init__(self, skeleton: Skeleton, rules: Rules, name: str | None = None,
                 validated: bool = False):
        self.skeleton = skeleton
        self.rules: dict[tuple[str, str], tuple[str, str]] = dict(sorted(rules.items()))
        self.inverse = {v: k for k, v in self.rules.items()}
        self.name = name
        self.validated = validated

    @property
    def rank(self) -> int:
        return self.skeleton.rank

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.skeleton.vertices

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self.skeleton.edges

    def color(self, e: str) -> int:
        return self.skeleton.edge[e].color

    def r(self, e: str) -> str:
        return self.skeleton.edge[e].range

    def s(self, e: str) -> str:
        return self.skeleton.edge[e].source

    def degree_of(self, word: Iterable[str]) -> tuple[int, ...]:
        d = [0] * self.rank
        for e in word:
            d[self.color(e) - 1] += 1
        return tuple(d)

    def vertex_path(self, v: str) -> Path:
        if not self.skeleton.has_vertex(v):
            raise KeyError(v)
        return Path(v, v, (), (0,) * self.rank)

    def path(self, word: Sequence[str] | str) -> Path:
        """Path from a composable word (or a vertex id), normalized."""
        if isinstance(word, str):
            if self.skeleton.has_vertex(word):
                return self.vertex_path(word)
            word = (word,)
        word = tuple(word)
        if not word:
            raise ValueError("empty word; pass a vertex id instead")
        for e in word:
            if e not in self.skeleton.edge:
                raise KeyError(e)
        for x, y in zip(word, word[1:]):
            if self.s(x) != self.r(y):
                raise NotComposable(f"{x} then {y} is not composable", (x, y))
        return Path(self.r(word[0]), self.s(word[-1]), normalize(self, word), self.degree_of(word))

    def swap(self, b: str, a: str) -> tuple[str, str]:
        """Apply the square to ``b a`` where color(b) > color(a)."""
        try:
            return self.rules[(b, a)]
        except KeyError:
            raise MissingSquare(f"no square for {b} {a}", (b, a)) from None

    def unswap(self, a: str, b: str) -> tuple[str, str]:
        """Inverse square: ``a b`` with color(a) < color(b) to ``b' a'``."""
        try:
            return self.inverse[(a, b)]
        except KeyError:
            raise MissingSquare(f"no square produces {a} {b}", (a, b)) from None

    def _key(self):
        return (self.skeleton, tuple(self.rules.items()))

    def __eq__(self, other):
        return isinstance(other, KGraph) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        label = f"{self.name} " if self.name else ""
        return (f"KGraph({label}rank={self.rank}, |V|={len(self.vertices)}, "
                f"|E|={len(self.edges)}, squares={len(self.rules)})")


# -- validation ------------------------------------------------------------

def _two_colored_words(sk: Skeleton, descending: bool):
    """Composable words (x, y) with color(x) > color(y) (or < if not descending)."""
    for x in sk.edges:
        others = range(1, x.color) if descending else range(x.color + 1, sk.rank + 1)
        for c in others:
            for y in sk.edges_into(x.source, c):
                yield x.id, y


def _hexagon_routes(rules: Rules, c: str, b: str, a: str):
    chain_a = [(c, b, a)]
    a1, b1 = rules[(b, a)]
    chain_a.append((c, a1, b1))
    a2, c1 = rules[(c, a1)]
    chain_a.append((a2, c1, b1))
    b2, c2 = rules[(c1, b1)]
    chain_a.append((a2, b2, c2))

    chain_b = [(c, b, a)]
    b1, c1 = rules[(c, b)]
    chain_b.append((b1, c1, a))
    a1, c2 = rules[(c1, a)]
    chain_b.append((b1, a1, c2))
    a2, b2 = rules[(b1, a1)]
    chain_b.append((a2, b2, c2))
    return chain_a, chain_b


def cube_failures(sk: Skeleton, rules: Rules) -> list[tuple[Word, list[Word], list[Word]]]:
    """All three-colored words whose hexagon routes disagree, sorted by word.

    Assumes the square table already passed the two-color checks.
    """
    out = []
    for c in sk.edges:
        for j in range(1, c.color):
            for b in sk.edges_into(c.source, j):
                for i in range(1, j):
                    for a in sk.edges_into(sk.s(b), i):
                        chain_a, chain_b = _hexagon_routes(rules, c.id, b, a)
                        if chain_a[-1] != chain_b[-1]:
                            out.append(((c.id, b, a), chain_a, chain_b))
    out.sort(key=lambda t: t[0])
    return out


def validate_rules(sk: Skeleton, rules: Rules, name: str | None = None) -> KGraph:
    """Check a presentation and return the validated :class:`KGraph`.

    Raises the first defect found, in this order: malformed skeleton or
    square, missing square, non-bijective table, cube failure.  Two-color
    witnesses are the least in sorted-id order.  For cube failures every
    failing word is listed on the exception; the reported witness is the
    greatest of them, with both reduction chains.
    """
    defects = check_wellformed(sk)
    if defects:
        d = defects[0]
        raise ValidationError(d.message, d.witness)
    for (b, a), (a2, b2) in sorted(rules.items()):
        if any(e not in sk.edge for e in (b, a, a2, b2)):
            missing = next(e for e in (b, a, a2, b2) if e not in sk.edge)
            raise MalformedSquare(f"square {b} {a} uses unknown edge {missing}", (b, a))
        cb, ca = sk.color(b), sk.color(a)
        if not cb > ca:
            raise MalformedSquare(f"square {b} {a} needs color({b}) > color({a})", (b, a))
        if (sk.color(a2), sk.color(b2)) != (ca, cb):
            raise MalformedSquare(f"square {b} {a} = {a2} {b2} changes colors", (b, a))
        if sk.s(b) != sk.r(a):
            raise MalformedSquare(f"{b} {a} is not composable", (b, a))
        if sk.s(a2) != sk.r(b2):
            raise MalformedSquare(f"{a2} {b2} is not composable", (a2, b2))
        if sk.r(a2) != sk.r(b) or sk.s(b2) != sk.s(a):
            raise MalformedSquare(f"square {b} {a} = {a2} {b2} changes endpoints", (b, a))
    for word in _two_colored_words(sk, descending=True):
        if word not in rules:
            raise MissingSquare(f"no square for {word[0]} {word[1]}", word)
    counts = Counter(rules.values())
    dup = sorted(w for w, n in counts.items() if n > 1)
    if dup:
        raise NonBijectiveSquare(f"{dup[0][0]} {dup[0][1]} is hit {counts[dup[0]]} times", dup[0])
    for word in _two_colored_words(sk, descending=False):
        if word not in counts:
            raise NonBijectiveSquare(f"no square produces {word[0]} {word[1]}", word)
    if sk.rank >= 3:
        failures = cube_failures(sk, rules)
        if failures:
            witness, chain_a, chain_b = failures[-1]
            raise CubeFailure(
                f"cube condition fails at {' '.join(witness)}: "
                f"{' '.join(chain_a[-1])} != {' '.join(chain_b[-1])}",
                witness, chain_a, chain_b, [f[0] for f in failures])
    return KGraph(sk, rules, name=name, validated=True)


def validate_graph(g: KGraph) -> KGraph:
    return validate_rules(g.skeleton, g.rules, g.name)


def is_valid(sk: Skeleton, rules: Rules) -> bool:
    try:
        validate_rules(sk, rules)
    except ValidationError:
        return False
    return True


# -- path algebra ----------------------------------------------------------

def normalize(g: KGraph, word: Sequence[str]) -> Word:
    """Sort a composable word into color-ascending order by square swaps."""
    w = list(word)
    for i in range(1, len(w)):
        j = i
        while j > 0 and g.color(w[j - 1]) > g.color(w[j]):
            w[j - 1], w[j] = g.swap(w[j - 1], w[j])
            j -= 1
    return tuple(w)


def compose(g: KGraph, p: Path, q: Path) -> Path:
    """The composite ``p q`` (``q`` first, then ``p``)."""
    if p.source != q.range:
        raise NotComposable(f"s(p)={p.source} but r(q)={q.range}", (p.source, q.range))
    edges = normalize(g, p.edges + q.edges)
    degree = tuple(x + y for x, y in zip(p.degree, q.degree))
    return Path(p.range, q.source, edges, degree)


def _bubble_to(g: KGraph, w: list[str], colors: Sequence[int]) -> None:
    for t, c in enumerate(colors):
        j = next(j for j in range(t, len(w)) if g.color(w[j]) == c)
        while j > t:
            left = w[j - 1]
            if g.color(left) > c:
                w[j - 1], w[j] = g.swap(left, w[j])
            else:
                w[j - 1], w[j] = g.unswap(left, w[j])
            j -= 1


def rearrange(g: KGraph, p: Path, colors: Sequence[int]) -> Word:
    """The unique word equal to ``p`` whose color sequence is ``colors``."""
    if sorted(colors) != sorted(g.color(e) for e in p.edges):
        raise ValueError("color sequence does not match the degree of the path")
    w = list(p.edges)
    _bubble_to(g, w, colors)
    return tuple(w)


def factorize(g: KGraph, p: Path, m: Sequence[int]) -> tuple[Path, Path]:
    """Split ``p`` as ``mu nu`` with ``d(mu) = m``."""
    m = tuple(m)
    if len(m) != g.rank or any(x < 0 or x > y for x, y in zip(m, p.degree)):
        raise DegreeOutOfRange(f"{m} is not below d(p) = {p.degree}", (m, p.degree))
    rest = tuple(y - x for x, y in zip(m, p.degree))
    colors = [c + 1 for c in range(g.rank) for _ in range(m[c])]
    colors += [c + 1 for c in range(g.rank) for _ in range(rest[c])]
    w = list(p.edges)
    _bubble_to(g, w, colors)
    cut = sum(m)
    mu, nu = tuple(w[:cut]), tuple(w[cut:])
    mid = g.s(mu[-1]) if mu else p.range
    return Path(p.range, mid, mu, m), Path(mid, p.source, nu, rest)


def paths_of_degree(g: KGraph, n: Sequence[int], range: str | None = None,
                    source: str | None = None) -> list[Path]:
    """All paths of degree ``n``, sorted by range vertex then edge ids."""
    n = tuple(n)
    if len(n) != g.rank:
        raise ValueError(f"degree {n} has wrong length for rank {g.rank}")
    colors = [c + 1 for c in itertools.chain.from_iterable([i] * k for i, k in enumerate(n))]
    starts = [range] if range is not None else list(g.vertices)
    out: list[Path] = []
    sk = g.skeleton

    def walk(start, cur, word):
        t = len(word)
        if t == len(colors):
            if source is None or cur == source:
                out.append(Path(start, cur, tuple(word), n))
            return
        for e in sk.edges_into(cur, colors[t]):
            word.append(e)
            walk(start, sk.s(e), word)
            word.pop()

    for v in starts:
        walk(v, v, [])
    return out


def boundary_paths(g: KGraph, v: str, n: Sequence[int]) -> list[Path]:
    """The set vΛ^{≤n}: paths of degree m ≤ n that cannot be extended
    in any direction i with m + e_i ≤ n."""
    n = tuple(n)
    out = []
    for m in itertools.product(*(range(k + 1) for k in n)):
        for p in paths_of_degree(g, m, range=v):
            if all(m[i] == n[i] or not g.skeleton.edges_into(p.source, i + 1)
                   for i in range(g.rank)):
                out.append(p)
    return out


def is_locally_convex(g: KGraph) -> tuple[bool, tuple[str, str] | None]:
    """Check local convexity; the witness is the least failing edge pair."""
    sk = g.skeleton
    for e in sk.edges:
        for j in range(e.color + 1, g.rank + 1):
            for f in sk.edges_into(e.range, j):
                if not sk.edges_into(e.source, j) or not sk.edges_into(sk.s(f), e.color):
                    return False, (e.id, f)
    return True, None


def restrict_colors(g: KGraph, colors: Sequence[int]) -> KGraph:
    """The sub-graph on edges of ``colors``, recolored 1..len(colors) in the
    given order."""
    cmap = {c: i + 1 for i, c in enumerate(colors)}
    if len(cmap) != len(colors) or any(not 1 <= c <= g.rank for c in cmap):
        raise ValueError(f"bad color selection {colors!r}")
    edges = [Edge(e.id, cmap[e.color], e.source, e.range) for e in g.edges if e.color in cmap]
    rules = {}
    for (b, a), (a2, b2) in g.rules.items():
        cb, ca = g.color(b), g.color(a)
        if cb in cmap and ca in cmap:
            if cmap[cb] > cmap[ca]:
                rules[(b, a)] = (a2, b2)
            else:
                rules[(a2, b2)] = (b, a)
    sk = Skeleton(len(colors), g.vertices, edges)
    return KGraph(sk, rules, name=g.name, validated=g.validated)


# -- isomorphism -----------------------------------------------------------

@dataclass(frozen=True)
class GraphIso:
    """Color-preserving bijections from ``source`` onto ``target``."""

    source: KGraph
    target: KGraph
    vmap: Mapping[str, str]
    emap: Mapping[str, str]

    def apply(self, p: Path) -> Path:
        return Path(self.vmap[p.range], self.vmap[p.source],
                    tuple(self.emap[e] for e in p.edges), p.degree)

    def inverse(self) -> "GraphIso":
        return GraphIso(self.target, self.source,
                        {w: v for v, w in self.vmap.items()},
                        {f: e for e, f in self.emap.items()})


def check_graph_isomorphism(g1: KGraph, g2: KGraph, vmap: Mapping[str, str],
                            emap: Mapping[str, str]) -> bool:
    """Verify explicit maps form an isomorphism ``g1 -> g2``."""
    if g1.rank != g2.rank:
        return False
    if sorted(vmap) != list(g1.vertices) or sorted(vmap.values()) != list(g2.vertices):
        return False
    if sorted(emap) != sorted(e.id for e in g1.edges):
        return False
    if sorted(emap.values()) != sorted(e.id for e in g2.edges):
        return False
    for e in g1.edges:
        f = emap[e.id]
        if f not in g2.skeleton.edge:
            return False
        f = g2.skeleton.edge[f]
        if (f.color, f.range, f.source) != (e.color, vmap[e.range], vmap[e.source]):
            return False
    if len(g1.rules) != len(g2.rules):
        return False
    for (b, a), (a2, b2) in g1.rules.items():
        if g2.rules.get((emap[b], emap[a])) != (emap[a2], emap[b2]):
            return False
    return True


def _vertex_signature(g: KGraph, v: str):
    sk = g.skeleton
    sig = []
    for c in range(1, g.rank + 1):
        ins = sk.edges_into(v, c)
        loops = sum(1 for e in ins if sk.s(e) == v)
        sig.append((len(ins), len(sk.edges_out(v, c)), loops))
    return tuple(sig)


def _edge_order(g: KGraph) -> list[str]:
    """Edges ordered so each one touches an earlier vertex when possible."""
    sk = g.skeleton
    incident: dict[str, list[str]] = {v: [] for v in g.vertices}
    for e in sk.edges:
        incident[e.range].append(e.id)
        if e.source != e.range:
            incident[e.source].append(e.id)
    seen_v: set[str] = set()
    seen_e: set[str] = set()
    order: list[str] = []
    for root in g.vertices:
        if root in seen_v:
            continue
        queue = [root]
        seen_v.add(root)
        while queue:
            v = queue.pop(0)
            for e in incident[v]:
                if e in seen_e:
                    continue
                seen_e.add(e)
                order.append(e)
                for w in (sk.r(e), sk.s(e)):
                    if w not in seen_v:
                        seen_v.add(w)
                        queue.append(w)
    return order


def find_isomorphism(g1: KGraph, g2: KGraph) -> GraphIso | None:
    """Backtracking search for a color-preserving isomorphism ``g1 -> g2``.

    Returns the first solution in sorted-candidate order, or None.
    """
    if g1.rank != g2.rank or len(g1.vertices) != len(g2.vertices):
        return None
    if len(g1.edges) != len(g2.edges) or len(g1.rules) != len(g2.rules):
        return None
    if Counter(e.color for e in g1.edges) != Counter(e.color for e in g2.edges):
        return None
    sig1 = {v: _vertex_signature(g1, v) for v in g1.vertices}
    sig2 = {v: _vertex_signature(g2, v) for v in g2.vertices}
    if Counter(sig1.values()) != Counter(sig2.values()):
        return None

    sk1, sk2 = g1.skeleton, g2.skeleton
    order = _edge_order(g1)
    by_color: dict[int, list[str]] = {}
    for e in sk2.edges:
        by_color.setdefault(e.color, []).append(e.id)
    squares_of: dict[str, list[tuple]] = {e.id: [] for e in sk1.edges}
    for (b, a), (a2, b2) in g1.rules.items():
        for e in {b, a, a2, b2}:
            squares_of[e].append((b, a, a2, b2))

    vmap: dict[str, str] = {}
    vinv: dict[str, str] = {}
    emap: dict[str, str] = {}
    used: set[str] = set()

    def bind(v, w, added):
        if v in vmap:
            return vmap[v] == w
        if w in vinv or sig1[v] != sig2[w]:
            return False
        vmap[v] = w
        vinv[w] = v
        added.append(v)
        return True

    def squares_ok(e):
        for b, a, a2, b2 in squares_of[e]:
            if all(x in emap for x in (b, a, a2, b2)):
                if g2.rules.get((emap[b], emap[a])) != (emap[a2], emap[b2]):
                    return False
        return True

    def search(t):
        if t == len(order):
            return True
        e = order[t]
        for f in by_color.get(sk1.color(e), ()):
            if f in used:
                continue
            added: list[str] = []
            if bind(sk1.r(e), sk2.r(f), added) and bind(sk1.s(e), sk2.s(f), added):
                emap[e] = f
                used.add(f)
                if squares_ok(e) and search(t + 1):
                    return True
                del emap[e]
                used.discard(f)
            for v in added:
                del vinv[vmap.pop(v)]
        return False

    if not search(0):
        return None
    rest1 = [v for v in g1.vertices if v not in vmap]
    rest2 = [w for w in g2.vertices if w not in vinv]
    vmap.update(zip(rest1, rest2))
    return GraphIso(g1, g2, dict(sorted(vmap.items())), dict(sorted(emap.items())))


def relabel(g: KGraph, vmap: Mapping[str, str], emap: Mapping[str, str],
            name: str | None = None) -> KGraph:
    """Copy of ``g`` with vertices and edges renamed."""
    edges = [Edge(emap[e.id], e.color, vmap[e.source], vmap[e.range]) for e in g.edges]
    rules = {(emap[b], emap[a]): (emap[a2], emap[b2]) for (b, a), (a2, b2) in g.rules.items()}
    return KGraph(Skeleton(g.rank, [vmap[v] for v in g.vertices], edges), rules,
                  name=name or g.name, validated=g.validated)
