"""Seeded random k-graphs, morphs and systems at desk scale.

Everything here returns validated objects.  The seed comes from the
``KMORPH_SEED`` environment variable unless given explicitly.
"""

from __future__ import annotations

import os
import random
from collections import defaultdict

import numpy as np

from .assembly import GammaSystem
from .kgraph import GraphIso, KGraph, relabel, validate_rules
from .morph import (KMorph, empty_morph, fibred_product, identity_morph, morph_from_iso,
                    relabel_morph, validate_morph)
from .skeleton import Edge, Skeleton, adjacency_matrix

EDGE_LETTERS = "abc"
# Rank 2 is where squares and mixed cubes live, so it is sampled most.
RANK_WEIGHTS = (0, 1, 1, 2, 2, 2)


def seeded_rng(seed: int | None = None) -> random.Random:
    if seed is None:
        seed = int(os.environ.get("KMORPH_SEED", "0"))
    return random.Random(seed)


def _random_skeleton(rng: random.Random, k: int, nv: int, max_edges: int,
                     no_sources: bool) -> Skeleton:
    vs = [f"v{i}" for i in range(nv)]
    edges = []
    for c in range(1, k + 1):
        ranges = list(vs) if no_sources else []
        n = rng.randint(len(ranges), max(len(ranges), max_edges))
        ranges += [rng.choice(vs) for _ in range(n - len(ranges))]
        for i, r in enumerate(ranges):
            edges.append(Edge(f"{EDGE_LETTERS[c - 1]}{i}", c, rng.choice(vs), r))
    return Skeleton(k, vs, edges)


def _commutes(sk: Skeleton) -> bool:
    ms = [adjacency_matrix(sk, c) for c in range(1, sk.rank + 1)]
    return all(np.array_equal(a @ b, b @ a) for i, a in enumerate(ms) for b in ms[i + 1:])


def random_squares(rng: random.Random, sk: Skeleton) -> dict:
    """Random endpoint-preserving bijections on every two-colored fiber
    (no cube check, so only meaningful up to rank 2)."""
    desc, asc = defaultdict(list), defaultdict(list)
    for b in sk.edges:
        for a in sk.edges:
            if b.source == a.range and b.color != a.color:
                key = (max(b.color, a.color), min(b.color, a.color), b.range, a.source)
                (desc if b.color > a.color else asc)[key].append((b.id, a.id))
    rules = {}
    for key, words in sorted(desc.items()):
        image = sorted(asc[key])
        rng.shuffle(image)
        rules.update(zip(sorted(words), image))
    return rules


def random_kgraph(rng: random.Random, k: int, max_vertices: int = 4, max_edges: int = 3,
                  no_sources: bool = False, tries: int = 500) -> KGraph:
    """A random valid k-graph with k <= 2."""
    if k > 2:
        raise ValueError("random k-graphs are only generated up to rank 2")
    for _ in range(tries):
        lo = 1
        hi = min(max_vertices, max_edges) if no_sources and k else max_vertices
        sk = _random_skeleton(rng, k, rng.randint(lo, hi), max_edges, no_sources)
        if k < 2 or _commutes(sk):
            return validate_rules(sk, random_squares(rng, sk))
    sk = _random_skeleton(rng, k, 1, max_edges, no_sources)
    return validate_rules(sk, random_squares(rng, sk))


def _count_condition(lam: KGraph, gam: KGraph, r: dict, s: dict) -> bool:
    rows = {v: i for i, v in enumerate(lam.vertices)}
    cols = {w: j for j, w in enumerate(gam.vertices)}
    m = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for x in r:
        m[rows[r[x]], cols[s[x]]] += 1
    for c in range(1, lam.rank + 1):
        if not np.array_equal(m @ adjacency_matrix(gam.skeleton, c),
                              adjacency_matrix(lam.skeleton, c) @ m):
            return False
    return True


def solve_transports(rng: random.Random, lam: KGraph, gam: KGraph, r: dict, s: dict,
                     budget: int = 2000) -> dict | None:
    """Randomized backtracking for a transport table satisfying the
    bijectivity and mixed cube conditions.  None if the budget runs out."""
    elements = sorted(r)
    keys = [(x, e.id) for x in elements for e in gam.edges if e.range == s[x]]
    domains = {}
    for x, e in keys:
        c = gam.color(e)
        domains[(x, e)] = [(f.id, x2) for f in lam.edges if f.color == c and f.range == r[x]
                           for x2 in elements if r[x2] == f.source and s[x2] == gam.s(e)]
    # Each mixed cube check (x, b, a) reads the entries (x, a1), (x1, b1),
    # (x, b) and (y1, a); index it by the first-level keys and by the
    # edges of the second-level keys.
    first: dict = defaultdict(list)
    second: dict = defaultdict(list)
    gsk = gam.skeleton
    for x in elements:
        for b in gam.edges:
            if b.range != s[x]:
                continue
            for i in range(1, b.color):
                for a in gsk.edges_into(b.source, i):
                    a1, b1 = gam.rules[(b.id, a)]
                    chk = (x, b.id, a, a1, b1)
                    first[(x, a1)].append(chk)
                    first[(x, b.id)].append(chk)
                    second[b1].append(chk)
                    second[a].append(chk)
    table: dict = {}
    used: set = set()
    nodes = 0

    def holds(chk):
        x, b, a, a1, b1 = chk
        t1 = table.get((x, a1))
        t2 = table.get((t1[1], b1)) if t1 else None
        u1 = table.get((x, b))
        u2 = table.get((u1[1], a)) if u1 else None
        if t2 is None or u2 is None:
            return True
        return (t1[0], t2[0], t2[1]) == (*lam.rules[(u1[0], u2[0])], u2[1])

    def consistent(key):
        return all(holds(c) for c in first.get(key, ())) and \
            all(holds(c) for c in second.get(key[1], ()))

    def search(t):
        nonlocal nodes
        if t == len(keys):
            return True
        opts = [o for o in domains[keys[t]] if o not in used]
        rng.shuffle(opts)
        for o in opts:
            nodes += 1
            if nodes > budget:
                return False
            table[keys[t]] = o
            used.add(o)
            if consistent(keys[t]) and search(t + 1):
                return True
            del table[keys[t]]
            used.discard(o)
        return False

    return dict(table) if search(0) else None


def _algebra_matrix(rng: random.Random, g: KGraph, max_elements: int) -> np.ndarray | None:
    """A small nonnegative matrix commuting with every adjacency matrix of
    ``g``: a sum of one or two products of I, A_1, ..., A_k."""
    n = len(g.vertices)
    gens = [np.eye(n, dtype=np.int64)] + [adjacency_matrix(g.skeleton, c)
                                          for c in range(1, g.rank + 1)]
    m = np.zeros((n, n), dtype=np.int64)
    for _ in range(rng.randint(1, 2)):
        term = np.eye(n, dtype=np.int64)
        for _ in range(rng.randint(0, 2)):
            term = term @ rng.choice(gens)
        m = m + term
    return m if 0 < m.sum() <= max_elements else None


def _endpoints_from_matrix(m: np.ndarray, lam: KGraph, gam: KGraph) -> tuple[dict, dict]:
    r, s = {}, {}
    for i, v in enumerate(lam.vertices):
        for j, w in enumerate(gam.vertices):
            for _ in range(int(m[i, j])):
                x = f"x{len(r)}"
                r[x], s[x] = v, w
    return r, s


def random_morph(rng: random.Random, lam: KGraph, gam: KGraph, max_elements: int = 4,
                 surjective: bool = False, tries: int = 300) -> KMorph | None:
    """A random valid morph from Γ to Λ, or None if none was found.

    Endomorphs mostly take their vertex matrix from the algebra generated by
    the adjacency matrices, since random endpoints rarely intertwine them.
    """
    lo = max(len(lam.vertices), len(gam.vertices)) if surjective else 0
    if lo > max_elements:
        return None
    for _ in range(tries):
        m = _algebra_matrix(rng, lam, max_elements) if lam == gam and rng.random() < 0.7 else None
        if m is not None:
            if surjective and (not m.sum(axis=0).all() or not m.sum(axis=1).all()):
                continue
            r, s = _endpoints_from_matrix(m, lam, gam)
            names = list(r)
        else:
            n = rng.randint(lo, max_elements)
            names = [f"x{i}" for i in range(n)]
            if surjective:
                rv = list(lam.vertices) + [rng.choice(lam.vertices)
                                           for _ in range(n - len(lam.vertices))]
                sv = list(gam.vertices) + [rng.choice(gam.vertices)
                                           for _ in range(n - len(gam.vertices))]
                rng.shuffle(rv)
                rng.shuffle(sv)
            else:
                rv = [rng.choice(lam.vertices) for _ in range(n)]
                sv = [rng.choice(gam.vertices) for _ in range(n)]
            r, s = dict(zip(names, rv)), dict(zip(names, sv))
            if not _count_condition(lam, gam, r, s):
                continue
        table = solve_transports(rng, lam, gam, r, s)
        if table is not None:
            return validate_morph(KMorph(lam, gam, names, r, s, table))
    return None


def random_relabeled(rng: random.Random, g: KGraph) -> tuple[KGraph, GraphIso]:
    """An isomorphic copy of ``g`` with permuted, renamed vertices and
    edges, together with the isomorphism from the copy back to ``g``."""
    vs = list(g.vertices)
    rng.shuffle(vs)
    vmap = {v: f"w{i}" for i, v in enumerate(vs)}
    emap = {e.id: f"{e.id}'" for e in g.edges}
    h = relabel(g, vmap, emap)
    back = GraphIso(h, g, {w: v for v, w in vmap.items()}, {f: e for e, f in emap.items()})
    return h, back


def random_endomorph(rng: random.Random, g: KGraph, max_elements: int = 4) -> KMorph:
    """Random endomorph; falls back to the identity."""
    X = random_morph(rng, g, g, max_elements)
    return X if X is not None and X.elements else identity_morph(g)


def _plain_names(X: KMorph) -> KMorph:
    return relabel_morph(X, {x: f"x{i}" for i, x in enumerate(X.elements)})


def random_morph_between(rng: random.Random, lam: KGraph, kind: str,
                         max_elements: int = 4) -> KMorph | None:
    """A random morph into ``lam`` whose source graph is ``lam`` itself
    (``kind="same"``), a relabeled copy (``"copy"``) or an unrelated random
    graph of the same rank (``"other"``)."""
    if kind == "same":
        return random_morph(rng, lam, lam, max_elements)
    if kind == "copy":
        X = random_morph(rng, lam, lam, max_elements)
        if X is None:
            return None
        _, back = random_relabeled(rng, lam)
        return _plain_names(fibred_product(X, morph_from_iso(back)))
    return random_morph(rng, lam, random_kgraph(rng, lam.rank), max_elements)


def random_morph_pair(rng: random.Random, k: int | None = None) -> KMorph:
    """A random nonempty morph, possibly between different graphs."""
    while True:
        kk = rng.choice(RANK_WEIGHTS) if k is None else k
        lam = random_kgraph(rng, kk)
        kind = rng.choices(("same", "copy", "other"), (5, 3, 2))[0]
        X = random_morph_between(rng, lam, kind)
        if X is not None and X.elements:
            return X


def random_chain(rng: random.Random, length: int = 3, k: int | None = None) -> list[KMorph]:
    """Composable morphs X1, X2, ... (the source graph of each is the range
    graph of the next)."""
    kk = rng.choice(RANK_WEIGHTS) if k is None else k
    lam = random_kgraph(rng, kk)
    morphs = []
    while len(morphs) < length:
        kind = rng.choices(("same", "copy", "other"), (5, 3, 2))[0]
        X = random_morph_between(rng, lam, kind)
        if X is None or not X.elements:
            X = random_endomorph(rng, lam)
        morphs.append(X)
        lam = X.gam
    return morphs


def random_regular_morph(rng: random.Random, lam: KGraph | None = None,
                         gam: KGraph | None = None, k: int | None = None) -> KMorph:
    """A random morph satisfying the regularity hypotheses."""
    kk = k if k is not None else (lam.rank if lam is not None else rng.randint(1, 2))
    while True:
        l = lam if lam is not None else random_kgraph(rng, kk, max_vertices=3, no_sources=True)
        g = gam if gam is not None else (l if rng.random() < 0.4 else
                                         random_kgraph(rng, kk, max_vertices=3, no_sources=True))
        X = random_morph(rng, l, g, max_elements=5, surjective=True, tries=50)
        if X is not None:
            return X


def random_one_graph_system(rng: random.Random, k: int | None = None) -> GammaSystem:
    """A random system of k-graphs over a random 1-graph base."""
    kk = rng.choice(RANK_WEIGHTS) if k is None else k
    nv = rng.randint(1, 3)
    bv = [f"p{i}" for i in range(nv)]
    bedges = [Edge(f"B{i}", 1, rng.choice(bv), rng.choice(bv)) for i in range(rng.randint(0, 3))]
    base = validate_rules(Skeleton(1, bv, bedges), {})
    shared = random_kgraph(rng, kk)
    fibers = {v: shared if rng.random() < 0.6 else random_kgraph(rng, kk) for v in bv}
    morphs = {}
    for e in bedges:
        lam, gam = fibers[e.range], fibers[e.source]
        X = random_morph(rng, lam, gam)
        if X is None or (not X.elements and lam == gam):
            X = random_endomorph(rng, lam) if lam == gam else empty_morph(lam, gam)
        morphs[e.id] = X
    return GammaSystem(base, fibers, morphs, {})


def random_regular_pair(rng: random.Random) -> tuple[KMorph, KMorph]:
    """Composable regular morphs X1 (Γ to Λ) and X2 (Δ to Γ)."""
    X1 = random_regular_morph(rng)
    X2 = random_regular_morph(rng, lam=X1.gam)
    return X1, X2
