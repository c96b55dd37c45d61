"""Finite k-colored directed multigraphs.

A skeleton is the generator-level data of a k-graph: a vertex set and
colored edges, each with a source and a range.  Paths are written
range-first, so an edge ``e`` goes from ``e.source`` to ``e.range``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


@dataclass(frozen=True, order=True)
class Edge:
    id: str
    color: int
    source: str
    range: str


@dataclass(frozen=True)
class Defect:
    kind: str
    witness: object
    message: str


class Skeleton:
    """A k-colored multigraph.

    Construction never raises; use :func:`check_wellformed` to find defects.
    Vertices and edges are kept in sorted-id order so every iteration is
    deterministic.
    """

    def __init__(self, rank: int, vertices: Iterable[str], edges: Iterable[Edge]):
        self.rank = int(rank)
        self.vertices: tuple[str, ...] = tuple(sorted(vertices))
        self.edges: tuple[Edge, ...] = tuple(sorted(edges, key=lambda e: e.id))
        self.edge = {e.id: e for e in self.edges}
        self._vertex_set = frozenset(self.vertices)
        into: dict[tuple[int, str], list[str]] = {}
        out: dict[tuple[int, str], list[str]] = {}
        for e in self.edges:
            into.setdefault((e.color, e.range), []).append(e.id)
            out.setdefault((e.color, e.source), []).append(e.id)
        self._into = {k: tuple(v) for k, v in into.items()}
        self._out = {k: tuple(v) for k, v in out.items()}

    def has_vertex(self, v: str) -> bool:
        return v in self._vertex_set

    def color(self, e: str) -> int:
        return self.edge[e].color

    def r(self, e: str) -> str:
        return self.edge[e].range

    def s(self, e: str) -> str:
        return self.edge[e].source

    def edges_into(self, v: str, color: int) -> tuple[str, ...]:
        """Ids of color-``color`` edges with range ``v`` (the set vΛ^{e_i})."""
        return self._into.get((color, v), ())

    def edges_out(self, v: str, color: int) -> tuple[str, ...]:
        """Ids of color-``color`` edges with source ``v``."""
        return self._out.get((color, v), ())

    def edges_of_color(self, color: int) -> tuple[str, ...]:
        return tuple(e.id for e in self.edges if e.color == color)

    def _key(self):
        return (self.rank, self.vertices, self.edges)

    def __eq__(self, other):
        return isinstance(other, Skeleton) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"Skeleton(rank={self.rank}, |V|={len(self.vertices)}, |E|={len(self.edges)})"


def make_skeleton(rank: int, vertices: Iterable[str],
                  edges: Sequence[tuple[str, int, str, str]]) -> Skeleton:
    """Build a skeleton from ``(id, color, source, range)`` tuples."""
    return Skeleton(rank, vertices, [Edge(*e) for e in edges])


def check_wellformed(sk: Skeleton) -> list[Defect]:
    """Return every structural defect of ``sk`` (empty list means valid)."""
    defects: list[Defect] = []
    if sk.rank < 0:
        defects.append(Defect("rank", sk.rank, "rank must be nonnegative"))
    if not sk.vertices:
        defects.append(Defect("empty", None, "vertex set is empty"))
    for v, n in sorted(Counter(sk.vertices).items()):
        if n > 1:
            defects.append(Defect("duplicate", v, f"vertex {v!r} declared {n} times"))
        if not v:
            defects.append(Defect("empty-id", v, "empty vertex id"))
    for e, n in sorted(Counter(e.id for e in sk.edges).items()):
        if n > 1:
            defects.append(Defect("duplicate", e, f"edge {e!r} declared {n} times"))
    for e in sk.edges:
        if not e.id:
            defects.append(Defect("empty-id", e.id, "empty edge id"))
        if sk.has_vertex(e.id):
            defects.append(Defect("duplicate", e.id, f"{e.id!r} is both a vertex and an edge"))
        if not 1 <= e.color <= sk.rank:
            defects.append(Defect("color", e.id, f"edge {e.id!r} has color {e.color} outside 1..{sk.rank}"))
        for end in (e.source, e.range):
            if not sk.has_vertex(end):
                defects.append(Defect("dangling", end, f"edge {e.id!r} uses missing vertex {end!r}"))
    return defects


def adjacency_matrix(sk: Skeleton, color: int) -> np.ndarray:
    """Vertex matrix M with M[u, w] = number of color edges from w to u.

    Rows and columns follow ``sk.vertices``.
    """
    if not 1 <= color <= sk.rank:
        raise ValueError(f"color {color} out of range 1..{sk.rank}")
    index = {v: i for i, v in enumerate(sk.vertices)}
    m = np.zeros((len(index), len(index)), dtype=np.int64)
    for e in sk.edges:
        if e.color == color:
            m[index[e.range], index[e.source]] += 1
    return m


def has_no_sources(sk: Skeleton) -> tuple[bool, tuple[str, int] | None]:
    """Check that every vertex receives an edge of every color.

    Returns ``(True, None)`` or ``(False, (vertex, color))`` for the first
    failure in sorted order.
    """
    for v in sk.vertices:
        for c in range(1, sk.rank + 1):
            if not sk.edges_into(v, c):
                return False, (v, c)
    return True, None
