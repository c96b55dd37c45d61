"""Brute-force references for the k-graph engine.

:func:`naive_category` deliberately shares no code with :mod:`kmorph.kgraph`:
it enumerates every composable edge word up to a length bound and merges
words related by a single square rewrite, in either direction, until
nothing changes.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter, deque
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import SizeGuard, ValidationError
from .kgraph import KGraph, find_isomorphism, validate_rules
from .skeleton import Skeleton

Word = tuple[str, ...]


@dataclass(frozen=True)
class WordClass:
    words: frozenset[Word]
    degree: tuple[int, ...]
    range: str
    source: str


@dataclass(frozen=True)
class NaiveCategory:
    classes: list[WordClass]
    counts: Mapping[tuple[int, ...], int]
    confluent: bool
    unique_factorization: bool
    witness: Word | None

    def count(self, degree: Sequence[int]) -> int:
        return self.counts.get(tuple(degree), 0)


def naive_category(sk: Skeleton, rules: Mapping[tuple[str, str], tuple[str, str]],
                   N: int) -> NaiveCategory:
    """Rewrite-closure classes of all words of length at most ``N``.

    ``confluent`` is True when every class holds exactly one color-ascending
    word.  ``unique_factorization`` is the stronger statement that every
    class holds exactly one word for each arrangement of its colors, which
    is what a k-graph needs.  ``witness`` is the least word of the first
    class that breaks unique factorization.
    """
    color = {e.id: e.color for e in sk.edges}
    src = {e.id: e.source for e in sk.edges}
    rng = {e.id: e.range for e in sk.edges}
    by_range: dict[str, list[str]] = {}
    for e in sk.edges:
        by_range.setdefault(e.range, []).append(e.id)
    moves: dict[tuple[str, str], list[tuple[str, str]]] = {}
    for lhs, rhs in rules.items():
        moves.setdefault(tuple(lhs), []).append(tuple(rhs))
        moves.setdefault(tuple(rhs), []).append(tuple(lhs))

    words: list[Word] = []
    layer: list[Word] = [(e.id,) for e in sk.edges]
    for _ in range(N):
        words.extend(layer)
        layer = [w + (e,) for w in layer for e in sorted(by_range.get(src[w[-1]], ()))]
    known = set(words)

    seen: set[Word] = set()
    classes: list[WordClass] = []
    for v in sk.vertices:
        classes.append(WordClass(frozenset({()}), (0,) * sk.rank, v, v))
    for start in sorted(words):
        if start in seen:
            continue
        members = {start}
        queue = deque([start])
        while queue:
            w = queue.popleft()
            for i in range(len(w) - 1):
                for a, b in moves.get((w[i], w[i + 1]), ()):
                    w2 = w[:i] + (a, b) + w[i + 2:]
                    if w2 in known and w2 not in members:
                        members.add(w2)
                        queue.append(w2)
        seen |= members
        deg = [0] * sk.rank
        for e in start:
            deg[color[e] - 1] += 1
        classes.append(WordClass(frozenset(members), tuple(deg), rng[start[0]], src[start[-1]]))

    confluent = True
    unique = True
    witness = None
    for c in classes:
        ascending = [w for w in c.words if all(color[x] <= color[y] for x, y in zip(w, w[1:]))]
        arrangements = Counter(tuple(color[e] for e in w) for w in c.words)
        expected = math.factorial(sum(c.degree))
        for d in c.degree:
            expected //= math.factorial(d)
        ok_unique = len(arrangements) == expected and all(n == 1 for n in arrangements.values())
        if len(ascending) != 1:
            confluent = False
        if not ok_unique:
            unique = False
            if witness is None:
                witness = min(c.words)
    counts = Counter(c.degree for c in classes)
    return NaiveCategory(classes, dict(sorted(counts.items())), confluent, unique, witness)


def _fibers(sk: Skeleton):
    """Group the two-colored words by (color pair, range, source)."""
    desc: dict[tuple, list[tuple[str, str]]] = {}
    asc: dict[tuple, list[tuple[str, str]]] = {}
    for b in sk.edges:
        for a in sk.edges:
            if b.source != a.range or b.color == a.color:
                continue
            hi, lo = max(b.color, a.color), min(b.color, a.color)
            key = (hi, lo, b.range, a.source)
            (desc if b.color > a.color else asc).setdefault(key, []).append((b.id, a.id))
    return desc, asc


def candidate_tables(sk: Skeleton, max_fiber: int = 4, max_total: int = 100_000):
    """Yield every endpoint-preserving square table on ``sk``, valid or not.

    Each fiber of two-colored words with fixed colors and endpoints gets an
    arbitrary bijection onto its reordered counterpart.
    """
    desc, asc = _fibers(sk)
    keys = sorted(set(desc) | set(asc))
    for key in keys:
        if len(desc.get(key, ())) != len(asc.get(key, ())):
            return
        if len(desc[key]) > max_fiber:
            raise SizeGuard(f"fiber {key} has {len(desc[key])} words (limit {max_fiber})", key)
    total = math.prod(math.factorial(len(desc[k])) for k in keys)
    if total > max_total:
        raise SizeGuard(f"{total} candidate tables exceed the limit {max_total}", total)
    choices = [list(itertools.permutations(sorted(asc[k]))) for k in keys]
    for pick in itertools.product(*choices):
        rules = {}
        for key, image in zip(keys, pick):
            rules.update(zip(sorted(desc[key]), image))
        yield rules


def enumerate_rule_sets(sk: Skeleton, max_fiber: int = 4, max_total: int = 100_000) -> list[KGraph]:
    """Every square table on ``sk`` that passes validation."""
    out = []
    for rules in candidate_tables(sk, max_fiber, max_total):
        try:
            out.append(validate_rules(sk, rules))
        except ValidationError:
            pass
    return out


def candidate_rule_sets(sk: Skeleton) -> int:
    """Number of endpoint-preserving tables, valid or not."""
    desc, asc = _fibers(sk)
    keys = set(desc) | set(asc)
    if any(len(desc.get(k, ())) != len(asc.get(k, ())) for k in keys):
        return 0
    return math.prod(math.factorial(len(desc[k])) for k in keys)


@dataclass(frozen=True)
class IsoClass:
    representative: KGraph
    members: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.members)


def classify_up_to_iso(graphs: Sequence[KGraph]) -> list[IsoClass]:
    """Partition ``graphs`` into isomorphism classes; each representative is
    the first member in input order."""
    reps: list[tuple[KGraph, list[int]]] = []
    for i, g in enumerate(graphs):
        for rep, members in reps:
            if find_isomorphism(rep, g) is not None:
                members.append(i)
                break
        else:
            reps.append((g, [i]))
    return [IsoClass(rep, tuple(m)) for rep, m in reps]
