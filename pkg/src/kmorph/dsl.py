"""Line-oriented text format and DOT export.

One declaration per line; ``#`` starts a comment.  A header line opens a
section and the following body lines belong to it::

    kgraph NAME rank K
    vertex V
    edge E color I source V range W
    square B A = A2 B2

    morph NAME over LAMBDA GAMMA
    element X range V source W
    swap X GEDGE = LEDGE X2

    cover NAME from GAMMA to LAMBDA
    mapv V = W
    mape E = F

    group NAME
    mul A B = C

    labeling NAME
    label X = Y

    system NAME base GNAME
    fiber V KNAME
    assign E MNAME
    theta B A : (x1 x2) = (x3 x4)

Sections may appear in any order and may refer to sections further down.
:func:`serialize` writes a canonical form (sorted names and ids), so
``parse(serialize(doc)) == doc``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Mapping

from .assembly import BundledGraph, GammaSystem, GroupTable, build_linking, make_group
from .errors import DSLSyntaxError, DuplicateId, UnknownReference
from .kgraph import KGraph, validate_rules
from .morph import Covering, KMorph, validate_morph
from .skeleton import Edge, Skeleton


@dataclass(frozen=True)
class GraphDecl:
    name: str
    rank: int
    vertices: tuple[str, ...] = ()
    edges: tuple[Edge, ...] = ()
    squares: tuple[tuple[str, str, str, str], ...] = ()


@dataclass(frozen=True)
class MorphDecl:
    name: str
    lam: str
    gam: str
    elements: tuple[tuple[str, str, str], ...] = ()
    swaps: tuple[tuple[str, str, str, str], ...] = ()


@dataclass(frozen=True)
class CoverDecl:
    name: str
    source: str
    target: str
    vmap: tuple[tuple[str, str], ...] = ()
    emap: tuple[tuple[str, str], ...] = ()


@dataclass(frozen=True)
class GroupDecl:
    name: str
    products: tuple[tuple[str, str, str], ...] = ()


@dataclass(frozen=True)
class LabelingDecl:
    name: str
    labels: tuple[tuple[str, str], ...] = ()


@dataclass(frozen=True)
class SystemDecl:
    name: str
    base: str
    fibers: tuple[tuple[str, str], ...] = ()
    assigns: tuple[tuple[str, str], ...] = ()
    thetas: tuple[tuple[str, str, str, str, str, str], ...] = ()


_KINDS = ("graphs", "covers", "morphs", "groups", "labelings", "systems")


@dataclass
class Document:
    graphs: dict[str, GraphDecl] = field(default_factory=dict)
    covers: dict[str, CoverDecl] = field(default_factory=dict)
    morphs: dict[str, MorphDecl] = field(default_factory=dict)
    groups: dict[str, GroupDecl] = field(default_factory=dict)
    labelings: dict[str, LabelingDecl] = field(default_factory=dict)
    systems: dict[str, SystemDecl] = field(default_factory=dict)
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def names(self) -> set[str]:
        return {n for kind in _KINDS for n in getattr(self, kind)}

    # -- building objects --------------------------------------------------

    def kgraph(self, name: str, validate: bool = True) -> KGraph:
        key = ("graph", name, validate)
        if key not in self._cache:
            d = self.graphs[name]
            sk = Skeleton(d.rank, d.vertices, d.edges)
            rules = {(b, a): (a2, b2) for b, a, a2, b2 in d.squares}
            self._cache[key] = (validate_rules(sk, rules, name=name) if validate
                                else KGraph(sk, rules, name=name))
        return self._cache[key]

    def morph(self, name: str, validate: bool = True) -> KMorph:
        key = ("morph", name, validate)
        if key not in self._cache:
            d = self.morphs[name]
            X = KMorph(self.kgraph(d.lam), self.kgraph(d.gam), [x for x, _, _ in d.elements],
                       {x: v for x, v, _ in d.elements}, {x: w for x, _, w in d.elements},
                       {(x, e): (f, x2) for x, e, f, x2 in d.swaps}, name=name)
            self._cache[key] = validate_morph(X) if validate else X
        return self._cache[key]

    def cover(self, name: str) -> Covering:
        d = self.covers[name]
        return Covering(self.kgraph(d.source), self.kgraph(d.target), dict(d.vmap),
                        dict(d.emap), name=name)

    def group(self, name: str) -> GroupTable:
        d = self.groups[name]
        elements = sorted({z for a, b, c in d.products for z in (a, b, c)})
        return make_group(elements, {(a, b): c for a, b, c in d.products})

    def labeling(self, name: str) -> dict[str, str]:
        return dict(self.labelings[name].labels)

    def system(self, name: str) -> GammaSystem:
        d = self.systems[name]
        base = self.kgraph(d.base)
        fibers = {v: self.kgraph(g) for v, g in d.fibers}
        morphs = {e: self.morph(m) for e, m in d.assigns}
        theta: dict = {}
        for B, A, x1, x2, x3, x4 in d.thetas:
            theta.setdefault((B, A), {})[(x1, x2)] = (x3, x4)
        for key in base.rules:
            theta.setdefault(key, {})
        return GammaSystem(base, fibers, morphs, theta)

    # -- adding objects ----------------------------------------------------

    def _fresh(self, stem: str) -> str:
        if stem not in self.names():
            return stem
        i = 2
        while f"{stem}{i}" in self.names():
            i += 1
        return f"{stem}{i}"

    def add_kgraph(self, g: KGraph, name: str | None = None) -> str:
        """Add ``g`` and return its name; an identical graph is reused."""
        decl_body = (g.rank, g.vertices, g.edges,
                     tuple((b, a, a2, b2) for (b, a), (a2, b2) in g.rules.items()))
        for n, d in self.graphs.items():
            if (d.rank, d.vertices, d.edges, d.squares) == decl_body and (name is None or n == name):
                return n
        name = name or self._fresh(g.name or "G")
        if name in self.names():
            raise DuplicateId(f"name {name} already used", witness=name)
        self.graphs[name] = GraphDecl(name, *decl_body)
        return name

    def add_morph(self, X: KMorph, name: str | None = None) -> str:
        lam = self.add_kgraph(X.lam)
        gam = self.add_kgraph(X.gam)
        name = name or self._fresh(X.name or "X")
        if name in self.names():
            raise DuplicateId(f"name {name} already used", witness=name)
        self.morphs[name] = MorphDecl(
            name, lam, gam, tuple((x, X.r[x], X.s[x]) for x in X.elements),
            tuple((x, e, f, x2) for (x, e), (f, x2) in X.table.items()))
        return name

    def add_cover(self, p: Covering, name: str | None = None) -> str:
        src = self.add_kgraph(p.source)
        tgt = self.add_kgraph(p.target)
        name = name or self._fresh(p.name or "p")
        self.covers[name] = CoverDecl(name, src, tgt, tuple(sorted(p.vmap.items())),
                                      tuple(sorted(p.emap.items())))
        return name

    def add_group(self, G: GroupTable, name: str = "G") -> str:
        name = self._fresh(name)
        self.groups[name] = GroupDecl(name, tuple(sorted((a, b, c) for (a, b), c in G.table.items())))
        return name

    def add_labeling(self, labels: Mapping[str, str], name: str = "labels") -> str:
        name = self._fresh(name)
        self.labelings[name] = LabelingDecl(name, tuple(sorted(labels.items())))
        return name

    def add_system(self, sys: GammaSystem, name: str = "S") -> str:
        name = self._fresh(name)
        base = self.add_kgraph(sys.base)
        fibers = tuple((v, self.add_kgraph(g)) for v, g in sorted(sys.fibers.items()))
        assigns = tuple((e, self.add_morph(m, self._fresh(f"{name}.{e}")))
                        for e, m in sorted(sys.morphs.items()))
        thetas = tuple(sorted((B, A, x1, x2, x3, x4) for (B, A), t in sys.theta.items()
                              for (x1, x2), (x3, x4) in t.items()))
        self.systems[name] = SystemDecl(name, base, fibers, assigns, thetas)
        return name

    def add_bundle(self, b: BundledGraph, name: str | None = None) -> str:
        """Add the bundle graph, its base and its bundle map (as a labeling
        named ``NAME.labels``)."""
        gname = self.add_kgraph(b.graph, name)
        self.add_kgraph(b.base)
        self.add_labeling(b.labels, f"{gname}.labels")
        return gname


# -- parsing ---------------------------------------------------------------

_THETA = re.compile(r"^theta (\S+) (\S+) : \((\S+) (\S+)\) = \((\S+) (\S+)\)$")

_BODY = {
    "vertex": "graph", "edge": "graph", "square": "graph",
    "element": "morph", "swap": "morph",
    "mapv": "cover", "mape": "cover",
    "mul": "group", "label": "labeling",
    "fiber": "system", "assign": "system", "theta": "system",
}


class _Section:
    def __init__(self, kind, line, header):
        self.kind = kind
        self.line = line
        self.header = header
        self.body: list[tuple[int, str, list[str]]] = []


def _int(tok: str, line: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise DSLSyntaxError(f"expected an integer, got {tok!r}", line) from None


def _expect(toks, pattern, line):
    """Check literal tokens; ``None`` in the pattern matches any id."""
    if len(toks) != len(pattern) or any(p is not None and t != p for t, p in zip(toks, pattern)):
        shape = " ".join(p if p is not None else "ID" for p in pattern)
        raise DSLSyntaxError(f"expected '{shape}'", line)


def parse(text: str) -> Document:
    sections: list[_Section] = []
    current: _Section | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        kw = toks[0]
        if kw == "kgraph":
            _expect(toks, ["kgraph", None, "rank", None], lineno)
            current = _Section("graph", lineno, toks)
        elif kw == "morph":
            _expect(toks, ["morph", None, "over", None, None], lineno)
            current = _Section("morph", lineno, toks)
        elif kw == "cover":
            _expect(toks, ["cover", None, "from", None, "to", None], lineno)
            current = _Section("cover", lineno, toks)
        elif kw == "group":
            _expect(toks, ["group", None], lineno)
            current = _Section("group", lineno, toks)
        elif kw == "labeling":
            _expect(toks, ["labeling", None], lineno)
            current = _Section("labeling", lineno, toks)
        elif kw == "system":
            _expect(toks, ["system", None, "base", None], lineno)
            current = _Section("system", lineno, toks)
        elif kw in _BODY:
            if current is None or current.kind != _BODY[kw]:
                raise DSLSyntaxError(f"'{kw}' outside a {_BODY[kw]} section", lineno)
            current.body.append((lineno, line, toks))
            continue
        else:
            raise DSLSyntaxError(f"unknown keyword {kw!r}", lineno)
        sections.append(current)

    doc = Document()
    for sec in sections:
        name = sec.header[1]
        if name in doc.names():
            raise DuplicateId(f"name {name} declared twice", sec.line, name)
        builder = {"graph": _graph_section, "morph": _morph_section, "cover": _cover_section,
                   "group": _group_section, "labeling": _labeling_section,
                   "system": _system_section}[sec.kind]
        decl = builder(sec)
        getattr(doc, sec.kind + "s" if sec.kind != "graph" else "graphs")[name] = decl
    _resolve(doc, {sec.header[1]: sec for sec in sections})
    return doc


def _graph_section(sec: _Section) -> GraphDecl:
    rank = _int(sec.header[3], sec.line)
    vertices, edges, squares = [], [], []
    for line, _, toks in sec.body:
        if toks[0] == "vertex":
            _expect(toks, ["vertex", None], line)
            vertices.append(toks[1])
        elif toks[0] == "edge":
            _expect(toks, ["edge", None, "color", None, "source", None, "range", None], line)
            edges.append(Edge(toks[1], _int(toks[3], line), toks[5], toks[7]))
        else:
            _expect(toks, ["square", None, None, "=", None, None], line)
            squares.append((toks[1], toks[2], toks[4], toks[5]))
    _no_dups(vertices + [e.id for e in edges], sec)
    _no_dups([(b, a) for b, a, _, _ in squares], sec)
    return GraphDecl(sec.header[1], rank, tuple(sorted(vertices)),
                     tuple(sorted(edges, key=lambda e: e.id)), tuple(sorted(squares)))


def _morph_section(sec: _Section) -> MorphDecl:
    elements, swaps = [], []
    for line, _, toks in sec.body:
        if toks[0] == "element":
            _expect(toks, ["element", None, "range", None, "source", None], line)
            elements.append((toks[1], toks[3], toks[5]))
        else:
            _expect(toks, ["swap", None, None, "=", None, None], line)
            swaps.append((toks[1], toks[2], toks[4], toks[5]))
    _no_dups([x for x, _, _ in elements], sec)
    _no_dups([(x, e) for x, e, _, _ in swaps], sec)
    return MorphDecl(sec.header[1], sec.header[3], sec.header[4],
                     tuple(sorted(elements)), tuple(sorted(swaps)))


def _cover_section(sec: _Section) -> CoverDecl:
    vmap, emap = [], []
    for line, _, toks in sec.body:
        _expect(toks, [toks[0], None, "=", None], line)
        (vmap if toks[0] == "mapv" else emap).append((toks[1], toks[3]))
    _no_dups([v for v, _ in vmap] + [e for e, _ in emap], sec)
    return CoverDecl(sec.header[1], sec.header[3], sec.header[5],
                     tuple(sorted(vmap)), tuple(sorted(emap)))


def _group_section(sec: _Section) -> GroupDecl:
    products = []
    for line, _, toks in sec.body:
        _expect(toks, ["mul", None, None, "=", None], line)
        products.append((toks[1], toks[2], toks[4]))
    _no_dups([(a, b) for a, b, _ in products], sec)
    return GroupDecl(sec.header[1], tuple(sorted(products)))


def _labeling_section(sec: _Section) -> LabelingDecl:
    labels = []
    for line, _, toks in sec.body:
        _expect(toks, ["label", None, "=", None], line)
        labels.append((toks[1], toks[3]))
    _no_dups([x for x, _ in labels], sec)
    return LabelingDecl(sec.header[1], tuple(sorted(labels)))


def _system_section(sec: _Section) -> SystemDecl:
    fibers, assigns, thetas = [], [], []
    for line, text, toks in sec.body:
        if toks[0] == "fiber":
            _expect(toks, ["fiber", None, None], line)
            fibers.append((toks[1], toks[2]))
        elif toks[0] == "assign":
            _expect(toks, ["assign", None, None], line)
            assigns.append((toks[1], toks[2]))
        else:
            m = _THETA.match(" ".join(toks))
            if not m:
                raise DSLSyntaxError("expected 'theta B A : (x1 x2) = (x3 x4)'", line)
            thetas.append(m.groups())
    _no_dups([v for v, _ in fibers], sec)
    _no_dups([e for e, _ in assigns], sec)
    _no_dups([t[:4] for t in thetas], sec)
    return SystemDecl(sec.header[1], sec.header[3], tuple(sorted(fibers)),
                      tuple(sorted(assigns)), tuple(sorted(thetas)))


def _no_dups(items, sec: _Section) -> None:
    seen = set()
    for it in items:
        if it in seen:
            raise DuplicateId(f"{it} declared twice in {sec.header[1]}", sec.line, it)
        seen.add(it)


def _resolve(doc: Document, sections: Mapping[str, _Section]) -> None:
    """Check every cross reference; errors carry the line of the use."""

    def lines(name, kw):
        return [(ln, toks) for ln, _, toks in sections[name].body if toks[0] == kw]

    def need(ok, ident, line):
        if not ok:
            raise UnknownReference(f"unknown reference {ident!r}", line, ident)

    for name, d in doc.graphs.items():
        vs = set(d.vertices)
        es = {e.id for e in d.edges}
        for line, toks in lines(name, "edge"):
            need(toks[5] in vs, toks[5], line)
            need(toks[7] in vs, toks[7], line)
        for line, toks in lines(name, "square"):
            for t in (toks[1], toks[2], toks[4], toks[5]):
                need(t in es, t, line)
    for name, d in doc.morphs.items():
        hdr = sections[name].line
        need(d.lam in doc.graphs, d.lam, hdr)
        need(d.gam in doc.graphs, d.gam, hdr)
        lam, gam = doc.graphs[d.lam], doc.graphs[d.gam]
        xs = {x for x, _, _ in d.elements}
        for line, toks in lines(name, "element"):
            need(toks[3] in lam.vertices, toks[3], line)
            need(toks[5] in gam.vertices, toks[5], line)
        les, ges = {e.id for e in lam.edges}, {e.id for e in gam.edges}
        for line, toks in lines(name, "swap"):
            need(toks[1] in xs, toks[1], line)
            need(toks[2] in ges, toks[2], line)
            need(toks[4] in les, toks[4], line)
            need(toks[5] in xs, toks[5], line)
    for name, d in doc.covers.items():
        hdr = sections[name].line
        need(d.source in doc.graphs, d.source, hdr)
        need(d.target in doc.graphs, d.target, hdr)
        src, tgt = doc.graphs[d.source], doc.graphs[d.target]
        for line, toks in lines(name, "mapv"):
            need(toks[1] in src.vertices, toks[1], line)
            need(toks[3] in tgt.vertices, toks[3], line)
        for line, toks in lines(name, "mape"):
            need(toks[1] in {e.id for e in src.edges}, toks[1], line)
            need(toks[3] in {e.id for e in tgt.edges}, toks[3], line)
    for name, d in doc.systems.items():
        hdr = sections[name].line
        need(d.base in doc.graphs, d.base, hdr)
        base = doc.graphs[d.base]
        bes = {e.id for e in base.edges}
        for line, toks in lines(name, "fiber"):
            need(toks[1] in base.vertices, toks[1], line)
            need(toks[2] in doc.graphs, toks[2], line)
        for line, toks in lines(name, "assign"):
            need(toks[1] in bes, toks[1], line)
            need(toks[2] in doc.morphs, toks[2], line)
        for line, toks in lines(name, "theta"):
            need(toks[1] in bes, toks[1], line)
            need(toks[2] in bes, toks[2], line)


def parse_file(path) -> Document:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


# -- serialization ---------------------------------------------------------

_BAD_ID = re.compile(r"[\s#]")


def _check_ids(*ids: str) -> None:
    for i in ids:
        if not i or _BAD_ID.search(i):
            raise ValueError(f"id {i!r} cannot be written (empty, whitespace or '#')")


def serialize(doc: Document) -> str:
    blocks: list[list[str]] = []
    for n in sorted(doc.graphs):
        d = doc.graphs[n]
        _check_ids(n, *d.vertices, *(e.id for e in d.edges))
        out = [f"kgraph {n} rank {d.rank}"]
        out += [f"vertex {v}" for v in sorted(d.vertices)]
        out += [f"edge {e.id} color {e.color} source {e.source} range {e.range}"
                for e in sorted(d.edges, key=lambda e: e.id)]
        out += [f"square {b} {a} = {a2} {b2}" for b, a, a2, b2 in sorted(d.squares)]
        blocks.append(out)
    for n in sorted(doc.covers):
        d = doc.covers[n]
        out = [f"cover {n} from {d.source} to {d.target}"]
        out += [f"mapv {v} = {w}" for v, w in sorted(d.vmap)]
        out += [f"mape {e} = {f}" for e, f in sorted(d.emap)]
        blocks.append(out)
    for n in sorted(doc.morphs):
        d = doc.morphs[n]
        _check_ids(n, *(x for x, _, _ in d.elements))
        out = [f"morph {n} over {d.lam} {d.gam}"]
        out += [f"element {x} range {v} source {w}" for x, v, w in sorted(d.elements)]
        out += [f"swap {x} {e} = {f} {x2}" for x, e, f, x2 in sorted(d.swaps)]
        blocks.append(out)
    for n in sorted(doc.groups):
        out = [f"group {n}"]
        out += [f"mul {a} {b} = {c}" for a, b, c in sorted(doc.groups[n].products)]
        blocks.append(out)
    for n in sorted(doc.labelings):
        d = doc.labelings[n]
        _check_ids(n, *(z for pair in d.labels for z in pair))
        out = [f"labeling {n}"]
        out += [f"label {x} = {y}" for x, y in sorted(d.labels)]
        blocks.append(out)
    for n in sorted(doc.systems):
        d = doc.systems[n]
        out = [f"system {n} base {d.base}"]
        out += [f"fiber {v} {g}" for v, g in sorted(d.fibers)]
        out += [f"assign {e} {m}" for e, m in sorted(d.assigns)]
        out += [f"theta {B} {A} : ({x1} {x2}) = ({x3} {x4})"
                for B, A, x1, x2, x3, x4 in sorted(d.thetas)]
        blocks.append(out)
    return "\n\n".join("\n".join(b) for b in blocks) + ("\n" if blocks else "")


def dumps(*objects, names: Mapping[int, str] | None = None) -> str:
    """Serialize k-graphs, morphs, coverings, systems and bundles together."""
    doc = Document()
    for i, obj in enumerate(objects):
        name = (names or {}).get(i)
        if isinstance(obj, KGraph):
            doc.add_kgraph(obj, name)
        elif isinstance(obj, KMorph):
            doc.add_morph(obj, name)
        elif isinstance(obj, Covering):
            doc.add_cover(obj, name)
        elif isinstance(obj, GammaSystem):
            doc.add_system(obj, name or "S")
        elif isinstance(obj, BundledGraph):
            doc.add_bundle(obj, name)
        elif isinstance(obj, GroupTable):
            doc.add_group(obj, name or "G")
        else:
            raise TypeError(f"cannot serialize {type(obj).__name__}")
    return serialize(doc)


# -- DOT export ------------------------------------------------------------

_STYLES = {1: "solid", 2: "dashed", 3: "dotted"}


def _q(s: str) -> str:
    return json.dumps(s, ensure_ascii=False)


def edge_style(color: int) -> str:
    return _STYLES.get(color, "bold")


def _edge_line(e: Edge) -> str:
    label = e.id if e.color in _STYLES else f"{e.id} [c{e.color}]"
    return f"  {_q(e.source)} -> {_q(e.range)} [style={edge_style(e.color)}, label={_q(label)}];"


def export_dot(obj, name: str = "G", clusters: Mapping[str, str] | None = None) -> str:
    """DOT text for a k-graph, morph or bundle.

    Edges are drawn from source to range.  Colors 1, 2, 3 are solid, dashed
    and dotted; higher colors are bold and carry the color in the label.
    Bundles group fiber vertices into one cluster per base vertex (pass
    ``clusters`` to do the same for a plain graph); a morph is drawn as its
    linking graph with Λ and Γ clusters.
    """
    if isinstance(obj, KMorph):
        return export_dot(build_linking(obj), name)
    if isinstance(obj, BundledGraph):
        g = obj.graph
        clusters = {v: obj.labels[v] for v in g.vertices}
    else:
        g = obj
    lines = [f"digraph {_q(name)} {{"]
    if clusters:
        for i, c in enumerate(sorted(set(clusters.values()))):
            lines.append(f"  subgraph cluster_{i} {{")
            lines.append(f"    label={_q(c)};")
            lines += [f"    {_q(u)};" for u in g.vertices if clusters[u] == c]
            lines.append("  }")
    else:
        lines += [f"  {_q(v)};" for v in g.vertices]
    lines += [_edge_line(e) for e in g.edges]
    lines.append("}")
    return "\n".join(lines) + "\n"
