"""Command-line interface.

Reports go to stdout as ``key: value`` lines; human-readable notes go to
stderr.  Exit codes: 0 success, 2 a check came out false (the witness is
printed), 1 usage, IO or parse errors.
"""

from __future__ import annotations

import argparse
import re
import sys
from dataclasses import dataclass, field
from typing import Sequence

from . import assembly, dsl, generators, kgraph, morph, oracle
from .errors import CubeFailure, DSLError, KMorphError, ValidationError


@dataclass
class CommandResult:
    code: int = 0
    out: list[str] = field(default_factory=list)
    err: list[str] = field(default_factory=list)

    def put(self, key: str, value) -> None:
        self.out.append(f"{key}: {value}")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def report_format(result: CommandResult) -> str:
    return "".join(line + "\n" for line in result.out)


def _words(w) -> str:
    if isinstance(w, (tuple, list)):
        return " ".join(_words(x) for x in w)
    return str(w)


def _pick(items: dict, name: str | None, kind: str) -> str:
    if name is not None:
        if name not in items:
            raise UsageError(f"no {kind} named {name!r}")
        return name
    if len(items) == 1:
        return next(iter(items))
    if not items:
        raise UsageError(f"file contains no {kind}")
    raise UsageError(f"file contains several {kind}s ({', '.join(sorted(items))}); use --name")


def _load(path: str) -> dsl.Document:
    return dsl.parse_file(path)


def _write(path: str, text: str, res: CommandResult) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    res.err.append(f"wrote {path}")


def _path_arg(g: kgraph.KGraph, text: str) -> kgraph.Path:
    toks = [t for t in re.split(r"[\s,]+", text.strip()) if t]
    if len(toks) == 1 and g.skeleton.has_vertex(toks[0]):
        return g.vertex_path(toks[0])
    try:
        return g.path(toks)
    except KeyError as exc:
        raise UsageError(f"unknown edge {exc.args[0]!r}") from None


def _degree_arg(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(","))
    except ValueError:
        raise UsageError(f"bad degree {text!r}") from None


def _fail(res: CommandResult, exc: KMorphError) -> None:
    res.code = 2
    res.put("error", type(exc).__name__)
    if exc.witness is not None:
        res.put("witness", _words(exc.witness))
    if isinstance(exc, CubeFailure):
        res.put("chainA", " -> ".join(_words(w) for w in exc.chain_a))
        res.put("chainB", " -> ".join(_words(w) for w in exc.chain_b))
        res.put("failures", len(exc.failures))
    res.err.append(str(exc))


def _print_path(res: CommandResult, key: str, p: kgraph.Path) -> None:
    res.put(key, str(p))


# -- commands --------------------------------------------------------------

def cmd_validate(a, res):
    doc = _load(a.file)
    names = [_pick(doc.graphs, a.name, "kgraph")] if a.name else sorted(doc.graphs)
    for n in names:
        res.put("graph", n)
        try:
            doc.kgraph(n)
            res.put("valid", "true")
        except ValidationError as exc:
            res.put("valid", "false")
            _fail(res, exc)


def cmd_paths(a, res):
    doc = _load(a.file)
    g = doc.kgraph(_pick(doc.graphs, a.name, "kgraph"))
    ps = kgraph.paths_of_degree(g, _degree_arg(a.degree), range=a.range, source=a.source)
    res.put("count", len(ps))
    for p in ps:
        _print_path(res, "path", p)


def cmd_compose(a, res):
    doc = _load(a.file)
    g = doc.kgraph(_pick(doc.graphs, a.name, "kgraph"))
    p = kgraph.compose(g, _path_arg(g, a.p), _path_arg(g, a.q))
    _print_path(res, "path", p)
    res.put("range", p.range)
    res.put("source", p.source)
    res.put("degree", ",".join(map(str, p.degree)))


def cmd_factorize(a, res):
    doc = _load(a.file)
    g = doc.kgraph(_pick(doc.graphs, a.name, "kgraph"))
    mu, nu = kgraph.factorize(g, _path_arg(g, a.p), _degree_arg(a.m))
    _print_path(res, "mu", mu)
    _print_path(res, "nu", nu)


def cmd_morph_validate(a, res):
    doc = _load(a.file)
    n = _pick(doc.morphs, a.name, "morph")
    res.put("morph", n)
    try:
        X = doc.morph(n)
        res.put("valid", "true")
        res.put("elements", len(X))
    except ValidationError as exc:
        res.put("valid", "false")
        _fail(res, exc)


def cmd_morph_product(a, res):
    da, db = _load(a.a), _load(a.b)
    X1 = da.morph(_pick(da.morphs, a.a_name, "morph"))
    X2 = db.morph(_pick(db.morphs, a.b_name, "morph"))
    P = morph.validate_morph(morph.fibred_product(X1, X2))
    res.put("elements", len(P))
    _write(a.output, dsl.dumps(P, names={0: "P"}), res)


def _print_map(res, key, mapping):
    res.put(key, " ".join(f"{k}={v}" for k, v in sorted(mapping.items())))


def cmd_morph_iso(a, res):
    da, db = _load(a.a), _load(a.b)
    X = da.morph(_pick(da.morphs, a.a_name, "morph"))
    Y = db.morph(_pick(db.morphs, a.b_name, "morph"))
    if X.lam != Y.lam or X.gam != Y.gam:
        res.put("isomorphic", "false")
        res.put("reason", "different graphs")
        res.code = 2
        return
    iso = morph.find_morph_isomorphism(X, Y)
    res.put("isomorphic", "true" if iso else "false")
    if iso:
        _print_map(res, "map", iso.map)
    else:
        res.code = 2


def cmd_morph_invertible(a, res):
    doc = _load(a.file)
    X = doc.morph(_pick(doc.morphs, a.name, "morph"))
    alpha = morph.is_invertible(X)
    res.put("invertible", "true" if alpha else "false")
    if alpha:
        _print_map(res, "vmap", alpha.vmap)
        _print_map(res, "emap", alpha.emap)
    else:
        res.code = 2


def cmd_cover_check(a, res):
    doc = _load(a.file)
    p = doc.cover(_pick(doc.covers, a.name, "cover"))
    ok, witness = morph.validate_covering(p)
    res.put("covering", "true" if ok else "false")
    if not ok:
        res.put("witness", _words(witness))
        res.code = 2


def _build(res, fn, *args):
    try:
        return fn(*args)
    except ValidationError as exc:
        _fail(res, exc)
        return None


def cmd_linking(a, res):
    doc = _load(a.morph)
    X = doc.morph(_pick(doc.morphs, a.name, "morph"))
    b = _build(res, assembly.build_linking, X)
    if b:
        _bundle_report(res, b)
        _write(a.output, dsl.dumps(b, names={0: "Linking"}), res)


def _bundle_report(res, b):
    res.put("vertices", len(b.graph.vertices))
    res.put("edges", len(b.graph.edges))
    res.put("squares", len(b.graph.rules))
    res.put("valid", "true")


def cmd_skew_endo(a, res):
    dg, dm = _load(a.graph), _load(a.morph)
    g = dg.kgraph(_pick(dg.graphs, a.graph_name, "kgraph"))
    X = dm.morph(_pick(dm.morphs, a.morph_name, "morph"))
    b = _build(res, assembly.endo_skew, g, X)
    if b:
        _bundle_report(res, b)
        _write(a.output, dsl.dumps(b, names={0: "Skew"}), res)


def cmd_skew_group(a, res):
    dg, dG, dl = _load(a.graph), _load(a.group), _load(a.labels)
    g = dg.kgraph(_pick(dg.graphs, a.graph_name, "kgraph"))
    G = dG.group(_pick(dG.groups, None, "group"))
    c = dl.labeling(_pick(dl.labelings, None, "labeling"))
    b = _build(res, assembly.group_skew, g, G, c)
    if b:
        _bundle_report(res, b)
        _write(a.output, dsl.dumps(b, names={0: "Skew"}), res)


def cmd_bundle(a, res):
    doc = _load(a.system)
    sys_ = doc.system(_pick(doc.systems, a.name, "system"))
    b = _build(res, assembly.build_bundle, sys_)
    if b:
        _bundle_report(res, b)
        _write(a.output, dsl.dumps(b, names={0: "Bundle"}), res)


def cmd_extract_system(a, res):
    dg, db = _load(a.graph), _load(a.base)
    gname = _pick(dg.graphs, a.name, "kgraph")
    sigma = dg.kgraph(gname)
    base = db.kgraph(_pick(db.graphs, a.base_name, "kgraph"))
    k, l = _degree_arg(a.split)
    if f"{gname}.labels" in dg.labelings or a.labels or dg.labelings:
        labels = dg.labeling(f"{gname}.labels" if f"{gname}.labels" in dg.labelings
                             else _pick(dg.labelings, a.labels, "labeling"))
    else:
        labels = assembly.degree_labels(sigma, base, k)
    if k + l != sigma.rank or l != base.rank:
        raise UsageError(f"split {k},{l} does not match ranks {sigma.rank} and {base.rank}")
    try:
        sys_ = assembly.extract_system(sigma, base, labels, k)
    except ValidationError as exc:
        _fail(res, exc)
        return
    res.put("fibers", len(sys_.fibers))
    res.put("morphs", len(sys_.morphs))
    for e, X in sorted(sys_.morphs.items()):
        res.put(f"morph {e}", len(X))
    _write(a.output, dsl.dumps(sys_), res)


def cmd_iso(a, res):
    d1, d2 = _load(a.g1), _load(a.g2)
    g1 = d1.kgraph(_pick(d1.graphs, a.name1, "kgraph"))
    g2 = d2.kgraph(_pick(d2.graphs, a.name2, "kgraph"))
    iso = kgraph.find_isomorphism(g1, g2)
    res.put("isomorphic", "true" if iso else "false")
    if iso:
        _print_map(res, "vmap", iso.vmap)
        _print_map(res, "emap", iso.emap)
    else:
        res.code = 2


def cmd_regularity(a, res):
    doc = _load(a.morph)
    X = doc.morph(_pick(doc.morphs, a.name, "morph"))
    ok, failures = morph.regularity_check(X)
    res.put("regular", "true" if ok else "false")
    for clause, witness in failures:
        res.put("failure", f"{clause} {_words(witness)}")
    if not ok:
        res.code = 2


def cmd_bimodule(a, res):
    doc = _load(a.morph)
    X = doc.morph(_pick(doc.morphs, a.name, "morph"))
    try:
        b = morph.bimodule_presentation(X)
    except ValidationError as exc:
        _fail(res, exc)
        return
    res.put("rows", " ".join(b.rows))
    res.put("cols", " ".join(b.cols))
    for v, row in zip(b.rows, b.matrix):
        res.put(f"row {v}", " ".join(str(int(n)) for n in row))
    for (f, x), (x2, gamma) in sorted(b.action.items()):
        res.out.append(f"act {f} {x} -> {x2} {gamma}")


def cmd_export_dot(a, res):
    doc = _load(a.file)
    if a.morph:
        X = doc.morph(a.morph)
        text = dsl.export_dot(X, a.morph)
        res.put("nodes", len(X.lam.vertices) + len(X.gam.vertices))
    else:
        gname = _pick(doc.graphs, a.name, "kgraph")
        g = doc.kgraph(gname, validate=False)
        labels = doc.labelings.get(f"{gname}.labels")
        clusters = None
        if labels is not None:
            lab = dict(labels.labels)
            clusters = {v: lab[v] for v in g.vertices}
        text = dsl.export_dot(g, gname, clusters)
        res.put("nodes", len(g.vertices))
        res.put("styles", " ".join(sorted({dsl.edge_style(e.color) for e in g.edges})))
    _write(a.output, text, res)


def cmd_oracle_rules(a, res):
    doc = _load(a.skeleton)
    g = doc.kgraph(_pick(doc.graphs, a.name, "kgraph"), validate=False)
    res.put("candidates", oracle.candidate_rule_sets(g.skeleton))
    graphs = oracle.enumerate_rule_sets(g.skeleton)
    res.put("valid", len(graphs))


def cmd_oracle_classify(a, res):
    doc = _load(a.skeleton)
    g = doc.kgraph(_pick(doc.graphs, a.name, "kgraph"), validate=False)
    classes = oracle.classify_up_to_iso(oracle.enumerate_rule_sets(g.skeleton))
    res.put("classes", len(classes))
    res.put("sizes", " ".join(str(c.size) for c in classes))


def cmd_oracle_category(a, res):
    doc = _load(a.file)
    g = doc.kgraph(_pick(doc.graphs, a.name, "kgraph"), validate=False)
    cat = oracle.naive_category(g.skeleton, g.rules, a.length)
    res.put("classes", len(cat.classes))
    res.put("confluent", str(cat.confluent).lower())
    res.put("unique_factorization", str(cat.unique_factorization).lower())
    if cat.witness is not None:
        res.put("witness", _words(cat.witness))
    for d, n in cat.counts.items():
        res.put(f"degree {','.join(map(str, d))}", n)


def cmd_sample(a, res):
    rng = generators.seeded_rng(a.seed)
    if a.kind == "graph":
        obj = generators.random_kgraph(rng, a.rank if a.rank is not None else 2)
    elif a.kind == "morph":
        obj = generators.random_morph_pair(rng, a.rank)
    else:
        obj = generators.random_one_graph_system(rng, a.rank)
    text = dsl.dumps(obj)
    if a.output:
        _write(a.output, text, res)
    else:
        res.out.extend(text.rstrip("\n").split("\n"))


# -- argument parsing ------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="kmorph", description="Toolkit for finite k-graphs and k-morphs.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def cmd(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(fn=fn)
        return sp

    sp = cmd("validate", cmd_validate, "validate the k-graphs in a file")
    sp.add_argument("file")
    sp.add_argument("--name")
    sp = cmd("paths", cmd_paths, "list paths of a degree")
    sp.add_argument("file")
    sp.add_argument("--degree", required=True)
    sp.add_argument("--range")
    sp.add_argument("--source")
    sp.add_argument("--name")
    sp = cmd("compose", cmd_compose, "compose two paths (edge ids or a vertex)")
    sp.add_argument("file")
    sp.add_argument("p")
    sp.add_argument("q")
    sp.add_argument("--name")
    sp = cmd("factorize", cmd_factorize, "split a path at a degree")
    sp.add_argument("file")
    sp.add_argument("p")
    sp.add_argument("m")
    sp.add_argument("--name")

    mp = sub.add_parser("morph", help="morph commands")
    msub = mp.add_subparsers(dest="morph_command", required=True, parser_class=_Parser)
    sp = msub.add_parser("validate")
    sp.set_defaults(fn=cmd_morph_validate)
    sp.add_argument("file")
    sp.add_argument("--name")
    sp = msub.add_parser("product")
    sp.set_defaults(fn=cmd_morph_product)
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("-o", "--output", required=True)
    sp.add_argument("--a-name")
    sp.add_argument("--b-name")
    sp = msub.add_parser("iso")
    sp.set_defaults(fn=cmd_morph_iso)
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("--a-name")
    sp.add_argument("--b-name")
    sp = msub.add_parser("invertible")
    sp.set_defaults(fn=cmd_morph_invertible)
    sp.add_argument("file")
    sp.add_argument("--name")

    cp = sub.add_parser("cover", help="covering commands")
    csub = cp.add_subparsers(dest="cover_command", required=True, parser_class=_Parser)
    sp = csub.add_parser("check")
    sp.set_defaults(fn=cmd_cover_check)
    sp.add_argument("file")
    sp.add_argument("--name")

    sp = cmd("linking", cmd_linking, "build the linking graph of a morph")
    sp.add_argument("morph")
    sp.add_argument("-o", "--output", required=True)
    sp.add_argument("--name")
    sp = cmd("skew-endo", cmd_skew_endo, "skew graph of an endomorph")
    sp.add_argument("graph")
    sp.add_argument("morph")
    sp.add_argument("-o", "--output", required=True)
    sp.add_argument("--graph-name")
    sp.add_argument("--morph-name")
    sp = cmd("skew-group", cmd_skew_group, "skew product by a group labeling")
    sp.add_argument("graph")
    sp.add_argument("group")
    sp.add_argument("labels")
    sp.add_argument("-o", "--output", required=True)
    sp.add_argument("--graph-name")
    sp = cmd("bundle", cmd_bundle, "assemble a system into one graph")
    sp.add_argument("system")
    sp.add_argument("-o", "--output", required=True)
    sp.add_argument("--name")
    sp = cmd("extract-system", cmd_extract_system, "split a bundle into a system")
    sp.add_argument("graph")
    sp.add_argument("--base", required=True)
    sp.add_argument("--split", required=True)
    sp.add_argument("-o", "--output", required=True)
    sp.add_argument("--name")
    sp.add_argument("--base-name")
    sp.add_argument("--labels")
    sp = cmd("iso", cmd_iso, "isomorphism of two k-graphs")
    sp.add_argument("g1")
    sp.add_argument("g2")
    sp.add_argument("--name1")
    sp.add_argument("--name2")
    sp = cmd("regularity", cmd_regularity, "check the regularity hypotheses")
    sp.add_argument("morph")
    sp.add_argument("--name")
    sp = cmd("bimodule", cmd_bimodule, "vertex matrix and left action of a morph")
    sp.add_argument("morph")
    sp.add_argument("--name")
    sp = cmd("export-dot", cmd_export_dot, "write a DOT rendering")
    sp.add_argument("file")
    sp.add_argument("-o", "--output", required=True)
    sp.add_argument("--name")
    sp.add_argument("--morph")

    op = sub.add_parser("oracle", help="brute-force references")
    osub = op.add_subparsers(dest="oracle_command", required=True, parser_class=_Parser)
    sp = osub.add_parser("rules")
    sp.set_defaults(fn=cmd_oracle_rules)
    sp.add_argument("skeleton")
    sp.add_argument("--name")
    sp = osub.add_parser("classify")
    sp.set_defaults(fn=cmd_oracle_classify)
    sp.add_argument("skeleton")
    sp.add_argument("--name")
    sp = osub.add_parser("category")
    sp.set_defaults(fn=cmd_oracle_category)
    sp.add_argument("file")
    sp.add_argument("--length", type=int, default=3)
    sp.add_argument("--name")

    sp = cmd("sample", cmd_sample, "random valid object (seed from KMORPH_SEED)")
    sp.add_argument("kind", choices=["graph", "morph", "system"])
    sp.add_argument("--rank", type=int)
    sp.add_argument("--seed", type=int)
    sp.add_argument("-o", "--output")
    return p


def dispatch(argv: Sequence[str]) -> CommandResult:
    res = CommandResult()
    try:
        args = build_parser().parse_args(list(argv))
        args.fn(args, res)
    except UsageError as exc:
        res.code = 1
        res.err.append(f"usage error: {exc}")
    except DSLError as exc:
        res.code = 1
        res.err.append(f"parse error: {exc}")
    except OSError as exc:
        res.code = 1
        res.err.append(f"io error: {exc}")
    except ValidationError as exc:
        # An input object that other commands depend on failed validation.
        _fail(res, exc)
    except KMorphError as exc:
        res.code = 1
        res.err.append(f"error: {exc}")
    return res


def main(argv: Sequence[str] | None = None) -> int:
    res = dispatch(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(report_format(res))
    for line in res.err:
        print(line, file=sys.stderr)
    return res.code


if __name__ == "__main__":
    sys.exit(main())
