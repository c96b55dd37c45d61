import pytest

from kmorph import fixtures as F
from kmorph.assembly import build_linking, cyclic_group, endo_skew, spielberg_system, t_graph
from kmorph.dsl import (Document, DSLSyntaxError, DuplicateId, UnknownReference, dumps,
                        edge_style, export_dot, parse, parse_file, serialize)
from kmorph.errors import CubeFailure
from kmorph.kgraph import validate_rules
from kmorph.morph import covering_morph
from kmorph.skeleton import make_skeleton


def test_parse_skew1_file(fixture_dir):
    doc = parse_file(fixture_dir / "skew1.kg")
    g = doc.kgraph("SKEW1")
    assert len(g.vertices) == 1 and len(g.edges) == 4 and len(g.rules) == 4
    assert g == F.skew1()


def test_unknown_edge_in_square():
    text = "kgraph G rank 2\nvertex v\nedge A color 1 source v range v\nsquare B A = A B\n"
    with pytest.raises(UnknownReference) as info:
        parse(text)
    assert info.value.line == 4


def test_unknown_graph_in_morph():
    with pytest.raises(UnknownReference):
        parse("morph X over D1 D1\n")


def test_syntax_errors_carry_lines():
    with pytest.raises(DSLSyntaxError) as info:
        parse("kgraph G rank 1\nvertex v\nedge e colour 1 source v range v\n")
    assert info.value.line == 3
    with pytest.raises(DSLSyntaxError):
        parse("vertex v\n")
    with pytest.raises(DSLSyntaxError):
        parse("kgraph G rank x\n")


def test_duplicate_ids():
    with pytest.raises(DuplicateId):
        parse("kgraph G rank 0\nvertex v\nvertex v\n")
    with pytest.raises(DuplicateId):
        parse("kgraph G rank 0\nvertex v\n\nkgraph G rank 0\nvertex w\n")


def test_comments_and_blank_lines():
    doc = parse("# a comment\n\nkgraph G rank 0   # trailing\nvertex v\n")
    assert doc.kgraph("G").vertices == ("v",)


def test_invalid_graph_parses_but_fails_validation(fixture_dir):
    doc = parse_file(fixture_dir / "spielberg.kg")
    (name,) = doc.graphs
    assert doc.kgraph(name, validate=False).rank == 3
    with pytest.raises(CubeFailure):
        doc.kgraph(name)


@pytest.mark.parametrize("obj", [F.skew1(), F.d2_skew_y(), F.pxp(), F.y_fix(), F.cover_p(),
                                 spielberg_system(), cyclic_group(3), build_linking(F.x_fix())],
                         ids=["skew1", "d2xy", "pxp", "yfix", "p", "spsys", "z3", "link"])
def test_round_trip(obj):
    text = dumps(obj)
    doc = parse(text)
    assert serialize(doc) == text
    assert parse(serialize(doc)) == doc


def test_serialize_is_stable():
    assert dumps(F.skew1()) == dumps(F.skew1())
    assert dumps(F.skew1()).splitlines()[0] == "kgraph SKEW1 rank 2"


def test_empty_zero_graph_serializes_to_two_lines():
    g = validate_rules(make_skeleton(0, ["v"], []), {}, name="Z")
    assert dumps(g) == "kgraph Z rank 0\nvertex v\n"


def test_constructed_objects_load():
    link = build_linking(covering_morph(F.cover_p()))
    doc = parse(dumps(link, names={0: "L"}))
    assert doc.kgraph("L") == link.graph
    assert doc.labeling("L.labels") == link.labels


def test_system_round_trip():
    sys = spielberg_system()
    doc = parse(dumps(sys, names={0: "SP"}))
    back = doc.system("SP")
    assert back.base == sys.base and back.morphs == sys.morphs and back.theta == sys.theta


def test_group_and_labeling(fixture_dir):
    z3 = parse_file(fixture_dir / "z3.kg")
    assert z3.group("Z3").mul("2", "2") == "1"
    lab = parse_file(fixture_dir / "t1_label1.kg")
    assert lab.labeling("c") == {"t1": "1"}


def test_cover_section(fixture_dir):
    doc = parse_file(fixture_dir / "cover_p.kg")
    p = doc.cover("p")
    assert p.emap["x1"] == "x" and p.vmap["v1"] == "v"


def test_document_names_are_fresh():
    doc = Document()
    a = doc.add_kgraph(F.d1())
    b = doc.add_kgraph(F.d1())
    assert a == b == "D1"
    c = doc.add_kgraph(F.d2(), None)
    assert c == "D2"


def test_edge_styles():
    assert [edge_style(c) for c in (1, 2, 3, 4)] == ["solid", "dashed", "dotted", "bold"]


def test_dot_d1():
    dot = export_dot(F.d1(), "D1")
    assert dot.count("style=solid") == 2
    assert dot.count('"v";') == 1


def test_dot_skew1():
    dot = export_dot(F.skew1())
    assert dot.count("style=solid") == 2 and dot.count("style=dashed") == 2


def test_dot_spielberg():
    dot = export_dot(F.spielberg())
    node_lines = [ln for ln in dot.splitlines() if ln.strip().endswith(";") and "->" not in ln]
    assert len(node_lines) == 14
    for style in ("solid", "dashed", "dotted"):
        assert dot.count(f"style={style}") == 8


def test_dot_high_colors_and_clusters():
    dot = export_dot(t_graph(4))
    assert "style=bold" in dot and "[c4]" in dot
    bundle = endo_skew(F.d2(), F.y_fix())
    assert "subgraph cluster_0" in export_dot(bundle)
    assert export_dot(F.pxp()).count("subgraph cluster_") == 2


def test_io_module_reexports_format():
    from kmorph import io
    assert io.parse is parse and io.export_dot is export_dot
