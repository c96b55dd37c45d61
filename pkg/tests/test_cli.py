import subprocess
import sys

import pytest

from kmorph import fixtures as F
from kmorph.cli import dispatch, report_format
from kmorph.dsl import parse_file
from kmorph.kgraph import find_isomorphism


def run(*args):
    return dispatch([str(a) for a in args])


def lines(result):
    return report_format(result).splitlines()


def test_validate_spielberg(fixture_dir):
    res = run("validate", fixture_dir / "spielberg.kg")
    assert res.code == 2
    out = lines(res)
    assert "witness: h8 g6 f2" in out
    assert "chainA: h8 g6 f2 -> h8 f5 g1 -> f7 h3 g1 -> f7 g3 h1" in out
    assert "chainB: h8 g6 f2 -> g8 h6 f2 -> g8 f4 h2 -> f8 g4 h2" in out


def test_validate_skew1(fixture_dir):
    res = run("validate", fixture_dir / "skew1.kg")
    assert res.code == 0 and "valid: true" in lines(res)


def test_paths_and_determinism(fixture_dir):
    res = run("paths", fixture_dir / "d1.kg", "--degree", "3")
    assert res.code == 0 and lines(res)[0] == "count: 8"
    assert run("paths", fixture_dir / "d1.kg", "--degree", "3").out == res.out
    res = run("paths", fixture_dir / "d2.kg", "--degree", "2", "--range", "v0")
    assert lines(res)[0] == "count: 4"


def test_compose_and_factorize(fixture_dir):
    res = run("compose", fixture_dir / "skew1.kg", "v0", "x")
    assert res.code == 0 and lines(res)[0] == "path: y v1"
    res = run("factorize", fixture_dir / "skew1.kg", "y v1", "0,1")
    assert lines(res) == ["mu: v0", "nu: x"]
    assert run("compose", fixture_dir / "d2.kg", "x0", "x0").code == 1


def test_iso(fixture_dir):
    res = run("iso", fixture_dir / "skew1.kg", fixture_dir / "skew1.kg")
    assert res.code == 0
    assert "emap: v0=v0 v1=v1 x=x y=y" in lines(res)
    assert run("iso", fixture_dir / "d1.kg", fixture_dir / "d2.kg").code == 2


def test_morph_commands(fixture_dir, tmp_path):
    assert run("morph", "validate", fixture_dir / "pxp.kg").code == 0
    assert run("morph", "invertible", fixture_dir / "pxp.kg").code == 2
    assert run("morph", "iso", fixture_dir / "xfix.kg", fixture_dir / "pxp.kg").code == 2
    assert run("morph", "iso", fixture_dir / "pxp.kg", fixture_dir / "pxp.kg").code == 0
    out = tmp_path / "p2.kg"
    res = run("morph", "product", fixture_dir / "pxp.kg", fixture_dir / "pxp.kg", "-o", out)
    assert res.code == 0 and "elements: 4" in lines(res)
    (name,) = parse_file(out).morphs
    assert len(parse_file(out).morph(name)) == 4


def test_cover_check(fixture_dir):
    assert run("cover", "check", fixture_dir / "cover_p.kg").code == 0
    res = run("cover", "check", fixture_dir / "cover_q.kg")
    assert res.code == 2 and "witness: range v0 1 x0 y1 x x" in lines(res)


def test_linking_and_skews(fixture_dir, tmp_path):
    out = tmp_path / "l.kg"
    assert run("linking", fixture_dir / "pxp.kg", "-o", out).code == 0
    out = tmp_path / "s.kg"
    assert run("skew-endo", fixture_dir / "d1.kg", fixture_dir / "xfix.kg", "-o", out).code == 0
    doc = parse_file(out)
    sk = next(doc.kgraph(n) for n in doc.graphs if doc.graphs[n].rank == 2)
    assert sk.rules == F.skew1().rules
    out = tmp_path / "g.kg"
    res = run("skew-group", fixture_dir / "t1.kg", fixture_dir / "z3.kg",
              fixture_dir / "t1_label1.kg", "-o", out)
    assert res.code == 0 and "vertices: 3" in lines(res)
    doc = parse_file(out)
    g = next(doc.kgraph(n) for n in doc.graphs if len(doc.graphs[n].vertices) == 3)
    assert find_isomorphism(g, F.cycle(3)) is not None


def test_bundle_and_extract(fixture_dir, tmp_path):
    res = run("bundle", fixture_dir / "spielberg_system.kg", "-o", tmp_path / "b.kg")
    assert res.code == 2 and "witness: t3/h8 t2/g6 t1/f2" in lines(res)
    sys_file = tmp_path / "es.kg"
    res = run("extract-system", fixture_dir / "skew1.kg", "--base", fixture_dir / "t1.kg",
              "--split", "1,1", "-o", sys_file)
    assert res.code == 0 and "morph t1: 2" in lines(res)
    res = run("bundle", sys_file, "-o", tmp_path / "b2.kg")
    assert res.code == 0 and "valid: true" in lines(res)


def test_regularity_and_bimodule(fixture_dir):
    assert run("regularity", fixture_dir / "pxp.kg").code == 0
    res = run("bimodule", fixture_dir / "pxp.kg")
    assert res.code == 0
    out = lines(res)
    assert "row v: 2" in out and "act x u1 -> u0 x" in out


def test_export_dot(fixture_dir, tmp_path):
    out = tmp_path / "s.dot"
    res = run("export-dot", fixture_dir / "skew1.kg", "-o", out)
    assert res.code == 0 and "styles: dashed solid" in lines(res)
    assert out.read_text().startswith("digraph")


def test_oracle_commands(fixture_dir):
    res = run("oracle", "rules", fixture_dir / "skeleton22.kg")
    assert lines(res) == ["candidates: 24", "valid: 24"]
    res = run("oracle", "classify", fixture_dir / "skeleton22.kg")
    assert lines(res)[0] == "classes: 12"
    res = run("oracle", "category", fixture_dir / "d1.kg", "--length", "3")
    assert "classes: 15" in lines(res)


def test_sample_uses_seed(monkeypatch):
    a = run("sample", "morph", "--seed", "3")
    assert a.code == 0 and a.out == run("sample", "morph", "--seed", "3").out
    monkeypatch.setenv("KMORPH_SEED", "3")
    assert run("sample", "morph").out == a.out


@pytest.mark.parametrize("argv", [[], ["bogus"], ["paths"], ["validate", "missing.kg"]])
def test_usage_errors(argv):
    assert dispatch(argv).code == 1


def test_parse_error_exit_code(tmp_path):
    bad = tmp_path / "bad.kg"
    bad.write_text("kgraph G rank 1\nvertex v\nedge e color 9 source v range v\n")
    res = run("validate", bad)
    assert res.code == 2 and "witness: e" in lines(res)
    bad.write_text("kgraph G rank\n")
    assert run("validate", bad).code == 1


def test_console_entry_point(fixture_dir):
    proc = subprocess.run([sys.executable, "-m", "kmorph", "validate", str(fixture_dir / "skew1.kg")],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "valid: true" in proc.stdout
