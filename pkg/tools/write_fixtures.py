"""Regenerate the .kg files in fixtures/ from kmorph.fixtures."""

from __future__ import annotations

import pathlib
import sys

from kmorph import assembly, fixtures as F
from kmorph.kgraph import KGraph
from kmorph.dsl import Document, dumps, serialize


def fixture_texts() -> dict[str, str]:
    labels = Document()
    labels.add_labeling({"t1": "1"}, "c")
    skel = Document()
    sk = F.single_vertex_skeleton(2, 2)
    skel.add_kgraph(KGraph(sk, {}, name="S22"))
    return {
        "d1.kg": dumps(F.d1()),
        "d2.kg": dumps(F.d2()),
        "skew1.kg": dumps(F.skew1()),
        "d2xy.kg": dumps(F.d2_skew_y()),
        "nlc.kg": dumps(F.nlc()),
        "spielberg.kg": dumps(F.spielberg()),
        "spielberg_system.kg": dumps(assembly.spielberg_system(), names={0: "SP"}),
        "pxp.kg": dumps(F.pxp()),
        "xfix.kg": dumps(F.x_fix()),
        "yfix.kg": dumps(F.y_fix()),
        "cover_p.kg": dumps(F.cover_p(), names={0: "p"}),
        "cover_q.kg": dumps(F.cover_q_literal(), names={0: "q"}),
        "t1.kg": dumps(assembly.t_graph(1)),
        "e.kg": dumps(assembly.e_graph()),
        "z3.kg": dumps(assembly.cyclic_group(3), names={0: "Z3"}),
        "t1_label1.kg": serialize(labels),
        "skeleton22.kg": serialize(skel),
    }


def main(out_dir: str = "fixtures") -> None:
    out = pathlib.Path(out_dir)
    out.mkdir(exist_ok=True)
    for name, text in fixture_texts().items():
        (out / name).write_text(text, encoding="utf-8")


if __name__ == "__main__":
    main(*sys.argv[1:])
