import json
import re
from pathlib import Path

import pytest

from recgroup.analysis import build_system, run_analysis
from recgroup.cli import main
from recgroup.config import emit_config, parse_system_config
from recgroup.endo import identity_map, validate_endomorphism
from recgroup.errors import ValidationError
from recgroup.group import FiniteAbelianGroup
from recgroup.report import emit_report, export_chain_graph_dot
from recgroup.uniformity import Entourage

CONFIGS = Path(__file__).resolve().parent.parent / "configs"

MINIMAL = """recgroup-config v1
[group]
moduli = 8
[map]
matrix = 3
[uniformity]
radius = 1
"""


def test_minimal_config_parses():
    cfg = parse_system_config(MINIMAL)
    assert cfg.moduli == (8,) and cfg.matrix == ((3,),) and cfg.radius == (1,)
    assert cfg.run == ("recurrent-sets",)


def test_dimension_mismatch():
    text = MINIMAL.replace("moduli = 8", "moduli = 8, 4")
    with pytest.raises(ValidationError) as exc:
        parse_system_config(text)
    assert any("2x2" in v and "line 5" in v for v in exc.value.violations)


def test_invalid_hom_entry_named():
    text = MINIMAL.replace("moduli = 8", "moduli = 2, 4").replace("matrix = 3", "matrix = 0, 0; 1, 0")
    with pytest.raises(ValidationError) as exc:
        parse_system_config(text)
    assert any("(2, 1)" in v or "(2,1)" in v for v in exc.value.violations), exc.value.violations


def test_errors_collected_in_one_pass():
    text = """recgroup-config v2
[group]
moduli = 8
[mapp]
matrix = 3
[uniformity]
radius = 1
colour = red
[analysis]
run = recurrent-sets, dance
periods = 0
"""
    with pytest.raises(ValidationError) as exc:
        parse_system_config(text)
    v = exc.value.violations
    for needle in ("line 1: expected header", "line 4: unknown section", "unknown key 'colour'",
                   "unknown analysis 'dance'", "periods must be >= 1", "missing [map] matrix"):
        assert any(needle in s for s in v), (needle, v)


@pytest.mark.parametrize("path", sorted(CONFIGS.glob("*.cfg")), ids=lambda p: p.name)
def test_emit_round_trip(path):
    cfg = parse_system_config(path.read_text())
    assert parse_system_config(emit_config(cfg)) == cfg


def test_empty_selection_echoes_system():
    rep = run_analysis(parse_system_config(MINIMAL), [])
    assert rep.sections == [] and rep.exit_code == 0
    assert rep.system["order"] == 8
    text = emit_report(rep, "text").decode()
    assert "== system" in text and text.count("== ") == 1


def test_recurrent_sets_on_doubling():
    cfg = parse_system_config((CONFIGS / "z64_doubling.cfg").read_text())
    rep = run_analysis(cfg, ["recurrent-sets"])
    sets = rep.sections[0][1]["sets"]
    for name in ("Fix", "Per", "Omega", "CR", "CC"):
        assert name in sets
    assert sets["Fix"]["elements"] == [[0]]


def test_verify_section_reports_axioms():
    rep = run_analysis(parse_system_config(MINIMAL), ["verify"])
    axioms = rep.sections[0][1]["axioms"]
    assert sorted(axioms) == ["R1", "R2", "R3", "R4", "R5"]


def test_text_has_one_section_per_analysis():
    cfg = parse_system_config((CONFIGS / "z64_doubling.cfg").read_text())
    rep = run_analysis(cfg)
    text = emit_report(rep, "text").decode()
    for name in cfg.run:
        assert text.count(f"== {name}\n") == 1


def test_json_round_trips_sets():
    cfg = parse_system_config((CONFIGS / "mixed_z4z2.cfg").read_text())
    rep = run_analysis(cfg, ["recurrent-sets"])
    doc = json.loads(emit_report(rep, "json"))
    G = build_system(cfg).group
    for name, s in doc["sections"][0]["sets"].items():
        idx = [G.to_index(tuple(c)) for c in s["elements"]]
        assert idx == sorted(idx) and len(set(idx)) == s["size"]
        assert [list(G.label(i)) for i in idx] == s["elements"]


def test_csv_columns():
    cfg = parse_system_config((CONFIGS / "z64_doubling.cfg").read_text())
    out = emit_report(run_analysis(cfg, ["entropy", "addition"]), "csv").decode()
    blocks = [b for b in out.split("# ") if b]
    assert [b.splitlines()[0] for b in blocks] == ["entropy", "addition/total", "addition/quotient", "addition/restricted"]
    for b in blocks:
        assert b.splitlines()[1] == "n,sep,sep_exact,span,span_exact"


def test_dot_identity_self_loops():
    G = FiniteAbelianGroup([4])
    dot = export_chain_graph_dot(identity_map(G), Entourage.identity(G))
    assert dot.count("subgraph cluster_") == 4
    for x in range(4):
        assert f"n{x} -> n{x};" in dot
    assert len(re.findall(r"->", dot)) == 4


def test_dot_doubling_out_degree():
    G = FiniteAbelianGroup([8])
    dot = export_chain_graph_dot(validate_endomorphism(G, [[2]]), Entourage.ball(G, 1))
    edges = re.findall(r"n(\d+) -> n(\d+);", dot)
    assert len({a for a, _ in edges} | {b for _, b in edges}) == 8
    for x in range(8):
        assert sum(a == str(x) for a, _ in edges) == 3
    assert dot == export_chain_graph_dot(validate_endomorphism(G, [[2]]), Entourage.ball(G, 1))


def test_cli_exit_codes(tmp_path, capsys):
    cfg = tmp_path / "m.cfg"
    cfg.write_text(MINIMAL)
    assert main(["analyze", "--config", str(cfg)]) == 0
    bad = tmp_path / "bad.cfg"
    bad.write_text(MINIMAL.replace("matrix = 3", "matrix = 3, 1"))
    assert main(["analyze", "--config", str(bad)]) == 1
    assert main(["analyze", "--config", str(tmp_path / "missing.cfg")]) == 1
    assert main(["shadowing", "--config", str(CONFIGS / "z64_doubling.cfg"), "--cap", "3"]) == 2
    capsys.readouterr()
    assert main(["verify", "--config", str(CONFIGS / "z8_triple.cfg")]) == 3
    assert "THEOREM VIOLATION" in capsys.readouterr().err
    assert main(["export-dot", "--config", str(cfg), "--entourage", "9"]) == 1


def test_cli_outputs_stable(capsys):
    outs = []
    for _ in range(2):
        main(["analyze", "--config", str(CONFIGS / "cat_z13.cfg"), "--format", "json"])
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]
