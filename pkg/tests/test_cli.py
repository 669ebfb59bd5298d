"""End-to-end checks of the command line interface.

Everything goes through main(argv) in-process; stdout is captured and
parsed back, so these double as determinism checks on the JSON layer.
"""

import io
import json
import sys

import pytest

from graphhom.catalog import (
    handcuff,
    hopf_handcuff,
    hopf_positive,
    theta,
    trefoil_right,
)
from graphhom.cli import main


def run_cli(argv, stdin_text=None, capsys=None):
    if stdin_text is not None:
        old = sys.stdin
        sys.stdin = io.StringIO(stdin_text)
        try:
            code = main(argv)
        finally:
            sys.stdin = old
    else:
        code = main(argv)
    out = capsys.readouterr().out if capsys else ""
    return code, out


@pytest.fixture
def tref_path(tmp_path):
    p = tmp_path / "tref.json"
    p.write_text(json.dumps(trefoil_right().to_json()))
    return str(p)


@pytest.fixture
def handcuff_path(tmp_path):
    p = tmp_path / "handcuff.json"
    p.write_text(json.dumps(handcuff().to_json()))
    return str(p)


def test_validate_reports_counts(tref_path, capsys):
    code, out = run_cli(["validate", tref_path], capsys=capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["valid"] and doc["link"] and doc["crossings"] == 3
    assert doc["components"] == 1


def test_validate_rejects_arc_multiplicity(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"crossings": [[0, 0, 0, 1]], "vertices": []}))
    code = main(["validate", str(p)])
    err = capsys.readouterr().err
    assert code == 2
    assert "arc multiplicity" in err


def test_malformed_json_exit_two_with_position(tmp_path, capsys):
    p = tmp_path / "broken.json"
    p.write_text('{"crossings": [[0,1,2')
    code = main(["family", str(p)])
    err = capsys.readouterr().err
    assert code == 2
    assert "line 1" in err and "column" in err


def test_missing_file_exit_two(capsys):
    code, _ = run_cli(["validate", "/nonexistent/x.json"], capsys=capsys)
    assert code == 2


def test_family_output_matches_library(handcuff_path, capsys):
    from graphhom.kauffman import family

    code, out = run_cli(["family", handcuff_path], capsys=capsys)
    assert code == 0
    assert json.loads(out) == json.loads(
        json.dumps(family(handcuff()).to_json(), sort_keys=True)
    )


def test_output_is_deterministic(handcuff_path, capsys):
    _, first = run_cli(["family", handcuff_path], capsys=capsys)
    _, second = run_cli(["family", handcuff_path], capsys=capsys)
    assert first == second


def test_invariants_fields(tref_path, capsys):
    code, out = run_cli(["invariants", tref_path], capsys=capsys)
    assert code == 0
    doc = json.loads(out)
    assert set(doc) == {
        "alexander",
        "components",
        "conway",
        "determinant",
        "jones",
        "reduced_crossings",
    }
    assert doc["determinant"] == 3


def test_invariants_rejects_graphs(handcuff_path, capsys):
    code, _ = run_cli(["invariants", handcuff_path], capsys=capsys)
    assert code == 2


def test_khovanov_euler_check_passes(tref_path, capsys):
    code, out = run_cli(["khovanov", tref_path, "--check-euler"], capsys=capsys)
    assert code == 0
    assert json.loads(out)["euler_check"] == "pass"


def test_khovanov_cap_skip_exits_one(tref_path, capsys):
    code, out = run_cli(["khovanov", tref_path, "--max-crossings", "2"], capsys=capsys)
    assert code == 1
    assert "skipped" in json.loads(out)["skip"]


def test_floer_accepts_link_and_grid(tref_path, tmp_path, capsys):
    code, out = run_cli(["floer", tref_path], capsys=capsys)
    assert code == 0
    link_doc = json.loads(out)
    assert link_doc["euler_check"]["verdict"] == "pass"

    grid = tmp_path / "grid.json"
    grid.write_text(json.dumps(link_doc["grid"]))
    code, out = run_cli(["floer", str(grid)], capsys=capsys)
    assert code == 0
    grid_doc = json.loads(out)
    assert grid_doc["source"] == "grid"
    assert grid_doc["hat"] == link_doc["hat"]


def test_floer_cap_skip_exits_one(tref_path, capsys):
    code, out = run_cli(["floer", tref_path, "--max-grid", "2"], capsys=capsys)
    assert code == 1
    assert "skipped" in json.loads(out)["skip"]


def test_graph_homology_full_and_summary(handcuff_path, capsys):
    code, out = run_cli(["graph-homology", handcuff_path], capsys=capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["verdicts"] == {"floer_euler": "pass", "khovanov_euler": "pass"}
    assert doc["distinct_members"] == 2

    code, out = run_cli(["graph-homology", handcuff_path, "--summary"], capsys=capsys)
    assert code == 0
    summary = json.loads(out)
    assert summary["floer_poincare"] == {"-1,0": 1, "0,0": 1, "1,0": 1}


def test_graph_homology_jobs_deterministic(tmp_path, capsys):
    p = tmp_path / "hh.json"
    p.write_text(json.dumps(hopf_handcuff().to_json()))
    _, serial = run_cli(["graph-homology", str(p)], capsys=capsys)
    _, parallel = run_cli(["graph-homology", str(p), "--jobs", "3"], capsys=capsys)
    assert serial == parallel


def test_graph_homology_skip_exits_one(handcuff_path, capsys):
    code, out = run_cli(
        ["graph-homology", handcuff_path, "--floer", "--max-grid", "2"], capsys=capsys
    )
    assert code == 1
    assert json.loads(out)["verdicts"]["floer_euler"] == "partial"


def test_moves_pipe_into_family(tmp_path, capsys):
    p = tmp_path / "hh.json"
    p.write_text(json.dumps(hopf_handcuff().to_json()))
    code, moved = run_cli(
        ["moves", str(p), "--seed", "7", "--count", "20"], capsys=capsys
    )
    assert code == 0
    code, fam_moved = run_cli(["family", "-"], stdin_text=moved, capsys=capsys)
    assert code == 0
    _, fam_orig = run_cli(["family", str(p)], capsys=capsys)

    def fps(text):
        return sorted(
            json.dumps(m["fingerprint"], sort_keys=True)
            for m in json.loads(text)["members"]
        )

    assert fps(fam_moved) == fps(fam_orig)


def test_moves_same_seed_same_output(tref_path, capsys):
    _, first = run_cli(["moves", tref_path, "--seed", "3", "--count", "12"], capsys=capsys)
    _, second = run_cli(["moves", tref_path, "--seed", "3", "--count", "12"], capsys=capsys)
    assert first == second


def test_census_passes_and_lists(capsys):
    code, out = run_cli(["census", "--list"], capsys=capsys)
    assert code == 0
    names = json.loads(out)["entries"]
    assert {"unknot", "hopf_positive", "trefoil_right", "figure_eight",
            "handcuff", "hopf_handcuff", "theta"} <= set(names)

    code, out = run_cli(["census"], capsys=capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["verdict"] == "pass"
    assert all(e["status"] == "pass" for e in doc["entries"])


def test_census_dump_is_valid_diagram(capsys):
    code, out = run_cli(["census", "--dump", "theta"], capsys=capsys)
    assert code == 0
    assert json.loads(out) == json.loads(json.dumps(theta().to_json()))


def test_stdin_dash(capsys):
    text = json.dumps(hopf_positive().to_json())
    code, out = run_cli(["invariants", "-"], stdin_text=text, capsys=capsys)
    assert code == 0
    assert json.loads(out)["components"] == 2
