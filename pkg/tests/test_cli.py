import json
import subprocess
import sys
from pathlib import Path

import pytest

from toricodim.cli import main
from toricodim.instances import InstanceError, load_instance, parse_instance
from toricodim.report import CodimReport, analyze

INSTANCES = Path(__file__).resolve().parents[1] / "instances"
SSS = INSTANCES / "segment_square_square.json"
NON_ESSENTIAL = INSTANCES / "non_essential_segments.json"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_segment_square_square(capsys):
    code, out, _ = run(capsys, "analyze", SSS, "--format", "json")
    assert code == 0
    rep = json.loads(out)
    assert (rep["lower"], rep["upper"], rep["formula_value"], rep["oracle_value"]) == (2, 2, 2, 2)
    assert rep["verdict"] == "agree"
    assert rep["bignef_case"] == {"tag": "surface", "value": 2}
    assert rep["provenance"]["seed"] == 42


def test_analyze_three_triangles(capsys):
    code, out, _ = run(capsys, "analyze", INSTANCES / "three_triangles.json", "--format", "json")
    rep = json.loads(out)
    assert code == 0 and rep["bignef_case"] == {"tag": "full-dim", "value": 1}
    assert rep["oracle_value"] == 1


def test_analyze_non_essential_exits_zero(capsys):
    code, out, _ = run(capsys, "analyze", NON_ESSENTIAL, "--format", "json")
    rep = json.loads(out)
    assert code == 0
    assert rep["essential"] is False and rep["violating_subset"] == [1, 2]
    assert rep["lstar_total"] == 0
    assert rep["formula_value"] is None and rep["lower"] is None
    assert rep["verdict"] == "no-claims"


def test_analyze_text_uses_domain_vocabulary(capsys):
    code, out, _ = run(capsys, "analyze", SSS)
    assert code == 0
    for word in ("essential", "critical degree", "l*", "E_1", "verdict: agree"):
        assert word in out


def test_no_oracle_flag(capsys):
    code, out, _ = run(capsys, "analyze", SSS, "--no-oracle", "--format", "json")
    rep = json.loads(out)
    assert code == 0 and rep["oracle"] is None and rep["verdict"] == "no-oracle"


def test_explicit_sections(capsys):
    code, out, _ = run(capsys, "analyze", INSTANCES / "explicit_sections.json", "--format", "json")
    rep = json.loads(out)
    assert code == 0
    assert rep["oracle"]["sections"] == "explicit" and rep["oracle_value"] == 2


def test_byte_identical_reports(capsys):
    outs = [run(capsys, "analyze", SSS, "--format", "json")[1] for _ in range(2)]
    assert outs[0] == outs[1]
    outs = [run(capsys, "verify", SSS, "--trials", "2", "--format", "json")[1] for _ in range(2)]
    assert outs[0] == outs[1]


def test_report_round_trip():
    rep = analyze(load_instance(SSS))
    text = rep.to_json()
    again = CodimReport.from_json(text)
    assert again == rep and again.to_json() == text
    with pytest.raises(ValueError):
        CodimReport.from_dict({**rep.to_dict(), "bogus": 1})


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", SSS, "--seed", "0", "--trials", "5", "--format", "json")
    rep = json.loads(out)
    assert code == 0
    assert [t["value"] for t in rep["trials"]] == [2] * 5
    assert [t["seed"] for t in rep["trials"]] == [0, 1, 2, 3, 4]


def test_verify_full_dimensional_n3(capsys):
    code, out, _ = run(capsys, "verify", INSTANCES / "triangle_cubes.json", "--trials", "2", "--format", "json")
    assert code == 0
    assert [t["value"] for t in json.loads(out)["trials"]] == [1, 1]


def test_verify_refuses_non_essential(capsys):
    code, _, err = run(capsys, "verify", NON_ESSENTIAL)
    assert code == 2 and "not essential" in err


def test_e1_table_command(capsys):
    code, out, _ = run(capsys, "e1-table", SSS, "--format", "json")
    payload = json.loads(out)
    assert code == 0 and payload["entries"][1][1] == 1 and payload["entries"][0][2] == 1
    code, out, _ = run(capsys, "e1-table", SSS)
    assert code == 0 and "= p" in out


@pytest.mark.parametrize(
    "n, mc, seed",
    [(2, 2, 7), (1, 1, 1), (4, 1, 3)],
)
def test_random_command(tmp_path, capsys, n, mc, seed):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(capsys, "random", "--n", n, "--max-coord", mc, "--seed", seed, "--out", a)[0] == 0
    assert run(capsys, "random", "--n", n, "--max-coord", mc, "--seed", seed, "--out", b)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    code, out, _ = run(capsys, "analyze", a, "--no-oracle", "--format", "json")
    rep = json.loads(out)
    assert code == 0 and rep["essential"] and rep["n"] == n


def test_random_to_stdout(capsys):
    code, out, _ = run(capsys, "random", "--n", "2", "--max-coord", "2", "--seed", "7")
    assert code == 0 and json.loads(out)["n"] == 2


def test_random_rejects_bad_arguments(capsys):
    assert run(capsys, "random", "--n", "5", "--max-coord", "2", "--seed", "1")[0] == 2
    assert run(capsys, "random", "--n", "2", "--max-coord", "0", "--seed", "1")[0] == 2


def test_malformed_json(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 2,\n "polytopes": [}\n')
    code, _, err = run(capsys, "analyze", bad)
    assert code == 2 and "line 2" in err


def test_missing_file(tmp_path, capsys):
    assert run(capsys, "analyze", tmp_path / "nope.json")[0] == 2


@pytest.mark.parametrize(
    "payload, fragment",
    [
        ([], "top level"),
        ({"polytopes": []}, "'n'"),
        ({"n": 2, "polytopes": [[[0, 0]]]}, "expected 3 entries"),
        ({"n": 2, "polytopes": [[[0, 0]], [[0, 0.5]], [[1, 1]]]}, "polytopes[1][0]"),
        ({"n": 2, "polytopes": [[[0, 0]], [[0, 1, 2]], [[1, 1]]]}, "polytopes[1][0]"),
        (
            {"n": 1, "polytopes": [[[0], [1]], [[0], [1]]], "sections": [[{"point": [5], "value": "1"}], []]},
            "sections[0][0].point",
        ),
        (
            {"n": 1, "polytopes": [[[0], [1]], [[0], [1]]], "sections": [[{"point": [0], "value": "x"}], []]},
            "sections[0][0].value",
        ),
        (
            {"n": 1, "polytopes": [[[0], [1]], [[0], [1]]], "sections": [[{"point": [0], "value": "1"}], []]},
            "sections[1]",
        ),
        ({"n": 1, "polytopes": [[[0], [1]], [[0], [1]]], "generic_seed": "3"}, "generic_seed"),
    ],
)
def test_parse_diagnostics(payload, fragment):
    with pytest.raises(InstanceError) as exc:
        parse_instance(payload)
    assert fragment in str(exc.value)


def test_big_coefficients_survive_round_trip():
    inst = load_instance(INSTANCES / "explicit_sections.json")
    coeffs = inst.sections[2].coefficients
    assert coeffs[(0, 1)] == 12345678901234567890
    assert parse_instance(json.loads(json.dumps(inst.to_json()))).sections == inst.sections


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "toricodim", "analyze", str(SSS), "--no-oracle"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and "bounds: 2 <= dim (S/I)_rho <= 2" in proc.stdout
