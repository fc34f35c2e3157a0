import json
import subprocess
import sys

import pytest

from icosacurves.cli import main
from icosacurves.forms import curve_catalog
from icosacurves.generators import generator_catalog


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_empty_report(capsys):
    code, out, _ = run(capsys, "report")
    data = json.loads(out)
    assert code == 0 and data["claims"] == [] and data["status"] == "pass"


def test_section2_passes(capsys):
    code, out, _ = run(capsys, "verify-section2", "--max-d", "6")
    data = json.loads(out)
    assert code == 0
    ids = [c["claim_id"] for c in data["claims"]]
    assert ids == ["section2/d5/cyclic", "section2/d5/curve-invariance",
                   "section2/d6/cyclic", "section2/d6/curve-invariance"]
    assert data["claims"][0]["certificate"]["order"] == 20
    assert "wall_time" not in data["claims"][0]


def test_tampered_coefficient_fails_a_named_claim(capsys):
    code, out, _ = run(capsys, "verify-icosahedral", "--molien-bound", "12", "--tamper", "F20:10:495")
    data = json.loads(out)
    assert code == 1
    assert data["summary"]["failed"] == ["icosahedral/invariance-F20"]
    assert curve_catalog("F20").coeff(10) == 494


def test_usage_errors(capsys, tmp_path):
    assert run(capsys, "verify-theorem", "--d", "7")[0] == 2
    assert run(capsys, "no-such-command")[0] == 2
    assert run(capsys, "verify-section2", "--max-d", "4")[0] == 2
    assert run(capsys, "--conductor-cap", "30", "verify-section2")[0] == 2
    assert run(capsys, "report", str(tmp_path / "missing.json"))[0] == 2
    assert run(capsys, "verify-relations", "--tamper", "F20-10")[0] == 2
    bad = tmp_path / "bad.toml"
    bad.write_text("colour = 3\n")
    assert run(capsys, "--config", str(bad), "report")[0] == 2
    bad.write_text("not toml [")
    assert run(capsys, "--config", str(bad), "report")[0] == 2


def test_config_file_sets_bounds(capsys, tmp_path):
    cfg = tmp_path / "run.toml"
    cfg.write_text("max_d = 5\nmolien_bound = 20\nconductor_cap = 120\n")
    code, out, _ = run(capsys, "verify-section2", "--config", str(cfg))
    data = json.loads(out)
    assert code == 0 and len(data["claims"]) == 2
    assert data["configuration"]["section2_max_d"] == 5


def test_fragments_merge_in_order(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(capsys, "verify-section2", "--max-d", "5", "--out", str(a))[0] == 0
    assert run(capsys, "verify-icosahedral", "--molien-bound", "12", "--out", str(b))[0] == 0
    code, out, _ = run(capsys, "report", str(a), str(b), "--format", "text")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("icosacurves") and "PASS" in lines[0]
    assert lines[1].split()[1] == "section2/d5/cyclic"
    assert run(capsys, "report", str(a), str(a))[0] == 2


def test_closure_command(capsys, tmp_path):
    code, out, _ = run(capsys, "closure", "--catalog", "Gtilde(12)")
    data = json.loads(out)
    assert code == 0 and data["order"] == 720 and data["mode"] == "projective"
    gens = tmp_path / "gens.json"
    gens.write_text(json.dumps(generator_catalog("icosahedral_2x2").to_json()))
    code, out, _ = run(capsys, "closure", "--generators", str(gens), "--mode", "projective")
    assert code == 0 and json.loads(out)["order"] == 60
    assert set(json.loads(out)["element_orders"]) == {"1", "2", "3", "5"}


def test_curve_file_commands(capsys, tmp_path):
    curve = tmp_path / "c20.json"
    curve.write_text(json.dumps(curve_catalog("C20").to_json()))
    code, out, _ = run(capsys, "galois-check", "--curve", str(curve))
    cert = json.loads(out)["claims"][0]["certificate"]
    assert code == 0 and cert["certified"] and cert["deck_order"] == 20
    code, out, _ = run(capsys, "smooth-check", "--curve", str(curve))
    assert code == 0
    sing = tmp_path / "sing.json"
    sing.write_text(json.dumps({"vars": ["X", "Y"], "degree": 4,
                                "terms": [{"exp": [4, 0], "coeff": "1"}]}))
    assert run(capsys, "smooth-check", "--curve", str(sing))[0] == 1


def test_reports_are_byte_identical(capsys):
    first = run(capsys, "verify-relations")[1]
    second = run(capsys, "verify-relations")[1]
    assert first == second


def test_timings_are_opt_in(capsys):
    _, out, _ = run(capsys, "verify-section2", "--max-d", "5", "--timings")
    data = json.loads(out)
    assert "wall_time" in data["claims"][0] and "total_wall_time" in data


@pytest.mark.parametrize("entry", [["-m", "icosacurves"]])
def test_module_entry_point(entry):
    p = subprocess.run([sys.executable, *entry, "report"], capture_output=True, text=True)
    assert p.returncode == 0 and json.loads(p.stdout)["claims"] == []
