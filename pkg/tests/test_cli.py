import json

from prymtheta.cli import main

POINTS = [str(v) for v in range(1, 9)]


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_enum_default(capsys):
    code, out, err = run(capsys, "enum")
    assert code == 0
    assert len(out.strip().splitlines()) == 105
    assert "105 rows" in err


def test_enum_44_json(capsys):
    code, out, _ = run(capsys, "enum", "--shape", "44", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["schema_version"] == 1
    assert len(doc["splits"]) == 35


def test_enum_audit_json(capsys):
    code, out, _ = run(capsys, "enum", "--json", "--audit")
    doc = json.loads(out)
    assert code == 0
    assert len(doc["coset_audit"]) == 105
    rec = doc["coset_audit"][0]
    assert set(rec) == {"partition", "word", "perm", "sigma_g", "delta_g"}


def test_periods_ok(capsys):
    code, out, err = run(capsys, "periods", "--points", *POINTS, "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["checks"]["tau_symmetric"]
    assert doc["checks"]["im_tau_positive"]
    assert doc["checks"]["ball_norm_negative"]
    assert doc["tau_u_residual"] < 1e-7


def test_periods_refine(capsys):
    code, out, _ = run(capsys, "periods", "--points", *POINTS, "--json",
                       "--refine")
    assert code == 0
    assert json.loads(out)["refine_delta"] < 1e-6


def test_periods_malformed_points(capsys):
    code, _, _ = run(capsys, "periods", "--points", *POINTS[:7])
    assert code == 2


def test_periods_non_increasing(capsys):
    bad = POINTS[:6] + ["8", "7"]
    code, _, err = run(capsys, "periods", "--points", *bad)
    assert code == 2
    assert "error" in err


def test_theta_command(capsys):
    code, out, _ = run(capsys, "theta", "--points", *POINTS, "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["cross_ratio_residual"] < 1e-5


def test_verify_combinatorics(capsys):
    code, out, err = run(capsys, "verify", "--suite", "combinatorics",
                         "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["status"]["combinatorics"] == "pass"


def test_verify_lattice_and_corrupt_hook(capsys):
    code, _, _ = run(capsys, "verify", "--suite", "lattice", "--json")
    assert code == 0
    code, out, err = run(capsys, "verify", "--suite", "lattice", "--json",
                         "--corrupt-u")
    assert code == 1
    assert "FAIL" in err


def test_verify_forms_only(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "forms", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["forms"]["map_max_residual"] < 1e-5


def test_map_command(capsys):
    code, out, _ = run(capsys, "map", "--points", *POINTS, "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["max_residual"] < 1e-5
    assert len(doc["records"]) == 105


def test_config_file(tmp_path, capsys):
    cfgfile = tmp_path / "run.json"
    cfgfile.write_text(json.dumps({
        "points": [0.5, 1.7, 2.3, 4.1, 5.9, 7.2, 8.8, 10.1],
        "theta_tol": 1e-10,
    }))
    code, out, _ = run(capsys, "theta", "--config", str(cfgfile), "--json")
    assert code == 0
    assert json.loads(out)["cross_ratio_residual"] < 1e-5
    code = main(["theta", "--config", "/nonexistent.json"])
    assert code == 2


def test_usage_error(capsys):
    code = main(["periods", "--points", "a", "b", "c", "d", "e", "f", "g", "h"])
    capsys.readouterr()
    assert code == 2
