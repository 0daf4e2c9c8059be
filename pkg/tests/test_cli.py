"""End-to-end exercises of the qck command line.

Every test drives ``main`` directly with an argv list and reads the captured
stdout/stderr, so the exit-code and schema contracts are pinned without
spawning subprocesses.
"""

import json

import pytest

from qck.cli import CSV_HEADER, main


def run_cli(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_csv(out):
    lines = out.strip().splitlines()
    rows = [[field for field in line.split(",")] for line in lines[1:]]
    return lines[0], rows


class TestCheckPotential:
    def test_log_family_passes(self, capsys):
        code, out, _ = run_cli(capsys, ["check-potential", "--count", "3",
                                        "--seed", "2"])
        assert code == 0
        rep = json.loads(out)
        assert rep["schema_version"] == 1
        assert rep["command"] == "check-potential"
        assert rep["pass"] is True
        assert len(rep["points"]) == 3
        for p in rep["points"]:
            assert all(p["checks"].values())
            assert p["decomposition"]["class"] == "negative"
            assert p["decomposition"]["a_plus_k2"] < 0

    def test_definite_family_passes(self, capsys):
        code, out, _ = run_cli(capsys, ["check-potential", "--space", "definite",
                                        "--family", "dlog", "--a", "2",
                                        "--rmin", "0.5", "--rmax", "1.8",
                                        "--count", "2", "--seed", "4"])
        assert code == 0
        rep = json.loads(out)
        for p in rep["points"]:
            assert p["decomposition"]["class"] == "positive"
            assert p["decomposition"]["a_plus_k2"] > 0

    def test_flat_rescale_reports_zero_coefficients(self, capsys):
        code, out, _ = run_cli(capsys, ["check-potential", "--family", "series",
                                        "--coeffs", "0,-0.5", "--count", "2",
                                        "--seed", "1"])
        assert code == 1
        rep = json.loads(out)
        assert rep["pass"] is False
        for p in rep["points"]:
            assert p["admissible"] is False
            assert p["min_eigenvalue"] < 0
            assert p["kahler_defect"] < 1e-12
            dec = p["decomposition"]
            assert dec["a"] == 0.0 and dec["b"] == 0.0 and dec["c"] == 0.0
            assert dec["residual"] < 1e-12
            assert p["checks"]["positive"] is False
            assert p["checks"]["residual"] is True


class TestCurvatureAndDecompose:
    def test_curvature_invariants(self, capsys):
        code, out, _ = run_cli(capsys, ["curvature", "--count", "2",
                                        "--seed", "3"])
        assert code == 0
        rep = json.loads(out)
        assert rep["command"] == "curvature"
        for p in rep["points"]:
            for key in ("tau", "sigma_radial", "kappa_radial", "hsc_radial"):
                assert key in p
            assert p["symmetry_defect"] < 1e-9
            assert p["bianchi_defect"] < 1e-9

    def test_decompose_residuals(self, capsys):
        code, out, _ = run_cli(capsys, ["decompose", "--count", "2",
                                        "--seed", "7"])
        assert code == 0
        rep = json.loads(out)
        assert rep["pass"] is True
        for p in rep["points"]:
            dec = p["decomposition"]
            assert dec["residual"] < 1e-6
            assert "class" in dec and "k" in dec


class TestMeridianCSV:
    def test_bochner_csv_contract(self, capsys):
        code, out, _ = run_cli(capsys, ["meridian", "bochner", "--c1", "1",
                                        "--c2", "0", "--t0", "0.4",
                                        "--t1", "1.2", "--steps", "41"])
        assert code == 0
        header, rows = parse_csv(out)
        assert header == CSV_HEADER
        assert len(rows) == 41
        assert all(len(r) == 10 for r in rows)
        vals = [[float(f) for f in r] for r in rows]
        ts = [v[1] for v in vals]
        assert all(t1 > t0 for t0, t1 in zip(ts, ts[1:]))
        for v in vals:
            assert abs(v[7]) < 1e-9                      # c column vanishes
            assert abs(v[9] - 4.0 / v[1] ** 2) < 1e-10   # a + k^2

    def test_seventeen_digit_round_trip(self, capsys):
        _, out, _ = run_cli(capsys, ["meridian", "bochner", "--c1", "0.5",
                                     "--c2", "1", "--t0", "0.3", "--t1", "0.9",
                                     "--steps", "33"])
        _, rows = parse_csv(out)
        for row in rows:
            for field in row:
                assert f"{float(field):.17g}" == field

    def test_type_violation_exits_one(self, capsys):
        code, out, _ = run_cli(capsys, ["meridian", "bochner", "--c1", "-1",
                                        "--c2", "0", "--t0", "0.4",
                                        "--t1", "1.2"])
        assert code == 1
        rep = json.loads(out)
        assert rep["error"] == "TypeConstraintError"
        assert rep["schema_version"] == 1

    def test_const_hsc_domain_error(self, capsys):
        code, out, _ = run_cli(capsys, ["meridian", "const-hsc", "--type", "III",
                                        "--a", "-1", "--t0", "1.0",
                                        "--t1", "2.0"])
        assert code == 1
        assert json.loads(out)["error"] == "DomainError"

    def test_const_hsc_type_three_table(self, capsys):
        code, out, _ = run_cli(capsys, ["meridian", "const-hsc", "--type", "III",
                                        "--a", "-1", "--t0", "3.0",
                                        "--t1", "5.0", "--steps", "33"])
        assert code == 0
        _, rows = parse_csv(out)
        vals = [[float(f) for f in r] for r in rows]
        ss = [v[0] for v in vals]
        assert all(s1 < s0 for s0, s1 in zip(ss, ss[1:]))
        for v in vals:
            assert v[8] < 0                               # k < 0
            assert abs(v[9] + 4.0 / v[1] ** 2) < 1e-10


class TestSasaki:
    def test_sphere_report(self, capsys):
        code, out, _ = run_cli(capsys, ["sasaki", "--r", "2"])
        assert code == 0
        rep = json.loads(out)
        assert rep["command"] == "sasaki"
        assert abs(rep["alpha"] - 0.25) < 1e-10
        assert rep["type"] == "III"
        assert abs(rep["c_plus_3a2"] + 0.75) < 1e-8

    def test_small_radius_domain_error(self, capsys):
        code, out, _ = run_cli(capsys, ["sasaki", "--r", "0.5"])
        assert code == 1
        assert json.loads(out)["error"] == "DomainError"

    def test_intrinsic_family(self, capsys):
        code, out, _ = run_cli(capsys, ["sasaki", "--family-h1", "--q", "2"])
        assert code == 0
        rep = json.loads(out)
        assert abs(rep["alpha"] - 1.0) < 1e-8
        assert abs(rep["c"] + 4.0) < 1e-8

    def test_missing_radius_is_usage_error(self, capsys):
        code, _, err = run_cli(capsys, ["sasaki"])
        assert code == 2
        assert "--r" in err


class TestVerifyCommand:
    def test_bochner_suite_json(self, capsys):
        code, out, _ = run_cli(capsys, ["verify", "--suite", "bochner",
                                        "--json"])
        assert code == 0
        rep = json.loads(out)
        assert rep["pass"] is True
        assert [r["number"] for r in rep["results"]] == [6, 9]
        assert all(r["passed"] for r in rep["results"])

    def test_bochner_suite_text(self, capsys):
        code, out, _ = run_cli(capsys, ["verify", "--suite", "bochner"])
        assert code == 0
        assert "criterion  6" in out
        assert "2/2 criteria passed" in out


class TestUsageAndConfig:
    def test_unknown_command_exits_two(self, capsys):
        code, _, _ = run_cli(capsys, ["frobnicate"])
        assert code == 2

    def test_missing_required_flag(self, capsys):
        code, _, _ = run_cli(capsys, ["meridian", "bochner", "--c1", "1"])
        assert code == 2

    def test_bad_config_json(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{nope")
        code, _, err = run_cli(capsys, ["check-potential", "--config",
                                        str(bad)])
        assert code == 2
        assert err.strip()

    def test_unknown_config_field(self, capsys, tmp_path):
        odd = tmp_path / "odd.json"
        odd.write_text(json.dumps({"widget": 3}))
        code, _, err = run_cli(capsys, ["check-potential", "--config",
                                        str(odd)])
        assert code == 2
        assert "widget" in err

    def test_partial_potential_in_config(self, capsys, tmp_path):
        cfgfile = tmp_path / "partial.json"
        cfgfile.write_text(json.dumps({"potential": {"kind": "log"}}))
        code, _, err = run_cli(capsys, ["check-potential", "--config",
                                        str(cfgfile)])
        assert code == 2
        assert "'a'" in err

    def test_flags_override_config(self, capsys, tmp_path):
        cfgfile = tmp_path / "run.json"
        cfgfile.write_text(json.dumps({
            "potential": {"kind": "log", "a": -2.0, "r0": 1.0},
            "points": {"count": 2, "seed": 5},
        }))
        code, out, _ = run_cli(capsys, ["check-potential", "--config",
                                        str(cfgfile), "--a", "-1.5"])
        assert code == 0
        rep = json.loads(out)
        assert rep["config"]["potential"]["a"] == -1.5
        assert rep["config"]["potential"]["r0"] == 1.0
        assert len(rep["points"]) == 2

    def test_explicit_points_in_config(self, capsys, tmp_path):
        cfgfile = tmp_path / "pts.json"
        cfgfile.write_text(json.dumps({
            "points": [[0.0, 0.0, 0.0, 1.5], [0.1, 0.0, 0.0, 1.6]],
        }))
        code, out, _ = run_cli(capsys, ["check-potential", "--config",
                                        str(cfgfile)])
        assert code == 0
        rep = json.loads(out)
        assert [p["point"] for p in rep["points"]] == [
            [0.0, 0.0, 0.0, 1.5], [0.1, 0.0, 0.0, 1.6]]

    def test_bad_thread_env_is_usage_error(self, capsys, monkeypatch):
        monkeypatch.setenv("QCK_THREADS", "lots")
        code, _, err = run_cli(capsys, ["check-potential", "--count", "2"])
        assert code == 2
        assert "QCK_THREADS" in err


class TestDeterminism:
    def test_repeat_runs_are_identical(self, capsys):
        argv = ["check-potential", "--count", "3", "--seed", "9"]
        code1, out1, _ = run_cli(capsys, argv)
        code2, out2, _ = run_cli(capsys, argv)
        assert code1 == code2 == 0
        assert out1 == out2

    def test_thread_cap_does_not_change_output(self, capsys, monkeypatch):
        argv = ["decompose", "--count", "4", "--seed", "6"]
        _, base, _ = run_cli(capsys, argv)
        monkeypatch.setenv("QCK_THREADS", "1")
        _, capped, _ = run_cli(capsys, argv)
        assert capped == base
