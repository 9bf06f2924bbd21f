import json

import pytest

from fusionk import fusion_ring
from fusionk.cli import EXIT_CONFIG, EXIT_FAILED, EXIT_OK, main, parse_k, parse_tolerances, ConfigError

from .helpers import GOLDEN


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestBuild:
    def test_json_to_stdout_matches_golden(self, capsys):
        code, out, _ = run(capsys, "build", "--k", "0")
        assert code == EXIT_OK
        assert out.encode() == (GOLDEN / "k0.json").read_bytes()
        assert len(json.loads(out)["basis"]) == 18

    def test_csv_range_has_one_header(self, capsys):
        code, out, _ = run(capsys, "build", "--k", "0..2", "--format", "csv")
        assert code == EXIT_OK
        lines = out.splitlines()
        assert lines.count("k,x,y,product") == 1
        assert {line.split(",", 1)[0] for line in lines[1:]} == {"0", "1", "2"}

    def test_pretty(self, capsys):
        code, out, _ = run(capsys, "build", "--k", "0", "--format", "pretty")
        assert code == EXIT_OK and out.startswith("k = 0")

    def test_json_range_into_directory(self, capsys, tmp_path):
        code, _, _ = run(capsys, "build", "--k", "0..1", "--out", str(tmp_path))
        assert code == EXIT_OK
        assert (tmp_path / "fusion_k1.json").read_bytes() == (GOLDEN / "k1.json").read_bytes()

    def test_json_range_with_pattern(self, capsys, tmp_path):
        code, _, _ = run(capsys, "build", "--k", "0..1", "--out", str(tmp_path / "t{k}.json"))
        assert code == EXIT_OK
        assert sorted(p.name for p in tmp_path.iterdir()) == ["t0.json", "t1.json"]

    def test_json_range_to_stdout_is_refused(self, capsys):
        code, _, err = run(capsys, "build", "--k", "0..1")
        assert code == EXIT_CONFIG and "--out" in err

    def test_output_is_deterministic(self, capsys, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        run(capsys, "build", "--k", "2", "--out", str(a))
        run(capsys, "build", "--k", "2", "--out", str(b))
        assert a.read_bytes() == b.read_bytes()


class TestConfiguration:
    def test_k_above_maximum(self, capsys):
        code, _, err = run(capsys, "build", "--k", "30")
        assert code == EXIT_CONFIG and "--allow-large" in err

    def test_environment_raises_the_maximum(self, capsys, monkeypatch):
        monkeypatch.setenv("FUSIONK_MAX_K", "1")
        code, _, _ = run(capsys, "identities", "--k", "2")
        assert code == EXIT_CONFIG
        code, _, _ = run(capsys, "identities", "--k", "2", "--allow-large")
        assert code == EXIT_OK
        monkeypatch.setenv("FUSIONK_MAX_K", "60")
        code, _, _ = run(capsys, "identities", "--k", "40", "--checks", "case2")
        assert code == EXIT_OK

    def test_bad_environment_value(self, capsys, monkeypatch):
        monkeypatch.setenv("FUSIONK_MAX_K", "many")
        code, _, err = run(capsys, "identities", "--k", "0")
        assert code == EXIT_CONFIG and "FUSIONK_MAX_K" in err

    @pytest.mark.parametrize("argv", [
        ["build", "--k", "0", "--bogus"],
        ["build"],
        ["frobnicate", "--k", "0"],
        ["build", "--k", "x"],
        ["build", "--k", "3..1"],
        ["build", "--k", "-1"],
        ["build", "--k", "0", "--format", "xml"],
        ["verify", "--k", "0", "--checks", "nope"],
        ["identities", "--k", "0", "--checks", "frobenius"],
        ["verify", "--k", "0", "--tolerance", "rounding"],
        ["verify", "--k", "0", "--tolerance", "speed=1"],
        ["verify", "--k", "0", "--tolerance", "rounding=-1"],
    ])
    def test_usage_errors_exit_1(self, capsys, argv):
        assert run(capsys, *argv)[0] == EXIT_CONFIG

    def test_parse_k(self):
        assert parse_k("3") == (3,)
        assert parse_k("0..2") == (0, 1, 2)
        with pytest.raises(ConfigError):
            parse_k("1..")

    def test_parse_tolerances(self):
        t = parse_tolerances(["rounding=1e-4", "dimension=2e-6"])
        assert t.rounding == 1e-4 and t.dimension == 2e-6
        assert t.weights == 1e-8

    def test_missing_source_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "verify", "--from", str(tmp_path / "none.json"))
        assert code == EXIT_CONFIG and "cannot read" in err

    def test_help(self, capsys):
        assert main(["--help"]) == EXIT_OK


class TestVerify:
    def test_single_check(self, capsys):
        code, out, _ = run(capsys, "verify", "--k", "0", "--checks", "frobenius")
        assert code == EXIT_OK
        header, row = out.splitlines()
        assert header.split() == ["k", "frobenius"]
        assert row.split() == ["0", "pass"]

    def test_all_checks_small_range(self, capsys):
        code, out, _ = run(capsys, "verify", "--k", "0..1")
        assert code == EXIT_OK
        assert "FAIL" not in out and "skip" not in out
        assert len(out.splitlines()) == 3

    def test_tolerance_too_tight_fails(self, capsys):
        code, _, err = run(capsys, "verify", "--k", "3", "--checks", "frobenius",
                           "--tolerance", "rounding=1e-30")
        assert code == EXIT_FAILED and "failed" in err

    def test_from_file(self, capsys, tmp_path):
        code, out, _ = run(capsys, "verify", "--from", str(GOLDEN / "k1.json"),
                           "--checks", "frobenius,associativity,orthonormality")
        assert code == EXIT_OK
        assert out.splitlines()[1].split() == ["1", "pass", "pass", "skip"]

    def test_corrupted_file_fails(self, capsys, tmp_path):
        t = fusion_ring.deserialize((GOLDEN / "k0.json").read_bytes())
        bad = tmp_path / "bad.json"
        bad.write_bytes(fusion_ring.serialize(t.with_coefficient("beta3", "gamma3", "alpha0", 2)))
        code, out, _ = run(capsys, "verify", "--from", str(bad), "--checks", "frobenius")
        assert code == EXIT_FAILED
        assert "FAIL" in out and "k=0 frobenius" in out

    def test_truncated_file_exits_2(self, capsys, tmp_path):
        bad = tmp_path / "cut.json"
        bad.write_bytes((GOLDEN / "k0.json").read_bytes()[:500])
        code, _, err = run(capsys, "verify", "--from", str(bad))
        assert code == EXIT_FAILED and "line" in err

    def test_from_file_with_wrong_k(self, capsys):
        assert run(capsys, "verify", "--k", "3", "--from", str(GOLDEN / "k0.json"))[0] == EXIT_CONFIG


class TestOtherCommands:
    def test_crosscheck(self, capsys):
        code, out, _ = run(capsys, "crosscheck", "--k", "0..1")
        assert code == EXIT_OK
        assert "FAIL" not in out

    def test_crosscheck_detects_wrong_entry(self, capsys, tmp_path):
        t = fusion_ring.deserialize((GOLDEN / "k0.json").read_bytes())
        bad = tmp_path / "bad.json"
        bad.write_bytes(fusion_ring.serialize(t.with_coefficient("g", "g", "g", 3)))
        code, out, _ = run(capsys, "crosscheck", "--from", str(bad))
        assert code == EXIT_FAILED and "N_{g,g}^{g}" in out

    def test_graph_dot(self, capsys, tmp_path):
        code, out, _ = run(capsys, "graph", "--k", "1")
        assert code == EXIT_OK
        assert out.count("graph ") == 2 and '"beta3" -- "beta2";' in out
        code, _, _ = run(capsys, "graph", "--k", "0..2", "--out", str(tmp_path))
        assert code == EXIT_OK
        assert sorted(p.name for p in tmp_path.iterdir()) == [f"fusion_k{k}.dot" for k in range(3)]

    def test_identities(self, capsys):
        code, out, _ = run(capsys, "identities", "--k", "0..5")
        assert code == EXIT_OK
        assert out.splitlines()[0].split() == ["k", "charpoly", "key_identity", "remark",
                                               "case2", "parity", "g2g"]
        assert "FAIL" not in out
