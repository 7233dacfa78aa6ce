import argparse
import json
import math

import pytest

from bkhash.cli import main, parse_number

FAST = ["--restarts", "48"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestParseNumber:
    @pytest.mark.parametrize(
        "text,value",
        [("9/100", 0.09), ("(4+sqrt(5))/44", (4 + math.sqrt(5)) / 44), ("-0.5", -0.5), ("3 * 2 - 1", 5.0)],
    )
    def test_values(self, text, value):
        assert parse_number(text) == pytest.approx(value, rel=1e-15)

    @pytest.mark.parametrize("text", ["1/0", "__import__('os')", "sqrt(1, 2)", "eps", "2**3", ""])
    def test_rejects(self, text):
        with pytest.raises(argparse.ArgumentTypeError):
            parse_number(text)


class TestBound:
    def test_km_markdown(self, capsys):
        code, out, _ = run(capsys, "bound", "--method", "km", "--b", "6", "--k", "6")
        assert code == 0
        assert "| km | 6 | 6 | 4 |  | 0.0925926 |" in out

    def test_fk_csv(self, capsys):
        code, out, _ = run(capsys, "bound", "--method", "fk", "--b", "4", "--k", "4", "--format", "csv")
        assert code == 0
        assert out.splitlines()[1] == "fk,4,4,,,0.3750000"

    def test_conjecture_is_labelled(self, capsys):
        _, out, _ = run(capsys, "bound", "--method", "conjecture", "--b", "6", "--k", "6")
        assert "CONJECTURE" in out

    def test_km_range(self, capsys):
        _, out, _ = run(capsys, "bound", "--method", "km", "--b", "5", "--k", "4", "--j-min", "1", "--format", "json")
        rep = json.loads(out)["reports"][0]
        assert rep["intermediates"]["argmin_j"] == rep["j"] >= 1

    def test_cluster_json_manifest(self, capsys):
        code, out, _ = run(capsys, "bound", "--method", "cluster-min", "--b", "6", "--k", "6", "--format", "json", *FAST)
        assert code == 0
        doc = json.loads(out)
        assert doc["manifest"]["search_config"]["restarts"] == 48
        rep = doc["reports"][0]
        assert rep["value"] == pytest.approx(5 / 59, abs=1e-12)
        assert rep["epsilon"] == 0.05

    def test_cluster_verbose_and_precision(self, capsys):
        _, out, _ = run(capsys, "bound", "--method", "cluster-max", "--b", "7", "--k", "7", "--eps", "9/100",
                        "--precision", "5", "--verbose", *FAST)
        assert "0.04090" in out and "M_cross_factor_1" in out and "note:" in out

    def test_output_is_reproducible(self, capsys):
        argv = ["bound", "--method", "psimax", "--b", "5", "--k", "5", "--format", "json", "--seed", "3", *FAST]
        _, first, _ = run(capsys, *argv)
        _, second, _ = run(capsys, *argv)
        assert first == second

    @pytest.mark.parametrize(
        "argv",
        [
            ["bound", "--method", "km", "--b", "3", "--k", "5"],
            ["bound", "--method", "dvj", "--b", "5", "--k", "3"],
            ["bound", "--method", "cluster-max", "--b", "12", "--k", "9"],
            ["bound", "--method", "cluster-min", "--b", "6", "--k", "6", "--eps", "0.5"],
            ["bound", "--method", "cluster-min", "--b", "6", "--k", "6", "--config", "/nonexistent/file"],
        ],
    )
    def test_parameter_errors(self, capsys, argv):
        code, out, err = run(capsys, *argv)
        assert code == 2 and out == "" and err.startswith("error:")

    def test_argparse_errors_exit_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["bound", "--method", "km", "--b", "6", "--k", "6", "--eps", "oops"])
        assert exc.value.code == 2
        with pytest.raises(SystemExit) as exc:
            main(["bound", "--method", "km", "--b", "6", "--k", "6", "--precision", "0"])
        assert exc.value.code == 2


class TestConfig:
    def test_file_and_override(self, capsys, tmp_path):
        cfg = tmp_path / "search.ini"
        cfg.write_text("restarts = 40\nmax-iterations = 500\nseed = 9\n")
        _, out, _ = run(capsys, "psi-max", "--b", "5", "--j", "3", "--config", str(cfg), "--seed", "4",
                        "--format", "json")
        sc = json.loads(out)["manifest"]["search_config"]
        assert (sc["restarts"], sc["max_iterations"], sc["seed"]) == (40, 500, 4)

    @pytest.mark.parametrize("text", ["colour = red\n", "restarts = many\n", "restarts = 0\n"])
    def test_bad_files(self, capsys, tmp_path, text):
        cfg = tmp_path / "bad.ini"
        cfg.write_text(text)
        code, _, err = run(capsys, "psi-max", "--b", "5", "--j", "3", "--config", str(cfg))
        assert code == 2 and "error" in err


class TestOtherCommands:
    def test_psi_max(self, capsys):
        code, out, _ = run(capsys, "psi-max", "--b", "6", "--k", "6", "--verbose", *FAST)
        assert code == 0 and "0.1920001" in out and "p = " in out
        code, _, err = run(capsys, "psi-max", "--b", "6")
        assert code == 2 and "--j or --k" in err

    def test_cluster(self, capsys):
        code, out, _ = run(capsys, "cluster", "--method", "cluster-min", "--b", "6", "--k", "6", "--verbose", *FAST)
        assert code == 0
        assert "| M | 0.1851852 |" in out and "| eta0 | 1.0000000 |" in out and "M1 witness p" in out
        _, out, _ = run(capsys, "cluster", "--method", "cluster-max", "--b", "7", "--k", "7", "--format", "json", *FAST)
        doc = json.loads(out)
        assert doc["matrix"]["M1"] == pytest.approx(0.085679, abs=1e-6) and len(doc["eta"]) == 8

    def test_sweep(self, capsys):
        code, out, _ = run(capsys, "sweep", "--method", "cluster-max", "--b", "7", "--k", "7",
                           "--eps-grid", "0.08,9/100", "--eps-range", "0.1", "0.11", "2", "--format", "csv", *FAST)
        lines = out.splitlines()
        assert code == 0 and lines[0] == "epsilon,M,bound,best" and len(lines) == 5
        assert sum(line.endswith("*") for line in lines) == 1
        code, _, _ = run(capsys, "sweep", "--method", "cluster-max", "--b", "7", "--k", "7",
                         "--eps-range", "0.1", "0.2", "0")
        assert code == 2

    def test_verify(self, capsys, tmp_path):
        good = tmp_path / "good.txt"
        good.write_text("3 2\n11\n12\n23\n33\n")
        code, out, _ = run(capsys, "verify", str(good), "--k", "3")
        assert code == 0 and "holds for 4 words" in out
        bad = tmp_path / "bad.txt"
        bad.write_text("3 2\n11\n22\n31\n13\n")
        code, out, _ = run(capsys, "verify", str(bad), "--k", "3", "--format", "json")
        doc = json.loads(out)
        assert code == 1 and not doc["holds"] and len(doc["counterexample"]) == 3
        broken = tmp_path / "broken.txt"
        broken.write_text("3 2\n14\n")
        code, _, err = run(capsys, "verify", str(broken), "--k", "3")
        assert code == 2 and "line 2" in err
        code, _, _ = run(capsys, "verify", str(tmp_path / "missing.txt"), "--k", "3")
        assert code == 2

    def test_search(self, capsys):
        code, out, _ = run(capsys, "search", "--b", "3", "--k", "3", "--n", "3", "--verbose")
        assert code == 0 and "maximum (3,3)-hash code of length 3: 6 words" in out
        assert len(out.splitlines()) == 2 + 6
        _, out, _ = run(capsys, "search", "--b", "4", "--k", "3", "--n", "4", "--mode", "greedy", "--seed", "1",
                        "--format", "json")
        doc = json.loads(out)
        assert not doc["exact"] and doc["size"] == len(doc["words"])
        code, _, err = run(capsys, "search", "--b", "4", "--k", "3", "--n", "3", "--mode", "exact", "--budget", "10")
        assert code == 2 and "budget" in err


class TestTable:
    def test_mismatch_exit_code(self, capsys, monkeypatch):
        from bkhash import reference, tables

        fake = {(6, 6): dict(reference.TABLE_I[(6, 6)], dvj=0.2)}
        monkeypatch.setattr(tables, "TABLE_I", fake)
        code, out, err = run(capsys, "table", "1", *FAST)
        assert code == 3 and "(6,6) dvj" in err and "!(0.20000)" in out

    def test_default_precision(self, capsys, monkeypatch):
        from bkhash import reference, tables

        monkeypatch.setattr(tables, "TABLE_I", {(5, 4): reference.TABLE_I[(5, 4)]})
        code, out, _ = run(capsys, "table", "1", "--format", "csv", *FAST)
        assert code == 0 and "0.57303" in out and "0.573030" not in out
