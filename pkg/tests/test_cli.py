import csv
import io
import json
import math

import pytest

from nqdecision.cli import main
from nqdecision.model import OBSERVABLES
from nqdecision.report import SCHEMA

FAST = ["--restarts", "2"]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestFit:
    def test_json_report(self, capsys, tmp_path):
        path = tmp_path / "r.json"
        code, _, _ = run(capsys, "fit", "--dataset", "busemeyer2009-narrow", *FAST, "--format", "json", "--out", str(path))
        assert code == 0
        report = json.loads(path.read_text())
        assert report["schema"] == SCHEMA
        assert report["observables"] == list(OBSERVABLES)
        (entry,) = report["datasets"]
        assert entry["name"] == "busemeyer2009-narrow"
        for key in ("observed", "result", "modified", "error_result", "error_modified"):
            assert list(entry[key]) == list(OBSERVABLES)
        assert set(entry["params"]) == {"h_G", "h_B", "alpha", "p_G", "t"}
        assert report["metadata"]["restarts"] == 2
        series = report["figures"]["comparison"]["series"]["p_a"]
        assert series["observed"] == [0.69]

    def test_byte_identical_reruns(self, capsys, tmp_path):
        paths = [tmp_path / "a.json", tmp_path / "b.json"]
        for p in paths:
            assert main(["fit", "--dataset", "wang-exp1-narrow", "--seed", "7", *FAST, "--format", "json", "--out", str(p)]) == 0
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_unknown_dataset(self, capsys):
        code, _, err = run(capsys, "fit", "--dataset", "nosuch")
        assert code == 1
        assert "unknown dataset" in err

    def test_non_convergence_exit_code(self, capsys, tmp_path):
        path = tmp_path / "r.md"
        code, _, err = run(capsys, "fit", "--dataset", "average-narrow", "--restarts", "1", "--max-iter", "2", "--out", str(path))
        assert code == 2
        assert "did not converge" in err
        assert path.read_text().startswith("| Dataset")

    def test_markdown_rows(self, capsys):
        code, out, _ = run(capsys, "fit", "--dataset", "average-narrow", "--dataset", "wang-exp2-narrow", *FAST)
        assert code == 0
        first_table = out.split("\n\n")[0].splitlines()
        assert len(first_table) == 2 + 2 * 3
        assert [line.split("|")[2].strip() for line in first_table[2:5]] == ["Initial", "Result", "Modified result"]
        assert "| 0.22 | 0.36 | 0.78 | 0.65 | 0.58 | 0.63 |" in first_table[2]

    def test_csv_parses_as_plain_numbers(self, capsys, tmp_path):
        record = tmp_path / "mine.json"
        record.write_text(json.dumps({
            "name": "mine", "face_type": "wide", "p_g": 0.5, "p_a_given_g": 0.4,
            "p_b": 0.5, "p_a_given_b": 0.6, "p_t": 0.5, "p_a": 0.52,
        }))
        code, out, _ = run(capsys, "fit", "--dataset", str(record), *FAST, "--format", "csv")
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out)))
        assert [r["row"] for r in rows] == ["initial", "result", "modified"]
        assert rows[0]["face_type"] == "wide"
        for row in rows:
            for key in OBSERVABLES:
                float(row[key])
        assert float(rows[0]["p_a"]) == 0.52

    def test_model_switches_recorded(self, capsys, tmp_path):
        path = tmp_path / "r.json"
        main(["fit", "--dataset", "busemeyer2009-narrow", *FAST, "--hamiltonian-norm", "sqrt",
              "--negation-domain", "joint", "--format", "json", "--out", str(path)])
        config = json.loads(path.read_text())["metadata"]["config"]
        assert config == {"hamiltonian_norm": "sqrt", "d_weighting": "paper", "pab_formula": "paper", "negation_domain": "joint"}

    def test_missing_dataset_flag(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["fit"])
        assert exc.value.code == 1


def test_report_covers_all_narrow_datasets(capsys):
    code, out, _ = run(capsys, "report", "--restarts", "1", "--format", "csv")
    assert code in (0, 2)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 18
    assert len({r["dataset"] for r in rows}) == 6


class TestPredict:
    def test_symmetric_point_json(self, capsys):
        code, out, _ = run(capsys, "predict", "--hg", "0", "--hb", "0", "--alpha", "0", "--pg", "0.5", "--format", "json")
        assert code == 0
        data = json.loads(out)
        pred = data["prediction"]
        assert set(OBSERVABLES) <= set(pred)
        assert pred["p_a_given_b"] == 0.5
        assert pred["p_a"] == pytest.approx(0.5, abs=1e-12)
        assert pred["interference_gap"] == pytest.approx(-0.125, abs=1e-12)
        assert data["params"]["t"] == math.pi / 2

    def test_text_output(self, capsys):
        code, out, _ = run(capsys, "predict", "--hg", "0", "--hb", "0", "--alpha", "0", "--pg", "0.5")
        assert code == 0
        assert "p_a_given_b  0.500000" in out
        assert "interference_gap" in out

    def test_out_of_range_pg(self, capsys):
        code, _, err = run(capsys, "predict", "--hg", "0", "--hb", "0", "--alpha", "0", "--pg", "1.01")
        assert code == 1
        assert "p_G" in err

    def test_missing_parameter(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["predict", "--hg", "0"])
        assert exc.value.code == 1
        assert "usage" in capsys.readouterr().err


class TestNegate:
    def test_binary_converges(self, capsys):
        code, out, _ = run(capsys, "negate", "--dist", "1,0", "--iterations", "60", "--format", "json")
        assert code == 0
        data = json.loads(out)
        last = data["iterations"][-1]
        assert last["step"] == 60
        assert last["probs"] == pytest.approx([0.5, 0.5], abs=1e-9)
        assert last["entropy"] == pytest.approx(math.log(2), abs=1e-12)

    def test_uniform_rows(self, capsys):
        code, out, _ = run(capsys, "negate", "--dist", "0.5,0.5", "--iterations", "3", "--format", "csv")
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out)))
        assert len(rows) == 3
        assert all(float(r["p1"]) == 0.5 and float(r["p2"]) == 0.5 for r in rows)

    def test_text_table(self, capsys):
        code, out, _ = run(capsys, "negate", "--dist", "0.7,0.2,0.1", "--iterations", "2")
        assert code == 0
        assert len(out.splitlines()) == 4

    @pytest.mark.parametrize("dist", ["0.9,0.2", "1", "a,b", "-0.5,1.5"])
    def test_bad_distribution(self, capsys, dist):
        code, _, err = run(capsys, "negate", f"--dist={dist}")
        assert code == 1
        assert "error" in err
