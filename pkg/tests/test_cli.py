import io
import json

import pytest

from fuzzyols.cli import describe_rules, main
from fuzzyols.fis import FuzzyInferenceSystem, FuzzyPartition, Rule
from fuzzyols.serialization import dumps_fis, load_fis

from conftest import DATA

AUTO = str(DATA / "auto_mpg.csv")
CPU = str(DATA / "cpu_performance.csv")


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


@pytest.fixture(scope="module")
def learned(tmp_path_factory):
    d = tmp_path_factory.mktemp("learn")
    code, text = run("learn", "--mode", "modified", "--data", AUTO, "--alpha", "0.1", "--epsilon", "0.01",
                     "--iter-max", "7", "--out-dir", str(d), "--emit-curves")
    assert code == 0
    return d, text


class TestLearn:
    def test_outputs(self, learned):
        d, text = learned
        for name in ("fis.json", "trace.csv", "report.csv", "curves.csv"):
            assert (d / name).is_file()
        assert "iter_max = 7" in text and "alpha = 0.1" in text and "seed = 42" in text
        fis = load_fis(d / "fis.json")
        assert 5 <= fis.n_rules <= 40
        assert (d / "report.csv").read_text().startswith("# fuzzyols-report v1")

    def test_byte_identical_reruns(self, learned, tmp_path):
        d, _ = learned
        code, _ = run("learn", "--data", AUTO, "--iter-max", "7", "--out-dir", str(tmp_path))
        assert code == 0
        for name in ("fis.json", "trace.csv", "report.csv"):
            assert (tmp_path / name).read_bytes() == (d / name).read_bytes()

    def test_original_rule_cap(self, tmp_path):
        code, text = run("learn", "--mode", "original", "--data", CPU, "--s", "0.2", "--max-rules", "15",
                         "--out-dir", str(tmp_path))
        assert code == 0 and "# rules = 15" in text
        assert load_fis(tmp_path / "fis.json").n_rules == 15

    def test_config_file_and_override(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("mode = original\nmax_rules = 4\ns = 0.3\n")
        code, text = run("learn", "--data", CPU, "--config", str(cfg), "--max-rules", "6", "--out-dir", str(tmp_path))
        assert code == 0 and "max_rules = 6" in text and "s = 0.3" in text and "mode = original" in text

    def test_missing_data(self, tmp_path):
        assert run("learn", "--data", str(tmp_path / "nope.csv"))[0] == 2

    def test_bad_flag_value(self):
        assert run("learn", "--data", AUTO, "--alpha", "1.5")[0] == 2
        assert run("learn", "--data", AUTO, "--mode", "other")[0] == 2
        assert run("frobnicate")[0] == 2

    def test_computation_error(self, tmp_path):
        p = tmp_path / "flat.csv"
        p.write_text("a,y\n1,0\n2,0\n3,0\n")
        assert run("learn", "--data", str(p), "--out-dir", str(tmp_path))[0] == 1

    def test_bad_data_cell(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("a,y\n1,0\n2,zz\n")
        assert run("learn", "--data", str(p), "--out-dir", str(tmp_path))[0] == 2


class TestCrossval:
    def test_table(self, tmp_path):
        code, text = run("crossval", "--data", CPU, "--mode", "original", "--s", "0.05", "--caps", "none,5",
                         "--out-dir", str(tmp_path), "--emit-curves")
        assert code == 0
        rows = [line.split("\t") for line in text.splitlines() if not line.startswith("#") and "=" not in line]
        assert rows[0][:4] == ["row", "#MF", "#MF(used)", "#R[inf]"]
        assert [r[0] for r in rows[1:]] == ["orig. (0)", "orig. (0.1)", "orig. (0.2)"]
        assert (tmp_path / "folds.csv").read_text().count("\n") == 1 + 2 * 10 * 3
        assert (tmp_path / "curves.csv").is_file()

    def test_too_many_folds(self, tmp_path):
        p = tmp_path / "small.csv"
        p.write_text("a,y\n" + "".join(f"{i},{i * 2}\n" for i in range(5)))
        assert run("crossval", "--data", str(p), "--folds", "10")[0] == 2

    def test_parallel_matches_serial(self):
        a = run("crossval", "--data", CPU, "--iter-max", "4", "--workers", "1")
        b = run("crossval", "--data", CPU, "--iter-max", "4", "--workers", "3")
        assert a == b and a[0] == 0


class TestDescribe:
    def fis(self, rules):
        parts = tuple(FuzzyPartition.standardized_from_centers(j, [0, 1, 2]) for j in range(4))
        return FuzzyInferenceSystem(parts, tuple(rules))

    def test_single_rule(self):
        text = describe_rules(self.fis([Rule((), 23.4567)]))
        assert text.splitlines()[1] == "Rule 1: then output is 23.457"

    def test_premise_rendering(self):
        rule = Rule(((0, 2), (1, 0), (2, 0), (3, 0)), 0.9991)
        line = describe_rules(self.fis([rule])).splitlines()[1]
        assert line == "Rule 1: If v1 is A_3 and v2 is A_1 and v3 is A_1 and v4 is A_1, then output is 0.999"

    def test_labels_and_precision(self):
        line = describe_rules(self.fis([Rule(((1, 2),), 2.5)]), ["low", "mid", "high"], 1).splitlines()[1]
        assert line == "Rule 1: If v2 is high, then output is 2.5"

    def test_empty(self):
        assert describe_rules(self.fis([])) == "0 rules\n"

    def test_command(self, learned):
        d, _ = learned
        code, text = run("describe", str(d / "fis.json"), "--precision", "2")
        assert code == 0
        assert text.splitlines()[0].endswith("rules")
        assert text.splitlines()[1].startswith("Rule 1: If ")

    def test_broken_document(self, tmp_path):
        p = tmp_path / "f.json"
        p.write_text('{"format": "fuzzyols-fis", "version": 1, "inpu')
        assert run("describe", str(p))[0] == 2
        p.write_text(json.dumps({"format": "fuzzyols-fis", "version": 7}))
        assert run("describe", str(p))[0] == 2


class TestEvaluateReduce:
    def test_three_threshold_block(self, learned, tmp_path):
        d, _ = learned
        code, text = run("evaluate", str(d / "fis.json"), "--data", AUTO, "--out", str(tmp_path / "r.csv"))
        assert code == 0
        lines = text.splitlines()
        assert lines[0].split("\t") == ["alpha", "n_active", "ci", "pi", "rmse", "mae"]
        assert [line.split("\t")[0] for line in lines[1:]] == ["0", "0.1", "0.2"]

    def test_reduce(self, learned, tmp_path):
        d, _ = learned
        out = tmp_path / "reduced.json"
        code, _ = run("reduce", str(d / "fis.json"), "--data", AUTO, "--c", "6", "--out", str(out))
        assert code == 0
        assert len(set(load_fis(out).conclusions.tolist())) <= 6

    def test_reduce_too_many_levels(self, learned, tmp_path):
        d, _ = learned
        code, _ = run("reduce", str(d / "fis.json"), "--data", AUTO, "--c", "100000", "--out", str(tmp_path / "x"))
        assert code == 1


def test_module_entry_point():
    import subprocess
    import sys

    proc = subprocess.run([sys.executable, "-m", "fuzzyols", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("fuzzyols ")
