import csv
import io
import json

from zqdist.cli import main


def run(tmp_path, *argv, name="out.csv"):
    out = tmp_path / name
    code = main([*argv, "--out", str(out)])
    return code, out.read_text(encoding="utf-8") if out.exists() else ""


class TestSphereCommand:
    def test_z3_rows(self, tmp_path):
        code, text = run(tmp_path, "sphere", "--q", "3", "--d", "3", "--all-t")
        assert code == 0
        lines = text.strip().splitlines()
        assert lines[0].startswith("q,d,t,count_enum")
        assert lines[1].split(",")[:5] == ["3", "3", "0", "9", "9"]
        assert lines[2].split(",")[:5] == ["3", "3", "1", "6", "6"]
        assert lines[3].split(",")[:5] == ["3", "3", "2", "12", "12"]

    def test_even_q_counts_only(self, tmp_path):
        code, text = run(tmp_path, "sphere", "--q", "4", "--d", "2", "--all-t")
        assert code == 0
        assert "true" in text


class TestGaussCommand:
    def test_verify_small(self, tmp_path):
        code, text = run(tmp_path, "gauss", "--verify", "--n-max", "25")
        assert code == 0
        assert text.count("true") == 25

    def test_single_eval(self, tmp_path):
        code, text = run(tmp_path, "gauss", "--a", "3", "--n", "4")
        assert code == 0
        row = text.strip().splitlines()[1].split(",")
        assert row[3] == "2" and row[4] == "-2"  # G(3, 4) = 2 - 2i

    def test_missing_args(self, tmp_path):
        code, _ = run(tmp_path, "gauss")
        assert code == 2


class TestSpectrumCommand:
    def test_sweep(self, tmp_path):
        code, text = run(tmp_path, "spectrum", "--q", "3", "5", "--all-t")
        assert code == 0
        assert all(line.endswith("true") for line in text.strip().splitlines()[1:])

    def test_even_q_rejected(self, tmp_path):
        code, _ = run(tmp_path, "spectrum", "--q", "4", "--all-t")
        assert code == 2


class TestNuCommand:
    def test_construct_then_nu_flow(self, tmp_path):
        setfile = tmp_path / "ew.txt"
        code = main(["construct", "even-weight", "--d", "3", "--out-set", str(setfile),
                     "--check", "--out", str(tmp_path / "c.csv")])
        assert code == 0
        crow = (tmp_path / "c.csv").read_text().strip().splitlines()[1]
        assert crow.split(",")[5] == "0"  # distances column is exactly "0"
        code, text = run(tmp_path, "nu", "--set-file", str(setfile), name="nu.csv")
        assert code == 0
        rows = [line.split(",") for line in text.strip().splitlines()[1:]]
        by_t = {r[4]: r[5] for r in rows}
        assert by_t["0"] == "16" and by_t["1"] == "0"  # Delta(E) = {0}

    def test_random_set_brute_vs_spectral(self, tmp_path):
        code, text = run(tmp_path, "nu", "--random", "40", "--q", "9", "--d", "3",
                         "--seed", "11")
        assert code == 0
        for line in text.strip().splitlines()[1:]:
            assert line.endswith("true")

    def test_budget_error_exit_2(self, tmp_path):
        code, _ = run(tmp_path, "nu", "--random", "40", "--q", "9", "--d", "3",
                      "--max-pairs", "10", "--max-grid", "10")
        assert code == 2

    def test_missing_source(self, tmp_path):
        code, _ = run(tmp_path, "nu")
        assert code == 2

    def test_missing_file(self, tmp_path):
        code, _ = run(tmp_path, "nu", "--set-file", str(tmp_path / "nope.txt"))
        assert code == 2


class TestCertificateCommand:
    def test_lattice(self, tmp_path):
        code, text = run(tmp_path, "certificate", "--lattice", "3", "2", "--d", "3")
        assert code == 0
        assert all(line.endswith("true") for line in text.strip().splitlines()[1:])


class TestConstructCommand:
    def test_lattice_with_check(self, tmp_path):
        code, text = run(tmp_path, "construct", "lattice", "--p", "3", "--ell", "2",
                         "--d", "3", "--check")
        assert code == 0
        header, row = list(csv.reader(io.StringIO(text)))[:2]
        rec = dict(zip(header, row))
        assert rec["size"] == "27" and rec["distances"] == "0"

    def test_missing_params(self, tmp_path):
        code, _ = run(tmp_path, "construct", "lattice")
        assert code == 2


class TestVerifyAll:
    ARGS = ["verify-all", "--n-max", "15", "--q-max", "9", "--sets-per-q", "2"]

    def test_passes_and_deterministic(self, tmp_path):
        code1, text1 = run(tmp_path, *self.ARGS, name="v1.csv")
        code2, text2 = run(tmp_path, *self.ARGS, name="v2.csv")
        assert code1 == code2 == 0
        assert text1 == text2
        assert ",false" not in text1

    def test_json_mirror(self, tmp_path):
        out = tmp_path / "v.json"
        code = main([*self.ARGS, "--format", "json", "--out", str(out)])
        assert code == 0
        rows = json.loads(out.read_text())
        assert rows and all(r["passed"] for r in rows)


class TestUsage:
    def test_unknown_command(self):
        assert main(["no-such-command"]) == 2

    def test_no_command(self):
        assert main([]) == 2


class TestOutDirEnv:
    def test_relative_out_resolves_under_env(self, tmp_path, monkeypatch):
        monkeypatch.setenv("ZQDIST_OUT_DIR", str(tmp_path))
        code = main(["sphere", "--q", "3", "--d", "1", "--all-t", "--out", "sub/rows.csv"])
        assert code == 0
        assert (tmp_path / "sub" / "rows.csv").exists()
