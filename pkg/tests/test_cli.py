import json
import os
import subprocess
import sys

import pytest

from rookcolor.cli import main, parse_duration
from rookcolor.core import in_family, read_matrix


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def latin(tmp_path):
    path = tmp_path / "latin.mat"
    path.write_text("2 2 2\n1 2\n2 1\n")
    return path


class TestVerify:
    def test_latin_square(self, capsys, latin):
        code, out, _ = run(capsys, "verify", str(latin))
        assert code == 0 and "in family M(2,2,2): yes" in out

    def test_not_total(self, capsys, tmp_path):
        path = tmp_path / "part.mat"
        path.write_text("2 2 2\n1 *\n2 1\n")
        code, out, _ = run(capsys, "verify", str(path))
        assert code == 1 and "matrix not total" in out

    def test_incomplete(self, capsys, tmp_path):
        path = tmp_path / "inc.mat"
        path.write_text("2 2 3\n1 2\n3 1\n")
        code, out, _ = run(capsys, "verify", str(path))
        assert code == 1 and "uncovered: 2-3" in out

    def test_parse_error(self, capsys, tmp_path):
        path = tmp_path / "bad.mat"
        path.write_text("2 2 2\n1 x\n2 1\n")
        code, _, err = run(capsys, "verify", str(path))
        assert code == 2 and "line 2, column 3" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, _ = run(capsys, "verify", str(tmp_path / "nope.mat"))
        assert code == 2

    def test_json(self, capsys, latin):
        code, out, _ = run(capsys, "verify", str(latin), "--json")
        report = json.loads(out)
        assert report["schema"] == "rookcolor.report/1"
        assert report["status"] == "VALID" and report["result"]["good_pairs"] == 1


class TestSearchCommands:
    def test_achromatic(self, capsys):
        assert run(capsys, "achromatic", "-p", "1", "-q", "5")[:2] == (0, "5\n")
        assert run(capsys, "achromatic", "-p", "2", "-q", "2")[:2] == (0, "2\n")

    def test_achromatic_bracket(self, capsys, tmp_path):
        out_path = tmp_path / "w.mat"
        code, out, _ = run(capsys, "achromatic", "-p", "5", "-q", "5", "--nodes", "50",
                           "-o", str(out_path))
        assert code == 1 and out.startswith("[")
        assert read_matrix(out_path).rows == 5

    def test_bad_dims(self, capsys):
        assert run(capsys, "achromatic", "-p", "0", "-q", "2")[0] == 2
        assert run(capsys, "find", "-p", "2")[0] == 2

    def test_find_and_extend_pipeline(self, capsys, tmp_path):
        w = tmp_path / "witness45.mat"
        code, out, _ = run(capsys, "find", "-p", "4", "-q", "5", "-k", "9", "-o", str(w),
                           "--seed", "3")
        assert code == 0 and out.startswith("FOUND")
        assert "seed=3" in w.read_text()
        code, out, _ = run(capsys, "extend", str(w))
        target = tmp_path / "witness46.mat"
        assert code == 0 and str(target) in out
        assert in_family(read_matrix(target), 4, 6, 9)
        assert run(capsys, "verify", str(target))[0] == 0

    def test_extend_failure(self, capsys, latin):
        code, out, _ = run(capsys, "extend", str(latin))
        assert code == 1 and "cannot extend" in out

    def test_find_exhausted(self, capsys):
        code, out, _ = run(capsys, "find", "-p", "2", "-q", "2", "-k", "3")
        assert code == 1 and out.startswith("EXHAUSTED")

    def test_find_json_echoes_run(self, capsys):
        code, out, _ = run(capsys, "find", "-p", "3", "-q", "3", "-k", "5", "--json",
                           "--seed", "4")
        report = json.loads(out)
        assert report["command"] == "rookcolor find -p 3 -q 3 -k 5 --json --seed 4"
        assert report["seed"] == 4 and report["status"] == "FOUND"
        assert report["stats"]["nodes"] > 0 and "prunes" in report["stats"]

    def test_lemmas_outside_scope(self, capsys):
        assert run(capsys, "find", "-p", "2", "-q", "2", "-k", "2", "--lemmas")[0] == 2

    def test_refute(self, capsys):
        code, out, _ = run(capsys, "refute", "--nodes", "1000000")
        assert code == 1 and out.startswith("BUDGET_EXCEEDED")

    def test_refute_with_audit(self, capsys):
        code, out, _ = run(capsys, "refute", "--lemmas", "--nodes", "5000",
                           "--sample-cuts", "50", "--audit-depth", "2", "--json")
        report = json.loads(out)
        assert code == 1 and report["status"] == "BUDGET_EXCEEDED"
        assert report["result"]["audit"]["passed"]


class TestTables:
    def test_qsets(self, capsys):
        assert run(capsys, "qsets", "7", "4")[:2] == (0, "3,2,1\n2,2,2\n")

    def test_qsets_all(self, capsys):
        code, out, _ = run(capsys, "qsets")
        assert code == 0 and "Q(7,5) size=0" in out and "Q(5,3) size=8" in out

    def test_qsets_bad(self, capsys):
        assert run(capsys, "qsets", "4", "2")[0] == 2
        assert run(capsys, "qsets", "7")[0] == 2

    def test_profiles(self, capsys):
        code, out, _ = run(capsys, "profiles", "6", "6", "19")
        assert code == 1 and out == "0 profiles\n"
        code, out, _ = run(capsys, "profiles", "6", "7", "19")
        assert code == 0 and out.splitlines()[0] == "5 profiles"


def test_durations():
    assert parse_duration("3600s") == 3600
    assert parse_duration("1h30m") == 5400
    assert parse_duration("2.5") == 2.5
    with pytest.raises(Exception):
        parse_duration("soon")


def test_module_entry_point(tmp_path, latin):
    proc = subprocess.run([sys.executable, "-m", "rookcolor", "verify", str(latin)],
                          capture_output=True, text=True)
    assert proc.returncode == 0


def test_pure_python_fallback():
    env = dict(os.environ, ROOKCOLOR_PURE_PYTHON="1")
    code = ("from rookcolor import _backend; from rookcolor.search import find_coloring;"
            "o = find_coloring(3, 4, 6); print(_backend.NAME, o.backend, o.status.value)")
    proc = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env)
    assert proc.stdout.split() == ["python", "python", "FOUND"]
