import json
import subprocess
import sys

import pytest

from galekit import Lattice, Mat, parse_matrix
from galekit.cli import main

WORKED_Q_TEXT = "1 1 0 0\n0 1 1 2\n"
NOPROJ_V_TEXT = ("1 0 0 0 -1 1\n"
                 "0 1 0 -1 -1 2\n"
                 "0 0 1 -1 0 1\n")


@pytest.fixture
def qfile(tmp_path):
    p = tmp_path / "q.txt"
    p.write_text(WORKED_Q_TEXT)
    return str(p)


@pytest.fixture
def vfile(tmp_path):
    p = tmp_path / "v.txt"
    p.write_text("1 -1 1 0\n0 0 2 -1\n")
    return str(p)


@pytest.fixture
def noproj_file(tmp_path):
    p = tmp_path / "v6.txt"
    p.write_text(NOPROJ_V_TEXT)
    return str(p)


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_gale_worked_example(capsys, qfile):
    code, out, _ = run_cli(capsys, "gale", qfile)
    assert code == 0
    assert out == "1 -1 1 0\n0 0 2 -1\n"


def test_gale_round_trip(capsys, vfile, tmp_path):
    code, out, _ = run_cli(capsys, "gale", vfile)
    assert code == 0
    mid = tmp_path / "mid.txt"
    mid.write_text(out)
    code, out2, _ = run_cli(capsys, "gale", str(mid))
    assert code == 0
    original = parse_matrix("1 -1 1 0\n0 0 2 -1\n")
    assert Lattice.from_matrix(parse_matrix(out2)) == Lattice.from_matrix(original)


def test_gale_check_flag(capsys, qfile):
    code, out, _ = run_cli(capsys, "gale", qfile, "--check")
    assert code == 0
    assert "check: ok" in out


def test_hnf_identity(capsys, tmp_path):
    p = tmp_path / "i3.txt"
    p.write_text("1 0 0\n0 1 0\n0 0 1\n")
    code, out, _ = run_cli(capsys, "hnf", str(p))
    assert code == 0
    assert out == ("H:\n1 0 0\n0 1 0\n0 0 1\n"
                   "U:\n1 0 0\n0 1 0\n0 0 1\npivots: 1 2 3\n")


def test_hnf_golden_byte_stable(capsys, qfile):
    _, out1, _ = run_cli(capsys, "hnf", qfile)
    _, out2, _ = run_cli(capsys, "hnf", qfile)
    assert out1 == out2


def test_snf_json(capsys, tmp_path):
    p = tmp_path / "m.txt"
    p.write_text("2 0 0\n0 3 5\n")
    code, out, _ = run_cli(capsys, "snf", str(p), "--json")
    assert code == 0
    obj = json.loads(out)
    assert obj["S"] == [["1", "0", "0"], ["0", "2", "0"]]
    assert obj["factors"] == ["1", "2"]
    assert all(isinstance(x, str) for row in obj["alpha"] for x in row)


def test_echelon(capsys, tmp_path):
    p = tmp_path / "m.txt"
    p.write_text("0 0 3 5\n1 2 0 0\n")
    code, out, _ = run_cli(capsys, "echelon", str(p))
    assert code == 0
    assert out.startswith("E:\n3 5 0 0\n0 0 1 2\n")


def test_dual(capsys, tmp_path):
    p = tmp_path / "m.txt"
    p.write_text("2 0\n0 2\n")
    code, out, _ = run_cli(capsys, "dual", str(p))
    assert code == 0
    assert out == "1/2 0\n0 1/2\n"


def test_intersect(capsys, tmp_path):
    a = tmp_path / "a.txt"
    b = tmp_path / "b.txt"
    a.write_text("2 0\n0 1\n")
    b.write_text("1 0\n0 3\n")
    code, out, _ = run_cli(capsys, "intersect", str(a), str(b))
    assert code == 0
    assert out == "2 0\n0 3\n"


def test_intersect_zero_lattice(capsys, tmp_path):
    a = tmp_path / "a.txt"
    b = tmp_path / "b.txt"
    a.write_text("1 0\n")
    b.write_text("0 1\n")
    code, out, _ = run_cli(capsys, "intersect", str(a), str(b))
    assert code == 0
    assert out == "# zero lattice\n"


def test_quotient(capsys, tmp_path):
    p = tmp_path / "m.txt"
    p.write_text("2 0\n0 2\n")
    code, out, _ = run_cli(capsys, "quotient", str(p))
    assert code == 0
    assert out == "free_rank: 0\ntorsion: 2 2\n"


def test_minors_gcd(capsys, vfile):
    code, out, _ = run_cli(capsys, "minors-gcd", vfile)
    assert code == 0
    assert out == "1\n"


def test_check_f(capsys, vfile):
    code, out, _ = run_cli(capsys, "check-f", vfile)
    assert code == 0
    assert "f_matrix: true" in out and "cf_matrix: true" in out


def test_check_w_json(capsys, qfile):
    code, out, _ = run_cli(capsys, "check-w", qfile, "--json")
    assert code == 0
    obj = json.loads(out)
    assert obj["w_matrix"] is True
    assert all(obj["clauses"][c] for c in "abcdef")
    assert all(int(x) > 0 for x in obj["positive_witness"])


def test_positivize(capsys, tmp_path):
    p = tmp_path / "m.txt"
    p.write_text("1 1 0 0\n-1 0 1 2\n")
    code, out, _ = run_cli(capsys, "positivize", str(p))
    assert code == 0
    M = parse_matrix(out)
    assert all(x >= 0 for row in M.row_tuples() for x in row)


def test_reduce_f(capsys, tmp_path):
    p = tmp_path / "m.txt"
    p.write_text("2 -1 0 0\n0 0 5 -3\n")
    code, out, _ = run_cli(capsys, "reduce-f", str(p))
    assert code == 0
    assert out == "1 -1 0 0\n0 0 1 -1\ncolumn_gcds: 2 1 5 3\n"


def test_reduce_w(capsys, tmp_path):
    p = tmp_path / "m.txt"
    p.write_text("1 2 0 0\n0 0 3 5\n")
    code, out, _ = run_cli(capsys, "reduce-w", str(p))
    assert code == 0
    reduced = parse_matrix(out)
    assert Lattice.from_matrix(reduced) == Lattice.from_matrix(
        Mat([[1, 1, 0, 0], [0, 0, 1, 1]]))


def test_fans_noproj(capsys, noproj_file):
    code, out, _ = run_cli(capsys, "fans", noproj_file)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "count: 8"
    assert len(lines) == 9


def test_fans_cap_flag(capsys, noproj_file):
    code, _, err = run_cli(capsys, "fans", noproj_file, "--cap", "3")
    assert code == 1
    assert "cap" in err


def test_fans_cap_env(capsys, noproj_file, monkeypatch):
    monkeypatch.setenv("GALEKIT_CAP", "3")
    code, _, err = run_cli(capsys, "fans", noproj_file)
    assert code == 1
    monkeypatch.setenv("GALEKIT_CAP", "12")
    code, out, _ = run_cli(capsys, "fans", noproj_file)
    assert code == 0 and out.startswith("count: 8")


def test_class_group(capsys, vfile):
    code, out, _ = run_cli(capsys, "class-group", vfile)
    assert code == 0
    assert out == "free_rank: 2\ntorsion:\n"


def test_pws(capsys, vfile):
    code, out, _ = run_cli(capsys, "pws", vfile)
    assert code == 0
    assert out.startswith("pws: true\n")


REPORT_GOLDEN = """n: 2
r: 2
class_group free_rank: 2
class_group torsion:
pws: true
cl_generators:
1 0 0 0
-1 1 0 0
picard_basis:
2 0
0 2
cartier_basis:
2 0 0 0
-2 2 0 0
1 -1 1 0
0 0 2 -1
delta_sigma: 2
cartier_indices: 2 2 2 1
"""


def test_report_worked(capsys, qfile):
    code, out, _ = run_cli(capsys, "report", qfile)
    assert code == 0
    assert out == REPORT_GOLDEN
    _, out2, _ = run_cli(capsys, "report", qfile)
    assert out == out2


def test_report_json(capsys, qfile):
    code, out, _ = run_cli(capsys, "report", qfile, "--json")
    assert code == 0
    obj = json.loads(out)
    assert obj["picard_basis"] == [["2", "0"], ["0", "2"]]
    assert obj["cartier_indices"] == ["2", "2", "2", "1"]


def test_report_fan_selection(capsys, tmp_path):
    p = tmp_path / "q6.txt"
    p.write_text("1 1 0 0 1 0\n0 1 1 1 0 0\n0 0 0 1 1 1\n")
    code, _, err = run_cli(capsys, "report", str(p))
    assert code == 1 and "8 fans" in err
    code, out, _ = run_cli(capsys, "report", str(p), "--fan", "1")
    assert code == 0


def test_report_fan_file(capsys, qfile, tmp_path):
    ff = tmp_path / "fan.txt"
    ff.write_text("1 3\n2 3\n2 4\n1 4\n")
    code, out, _ = run_cli(capsys, "report", qfile, "--fan-file", str(ff))
    assert code == 0
    assert "delta_sigma: 2" in out


def test_report_kind_fan(capsys, vfile):
    code, out, _ = run_cli(capsys, "report", vfile, "--kind", "fan")
    assert code == 0
    assert "cartier_indices: 2 2 2 1" in out


def test_cartier_index_cli(capsys, vfile):
    code, out, _ = run_cli(capsys, "cartier-index", vfile, "--divisor", "1,0,0,0")
    assert code == 0
    assert out == "2\n"


def test_cartier_index_fan_file(capsys, vfile, tmp_path):
    ff = tmp_path / "fan.txt"
    ff.write_text("1 3\n2 3\n2 4\n1 4\n")
    code, out, _ = run_cli(capsys, "cartier-index", vfile,
                           "--divisor", "0,0,0,1", "--fan-file", str(ff))
    assert code == 0
    assert out == "1\n"


def test_domain_error_exit_code(capsys, tmp_path):
    p = tmp_path / "m.txt"
    p.write_text("1 2\n2 4\n")  # rank deficient
    code, _, err = run_cli(capsys, "gale", str(p))
    assert code == 1
    assert "error:" in err


def test_parse_error_exit_code(capsys, tmp_path):
    p = tmp_path / "m.txt"
    p.write_text("1.5 2\n")
    code, _, err = run_cli(capsys, "gale", str(p))
    assert code == 2


def test_usage_error_exit_code(capsys):
    code, _, _ = run_cli(capsys, "no-such-verb")
    assert code == 2


def test_module_entry_point(tmp_path):
    p = tmp_path / "q.txt"
    p.write_text(WORKED_Q_TEXT)
    proc = subprocess.run([sys.executable, "-m", "galekit", "gale", str(p)],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout == "1 -1 1 0\n0 0 2 -1\n"


def test_stdin_input(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "galekit", "minors-gcd", "-"],
                          input="1 -1 1 0\n0 0 2 -1\n",
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout == "1\n"
