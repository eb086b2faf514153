import shutil
import subprocess
import sys

import pytest

from gral.cli import main
from gral.golden import fixtures_dir

FIX = fixtures_dir()


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_eval_q1(capsys):
    code, out, _ = run(capsys, "eval", "--graph", str(FIX / "g0.gtf"), "--query", str(FIX / "q1.gral"))
    assert code == 0
    assert out == "auth2 cites auth1 .\nauth3 cites auth1 .\n"


def test_eval_q2_to_file(capsys, tmp_path):
    target = tmp_path / "out.gtf"
    code, out, _ = run(capsys, "eval", "--graph", str(FIX / "g0.gtf"), "--query", str(FIX / "q2.gral"), "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text() == "5 .\n"


def test_eval_on_empty_graph(capsys, tmp_path):
    empty = tmp_path / "empty.gtf"
    empty.write_text("")
    code, out, _ = run(capsys, "eval", "--graph", str(empty), "--query", str(FIX / "q1.gral"))
    assert code == 0 and out == ""


def test_eval_trace(capsys):
    code, _, err = run(capsys, "eval", "--graph", str(FIX / "g0.gtf"), "--query", str(FIX / "q3.gral"), "--trace", "--format", "tsv")
    assert code == 0
    assert "Filter" in err and "Construct" in err


def test_matches_table(capsys):
    code, out, _ = run(capsys, "matches", "--graph", str(FIX / "g0.gtf"), "--query", str(FIX / "p_ps.gral"), "--format", "tsv")
    assert code == 0
    assert out == (FIX / "p_ps.expected.tsv").read_text().rstrip("\n") + "\n"


def test_matches_of_a_query_file(capsys):
    code, out, _ = run(capsys, "matches", "--graph", str(FIX / "g0.gtf"), "--query", str(FIX / "q3.gral"), "--format", "tsv")
    assert code == 0
    assert out.splitlines()[0] == "?a1\t?n"
    assert len(out.splitlines()) == 4


def test_matches_none(capsys, tmp_path):
    p = tmp_path / "p.gral"
    p.write_text("?x nosuchpredicate ?y")
    code, out, _ = run(capsys, "matches", "--graph", str(FIX / "g0.gtf"), "--query", str(p), "--format", "tsv")
    assert code == 0 and out == "?x\t?y\n"


def test_check_clean(capsys):
    code, _, err = run(capsys, "check", "--graph", str(FIX / "g0.gtf"), "--query", str(FIX / "q3.gral"), str(FIX / "p_pl.gral"))
    assert code == 0 and err.count("ok ") == 3


def test_check_two_term_statement(capsys, tmp_path):
    bad = tmp_path / "bad.gtf"
    bad.write_text("a p b .\nc d .\n")
    code, _, err = run(capsys, "check", "--graph", str(bad))
    assert code == 2
    assert f"{bad}:2:1" in err


def test_check_out_of_scope_bind(capsys, tmp_path):
    text = (FIX / "q3.gral").read_text().replace("NOT(?a1=?a2)", "NOT(?zz=?a2)")
    q = tmp_path / "q.gral"
    q.write_text(text)
    code, _, err = run(capsys, "check", "--query", str(q))
    assert code == 2
    assert "?zz is not in scope" in err


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "eval", "--graph", str(tmp_path / "nope.gtf"), "--query", str(FIX / "q1.gral"))
    assert code == 3 and "nope.gtf" in err


def test_golden_ok(capsys):
    code, out, _ = run(capsys, "golden")
    assert code == 0
    assert out.rstrip().endswith("19/19 checks passed (5 query, 14 table)")


def test_golden_accepts_renamed_fresh_variables(capsys, tmp_path):
    fixtures = tmp_path / "fixtures"
    shutil.copytree(FIX, fixtures)
    path = fixtures / "q5.expected.gtf"
    path.write_text(path.read_text().replace("?r", "?other"))
    code, _, _ = run(capsys, "golden", "--fixtures", str(fixtures))
    assert code == 0


def test_golden_reports_mismatch(capsys, tmp_path):
    fixtures = tmp_path / "fixtures"
    shutil.copytree(FIX, fixtures)
    path = fixtures / "q2.expected.gtf"
    path.write_text("6 .\n")
    code, out, err = run(capsys, "golden", "--fixtures", str(fixtures))
    assert code == 1
    assert "q2 (query)" in err
    assert "18/19" in out


def test_unknown_format_is_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["matches", "--graph", "x", "--query", "y", "--format", "csv"])
    assert info.value.code == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "gral", "eval", "--graph", str(FIX / "g0.gtf"), "--query", str(FIX / "q2.gral")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and proc.stdout == "5 .\n"
