import json

import pytest

from treefair.cli import main
from treefair.report import AnalysisReport, analyze
from treefair.matrix import parse_matrix


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_analyze_fair(capsys):
    code, out, _ = run(capsys, "analyze", "110|001|100", "--k", "2")
    assert code == 0
    assert "FAIR for n >= 4" in out and "[143|212|141]" in out


def test_analyze_not_fair(capsys):
    code, out, _ = run(capsys, "analyze", "0111|1000|0100|0010", "--k", "3")
    assert code == 1 and "NOT_FAIR" in out


def test_analyze_inconclusive_with_oracle(capsys):
    code, out, _ = run(capsys, "analyze", "0111|1011|1101|1110", "--k", "2", "--oracle-depth", "3", "--format", "machine")
    assert code == 2
    doc = json.loads(out)
    assert doc["verdict"] == "INCONCLUSIVE"
    level2 = doc["oracle"]["levels"][1]
    assert level2["n"] == 2 and level2["in_P"] and level2["in_P_star"]


def test_analyze_trace(capsys):
    code, out, _ = run(capsys, "analyze", "110|001|100", "--k", "2", "--trace")
    assert "Round 5: no new relations; stop" in out


def test_analyze_file(tmp_path, capsys):
    path = tmp_path / "m.txt"
    path.write_text("110\n001\n100\n")
    code, out, _ = run(capsys, "analyze", "--file", str(path), "--k", "2")
    assert code == 0


@pytest.mark.parametrize("argv", [["analyze", "10|1", "--k", "2"], ["analyze", "10|00", "--k", "2"],
                                  ["analyze", "--k", "2"], ["analyze", "11|11"],
                                  ["oracle", "110|001|100", "--k", "9"]])
def test_errors_exit_three(capsys, argv):
    code = None
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == 3


@pytest.mark.parametrize("text, k, depth", [("110|001|100", 2, 4), ("0111|1011|1101|1110", 2, 3), ("1", 1, None)])
def test_machine_report_roundtrip(text, k, depth):
    rendered = analyze(parse_matrix(text), k, oracle_depth=depth).render_machine()
    assert AnalysisReport.parse_machine(rendered).render_machine() == rendered


def test_exit_code_is_function_of_verdict():
    for text, k in [("110|001|100", 2), ("011|100|010", 2), ("0111|1011|1101|1110", 2), ("110|001|100", 1)]:
        rep = analyze(parse_matrix(text), k)
        assert rep.exit_code == {"FAIR": 0, "NOT_FAIR": 1, "INCONCLUSIVE": 2}[rep.verdict]
        assert rep.provenance in ("completeness-theorem", "soundness")


def test_oracle_command(capsys):
    code, out, _ = run(capsys, "oracle", "110|001|100", "--k", "2", "--depth", "4", "--format", "machine")
    doc = json.loads(out)
    assert code == 0
    assert doc["degrees"]["1=>2"] == 4
    assert doc["levels"][1]["poss_sets"] == ["-", "1", "13", "2"]


def test_examples_command(capsys):
    code, out, _ = run(capsys, "examples")
    assert code == 0
    assert "PASS 4x4 fair: final R: expected [1456|1156|2216|3331]" in out
    assert "FAIL" not in out


@pytest.mark.parametrize("argv, summary", [
    (["sweep", "--d", "2", "--k", "2", "--n-max", "4"], "matrices=9"),
    (["sweep", "--d", "3", "--k", "2", "--filter", "s_A<=k", "--n-max", "6"], "failures=0"),
    (["sweep", "--d", "1"], "matrices=1"),
])
def test_sweep_command(capsys, argv, summary):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert summary in out and "failures=0" in out


def test_sweep_observations_flag_reports_failures(capsys):
    code, out, _ = run(capsys, "sweep", "--d", "2", "--k", "1", "--n-max", "2", "--observations")
    assert code == 1
    assert "A^1 has a zero entry" in out and "observation_violations=4" in out


def test_sweep_machine(capsys):
    code, out, _ = run(capsys, "sweep", "--d", "2", "--k", "2", "--n-max", "3", "--format", "machine")
    doc = json.loads(out)
    assert len(doc["entries"]) == 9 and doc["spec"]["n_max"] == 3
