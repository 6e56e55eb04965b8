import json

import pytest
from click.testing import CliRunner

from ceamp.__main__ import EXIT_FAIL, EXIT_INPUT, EXIT_TIMEOUT, main
from ceamp.formula import Assignment
from ceamp.graph_core import EditSet

PHI2 = "p cnf 3 2\n1 -2 -3 0\n-1 2 3 0\n"


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli")
    (path / "phi2.cnf").write_text(PHI2)
    result = CliRunner().invoke(main, ["reduce", str(path / "phi2.cnf"), "-o", str(path / "phi2.json")])
    assert result.exit_code == 0, result.output
    return path


def test_reduce_with_stats_and_dot(runner, workdir):
    out = workdir / "again.json"
    result = runner.invoke(
        main,
        [
            "reduce",
            str(workdir / "phi2.cnf"),
            "-o",
            str(out),
            "--stats",
            "--dot",
            str(workdir / "g.dot"),
            "--model-dot",
            str(workdir / "h.dot"),
        ],
    )
    assert result.exit_code == 0, result.output
    assert json.loads(result.output)["vertex_count"] == 388
    assert out.read_text() == (workdir / "phi2.json").read_text()
    assert (workdir / "g.dot").read_text().startswith("graph G {")
    assert "rank=same" in (workdir / "h.dot").read_text()


def test_verify_reduced_instance(runner, workdir):
    result = runner.invoke(main, ["verify", str(workdir / "phi2.json")])
    assert result.exit_code == 0, result.output
    assert '"status": "fail"' not in result.output


def test_verify_with_low_incidence_bound_fails(runner, workdir):
    result = runner.invoke(main, ["verify", str(workdir / "phi2.json"), "--incidence-bound", "1"])
    assert result.exit_code == EXIT_FAIL


def test_sat(runner, workdir):
    result = runner.invoke(main, ["sat", str(workdir / "phi2.cnf")])
    assert result.exit_code == 0
    assert "x0 false" in result.output.splitlines()


def test_sat_on_a_contradiction(runner, tmp_path):
    cnf = tmp_path / "bottom.cnf"
    cnf.write_text("p cnf 1 2\n1 0\n-1 0\n")
    result = runner.invoke(main, ["sat", str(cnf)])
    assert result.exit_code == EXIT_FAIL


def test_sat_output_feeds_encode(runner, tmp_path):
    # Widening the first clause adds a fourth variable.
    cnf = tmp_path / "short.cnf"
    cnf.write_text("p cnf 3 2\n1 -2 0\n-1 2 3 0\n")
    result = runner.invoke(main, ["reduce", str(cnf), "-o", str(tmp_path / "short.json")])
    assert result.exit_code == 0, result.output
    result = runner.invoke(main, ["sat", str(cnf)])
    assert result.exit_code == 0
    assert len(result.output.splitlines()) == 4
    (tmp_path / "a.txt").write_text(result.output)
    result = runner.invoke(
        main, ["encode", str(tmp_path / "short.json"), str(tmp_path / "a.txt"), "-o", str(tmp_path / "e.json")]
    )
    assert result.exit_code == 0, result.output
    raw = runner.invoke(main, ["sat", str(cnf), "--raw"])
    assert raw.output.splitlines() == ["x0 false", "x1 false", "x2 false"]


def test_normalize(runner, tmp_path):
    cnf = tmp_path / "unit.cnf"
    cnf.write_text("p cnf 1 1\n-1 0\n")
    result = runner.invoke(main, ["normalize", str(cnf)])
    assert result.exit_code == 0
    assert result.output.startswith("p cnf 3 4\n")


def test_encode_then_decode(runner, workdir):
    assignment = workdir / "a.txt"
    assignment.write_text(Assignment((True, False, True)).to_text())
    edits = workdir / "encoded.json"
    result = runner.invoke(
        main, ["encode", str(workdir / "phi2.json"), str(assignment), "-o", str(edits)]
    )
    assert result.exit_code == 0, result.output
    result = runner.invoke(main, ["decode", str(workdir / "phi2.json"), str(edits)])
    assert result.exit_code == 0, result.output
    assert "x0 true" in result.output.splitlines()
    assert "x1 false" in result.output.splitlines()
    assert "x2 true" in result.output.splitlines()


def test_encode_rejects_a_non_satisfying_assignment(runner, workdir):
    assignment = workdir / "bad.txt"
    assignment.write_text(Assignment((True, False, False)).to_text())
    result = runner.invoke(main, ["encode", str(workdir / "phi2.json"), str(assignment)])
    assert result.exit_code == EXIT_INPUT


def test_solve_then_verify(runner, workdir):
    solution = workdir / "solution.json"
    result = runner.invoke(main, ["solve", str(workdir / "phi2.json"), "-o", str(solution)])
    assert result.exit_code == 0, result.output
    result = runner.invoke(
        main, ["verify", str(workdir / "phi2.json"), "--solution", str(solution)]
    )
    assert result.exit_code == 0, result.output


def test_verify_rejects_a_short_solution(runner, workdir):
    solution = workdir / "solution.json"
    if not solution.exists():
        runner.invoke(main, ["solve", str(workdir / "phi2.json"), "-o", str(solution)])
    s = EditSet.from_json(solution.read_text())
    short = workdir / "short.json"
    short.write_text(EditSet(s.items()[1:]).to_json())
    result = runner.invoke(main, ["verify", str(workdir / "phi2.json"), "--solution", str(short)])
    assert result.exit_code == EXIT_FAIL
    result = runner.invoke(main, ["decode", str(workdir / "phi2.json"), str(short)])
    assert result.exit_code == EXIT_INPUT


def test_solve_times_out(runner, workdir):
    result = runner.invoke(
        main, ["solve", str(workdir / "phi2.json")], env={"CEAMP_TIME_LIMIT": "0"}
    )
    assert result.exit_code == EXIT_TIMEOUT


def test_oracle_refuses_large_instances(runner, workdir):
    result = runner.invoke(main, ["solve", str(workdir / "phi2.json"), "--oracle"])
    assert result.exit_code == EXIT_INPUT


def test_parse_error(runner, tmp_path):
    cnf = tmp_path / "broken.cnf"
    cnf.write_text("p cnf 2 1\n1 3 0\n")
    result = runner.invoke(main, ["reduce", str(cnf), "-o", str(tmp_path / "out.json")])
    assert result.exit_code == EXIT_INPUT
    assert "line 2" in result.output


def test_malformed_instance(runner, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"vertices": [{"id": 1}]}')
    result = runner.invoke(main, ["verify", str(bad)])
    assert result.exit_code == EXIT_INPUT
