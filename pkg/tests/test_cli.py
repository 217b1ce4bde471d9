import json
import subprocess
import sys

import pytest

from minrank import cli
from minrank.report import strip_timing
from minrank.tree import SearchExhausted, TreeStats


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--output", "json")
    return code, json.loads(out) if out else None, err


def test_solve_example(capsys, data_dir):
    code, rep, _ = run_json(capsys, "solve", data_dir / "fig1.problem", "--field", 2, "--block", 1)
    assert code == 0
    assert rep["achieved_rank"] == 2 and rep["rate"] == "1/2" and rep["length"] == 2
    assert rep["verification"]["valid"] and rep["verification"]["decode_failures"] == 0
    assert [t["expression"] for t in rep["transmissions"]] == ["x1 + x2 + x5", "x2 + x3 + x4"]


def test_solve_trivial(capsys, data_dir):
    code, rep, _ = run_json(capsys, "solve", data_dir / "trivial.problem")
    assert code == 0 and rep["achieved_rank"] == 1 and rep["rate"] == "1"


def test_solve_block_two(capsys, data_dir):
    code, rep, _ = run_json(capsys, "solve", data_dir / "fig1.problem", "--block", 2)
    assert code == 0 and rep["block"] == 2
    assert rep["achieved_rank"] <= 4 and rep["lift_rank"] == 4
    num, den = map(int, rep["rate"].split("/"))
    assert num * 2 >= den


def test_complete_example(capsys, data_dir):
    code, rep, _ = run_json(capsys, "complete", data_dir / "fig2.matrix", "--field", 2)
    assert code == 0 and rep["achieved_rank"] == 2 and rep["erasures"] == 10


def test_complete_already_complete(capsys, tmp_path):
    f = tmp_path / "id.matrix"
    f.write_text("1 0\n0 1\n")
    code, rep, _ = run_json(capsys, "complete", f)
    assert code == 0 and rep["achieved_rank"] == 2 and rep["stats"]["projections"] == 0


def test_complete_heavy_pruning(capsys, data_dir):
    code, rep, _ = run_json(capsys, "complete", data_dir / "fig2.matrix", "--prune", 1)
    assert code == 0 and rep["achieved_rank"] >= 2 and rep["prune_threshold"] == "1"


def test_oracle(capsys, data_dir, tmp_path):
    code, rep, _ = run_json(capsys, "oracle", data_dir / "fig2.matrix")
    assert code == 0 and rep["min_rank"] == 2 and rep["enumerated"] == 1024
    f = tmp_path / "x.matrix"
    f.write_text("X X X X\n" * 4)
    code, rep, _ = run_json(capsys, "oracle", f)
    assert code == 0 and rep["min_rank"] == 0 and rep["enumerated"] == 2**16


def test_oracle_refuses_five_by_five_all_erased(capsys, tmp_path):
    # 2^25 completions exceed the default budget of 2^24.
    f = tmp_path / "x.matrix"
    f.write_text("X X X X X\n" * 5)
    code, out, err = run(capsys, "oracle", f)
    assert code == 4 and "33554432" in err and out == ""


def test_oracle_budget_exit(capsys, data_dir):
    code, out, err = run(capsys, "oracle", data_dir / "fig2.matrix", "--budget", 100)
    assert code == 4 and "1024" in err and out == ""


def test_verify_valid_and_invalid(capsys, data_dir, tmp_path):
    code, rep, _ = run_json(capsys, "verify", data_dir / "fig1.problem", data_dir / "fig1.code")
    assert code == 0 and rep["verification"]["valid"]
    one = tmp_path / "one.code"
    one.write_text("1 1 0 0 1\n")
    code, rep, err = run_json(capsys, "verify", data_dir / "fig1.problem", one)
    assert code == 5 and not rep["verification"]["valid"]
    assert "3, 4, 5" in err


def test_verify_wrong_field(capsys, data_dir, tmp_path):
    bad = tmp_path / "f3.code"
    bad.write_text("1 2 0 0 1\n")
    code, _, err = run(capsys, "verify", data_dir / "fig1.problem", bad)
    assert code == 2 and "GF(2)" in err
    short = tmp_path / "short.code"
    short.write_text("1 1 0\n")
    assert run(capsys, "verify", data_dir / "fig1.problem", short)[0] == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["complete", "/nonexistent/file.matrix"],
        ["solve", "/nonexistent/file.problem"],
    ],
)
def test_missing_files(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("error:")


def test_malformed_inputs(capsys, tmp_path):
    m = tmp_path / "bad.matrix"
    m.write_text("1 0\n0 7\n")
    assert run(capsys, "complete", m)[0] == 2
    p = tmp_path / "bad.problem"
    p.write_text("messages 2\nreceiver 1 wants 1 has 1\n")
    assert run(capsys, "solve", p)[0] == 2


def test_exhausted_exit(capsys, data_dir, monkeypatch):
    def boom(*_a, **_k):
        raise SearchExhausted("no completion found under pruning", TreeStats())

    monkeypatch.setattr(cli, "complete_min_rank", boom)
    code, _, err = run(capsys, "complete", data_dir / "fig2.matrix", "--prune", 1)
    assert code == 3 and "no completion" in err


def test_bad_flag_values(capsys, data_dir):
    for argv in (["--prune", "0"], ["--prune", "lots"], ["--threads", "0"]):
        with pytest.raises(SystemExit) as e:
            cli.main(["complete", str(data_dir / "fig2.matrix"), *argv])
        assert e.value.code == 2
    capsys.readouterr()


def test_text_and_json_carry_same_values(capsys, data_dir):
    _, rep, _ = run_json(capsys, "solve", data_dir / "fig1.problem")
    code, text, _ = run(capsys, "solve", data_dir / "fig1.problem")
    assert code == 0
    assert f"achieved_rank: {rep['achieved_rank']}" in text
    assert f"rate: {rep['rate']}" in text
    for t in rep["transmissions"]:
        assert t["expression"] in text
    for row in rep["completed"]:
        assert " ".join(map(str, row)) in text


def test_seed_reproduces_json(capsys, data_dir):
    a = run_json(capsys, "complete", data_dir / "fig2.matrix", "--seed", 7)[1]
    b = run_json(capsys, "complete", data_dir / "fig2.matrix", "--seed", 7)[1]
    assert json.dumps(strip_timing(a), sort_keys=True) == json.dumps(strip_timing(b), sort_keys=True)
    assert "wall_ms" in a["stats"] and "wall_ms" not in strip_timing(a)["stats"]


def test_benchmark_small(capsys):
    code, rep, _ = run_json(capsys, "benchmark", "--size", 4, "--density", 0.5, "--instances", 2, "--thresholds", "inf", 3)
    assert code == 0 and rep["unpruned_never_worse"] is True
    assert [s["threshold"] for s in rep["summary"]] == ["inf", "3"]
    code, text, _ = run(capsys, "benchmark", "--size", 4, "--density", 0.5, "--instances", 2)
    assert code == 0 and text.splitlines()[0].startswith("Size")


def test_module_entry_point(data_dir):
    proc = subprocess.run(
        [sys.executable, "-m", "minrank", "complete", str(data_dir / "fig2.matrix"), "--output", "json"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["achieved_rank"] == 2
