from __future__ import annotations

import json
import subprocess
import sys

import pytest

from shuffleops.cli import main

from support import BUNDLED


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_list(capsys):
    code, out, _ = run(capsys, "list")
    assert code == 0
    assert [line.split()[0] for line in out.splitlines()] == BUNDLED
    assert "degree3 (family in a, b)" in out


def test_dims_of_lie(capsys):
    code, out, _ = run(capsys, "dims", "lie", "--max-arity", "6")
    assert code == 0
    assert out.splitlines()[0] == "1,1,2,6,24,120"


def test_dims_with_oracle(capsys):
    code, out, _ = run(capsys, "dims", "mock-lie", "--max-arity", "4", "--oracle")
    assert code == 0
    assert out.splitlines() == ["1,1,2,5", "oracle: 1,1,2,5"]


def test_check_ns_prelie(capsys):
    code, out, _ = run(capsys, "check-ns", "prelie", "--max-arity", "5")
    assert code == 0
    assert "verdict: NS-by-theorem" in out
    assert "dims: 1,2,9,64,625" in out


def test_negative_verdict_still_exits_zero(capsys):
    code, out, _ = run(capsys, "check-ns", "leibniz", "--max-arity", "4")
    assert code == 0
    assert "verdict: criterion-fails" in out
    assert "sufficient, not necessary" in out


def test_check_ns_json_is_byte_identical(tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        assert main(["check-ns", "compatible-lie", "--max-arity", "4", "--json", str(p)]) == 0
    a, b = (p.read_bytes() for p in paths)
    assert a == b
    data = json.loads(a)
    for key in ("presentation", "ordering", "gb", "dims", "m1", "m2", "verdict"):
        assert key in data
    assert data["verdict"] == "NS-by-theorem"
    assert set(data["gb"]) >= {"elements", "leading_terms", "complete_through"}
    assert data["ordering"]["generator_order"]


def test_json_to_stdout(capsys):
    code, out, _ = run(capsys, "gb", "lie", "--order", "gpl", "--max-arity", "5", "--json", "-")
    assert code == 0
    data = json.loads(out)
    assert data["gb"]["leading_terms"] == ["b(b(1,2),3)"]
    assert data["gb"]["certification"] == "critical-pairs-exhausted"


def test_gb_text_and_trace(capsys, tmp_path):
    trace = tmp_path / "trace.jsonl"
    code, out, _ = run(capsys, "gb", "mock-lie", "--max-arity", "4", "--trace", str(trace))
    assert code == 0
    assert "2 element(s):" in out
    records = [json.loads(line) for line in trace.read_text().splitlines()]
    assert records and all({"arity", "pair", "ambient", "outcome", "ordering"} <= set(r) for r in records)


def test_gens_and_custom_orders(capsys):
    code, out, _ = run(capsys, "gb", "prelie", "--order", "permfirst-rev-gpl", "--gens", "*^op>*", "--max-arity", "3")
    assert code == 0
    assert "*^op(*^op(1,2),3)" in out
    code, out, _ = run(capsys, "gb", "lie", "--order", "custom:degree,perm,words", "--max-arity", "4")
    assert code == 0
    assert "[b(b(1,3),2)]" in out


def test_reduce(capsys):
    code, out, _ = run(capsys, "reduce", "lie", "--order", "rgpl", "b(b(b(1,2),3),4)")
    assert code == 0
    assert out.strip() == "b(b(b(1,2),3),4)"
    code, out, _ = run(capsys, "reduce", "lie", "--order", "rgpl", "b(1,b(2,3))")
    assert code == 0
    # printed largest monomial first under the chosen ordering
    assert out.strip() == "-b(b(1,3),2) + b(b(1,2),3)"


def test_oracle_subcommands(capsys):
    code, out, _ = run(capsys, "oracle", "dims", "prelie", "--max-arity", "3")
    assert code == 0 and out.strip() == "1,2,9"
    code, out, _ = run(capsys, "oracle", "member", "leibniz", "(x*y)*z + (y*x)*z = 0")
    assert code == 0 and out.startswith("consequence\n")
    code, out, _ = run(capsys, "oracle", "member", "leibniz", "z*(x*y) + z*(y*x) = 0")
    assert code == 0 and out.strip() == "not a consequence"


def test_input_errors_exit_two(capsys, tmp_path):
    bad = tmp_path / "bad.ops"
    bad.write_text("op * : 2;\nx*(y = 0;\n")
    code, _, err = run(capsys, "gb", str(bad))
    assert code == 2
    assert "line 2, column 6" in err
    assert run(capsys, "gb", "no-such-file")[0] == 2
    assert run(capsys, "gb", "lie", "--order", "grevlex")[0] == 2
    assert run(capsys, "gb", "degree3", "--sample", "0,0")[0] == 2
    with pytest.raises(SystemExit) as info:
        main(["gb"])
    assert info.value.code == 2


def test_guard_trips_exit_three(capsys):
    code, out, _ = run(capsys, "gb", "mock-lie", "--max-arity", "5", "--max-elements", "1")
    assert code == 3
    assert "truncated" in out
    assert run(capsys, "oracle", "dims", "lie", "--max-arity", "7")[0] == 3


def test_scan_degree_three(capsys):
    code, out, _ = run(capsys, "scan", "degree3", "--max-arity", "4")
    assert code == 0
    rows = {}
    for line in out.splitlines()[3:]:
        cells = line.split()
        rows[" ".join(cells[1:3])] = cells
    verdicts = {k: v[3] for k, v in rows.items()}
    assert verdicts == {
        "(1, 0)": "NS-by-theorem",
        "(1, -1)": "NS-by-theorem",
        "(2, 1)": "NS-by-theorem",
        "(1, 1)": "criterion-fails",
    }
    assert rows["(1, 1)"][-1] == "yes"
    assert rows["(2, 1)"][-1] == "no"


def test_scan_rejects_the_zero_identity(capsys):
    code, out, _ = run(capsys, "scan", "degree3", "--sample", "0,0", "--sample", "1,0", "--max-arity", "3")
    assert code == 2
    assert "zero identity" in out


def test_scan_json_with_workers(tmp_path):
    a, b = tmp_path / "serial.json", tmp_path / "pool.json"
    assert main(["scan", "degree3", "--max-arity", "4", "--json", str(a)]) == 0
    assert main(["scan", "degree3", "--max-arity", "4", "--jobs", "2", "--json", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    data = json.loads(a.read_text())
    assert [r["boundary"] for r in data["rows"]] == [False, False, False, True]


def test_scan_generic_degree_four(capsys):
    code, out, _ = run(capsys, "scan", "degree4", "--max-arity", "4")
    assert code == 0
    assert "NS-by-theorem" in out.splitlines()[-1]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "shuffleops", "dims", "lie", "--max-arity", "5"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.strip() == "1,1,2,6,24"
