import json

import pytest

from goldbach_sieve import scan
from goldbach_sieve.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_table_plain(capsys):
    code, out, _ = run(capsys, "table", "3", "3")
    assert code == 0
    assert out.splitlines()[-1] == "3: 0"
    assert all(line.startswith("#") for line in out.splitlines()[:-1])


def test_table_csv(capsys):
    code, out, _ = run(capsys, "table", "7", "5", "--format", "csv")
    assert out.splitlines()[1:] == ["n1,r(3),r(5)", "3,0,3", "5,2,0", "7,1,2"]


def test_global_flags_before_subcommand(capsys):
    _, out, _ = run(capsys, "--format", "jsonl", "bound", "100")
    lines = [json.loads(x) for x in out.splitlines()]
    assert lines[0]["config"] == {"command": "bound", "q": 100}
    assert (lines[1]["A_num"], lines[1]["A_den"]) == (13, 7)


def test_bound_plain(capsys):
    code, out, _ = run(capsys, "bound", "100")
    assert code == 0
    assert "shrink=1/7 n=48 sub=5 A=13/7" in out.splitlines()[1]


def test_count_and_partitions(capsys):
    _, out, _ = run(capsys, "count", "10", "--format", "csv")
    header, row = out.splitlines()[1:]
    assert dict(zip(header.split(","), row.split(",")))["goldbach_ordered"] == "3"
    _, out, _ = run(capsys, "partitions", "20", "--format", "jsonl")
    rows = [json.loads(x) for x in out.splitlines()[1:]]
    assert len(rows) == 8 and sum(r["admissible"] for r in rows) == 2


def test_minima(capsys):
    _, out, _ = run(capsys, "minima", "37", "37")
    line = out.splitlines()[1]
    assert "forms_agree=true" in line and "exceeds 2 - 1/37" in line


@pytest.mark.parametrize("argv", [
    ["table", "1", "29"], ["bound", "7"], ["count", "3"], ["scan", "10", "4"],
    ["nosuch"], ["scan", "4", "10", "--checkpoint", "x.ck"], ["minima", "20", "10"],
])
def test_usage_errors_exit_2(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        code = main(argv)
        raise SystemExit(code)
    assert exc.value.code == 2


def test_scan_stdout_is_sink_format(capsys, tmp_path):
    code, out, err = run(capsys, "scan", "4", "500", "--chunk", "100", "--format", "csv")
    assert code == 0 and "violations: 0" in err
    sink = tmp_path / "s.csv"
    scan.scan_range(4, 500, chunk=100, sink=sink)
    assert out == sink.read_text()


def test_scan_violation_exit_status(capsys, monkeypatch):
    real = scan.BoundLadder.value
    monkeypatch.setattr(
        scan.BoundLadder, "value",
        lambda self, q: (lambda v: (v[0], v[1] + 10**6 * v[2], v[2]))(real(self, q)),
    )
    code, _, err = run(capsys, "scan", "100", "120")
    assert code == 1
    assert "violation: q=100" in err


def test_scan_checkpoint_resume_via_cli(capsys, tmp_path):
    out, ck = tmp_path / "o.csv", tmp_path / "o.ck"
    argv = ["scan", "4", "3000", "--chunk", "500", "--output", str(out), "--checkpoint", str(ck)]
    assert run(capsys, *argv)[0] == 0
    first = out.read_bytes()
    assert run(capsys, *argv)[0] == 0  # finished checkpoint: no-op
    assert out.read_bytes() == first
    code, _, err = run(capsys, "scan", "4", "4000", "--chunk", "500",
                       "--output", str(out), "--checkpoint", str(ck))
    assert code == 2 and "checkpoint" in err
