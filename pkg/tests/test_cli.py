"""Command-line interface: subcommands, formats and exit codes."""

import os

from rmxsim.cli import main

FIXTURE = os.path.join(os.path.dirname(__file__), os.pardir,
                       "fixtures", "fig7.sched")


def test_run_random_clean(capsys):
    rc = main(["run", "--algo", "queue", "--procs", "2", "--ports", "2",
               "--seed", "3", "--steps", "3000", "--crash-prob", "0.05",
               "--check-invariants", "extended", "--check-stride", "8"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "no violations" in out
    assert "rec cs_entries" in out


def test_run_scripted_fixture(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("RMXSIM_OUT", str(tmp_path))
    rc = main(["run", "--algo", "queue", "--procs", "9", "--ports", "8",
               "--schedule", FIXTURE, "--check-invariants", "extended",
               "--check-stride", "1", "--trace-out", "f.trace"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "rec cs_entries 9" in out
    trace = tmp_path / "f.trace"
    assert trace.exists()

    rc = main(["stats", str(trace)])
    assert rc == 0
    sout = capsys.readouterr().out
    assert "rec cs_entries_total 9" in sout
    assert "steps: 1073" in sout


def test_explore_signal(capsys):
    rc = main(["explore", "--algo", "signal"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "states visited: 268" in out
    assert "violations:     0" in out


def test_explore_writes_report(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("RMXSIM_OUT", str(tmp_path))
    rc = main(["explore", "--algo", "queue", "--procs", "1", "--ports", "1",
               "--max-sps", "2", "--report-out", "r.txt"])
    assert rc == 0
    assert "states visited: 434" in (tmp_path / "r.txt").read_text()
    capsys.readouterr()


def test_missing_schedule_is_usage_error(capsys):
    rc = main(["run", "--schedule", "/does/not/exist"])
    assert rc == 2
    assert "error" in capsys.readouterr().err


def test_malformed_trace_is_usage_error(tmp_path, capsys):
    bad = tmp_path / "bad.trace"
    bad.write_text("0 0 N rem\n1 nonsense\n")
    rc = main(["stats", str(bad)])
    assert rc == 2
    assert "malformed" in capsys.readouterr().err


def test_tree_run(capsys):
    rc = main(["run", "--algo", "tree", "--procs", "5", "--seed", "1",
               "--steps", "20000", "--crash-prob", "0.02"])
    assert rc == 0
    capsys.readouterr()
