"""Determinism, crash semantics, budgets, and schedule/trace files."""

import pytest

from rmxsim.memory import Memory
from rmxsim.runtime import (Config, RandomSchedule, ScriptSchedule,
                            ScheduleError, apply_step, enabled_normal,
                            enabled_crash, run, save_schedule, load_schedule,
                            save_trace)
from rmxsim.queue import QueueWorld


def _cfg(n=3, k=3, model="dsm", limits=None, trace=False):
    mem = Memory(model, n)
    w = QueueWorld(n, k)
    w.setup(mem)
    cfg = Config(mem, n, w, limits=limits)
    if trace:
        cfg.trace = []
    return cfg


def _run_seed(seed, trace=False):
    cfg = _cfg(trace=trace)
    run(cfg, RandomSchedule(seed, crash_prob=0.05), 4000)
    return cfg


def test_same_seed_same_everything():
    a, b = _run_seed(9, trace=True), _run_seed(9, trace=True)
    assert a.trace == b.trace
    assert a.mem.vals == b.mem.vals
    assert a.mem.rmr == b.mem.rmr
    assert a.stats == b.stats


def test_different_seed_diverges():
    a, b = _run_seed(9, trace=True), _run_seed(10, trace=True)
    assert a.trace != b.trace


def test_crash_wipes_registers_and_pc_not_memory():
    cfg = _cfg()
    for _ in range(6):
        apply_step(cfg, 0, "N")
    ps = cfg.procs[0]
    assert ps.regs and ps.pc != ("rem",)
    snapshot = list(cfg.mem.vals)
    apply_step(cfg, 0, "C")
    assert ps.regs == {} and ps.pc == ("rem",)
    assert ps.sp_active  # the super-passage is still open
    assert cfg.mem.vals == snapshot


def test_crash_only_enabled_outside_remainder():
    cfg = _cfg()
    assert not enabled_crash(cfg, 0)
    apply_step(cfg, 0, "N")
    assert enabled_crash(cfg, 0)
    with pytest.raises(ScheduleError):
        cfg2 = _cfg()
        apply_step(cfg2, 0, "C")


def test_budget_limits():
    cfg = _cfg(limits={"max_sps": 1, "max_crashes": 1})
    apply_step(cfg, 0, "N")
    apply_step(cfg, 0, "C")
    assert not enabled_crash(cfg, 0)      # crash budget spent
    while cfg.procs[0].sp_active or cfg.procs[0].pc != ("rem",):
        apply_step(cfg, 0, "N")
    assert cfg.procs[0].done_sps == 1
    assert not enabled_normal(cfg, 0)     # super-passage budget spent


def test_schedule_roundtrip_and_replay(tmp_path):
    cfg = _cfg(trace=True)
    run(cfg, RandomSchedule(4, crash_prob=0.05), 1500)
    moves = [(p, kind) for (_, p, kind, _) in cfg.trace]
    path = tmp_path / "s.sched"
    save_schedule(path, moves)
    # file format: "<index> <proc> <N|C>"
    for i, line in enumerate(path.read_text().splitlines()):
        idx, p, kind = line.split()
        assert int(idx) == i and kind in ("N", "C")
    cfg2 = _cfg(trace=True)
    run(cfg2, ScriptSchedule(load_schedule(path)), len(moves))
    assert cfg2.trace == cfg.trace
    assert cfg2.mem.vals == cfg.mem.vals


def test_trace_format(tmp_path):
    cfg = _cfg(trace=True)
    run(cfg, RandomSchedule(1, crash_prob=0.05), 500)
    path = tmp_path / "t.trace"
    save_trace(path, cfg.trace)
    for i, line in enumerate(path.read_text().splitlines()):
        idx, p, kind, lbl = line.split()
        assert int(idx) == i
        assert 0 <= int(p) < 3
        assert kind in ("N", "C")
        assert lbl[0].isalpha()


def test_bad_schedule_file_rejected(tmp_path):
    path = tmp_path / "bad.sched"
    path.write_text("0 0 N\n1 zero X\n")
    with pytest.raises(ScheduleError):
        load_schedule(path)


def test_clone_isolation():
    cfg = _cfg()
    for _ in range(10):
        apply_step(cfg, 0, "N")
    c2 = cfg.clone()
    for _ in range(10):
        apply_step(c2, 1, "N")
    assert cfg.procs[1].pc == ("rem",)
    assert c2.procs[0].pc == cfg.procs[0].pc
