"""Acceptance criteria, one test (and one pass/fail line under `pytest -v`)
per criterion.

Frozen regression constants (measured once at these exact scales/seeds, then
pinned):

  B_EXIT / B_CSR     step bounds of the wait-free Exit and the wait-free
                     critical-section reentry (line counts of those paths)
  C0                 max RMRs of any crash-free passage, queue n=k=8
  FIT                (c1, c2) per model: super-passage RMRs <= c1 + c2*f*k
                     for a super-passage with f crashes
  TREE_C             crash-free tree passage RMRs <= TREE_C*ceil(log n/log log n)
  SIGNAL_RMR_BOUND   RMRs per signal/wait call
"""

import math

import pytest

from rmxsim.memory import Memory
from rmxsim.runtime import (Config, RandomSchedule, apply_step, run,
                            enabled_normal)
from rmxsim.signalobj import SignalWorld, present
from rmxsim.queue import QueueWorld
from rmxsim.tree import TreeWorld, tree_arity
from rmxsim.explore import explore
from rmxsim import invariants
from rmxsim.harness import (run_fig7, stress, passage_stats, fit_margin,
                            run_corruption_sweep)

B_EXIT = 6
B_CSR = 6
SIGNAL_RMR_BOUND = 4
C0 = {"dsm": 60, "cc": 96}
FIT = {"dsm": (80, 1.6), "cc": (120, 2.6)}
TREE_C = 18

QUEUE_SEEDS = range(100)
QUEUE_STEPS = 12000
QUEUE_CRASH_PROB = 0.03


def _queue_cfg(n, k, max_sps, max_crashes):
    mem = Memory("dsm", n)
    w = QueueWorld(n, k)
    w.setup(mem)
    cfg = Config(mem, n, w, limits={"max_sps": max_sps,
                                    "max_crashes": max_crashes},
                 record_stats=False)
    return w, cfg


def _exhaustive(level):
    """Criteria 1/2 bounds: n=2, k=2, <=1 crash and <=2 super-passages per
    process; checker at every state plus a direct mutual-exclusion check."""
    w, cfg = _queue_cfg(2, 2, 2, 1)

    def chk(c):
        out = invariants.check(c, w.inst, level)
        ins = [p for p, ps in enumerate(c.procs) if ps.pc == ("cs",)]
        if len(ins) > 1:
            out = list(out) + [f"mutual exclusion violated: {ins}"]
        return out or None

    rep = explore(cfg, check=chk)
    assert rep.violations == [], rep.summary()
    assert not rep.truncated
    assert rep.states > 500000


@pytest.mark.slow
def test_criterion_01_exhaustive_core_invariants():
    _exhaustive("core")


@pytest.mark.slow
def test_criterion_02_exhaustive_extended_invariants():
    _exhaustive("extended")


@pytest.mark.parametrize("impl,model", [
    ("dsm", "dsm"), ("dsm", "cc"), ("cc", "cc")])
def test_criterion_03_signal_object(impl, model):
    # safety under every interleaving, with and without one waiter crash
    for mc in (0, 1):
        mem = Memory(model, 2)
        w = SignalWorld(impl)
        w.setup(mem)
        cfg = Config(mem, 2, w, limits={"max_sps": 1, "max_crashes": mc})

        def chk(c):
            if c.procs[1].done_sps and not present(c.mem, w.sig):
                return ["wait returned before the signal was present"]
            return None

        rep = explore(cfg, check=chk)
        assert rep.violations == [] and not rep.truncated
    # cost: drive every crash-free interleaving to completion
    mem = Memory(model, 2)
    w = SignalWorld(impl)
    w.setup(mem)
    root = Config(mem, 2, w, limits={"max_sps": 1, "max_crashes": 0})
    stack = [root]
    while stack:
        c = stack.pop()
        moved = False
        for p in (0, 1):
            if enabled_normal(c, p):
                c2 = c.clone()
                apply_step(c2, p, "N")
                if c2.step_index < 60:
                    stack.append(c2)
                moved = True
        if not moved:
            assert max(c.mem.rmr) <= SIGNAL_RMR_BOUND, c.mem.rmr


def _exit_spans(cfg):
    """(proc, steps) for every crash-free Exit-section completion, measured
    from the step that executes the first Exit line to the retirement."""
    spans = []
    open_ = {}
    for (_, p, kind, lbl) in cfg.trace:
        if kind == "C":
            open_.pop(p, None)
            continue
        if lbl == "exit:1":
            open_[p] = 0
        if p in open_:
            open_[p] += 1
            if lbl == "exit:3":
                spans.append((p, open_.pop(p)))
    return spans


def _stress_traced(n, seed, steps, crash_prob):
    mem = Memory("dsm", n)
    w = QueueWorld(n, n)
    w.setup(mem)
    cfg = Config(mem, n, w)
    cfg.trace = []
    run(cfg, RandomSchedule(seed, crash_prob=crash_prob), steps)
    return cfg


def test_criterion_04_wait_free_exit():
    # exhaustive part: from every reachable mid-Exit state, the owner alone
    # finishes within its remaining budget
    w, cfg = _queue_cfg(2, 2, 1, 1)

    def chk(c):
        for p, ps in enumerate(c.procs):
            if ps.pc[0] == "exit":
                probe = c.clone()
                for _ in range(B_EXIT):
                    if not probe.procs[p].sp_active:
                        break
                    apply_step(probe, p, "N")
                if probe.procs[p].sp_active:
                    return [f"exit of proc {p} exceeded {B_EXIT} steps"]
        return None

    rep = explore(cfg, check=chk)
    assert rep.violations == [], rep.summary()
    # statistical part: 100 random runs at n=8
    total = 0
    for seed in range(100):
        cfg = _stress_traced(8, seed, 100000, 0.02)
        for p, steps in _exit_spans(cfg):
            total += 1
            assert steps <= B_EXIT, (seed, p, steps)
    assert total > 1000


def test_criterion_05_wait_free_cs_reentry():
    """Every crash inside the critical section is followed by CS reentry of
    the same process within B_CSR of its own crash-free steps, and no other
    process enters the CS in between."""
    checked = 0
    for seed in range(60):
        cfg = _stress_traced(6, seed, 60000, 0.03)
        entries = cfg.stats["cs_entries"]       # (step_index, proc)
        for i, (idx, p, kind, lbl) in enumerate(cfg.trace):
            if kind != "C" or lbl != "cs":
                continue
            # walk this process's subsequent steps
            own = 0
            reentered_at = None
            for j in range(i + 1, len(cfg.trace)):
                idx2, q, kind2, _ = cfg.trace[j]
                if q != p:
                    continue
                if kind2 == "C":
                    break       # counted separately from the later crash
                own += 1
                if any(e == idx2 for (e, ep) in entries if ep == p):
                    reentered_at = idx2
                    break
            if reentered_at is None:
                continue        # run ended or another crash intervened
            checked += 1
            assert own <= B_CSR, (seed, idx, own)
            others = [(e, ep) for (e, ep) in entries
                      if idx < e < reentered_at and ep != p]
            assert not others, (seed, idx, others)
    assert checked > 50


def test_criterion_06_rmr_constants():
    for model in ("dsm", "cc"):
        c1, c2 = FIT[model]
        worst_margin = None
        for seed in QUEUE_SEEDS:
            cfg, viol = stress(QueueWorld(8, 8), 8, seed, QUEUE_STEPS,
                               model=model, crash_prob=QUEUE_CRASH_PROB)
            assert viol is None
            st = passage_stats(cfg)
            assert st["max_crash_free_passage_rmr"] <= C0[model], (
                model, seed, st["max_crash_free_passage_rmr"])
            m = fit_margin(st["sps"], c1, c2, 8)
            if m is not None:
                worst_margin = m if worst_margin is None else min(
                    worst_margin, m)
        assert worst_margin is not None and worst_margin >= 0, (
            model, worst_margin)


def test_criterion_07_tree_bound():
    for n in (8, 16, 64):
        bound = TREE_C * math.ceil(
            math.log2(n) / math.log2(max(2.0, math.log2(n))))
        worst = 0
        for seed in range(10):
            cfg, viol = stress(TreeWorld(n), n, seed,
                               120000 if n == 64 else 40000, crash_prob=0.0)
            assert viol is None
            worst = max(worst, passage_stats(cfg)
                        ["max_crash_free_passage_rmr"])
        assert 0 < worst <= bound, (n, worst, bound)


def test_criterion_08_scripted_repair_replay():
    report, _ = run_fig7()
    assert report["initial"] == "five broken fragments, tail at node 6"
    assert report["repair-1"] == "node 1 relinked behind the seed node"
    assert report["repair-7"] == "node 7 relinked behind node 2"
    assert report["repair-5"] == "node 5 relinked behind node 7"
    assert report["repair-8"] == "tail re-swapped to node 8 behind node 6"
    assert report["repair-3"] == "fragment (3,4) appended, tail at node 4"
    assert report["final"] == "single chain 1,2,7,5,6,8,3,4"


def test_criterion_09_bounded_starvation_freedom():
    T, budget = 8000, 120000
    for seed in range(20):
        mem = Memory("dsm", 4)
        w = QueueWorld(4, 4)
        w.setup(mem)
        cfg = Config(mem, 4, w)
        sched = RandomSchedule(seed, crash_prob=0.05, crash_stop=T)
        run(cfg, sched, T)
        waiting = [p for p, ps in enumerate(cfg.procs) if ps.sp_active]
        before = [cfg.procs[p].done_sps for p in range(4)]
        run(cfg, sched, budget - T)
        for p in waiting:
            entered = any(e > T for (e, ep) in cfg.stats["cs_entries"]
                          if ep == p)
            finished = cfg.procs[p].done_sps > before[p]
            assert entered or finished, (seed, p)


def test_criterion_10_fault_injection_sensitivity():
    results = run_corruption_sweep()
    assert len(results) >= 20
    missed = [name for name, trips in results if not trips]
    assert not missed, f"undetected corruptions: {missed}"
