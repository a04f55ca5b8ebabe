"""Auxiliary recoverable lock: mutual exclusion, recovery, wait-free release."""

import pytest

from rmxsim.memory import Memory
from rmxsim.runtime import Config, RandomSchedule, apply_step, run
from rmxsim.rlock import (RLockWorld, RELEASE_STEPS_PER_LEVEL,
                          tournament_depth)
from rmxsim.explore import explore


def _cfg(n, k, limits=None, model="dsm"):
    mem = Memory(model, n)
    w = RLockWorld(n, k)
    w.setup(mem)
    return w, Config(mem, n, w, limits=limits)


def _me_check(cfg):
    ins = [p for p, ps in enumerate(cfg.procs) if ps.pc == ("cs",)]
    if len(ins) > 1:
        return [f"two holders: {ins}"]
    return None


def test_depth():
    assert [tournament_depth(k) for k in (1, 2, 3, 4, 8)] == [0, 1, 2, 2, 3]


@pytest.mark.parametrize("max_crashes", [0, 1])
def test_exhaustive_mutual_exclusion(max_crashes):
    w, cfg = _cfg(2, 2, limits={"max_sps": 1, "max_crashes": max_crashes})
    rep = explore(cfg, check=_me_check)
    assert rep.violations == []
    assert not rep.truncated
    assert rep.states > 100


def test_stress_mutual_exclusion_and_progress():
    for seed in range(6):
        w, cfg = _cfg(4, 4)
        viol = run(cfg, RandomSchedule(seed, crash_prob=0.05), 30000,
                   check=_me_check, check_stride=1)
        assert viol is None
        assert all(ps.done_sps >= 2 for ps in cfg.procs)


def test_crash_recovery_completes():
    w, cfg = _cfg(2, 2)
    # proc 0 acquires fully, crashes, and must be able to finish on re-entry
    for _ in range(200):
        if cfg.procs[0].pc == ("cs",):
            break
        apply_step(cfg, 0, "N")
    assert cfg.procs[0].pc == ("cs",)
    apply_step(cfg, 0, "C")
    for _ in range(200):
        if not cfg.procs[0].sp_active:
            break
        apply_step(cfg, 0, "N")
    assert cfg.procs[0].done_sps == 1
    assert not w.inst.holds_any(cfg.mem, 0)


def test_release_is_wait_free_bounded():
    """From the protected section back to Remainder in at most
    1 + RELEASE_STEPS_PER_LEVEL * depth solo steps, with a rival present."""
    w, cfg = _cfg(2, 2)
    # rival contends to make the release path take its wake branch
    for _ in range(5):
        apply_step(cfg, 1, "N")
    for _ in range(200):
        if cfg.procs[0].pc == ("cs",):
            break
        apply_step(cfg, 0, "N")
    assert cfg.procs[0].pc == ("cs",)
    steps = 0
    while cfg.procs[0].sp_active:
        apply_step(cfg, 0, "N")
        steps += 1
        assert steps <= 1 + RELEASE_STEPS_PER_LEVEL * w.inst.depth
    assert steps <= 1 + RELEASE_STEPS_PER_LEVEL * w.inst.depth
