"""Arbitration tree: geometry, mutual exclusion, crash recovery, progress."""

import math

import pytest

from rmxsim.memory import Memory
from rmxsim.runtime import Config, RandomSchedule, run
from rmxsim.tree import TreeWorld, tree_arity, tree_height


def test_geometry():
    for n in (2, 3, 5, 8, 16, 64, 256):
        k = tree_arity(n)
        h = tree_height(n, k)
        assert k >= 2
        assert k ** h >= n          # every process has a leaf slot
        # degree tracks log n / log log n
        if n >= 4:
            target = math.log2(n) / math.log2(max(2.0, math.log2(n)))
            assert k == max(2, math.ceil(target))


def _me_check(cfg):
    ins = [p for p, ps in enumerate(cfg.procs) if ps.pc == ("cs",)]
    if len(ins) > 1:
        return [f"two in the critical section: {ins}"]
    return None


@pytest.mark.parametrize("n", [2, 3, 5, 8, 16])
def test_stress_mutual_exclusion_and_progress(n):
    mem = Memory("dsm", n)
    w = TreeWorld(n)
    w.setup(mem)
    cfg = Config(mem, n, w)
    viol = run(cfg, RandomSchedule(n, crash_prob=0.03), 40000,
               check=_me_check, check_stride=1)
    assert viol is None
    assert all(ps.done_sps >= 1 for ps in cfg.procs)


def test_quiescence_after_crashes_stop():
    """With a bounded super-passage budget and crashes cut off, every
    process finishes and the tree is fully released."""
    n = 8
    mem = Memory("dsm", n)
    w = TreeWorld(n)
    w.setup(mem)
    cfg = Config(mem, n, w, limits={"max_sps": 3})
    viol = run(cfg, RandomSchedule(5, crash_prob=0.05, crash_stop=30000),
               300000, check=_me_check, check_stride=1)
    assert viol is None
    assert all(ps.done_sps == 3 and not ps.sp_active for ps in cfg.procs)


def test_crash_during_climb_recovers():
    from rmxsim.runtime import apply_step
    n = 4
    mem = Memory("dsm", n)
    w = TreeWorld(n)
    w.setup(mem)
    cfg = Config(mem, n, w)
    # proc 0 climbs into the critical section, crashes there, reenters
    for _ in range(500):
        if cfg.procs[0].pc == ("cs",):
            break
        apply_step(cfg, 0, "N")
    assert cfg.procs[0].pc == ("cs",)
    apply_step(cfg, 0, "C")
    for _ in range(500):
        if cfg.procs[0].done_sps:
            break
        apply_step(cfg, 0, "N")
    assert cfg.procs[0].done_sps == 1
    # another process can now pass through unobstructed
    for _ in range(500):
        if cfg.procs[1].done_sps:
            break
        apply_step(cfg, 1, "N")
    assert cfg.procs[1].done_sps == 1
