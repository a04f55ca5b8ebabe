"""Invariant checker: silent on valid runs, loud on corrupted state."""

from rmxsim.memory import Memory
from rmxsim.runtime import Config, RandomSchedule, run
from rmxsim.queue import QueueWorld
from rmxsim import invariants
from rmxsim.harness import (_mid_run_config, corruption_catalog,
                            run_corruption_sweep)


def test_initial_state_clean():
    mem = Memory("dsm", 2)
    w = QueueWorld(2, 2)
    w.setup(mem)
    cfg = Config(mem, 2, w)
    assert invariants.check(cfg, w.inst, "extended") == []


def test_checked_stress_run_clean():
    for seed in (0, 1, 2):
        mem = Memory("dsm", 3)
        w = QueueWorld(3, 3)
        w.setup(mem)
        cfg = Config(mem, 3, w)
        chk = lambda c: invariants.check(c, w.inst, "extended") or None
        assert run(cfg, RandomSchedule(seed, crash_prob=0.08), 8000,
                   check=chk, check_stride=8) is None


def test_core_subset_of_extended():
    cfg, inst = _mid_run_config()
    assert invariants.check(cfg, inst, "core") == []
    assert invariants.check(cfg, inst, "extended") == []


def test_catalog_size():
    cfg, inst = _mid_run_config()
    assert len(corruption_catalog(cfg, inst)) >= 20


def test_every_corruption_trips_a_condition():
    results = run_corruption_sweep()
    missed = [name for name, trips in results if not trips]
    assert not missed, f"corruptions undetected by the checker: {missed}"


def test_corruptions_do_not_crash_the_checker():
    """The checker must report, not raise, on malformed memory."""
    cfg, inst = _mid_run_config()
    for name, make in corruption_catalog(cfg, inst):
        trips = invariants.check(make(), inst, "extended")
        assert isinstance(trips, list) and trips, name
