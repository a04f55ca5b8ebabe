"""Cost accounting of the two memory models."""

from rmxsim.memory import Memory
from rmxsim.values import NIL, intv


def test_dsm_local_ops_are_free():
    m = Memory("dsm", 2)
    a = m.alloc(owner=0)
    m.read(0, a)
    m.write(0, a, intv(1))
    m.fas(0, a, intv(2))
    assert m.rmr == [0, 0]


def test_dsm_remote_ops_cost_one_each():
    m = Memory("dsm", 2)
    a = m.alloc(owner=0)
    m.read(1, a)
    m.write(1, a, intv(1))
    m.fas(1, a, intv(2))
    assert m.rmr[1] == 3


def test_dsm_unowned_cells_are_remote_to_everyone():
    m = Memory("dsm", 2)
    a = m.alloc(owner=None)
    m.read(0, a)
    m.read(1, a)
    assert m.rmr == [1, 1]


def test_cc_cached_read_is_free():
    m = Memory("cc", 2)
    a = m.alloc()
    m.read(0, a)
    assert m.rmr[0] == 1
    m.read(0, a)
    m.read(0, a)
    assert m.rmr[0] == 1  # valid copy, no further charge


def test_cc_write_invalidates_other_copies():
    m = Memory("cc", 2)
    a = m.alloc()
    m.read(0, a)
    m.read(1, a)
    m.write(1, a, intv(5))
    assert m.rmr[1] == 2
    # proc 1 kept a valid copy; proc 0 lost its copy
    m.read(1, a)
    assert m.rmr[1] == 2
    m.read(0, a)
    assert m.rmr[0] == 2


def test_cc_fas_always_costs_and_returns_old():
    m = Memory("cc", 1)
    a = m.alloc(init=intv(7))
    assert m.fas(0, a, intv(8)) == intv(7)
    assert m.fas(0, a, intv(9)) == intv(8)
    assert m.rmr[0] == 2


def test_cc_lru_eviction_at_capacity():
    m = Memory("cc", 1, cache_capacity=2)
    a, b, c = m.alloc(), m.alloc(), m.alloc()
    m.read(0, a)
    m.read(0, b)
    m.read(0, c)   # evicts a
    assert m.rmr[0] == 3
    m.read(0, b)   # still cached
    assert m.rmr[0] == 3
    m.read(0, a)   # was evicted, costs again
    assert m.rmr[0] == 4


def test_cc_crash_wipes_only_own_cache():
    m = Memory("cc", 2)
    a = m.alloc()
    m.read(0, a)
    m.read(1, a)
    m.crash(0)
    m.read(0, a)
    assert m.rmr[0] == 2
    m.read(1, a)
    assert m.rmr[1] == 1


def test_memory_survives_crash():
    m = Memory("dsm", 1)
    a = m.alloc(init=NIL)
    m.write(0, a, intv(3))
    m.crash(0)
    assert m.peek(a) == intv(3)


def test_peek_poke_are_cost_free():
    m = Memory("cc", 1)
    a = m.alloc()
    m.poke(a, intv(1))
    assert m.peek(a) == intv(1)
    assert m.rmr == [0]


def test_clone_is_independent():
    m = Memory("cc", 1)
    a = m.alloc()
    m.read(0, a)
    m2 = m.clone()
    m2.write(0, a, intv(1))
    m2.crash(0)
    assert m.peek(a) == NIL
    assert m.rmr == [1] and m2.rmr == [2]
    assert a in m.caches[0] and a not in m2.caches[0]
