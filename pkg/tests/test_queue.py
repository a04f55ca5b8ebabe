"""Queue algorithm: line-level oracle, recovery paths, repair structure.

The solo-passage oracle below freezes the exact sequence of executed lines
for a contention-free, crash-free passage.  It was derived once from the
algorithm's control structure (each expanded signal/wait sub-line counted
separately) and is asserted verbatim against the recorded trace.
"""

import pytest

from rmxsim.memory import Memory
from rmxsim.runtime import Config, RandomSchedule, apply_step, run
from rmxsim.queue import (QueueWorld, compute_maximal_paths, pred_cell,
                          line_ord, eff_ord)
from rmxsim.values import NIL
from rmxsim import invariants

# frozen oracle: executed lines of one solo passage (proc 0, port 0; the
# predecessor is the seed node whose signals are permanently set)
SOLO_PASSAGE_LINES = [
    "rem",                                      # enter the Try section
    "try:1",                                    # slot empty -> fresh passage
    "try:2", "try:3", "try:4", "try:5",         # announce, swap, link
    "try:6:1", "try:6:2", "try:6:3",            # signal "pred is set"
    "try:16:1", "try:16:2", "try:16:3",         # wait on predecessor
    "try:16:4",                                 # ...bit already present
    "try:17",                                   # mark in-CS
    "cs",
    "exit:1",                                   # mark finished
    "exit:2:1", "exit:2:2", "exit:2:3",         # signal successor
    "exit:3",                                   # retire the announce slot
]

# frozen oracle: executed lines from a crash inside the critical section
# back into the critical section (the wait-free reentry path)
CS_REENTRY_LINES = ["rem", "try:1", "try:8", "try:9", "try:10", "try:11"]

B_EXIT = 6   # steps from entering the Exit section to Remainder, inclusive
B_CSR = len(CS_REENTRY_LINES)   # = 6


def _cfg(n=1, k=1, model="dsm", trace=True):
    mem = Memory(model, n)
    w = QueueWorld(n, k)
    w.setup(mem)
    cfg = Config(mem, n, w)
    if trace:
        cfg.trace = []
    return w, cfg


def _labels(cfg, p):
    return [lbl for (_, q, _, lbl) in cfg.trace if q == p]


def test_solo_passage_matches_frozen_oracle():
    w, cfg = _cfg()
    while cfg.procs[0].done_sps == 0:
        apply_step(cfg, 0, "N")
    assert _labels(cfg, 0) == SOLO_PASSAGE_LINES


def test_solo_passage_rmr_dsm():
    # port cells are in the proc's own partition; only the seed node, Tail
    # and the announce/wait structures are remote
    w, cfg = _cfg(model="dsm")
    while cfg.procs[0].done_sps == 0:
        apply_step(cfg, 0, "N")
    assert cfg.mem.rmr[0] <= 10


def test_cs_crash_reentry_matches_frozen_oracle():
    w, cfg = _cfg()
    while cfg.procs[0].pc != ("cs",):
        apply_step(cfg, 0, "N")
    apply_step(cfg, 0, "C")
    cfg.trace.clear()
    for _ in range(B_CSR):
        apply_step(cfg, 0, "N")
    assert _labels(cfg, 0) == CS_REENTRY_LINES
    assert cfg.procs[0].pc == ("cs",)


def test_exit_is_wait_free_bounded():
    w, cfg = _cfg()
    while cfg.procs[0].pc != ("cs",):
        apply_step(cfg, 0, "N")
    apply_step(cfg, 0, "N")   # the CS step itself
    steps = 0
    while cfg.procs[0].sp_active:
        apply_step(cfg, 0, "N")
        steps += 1
    assert steps <= B_EXIT


def test_crash_after_exit_retires_without_queueing():
    """A crash between the finished-mark and the slot retirement must not
    re-enter the queue: the reentry sees the finished token and cleans up."""
    w, cfg = _cfg()
    while cfg.procs[0].pc != ("exit", 2, 1):
        apply_step(cfg, 0, "N")
    apply_step(cfg, 0, "C")
    for _ in range(40):
        if not cfg.procs[0].sp_active:
            break
        apply_step(cfg, 0, "N")
    assert cfg.procs[0].done_sps == 1
    assert cfg.mem.peek(w.inst.slots[0]) == NIL
    # and it never re-swapped Tail: its retired node is still there
    labels = _labels(cfg, 0)
    assert "try:4" in labels and labels.count("try:4") == 1


def test_two_procs_fifo_order():
    """Crash-free contention: the first to swap Tail enters first."""
    w, cfg = _cfg(n=2, k=2)
    # interleave: 0 swaps first, then 1; then run both round-robin
    while cfg.procs[0].pc != ("try", 5):
        apply_step(cfg, 0, "N")
    while cfg.procs[1].pc != ("try", 5):
        apply_step(cfg, 1, "N")
    for _ in range(200):
        for p in (0, 1):
            if cfg.procs[p].sp_active or cfg.procs[p].pc != ("rem",):
                if cfg.procs[p].done_sps == 0:
                    apply_step(cfg, p, "N")
        if all(ps.done_sps for ps in cfg.procs):
            break
    order = [p for (_, p) in cfg.stats["cs_entries"]]
    assert order == [0, 1]


def test_fragment_after_tail_swap_crash():
    """Crash right after the Tail swap leaves a broken fragment that the
    owner repairs behind the seed node on reentry."""
    w, cfg = _cfg(n=2, k=2)
    inst = w.inst
    while cfg.procs[0].pc != ("try", 5):
        apply_step(cfg, 0, "N")
    apply_step(cfg, 0, "C")
    mynode = ("node", next(iter(cfg.nodes)))
    assert cfg.mem.peek(pred_cell(mynode)) == NIL
    # reentry marks the loss, repairs, and completes
    for _ in range(400):
        if not cfg.procs[0].sp_active:
            break
        apply_step(cfg, 0, "N")
    assert cfg.procs[0].done_sps == 1
    assert invariants.check(cfg, inst, "extended") == []


def test_compute_maximal_paths():
    a, b, c, d, e = (("node", i * 5) for i in range(1, 6))
    V = frozenset({a, b, c, d, e})
    E = frozenset({(b, a), (c, b), (e, d)})   # chains c->b->a and e->d
    ports = {a: 0, b: 1, c: 2, d: 3, e: 4}
    paths = compute_maximal_paths(V, E, lambda v: ports[v])
    assert paths == ((c, b, a), (e, d))
    # singleton and empty
    assert compute_maximal_paths(frozenset({a}), frozenset(),
                                 lambda v: 0) == ((a,),)
    assert compute_maximal_paths(frozenset(), frozenset(), lambda v: 0) == ()


def test_line_ordinals():
    assert line_ord("try", 1) == 1
    assert line_ord("exit", 1) == 18
    assert line_ord("rep", 1) == 21
    assert eff_ord(("rem",)) == 1
    assert eff_ord(("cs",)) == 18
    assert eff_ord(("try", 16, 3)) == 16
    assert eff_ord(("rlk", 0, 0)) == 15


def test_stress_with_invariants_clean():
    for model in ("dsm", "cc"):
        w, cfg = _cfg(n=4, k=4, model=model, trace=False)
        chk = lambda c: invariants.check(c, w.inst, "extended") or None
        viol = run(cfg, RandomSchedule(3, crash_prob=0.05), 20000,
                   check=chk, check_stride=16)
        assert viol is None
        assert all(ps.done_sps >= 1 for ps in cfg.procs)
