"""Scenario builders, stress drivers, measurement collectors and the
fault-injection catalog.

The centerpiece is the scripted eight-process repair scenario: three
processes crash right after the tail swap, two right before it, and the
crashed processes then repair the queue one at a time, exercising all three
relink choices (seed node, behind the head chain, re-swap of Tail).  The
builder records the full schedule, asserts the queue shape after every
repair, and can save the schedule for standalone replay.
"""

from .values import NIL
from .memory import Memory
from .runtime import Config, RandomSchedule, apply_step, run, save_schedule
from .queue import QueueWorld, pred_cell
from . import invariants


class ScenarioError(AssertionError):
    pass


class _Driver:
    """Applies steps to a configuration while recording the schedule."""

    def __init__(self, cfg):
        self.cfg = cfg
        self.moves = []

    def crash(self, p):
        apply_step(self.cfg, p, "C")
        self.moves.append((p, "C"))

    def advance(self, p, stop, limit=3000):
        """Run p alone until stop(proc-state) holds."""
        for _ in range(limit):
            ps = self.cfg.procs[p]
            if stop(ps):
                return
            apply_step(self.cfg, p, "N")
            self.moves.append((p, "N"))
        raise ScenarioError(f"proc {p} never reached the requested point")


def _at(pc):
    return lambda ps: ps.pc == pc

def _done(ps):
    return ps.done_sps > 0 and not ps.sp_active


def run_fig7(sched_path=None):
    """Execute the scripted repair scenario and assert the six queue states.

    Nine processes: process 0 first completes a solo super-passage, leaving
    a retired node x.  Processes 1..6 then enqueue in order; 1, 3 and 5
    crash just after their tail swap, 2, 4 and 6 wait behind them.
    Processes 7 and 8 announce but crash before the swap.  The five crashed
    processes repair serially in the order 1, 7, 5, 8, 3.

    Returns a report dict with one entry per asserted state and the final
    chain; raises ScenarioError on any shape mismatch.
    """
    mem = Memory("dsm", 9)
    world = QueueWorld(9, 8)
    world.setup(mem)
    cfg = Config(mem, 9, world)
    inst = world.inst
    d = _Driver(cfg)
    report = {}

    def nd(p):
        """node created by process p (each creates exactly one here)"""
        bases = [b for b, (owner, _) in cfg.nodes.items() if owner == p]
        if len(bases) != 1:
            raise ScenarioError(f"proc {p} owns {len(bases)} nodes")
        return ("node", bases[0])

    def pred(v):
        return mem.peek(pred_cell(v))

    def expect(label, cond):
        if not cond:
            raise ScenarioError(f"fig7 {label}: queue shape mismatch")

    # retired node x from a completed earlier passage
    d.advance(0, _done)
    x = nd(0)
    expect("x", pred(x) == inst.EXIT)

    # enqueue in order; 1/3/5 stop after the swap, 2/4/6 reach their wait
    spin = lambda ps: ps.pc == ("try", 16, 5)
    for a, b in ((1, 2), (3, 4), (5, 6)):
        d.advance(a, _at(("try", 5)))
        d.advance(b, spin)
        d.crash(a)
    for c in (7, 8):
        d.advance(c, _at(("try", 4)))
        d.crash(c)

    # every crashed process re-enters, marks its loss and publishes it,
    # stopping at the entrance of the repair lock
    at_lock = lambda ps: ps.pc[0] == "rlk"
    for c in (1, 7, 5, 8, 3):
        d.advance(c, at_lock)

    expect("initial", all(pred(nd(c)) == inst.CRASH for c in (1, 3, 5, 7, 8))
           and pred(nd(2)) == nd(1) and pred(nd(4)) == nd(3)
           and pred(nd(6)) == nd(5) and mem.peek(inst.tail) == nd(6))
    report["initial"] = "five broken fragments, tail at node 6"

    # repair 1: no chain leads to the critical section -> seed node
    # (its wait then completes at once: the seed's signal is permanently set)
    d.advance(1, _at(("try", 16, 1)))
    expect("repair-1", pred(nd(1)) == inst.SPECIAL)
    report["repair-1"] = "node 1 relinked behind the seed node"
    d.advance(1, _at(("cs",)))

    # repair 7: head chain is (2 -> 1); adopt its rear
    d.advance(7, spin)
    expect("repair-7", pred(nd(7)) == nd(2))
    report["repair-7"] = "node 7 relinked behind node 2"

    # repair 5: head chain now rears at node 7
    d.advance(5, spin)
    expect("repair-5", pred(nd(5)) == nd(7))
    report["repair-5"] = "node 5 relinked behind node 7"

    # repair 8: tail chain reaches the critical section -> re-swap Tail
    d.advance(8, spin)
    expect("repair-8", pred(nd(8)) == nd(6)
           and mem.peek(inst.tail) == nd(8))
    report["repair-8"] = "tail re-swapped to node 8 behind node 6"

    # repair 3: same, inserting the whole fragment (3, 4)
    d.advance(3, spin)
    expect("repair-3", pred(nd(3)) == nd(8)
           and mem.peek(inst.tail) == nd(4))
    report["repair-3"] = "fragment (3,4) appended, tail at node 4"

    chain = inst.fragment_of(cfg, nd(1))
    want = tuple(nd(p) for p in (1, 2, 7, 5, 6, 8, 3, 4))
    expect("final", chain == want)
    report["final"] = "single chain 1,2,7,5,6,8,3,4"

    viol = invariants.check(cfg, inst, "extended")
    if viol:
        raise ScenarioError(f"fig7 end state violates invariants: {viol}")

    # drain: everyone completes
    for _ in range(5000):
        movers = [p for p in range(9) if cfg.procs[p].sp_active]
        if not movers:
            break
        for p in movers:
            if cfg.procs[p].pc != ("rem",) or cfg.procs[p].sp_active:
                apply_step(cfg, p, "N")
                d.moves.append((p, "N"))
    if any(ps.sp_active for ps in cfg.procs):
        raise ScenarioError("fig7 drain did not complete")
    report["drain"] = "all nine processes completed their super-passages"

    if sched_path is not None:
        save_schedule(sched_path, d.moves)
    return report, d.moves


# -- stress running and measurement -----------------------------------------

def stress(world, n, seed, steps, model="dsm", crash_prob=0.0,
           crash_stop=None, limits=None, check_level="off", check_stride=64,
           inst=None, trace=False):
    """One seeded random run; returns (config, violation-or-None)."""
    mem = Memory(model, n)
    world.setup(mem)
    cfg = Config(mem, n, world, limits=limits)
    if trace:
        cfg.trace = []
    chk = None
    if check_level != "off":
        qinst = inst if inst is not None else getattr(world, "inst", None)
        if qinst is not None:
            chk = lambda c: invariants.check(c, qinst, check_level) or None
    sched = RandomSchedule(seed, crash_prob=crash_prob, crash_stop=crash_stop)
    viol = run(cfg, sched, steps, check=chk, check_stride=check_stride)
    return cfg, viol


def passage_stats(cfg):
    """Max RMR over crash-free passages, and per-super-passage (rmr, f)."""
    crash_free = [r for (_, r, crashed) in cfg.stats["passages"]
                  if not crashed]
    sps = [(r, f) for (_, r, f) in cfg.stats["sps"]]
    return {
        "passages": len(cfg.stats["passages"]),
        "max_crash_free_passage_rmr": max(crash_free, default=0),
        "sps": sps,
        "cs_entries": len(cfg.stats["cs_entries"]),
    }


def fit_margin(sps, c1, c2, k):
    """Smallest slack of the bound c1 + c2*f*k over observed (rmr, f)."""
    return min((c1 + c2 * f * k - r for (r, f) in sps), default=None)


# -- fault injection ---------------------------------------------------------

def _mid_run_config(n=3, k=3, seed=11, steps=2600):
    """A valid, busy mid-run configuration to corrupt."""
    world = QueueWorld(n, k)
    cfg, viol = stress(world, n, seed, steps, crash_prob=0.05)
    assert viol is None
    return cfg, world.inst


def corruption_catalog(cfg, inst):
    """Named single-field corruptions, each returning a fresh corrupted
    clone.  Memory corruptions use poke (no cost accounting)."""
    mem = cfg.mem

    def announced():
        for q, c in enumerate(inst.slots):
            v = mem.peek(c)
            if v != NIL:
                return q, v
        raise AssertionError("no announced node to corrupt")

    def active():
        # prefer a process mid-passage in the Try section, whose hidden
        # history counter and registers are all in play
        best = None
        for p, ps in enumerate(cfg.procs):
            if ps.pc != ("rem",) and ps.regs.get("mynode") is not None:
                if ps.pc[0] == "try" and ps.pch in (4, 5, 6, 16):
                    return p
                best = p if best is None else best
        if best is None:
            raise AssertionError("no active process to corrupt")
        return best

    q, v = announced()
    p = active()
    cats = []

    def cat(name, fn):
        def apply():
            c2 = cfg.clone()
            fn(c2)
            return c2
        cats.append((name, apply))

    cat("tail-nil", lambda c: c.mem.poke(inst.tail, NIL))
    cat("tail-crash-sentinel", lambda c: c.mem.poke(inst.tail, inst.CRASH))
    cat("tail-incs-sentinel", lambda c: c.mem.poke(inst.tail, inst.INCS))
    cat("tail-exit-token", lambda c: c.mem.poke(inst.tail, inst.EXIT))
    cat("tail-unallocated-node", lambda c: c.mem.poke(inst.tail,
                                                      ("node", 999983)))
    cat("slot-points-at-seed", lambda c: c.mem.poke(inst.slots[q],
                                                    inst.SPECIAL))
    cat("slot-points-at-crash", lambda c: c.mem.poke(inst.slots[q],
                                                     inst.CRASH))
    cat("slot-unallocated-node", lambda c: c.mem.poke(inst.slots[q],
                                                      ("node", 999983)))
    cat("node-pred-self-loop", lambda c: c.mem.poke(pred_cell(v), v))
    cat("node-pred-nil-while-announced",
        lambda c: c.mem.poke(pred_cell(v), NIL))
    cat("node-nn-signal-cleared", lambda c: c.mem.poke(v[1] + 1, ("sig", 0)))
    cat("node-cs-signal-set", lambda c: c.mem.poke(v[1] + 3, ("sig", 1)))
    cat("seed-pred-cleared",
        lambda c: c.mem.poke(pred_cell(inst.SPECIAL), NIL))
    cat("seed-cs-signal-cleared",
        lambda c: c.mem.poke(inst.SPECIAL[1] + 3, ("sig", 0)))
    cat("seed-nn-signal-cleared",
        lambda c: c.mem.poke(inst.SPECIAL[1] + 1, ("sig", 0)))

    def set_pch(c, val):
        c.procs[p].pch = val

    cat("pch-jump-to-cs", lambda c: set_pch(c, 18))
    cat("pch-jump-to-exit", lambda c: set_pch(c, 19))
    cat("pch-rewound-to-remainder", lambda c: set_pch(c, 2))

    def set_reg(c, key, val):
        c.procs[p].regs[key] = val

    cat("reg-mynode-seed", lambda c: set_reg(c, "mynode", inst.SPECIAL))
    cat("reg-mynode-unallocated",
        lambda c: set_reg(c, "mynode", ("node", 999983)))
    cat("reg-mynode-dropped", lambda c: c.procs[p].regs.pop("mynode", None))
    cat("proc-pc-teleport-cs", lambda c: setattr(c.procs[p], "pc", ("cs",)))
    return cats


def run_corruption_sweep():
    """Returns [(name, tripped-conditions)]; empty trip list = checker gap."""
    cfg, inst = _mid_run_config()
    base = invariants.check(cfg, inst, "extended")
    assert not base, f"baseline config not clean: {base}"
    results = []
    for name, make in corruption_catalog(cfg, inst):
        bad = make()
        results.append((name, invariants.check(bad, inst, "extended")))
    return results
