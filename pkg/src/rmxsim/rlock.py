"""Recoverable k-port lock: a tournament of 2-contender sub-locks.

Ports are leaves of a binary tree of depth ceil(log2 k); a port acquires the
sub-lock on each level in leaf-to-root order and releases root-to-leaf.

Each sub-lock is a Peterson-style pair (want[2], turn) made local-spin by a
wake-hint protocol: a contender sleeps on a per-(port,level) spin cell in its
own memory partition, after publishing the cell's address in a goaddr slot.
Wakes are written by the rival when it yields the turn and when it releases.
A wake is only a hint -- on waking, the contender resets its spin cell and
re-reads want/turn before either entering or sleeping again.  Mutual
exclusion therefore never depends on spin-cell contents, and under sequential
consistency no wake can be lost: a rival enabling the sleep condition always
writes the spin cell after the sleeper's reset.

Crash recovery uses a persisted phase cell per (port, level):
  0 = not held, 1 = acquiring, 2 = held.
Acquisition re-runs from scratch for phase<2 levels and skips held ones;
release order per level is phase<-0, want<-false, wake, so a crash at any
point leaves a state from which re-running acquire-then-release is safe.
Every release step is a plain write or read: the exit path is wait-free, at
most RELEASE_STEPS_PER_LEVEL steps per level.
"""

from .values import NIL, TRUE, FALSE, intv, ref

RELEASE_STEPS_PER_LEVEL = 5
ACQUIRE_DOORWAY_STEPS = 13  # sub-steps 0..12 of one level's acquisition


def tournament_depth(k):
    d = 0
    while (1 << d) < k:
        d += 1
    return d


class RLockInst:
    def __init__(self, mem, k, port_owner):
        self.k = k
        self.depth = tournament_depth(k)
        self.port_owner = list(port_owner)
        # per level: list of sub-lock cell dicts
        self.groups = []
        for lvl in range(self.depth):
            ngroups = (k + (1 << (lvl + 1)) - 1) >> (lvl + 1)
            row = []
            for _ in range(ngroups):
                row.append({
                    "want": (mem.alloc(init=FALSE), mem.alloc(init=FALSE)),
                    "turn": mem.alloc(init=intv(0)),
                    "goaddr": (mem.alloc(init=NIL), mem.alloc(init=NIL)),
                })
            self.groups.append(row)
        # per (port, level): spin + phase cells in the port owner's partition
        self.spin = [[mem.alloc(owner=port_owner[p], init=FALSE)
                      for _ in range(self.depth)] for p in range(k)]
        self.phase = [[mem.alloc(owner=port_owner[p], init=intv(0))
                       for _ in range(self.depth)] for p in range(k)]

    def side(self, port, lvl):
        return (port >> lvl) & 1

    def group(self, port, lvl):
        return self.groups[lvl][port >> (lvl + 1)]

    # -- acquisition --------------------------------------------------------

    def start_acquire(self):
        """Initial pc for an acquisition, or 'acquired' when depth is 0."""
        return ("rlk", 0, 0) if self.depth else "acquired"

    def _after_level(self, lvl):
        return ("rlk", lvl + 1, 0) if lvl + 1 < self.depth else "acquired"

    def acquire_step(self, mem, p, port, regs, pc):
        _, lvl, s = pc
        g = self.group(port, lvl)
        u = self.side(port, lvl)
        spin = self.spin[port][lvl]
        phase = self.phase[port][lvl]
        if s == 0:
            if mem.read(p, phase) == intv(2):
                return self._after_level(lvl)
            return ("rlk", lvl, 1)
        if s == 1:
            mem.write(p, phase, intv(1))
            return ("rlk", lvl, 2)
        if s == 2:
            mem.write(p, g["goaddr"][u], ref(spin))
            return ("rlk", lvl, 3)
        if s == 3:
            mem.write(p, g["want"][u], TRUE)
            return ("rlk", lvl, 4)
        if s == 4:
            mem.write(p, g["turn"], intv(1 - u))
            return ("rlk", lvl, 5)
        if s == 5:
            if mem.read(p, g["want"][1 - u]) != TRUE:
                return ("rlk", lvl, 13)
            return ("rlk", lvl, 6)
        if s == 6:
            regs["rl_a"] = mem.read(p, g["goaddr"][1 - u])
            return ("rlk", lvl, 7)
        if s == 7:
            if regs["rl_a"] != NIL:
                mem.write(p, regs["rl_a"][1], TRUE)
            return ("rlk", lvl, 8)
        if s == 8:
            if mem.read(p, g["turn"]) == intv(u):
                return ("rlk", lvl, 13)
            return ("rlk", lvl, 9)
        if s == 9:
            mem.write(p, spin, FALSE)
            return ("rlk", lvl, 10)
        if s == 10:
            if mem.read(p, g["want"][1 - u]) != TRUE:
                return ("rlk", lvl, 13)
            return ("rlk", lvl, 11)
        if s == 11:
            if mem.read(p, g["turn"]) == intv(u):
                return ("rlk", lvl, 13)
            return ("rlk", lvl, 12)
        if s == 12:
            if mem.read(p, spin) == TRUE:
                return ("rlk", lvl, 9)
            return ("rlk", lvl, 12)  # local spin
        if s == 13:
            mem.write(p, phase, intv(2))
            return self._after_level(lvl)
        raise AssertionError(pc)

    # -- release ------------------------------------------------------------

    def start_release(self):
        return ("rlx", self.depth - 1, 0) if self.depth else "released"

    def _after_release(self, lvl):
        return ("rlx", lvl - 1, 0) if lvl > 0 else "released"

    def release_step(self, mem, p, port, regs, pc):
        _, lvl, s = pc
        g = self.group(port, lvl)
        u = self.side(port, lvl)
        phase = self.phase[port][lvl]
        if s == 0:
            if mem.read(p, phase) != intv(2):
                return self._after_release(lvl)
            return ("rlx", lvl, 1)
        if s == 1:
            mem.write(p, phase, intv(0))
            return ("rlx", lvl, 2)
        if s == 2:
            mem.write(p, g["want"][u], FALSE)
            return ("rlx", lvl, 3)
        if s == 3:
            regs["rl_a"] = mem.read(p, g["goaddr"][1 - u])
            return ("rlx", lvl, 4)
        if s == 4:
            if regs["rl_a"] != NIL:
                mem.write(p, regs["rl_a"][1], TRUE)
            return self._after_release(lvl)
        raise AssertionError(pc)

    def step(self, mem, p, port, regs, pc):
        if pc[0] == "rlk":
            return self.acquire_step(mem, p, port, regs, pc)
        return self.release_step(mem, p, port, regs, pc)

    def holds_any(self, mem, port):
        return any(mem.peek(self.phase[port][lvl]) == intv(2)
                   for lvl in range(self.depth))


class RLockWorld:
    """Standalone harness world for the lock, mirroring how the queue uses it:
    acquire; enter the protected section only if this super-passage's work is
    not already done (persisted done flag, the analog of the repaired state);
    one step inside marks it done; then release and return to Remainder."""

    def __init__(self, nprocs, k):
        self.nprocs = nprocs
        self.k = k
        self.inst = None
        self.done = None  # per-port persisted flag

    def setup(self, mem):
        owner = [p % self.nprocs for p in range(self.k)]
        self.inst = RLockInst(mem, self.k, owner)
        self.done = [mem.alloc(owner=owner[p], init=FALSE)
                     for p in range(self.k)]

    def free_port(self, cfg, p):
        used = {ps.port for ps in cfg.procs if ps.sp_active}
        if p % self.k not in used:
            return p % self.k
        for q in range(self.k):
            if q not in used:
                return q
        return None

    def can_start(self, cfg, p):
        return self.free_port(cfg, p) is not None

    def begin_super_passage(self, cfg, p):
        ps = cfg.procs[p]
        ps.sp_active = True
        ps.port = self.free_port(cfg, p)
        ps.pc = ("init",)

    def reenter(self, cfg, p):
        cfg.procs[p].pc = self.inst.start_acquire()
        if cfg.procs[p].pc == "acquired":
            cfg.procs[p].pc = ("gate",)

    def step(self, cfg, p):
        from . import runtime
        ps = cfg.procs[p]
        mem = cfg.mem
        if ps.pc == ("init",):
            mem.write(p, self.done[ps.port], FALSE)
            ps.pc = self.inst.start_acquire()
            if ps.pc == "acquired":
                ps.pc = ("gate",)
            return
        if ps.pc == ("gate",):
            if mem.read(p, self.done[ps.port]) == TRUE:
                ps.pc = self.inst.start_release()
            else:
                ps.pc = ("cs",)
            if ps.pc == "released":
                runtime.end_super_passage(cfg, p)
            return
        if ps.pc == ("cs",):
            mem.write(p, self.done[ps.port], TRUE)
            ps.pc = self.inst.start_release()
            if ps.pc == "released":
                runtime.end_super_passage(cfg, p)
            return
        nxt = self.inst.step(mem, p, ps.port, ps.regs, ps.pc)
        if nxt == "acquired":
            ps.pc = ("gate",)
        elif nxt == "released":
            runtime.end_super_passage(cfg, p)
        else:
            ps.pc = nxt
