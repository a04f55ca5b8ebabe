"""Arbitration tree: mutual exclusion for n processes built from k-ported
queue locks.

Processes sit at the leaves; each internal node is an independent k-ported
queue instance.  A process climbs from its leaf to the root, acquiring every
node on its path (its port at a node is its child index there), enters the
critical section at the root, then releases the nodes root-to-leaf.

Crash recovery uses two per-process non-volatile cells: a climb counter
(levels currently held) and a direction flag.  On recovery a climbing
process re-presents itself at the node recorded by the counter and that
node's own recovery machinery takes over; a releasing process probes the
node's announce slot to learn whether its exit there already completed
(slot cleared) and either finishes the exit or moves down a level.  The
counter is only advanced after the node transition it records has fully
taken effect, so every crash window re-runs an idempotent suffix.
"""

import math

from .values import NIL, intv
from .queue import QueueInst
from . import runtime

UP = intv(0)
DOWN = intv(1)


def tree_arity(n):
    """Node fan-in that balances tree height against per-node port count."""
    if n <= 2:
        return 2
    return max(2, math.ceil(math.log2(n) / math.log2(math.log2(n))))


def tree_height(n, k):
    return max(1, math.ceil(math.log(max(n, 2), k)))


class TreeWorld:
    """World of n processes competing through an arbitration tree."""

    def __init__(self, nprocs, k=None):
        self.n = nprocs
        self.k = k if k is not None else tree_arity(nprocs)
        self.height = tree_height(nprocs, self.k)
        self.levels = None   # levels[l][i] -> QueueInst
        self.climb = None    # per-process cell: number of levels held
        self.dirn = None     # per-process cell: UP / DOWN

    def setup(self, mem):
        self.levels = []
        for l in range(self.height):
            width = math.ceil(self.n / self.k ** (l + 1))
            row = []
            for i in range(width):
                owner = [min(p for p in range(self.n)
                             if self._nidx(p, l) == i
                             and self._nport(p, l) == q)
                         if any(self._nidx(p, l) == i
                                and self._nport(p, l) == q
                                for p in range(self.n)) else None
                         for q in range(self.k)]
                row.append(QueueInst(mem, self.k, owner))
            self.levels.append(row)
        self.climb = [mem.alloc(owner=p, init=intv(0)) for p in range(self.n)]
        self.dirn = [mem.alloc(owner=p, init=UP) for p in range(self.n)]

    def _nidx(self, p, l):
        return p // self.k ** (l + 1)

    def _nport(self, p, l):
        return (p // self.k ** l) % self.k

    def _inst(self, p, l):
        return self.levels[l][self._nidx(p, l)]

    # -- world protocol ------------------------------------------------------

    def can_start(self, cfg, p):
        return True

    def begin_super_passage(self, cfg, p):
        ps = cfg.procs[p]
        ps.sp_active = True
        # resetting the direction flag here makes the entry step atomic with
        # it, so recovery never sees a stale DOWN with nothing held
        cfg.mem.write(p, self.dirn[p], UP)
        ps.port = self._nport(p, 0)
        ps.pc = ("nd", 0, ("try", 1))

    def reenter(self, cfg, p):
        cfg.procs[p].pc = ("rec",)

    def step(self, cfg, p):
        ps = cfg.procs[p]
        mem = cfg.mem
        tag = ps.pc[0]

        if tag == "rec":
            c = mem.read(p, self.climb[p])[1]
            d = mem.read(p, self.dirn[p])
            if d == DOWN:
                ps.port = self._nport(p, c - 1)
                ps.pc = ("rel", c - 1, "probe")
            elif c >= self.height:
                ps.pc = ("cs",)
                cfg.stats["cs_entries"].append((cfg.step_index, p))
            else:
                ps.port = self._nport(p, c)
                ps.pc = ("nd", c, ("try", 1))
            return

        if tag == "nd":
            l = ps.pc[1]
            nxt = self._inst(p, l).step(cfg, p, ps, ps.pc[2])
            if nxt == "CS":
                ps.pc = ("clc", l)
            elif nxt == "REMAINDER":
                # a climbing process never begins a node's exit section
                raise AssertionError("node released while climbing")
            else:
                ps.pc = ("nd", l, nxt)
            return

        if tag == "clc":
            l = ps.pc[1]
            mem.write(p, self.climb[p], intv(l + 1))
            if l + 1 == self.height:
                ps.pc = ("cs",)
                cfg.stats["cs_entries"].append((cfg.step_index, p))
            else:
                ps.port = self._nport(p, l + 1)
                ps.pc = ("nd", l + 1, ("try", 1))
            return

        if tag == "cs":
            mem.write(p, self.dirn[p], DOWN)
            ps.port = self._nport(p, self.height - 1)
            ps.pc = ("rel", self.height - 1, "probe")
            return

        if tag == "rel":
            l = ps.pc[1]
            inst = self._inst(p, l)
            if ps.pc[2] == "probe":
                v = mem.read(p, inst.slots[ps.port])
                if v == NIL:
                    ps.pc = ("relc", l)
                else:
                    ps.regs["mynode"] = v
                    ps.pc = ("rel", l, ("exit", 1))
            else:
                nxt = inst.step(cfg, p, ps, ps.pc[2])
                if nxt == "REMAINDER":
                    ps.pc = ("relc", l)
                else:
                    ps.pc = ("rel", l, nxt)
            return

        if tag == "relc":
            l = ps.pc[1]
            mem.write(p, self.climb[p], intv(l))
            if l == 0:
                runtime.end_super_passage(cfg, p)
            else:
                ps.port = self._nport(p, l - 1)
                ps.pc = ("rel", l - 1, "probe")
            return

        raise AssertionError(ps.pc)
