"""k-ported recoverable mutual-exclusion queue.

Shared state: a Tail pointer, a k-slot announce array Node[], and per-passage
queue nodes; each node carries a predecessor pointer and two signal objects
(one saying "my Pred is set", one saying "my successor may enter").

A crash-free passage is the usual FAS queue: allocate a node, announce it,
swap it into Tail, link to the predecessor, wait on the predecessor's
critical-section signal.  After a crash, the FAS result is lost, so the
process marks its predecessor slot with the Crash sentinel, acquires an
auxiliary recoverable lock, and repairs: it scans the announce array,
collects the announced nodes and their predecessor pointers into a graph,
decomposes the graph into maximal disjoint chains, and re-links its own chain
either behind the chain that leads to the critical section, behind the
current Tail chain (re-swapping Tail), or behind the permanent seed node.

Sentinels (never dereferenced, only compared): Crash (predecessor lost),
InCS (owner entered the critical section), Exit (owner finished; also the
token left in retired nodes).  The seed node's predecessor is the Exit
sentinel and both its signals are permanently set.

Program-counter tuples use the section names "try" (lines 1..17, line 7 is
the else-branch marker and is never executed), "exit" (1..3) and "rep"
(repair, 1..20); expanded signal/wait calls append a sub-line number.
"""

from .values import NIL, PRESENT, node, is_node
from . import signalobj
from .rlock import RLockInst
from . import runtime


class SimError(Exception):
    """An execution reached a state the algorithm's structure rules out."""


# node block layout: +0 Pred, +1/+2 "pred set" signal, +3/+4 "enter" signal
NODE_CELLS = 5


def alloc_qnode(mem, owner, pred=NIL, nn=("sig", 0), cs=("sig", 0)):
    base = mem.alloc(owner=owner, init=NIL, count=NODE_CELLS)
    mem.poke(base + 0, pred)
    mem.poke(base + 1, nn)
    mem.poke(base + 3, cs)
    return base


def pred_cell(v):
    return v[1]


def nn_sig(v):
    return (v[1] + 1, v[1] + 2)


def cs_sig(v):
    return (v[1] + 3, v[1] + 4)


# -- line ordinals (for history-counter bookkeeping and the checker) --------

def line_ord(section, n):
    return {"try": 0, "exit": 17, "rep": 20}[section] + n


def eff_ord(pc):
    """Collapse a pc tuple to the numbered line it is semantically at.  Sub-lines
    of an expanded call map to their host line, except after the sub-step
    that also advanced the history counter (the state is then 'heading to'
    the annotation target)."""
    tag = pc[0]
    if tag == "rem":
        return 1
    if tag == "cs":
        return 18
    if tag == "try":
        n = pc[1]
        if n == 6 and len(pc) > 2 and pc[2] > 1:
            return 16
        return n
    if tag == "exit":
        if pc[1] == 2 and len(pc) > 2 and pc[2] > 1:
            return 20
        return 17 + pc[1]
    if tag == "rep":
        return 20 + pc[1]
    if tag in ("rlk", "rlx"):
        return 15
    raise AssertionError(pc)


class QueueInst:
    def __init__(self, mem, k, port_owner):
        self.k = k
        # sentinel anchors; Exit doubles as the retirement token
        self.CRASH = node(alloc_qnode(mem, None))
        self.INCS = node(alloc_qnode(mem, None))
        self.EXIT = node(alloc_qnode(mem, None))
        self.SPECIAL = node(alloc_qnode(mem, None, pred=self.EXIT,
                                        nn=PRESENT, cs=PRESENT))
        self.tail = mem.alloc(init=self.SPECIAL)
        self.slots = [mem.alloc(init=NIL) for _ in range(k)]
        self.rlock = RLockInst(mem, k, port_owner)
        self.sentinels = frozenset({self.CRASH, self.INCS, self.EXIT})

    def created(self, cfg, v):
        """v is a runtime-created node of this instance (or the seed node)."""
        return is_node(v) and (v == self.SPECIAL or v[1] in cfg.nodes)

    # -- stepping -----------------------------------------------------------
    # Returns the next pc tuple, or "CS" / "REMAINDER" when control leaves
    # the algorithm.  `ps` supplies registers, port and the history counter.

    def step(self, cfg, p, ps, pc):
        mem = cfg.mem
        regs = ps.regs
        port = ps.port
        tag = pc[0]

        if tag == "rlk" or tag == "rlx":
            nxt = self.rlock.step(mem, p, port, regs, pc)
            if nxt == "acquired":
                return ("rep", 1)
            if nxt == "released":
                return ("try", 16, 1)
            return nxt

        if tag == "try":
            return self._try_step(cfg, p, ps, pc)
        if tag == "exit":
            return self._exit_step(cfg, p, ps, pc)
        if tag == "rep":
            return self._rep_step(cfg, p, ps, pc)
        raise AssertionError(pc)

    def _enter_rlock(self):
        start = self.rlock.start_acquire()
        return ("rep", 1) if start == "acquired" else start

    def _leave_rlock(self):
        start = self.rlock.start_release()
        return ("try", 16, 1) if start == "released" else start

    def _try_step(self, cfg, p, ps, pc):
        mem = cfg.mem
        regs = ps.regs
        port = ps.port
        n = pc[1]
        if n == 1:
            v = mem.read(p, self.slots[port])
            return ("try", 2) if v == NIL else ("try", 8)
        if n == 2:
            base = alloc_qnode(mem, p)
            cfg.nodes[base] = (p, port)
            regs["mynode"] = node(base)
            ps.pch = 3
            return ("try", 3)
        if n == 3:
            mem.write(p, self.slots[port], regs["mynode"])
            ps.pch = 4
            return ("try", 4)
        if n == 4:
            regs["mypred"] = mem.fas(p, self.tail, regs["mynode"])
            ps.pch = 5
            return ("try", 5)
        if n == 5:
            mem.write(p, pred_cell(regs["mynode"]), regs["mypred"])
            ps.pch = 6
            return ("try", 6, 1)
        if n == 6:
            s = pc[2]
            nxt = signalobj.signal_step(mem, p, nn_sig(regs["mynode"]), regs, s)
            if s == 1:
                ps.pch = 16
            return ("try", 16, 1) if nxt is None else ("try", 6, nxt)
        if n == 8:
            regs["mynode"] = mem.read(p, self.slots[port])
            return ("try", 9)
        if n == 9:
            if mem.read(p, pred_cell(regs["mynode"])) == NIL:
                mem.write(p, pred_cell(regs["mynode"]), self.CRASH)
            return ("try", 10)
        if n == 10:
            regs["mypred"] = mem.read(p, pred_cell(regs["mynode"]))
            return ("try", 11)
        if n == 11:
            return "CS" if regs["mypred"] == self.INCS else ("try", 12)
        if n == 12:
            if regs["mypred"] == self.EXIT:
                return ("try", 13, 1)
            return ("try", 14, 1)
        if n == 13:
            s = pc[2]
            if s == 9:
                # retire the node and land back at the Remainder entry
                mem.write(p, self.slots[port], NIL)
                ps.pch = 2
                return "REMAINDER"
            nxt = signalobj.signal_step(mem, p, cs_sig(regs["mynode"]), regs, s)
            if s == 1:
                ps.pch = 20
            return ("try", 13, 9) if nxt is None else ("try", 13, nxt)
        if n == 14:
            s = pc[2]
            nxt = signalobj.signal_step(mem, p, nn_sig(regs["mynode"]), regs, s)
            return self._enter_rlock() if nxt is None else ("try", 14, nxt)
        if n == 16:
            s = pc[2]
            nxt = signalobj.wait_step(mem, p, cs_sig(regs["mypred"]), regs, s)
            if nxt is None:
                ps.pch = 17
                return ("try", 17)
            return ("try", 16, nxt)
        if n == 17:
            mem.write(p, pred_cell(regs["mynode"]), self.INCS)
            ps.pch = 18
            return "CS"
        raise AssertionError(pc)

    def _exit_step(self, cfg, p, ps, pc):
        mem = cfg.mem
        regs = ps.regs
        n = pc[1]
        if n == 1:
            mem.write(p, pred_cell(regs["mynode"]), self.EXIT)
            ps.pch = 19
            return ("exit", 2, 1)
        if n == 2:
            s = pc[2]
            nxt = signalobj.signal_step(mem, p, cs_sig(regs["mynode"]), regs, s)
            if s == 1:
                ps.pch = 20
            return ("exit", 3) if nxt is None else ("exit", 2, nxt)
        if n == 3:
            mem.write(p, self.slots[ps.port], NIL)
            ps.pch = 2
            return "REMAINDER"
        raise AssertionError(pc)

    def _rep_step(self, cfg, p, ps, pc):
        mem = cfg.mem
        regs = ps.regs
        n = pc[1]
        if n == 1:
            if regs["mypred"] != self.CRASH:
                ps.pch = 16
                return self._leave_rlock()
            return ("rep", 2)
        if n == 2:
            regs["tail"] = mem.read(p, self.tail)
            regs["V"] = frozenset()
            regs["E"] = frozenset()
            regs["tailpath"] = None
            regs["headpath"] = None
            regs["predmap"] = {}
            regs["idx"] = 0
            return ("rep", 3)
        if n == 3:
            return ("rep", 10) if regs["idx"] >= self.k else ("rep", 4)
        if n == 4:
            regs["cur"] = mem.read(p, self.slots[regs["idx"]])
            return ("rep", 5)
        if n == 5:
            if regs["cur"] == NIL:
                regs["idx"] += 1
                return ("rep", 3)
            return ("rep", 6, 1)
        if n == 6:
            s = pc[2]
            nxt = signalobj.wait_step(mem, p, nn_sig(regs["cur"]), regs, s)
            return ("rep", 7) if nxt is None else ("rep", 6, nxt)
        if n == 7:
            regs["curpred"] = mem.read(p, pred_cell(regs["cur"]))
            return ("rep", 8)
        if n == 8:
            if regs["curpred"] in self.sentinels:
                regs["V"] = regs["V"] | {regs["cur"]}
                regs["predmap"] = {**regs["predmap"],
                                   regs["cur"]: regs["curpred"]}
                regs["idx"] += 1
                return ("rep", 3)
            return ("rep", 9)
        if n == 9:
            regs["V"] = regs["V"] | {regs["cur"], regs["curpred"]}
            regs["E"] = regs["E"] | {(regs["cur"], regs["curpred"])}
            regs["predmap"] = {**regs["predmap"],
                               regs["cur"]: regs["curpred"]}
            regs["idx"] += 1
            return ("rep", 3)
        if n == 10:
            regs["paths"] = compute_maximal_paths(
                regs["V"], regs["E"], lambda v: self.port_of(cfg, v))
            return ("rep", 11)
        if n == 11:
            mine = [s for s in regs["paths"] if regs["mynode"] in s]
            if len(mine) != 1:
                raise SimError("own node not on a unique repair path")
            regs["mypath"] = mine[0]
            return ("rep", 12)
        if n == 12:
            if regs["tail"] in regs["V"]:
                regs["tailpath"] = next(s for s in regs["paths"]
                                        if regs["tail"] in s)
            regs["pathidx"] = 0
            return ("rep", 13)
        if n == 13:
            if regs["pathidx"] >= len(regs["paths"]):
                return ("rep", 17)
            regs["pathvar"] = regs["paths"][regs["pathidx"]]
            return ("rep", 14)
        if n == 14:
            front = regs["pathvar"][-1]
            if mem.read(p, pred_cell(front)) in (self.INCS, self.EXIT):
                return ("rep", 15)
            regs["pathidx"] += 1
            return ("rep", 13)
        if n == 15:
            rear = regs["pathvar"][0]
            if mem.read(p, pred_cell(rear)) != self.EXIT:
                return ("rep", 16)
            regs["pathidx"] += 1
            return ("rep", 13)
        if n == 16:
            regs["headpath"] = regs["pathvar"]
            regs["pathidx"] += 1
            return ("rep", 13)
        if n == 17:
            tp = regs["tailpath"]
            if tp is None or mem.read(p, pred_cell(tp[-1])) in \
                    (self.INCS, self.EXIT):
                return ("rep", 18)
            return ("rep", 19)
        if n == 18:
            regs["mypred"] = mem.fas(p, self.tail, regs["mypath"][0])
            ps.pch = 5
            return ("rep", 20)
        if n == 19:
            hp = regs["headpath"]
            regs["mypred"] = hp[0] if hp is not None else self.SPECIAL
            ps.pch = 5
            return ("rep", 20)
        if n == 20:
            mem.write(p, pred_cell(regs["mynode"]), regs["mypred"])
            ps.pch = 16
            return self._leave_rlock()
        raise AssertionError(pc)

    # -- structural helpers (cost-free; used by the repair register steps,
    #    the checker and the tests) ----------------------------------------

    def port_of(self, cfg, v):
        if v == self.SPECIAL or not is_node(v) or v[1] not in cfg.nodes:
            return 1 << 30
        return cfg.nodes[v[1]][1]

    def live_slots(self, cfg):
        return [cfg.mem.peek(c) for c in self.slots]

    def fragment_of(self, cfg, v, problems=None):
        """The maximal chain of in-use nodes containing v, as a tuple from
        head (oldest) to tail (newest).  Returns () for non-nodes.

        Only announced nodes whose owner is still working toward the
        critical section can be interior members: the seed node and retired
        nodes (predecessor holds the finished-token) bound a chain rather
        than belong to it, so a chain's head predecessor is either a
        sentinel or the address of such a boundary node.  A boundary node's
        own chain is the singleton holding just that node."""
        if not self.created(cfg, v):
            return ()
        mem = cfg.mem
        if mem.peek(pred_cell(v)) == self.EXIT:
            return (v,)
        announced = set(self.live_slots(cfg))
        chain = [v]
        seen = {v}
        # head-ward: follow predecessor pointers through announced,
        # non-boundary nodes
        while True:
            pv = mem.peek(pred_cell(chain[0]))
            if (not self.created(cfg, pv) or pv not in announced
                    or mem.peek(pred_cell(pv)) == self.EXIT):
                break
            if pv in seen:
                if problems is not None:
                    problems.append(f"predecessor cycle at {chain[0]}")
                break
            chain.insert(0, pv)
            seen.add(pv)
        # tail-ward: only announced nodes can extend the chain
        while True:
            live = [w for w in self.live_slots(cfg)
                    if self.created(cfg, w) and w not in seen
                    and mem.peek(pred_cell(w)) == chain[-1]]
            if not live:
                break
            if len(live) > 1 and problems is not None:
                problems.append(
                    f"multiple announced nodes extend {chain[-1]}")
            ext = min(live, key=lambda w: w[1])
            chain.append(ext)
            seen.add(ext)
        return tuple(chain)


def compute_maximal_paths(V, E, port_key):
    """Decompose the repair graph into its maximal paths.

    Edges run from a node to its recorded predecessor, so each path tuple is
    ordered rear (tail-side, no incoming edge) to front (head-side, no
    outgoing edge).  Paths are returned sorted by the creation port of their
    rear node, which makes repair deterministic."""
    succ = {}
    for (v, w) in sorted(E, key=lambda e: (e[0][1], e[1][1])):
        succ.setdefault(v, w)
    incoming = {w for (v, w) in E}
    rears = sorted((v for v in V if v not in incoming), key=lambda v: v[1])
    paths = []
    visited = set()
    for r in rears:
        path = [r]
        visited.add(r)
        cur = r
        while cur in succ and succ[cur] in V and succ[cur] not in visited:
            cur = succ[cur]
            path.append(cur)
            visited.add(cur)
        paths.append(tuple(path))
    # cycles (structurally impossible in valid runs) surface as leftovers
    for v in sorted(V - visited, key=lambda v: v[1]):
        paths.append((v,))
    return tuple(sorted(paths, key=lambda s: port_key(s[0])))


class QueueWorld:
    """Standalone world: n processes repeatedly competing through one
    k-ported queue.  The critical section lasts one scheduled step."""

    def __init__(self, nprocs, k):
        self.nprocs = nprocs
        self.k = k
        self.inst = None

    def setup(self, mem):
        owner = [p % self.nprocs for p in range(self.k)]
        self.inst = QueueInst(mem, self.k, owner)

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
        ps.pc = ("try", 1)

    def reenter(self, cfg, p):
        cfg.procs[p].pc = ("try", 1)

    def step(self, cfg, p):
        ps = cfg.procs[p]
        if ps.pc == ("cs",):
            ps.pc = ("exit", 1)
            return
        nxt = self.inst.step(cfg, p, ps, ps.pc)
        if nxt == "CS":
            ps.pc = ("cs",)
            cfg.stats["cs_entries"].append((cfg.step_index, p))
        elif nxt == "REMAINDER":
            runtime.end_super_passage(cfg, p)
        else:
            ps.pc = nxt
