"""Structural invariant checker for the k-ported queue.

Pure inspection: nothing here performs a program step or charges RMRs.

The checker evaluates 19 core conditions plus 20 extended conditions over a
configuration, together with the mutual-exclusion property itself and the
signal-object usage precondition (no two concurrent wait() calls on one
object).  Each violation is reported as a string carrying the condition's
label and a witness.

Hidden variables used throughout:
  porth -- the port of the process's current super-passage (None if inactive)
  pch   -- persistent history line counter (ordinals: try:n = n,
           exit:n = 17+n, rep:n = 20+n); Remainder is pc=try:1, pch=try:2
  node_hat -- Node[porth] when pch in [4,6] u [16,exit:3]; mynode at
           pc=try:3; NIL otherwise.

Condition labels follow the numbering of the source analysis; two clauses of
cond57 relating absent signals to predecessor values are implemented in the
converse direction (premise and conclusion swapped) -- as literally stated
they would reject every configuration with a linked, not-yet-signalled node.
Likewise, the retired-predecessor clauses of cond7/cond10/cond15/cond44/
cond45 require the waiting queue to be empty; that holds only once the
waiters chained directly behind the retired node are excluded, since those
waiters are in the queue precisely by virtue of that predecessor having
retired (their fragment is headed by it).
"""

from .values import NIL
from .queue import eff_ord, pred_cell, compute_maximal_paths

E1 = 18  # exit:1 ordinal
E2, E3 = 19, 20
R = 20   # rep:n = R + n


from functools import lru_cache


@lru_cache(maxsize=None)
def _rng(a, b):
    return frozenset(range(a, b + 1))


class Ctx:
    def __init__(self, cfg, inst):
        self.cfg = cfg
        self.inst = inst
        self.mem = cfg.mem
        self.k = inst.k
        self.n = len(cfg.procs)
        self.problems = []
        self.eff = []
        self.pch = []
        self.porth = []
        self.mynode = []
        self.mypred = []
        for ps in cfg.procs:
            self.eff.append(eff_ord(ps.pc))
            self.pch.append(ps.pch)
            self.porth.append(ps.port if ps.sp_active else None)
            self.mynode.append(ps.regs.get("mynode"))
            self.mypred.append(ps.regs.get("mypred"))
        self.slots = [cfg.mem.peek(c) for c in inst.slots]
        self.tail = cfg.mem.peek(inst.tail)
        self.Nprime = {inst.SPECIAL} | {("node", b) for b in cfg.nodes}
        self.hat = [self._node_hat(p) for p in range(self.n)]
        self._frags = {}
        self.slotset = {s for s in self.slots if s != NIL}
        self.Q = [p for p in range(self.n)
                  if (self.pch[p] in (6, 16, 17)
                      and self.closed(self.headpred(self.hat[p])))
                  or self.pch[p] == E1]

    def _node_hat(self, p):
        in_hat_range = self.pch[p] in (4, 5, 6, 16, 17, E1, E2, E3)
        at_try3 = self.cfg.procs[p].pc == ("try", 3)
        if in_hat_range and at_try3:
            self.problems.append(
                f"hidden-variable case conflict for proc {p}: "
                f"pch={self.pch[p]} with pc=try:3")
        if in_hat_range:
            if self.porth[p] is None:
                return None
            v = self.slots[self.porth[p]]
            return v if v != NIL else None
        if at_try3:
            return self.mynode[p]
        return None

    def slot_of(self, p):
        return self.slots[self.porth[p]] if self.porth[p] is not None else NIL

    def is_node(self, v):
        return v is not None and v in self.Nprime

    def predv(self, v):
        """Pred field of a created node (None if v is not one)."""
        if v is None or v not in self.Nprime:
            return None
        return self.mem.vals[v[1]]

    def _peek(self, a):
        return self.mem.peek(a) if 0 <= a < len(self.mem.vals) else None

    def cs_present(self, v):
        return self._peek(v[1] + 3) == ("sig", 1)

    def nn_present(self, v):
        return self._peek(v[1] + 1) == ("sig", 1)

    def frag(self, v):
        if not self.is_node(v):
            return ()
        if v not in self._frags:
            self._frags[v] = self.inst.fragment_of(self.cfg, v, self.problems)
        return self._frags[v]

    def headpred(self, v):
        f = self.frag(v)
        return self.predv(f[0]) if f else None

    def boundary(self, v):
        """v is a created node that bounds chains instead of belonging to
        them: its predecessor holds the finished-token (the seed node, or a
        node whose owner has finished with the critical section), or it is
        no longer announced."""
        return v in self.Nprime and (self.predv(v) == self.inst.EXIT
                                     or v not in self.slotset)

    def closed(self, pv):
        """A chain whose head's Pred is `pv` ends at the critical section:
        directly via a sentinel, or via a boundary node."""
        return pv in (self.inst.INCS, self.inst.EXIT) or self.boundary(pv)

    def chain(self, v):
        """Nodes reachable along v's chain: v's fragment plus, when v is a
        boundary node, the fragment hanging directly behind it."""
        s = set(self.frag(v))
        if self.is_node(v):
            s.add(v)
            for w in self.slotset:
                if self.predv(w) == v:
                    s |= set(self.frag(w))
        return s

    def sentinels(self):
        i = self.inst
        return {NIL, i.CRASH, i.INCS, i.EXIT}


def check_mutex(ctx):
    incs = [p for p in range(ctx.n) if ctx.pch[p] == E1]
    if len(incs) > 1:
        return [f"mutex: processes {incs} simultaneously in the CS"]
    return []


def check_wait_precondition(ctx):
    out = []
    waiting = {}
    for p, ps in enumerate(ctx.cfg.procs):
        pc = ps.pc
        sig = None
        if pc[:2] == ("try", 16) and len(pc) > 2:
            mp = ctx.mypred[p]
            if ctx.is_node(mp):
                sig = mp[1] + 3
        elif pc[:2] == ("rep", 6) and len(pc) > 2:
            cur = ps.regs.get("cur")
            if ctx.is_node(cur):
                sig = cur[1] + 1
        if sig is not None:
            if sig in waiting:
                out.append(f"signal-precondition: procs {waiting[sig]} and "
                           f"{p} wait concurrently on cell {sig}")
            waiting[sig] = p
    return out


# -- core conditions --------------------------------------------------------

def c01(ctx):  # cond1
    out = []
    i = ctx.inst
    for p in range(ctx.n):
        pch = ctx.pch[p]
        slot = ctx.slot_of(p)
        hp = ctx.predv(slot)
        if (pch in (2, 3)) != (slot == NIL):
            out.append(f"cond1[{p}]: pch={pch} vs Node[port]={slot}")
            continue
        if (pch in (4, 5)) != (hp in (NIL, i.CRASH) and hp is not None):
            out.append(f"cond1[{p}]: pch={pch} vs Pred={hp}")
        if (pch in (6, 16, 17)) != (hp in ctx.Nprime if hp else False):
            out.append(f"cond1[{p}]: pch={pch} vs Pred={hp}")
        if (pch == E1) != (hp == i.INCS):
            out.append(f"cond1[{p}]: pch={pch} vs Pred={hp}")
        if (pch in (E2, E3)) != (hp == i.EXIT):
            out.append(f"cond1[{p}]: pch={pch} vs Pred={hp}")
    return out


def c02(ctx):  # cond2
    out = []
    for p in range(ctx.n):
        pc, pch = ctx.eff[p], ctx.pch[p]
        slot = ctx.slot_of(p)
        if pc in _rng(4, 6) | _rng(9, E3) | _rng(R + 1, R + 20):
            if ctx.mynode[p] != slot:
                out.append(f"cond2[{p}]: mynode={ctx.mynode[p]} != "
                           f"Node[port]={slot} at pc={pc}")
        if pc in {6} | _rng(11, 17) | _rng(R + 1, R + 19):
            if ctx.mypred[p] != ctx.predv(slot):
                out.append(f"cond2[{p}]: mypred={ctx.mypred[p]} != "
                           f"Node[port].Pred at pc={pc}")
        if pc in _rng(11, 15) | _rng(R + 1, R + 19) and pch in (4, 5):
            if ctx.mypred[p] != ctx.inst.CRASH:
                out.append(f"cond2[{p}]: mypred not Crash at pc={pc} "
                           f"pch={pch}")
    return out


def c03(ctx):  # cond54
    out = []
    i = ctx.inst
    for p in range(ctx.n):
        slot = ctx.slot_of(p)
        if slot == NIL:
            continue
        if slot not in ctx.Nprime:
            out.append(f"cond54[{p}]: Node[port] not a created node")
            continue
        sp = ctx.predv(slot)
        ok = (any(p2 != p and ctx.slot_of(p2) == sp and ctx.slot_of(p2) != NIL
                  for p2 in range(ctx.n))
              or (sp in ctx.Nprime and ctx.predv(sp) == i.EXIT)
              or sp in (NIL, i.CRASH, i.INCS, i.EXIT))
        if not ok:
            out.append(f"cond54[{p}]: Node[port].Pred={sp} unjustified")
        for p2 in range(ctx.n):
            if p2 == p:
                continue
            s2 = ctx.slot_of(p2)
            if s2 == NIL or ctx.porth[p2] == ctx.porth[p]:
                continue
            if slot == s2:
                out.append(f"cond54[{p},{p2}]: duplicate announced node")
            if sp == ctx.predv(s2) and sp not in (NIL, i.CRASH, i.EXIT):
                out.append(f"cond54[{p},{p2}]: shared predecessor {sp}")
    return out


def c04(ctx):  # cond3
    out = []
    i = ctx.inst
    for p in range(ctx.n):
        h = ctx.hat[p]
        for p2 in range(p + 1, ctx.n):
            h2 = ctx.hat[p2]
            if h is not None and h == h2:
                out.append(f"cond3[{p},{p2}]: shared node_hat {h}")
        if h is None:
            continue
        hp = ctx.predv(h)
        for p2 in range(ctx.n):
            if p2 == p or ctx.hat[p2] is None:
                continue
            if hp == ctx.predv(ctx.hat[p2]) and \
                    hp not in (NIL, i.CRASH, i.EXIT):
                out.append(f"cond3[{p},{p2}]: node_hats share Pred {hp}")
        v = h
        for _ in range(ctx.k):
            v = ctx.predv(v)
            if v in (NIL, i.CRASH, i.INCS, i.EXIT) or ctx.boundary(v):
                break
        else:
            out.append(f"cond3[{p}]: no chain end within k Pred hops")
    return out


def c05(ctx):  # cond57
    out = []
    i = ctx.inst
    hats = {h for h in ctx.hat if h is not None}
    mys = {m for m in ctx.mynode if m is not None}
    for base in list(ctx.cfg.nodes) + [i.SPECIAL[1]]:
        v = ("node", base)
        pv = ctx.predv(v)
        if pv not in {NIL, i.CRASH, i.INCS, i.EXIT} | ctx.Nprime:
            out.append(f"cond57[{v}]: Pred={pv} out of range")
        unreferenced = v not in hats
        detached = v not in ctx.slots and v not in mys
        if unreferenced != detached:
            out.append(f"cond57[{v}]: hat-reference vs array/mynode mismatch")
        owners = [p for p in range(ctx.n) if ctx.hat[p] == v]
        if ctx.cs_present(v):
            if pv != i.EXIT:
                out.append(f"cond57[{v}]: enter-signal set but Pred={pv}")
            for p in owners:
                if ctx.pch[p] != E3:
                    out.append(f"cond57[{v}]: enter-signal set, "
                               f"owner pch={ctx.pch[p]}")
        if ctx.nn_present(v):
            if pv == NIL:
                out.append(f"cond57[{v}]: link-signal set but Pred=NIL")
            for p in owners:
                if ctx.pch[p] not in _rng(4, 6) | _rng(16, E3):
                    out.append(f"cond57[{v}]: link-signal set, "
                               f"owner pch={ctx.pch[p]}")
        # converse direction (see module docstring)
        if pv in (NIL, i.CRASH, i.INCS) and ctx.cs_present(v):
            out.append(f"cond57[{v}]: enter-signal set with Pred={pv}")
        if pv == NIL and ctx.nn_present(v):
            out.append(f"cond57[{v}]: link-signal set with Pred=NIL")
    return out


def c06(ctx):  # cond47
    out = []
    fwd = [
        ({1}, _rng(2, 6) | _rng(16, E3)),
        ({2}, _rng(2, 3)),
        (_rng(7, 11), _rng(4, 6) | _rng(16, E3)),
        ({12}, _rng(4, 6) | _rng(16, 17) | _rng(E2, E3)),
        ({13}, _rng(E2, E3)),
        ({14, 15, R + 1}, _rng(4, 6) | _rng(16, 17)),
        (_rng(R + 2, R + 20), _rng(4, 5)),
    ]
    rev = [
        ({2}, {1, 2}),
        ({3}, _rng(1, 3)),
        ({4, 5}, {1, 14, 15} | _rng(7, 12) | _rng(R + 1, R + 20)),
        ({6, 16, 17}, {1, 14, 15, R + 1} | _rng(7, 12)),
        ({E1}, {1} | _rng(7, 11)),
        ({E2, E3}, {1} | _rng(7, 13)),
    ]
    for p in range(ctx.n):
        pc, pch = ctx.eff[p], ctx.pch[p]
        if pc in _rng(3, 6) | {16} and pch != pc:
            out.append(f"cond47[{p}]: pc={pc} requires pch=pc, got {pch}")
        for dom, ran in fwd:
            if pc in dom and pch not in ran:
                out.append(f"cond47[{p}]: pc={pc} pch={pch}")
        for dom, ran in rev:
            if pch in dom and pc != pch and pc not in ran:
                out.append(f"cond47[{p}]: pch={pch} pc={pc}")
    return out


def c07(ctx):  # cond4
    out = []
    i = ctx.inst
    for p in range(ctx.n):
        fp = ctx.frag(ctx.hat[p])
        if not fp:
            continue
        hp = ctx.predv(fp[0])

        def tclass(v):
            return v == i.EXIT or ctx.boundary(v)

        for p2 in range(ctx.n):
            f2 = ctx.frag(ctx.hat[p2])
            if not f2 or f2 == fp:
                continue
            if set(fp) & set(f2):
                out.append(f"cond4[{p},{p2}]: overlapping fragments")
            if hp == i.INCS and ctx.predv(f2[0]) == i.INCS:
                out.append(f"cond4[{p},{p2}]: two fragments headed at CS")
            if tclass(hp) and ctx.pch[p] not in (E2, E3) and \
                    tclass(ctx.predv(f2[0])) and \
                    ctx.pch[p2] not in (E2, E3):
                out.append(f"cond4[{p},{p2}]: two retired-headed fragments")
        if len(fp) > 1:
            for p2 in range(ctx.n):
                h2 = ctx.hat[p2]
                if h2 is not None and h2 in fp and h2 != fp[0] and \
                        ctx.pch[p2] not in (6, 16):
                    out.append(f"cond4[{p},{p2}]: interior node with "
                               f"pch={ctx.pch[p2]}")
    return out


def c08(ctx):  # cond5
    out = []
    m = ctx.mem
    for p in range(ctx.n):
        if ctx.eff[p] not in (3, 4):
            continue
        mn = ctx.mynode[p]
        if mn not in ctx.Nprime:
            out.append(f"cond5[{p}]: mynode not created")
            continue
        if any((q != ctx.porth[p] and s == mn) or ctx.predv(s) == mn
               for q, s in enumerate(ctx.slots) if s != NIL):
            out.append(f"cond5[{p}]: fresh node already referenced")
        if ctx.cs_present(mn) or ctx.nn_present(mn):
            out.append(f"cond5[{p}]: fresh node has a set signal")
        f = ctx.frag(mn)
        if f != (mn,):
            out.append(f"cond5[{p}]: fresh node not a singleton fragment")
        if f == ctx.frag(ctx.tail):
            out.append(f"cond5[{p}]: fresh node in Tail's fragment")
        if m.peek(pred_cell(mn)) != NIL:
            out.append(f"cond5[{p}]: fresh node Pred not NIL")
    return out


def _chain_tail_support(ctx, target, p):
    """shared clause: some other process pi' with pch=5 has target =
    tail(fragment(node_hat_pi')) and node_hat_pi' = head of its fragment."""
    for p2 in range(ctx.n):
        if p2 == p or ctx.pch[p2] != 5:
            continue
        f2 = ctx.frag(ctx.hat[p2])
        if f2 and f2[-1] == target and f2[0] == ctx.hat[p2]:
            return True
    return False


def _residual_q(ctx, target):
    """Queue members whose claim does not come through `target`'s own chain.

    The retired-predecessor clauses require the queue to be otherwise empty;
    processes whose node_hat sits in fragment(target) are exactly the waiters
    chained behind the retiree, so they are excluded (see module docstring)."""
    f = set(ctx.frag(target))
    f.add(target)
    return [p2 for p2 in ctx.Q
            if ctx.hat[p2] is None
            or (ctx.hat[p2] not in f
                and ctx.headpred(ctx.hat[p2]) != target)]


def _pred_owner_clauses(ctx, p, target, label, out, require_other=True):
    """shared tail-node clauses used by cond7/cond10/cond15/cond45: `target`
    must be signalled or owned by a process about to signal it, and its own
    Pred value constrains its owner's position."""
    i = ctx.inst
    others = [p2 for p2 in range(ctx.n) if not require_other or p2 != p]
    if not (ctx.cs_present(target)
            or any(ctx.hat[p2] == target
                   and ctx.pch[p2] in {5, 6} | _rng(16, E2)
                   for p2 in others)):
        out.append(f"{label}: {target} neither signalled nor owned-live")
    tp = ctx.predv(target)
    if tp == i.INCS:
        if not any(ctx.pch[p2] == E1 and ctx.hat[p2] == target
                   for p2 in others):
            out.append(f"{label}: pred-of-pred InCS without a CS owner")
    elif tp == i.EXIT:
        ok = (any(ctx.pch[p2] in (E2, E3) and ctx.hat[p2] == target
                  for p2 in others)
              or (all(s != target for s in ctx.slots)
                  and not _residual_q(ctx, target)))
        if not ok:
            out.append(f"{label}: retired predecessor but queue non-empty "
                       f"or dangling")
    else:
        if not any(ctx.pch[p2] in _rng(5, 6) | _rng(16, 17)
                   and ctx.hat[p2] == target for p2 in others):
            out.append(f"{label}: predecessor {target} lacks live owner")


def c09(ctx):  # cond7
    out = []
    i = ctx.inst
    for p in range(ctx.n):
        if ctx.eff[p] != 5:
            continue
        h = ctx.hat[p]
        if h not in ctx.Nprime or ctx.predv(h) != NIL:
            out.append(f"cond7[{p}]: node_hat/Pred wrong at pc=5")
            continue
        f = ctx.frag(h)
        if not f or f[0] != h:
            out.append(f"cond7[{p}]: node_hat not fragment head")
        if ctx.cs_present(h) or ctx.nn_present(h):
            out.append(f"cond7[{p}]: signals already set")
        for p2 in range(ctx.n):
            if p2 != p and ctx.hat[p2] is not None and ctx.hat[p2] in f \
                    and ctx.pch[p2] not in (6, 16):
                out.append(f"cond7[{p}]: fragment mate pch={ctx.pch[p2]}")
        mp = ctx.mypred[p]
        if mp not in ctx.Nprime:
            out.append(f"cond7[{p}]: mypred not a created node")
            continue
        fm = ctx.frag(mp)
        if not fm or fm[-1] != mp:
            out.append(f"cond7[{p}]: mypred not its fragment's tail")
        _pred_owner_clauses(ctx, p, mp, f"cond7[{p}]", out)
        if ctx.predv(fm[0]) in (NIL, i.CRASH) if fm else False:
            if not _chain_tail_support(ctx, mp, p):
                out.append(f"cond7[{p}]: unheaded fragment lacks a pc=5 "
                           f"supporter")
        if f == fm:
            out.append(f"cond7[{p}]: mypred inside own fragment")
    return out


def c10(ctx):  # cond8
    out = []
    i = ctx.inst
    for p in range(ctx.n):
        pc, pch = ctx.eff[p], ctx.pch[p]
        if pch not in (4, 5):
            continue
        hp = ctx.predv(ctx.hat[p])
        if hp == NIL and not (pc == pch or pc in {1} | _rng(7, 9)):
            out.append(f"cond8[{p}]: Pred=NIL with pc={pc}")
        if hp == i.CRASH and pc not in \
                {1} | _rng(7, 12) | _rng(14, 15) | _rng(R + 1, R + 20):
            out.append(f"cond8[{p}]: Pred=Crash with pc={pc}")
    return out


def c11(ctx):  # cond52
    out = []
    for p in range(ctx.n):
        if ctx.eff[p] in _rng(10, 12) | _rng(14, 15) | _rng(R + 1, R + 20) \
                and ctx.pch[p] in (4, 5):
            if ctx.predv(ctx.hat[p]) != ctx.inst.CRASH:
                out.append(f"cond52[{p}]: Pred not Crash at pc={ctx.eff[p]}")
    return out


def c12(ctx):  # cond53
    out = []
    for p in range(ctx.n):
        pch = ctx.pch[p]
        if pch not in (4, 5):
            continue
        f = ctx.frag(ctx.hat[p])
        if pch == 4 and len(f) != 1:
            out.append(f"cond53[{p}]: pch=4 fragment size {len(f)}")
        if not f or f[0] != ctx.hat[p]:
            out.append(f"cond53[{p}]: node_hat not fragment head")
        if pch == 4 and f == ctx.frag(ctx.tail):
            out.append(f"cond53[{p}]: fragment equals Tail's")
        if pch == 5:
            for p2 in range(ctx.n):
                if p2 != p and ctx.hat[p2] is not None and ctx.hat[p2] in f \
                        and ctx.pch[p2] not in (6, 16):
                    out.append(f"cond53[{p}]: mate pch={ctx.pch[p2]}")
    return out


def c13(ctx):  # cond9
    out = []
    for p in range(ctx.n):
        if ctx.eff[p] in (6, 16):
            h = ctx.hat[p]
            if h not in ctx.Nprime or ctx.predv(h) != ctx.mypred[p] \
                    or ctx.mypred[p] not in ctx.Nprime:
                out.append(f"cond9[{p}]: node_hat/mypred linkage broken")
    return out


def c14(ctx):  # cond10
    out = []
    for p in range(ctx.n):
        if ctx.pch[p] not in (6, 16):
            continue
        h = ctx.hat[p]
        if h not in ctx.Nprime:
            out.append(f"cond10[{p}]: node_hat missing")
            continue
        hp = ctx.predv(h)
        if hp not in ctx.Nprime:
            out.append(f"cond10[{p}]: Pred {hp} not a created node")
            continue
        _pred_owner_clauses(ctx, p, hp, f"cond10[{p}]", out)
    return out


def c15(ctx):  # cond11
    out = []
    i = ctx.inst
    for p in range(ctx.n):
        if ctx.pch[p] not in (6, 16):
            continue
        f = ctx.frag(ctx.hat[p])
        if not f or ctx.predv(f[0]) not in (NIL, i.CRASH):
            continue
        sup = None
        for p2 in range(ctx.n):
            if p2 != p and ctx.pch[p2] == 5 and ctx.hat[p2] == f[0]:
                sup = p2
                break
        if sup is None:
            out.append(f"cond11[{p}]: unheaded fragment without pc=5 head "
                       f"owner")
            continue
        for p2 in range(ctx.n):
            if p2 == sup or ctx.hat[p2] is None or ctx.hat[p2] not in f:
                continue
            if ctx.pch[p2] not in (6, 16) or \
                    ctx.cs_present(ctx.hat[p2]):
                out.append(f"cond11[{p}]: mate {p2} wrong state")
    return out


def c16(ctx):  # cond15
    out = []
    i = ctx.inst
    t = ctx.tail
    if t not in ctx.Nprime:
        return [f"cond15: Tail={t} not a created node"]
    ft = ctx.frag(t)
    if not ft or ft[-1] != t:
        out.append("cond15: Tail not the tail of its fragment")
    if t not in ctx.slots and ctx.predv(t) != i.EXIT:
        out.append("cond15: Tail neither announced nor retired")
    _pred_owner_clauses(ctx, None, t, "cond15", out, require_other=False)
    if ft and ctx.predv(ft[0]) in (NIL, i.CRASH):
        if not _chain_tail_support(ctx, t, None):
            out.append("cond15: unheaded Tail fragment without pc=5 support")
    engaged = _rng(5, 6) | _rng(16, E3)
    lhs = any(ctx.pch[p] in engaged for p in range(ctx.n))
    rhs = any(ctx.hat[p] == t and ctx.pch[p] in engaged
              for p in range(ctx.n))
    if lhs and not rhs and ctx.predv(t) != i.EXIT:
        out.append("cond15: engaged process but Tail unaccounted")
    if rhs and not lhs:
        out.append("cond15: Tail owned by an engaged process impossible")
    return out


def c17(ctx):  # cond14
    out = []
    for p in range(ctx.n):
        pc, pch = ctx.eff[p], ctx.pch[p]
        if pc in _rng(15, E3) | _rng(R + 1, R + 20) or pch in _rng(16, E3):
            h = ctx.hat[p]
            if h is None or not ctx.nn_present(h):
                out.append(f"cond14[{p}]: link-signal not set (pc={pc} "
                           f"pch={pch})")
        if pch == E3:
            h = ctx.hat[p]
            if h is None or not ctx.cs_present(h):
                out.append(f"cond14[{p}]: enter-signal not set at pch=exit:3")
    return out


def c18(ctx):  # cond16
    if len(ctx.Q) != 0:
        return []
    out = []
    i = ctx.inst
    ok = ctx.predv(ctx.tail) == i.EXIT or any(
        ctx.pch[p] == 5
        and (lambda f: f and f[-1] == ctx.tail and f[0] == ctx.hat[p])(
            ctx.frag(ctx.hat[p]))
        for p in range(ctx.n))
    if not ok:
        out.append("cond16: empty queue but Tail unaccounted")
    for p in range(ctx.n):
        if ctx.pch[p] not in _rng(2, 6) | {16} | _rng(E2, E3):
            out.append(f"cond16[{p}]: pch={ctx.pch[p]} with empty queue")
    return out


def c19(ctx):  # cond17
    if not ctx.Q:
        return []
    out = []
    i = ctx.inst
    hats = {p: ctx.hat[p] for p in ctx.Q}
    if any(h is None for h in hats.values()):
        return [f"cond17: queued process without node_hat"]
    hatset = set(hats.values())
    firsts = [p for p in ctx.Q if ctx.predv(hats[p]) not in hatset]
    if len(firsts) != 1:
        return [f"cond17: cannot identify unique queue head among {ctx.Q}"]
    order = [firsts[0]]
    while len(order) < len(ctx.Q):
        nxt = [p for p in ctx.Q
               if p not in order and ctx.predv(hats[p]) == hats[order[-1]]]
        if len(nxt) != 1:
            return [f"cond17: queued nodes do not form a chain"]
        order.append(nxt[0])
    p1 = order[0]
    h1 = hats[p1]
    if ctx.pch[p1] not in {6} | _rng(16, E1):
        out.append(f"cond17a: head pch={ctx.pch[p1]}")
    pred1 = ctx.predv(h1)
    live_hats = {h for h in ctx.hat if h is not None}
    ok_b = (pred1 in (i.INCS, i.EXIT)
            or any(ctx.pch[p] in (E2, E3) and ctx.hat[p] is not None
                   and pred1 == ctx.hat[p] for p in range(ctx.n))
            or (pred1 in ctx.Nprime and pred1 not in live_hats))
    if not ok_b:
        out.append(f"cond17b: head predecessor {pred1} unaccounted")
    if ctx.pch[p1] in (6, 16):
        if not (ctx.is_node(pred1) and ctx.cs_present(pred1)) and not any(
                p != p1 and ctx.hat[p] == pred1 and ctx.pch[p] == E2
                for p in range(ctx.n)):
            out.append("cond17g: queue head not enabled to enter")
    for idx in range(1, len(order)):
        pi = order[idx]
        if ctx.pch[pi] not in (6, 16):
            out.append(f"cond17c[{pi}]: pch={ctx.pch[pi]}")
        if ctx.predv(hats[pi]) != hats[order[idx - 1]]:
            out.append(f"cond17c[{pi}]: chain link broken")
    f1 = ctx.frag(h1)
    if not f1 or hats[order[-1]] != f1[-1]:
        out.append("cond17d: last queued node is not the fragment tail")
    if not (f1 and h1 == f1[0]) and ctx.predv(pred1) != i.EXIT:
        out.append("cond17e: head neither fragment head nor behind retiree")
    for p in range(ctx.n):
        if p == p1:
            continue
        if ctx.pch[p] not in _rng(2, 6) | {16} | _rng(E2, E3):
            out.append(f"cond17h[{p}]: pch={ctx.pch[p]}")
        h = ctx.hat[p]
        if h is not None:
            hp = ctx.predv(h)
            if hp in ctx.Nprime and ctx.cs_present(hp):
                out.append(f"cond17i[{p}]: non-head sees a set enter-signal")
    return out


CORE = [c01, c02, c03, c04, c05, c06, c07, c08, c09, c10,
        c11, c12, c13, c14, c15, c16, c17, c18, c19]


# -- extended conditions ----------------------------------------------------

def _rep_procs(ctx, lo, hi):
    return [p for p in range(ctx.n) if R + lo <= ctx.eff[p] <= R + hi]


def _regs(ctx, p):
    return ctx.cfg.procs[p].regs


def _intok(ctx, v):
    return v in (ctx.inst.INCS, ctx.inst.EXIT)


def x20(ctx):  # cond33
    out = []
    for p in _rep_procs(ctx, 2, 2):
        if ctx.closed(ctx.headpred(ctx.tail)) and \
                ctx.frag(ctx.hat[p]) == ctx.frag(ctx.tail):
            out.append(f"cond33[{p}]: repairing inside Tail's fragment")
    return out


def x21(ctx):  # cond22
    out = []
    for p in _rep_procs(ctx, 3, 20):
        r = _regs(ctx, p)
        pc = ctx.eff[p] - R
        if pc <= 12 and (r.get("tailpath") is not None
                         or r.get("headpath") is not None):
            out.append(f"cond22[{p}]: paths set too early")
        if pc == 3 and not 0 <= r.get("idx", -1) <= ctx.k:
            out.append(f"cond22[{p}]: idx={r.get('idx')}")
        if 4 <= pc <= 9 and not 0 <= r.get("idx", -1) <= ctx.k - 1:
            out.append(f"cond22[{p}]: idx={r.get('idx')} mid-scan")
        if pc >= 10 and r.get("idx") != ctx.k:
            out.append(f"cond22[{p}]: idx={r.get('idx')} after scan")
        if r.get("tail") not in ctx.Nprime:
            out.append(f"cond22[{p}]: tail register not a created node")
    return out


def x22(ctx):  # cond55
    out = []
    for p in _rep_procs(ctx, 3, 20):
        r = _regs(ctx, p)
        t = r.get("tail")
        ok = (t in r.get("V", frozenset())
              or any(ctx.slots[j] == t for j in range(r.get("idx", 0), ctx.k))
              or ctx.predv(t) == ctx.inst.EXIT)
        if not ok:
            out.append(f"cond55[{p}]: snapshot tail {t} unaccounted")
    return out


def x23(ctx):  # cond32
    out = []
    for p in _rep_procs(ctx, 3, 20):
        r = _regs(ctx, p)
        V, E = r.get("V", frozenset()), r.get("E", frozenset())
        succ = {}
        for (v, w) in E:
            if v in succ:
                out.append(f"cond32[{p}]: branching at {v}")
            succ[v] = w
        seen = set()
        for v in V:
            cur, local = v, set()
            while cur in succ:
                if cur in local:
                    out.append(f"cond32[{p}]: cycle through {cur}")
                    break
                local.add(cur)
                cur = succ[cur]
            seen |= local
        indeg = {}
        for (v, w) in E:
            indeg[w] = indeg.get(w, 0) + 1
            if indeg[w] > 1:
                out.append(f"cond32[{p}]: paths join at {w}")
    return out


def x24(ctx):  # cond28
    out = []
    i = ctx.inst
    for p in _rep_procs(ctx, 3, 20):
        r = _regs(ctx, p)
        if ctx.closed(ctx.headpred(r.get("tail"))):
            continue
        paths = compute_maximal_paths(
            r.get("V", frozenset()), r.get("E", frozenset()),
            lambda v: i.port_of(ctx.cfg, v))
        good = [s for s in paths if _intok(ctx, ctx.predv(s[-1]))
                and ctx.predv(s[0]) != i.EXIT]
        if len(good) == 1:
            continue
        idx = r.get("idx", ctx.k)
        if idx < ctx.k and any(
                (_intok(ctx, ctx.predv(ctx.slots[j]))
                 or _intok(ctx, ctx.predv(ctx.predv(ctx.slots[j]))))
                and (lambda f: f and ctx.predv(f[-1]) != i.EXIT)(
                    ctx.frag(ctx.slots[j]))
                for j in range(idx, ctx.k) if ctx.is_node(ctx.slots[j])):
            continue
        if len(ctx.Q) == 0:
            continue
        out.append(f"cond28[{p}]: no repair anchor available")
    return out


def _covered(ctx, p, nodeval, idx, need_edge_unless_intok):
    """coverage disjunct shared by cond58/cond59."""
    r = _regs(ctx, p)
    if any(ctx.slots[j] == nodeval for j in range(idx, ctx.k)):
        return True
    if nodeval not in r.get("V", frozenset()):
        # announced and properly linked: a process that joined the queue
        # through an already-scanned slot while the repair was in progress;
        # such a node never needs repair, so the scan may miss it
        return (nodeval in ctx.slotset
                and ctx.predv(nodeval) in ctx.Nprime)
    pv = ctx.predv(nodeval)
    if need_edge_unless_intok and not _intok(ctx, pv):
        if nodeval != ctx.mynode[p] and \
                (nodeval, pv) not in r.get("E", frozenset()):
            return False
    return True


def x25(ctx):  # cond58
    out = []
    for p in _rep_procs(ctx, 3, 10):
        r = _regs(ctx, p)
        if not ctx.closed(ctx.headpred(r.get("tail"))):
            continue
        idx = r.get("idx", 0)
        for v in ctx.frag(ctx.hat[p]):
            if any(ctx.slots[j] == v for j in range(idx, ctx.k)):
                continue
            if v not in r.get("V", frozenset()):
                if not (v in ctx.slotset and ctx.predv(v) in ctx.Nprime):
                    out.append(f"cond58[{p}]: fragment node {v} unscanned")
            elif v != ctx.hat[p] and \
                    (v, ctx.predv(v)) not in r.get("E", frozenset()):
                out.append(f"cond58[{p}]: fragment node {v} without edge")
    return out


def x26(ctx):  # cond59
    out = []
    i = ctx.inst
    for p in _rep_procs(ctx, 3, 12):
        r = _regs(ctx, p)
        paths = compute_maximal_paths(
            r.get("V", frozenset()), r.get("E", frozenset()),
            lambda v: i.port_of(ctx.cfg, v))
        idx = r.get("idx", 0)
        for s in paths:
            if not _intok(ctx, ctx.predv(s[-1])):
                continue
            for v in s:
                for node in ctx.frag(v):
                    if not _covered(ctx, p, node, idx, True):
                        out.append(f"cond59[{p}]: {node} of path fragment "
                                   f"uncovered")
            for v in s:
                for v2 in s:
                    if ctx.frag(v) != ctx.frag(v2) and not (
                            _intok(ctx, ctx.predv(v))
                            or _intok(ctx, ctx.predv(v2))):
                        out.append(f"cond59[{p}]: disconnected fragments on "
                                   f"one path")
    return out


def x27(ctx):  # cond25
    out = []
    i = ctx.inst
    for p in _rep_procs(ctx, 3, 20):
        r = _regs(ctx, p)
        V, E = r.get("V", frozenset()), r.get("E", frozenset())
        idx = r.get("idx", 0)
        for v in V:
            if v not in ctx.Nprime:
                out.append(f"cond25a[{p}]: vertex {v} not created")
        if idx > ctx.porth[p] and ctx.mynode[p] not in V:
            out.append(f"cond25a[{p}]: own node missing from graph")
        myfrag = ctx.frag(ctx.hat[p])
        for j in range(idx):
            sj = ctx.slots[j]
            if sj != NIL and sj in myfrag and \
                    ctx.frag(r.get("tail")) != myfrag and sj not in V and \
                    sj in r.get("predmap", {}):
                # occupants without a recorded predecessor were announced
                # through this slot after the scan passed it (the scan adds
                # every node it reads to both the graph and the map)
                out.append(f"cond25b[{p}]: fragment slot {j} unscanned")
            if ctx.is_node(sj) and sj in V and \
                    ctx.predv(sj) not in (i.CRASH, i.INCS, i.EXIT) and \
                    (sj, ctx.predv(sj)) not in E and \
                    sj in r.get("predmap", {}):
                # nodes in V only as someone's recorded predecessor were
                # announced through this slot after the scan passed it; the
                # scan never read their own predecessor pointer
                out.append(f"cond25d[{p}]: slot {j} missing its edge")
            if sj == NIL or sj not in V:
                if sj != NIL:
                    ok = (ctx.closed(ctx.headpred(r.get("tail")))
                          and sj in ctx.chain(r.get("tail"))) or \
                        ctx.headpred(sj) in (NIL, i.CRASH) or \
                        ctx.closed(ctx.headpred(sj))
                    if not ok:
                        out.append(f"cond25e[{p}]: scanned slot {j} "
                                   f"unaccounted")
            for v in V:
                ow = ctx.cfg.nodes.get(v[1])
                if ow is None:
                    continue
                owner_port = (ctx.porth[ow[0]]
                              if ctx.cfg.procs[ow[0]].sp_active else None)
                if owner_port == j and v != sj:
                    if ctx.predv(v) != i.EXIT or v in ctx.slots:
                        out.append(f"cond25c[{p}]: stale vertex {v}")
        for v in V:
            if ctx.predv(v) == i.CRASH and \
                    ctx.headpred(v) != i.CRASH:
                out.append(f"cond25f[{p}]: crash-marked {v} in headed "
                           f"fragment")
        for (v, w) in E:
            if w not in V or (ctx.predv(v) != w
                              and not _intok(ctx, ctx.predv(v))):
                out.append(f"cond25g[{p}]: edge ({v},{w}) stale")
            if v not in ctx.slots and \
                    any(ctx.predv(s) == w for s in ctx.slots if s != NIL):
                out.append(f"cond25h[{p}]: edge source gone but target "
                           f"re-linked")
            if ctx.predv(v) not in {w, i.INCS, i.EXIT}:
                out.append(f"cond25i[{p}]: edge ({v},{w}) contradicts Pred")
            elif _intok(ctx, ctx.predv(v)) and ctx.predv(w) != i.EXIT:
                out.append(f"cond25i[{p}]: bypassed target not retired")
            if v == ctx.mynode[p]:
                out.append(f"cond25j[{p}]: own node has an outgoing edge")
        if idx > ctx.porth[p]:
            paths = compute_maximal_paths(
                V, E, lambda v: i.port_of(ctx.cfg, v))
            if not any(s[-1] == ctx.mynode[p] for s in paths):
                out.append(f"cond25k[{p}]: no path fronts at own node")
    return out


def x28(ctx):  # cond35
    out = []
    for p in _rep_procs(ctx, 3, 18):
        r = _regs(ctx, p)
        pc = ctx.eff[p] - R
        if ctx.closed(ctx.headpred(r.get("tail"))) and \
                ctx.frag(ctx.hat[p]) == ctx.frag(ctx.tail):
            out.append(f"cond35[{p}]: inside Tail's fragment")
        if 10 <= pc <= 18 and r.get("tail") not in r.get("V", frozenset()):
            if not ctx.closed(ctx.headpred(r.get("tail"))):
                out.append(f"cond35[{p}]: unscanned snapshot tail in open "
                           f"fragment")
        if 13 <= pc <= 18 and \
                (r.get("tailpath") is not None) != \
                (r.get("tail") in r.get("V", frozenset())):
            out.append(f"cond35[{p}]: tailpath/scan mismatch")
    return out


def x29(ctx):  # cond56
    out = []
    for p in _rep_procs(ctx, 3, 20):
        r = _regs(ctx, p)
        if not ctx.closed(ctx.headpred(r.get("tail"))) and \
                ctx.closed(ctx.headpred(ctx.tail)):
            out.append(f"cond56[{p}]: Tail fragment closed behind snapshot")
    return out


def x30(ctx):  # cond13
    out = []
    i = ctx.inst
    for p in _rep_procs(ctx, 5, 9):
        r = _regs(ctx, p)
        pc = ctx.eff[p] - R
        cur = r.get("cur")
        idx = r.get("idx", 0)
        si = ctx.slots[idx] if 0 <= idx < ctx.k else None
        if pc == 5:
            if cur != NIL and not (
                    cur in ctx.Nprime
                    and (cur == si or ctx.predv(cur) == i.EXIT)):
                out.append(f"cond13[{p}]: cur={cur} stale at rep:5")
        if pc == 6 and ctx.is_node(cur):
            if not ctx.nn_present(cur) and not any(
                    p2 != p and ctx.hat[p2] == cur
                    and ctx.pch[p2] in _rng(4, 6) for p2 in range(ctx.n)):
                out.append(f"cond13[{p}]: waiting on unlinked node")
        if 6 <= pc <= 9:
            if not (cur in ctx.Nprime
                    and (cur == si or ctx.predv(cur) == i.EXIT)):
                out.append(f"cond13[{p}]: cur={cur} stale mid-scan")
        if pc in (7, 8):
            if ctx.predv(cur) not in {i.CRASH, i.INCS, i.EXIT} | ctx.Nprime:
                out.append(f"cond13[{p}]: cur.Pred out of range")
        if pc == 9 and r.get("curpred") not in ctx.Nprime:
            out.append(f"cond13[{p}]: curpred not a created node")
    return out


def x31(ctx):  # cond63
    out = []
    for p in _rep_procs(ctx, 13, 19):
        r = _regs(ctx, p)
        pc = ctx.eff[p] - R
        tp = r.get("tailpath")
        trig = pc == 19 or (pc <= 18 and tp is not None and not _intok(
            ctx, r.get("predmap", {}).get(tp[-1], ctx.inst.EXIT)))
        if trig and ctx.closed(ctx.headpred(r.get("tail"))):
            out.append(f"cond63[{p}]: closed fragment despite open tailpath")
    return out


def x32(ctx):  # cond12
    out = []
    i = ctx.inst
    for p in _rep_procs(ctx, 10, 12):
        r = _regs(ctx, p)
        if not ctx.closed(ctx.headpred(r.get("tail"))):
            continue
        paths = compute_maximal_paths(
            r.get("V", frozenset()), r.get("E", frozenset()),
            lambda v: i.port_of(ctx.cfg, v))
        mn = ctx.mynode[p]
        ok = any(s[-1] == mn and s[0] == ctx.frag(mn)[-1] for s in paths)
        if not ok:
            out.append(f"cond12[{p}]: no path from fragment tail to own node")
    return out


def x33(ctx):  # cond60
    out = []
    for p in _rep_procs(ctx, 12, 20):
        r = _regs(ctx, p)
        mine = [s for s in r.get("paths", ()) if ctx.mynode[p] in s]
        if len(mine) != 1 or r.get("mypath") != mine[0]:
            out.append(f"cond60[{p}]: mypath register incorrect")
    return out


def x34(ctx):  # cond26
    out = []
    i = ctx.inst
    for p in _rep_procs(ctx, 10, 10):
        r = _regs(ctx, p)
        paths = compute_maximal_paths(
            r.get("V", frozenset()), r.get("E", frozenset()),
            lambda v: i.port_of(ctx.cfg, v))
        if any(_intok(ctx, ctx.predv(s[-1])) and ctx.predv(s[0]) != i.EXIT
               for s in paths):
            continue
        if not (ctx.closed(ctx.headpred(r.get("tail")))
                or len(ctx.Q) == 0):
            out.append(f"cond26[{p}]: anchorless graph with waiting queue")
    return out


def x35(ctx):  # cond27
    out = []
    i = ctx.inst
    for p in _rep_procs(ctx, 10, 10):
        r = _regs(ctx, p)
        paths = compute_maximal_paths(
            r.get("V", frozenset()), r.get("E", frozenset()),
            lambda v: i.port_of(ctx.cfg, v))
        for s in paths:
            if not (_intok(ctx, ctx.predv(s[-1]))
                    and ctx.predv(s[0]) != i.EXIT):
                continue
            if ctx.closed(ctx.headpred(r.get("tail"))):
                continue
            rearn = s[0]
            fr = ctx.frag(rearn)
            if not (fr and fr[-1] == rearn and ctx.closed(ctx.predv(fr[0]))
                    and ctx.frag(ctx.hat[p]) != fr):
                out.append(f"cond27[{p}]: closed path rear {rearn} "
                           f"inconsistent")
    return out


def x36(ctx):  # cond61
    out = []
    for p in _rep_procs(ctx, 15, 16):
        r = _regs(ctx, p)
        pv = r.get("pathvar")
        pc = ctx.eff[p] - R
        if pv is None:
            out.append(f"cond61[{p}]: no current path at rep:{pc}")
            continue
        if not _intok(ctx, r.get("predmap", {}).get(pv[-1], ctx.inst.EXIT)):
            out.append(f"cond61[{p}]: current path front not closed")
        if pc == 16:
            fr = ctx.frag(pv[0])
            ok = bool(fr) and pv[0] in fr
            if ok and len(pv) == 1:
                # a one-node candidate passes both selection guards only
                # when its owner sits between the critical section and
                # retirement: the scan must have read the in-CS marker
                # (crashed nodes fail the first guard, retired ones the
                # second, and an owner cannot change a crash-marked link
                # while the repairer holds the lock)
                ok = (r.get("predmap", {}).get(pv[0]) == ctx.inst.INCS)
            if ok and fr[-1] != pv[0]:
                # nodes past the candidate's rear must all have joined the
                # queue after the scan passed their slot (absent from the
                # graph); they extend the live chain, not the repair target
                V = r.get("V", frozenset())
                ok = all(w not in V for w in fr[fr.index(pv[0]) + 1:])
            if not ok:
                out.append(f"cond61[{p}]: headpath candidate malformed")
    return out


def x37(ctx):  # cond43
    out = []
    i = ctx.inst
    for p in _rep_procs(ctx, 11, 19):
        r = _regs(ctx, p)
        if r.get("headpath") is not None:
            continue
        if ctx.closed(ctx.headpred(r.get("tail"))) or len(ctx.Q) == 0:
            continue
        ok = False
        for s in compute_maximal_paths(
                r.get("V", frozenset()), r.get("E", frozenset()),
                lambda v: i.port_of(ctx.cfg, v)):
            if _intok(ctx, ctx.predv(s[-1])) and ctx.predv(s[0]) != i.EXIT:
                fr = ctx.frag(s[0])
                if fr and fr[-1] == s[0] and ctx.closed(ctx.predv(fr[0])) \
                        and ctx.frag(ctx.hat[p]) != fr:
                    ok = True
        if not ok:
            out.append(f"cond43[{p}]: headpath NIL but queue waiting")
    return out


def x38(ctx):  # cond44
    out = []
    i = ctx.inst
    for p in _rep_procs(ctx, 11, 19):
        r = _regs(ctx, p)
        hp = r.get("headpath")
        if hp is None:
            continue
        if hp in r.get("paths", ()) and \
                ctx.closed(ctx.headpred(r.get("tail"))):
            continue
        rearn = hp[0]
        ok = rearn in ctx.Nprime
        if ok:
            fr = ctx.frag(rearn)
            ok = fr and fr[-1] == rearn and ctx.closed(ctx.predv(fr[0])) \
                and ctx.frag(ctx.hat[p]) != fr
            pv = ctx.predv(rearn)
            if ok and pv == i.INCS:
                ok = any(p2 != p and ctx.pch[p2] == E1
                         and ctx.hat[p2] == rearn for p2 in range(ctx.n))
            elif ok and pv == i.EXIT:
                ok = not _residual_q(ctx, rearn)
            elif ok:
                ok = any(p2 != p and ctx.pch[p2] in {6} | _rng(16, 17)
                         and ctx.hat[p2] == rearn for p2 in range(ctx.n))
        if not ok:
            out.append(f"cond44[{p}]: headpath rear {rearn} unsupported")
    return out


def x39(ctx):  # cond45
    out = []
    for p in _rep_procs(ctx, 20, 20):
        if ctx.pch[p] != 5:
            out.append(f"cond45[{p}]: pch={ctx.pch[p]} at rep:20")
        mp = ctx.mypred[p]
        if mp not in ctx.Nprime:
            out.append(f"cond45[{p}]: mypred not a created node")
            continue
        fm = ctx.frag(mp)
        if not fm or fm[-1] != mp:
            out.append(f"cond45[{p}]: mypred not its fragment tail")
        _pred_owner_clauses(ctx, p, mp, f"cond45[{p}]", out)
        if fm and ctx.predv(fm[0]) in (NIL, ctx.inst.CRASH):
            if not _chain_tail_support(ctx, mp, p):
                out.append(f"cond45[{p}]: unheaded target without pc=5 "
                           f"support")
        if ctx.frag(ctx.hat[p]) == fm:
            out.append(f"cond45[{p}]: adopting own fragment")
    return out


EXTENDED = [x20, x21, x22, x23, x24, x25, x26, x27, x28, x29,
            x30, x31, x32, x33, x34, x35, x36, x37, x38, x39]


def check(cfg, inst, level="core"):
    """Run the checker; returns a list of violation strings (empty = clean).
    level: "core", "extended" (= core + extended) or "off"."""
    if level == "off":
        return []
    ctx = Ctx(cfg, inst)
    seen_problems = len(ctx.problems)
    out = list(ctx.problems)
    # structural sanity: every pointer slot must hold a created node (the
    # conditions below may dereference them)
    for q, s in enumerate(ctx.slots):
        if s != NIL and s not in ctx.Nprime:
            out.append(f"structure: slot {q} holds a non-created value {s}")
    if ctx.tail not in ctx.Nprime:
        out.append(f"structure: Tail holds a non-created value {ctx.tail}")
    # the seed node's fields are written once at initialization and never
    # again: predecessor = finished-token, both signals permanently set
    if ctx.predv(inst.SPECIAL) != inst.EXIT:
        out.append("structure: seed node predecessor overwritten")
    if not ctx.cs_present(inst.SPECIAL) or not ctx.nn_present(inst.SPECIAL):
        out.append("structure: seed node signal cleared")
    out += check_mutex(ctx)
    out += check_wait_precondition(ctx)
    conds = list(CORE) + (list(EXTENDED) if level == "extended" else [])
    for fn in conds:
        try:
            out += fn(ctx)
        except Exception as e:  # corrupted state broke a dereference chain
            out.append(f"checker: {fn.__name__} failed on this state "
                       f"({type(e).__name__}: {e})")
    # lazy fragment computations may surface more structural problems
    out += ctx.problems[seen_problems:]
    return out
