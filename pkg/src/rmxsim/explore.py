"""Bounded exhaustive exploration of all interleavings and crash placements.

Depth-first search over the transition graph spanned by normal and crash
steps, with per-process budgets (super-passages, crashes) taken from the
configuration's limits.  States are deduplicated via a canonical fingerprint
that relabels dynamically allocated cells (queue nodes, spin cells) in a
structure-determined order and drops unreachable allocations, so the state
space stays finite across super-passages even though the allocator never
reuses addresses.

The fingerprint covers everything that determines future behavior: shared
memory reachable from the algorithm's roots, program counters, registers,
ports, history counters and the budget counters.  It excludes pure cost
accounting (RMR counters, caches) and statistics.
"""

import hashlib

from .runtime import apply_step, enabled_normal, enabled_crash


class ExplorationReport:
    __slots__ = ("states", "transitions", "violations", "truncated")

    def __init__(self):
        self.states = 0
        self.transitions = 0
        self.violations = []   # (violation-list, schedule of (proc, kind))
        self.truncated = False

    def summary(self):
        lines = [f"states visited: {self.states}",
                 f"transitions:    {self.transitions}",
                 f"violations:     {len(self.violations)}",
                 f"truncated:      {self.truncated}"]
        for viol, sched in self.violations[:10]:
            lines.append("violation: " + "; ".join(viol))
            lines.append("  schedule: " +
                         " ".join(f"{p}{kind}" for p, kind in sched))
        return "\n".join(lines)


def _node_rank(cfg):
    """Stable content-based ordering key for created nodes: the i-th node
    created through port q sorts as (q, i) regardless of its address."""
    byport = {}
    for b in sorted(cfg.nodes):
        byport.setdefault(cfg.nodes[b][1], []).append(b)
    rank = {}
    for port, bs in byport.items():
        for i, b in enumerate(bs):
            rank[b] = (port, i)
    return rank


def fingerprint(cfg, static_top):
    """Canonical, address-independent encoding of a configuration.

    Cells at addresses below `static_top` (the instance's fixed layout) keep
    their addresses; cells above it are relabeled in traversal order.  The
    traversal walks the fixed cells in address order, then each process's
    control state with registers in sorted key order; compound register
    values (sets, maps) are ordered by a content-based node key so the walk
    itself is deterministic.  Every shared cell holds a small tagged tuple,
    which the fast paths below rely on."""
    vals = cfg.mem.vals
    rank = None
    ids = {}        # dynamic address -> canonical id
    order = []      # (address, cell count) in id order

    def canon(v):
        t = v[0]
        if t == "node":
            a = v[1]
            if a >= static_top:
                i = ids.get(a)
                if i is None:
                    i = ids[a] = len(ids)
                    order.append((a, 5))
                return ("N", i)
        elif t == "ref":
            a = v[1]
            if a >= static_top:
                i = ids.get(a)
                if i is None:
                    i = ids[a] = len(ids)
                    order.append((a, 1))
                return ("G", i)
        return v

    def skey(v):
        """content-based sort key, stable before ids are assigned"""
        if type(v) is tuple:
            if len(v) == 2 and v[0] == "node" and v[1] >= static_top:
                return (0,) + rank.get(v[1], (1 << 30, v[1]))
            return (1, tuple(skey(x) for x in v))
        return (2, repr(v))

    def rval(v):
        tv = type(v)
        if tv is tuple:
            if not v:
                return v
            t = v[0]
            if t == "node" or t == "ref":
                if len(v) == 2 and type(v[1]) is int and v[1] >= static_top:
                    return canon(v)
                return v
            if t == "nil" or t == "i" or t == "b" or t == "sig":
                return v
            return tuple(rval(x) for x in v)
        if tv is frozenset or tv is set:
            return ("set",) + tuple(rval(x) for x in sorted(v, key=skey))
        if tv is dict:
            return ("map",) + tuple(
                (rval(k), rval(v[k])) for k in sorted(v, key=skey))
        return v

    parts = [tuple(map(canon, vals[:static_top]))]
    for ps in cfg.procs:
        regs = ps.regs
        if regs:
            if rank is None and any(type(v) is frozenset or type(v) is dict
                                    for v in regs.values()):
                rank = _node_rank(cfg)
            # the "go" register is the only bare cell address anywhere
            rt = []
            for k in sorted(regs):
                v = regs[k]
                if k == "go":
                    i = ids.get(v)
                    if i is None:
                        i = ids[v] = len(ids)
                        order.append((v, 1))
                    rt.append((k, ("G", i)))
                else:
                    rt.append((k, rval(v)))
            rt = tuple(rt)
        else:
            rt = ()
        parts.append((ps.pc, ps.pch, ps.port, ps.sp_active,
                      ps.crashes_total, ps.done_sps, rt))
    # contents of every reachable dynamic cell, in canonical id order
    wi = 0
    dyn = []
    while wi < len(order):
        a, span = order[wi]
        wi += 1
        for j in range(a, a + span):
            dyn.append(canon(vals[j]))
    parts.append(tuple(dyn))
    return hashlib.sha1(repr(parts).encode()).digest()


def _moves(cfg):
    for p in range(len(cfg.procs)):
        if enabled_normal(cfg, p):
            yield (p, "N")
        if enabled_crash(cfg, p):
            yield (p, "C")


def explore(cfg, check=None, max_states=None, stop_on_violation=True):
    """Exhaustively explore from `cfg` within its budget limits.

    `check(cfg)` is evaluated at every newly visited state; a non-empty
    return is recorded as a violation together with the schedule that
    reached it.  Exceeding `max_states` sets the report's truncation flag.
    """
    static_top = len(cfg.mem.vals)
    rep = ExplorationReport()
    fp0 = fingerprint(cfg, static_top)
    visited = {fp0}
    parents = {}
    rep.states = 1
    if check is not None:
        viol = check(cfg)
        if viol:
            rep.violations.append((list(viol), ()))
            if stop_on_violation:
                return rep
    stack = [(cfg, fp0)]
    while stack:
        c, fp = stack.pop()
        for move in _moves(c):
            c2 = c.clone()
            apply_step(c2, move[0], move[1])
            rep.transitions += 1
            fp2 = fingerprint(c2, static_top)
            if fp2 in visited:
                continue
            visited.add(fp2)
            parents[fp2] = (fp, move)
            rep.states += 1
            if check is not None:
                viol = check(c2)
                if viol:
                    rep.violations.append(
                        (list(viol), _schedule_to(parents, fp2)))
                    if stop_on_violation:
                        return rep
                    continue
            if max_states is not None and rep.states >= max_states:
                rep.truncated = True
                return rep
            stack.append((c2, fp2))
    return rep


def _schedule_to(parents, fp):
    moves = []
    while fp in parents:
        fp, move = parents[fp]
        moves.append(move)
    return tuple(reversed(moves))
