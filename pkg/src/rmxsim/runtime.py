"""Deterministic step-level runtime.

A configuration holds shared memory plus one control record per process.
Steps come in two kinds:

  N (normal) -- the process executes the single atomic line (or sub-line of an
                expanded signal/wait call) at its program counter.  A process
                sitting in the Remainder section uses its normal step to enter
                the Try section (opening a new super-passage, or re-entering
                after a crash).
  C (crash)  -- the process loses its registers and cache and its control
                returns to the Remainder entry; non-volatile memory survives.

Everything is deterministic given the initial configuration and the schedule,
which makes traces replayable byte-for-byte.
"""

import random


class ProcState:
    __slots__ = (
        "pc", "regs", "port", "pch", "sp_active", "sp_crashes",
        "crashes_total", "done_sps", "pass_start", "sp_start",
    )

    def __init__(self):
        self.pc = ("rem",)
        self.regs = {}
        self.port = None
        self.pch = 2  # Remainder convention: history counter at Try line 2
        self.sp_active = False
        self.sp_crashes = 0
        self.crashes_total = 0
        self.done_sps = 0
        self.pass_start = 0
        self.sp_start = 0

    def clone(self):
        ps = ProcState.__new__(ProcState)
        ps.pc = self.pc
        ps.regs = dict(self.regs)
        ps.port = self.port
        ps.pch = self.pch
        ps.sp_active = self.sp_active
        ps.sp_crashes = self.sp_crashes
        ps.crashes_total = self.crashes_total
        ps.done_sps = self.done_sps
        ps.pass_start = self.pass_start
        ps.sp_start = self.sp_start
        return ps


class Config:
    __slots__ = ("mem", "procs", "world", "nodes", "stats", "step_index",
                 "limits", "record_stats", "trace")

    def __init__(self, mem, nprocs, world, limits=None, record_stats=True):
        self.mem = mem
        self.procs = [ProcState() for _ in range(nprocs)]
        self.world = world
        # registry of queue nodes created at runtime: base cell -> (proc, port)
        self.nodes = {}
        self.stats = {"passages": [], "sps": [], "cs_entries": []}
        self.step_index = 0
        # limits: {"max_sps": int|None, "max_crashes": int|None} per process
        self.limits = limits or {}
        self.record_stats = record_stats
        self.trace = None  # set to [] to record (idx, proc, kind, line) events

    def clone(self):
        c = Config.__new__(Config)
        c.mem = self.mem.clone()
        c.procs = [ps.clone() for ps in self.procs]
        c.world = self.world
        c.nodes = dict(self.nodes)
        c.stats = {k: list(v) for k, v in self.stats.items()}
        c.step_index = self.step_index
        c.limits = self.limits
        c.record_stats = self.record_stats
        c.trace = None
        return c


class ScheduleError(Exception):
    pass


def enabled_normal(cfg, p):
    ps = cfg.procs[p]
    if ps.pc != ("rem",):
        return True
    if ps.sp_active:
        return True
    max_sps = cfg.limits.get("max_sps")
    if max_sps is not None and ps.done_sps >= max_sps:
        return False
    return cfg.world.can_start(cfg, p)


def enabled_crash(cfg, p):
    ps = cfg.procs[p]
    if ps.pc == ("rem",):
        return False
    max_crashes = cfg.limits.get("max_crashes")
    if max_crashes is not None and ps.crashes_total >= max_crashes:
        return False
    return True


def pc_label(pc):
    return ":".join(str(x) for x in pc)


def normal_step(cfg, p):
    ps = cfg.procs[p]
    if cfg.trace is not None:
        cfg.trace.append((cfg.step_index, p, "N", pc_label(ps.pc)))
    if ps.pc == ("rem",):
        if ps.sp_active:
            cfg.world.reenter(cfg, p)
        else:
            cfg.world.begin_super_passage(cfg, p)
            ps.sp_start = cfg.mem.rmr[p]
            ps.sp_crashes = 0
        ps.pass_start = cfg.mem.rmr[p]
    else:
        cfg.world.step(cfg, p)
    cfg.step_index += 1


def crash_step(cfg, p):
    ps = cfg.procs[p]
    if ps.pc == ("rem",):
        raise ScheduleError("crash of a process in Remainder")
    if cfg.trace is not None:
        cfg.trace.append((cfg.step_index, p, "C", pc_label(ps.pc)))
    if cfg.record_stats:
        cfg.stats["passages"].append((p, cfg.mem.rmr[p] - ps.pass_start, True))
    cfg.mem.crash(p)
    ps.regs = {}
    ps.pc = ("rem",)
    ps.sp_crashes += 1
    ps.crashes_total += 1
    cfg.step_index += 1


def end_passage(cfg, p):
    """Called by worlds when a process returns to Remainder normally."""
    ps = cfg.procs[p]
    if cfg.record_stats:
        cfg.stats["passages"].append((p, cfg.mem.rmr[p] - ps.pass_start, False))


def end_super_passage(cfg, p):
    ps = cfg.procs[p]
    end_passage(cfg, p)
    if cfg.record_stats:
        cfg.stats["sps"].append((p, cfg.mem.rmr[p] - ps.sp_start, ps.sp_crashes))
    ps.sp_active = False
    ps.port = None
    ps.done_sps += 1
    ps.pc = ("rem",)
    ps.regs = {}


def apply_step(cfg, p, kind):
    if kind == "N":
        if not enabled_normal(cfg, p):
            raise ScheduleError(f"normal step not enabled for proc {p}")
        normal_step(cfg, p)
    elif kind == "C":
        if not enabled_crash(cfg, p):
            raise ScheduleError(f"crash step not enabled for proc {p}")
        crash_step(cfg, p)
    else:
        raise ScheduleError(f"unknown step kind {kind!r}")


class RandomSchedule:
    """Uniformly random fair schedule with a crash probability knob.

    Crashes stop being generated once `crash_stop` steps have elapsed, which
    is what the recovery/starvation experiments need.
    """

    def __init__(self, seed, crash_prob=0.0, crash_stop=None):
        self.rng = random.Random(seed)
        self.crash_prob = crash_prob
        self.crash_stop = crash_stop

    def next(self, cfg):
        cands = [p for p in range(len(cfg.procs))
                 if enabled_normal(cfg, p) or enabled_crash(cfg, p)]
        if not cands:
            return None
        p = self.rng.choice(cands)
        crashing_allowed = (self.crash_stop is None
                            or cfg.step_index < self.crash_stop)
        if (crashing_allowed and enabled_crash(cfg, p)
                and self.rng.random() < self.crash_prob):
            return (p, "C")
        if enabled_normal(cfg, p):
            return (p, "N")
        return (p, "C") if (crashing_allowed and enabled_crash(cfg, p)) else None


class ScriptSchedule:
    def __init__(self, steps):
        self.steps = list(steps)
        self.pos = 0

    def next(self, cfg):
        if self.pos >= len(self.steps):
            return None
        step = self.steps[self.pos]
        self.pos += 1
        return step


def run(cfg, schedule, max_steps, check=None, check_stride=1):
    """Drive the configuration.  `check(cfg)` is called every `check_stride`
    steps and once at the end; the first non-None return aborts the run and
    is returned as the violation."""
    for i in range(max_steps):
        move = schedule.next(cfg)
        if move is None:
            break
        apply_step(cfg, move[0], move[1])
        if check is not None and cfg.step_index % check_stride == 0:
            v = check(cfg)
            if v:
                return v
    if check is not None:
        return check(cfg)
    return None


# -- schedule / trace files -------------------------------------------------

def save_schedule(path, steps):
    """Line format: `<index> <proc> <N|C>`."""
    with open(path, "w") as f:
        for i, (p, kind) in enumerate(steps):
            f.write(f"{i} {p} {kind}\n")


def load_schedule(path):
    steps = []
    with open(path) as f:
        for line in f:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 3 or parts[2] not in ("N", "C"):
                raise ScheduleError(f"bad schedule line: {line!r}")
            steps.append((int(parts[1]), parts[2]))
    return steps


def save_trace(path, trace):
    with open(path, "w") as f:
        for idx, p, kind, line in trace:
            f.write(f"{idx} {p} {kind} {line}\n")
