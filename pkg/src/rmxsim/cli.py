"""Command-line front end: seeded stress runs, bounded exhaustive
exploration, and trace statistics.

Exit codes: 0 = clean, 1 = violation found, 2 = usage or input error.
"""

import argparse
import os
import sys
from collections import Counter

from .memory import Memory
from .runtime import (Config, RandomSchedule, ScriptSchedule, run,
                      load_schedule, save_trace, ScheduleError)
from .signalobj import SignalWorld
from .rlock import RLockWorld
from .queue import QueueWorld
from .tree import TreeWorld
from . import invariants
from .explore import explore


def _outdir(path):
    base = os.environ.get("RMXSIM_OUT", ".")
    return path if os.path.isabs(path) else os.path.join(base, path)


def _build_world(args):
    n = args.procs
    if args.algo == "signal":
        return SignalWorld(args.model), 2
    if args.algo == "rlock":
        return RLockWorld(n, args.ports or n), n
    if args.algo == "queue":
        return QueueWorld(n, args.ports or n), n
    if args.algo == "tree":
        return TreeWorld(n), n
    raise AssertionError(args.algo)


def _make_config(args):
    world, n = _build_world(args)
    mem = Memory(args.model, n, cache_capacity=args.cache_capacity)
    world.setup(mem)
    limits = {}
    if args.max_sps is not None:
        limits["max_sps"] = args.max_sps
    if args.max_crashes is not None:
        limits["max_crashes"] = args.max_crashes
    cfg = Config(mem, n, world, limits=limits)
    return world, cfg


def _checker(args, world):
    if args.check_invariants == "off":
        return None
    inst = getattr(world, "inst", None)
    if inst is None:
        return None  # only the queue has a condition catalog
    level = args.check_invariants
    return lambda c: invariants.check(c, inst, level) or None


def _passage_table(cfg):
    lines = []
    crash_free = [r for (_, r, crashed) in cfg.stats["passages"]
                  if not crashed]
    hist = Counter(crash_free)
    lines.append("crash-free passage RMR histogram:")
    lines.append("  rmr   passages")
    for r in sorted(hist):
        lines.append(f"  {r:<5d} {hist[r]}")
    lines.append("super-passages (rmr, crashes):")
    byf = {}
    for (_, r, f) in cfg.stats["sps"]:
        byf.setdefault(f, []).append(r)
    for f in sorted(byf):
        rs = byf[f]
        lines.append(f"  f={f}: count={len(rs)} max_rmr={max(rs)}")
    lines.append(f"cs entries: {len(cfg.stats['cs_entries'])}")
    # line-delimited records for diffing
    for r in sorted(hist):
        lines.append(f"rec passage_rmr {r} {hist[r]}")
    for f in sorted(byf):
        lines.append(f"rec sp_max_rmr f={f} {max(byf[f])}")
    lines.append(f"rec cs_entries {len(cfg.stats['cs_entries'])}")
    return "\n".join(lines)


def cmd_run(args):
    world, cfg = _make_config(args)
    if args.trace_out:
        cfg.trace = []
    check = _checker(args, world)
    if args.schedule == "random":
        sched = RandomSchedule(args.seed, crash_prob=args.crash_prob,
                               crash_stop=args.crash_stop)
    else:
        try:
            sched = ScriptSchedule(load_schedule(args.schedule))
        except (OSError, ScheduleError) as e:
            print(f"error: cannot load schedule: {e}", file=sys.stderr)
            return 2
    try:
        viol = run(cfg, sched, args.steps, check=check,
                   check_stride=args.check_stride)
    except ScheduleError as e:
        print(f"error: schedule not executable: {e}", file=sys.stderr)
        return 2
    if args.trace_out:
        save_trace(_outdir(args.trace_out), cfg.trace)
    print(f"steps executed: {cfg.step_index}")
    print(_passage_table(cfg))
    if viol:
        print("VIOLATIONS:")
        for v in viol:
            print(" ", v)
        return 1
    print("no violations")
    return 0


def cmd_explore(args):
    # exploration needs finite budgets; default to one super-passage and
    # one crash per process when not given
    if args.max_sps is None:
        args.max_sps = 1
    if args.max_crashes is None:
        args.max_crashes = 1
    world, cfg = _make_config(args)
    check = _checker(args, world)

    def chk(c):
        out = check(c) if check else []
        incs = [p for p, ps in enumerate(c.procs) if ps.pc == ("cs",)]
        if len(incs) > 1:
            out = list(out or []) + [f"mutual exclusion violated: {incs}"]
        return out or None

    rep = explore(cfg, check=chk, max_states=args.max_states)
    text = rep.summary()
    print(text)
    if args.report_out:
        with open(_outdir(args.report_out), "w") as f:
            f.write(text + "\n")
    return 1 if rep.violations else 0


def cmd_stats(args):
    per_proc = {}
    cs = Counter()
    sps_done = Counter()
    crashes_in_sp = Counter()
    sp_f = []
    steps = 0
    try:
        with open(args.trace) as f:
            for ln, line in enumerate(f, 1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                parts = line.split()
                if len(parts) != 4 or parts[2] not in ("N", "C"):
                    print(f"error: malformed trace line {ln}: {line!r}",
                          file=sys.stderr)
                    return 2
                _, proc, kind, lbl = parts
                p = int(proc)
                d = per_proc.setdefault(p, Counter())
                d[kind] += 1
                steps += 1
                if kind == "C":
                    crashes_in_sp[p] += 1
                if lbl == "cs":
                    cs[p] += 1
                if lbl in ("exit:3", "try:13:9"):
                    sps_done[p] += 1
                    sp_f.append((p, crashes_in_sp[p]))
                    crashes_in_sp[p] = 0
    except OSError as e:
        print(f"error: cannot read trace: {e}", file=sys.stderr)
        return 2
    print(f"steps: {steps}")
    for p in sorted(per_proc):
        d = per_proc[p]
        print(f"proc {p}: normal={d['N']} crashes={d['C']} "
              f"cs_entries={cs[p]} super_passages={sps_done[p]}")
    for p, f in sp_f:
        print(f"rec sp proc={p} crashes={f}")
    print(f"rec steps {steps}")
    print(f"rec cs_entries_total {sum(cs.values())}")
    return 0


def _common(sp):
    sp.add_argument("--algo", choices=["signal", "rlock", "queue", "tree"],
                    default="queue")
    sp.add_argument("--procs", type=int, default=2)
    sp.add_argument("--ports", type=int, default=None,
                    help="ports k (queue/rlock; default = procs)")
    sp.add_argument("--model", choices=["dsm", "cc"], default="dsm")
    sp.add_argument("--cache-capacity", type=int, default=8)
    sp.add_argument("--max-sps", type=int, default=None)
    sp.add_argument("--max-crashes", type=int, default=None)
    sp.add_argument("--check-invariants",
                    choices=["core", "extended", "off"], default="core")


def main(argv=None):
    ap = argparse.ArgumentParser(
        prog="rmxsim",
        description="simulator and model checker for crash-recoverable "
                    "mutual-exclusion algorithms")
    sub = ap.add_subparsers(dest="cmd", required=True)

    rp = sub.add_parser("run", help="seeded or scripted run")
    _common(rp)
    rp.add_argument("--schedule", default="random",
                    help="'random' or a schedule file path")
    rp.add_argument("--seed", type=int, default=0)
    rp.add_argument("--steps", type=int, default=100000)
    rp.add_argument("--crash-prob", type=float, default=0.0)
    rp.add_argument("--crash-stop", type=int, default=None)
    rp.add_argument("--check-stride", type=int, default=64)
    rp.add_argument("--trace-out", default=None)

    ep = sub.add_parser("explore", help="bounded exhaustive exploration")
    _common(ep)
    ep.add_argument("--max-states", type=int, default=None)
    ep.add_argument("--report-out", default=None)

    tp = sub.add_parser("stats", help="recompute metrics from a trace file")
    tp.add_argument("trace")

    args = ap.parse_args(argv)
    if args.cmd == "run":
        return cmd_run(args)
    if args.cmd == "explore":
        return cmd_explore(args)
    return cmd_stats(args)


if __name__ == "__main__":
    sys.exit(main())
