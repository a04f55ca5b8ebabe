"""Signal object: a one-shot latch with `signal()` and `wait()`.

Abstract state is Present/Absent, initially Absent; wait() may only return
once the state is Present, and at most one wait() may be in flight at a time.

Two implementations:

  * local-spin ("dsm"): a Bit plus a GoAddr slot.  The waiter allocates a
    boolean in its own memory partition, publishes its address through GoAddr
    and spins locally; the signaler sets the Bit and, if it sees a published
    address, writes true through it.  Both calls cost O(1) RMRs in both cost
    models.

  * spin-on-bit ("cc"): a single Bit; wait() re-reads it until Present.
    O(1) RMRs on cache-coherent machines only.

The step functions below execute one sub-line at a time so that crashes can
land between any two shared-memory operations.  They return the next sub-line
number, or None when the call completes; a blocked wait returns its own
sub-line (the spin re-read).
"""

from .values import NIL, TRUE, FALSE, PRESENT, ref

# signal cell pair: (bit_cid, goaddr_cid)


def alloc_signal(mem, owner=None):
    bit = mem.alloc(owner=owner, init=("sig", 0))
    go = mem.alloc(owner=owner, init=NIL)
    return (bit, go)


def present(mem, sig):
    """Abstract state of the object (checker access, cost free)."""
    return mem.peek(sig[0]) == PRESENT


def signal_step(mem, p, sig, regs, s):
    bit, goaddr = sig
    if s == 1:
        mem.write(p, bit, PRESENT)
        return 2
    if s == 2:
        regs["sigaddr"] = mem.read(p, goaddr)
        return 3
    if s == 3:
        return 4 if regs["sigaddr"] != NIL else None
    if s == 4:
        mem.write(p, regs["sigaddr"][1], TRUE)
        return None
    raise AssertionError(s)


def wait_step(mem, p, sig, regs, s):
    bit, goaddr = sig
    if s == 1:
        regs["go"] = mem.alloc(owner=p, init=FALSE)
        return 2
    if s == 2:
        mem.write(p, regs["go"], FALSE)
        return 3
    if s == 3:
        mem.write(p, goaddr, ref(regs["go"]))
        return 4
    if s == 4:
        return None if mem.read(p, bit) == PRESENT else 5
    if s == 5:
        return None if mem.read(p, regs["go"]) == TRUE else 5
    raise AssertionError(s)


def cc_signal_step(mem, p, sig, regs, s):
    if s == 1:
        mem.write(p, sig[0], PRESENT)
        return None
    raise AssertionError(s)


def cc_wait_step(mem, p, sig, regs, s):
    if s == 1:
        return None if mem.read(p, sig[0]) == PRESENT else 1
    raise AssertionError(s)


class SignalWorld:
    """Two-process world: proc 0 performs one signal(), proc 1 one wait().

    A super-passage is a single call; a crash of the waiter makes it restart
    its wait() from scratch (the allowed recovery for this object).
    """

    def __init__(self, impl="dsm"):
        assert impl in ("dsm", "cc")
        self.impl = impl
        self.sig = None

    def setup(self, mem):
        self.sig = alloc_signal(mem, owner=None)

    def can_start(self, cfg, p):
        return True

    def begin_super_passage(self, cfg, p):
        ps = cfg.procs[p]
        ps.sp_active = True
        ps.port = p
        ps.pc = ("call", 1)

    def reenter(self, cfg, p):
        cfg.procs[p].pc = ("call", 1)

    def step(self, cfg, p):
        from . import runtime
        ps = cfg.procs[p]
        s = ps.pc[1]
        if self.impl == "dsm":
            fn = signal_step if p == 0 else wait_step
        else:
            fn = cc_signal_step if p == 0 else cc_wait_step
        nxt = fn(cfg.mem, p, self.sig, ps.regs, s)
        if nxt is None:
            runtime.end_super_passage(cfg, p)
        else:
            ps.pc = ("call", nxt)
