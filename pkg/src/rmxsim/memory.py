"""Non-volatile shared memory with RMR cost accounting.

Cells are integer-addressed and survive crashes; what a crash destroys is the
crashing process's cache (CC model) and its registers (handled by the runtime).

Two cost models:

  DSM -- memory is partitioned; every operation on a cell costs 1 RMR unless
         the cell lives in the acting process's own partition.  Cells with
         owner None are always remote to everyone.

  CC  -- every process has a private cache of bounded capacity (LRU).  A read
         of a cached (valid) copy costs 0; any other read costs 1 and caches
         the cell.  A write or fetch-and-store always costs 1, invalidates
         every other process's copy, and leaves the writer with a valid copy.
"""

from collections import OrderedDict

from .values import NIL

CC = "cc"
DSM = "dsm"

DEFAULT_CACHE_CAPACITY = 8


class Memory:
    def __init__(self, model=DSM, nprocs=1, cache_capacity=DEFAULT_CACHE_CAPACITY):
        if model not in (CC, DSM):
            raise ValueError("model must be 'cc' or 'dsm'")
        self.model = model
        self.nprocs = nprocs
        self.cache_capacity = cache_capacity
        self.vals = []
        self.owner = []
        # per-process LRU cache of cell ids holding a valid copy (CC only)
        self.caches = [OrderedDict() for _ in range(nprocs)]
        # cumulative RMR count per process
        self.rmr = [0] * nprocs

    # -- allocation ---------------------------------------------------------

    def alloc(self, owner=None, init=NIL, count=1):
        """Allocate `count` consecutive cells, all owned by `owner`
        (a process id, or None for unpartitioned/global memory).
        Returns the base cell id.  Allocation itself costs no RMRs."""
        base = len(self.vals)
        for _ in range(count):
            self.vals.append(init)
            self.owner.append(owner)
        return base

    # -- cost helpers -------------------------------------------------------

    def _charge(self, proc, cost):
        if cost:
            self.rmr[proc] += cost

    def _cache_insert(self, proc, cid):
        cache = self.caches[proc]
        if cid in cache:
            cache.move_to_end(cid)
            return
        cache[cid] = True
        if len(cache) > self.cache_capacity:
            cache.popitem(last=False)

    def _invalidate_others(self, proc, cid):
        for p, cache in enumerate(self.caches):
            if p != proc:
                cache.pop(cid, None)

    # -- operations ---------------------------------------------------------

    def read(self, proc, cid):
        if self.model == DSM:
            self._charge(proc, 0 if self.owner[cid] == proc else 1)
        else:
            cache = self.caches[proc]
            if cid in cache:
                cache.move_to_end(cid)
            else:
                self._charge(proc, 1)
                self._cache_insert(proc, cid)
        return self.vals[cid]

    def write(self, proc, cid, val):
        if self.model == DSM:
            self._charge(proc, 0 if self.owner[cid] == proc else 1)
        else:
            self._charge(proc, 1)
            self._invalidate_others(proc, cid)
            self._cache_insert(proc, cid)
        self.vals[cid] = val

    def fas(self, proc, cid, val):
        """Atomic fetch-and-store: writes `val`, returns the previous value."""
        old = self.vals[cid]
        if self.model == DSM:
            self._charge(proc, 0 if self.owner[cid] == proc else 1)
        else:
            self._charge(proc, 1)
            self._invalidate_others(proc, cid)
            self._cache_insert(proc, cid)
        self.vals[cid] = val
        return old

    def peek(self, cid):
        """Cost-free inspection for checkers/tests (not a program step)."""
        return self.vals[cid]

    def poke(self, cid, val):
        """Cost-free mutation for fault-injection tests (not a program step)."""
        self.vals[cid] = val

    def crash(self, proc):
        """A crash wipes the process's cache; memory contents survive."""
        self.caches[proc].clear()

    # -- snapshots ----------------------------------------------------------

    def clone(self):
        m = Memory.__new__(Memory)
        m.model = self.model
        m.nprocs = self.nprocs
        m.cache_capacity = self.cache_capacity
        m.vals = list(self.vals)
        m.owner = list(self.owner)
        m.caches = [OrderedDict(c) for c in self.caches]
        m.rmr = list(self.rmr)
        return m
