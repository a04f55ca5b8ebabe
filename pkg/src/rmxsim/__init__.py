"""Deterministic simulator and model checker for crash-recoverable
mutual-exclusion algorithms over non-volatile shared memory."""

__version__ = "0.1.0"
