"""Exact-rational prover and verifier for storage/repair-bandwidth outer
bounds of exact-repair regenerating codes with d = n-1 helpers."""

__version__ = "0.1.0"
