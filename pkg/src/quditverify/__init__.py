"""Verification of multi-qudit states via generalized stabilizers."""
