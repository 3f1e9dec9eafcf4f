"""Truncated Fock-space laboratory for squeezed states and position eigenstates."""

__version__ = "0.1.0"
