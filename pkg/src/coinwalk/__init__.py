"""Quantum walker with a multi-qubit coin evolved by quantum baker maps."""

__version__ = "0.1.0"
