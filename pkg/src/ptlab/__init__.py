"""Leaks, purity and decoherence in finite classical and quantum process theories."""
from .process import Process, TypeMismatch
from .systems import Classical, Quantum, SystemType
from .tensor import DEFAULT_TOL, Tolerance

__all__ = ["Process", "TypeMismatch", "Classical", "Quantum", "SystemType",
           "Tolerance", "DEFAULT_TOL"]
__version__ = "0.1.0"
