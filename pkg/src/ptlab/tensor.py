"""Dense complex matrix algebra shared by every process representation.

Matrices are plain 2-d ``numpy`` arrays of dtype ``complex128``. The
functions here add shape validation and the approximate-equality rule used
throughout the package.
"""
from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Tolerance:
    """Absolute/relative tolerance used to decide approximate equalities."""

    abs_eps: float = 1e-9
    rel_eps: float = 1e-9

    def __post_init__(self):
        if self.abs_eps < 0 or self.rel_eps < 0:
            raise ValueError("tolerances must be nonnegative")

    @classmethod
    def from_env(cls, default: float | None = None) -> "Tolerance":
        """Build a tolerance from ``PTLAB_TOL`` (both eps), else ``default``."""
        raw = os.environ.get("PTLAB_TOL")
        if raw is not None:
            eps = float(raw)
            return cls(eps, eps)
        if default is not None:
            return cls(default, default)
        return cls()


DEFAULT_TOL = Tolerance()


def cmatrix(data, rows: int | None = None, cols: int | None = None) -> np.ndarray:
    """Coerce ``data`` into a finite complex matrix, optionally checking its shape."""
    m = np.array(data, dtype=complex)
    if m.ndim == 1 and rows is not None and cols is not None:
        m = m.reshape(rows, cols)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {m.shape}")
    if rows is not None and m.shape[0] != rows or cols is not None and m.shape[1] != cols:
        raise ValueError(f"expected shape ({rows}, {cols}), got {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape} @ {b.shape}")
    return a @ b


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(a, b)


def add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} + {b.shape}")
    return a + b


def scale(c: complex, a: np.ndarray) -> np.ndarray:
    return c * a


def max_abs_diff(a: np.ndarray, b: np.ndarray) -> float:
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a - b)))


def approx_eq(a: np.ndarray, b: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Entry-wise ``|a - b| <= abs_eps + rel_eps * max(|a|, |b|)``."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    bound = tol.abs_eps + tol.rel_eps * np.maximum(np.abs(a), np.abs(b))
    return bool(np.all(np.abs(a - b) <= bound))


def is_hermitian(a: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> bool:
    return a.shape[0] == a.shape[1] and approx_eq(a, a.conj().T, tol)


def eig_hermitian(a: np.ndarray, tol: Tolerance = DEFAULT_TOL):
    """Eigen-decompose a Hermitian matrix.

    Returns ``(eigenvalues, eigenvectors)`` with real eigenvalues sorted in
    descending order and eigenvectors as the columns of a unitary matrix, so
    that ``V @ diag(w) @ V^dagger`` reconstructs ``a``.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not is_hermitian(a, tol):
        raise ValueError("matrix is not Hermitian within tolerance")
    herm = (a + a.conj().T) / 2
    try:
        w, v = np.linalg.eigh(herm)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise ArithmeticError("eigensolver did not converge") from exc
    order = np.argsort(w)[::-1]
    return w[order], v[:, order]


def psd_project(a: np.ndarray) -> np.ndarray:
    """Nearest (Frobenius) positive semidefinite matrix to Hermitian ``a``."""
    herm = (a + a.conj().T) / 2
    w, v = np.linalg.eigh(herm)
    w = np.clip(w, 0.0, None)
    return (v * w) @ v.conj().T
