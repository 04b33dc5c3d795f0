"""How well a leak's output encodes its input.

The raw quality is the best feedback-loop value ``trace(r . M)`` over causal
restorations ``r : L -> A``, where ``M = (discard_A * id_L) . leak``. It is
renormalised affinely so that broadcasting scores 1 and constant leaks 0:
``(raw - 1) / (circle - 1)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import prod

import numpy as np

from . import leaks as lk
from . import process as pm
from .process import Process
from .systems import Classical, Quantum, single_atom
from .tensor import DEFAULT_TOL, Tolerance, psd_project


@dataclass(frozen=True)
class QualityReport:
    raw: float
    circle: float
    normalized: float
    optimal_restoration: Process
    method: str
    constant_certificate: bool = False


def leaked_marginal(leak: Process) -> Process:
    """``M = (discard_A * id_L) . leak``, the map from input to leaked data."""
    a = leak.dom
    leaked = pm.split_prefix(leak, a)
    return pm.compose_par(pm.discard(a), pm.identity(leaked)) @ leak


def loop_value(r: Process, leak: Process) -> float:
    """Feedback-loop value of ``r . M`` for a restoration ``r``."""
    m = leaked_marginal(leak)
    return pm.trace_loop(r @ m, 0).value.real


def normalize(raw: float, circle: float) -> float:
    if abs(circle - 1) < 1e-15:
        return 0.0
    return (raw - 1) / (circle - 1)


def classical_restoration(choice, leaked, atom) -> Process:
    """Deterministic restoration sending leaked basis state ``j`` to ``choice[j]``."""
    t = np.zeros((atom.n, leaked.carrier_dim))
    t[list(choice), np.arange(leaked.carrier_dim)] = 1
    return Process(leaked, atom, t)


def _classical_quality(leak: Process, atom: Classical) -> tuple[float, Process]:
    leaked = pm.split_prefix(leak, atom)
    if not leaked.is_classical:
        raise TypeError("classical quality needs a classical leaked system")
    m = leaked_marginal(leak).transfer.real          # (|L|, n)
    # The loop value sum_ij r[i, j] m[j, i] is linear in r and separates over the
    # columns of r, so the best vertex of the stochastic polytope picks, for every
    # leaked outcome j, the input i maximising m[j, i].
    choice = np.argmax(m, axis=1)
    r = classical_restoration(choice, leaked, atom)
    return float(m[np.arange(len(choice)), choice].sum()), r


def _choi_objective(m: Process, leaked_dims, d: int) -> np.ndarray:
    """Hermitian ``G`` with ``trace(r . M) = Re tr(G J_r)`` for the Choi matrix ``J_r``."""
    dl = prod(leaked_dims)
    # quantum view of M in whole-space vectorization: rows (l, l'), cols (a, b)
    mq = pm.quantum_view(m)
    g = pm._global_order(mq.transfer, leaked_dims, [d]).reshape(dl, dl, d, d)
    # trace(R M) = sum J[(i,a),(j,b)] M[(i,j),(a,b)]  ->  G = conj(K) with K = M reshuffled
    k = g.transpose(0, 2, 1, 3).reshape(dl * d, dl * d)
    grad = k.conj()
    return (grad + grad.conj().T) / 2


def _partial_trace_out(j: np.ndarray, din: int, dout: int) -> np.ndarray:
    return np.einsum("iaja->ij", j.reshape(din, dout, din, dout))


def _tp_project(j: np.ndarray, din: int, dout: int) -> np.ndarray:
    """Affine projection onto ``tr_out J = I``."""
    x = _partial_trace_out(j, din, dout)
    corr = np.kron(np.eye(din) - x, np.eye(dout)) / dout
    return j + corr


def _tp_normalize(j: np.ndarray, din: int, dout: int) -> np.ndarray:
    """Exactly trace preserving, PSD-preserving rescaling ``(Y * I) J (Y * I)``."""
    x = _partial_trace_out(j, din, dout)
    w, v = np.linalg.eigh((x + x.conj().T) / 2)
    w = np.clip(w, 1e-14, None)
    y = np.kron((v / np.sqrt(w)) @ v.conj().T, np.eye(dout))
    return y @ j @ y.conj().T


def maximize_channel_objective(g: np.ndarray, din: int, dout: int, rng,
                               iters: int = 500, step: float = 0.1, restarts: int = 5):
    """Projected gradient ascent of ``Re tr(G J)`` over Choi matrices of channels."""
    best_val, best_j = -np.inf, None
    for attempt in range(restarts):
        if attempt == 0:
            j = np.eye(din * dout, dtype=complex) / dout
        else:
            z = rng.normal(size=(din * dout,) * 2) + 1j * rng.normal(size=(din * dout,) * 2)
            j = _tp_normalize(z @ z.conj().T, din, dout)
        for _ in range(iters):
            j = j + step * g
            j = psd_project(j)
            j = _tp_project(j, din, dout)
        j = _tp_normalize(psd_project(j), din, dout)
        val = float(np.real(np.trace(g @ j)))
        if val > best_val:
            best_val, best_j = val, j
    return best_val, best_j


def _quantum_quality(leak: Process, atom: Quantum, restarts: int, seed) -> tuple[float, Process, bool]:
    leaked = pm.split_prefix(leak, atom)
    m = leaked_marginal(leak)
    cert = lk.is_leak(leak)
    constant = isinstance(cert.kind, lk.Constant)
    ldims = [a.hilbert_dim for a in leaked]
    g = _choi_objective(m, ldims, atom.d)
    rng = np.random.default_rng(seed)
    _, j = maximize_channel_objective(g, prod(ldims), atom.d, rng, restarts=restarts)
    r = pm.from_choi(j, leaked, atom)
    return loop_value(r, leak), r, constant


def quality(leak: Process, tol: Tolerance = DEFAULT_TOL, restarts: int = 5,
            seed: int | None = 0) -> QualityReport:
    """Quality of a leak on a single classical or quantum atom."""
    atom = single_atom(leak.dom)
    res = lk.leak_residual(leak)
    if res > tol.abs_eps + tol.rel_eps:
        raise lk.NotALeak(res)
    circ = pm.circle(atom)
    if isinstance(atom, Classical):
        raw, r = _classical_quality(leak, atom)
        return QualityReport(raw, circ, normalize(raw, circ), r, "vertex")
    raw, r, constant = _quantum_quality(leak, atom, restarts, seed)
    return QualityReport(raw, circ, normalize(raw, circ), r, "gradient", constant)
