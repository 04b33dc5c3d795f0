"""A small library of named processes used in demos and tests."""
from __future__ import annotations

import numpy as np

from .process import Process, density, from_kraus, identity, state
from .systems import Classical, Quantum, SystemType

HADAMARD = np.array([[1, 1], [1, -1]]) / np.sqrt(2)


def unitary_channel(u) -> Process:
    u = np.asarray(u, dtype=complex)
    return from_kraus([u], Quantum(u.shape[0]))


def dephasing(d: int) -> Process:
    """Complete dephasing in the computational basis."""
    ops = [np.outer(np.eye(d)[i], np.eye(d)[i]) for i in range(d)]
    return from_kraus(ops, Quantum(d))


def depolarizing(d: int, p: float) -> Process:
    """``rho -> (1 - p) rho + p tr(rho) I/d``."""
    q = Quantum(d)
    full = identity(q).transfer
    vec_i = np.eye(d).reshape(-1)
    t = (1 - p) * full + p * np.outer(vec_i, vec_i) / d
    return Process(q, q, t)


def amplitude_damping(gamma: float) -> Process:
    k0 = np.array([[1, 0], [0, np.sqrt(1 - gamma)]])
    k1 = np.array([[0, np.sqrt(gamma)], [0, 0]])
    return from_kraus([k0, k1], Quantum(2))


def transpose_map(d: int) -> Process:
    q = Quantum(d)
    t = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            t[j * d + i, i * d + j] = 1
    return Process(q, q, t)


def dephasing_copy(d: int) -> Process:
    """``rho -> sum_i <i|rho|i> |i><i| (x) |i><i|`` on ``Quantum(d)``."""
    ops = []
    for i in range(d):
        k = np.zeros((d * d, d))
        k[i * d + i, i] = 1
        ops.append(k)
    q = Quantum(d)
    return from_kraus(ops, q, SystemType((q, q)))


def measurement(d: int) -> Process:
    """Computational-basis measurement ``Quantum(d) -> Classical(d)``."""
    ops = [np.outer(np.eye(d)[i], np.eye(d)[i]) for i in range(d)]
    return from_kraus(ops, Quantum(d), Classical(d))


def preparation(states) -> Process:
    """Classically controlled preparation ``i -> rho_i``."""
    cols = [np.asarray(r, dtype=complex).reshape(-1) for r in states]
    d = int(round(np.sqrt(cols[0].size)))
    return Process(Classical(len(cols)), Quantum(d), np.stack(cols, axis=1))


def controlled_unitaries(us) -> Process:
    """``|i><i| (x) rho -> |i><i| (x) U_i rho U_i^dagger`` on ``Classical(n) * Quantum(d)``."""
    us = [np.asarray(u, dtype=complex) for u in us]
    n, d = len(us), us[0].shape[0]
    big = np.zeros((n * d, n * d), dtype=complex)
    ops = []
    for i, u in enumerate(us):
        k = big.copy()
        k[i * d:(i + 1) * d, i * d:(i + 1) * d] = u
        ops.append(k)
    s = SystemType((Classical(n), Quantum(d)))
    return from_kraus(ops, s, s)


def pure_state(psi) -> Process:
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    return density(np.outer(psi, psi.conj()))


def basis_state(atom, k: int) -> Process:
    if isinstance(atom, Classical):
        return state(atom, np.eye(atom.n)[k])
    e = np.zeros(atom.d)
    e[k] = 1
    return pure_state(e)


def random_unitary(d: int, rng) -> np.ndarray:
    z = (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_channel(d_in: int, d_out: int, rng, rank: int = 2) -> Process:
    """Random CPTP map from a random isometry ``d_in -> d_out * rank``."""
    if d_out * rank < d_in:
        raise ValueError("need d_out * rank >= d_in for an isometry")
    z = rng.normal(size=(d_out * rank, d_in)) + 1j * rng.normal(size=(d_out * rank, d_in))
    v, _ = np.linalg.qr(z)
    ops = [v[k * d_out:(k + 1) * d_out, :] for k in range(rank)]
    return from_kraus(ops, Quantum(d_in), Quantum(d_out))


def random_density(d: int, rng, rank: int | None = None) -> Process:
    rank = d if rank is None else rank
    z = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    rho = z @ z.conj().T
    return density(rho / np.trace(rho))


def random_stochastic(rows: int, cols: int, rng) -> np.ndarray:
    """Column-stochastic matrix with Dirichlet(1) columns."""
    return rng.dirichlet(np.ones(rows), size=cols).T
