"""Leaks: processes ``A -> A * L`` from which discarding ``L`` gives back the wire.

Covers the leak predicate, broadcasting, leak composition and the canonical
forms of classical and classical-quantum leaks.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from . import process as pm
from .process import Process, TypeMismatch
from .systems import Classical, Quantum, SystemType, as_system, single_atom
from .tensor import DEFAULT_TOL, Tolerance


class NotALeak(ValueError):
    def __init__(self, residual: float):
        super().__init__(f"not a leak (residual {residual:.3g})")
        self.residual = residual


class ReconstructionError(ArithmeticError):
    """A canonical form failed to reproduce its leak."""


@dataclass(frozen=True)
class Broadcast:
    pass


@dataclass(frozen=True)
class Constant:
    state: Process


@dataclass(frozen=True)
class ClassicalCanonical:
    l: Process


@dataclass(frozen=True)
class CQCanonical:
    L: Process


@dataclass(frozen=True)
class Other:
    pass


LeakKind = Union[Broadcast, Constant, ClassicalCanonical, CQCanonical, Other]


@dataclass(frozen=True)
class LeakCertificate:
    is_leak: bool
    residual: float
    leak_system: SystemType
    kind: LeakKind = field(default_factory=Other)

    @property
    def kind_name(self) -> str:
        return type(self.kind).__name__


def leak_residual(candidate: Process, system=None) -> float:
    """Max deviation in ``(id_A * discard_L) . candidate = id_A``."""
    a = candidate.dom if system is None else as_system(system)
    if candidate.dom != a:
        raise TypeMismatch(f"leak input {candidate.dom} is not {a}")
    leaked = pm.split_prefix(candidate, a)
    marginal = pm.compose_par(pm.identity(a), pm.discard(leaked)) @ candidate
    return marginal.distance(pm.identity(a))


def left_counit_residual(candidate: Process) -> float:
    """Max deviation in ``(discard_A * id_A) . candidate = id_A`` (needs ``L = A``)."""
    a = candidate.dom
    if pm.split_prefix(candidate, a) != a:
        raise TypeMismatch("broadcasting needs the leaked system to equal the input system")
    marginal = pm.compose_par(pm.discard(a), pm.identity(a)) @ candidate
    return marginal.distance(pm.identity(a))


def is_broadcast(candidate: Process, tol: Tolerance = DEFAULT_TOL) -> bool:
    bound = tol.abs_eps + tol.rel_eps
    return leak_residual(candidate) <= bound and left_counit_residual(candidate) <= bound


def constant_leak(system, rho: Process) -> Process:
    """``id_A * rho``."""
    return pm.compose_par(pm.identity(system), rho)


def broadcast(atom) -> Process:
    return pm.copy(atom)


def constant_part(candidate: Process) -> Process:
    """State ``rho`` such that ``candidate`` would be ``id * rho`` if it were constant."""
    a = candidate.dom
    leaked = pm.split_prefix(candidate, a)
    marg = pm.compose_par(pm.discard(a), pm.identity(leaked)) @ candidate @ pm.maximally_mixed(a)
    return marg


def classical_leak(l: Process) -> Process:
    """``(id * l) . copy`` for a classical ``l : A -> L``."""
    a = single_atom(l.dom)
    return pm.compose_par(pm.identity(a), l) @ pm.copy(a)


def cq_leak(L: Process, quantum) -> Process:
    """Canonical classical-quantum leak on ``Classical(n) * Quantum(d)``.

    The classical wire is copied, ``L`` acts on the copy and the quantum wire
    passes through untouched; output order is ``C * Q * leak``.
    """
    c = single_atom(L.dom)
    q = single_atom(quantum)
    spread = pm.compose_par(pm.copy(c), pm.identity(q))           # C Q -> C C Q
    reorder = pm.compose_par(pm.identity(c), pm.swap(c, q))       # C C Q -> C Q C
    return pm.compose_par(pm.identity(SystemType((c, q))), L) @ reorder @ spread


def classify_classical_leak(leak: Process, tol: Tolerance = DEFAULT_TOL):
    """Extract ``l`` with ``leak = (id * l) . copy``.

    ``l`` is obtained by feeding a copy of the input and capping it against
    the kept output: ``l = (cap * id_L) . (id_A * leak) . copy``. Returns
    ``(l, reconstruction_error)``; raises if the result does not reproduce the
    leak or violates the support condition of classical leaks.
    """
    a = single_atom(leak.dom)
    if not isinstance(a, Classical):
        raise TypeError("classical leak forms need a classical input")
    res = leak_residual(leak)
    if res > tol.abs_eps + tol.rel_eps:
        raise NotALeak(res)
    leaked = pm.split_prefix(leak, a)
    l = (pm.compose_par(pm.cap(a), pm.identity(leaked))
         @ pm.compose_par(pm.identity(a), leak) @ pm.copy(a))
    err = classical_leak(l).distance(leak)
    marg_err, support_err = delta_conditions(leak)
    bound = tol.abs_eps + tol.rel_eps
    if max(err, marg_err, support_err) > bound or not pm.is_causal(l, tol):
        raise ReconstructionError(
            f"classical leak form failed: err={err:.3g} marginal={marg_err:.3g} "
            f"support={support_err:.3g}")
    return l, err


def delta_conditions(leak: Process) -> tuple[float, float]:
    """Residuals of the two support conditions on the leak tensor ``Delta[k, j, i]``."""
    a = single_atom(leak.dom)
    leaked = pm.split_prefix(leak, a)
    n = a.n
    delta = leak.transfer.reshape(n, leaked.carrier_dim, n)
    marg = float(np.abs(delta.sum(axis=1) - np.eye(n)).max())
    mask = np.eye(n)[:, None, :]
    support = float(np.abs(delta - delta * mask).max())
    return marg, support


def induced_quantum_leak(leak: Process) -> Process:
    """Quantum leak ``Q -> Q * (C * L)`` obtained by feeding uniform classical noise."""
    c, q = leak.dom.factors
    leaked = pm.split_prefix(leak, leak.dom)
    # C Q L  ->  Q C L
    reorder = pm.compose_par(pm.swap(c, q), pm.identity(leaked))
    feed = pm.compose_par(pm.maximally_mixed(c), pm.identity(q))
    return reorder @ leak @ feed


def classify_cq_leak(leak: Process, tol: Tolerance = DEFAULT_TOL):
    """Extract ``L : Classical(n) -> leak system`` from a leak on ``Classical(n) * Quantum(d)``.

    Returns ``(L, reconstruction_error)``.
    """
    if len(leak.dom) != 2 or not isinstance(leak.dom[0], Classical) \
            or not isinstance(leak.dom[1], Quantum):
        raise TypeError("expected a leak on Classical(n) * Quantum(d)")
    c, q = leak.dom.factors
    res = leak_residual(leak)
    bound = tol.abs_eps + tol.rel_eps
    if res > bound:
        raise NotALeak(res)
    leaked = pm.split_prefix(leak, leak.dom)

    qleak = induced_quantum_leak(leak)
    rho = constant_part(qleak)
    const_err = qleak.distance(constant_leak(q, rho))
    if const_err > bound:
        raise ReconstructionError(f"induced quantum leak is not constant ({const_err:.3g})")

    drop = pm.compose_par(pm.discard(leak.dom), pm.identity(leaked))
    L = drop @ leak @ pm.compose_par(pm.identity(c), pm.maximally_mixed(q))
    err = cq_leak(L, q).distance(leak)
    if err > bound or not pm.is_causal(L, tol):
        raise ReconstructionError(f"classical-quantum leak form failed ({err:.3g})")
    return L, err


def is_leak(candidate: Process, tol: Tolerance = DEFAULT_TOL, system=None) -> LeakCertificate:
    """Check the right-counit law and classify the leak.

    ``system`` defaults to ``candidate.dom``; the codomain must start with it.
    """
    a = candidate.dom if system is None else as_system(system)
    leaked = pm.split_prefix(candidate, a)
    res = leak_residual(candidate, a)
    bound = tol.abs_eps + tol.rel_eps
    if res > bound:
        return LeakCertificate(False, res, leaked, Other())
    if leaked == a and left_counit_residual(candidate) <= bound:
        return LeakCertificate(True, res, leaked, Broadcast())
    rho = constant_part(candidate)
    if candidate.distance(constant_leak(a, rho)) <= bound:
        return LeakCertificate(True, res, leaked, Constant(rho))
    if len(a) == 1 and isinstance(a[0], Classical):
        l, _ = classify_classical_leak(candidate, tol)
        return LeakCertificate(True, res, leaked, ClassicalCanonical(l))
    if len(a) == 2 and isinstance(a[0], Classical) and isinstance(a[1], Quantum):
        L, _ = classify_cq_leak(candidate, tol)
        return LeakCertificate(True, res, leaked, CQCanonical(L))
    return LeakCertificate(True, res, leaked, Other())


def leaks_are_causal(candidate: Process, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Causality of a leak; every leak is causal, so ``False`` signals a bug upstream."""
    cert = is_leak(candidate, tol)
    if not cert.is_leak:
        raise NotALeak(cert.residual)
    return pm.is_causal(candidate, tol)


def compose_leaks_seq(a: Process, b: Process) -> Process:
    """Leak ``A -> A * L1 * L2``: apply ``a``, then leak the kept ``A`` again through ``b``."""
    sys_a = a.dom
    if b.dom != sys_a:
        raise TypeMismatch(f"leaks act on {sys_a} and {b.dom}")
    l1 = pm.split_prefix(a, sys_a)
    l2 = pm.split_prefix(b, sys_a)
    nested = pm.compose_par(b, pm.identity(l1)) @ a                 # A L2 L1
    fix = pm.compose_par(pm.identity(sys_a), pm.swap(l2, l1))       # A L1 L2
    return fix @ nested


def compose_leaks_par(a: Process, b: Process) -> Process:
    """Leak ``A * B -> A * B * L1 * L2``."""
    sa, sb = a.dom, b.dom
    l1 = pm.split_prefix(a, sa)
    l2 = pm.split_prefix(b, sb)
    both = pm.compose_par(a, b)                                      # A L1 B L2
    na, n1, nb, n2 = len(sa), len(l1), len(sb), len(l2)
    idx = list(range(na + n1 + nb + n2))
    a_i, l1_i = idx[:na], idx[na:na + n1]
    b_i, l2_i = idx[na + n1:na + n1 + nb], idx[na + n1 + nb:]
    return pm.permute(both.cod, a_i + b_i + l1_i + l2_i) @ both


@dataclass(frozen=True)
class MixedLeakParams:
    c: float
    q: float
    state: Process

    def __post_init__(self):
        if not 0 <= self.c <= 1 or abs(self.c + self.q - 1) > 1e-12:
            raise ValueError("need c in [0, 1] and c + q = 1")


def mixed_leak(atom, c: float, rho: Process | None = None) -> Process:
    """``c * broadcast + (1 - c) * (id * rho)`` on a classical atom."""
    a = single_atom(atom)
    rho = pm.maximally_mixed(a) if rho is None else rho
    params = MixedLeakParams(c, 1 - c, rho)
    return params.c * broadcast(a) + params.q * constant_leak(a, params.state)
