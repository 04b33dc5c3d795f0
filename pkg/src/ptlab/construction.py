"""Adjoining leaks to a theory by sandwiching processes between pre-leak idempotents.

A pre-leak is a causal process ``p : A -> A * L`` whose marginal
``P = (id_A * discard_L) . p`` is idempotent. Restricting a theory to the
processes ``P_B . f . P_A`` turns every pre-leak into a leak. With the
basis-copying pre-leak on quantum systems this is decoherence, and the
restricted theory is classical probability theory.

Constructed theories are kept intensionally: the original processes plus
the projector, with no re-typing of systems.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from scipy.linalg import null_space

from . import channels
from . import leaks as lk
from . import process as pm
from .process import Process
from .systems import Classical, Quantum, SystemType, as_system, single_atom
from .tensor import DEFAULT_TOL, Tolerance


class NotCausal(ValueError):
    def __init__(self, residual: float):
        super().__init__(f"pre-leak is not causal (residual {residual:.3g})")
        self.residual = residual


class NotIdempotent(ValueError):
    def __init__(self, residual: float):
        super().__init__(f"pre-leak marginal is not idempotent (residual {residual:.3g})")
        self.residual = residual


class UnassignedAtom(KeyError):
    pass


class NotAMember(ValueError):
    pass


@dataclass(frozen=True)
class PreLeak:
    system: SystemType
    process: Process
    leaked: SystemType
    induced_idempotent: Process
    causal_residual: float = 0.0
    idempotent_residual: float = 0.0

    @property
    def atom(self):
        return single_atom(self.system)


def marginal_idempotent(process: Process, system=None) -> Process:
    a = process.dom if system is None else as_system(system)
    leaked = pm.split_prefix(process, a)
    return pm.compose_par(pm.identity(a), pm.discard(leaked)) @ process


def make_preleak(process: Process, tol: Tolerance = DEFAULT_TOL) -> PreLeak:
    """Validate a pre-leak on the single-atom input system of ``process``."""
    a = process.dom
    single_atom(a)
    leaked = pm.split_prefix(process, a)
    bound = tol.abs_eps + tol.rel_eps
    c_res = pm.causal_residual(process)
    if c_res > bound:
        raise NotCausal(c_res)
    p = marginal_idempotent(process)
    i_res = (p @ p).distance(p)
    if i_res > bound:
        raise NotIdempotent(i_res)
    return PreLeak(a, process, leaked, p, c_res, i_res)


def trivial_preleak(atom) -> PreLeak:
    """The identity seen as a pre-leak with nothing leaked."""
    return make_preleak(pm.identity(atom))


def is_coassociative(process: Process, tol: Tolerance = DEFAULT_TOL) -> bool:
    a = process.dom
    if pm.split_prefix(process, a) != a:
        raise ValueError("co-associativity needs L = A")
    left = pm.compose_par(process, pm.identity(a)) @ process
    right = pm.compose_par(pm.identity(a), process) @ process
    return left.approx_eq(right, tol)


@dataclass(frozen=True)
class ConstructedTheory:
    """Per-atom pre-leak assignments; composites follow by coherence."""

    assignments: Mapping = field(default_factory=dict)

    @classmethod
    def of(cls, *preleaks: PreLeak) -> "ConstructedTheory":
        return cls({p.atom: p for p in preleaks})

    def preleak(self, atom) -> PreLeak:
        try:
            return self.assignments[atom]
        except KeyError:
            raise UnassignedAtom(f"no pre-leak assigned to {atom}") from None

    def idempotent(self, system) -> Process:
        s = as_system(system)
        out = pm.identity(SystemType())
        for a in s:
            out = pm.compose_par(out, self.preleak(a).induced_idempotent)
        return out

    def composite_preleak(self, system) -> Process:
        """Parallel pre-leaks with wires regrouped to ``A1 A2 .. L1 L2 ..``."""
        s = as_system(system)
        pls = [self.preleak(a) for a in s]
        out = pm.identity(SystemType())
        for p in pls:
            out = pm.compose_par(out, p.process)
        sizes = [(1, len(p.leaked)) for p in pls]
        atoms_idx, leak_idx, pos = [], [], 0
        for na, nl in sizes:
            atoms_idx.append(pos)
            leak_idx.extend(range(pos + 1, pos + 1 + nl))
            pos += na + nl
        return pm.permute(out.cod, atoms_idx + leak_idx) @ out

    def project(self, f: Process) -> Process:
        return self.idempotent(f.cod) @ f @ self.idempotent(f.dom)

    def member(self, f: Process, tol: Tolerance = DEFAULT_TOL) -> bool:
        return self.project(f).approx_eq(f, tol)

    def induced_leak(self, system) -> Process:
        """The pre-leak of ``system`` restricted to the new theory; a leak there."""
        s = as_system(system)
        return self.project(self.composite_preleak(s))

    def leak_residual(self, system) -> float:
        """Deviation in the new-theory leak law ``(P * discard) . leak = P``."""
        s = as_system(system)
        leak = self.induced_leak(s)
        leaked = pm.split_prefix(leak, s)
        lhs = pm.compose_par(self.idempotent(s), pm.discard(leaked)) @ leak
        return lhs.distance(self.idempotent(s))

    def is_dephasing(self, tol: Tolerance = DEFAULT_TOL) -> bool:
        """True when every assigned atom is quantum with the complete-dephasing idempotent."""
        return bool(self.assignments) and all(
            isinstance(a, Quantum) and p.induced_idempotent.approx_eq(channels.dephasing(a.d), tol)
            for a, p in self.assignments.items())

    def to_json(self) -> dict:
        return {
            str(a): {
                "leaked": str(p.leaked),
                "idempotent": _matrix_json(p.induced_idempotent.transfer),
                "causal_residual": p.causal_residual,
                "idempotent_residual": p.idempotent_residual,
            }
            for a, p in self.assignments.items()
        }


def _matrix_json(m: np.ndarray):
    if np.allclose(m.imag, 0):
        return m.real.tolist()
    return {"re": m.real.tolist(), "im": m.imag.tolist()}


def project(theory: ConstructedTheory, f: Process) -> Process:
    return theory.project(f)


def member(theory: ConstructedTheory, f: Process, tol: Tolerance = DEFAULT_TOL) -> bool:
    return theory.member(f, tol)


def induced_leak(theory: ConstructedTheory, system) -> Process:
    return theory.induced_leak(system)


# --- the decoherence instance ---------------------------------------------

def dephasing_theory(d: int) -> ConstructedTheory:
    return ConstructedTheory.of(make_preleak(channels.dephasing_copy(d)))


def _classical_twin(system) -> SystemType:
    return SystemType(tuple(Classical(a.hilbert_dim) for a in as_system(system)))


def extract_classical(theory: ConstructedTheory, f: Process,
                      tol: Tolerance = DEFAULT_TOL) -> Process:
    """Classical matrix ``f_kl`` of a member of a dephasing construction.

    Entry ``(k, l)`` is the weight of ``|k><k|`` in ``f(|l><l|)``; composite
    systems use multi-indices in factor order.
    """
    if not theory.is_dephasing(tol):
        raise ValueError("extract_classical needs a dephasing construction")
    if not theory.member(f, tol):
        raise NotAMember("process is not a member of the constructed theory")
    cod, dom = _classical_twin(f.cod), _classical_twin(f.dom)
    return pm.read_diagonal(cod) @ f @ pm.embed(dom)


def embed_classical(m: Process) -> Process:
    """Inverse of :func:`extract_classical`: a classical matrix as a dephased quantum process."""
    return pm.embed(m.cod) @ m @ pm.read_diagonal(m.dom)


# --- generators -----------------------------------------------------------

def block_dephasing_preleak(blocks: Sequence[int]) -> Process:
    """Pre-leak on ``Quantum(sum(blocks))`` recording which block the state is in.

    Coherences inside a block survive; those between blocks are destroyed.
    The leaked system is ``Classical(len(blocks))``.
    """
    d, k = sum(blocks), len(blocks)
    ops, start = [], 0
    for b, size in enumerate(blocks):
        proj = np.zeros((d, d))
        proj[start:start + size, start:start + size] = np.eye(size)
        ops.append(np.kron(proj, np.eye(k)[:, [b]]))
        start += size
    return pm.from_kraus(ops, Quantum(d), SystemType((Quantum(d), Classical(k))))


def block_dephasing_theory(blocks: Sequence[int]) -> ConstructedTheory:
    pre = make_preleak(block_dephasing_preleak(blocks))
    flag = Classical(len(blocks))
    return ConstructedTheory.of(pre, make_preleak(pm.copy(flag)))


def mixture_preleak(atom, c: float, rho: Process | None = None) -> Process:
    """``c * copy + (1 - c) * (rho * id)`` on a classical atom.

    This is the mixed leak with its two outputs exchanged, so the constant
    state lands on the kept wire. Its marginal ``c id + (1 - c) rho . discard``
    is idempotent only for ``c`` in {0, 1}.
    """
    a = single_atom(atom)
    return pm.swap(a, a) @ lk.mixed_leak(a, c, rho)


@dataclass(frozen=True)
class Purification:
    preleak: Process
    kraus: list
    unitary: np.ndarray
    ancilla: Process
    environment: Quantum


def purify_idempotent(p: Process, tol: Tolerance = DEFAULT_TOL) -> Purification:
    """Isometric and unitary dilations of a quantum channel ``P``.

    The pre-leak ``A -> A * E`` applies the Stinespring isometry built from the
    Kraus operators of ``P``; the unitary on ``A * E`` extends it, with the
    ancilla prepared in ``|0><0|``.
    """
    a = single_atom(p.dom)
    if not isinstance(a, Quantum) or p.cod != p.dom:
        raise TypeError("purification needs a quantum channel A -> A")
    if not pm.is_cp(p, tol):
        raise ValueError("process is not completely positive")
    if not pm.is_causal(p, tol):
        raise NotCausal(pm.causal_residual(p))
    ops = pm.kraus_operators(p, tol)
    d, r = a.d, len(ops)
    env = Quantum(r)
    v = np.zeros((d * r, d), dtype=complex)
    for k, op in enumerate(ops):
        v += np.kron(op, np.eye(r)[:, [k]])
    pre = pm.from_kraus([v], a, SystemType((a, env)))
    u = np.zeros((d * r, d * r), dtype=complex)
    cols = np.arange(d) * r
    u[:, cols] = v
    rest = [c for c in range(d * r) if c not in set(cols)]
    if rest:
        u[:, rest] = null_space(v.conj().T)
    return Purification(pre, ops, u, channels.basis_state(env, 0), env)


def stinespring_channel(purification: Purification) -> Process:
    """``(id * discard_E) . U . (id * ancilla)``, which reproduces the purified channel."""
    pur = purification
    a = pur.preleak.dom
    s = a * pur.environment
    u = pm.from_kraus([pur.unitary], s)
    feed = pm.compose_par(pm.identity(a), pur.ancilla)
    return pm.compose_par(pm.identity(a), pm.discard(pur.environment)) @ u @ feed
