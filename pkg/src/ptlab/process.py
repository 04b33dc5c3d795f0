"""Processes as transfer matrices, plus the structural processes of the theory.

A process ``f : A -> B`` is stored as a ``carrier_dim(B) x carrier_dim(A)``
complex matrix acting on carrier vectors. Classical atoms carry probability
vectors, quantum atoms carry row-major vectorized operators, composites carry
Kronecker products in factor order. Sequential composition is therefore a
matrix product and parallel composition a Kronecker product, uniformly for
classical, quantum and mixed systems.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Mapping, Sequence

import numpy as np

from . import tensor
from .systems import TRIVIAL, Classical, Quantum, SystemType, as_system, single_atom
from .tensor import DEFAULT_TOL, Tolerance


class TypeMismatch(ValueError):
    """Raised when wires do not line up in a composite."""


@dataclass(frozen=True, eq=False)
class Process:
    dom: SystemType
    cod: SystemType
    transfer: np.ndarray

    def __post_init__(self):
        dom, cod = as_system(self.dom), as_system(self.cod)
        t = tensor.cmatrix(self.transfer)
        if t.shape != (cod.carrier_dim, dom.carrier_dim):
            raise ValueError(
                f"transfer of shape {t.shape} does not match {dom} -> {cod} "
                f"(expected {(cod.carrier_dim, dom.carrier_dim)})"
            )
        t.setflags(write=False)
        object.__setattr__(self, "dom", dom)
        object.__setattr__(self, "cod", cod)
        object.__setattr__(self, "transfer", t)

    @property
    def is_state(self) -> bool:
        return self.dom.is_trivial

    @property
    def is_effect(self) -> bool:
        return self.cod.is_trivial

    @property
    def is_number(self) -> bool:
        return self.dom.is_trivial and self.cod.is_trivial

    @property
    def value(self) -> complex:
        if not self.is_number:
            raise ValueError("only numbers have a scalar value")
        return complex(self.transfer[0, 0])

    def __matmul__(self, other: "Process") -> "Process":
        return compose_seq(self, other)

    def __add__(self, other: "Process") -> "Process":
        if self.dom != other.dom or self.cod != other.cod:
            raise TypeMismatch(f"cannot add {self.dom}->{self.cod} and {other.dom}->{other.cod}")
        return Process(self.dom, self.cod, tensor.add(self.transfer, other.transfer))

    def __rmul__(self, c) -> "Process":
        return Process(self.dom, self.cod, tensor.scale(c, self.transfer))

    def __neg__(self):
        return -1 * self

    def __sub__(self, other):
        return self + (-other)

    def approx_eq(self, other: "Process", tol: Tolerance = DEFAULT_TOL) -> bool:
        return (self.dom == other.dom and self.cod == other.cod
                and tensor.approx_eq(self.transfer, other.transfer, tol))

    def distance(self, other: "Process") -> float:
        """Max-norm distance between transfers of equally typed processes."""
        if self.dom != other.dom or self.cod != other.cod:
            raise TypeMismatch("processes have different types")
        return tensor.max_abs_diff(self.transfer, other.transfer)

    def __repr__(self):
        return f"Process({self.dom} -> {self.cod}, shape={self.transfer.shape})"


def number(c: complex) -> Process:
    return Process(TRIVIAL, TRIVIAL, [[c]])


def state(system, vector) -> Process:
    """A state from a carrier vector (probabilities and/or vectorized operators)."""
    s = as_system(system)
    v = np.asarray(vector, dtype=complex).reshape(-1, 1)
    return Process(TRIVIAL, s, v)


def effect(system, row) -> Process:
    s = as_system(system)
    return Process(s, TRIVIAL, np.asarray(row, dtype=complex).reshape(1, -1))


def density(rho) -> Process:
    """Quantum state from a density operator."""
    rho = np.asarray(rho, dtype=complex)
    return state(Quantum(rho.shape[0]), rho.reshape(-1))


def distribution(p) -> Process:
    """Classical state from a probability vector."""
    p = np.asarray(p, dtype=float)
    return state(Classical(len(p)), p)


def classical_map(matrix, dom=None, cod=None) -> Process:
    """Process between classical systems from a (cod x dom) matrix."""
    m = np.asarray(matrix)
    dom = Classical(m.shape[1]) if dom is None else dom
    cod = Classical(m.shape[0]) if cod is None else cod
    return Process(dom, cod, m)


def identity(system) -> Process:
    s = as_system(system)
    return Process(s, s, np.eye(s.carrier_dim))


def compose_seq(g: Process, f: Process) -> Process:
    """``g . f``: first ``f``, then ``g``."""
    if f.cod != g.dom:
        raise TypeMismatch(f"cannot compose: output {f.cod} does not match input {g.dom}")
    return Process(f.dom, g.cod, tensor.matmul(g.transfer, f.transfer))


def compose_par(f: Process, g: Process) -> Process:
    return Process(f.dom * g.dom, f.cod * g.cod, tensor.kron(f.transfer, g.transfer))


def seq(*fs: Process) -> Process:
    """Sequential composite written left to right in diagram order: ``seq(f, g) = g . f``."""
    out = fs[0]
    for f in fs[1:]:
        out = compose_seq(f, out)
    return out


def par(*fs: Process) -> Process:
    out = fs[0]
    for f in fs[1:]:
        out = compose_par(out, f)
    return out


def _atom_discard(atom) -> np.ndarray:
    if isinstance(atom, Classical):
        return np.ones(atom.n)
    return np.eye(atom.d).reshape(-1)


def discard(system) -> Process:
    s = as_system(system)
    row = np.ones(1)
    for a in s:
        row = np.kron(row, _atom_discard(a))
    return effect(s, row)


def causal_residual(f: Process) -> float:
    """Max deviation in ``discard . f = discard``."""
    return tensor.max_abs_diff((discard(f.cod) @ f).transfer, discard(f.dom).transfer)


def is_causal(f: Process, tol: Tolerance = DEFAULT_TOL) -> bool:
    return tensor.approx_eq((discard(f.cod) @ f).transfer, discard(f.dom).transfer, tol)


def maximally_mixed(system) -> Process:
    """The uniform causal state: uniform distribution / normalized identity."""
    s = as_system(system)
    d = discard(s).transfer.reshape(-1)
    return state(s, d / d.sum())


# --- wire bookkeeping -----------------------------------------------------

def permute(system, perm: Sequence[int]) -> Process:
    """Reorder atoms: output atom ``k`` is input atom ``perm[k]``."""
    s = as_system(system)
    perm = list(perm)
    if sorted(perm) != list(range(len(s))):
        raise ValueError(f"not a permutation of {len(s)} atoms: {perm}")
    out = SystemType(tuple(s.factors[p] for p in perm))
    d = s.carrier_dim
    if not s.factors:
        return identity(s)
    src = np.arange(d).reshape(s.dims).transpose(perm).ravel()
    t = np.zeros((d, d))
    t[np.arange(d), src] = 1
    return Process(s, out, t)


def swap(a, b) -> Process:
    """Exchange two (possibly composite) systems: ``A * B -> B * A``."""
    a, b = as_system(a), as_system(b)
    na, nb = len(a), len(b)
    return permute(a * b, list(range(na, na + nb)) + list(range(na)))


def split_prefix(f: Process, prefix) -> SystemType:
    """Return ``L`` such that ``f.cod == prefix * L``."""
    prefix = as_system(prefix)
    k = len(prefix)
    if f.cod.factors[:k] != prefix.factors:
        raise TypeMismatch(f"codomain {f.cod} does not start with {prefix}")
    return f.cod[k:]


# --- cups, caps, feedback -------------------------------------------------

def cup(atom) -> Process:
    """Unnormalized perfectly correlated state (classical) / Bell state (quantum)."""
    a = single_atom(atom)
    n = a.dim
    v = np.zeros(n * n)
    v[np.arange(n) * (n + 1)] = 1
    return state(SystemType((a, a)), v)


def cap(atom) -> Process:
    a = single_atom(atom)
    c = cup(a)
    return effect(c.cod, c.transfer.T)


def bell_state(atom) -> Process:
    """The causal normalisation ``cup / D`` with ``D = discard . cup``."""
    c = cup(atom)
    norm = (discard(c.cod) @ c).value.real
    return (1 / norm) * c


def trace_loop(f: Process, atom: int) -> Process:
    """Feed output atom ``atom`` back into input atom ``atom`` (0-based)."""
    if not (0 <= atom < len(f.dom) and atom < len(f.cod)):
        raise TypeMismatch(f"atom index {atom} out of range for {f.dom} -> {f.cod}")
    if f.dom[atom] != f.cod[atom]:
        raise TypeMismatch(f"cannot loop {f.cod[atom]} into {f.dom[atom]}")
    nc = len(f.cod)
    t = f.transfer.reshape(f.cod.dims + f.dom.dims)
    t = np.trace(t, axis1=atom, axis2=nc + atom)
    dom = SystemType(f.dom.factors[:atom] + f.dom.factors[atom + 1:])
    cod = SystemType(f.cod.factors[:atom] + f.cod.factors[atom + 1:])
    return Process(dom, cod, t.reshape(cod.carrier_dim, dom.carrier_dim))


def circle(atom) -> float:
    """Value of the feedback loop on a plain wire."""
    return trace_loop(identity(atom), 0).value.real


# --- spiders and black/white dots ----------------------------------------

def _diag_index(n: int, legs: int) -> np.ndarray:
    step = sum(n ** k for k in range(legs))
    return np.arange(n) * step


def spider(atom, m_in: int, m_out: int) -> Process:
    a = single_atom(atom)
    if not isinstance(a, Classical):
        raise TypeError("spiders are defined on classical atoms")
    if m_in == 0 and m_out == 0:
        raise ValueError("the 0-legged spider is a bare number; build it explicitly")
    n = a.n
    t = np.zeros((n ** m_out, n ** m_in))
    t[_diag_index(n, m_out), _diag_index(n, m_in)] = 1
    return Process(SystemType((a,) * m_in), SystemType((a,) * m_out), t)


def copy(atom) -> Process:
    """Classical broadcasting ``x -> (x, x)``."""
    return spider(atom, 1, 2)


def merge(atom) -> Process:
    """Upside-down broadcasting ``(x, y) -> [x == y] x``."""
    return spider(atom, 2, 1)


def bw_dot(n: int, m: int, pattern: Mapping[int, int]) -> Process:
    """0/1 matrix ``Classical(n) -> Classical(m)`` of a partial injection ``i -> pattern[i]``."""
    targets = list(pattern.values())
    if len(set(targets)) != len(targets):
        raise ValueError(f"pattern is not injective: {dict(pattern)}")
    t = np.zeros((m, n))
    for i, j in pattern.items():
        if not (0 <= i < n and 0 <= j < m):
            raise ValueError(f"pattern entry {i}->{j} out of range for {n}->{m}")
        t[j, i] = 1
    return Process(Classical(n), Classical(m), t)


def spider_link_residuals(b: Process) -> tuple[float, float]:
    """Residuals of the two laws linking a black/white dot to copy spiders.

    The first law (dot commutes with copying) holds iff every column has at
    most a single one; the second (dot commutes with merging) iff every row does.
    """
    dom, cod = single_atom(b.dom), single_atom(b.cod)
    r1 = (copy(cod) @ b).distance(compose_par(b, b) @ copy(dom))
    r2 = (b @ merge(dom)).distance(merge(cod) @ compose_par(b, b))
    return r1, r2


# --- quantum views and complete positivity -------------------------------

def _embed_atom(atom, read: bool) -> np.ndarray:
    n = atom.hilbert_dim
    if isinstance(atom, Quantum):
        return np.eye(n * n)
    t = np.zeros((n * n, n))
    t[np.arange(n) * (n + 1), np.arange(n)] = 1
    return t.T if read else t


def quantized(system) -> SystemType:
    """The system with every classical atom replaced by a quantum one of equal dimension."""
    return SystemType(tuple(Quantum(a.hilbert_dim) for a in as_system(system)))


def embed(system) -> Process:
    """Classical atoms into diagonal density operators; quantum atoms untouched."""
    s = as_system(system)
    t = np.ones((1, 1))
    for a in s:
        t = np.kron(t, _embed_atom(a, read=False))
    return Process(s, quantized(s), t)


def read_diagonal(system) -> Process:
    """Inverse of :func:`embed` after dephasing the classical atoms."""
    s = as_system(system)
    t = np.ones((1, 1))
    for a in s:
        t = np.kron(t, _embed_atom(a, read=True))
    return Process(quantized(s), s, t)


def quantum_view(f: Process) -> Process:
    """``f`` as a map between fully quantum systems (classical wires dephased)."""
    return embed(f.cod) @ f @ read_diagonal(f.dom)


def _global_order(t: np.ndarray, cod_h: Sequence[int], dom_h: Sequence[int]) -> np.ndarray:
    """Reorder a per-atom vectorized transfer into whole-space vectorization."""
    kc, kd = len(cod_h), len(dom_h)
    shape = [x for h in cod_h for x in (h, h)] + [x for h in dom_h for x in (h, h)]
    t = t.reshape(shape)
    axes = ([2 * k for k in range(kc)] + [2 * k + 1 for k in range(kc)]
            + [2 * kc + 2 * k for k in range(kd)] + [2 * kc + 2 * k + 1 for k in range(kd)])
    dc, dd = prod(cod_h), prod(dom_h)
    return t.transpose(axes).reshape(dc * dc, dd * dd)


def _atom_order(t: np.ndarray, cod_h: Sequence[int], dom_h: Sequence[int]) -> np.ndarray:
    kc, kd = len(cod_h), len(dom_h)
    shape = list(cod_h) + list(cod_h) + list(dom_h) + list(dom_h)
    t = t.reshape(shape)
    axes = ([x for k in range(kc) for x in (k, kc + k)]
            + [2 * kc + x for k in range(kd) for x in (k, kd + k)])
    return t.transpose(axes).reshape(prod(cod_h) ** 2, prod(dom_h) ** 2)


def _hdims(s: SystemType) -> list[int]:
    return [a.hilbert_dim for a in s]


def choi(f: Process) -> np.ndarray:
    """Choi matrix ``J[(i,a),(j,b)] = <a| f(|i><j|) |b>`` of the quantum view of ``f``."""
    q = quantum_view(f)
    ch, dh = _hdims(f.cod), _hdims(f.dom)
    dc, dd = prod(ch), prod(dh)
    g = _global_order(q.transfer, ch, dh).reshape(dc, dc, dd, dd)
    return g.transpose(2, 0, 3, 1).reshape(dd * dc, dd * dc)


def from_choi(j: np.ndarray, dom, cod) -> Process:
    dom, cod = as_system(dom), as_system(cod)
    ch, dh = _hdims(cod), _hdims(dom)
    dc, dd = prod(ch), prod(dh)
    g = np.asarray(j).reshape(dd, dc, dd, dc).transpose(1, 3, 0, 2).reshape(dc * dc, dd * dd)
    q = Process(quantized(dom), quantized(cod), _atom_order(g, ch, dh))
    return read_diagonal(cod) @ q @ embed(dom)


def from_kraus(ops: Sequence, dom, cod=None) -> Process:
    """Process ``rho -> sum_k K rho K^dagger``; classical wires are read off the diagonal."""
    dom = as_system(dom)
    cod = dom if cod is None else as_system(cod)
    dc, dd = prod(_hdims(cod)), prod(_hdims(dom))
    g = np.zeros((dc * dc, dd * dd), dtype=complex)
    for k in ops:
        k = np.asarray(k, dtype=complex)
        if k.shape != (dc, dd):
            raise ValueError(f"Kraus operator of shape {k.shape}, expected {(dc, dd)}")
        g += np.kron(k, k.conj())
    q = Process(quantized(dom), quantized(cod), _atom_order(g, _hdims(cod), _hdims(dom)))
    return read_diagonal(cod) @ q @ embed(dom)


def kraus_operators(f: Process, tol: Tolerance = DEFAULT_TOL) -> list[np.ndarray]:
    """Kraus operators of a CP process from the eigendecomposition of its Choi matrix."""
    j = choi(f)
    w, v = tensor.eig_hermitian(j, tol)
    dc, dd = prod(_hdims(f.cod)), prod(_hdims(f.dom))
    cutoff = tol.abs_eps + tol.rel_eps * max(abs(w[0]) if len(w) else 0.0, 1.0)
    if len(w) and w[-1] < -cutoff:
        raise ValueError("process is not completely positive")
    ops = []
    for lam, vec in zip(w, v.T):
        if lam > cutoff:
            ops.append(np.sqrt(lam) * vec.reshape(dd, dc).T)
    return ops


def cp_residual(f: Process) -> float:
    """Distance of the Choi matrix from the PSD cone (0 when CP)."""
    j = choi(f)
    herm_err = tensor.max_abs_diff(j, j.conj().T)
    w = np.linalg.eigvalsh((j + j.conj().T) / 2)
    return max(herm_err, float(max(0.0, -w.min())) if len(w) else 0.0)


def is_cp(f: Process, tol: Tolerance = DEFAULT_TOL) -> bool:
    j = choi(f)
    if not tensor.is_hermitian(j, tol):
        return False
    w = np.linalg.eigvalsh((j + j.conj().T) / 2)
    scale = max(1.0, float(np.abs(w).max()) if len(w) else 1.0)
    return bool(w.min() >= -(tol.abs_eps + tol.rel_eps * scale))
