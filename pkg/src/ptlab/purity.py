"""Leak-aware purity of processes.

A process is pure when every dilation of it factors through a leak (the
dilation condition) and leaking before or after it is equivalent (the
commutation condition). For quantum processes this is Kraus rank one; for
classical processes it is the partial-injection support pattern; for mixed
classical-quantum processes it is a partial-injection pattern of blocks, each
of Kraus rank one. The definitional conditions are kept as independent checks
for small dimensions.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import linprog

from . import process as pm
from .process import Process
from .systems import Classical, Quantum, SystemType
from .tensor import DEFAULT_TOL, Tolerance

DESK_SCALE = 4


@dataclass(frozen=True)
class PurityVerdict:
    pure: bool
    classical_form: Optional[tuple] = None      # (pattern {input: output}, r)
    quantum_kraus_rank: Optional[int] = None
    cq_blocks: Optional[list] = None            # [((out, in), kraus rank)]
    violation: Optional[dict] = None
    separable: Optional[bool] = None
    product_residual: Optional[float] = None

    def __bool__(self):
        return self.pure


@dataclass(frozen=True)
class DilationWitness:
    dilation: Process
    witness: Process
    residual: float


def _flat_classical(s: SystemType) -> Classical:
    return Classical(s.carrier_dim)


# --- quantum --------------------------------------------------------------

def kraus_rank(f: Process, tol: Tolerance = DEFAULT_TOL) -> int:
    w = np.linalg.eigvalsh(pm.choi(f))
    top = w.max() if len(w) else 0.0
    if top <= tol.abs_eps:
        return 0
    return int(np.sum(w > tol.rel_eps * top + tol.abs_eps))


def is_pure_quantum(f: Process, tol: Tolerance = DEFAULT_TOL) -> PurityVerdict:
    if not (f.dom.is_quantum and f.cod.is_quantum):
        raise TypeError("is_pure_quantum expects quantum systems only")
    if not pm.is_cp(f, tol):
        raise ValueError("process is not completely positive")
    rank = kraus_rank(f, tol)
    pure = rank <= 1
    violation = None if pure else {"kraus_rank": rank}
    return PurityVerdict(pure, quantum_kraus_rank=rank, violation=violation)


def separation_residual(dilation: Process, f: Process) -> float:
    """Distance of a dilation ``F : A -> B * E`` from the nearest product ``f * rho``.

    ``rho`` is read off by discarding ``B`` and feeding the uniform state, then
    normalising; this is exact whenever ``F`` separates.
    """
    env = pm.split_prefix(dilation, f.cod)
    u = pm.maximally_mixed(f.dom)
    marg = pm.compose_par(pm.discard(f.cod), pm.identity(env)) @ dilation @ u
    weight = (pm.discard(f.cod) @ f @ u).value
    if abs(weight) < 1e-15:
        return dilation.distance(pm.compose_par(f, pm.state(env, np.zeros(env.carrier_dim))))
    rho = (1 / weight) * marg
    return dilation.distance(pm.compose_par(f, rho))


def kraus_dilation(f: Process, mixing: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> Process:
    """Dilation ``A -> B * Quantum(e)`` with Kraus operators ``K'_m = sum_k mixing[m, k] K_k``.

    ``mixing`` must be an isometry (``mixing^dagger mixing = I``) so that
    discarding the environment gives back ``f``.
    """
    ops = pm.kraus_operators(f, tol)
    e = mixing.shape[0]
    dc = ops[0].shape[0]
    v = np.zeros((dc * e, ops[0].shape[1]), dtype=complex)
    for m in range(e):
        km = sum(mixing[m, k] * ops[k] for k in range(len(ops)))
        v += np.kron(km, np.eye(e)[:, [m]])
    return pm.from_kraus([v], f.dom, f.cod * Quantum(e))


# --- classical ------------------------------------------------------------

def _check_nonnegative(f: Process, tol: Tolerance) -> np.ndarray:
    if not (f.dom.is_classical and f.cod.is_classical):
        raise TypeError("expected a classical process")
    t = f.transfer
    if np.abs(t.imag).max(initial=0) > tol.abs_eps or t.real.min(initial=0) < -tol.abs_eps:
        raise ValueError("classical process has negative or complex entries")
    return t.real


def support_pattern(w: np.ndarray, tol: Tolerance = DEFAULT_TOL):
    """``(is_partial_injection, pattern, offending)`` for a nonnegative weight matrix."""
    supp = np.abs(w) > tol.abs_eps
    rows = np.flatnonzero(supp.sum(axis=1) > 1)
    cols = np.flatnonzero(supp.sum(axis=0) > 1)
    pattern = {int(i): int(j) for j, i in zip(*np.nonzero(supp))}
    ok = len(rows) == 0 and len(cols) == 0
    offending = None if ok else {"rows": rows.tolist(), "columns": cols.tolist()}
    return ok, pattern, offending


def classical_pure_form(pattern: dict, r: np.ndarray, n: int, m: int) -> Process:
    """``merge . (bw_dot * r)``, the canonical pure classical process."""
    b = pm.bw_dot(n, m, pattern)
    return pm.merge(Classical(m)) @ pm.compose_par(b, pm.distribution(r))


def is_pure_classical(f: Process, tol: Tolerance = DEFAULT_TOL) -> PurityVerdict:
    t = _check_nonnegative(f, tol)
    ok, pattern, offending = support_pattern(t, tol)
    if not ok:
        return PurityVerdict(False, violation=offending)
    m, n = t.shape
    r = np.zeros(m)
    for i, j in pattern.items():
        r[j] = t[j, i]
    rebuilt = classical_pure_form(pattern, r, n, m)
    err = float(np.abs(rebuilt.transfer - t).max(initial=0))
    if err > tol.abs_eps + tol.rel_eps:
        raise ArithmeticError(f"pure classical form failed to reproduce process ({err:.3g})")
    return PurityVerdict(True, classical_form=(pattern, r))


def stochastic_left_inverse(f: Process) -> Optional[np.ndarray]:
    """A column-stochastic ``l`` with ``l f = I``, or ``None`` if infeasible."""
    t = f.transfer.real
    m, n = t.shape
    # variables l[a, b] (n x m), row-major
    a_eq, b_eq = [], []
    for a in range(n):
        for i in range(n):
            row = np.zeros(n * m)
            row[a * m:(a + 1) * m] = t[:, i]
            a_eq.append(row)
            b_eq.append(1.0 if a == i else 0.0)
    for b in range(m):
        row = np.zeros(n * m)
        row[b::m] = 1
        a_eq.append(row)
        b_eq.append(1.0)
    res = linprog(np.zeros(n * m), A_eq=np.array(a_eq), b_eq=np.array(b_eq),
                  bounds=(0, None), method="highs")
    if res.status != 0:
        return None
    return res.x.reshape(n, m)


def is_injective_function(f: Process, tol: Tolerance = DEFAULT_TOL) -> bool:
    t = f.transfer.real
    ones = np.abs(t - 1) <= tol.abs_eps
    zeros = np.abs(t) <= tol.abs_eps
    if not np.all(ones | zeros):
        return False
    return bool(np.all(ones.sum(axis=0) == 1) and np.all(ones.sum(axis=1) <= 1))


def is_isometry(f: Process, tol: Tolerance = DEFAULT_TOL) -> bool:
    """``f^T f = I``: the transpose undoes ``f``.

    Weaker than having some stochastic left inverse, which also holds for
    maps that spread each input over its own block of outputs.
    """
    t = f.transfer
    gram = t.conj().T @ t
    return bool(np.abs(gram - np.eye(t.shape[1])).max(initial=0) <= tol.abs_eps + tol.rel_eps)


def is_pure_causal_classical(f: Process, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Purity of a causal classical process: an injective function, i.e. an isometry."""
    _check_nonnegative(f, tol)
    if not pm.is_causal(f, tol):
        raise ValueError("process is not causal")
    by_pattern = is_injective_function(f, tol)
    by_isometry = is_isometry(f, tol)
    by_support = is_pure_classical(f, tol).pure
    if not by_pattern == by_isometry == by_support:
        raise ArithmeticError(
            f"purity tests disagree: pattern={by_pattern} isometry={by_isometry} "
            f"support={by_support}")
    return by_pattern


# --- classical-quantum ----------------------------------------------------

def cq_blocks(f: Process) -> dict:
    """Split ``f`` into quantum blocks indexed by (classical output, classical input).

    Classical indices are multi-indices over the classical atoms in order;
    each block maps the quantum atoms of the input to those of the output.
    """
    def parts(s):
        c = [k for k, a in enumerate(s) if isinstance(a, Classical)]
        q = [k for k, a in enumerate(s) if isinstance(a, Quantum)]
        return c, q

    cc, cq = parts(f.cod)
    dc, dq = parts(f.dom)
    nc = len(f.cod)
    t = f.transfer.reshape(f.cod.dims + f.dom.dims)
    order = cc + [nc + k for k in dc] + cq + [nc + k for k in dq]
    t = t.transpose(order)
    c_out = [f.cod[k].n for k in cc]
    c_in = [f.dom[k].n for k in dc]
    q_out = SystemType(tuple(f.cod[k] for k in cq))
    q_in = SystemType(tuple(f.dom[k] for k in dq))
    t = t.reshape(int(np.prod(c_out)), int(np.prod(c_in)), q_out.carrier_dim, q_in.carrier_dim)
    return {(j, i): Process(q_in, q_out, t[j, i])
            for j in range(t.shape[0]) for i in range(t.shape[1])}


def block_weights(f: Process) -> np.ndarray:
    """``w[j, i] = tr f^j_i(I)``; positive exactly on nonzero CP blocks."""
    blocks = cq_blocks(f)
    m = max(j for j, _ in blocks) + 1
    n = max(i for _, i in blocks) + 1
    w = np.zeros((m, n))
    for (j, i), b in blocks.items():
        w[j, i] = (pm.discard(b.cod) @ b @ pm.state(b.dom, pm.discard(b.dom).transfer)).value.real
    return w


def product_form(f: Process):
    """Best ``state . effect`` approximation of ``f``; returns ``(state, effect, residual)``."""
    u, s, vh = np.linalg.svd(f.transfer)
    st = pm.state(f.cod, u[:, 0] * s[0])
    ef = pm.effect(f.dom, vh[0])
    return st, ef, (st @ ef).distance(f)


def is_pure_cq(f: Process, tol: Tolerance = DEFAULT_TOL) -> PurityVerdict:
    if not pm.is_cp(f, tol):
        raise ValueError("process is not completely positive")
    blocks = cq_blocks(f)
    w = block_weights(f)
    ok, pattern, offending = support_pattern(w, tol)
    ranks = []
    impure_blocks = []
    for (j, i), b in sorted(blocks.items()):
        if w[j, i] > tol.abs_eps:
            rk = kraus_rank(b, tol)
            ranks.append(((j, i), rk))
            if rk > 1:
                impure_blocks.append([j, i, rk])
    pure = ok and not impure_blocks
    violation = None
    if not pure:
        violation = {}
        if offending:
            violation["pattern"] = offending
        if impure_blocks:
            violation["impure_blocks"] = impure_blocks
    sep = res = None
    nonempty = not f.dom.is_trivial and not f.cod.is_trivial
    crosses = nonempty and ((f.dom.is_classical and f.cod.is_quantum)
                            or (f.dom.is_quantum and f.cod.is_classical))
    if pure and crosses:
        _, _, res = product_form(f)
        sep = res <= tol.abs_eps + tol.rel_eps
        if not sep:
            raise ArithmeticError(f"pure classical/quantum map is not separable ({res:.3g})")
    return PurityVerdict(pure, quantum_kraus_rank=None, cq_blocks=ranks,
                         violation=violation, separable=sep, product_residual=res)


def is_pure(f: Process, tol: Tolerance = DEFAULT_TOL) -> PurityVerdict:
    """Dispatch on the kinds of atoms involved."""
    if f.dom.is_classical and f.cod.is_classical:
        return is_pure_classical(f, tol)
    if f.dom.is_quantum and f.cod.is_quantum:
        return is_pure_quantum(f, tol)
    return is_pure_cq(f, tol)


# --- definitional checks --------------------------------------------------

def classical_dilation_witness(f: Process, F: Process,
                               tol: Tolerance = DEFAULT_TOL) -> DilationWitness:
    """Factor a classical dilation ``F : A -> B * E`` of ``f`` through copies.

    Builds ``l : A * B -> E`` with ``l[j, (i, k)] = F[(k, j), i] / f[k, i]``
    (uniform where ``f[k, i] = 0``) so that
    ``F = (id_B * l') . (copy_B * id_A) . (f * id_A) . copy_A``.
    """
    env = pm.split_prefix(F, f.cod)
    marg = pm.compose_par(pm.identity(f.cod), pm.discard(env)) @ F
    bound = tol.abs_eps + tol.rel_eps
    if marg.distance(f) > bound:
        raise ValueError(f"F is not a dilation of f ({marg.distance(f):.3g})")
    a, b, e = _flat_classical(f.dom), _flat_classical(f.cod), _flat_classical(env)
    ft = f.transfer.real
    big = F.transfer.real.reshape(b.n, e.n, a.n)               # [k, j, i]
    lt = np.full((e.n, a.n, b.n), 1.0 / e.n)                   # [j, i, k]
    nz = np.abs(ft) > tol.abs_eps                              # [k, i]
    for k, i in zip(*np.nonzero(nz)):
        lt[:, i, k] = big[k, :, i] / ft[k, i]
    l = Process(SystemType((a, b)), e, lt.reshape(e.n, a.n * b.n))
    fc = Process(a, b, f.transfer)
    rebuilt = pm.seq(
        pm.copy(a),
        pm.compose_par(fc, pm.identity(a)),
        pm.compose_par(pm.copy(b), pm.identity(a)),
        pm.compose_par(pm.identity(b), l @ pm.swap(b, a)),
    )
    res = float(np.abs(rebuilt.transfer - F.transfer).max())
    if not pm.is_causal(l, tol):
        raise ArithmeticError("dilation witness is not causal")
    return DilationWitness(F, l, res)


def deterministic_maps(n: int, k: int):
    """All deterministic ``n -> k`` stochastic matrices, then the uniform one."""
    for choice in itertools.product(range(k), repeat=n):
        t = np.zeros((k, n))
        t[list(choice), np.arange(n)] = 1
        yield t
    yield np.full((k, n), 1.0 / k)


def _solve_matching_leak(w: np.ndarray, given: np.ndarray, forward: bool) -> bool:
    """Feasibility of the leak-commutation equations ``mu[x, b] w[b, i] = w[b, i] lam[x, i]``.

    ``forward``: ``given`` is ``lam`` (input side), solve for ``mu``;
    otherwise ``given`` is ``mu`` and we solve for ``lam``.
    """
    m, n = w.shape
    k = given.shape[0]
    cols = m if forward else n
    a_eq, b_eq = [], []
    for b, i in zip(*np.nonzero(w)):
        for x in range(k):
            row = np.zeros(k * cols)
            if forward:
                row[x * cols + b] = w[b, i]
                rhs = w[b, i] * given[x, i]
            else:
                row[x * cols + i] = w[b, i]
                rhs = w[b, i] * given[x, b]
            a_eq.append(row)
            b_eq.append(rhs)
    for c in range(cols):
        row = np.zeros(k * cols)
        row[c::cols] = 1
        a_eq.append(row)
        b_eq.append(1.0)
    res = linprog(np.zeros(k * cols), A_eq=np.array(a_eq), b_eq=np.array(b_eq),
                  bounds=(0, None), method="highs")
    return res.status == 0


def check_leak_commutation(f: Process, tol: Tolerance = DEFAULT_TOL):
    """Decide "leaking before or after ``f`` is equivalent" by linear feasibility.

    For every leak ``(id * lam) . copy`` on the input from a generating set of
    causal ``lam`` (all deterministic maps plus the uniform one), look for a
    causal ``mu`` on the output with ``(f * id) . leak_lam = leak_mu . f``,
    and symmetrically. Linearity in ``lam`` makes deterministic generators
    sufficient. Returns ``(holds, counterexample)``.
    """
    if f.dom.is_classical and f.cod.is_classical:
        w = _check_nonnegative(f, tol).copy()
    else:
        if not pm.is_cp(f, tol):
            raise ValueError("process is not completely positive")
        w = block_weights(f)
    w[np.abs(w) <= tol.abs_eps] = 0.0
    m, n = w.shape
    if max(m, n) > DESK_SCALE:
        raise ValueError(f"classical dimensions {n}->{m} exceed desk scale {DESK_SCALE}")
    k = max(m, n)
    for forward, src in ((True, n), (False, m)):
        for given in deterministic_maps(src, k):
            if not _solve_matching_leak(w, given, forward):
                side = "input" if forward else "output"
                return False, {"leak_side": side, "leak_map": given.tolist()}
    return True, None


def causal_extension(l: Process, pattern: dict, n: int) -> Process:
    """Extend ``l : Classical(m) -> L`` along a partial injection ``Classical(n) -> Classical(m)``.

    Returns causal ``lt : Classical(n) -> L`` that agrees with ``l . bw`` on the
    inputs in the pattern's domain; on the kernel ``J`` of the black/white dot
    (inputs sent nowhere) it prepares the uniform state.
    """
    m = l.dom.carrier_dim
    b = pm.bw_dot(n, m, pattern)
    base = l @ b
    kernel = [i for i in range(n) if i not in pattern]
    fill = np.zeros((1, n))
    fill[0, kernel] = 1
    patch = pm.maximally_mixed(l.cod) @ pm.effect(Classical(n), fill)
    return base + patch


# --- the broadcasting no-go ------------------------------------------------

def broadcast_constant_gap(atom, samples: int = 1000, seed: int = 0) -> tuple[float, float]:
    """``min_rho ||copy - id * rho||_max`` over a grid of causal states, and its exact value.

    The exact minimum is ``1 - 1/n``, attained at the uniform state.
    """
    n = atom.n
    rng = np.random.default_rng(seed)
    if n == 2:
        p = np.linspace(0, 1, samples)
        grid = np.stack([p, 1 - p], axis=1)
    else:
        grid = np.vstack([rng.dirichlet(np.ones(n), size=samples - n - 1),
                          np.eye(n), np.full((1, n), 1.0 / n)])
    cp = pm.copy(atom)
    best = min(cp.distance(pm.compose_par(pm.identity(atom), pm.distribution(r))) for r in grid)
    return best, 1 - 1 / n


def identity_impurity_nogo(atom, tol: Tolerance = DEFAULT_TOL, samples: int = 1000) -> bool:
    """Exhibit that broadcasting is a dilation of the wire that never separates.

    Returns ``True`` when the gap to every constant leak on the grid stays
    above tolerance. Quantum systems have no broadcasting, hence ``False``.
    """
    if not isinstance(atom, Classical) or atom.n == 1:
        return False
    gap, _ = broadcast_constant_gap(atom, samples)
    return gap > tol.abs_eps + tol.rel_eps
