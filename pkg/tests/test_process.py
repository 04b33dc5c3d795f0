import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ptlab import channels, process as pm
from ptlab.process import Process, TypeMismatch
from ptlab.systems import Classical, Quantum, SystemType

atoms = st.one_of(st.builds(Classical, st.integers(1, 3)), st.builds(Quantum, st.integers(1, 2)))


def random_process(dom, cod, seed):
    rng = np.random.default_rng(seed)
    dom, cod = SystemType((dom,)), SystemType((cod,))
    return Process(dom, cod, rng.normal(size=(cod.carrier_dim, dom.carrier_dim)))


def test_carrier_dimensions():
    s = Classical(3) * Quantum(2)
    assert s.carrier_dim == 12 and str(s) == "classical(3) * quantum(2)"
    assert str(SystemType()) == "one"


def test_composition_type_checks():
    with pytest.raises(TypeMismatch):
        pm.identity(Classical(2)) @ pm.identity(Classical(3))


@settings(max_examples=40, deadline=None)
@given(atoms, atoms, atoms, atoms, st.integers(0, 10**6))
def test_interchange_law(a, b, c, d, seed):
    f, g = random_process(a, b, seed), random_process(b, c, seed + 1)
    h, k = random_process(c, d, seed + 2), random_process(d, a, seed + 3)
    lhs = pm.compose_par(g, k) @ pm.compose_par(f, h)
    rhs = pm.compose_par(g @ f, k @ h)
    assert lhs.approx_eq(rhs)


@settings(max_examples=20, deadline=None)
@given(atoms)
def test_yanking_and_circle(a):
    snake = pm.compose_par(pm.cap(a), pm.identity(a)) @ pm.compose_par(pm.identity(a), pm.cup(a))
    assert snake.approx_eq(pm.identity(a))
    assert pm.circle(a) == a.dim


def test_discard_cup_normalisation():
    assert (pm.discard(Classical(3) * Classical(3)) @ pm.cup(Classical(3))).value == 3
    assert (pm.discard(Quantum(2) * Quantum(2)) @ pm.cup(Quantum(2))).value == 2
    bell = pm.bell_state(Quantum(2))
    assert pm.is_causal(bell)


def test_cap_not_causal_and_identity_causal():
    assert not pm.is_causal(pm.cap(Classical(2)))
    assert pm.is_causal(pm.identity(Quantum(2) * Classical(2)))


def test_swap_and_permute():
    a, q = Classical(3), Quantum(2)
    s = pm.swap(a, q)
    assert s.cod == q * a
    assert (pm.swap(q, a) @ s).approx_eq(pm.identity(a * q))
    x, y = pm.distribution([0.2, 0.3, 0.5]), pm.density(np.diag([0.9, 0.1]))
    assert (s @ pm.compose_par(x, y)).approx_eq(pm.compose_par(y, x))


def test_trace_loop_of_swap_is_identity():
    a = Classical(3)
    assert pm.trace_loop(pm.swap(a, a), 0).approx_eq(pm.identity(a))
    with pytest.raises(TypeMismatch):
        pm.trace_loop(pm.identity(a), 1)


def test_spiders():
    a = Classical(2)
    assert (pm.compose_par(pm.identity(a), pm.discard(a)) @ pm.copy(a)).approx_eq(pm.identity(a))
    assert (pm.merge(a) @ pm.copy(a)).approx_eq(pm.identity(a))
    assert (pm.spider(a, 1, 2) @ pm.spider(a, 3, 1)).approx_eq(pm.spider(a, 3, 2))
    with pytest.raises(TypeError):
        pm.spider(Quantum(2), 1, 2)
    with pytest.raises(ValueError):
        pm.spider(a, 0, 0)


def test_bw_dot_pattern():
    b = pm.bw_dot(2, 3, {0: 0, 1: 2})
    assert np.array_equal(b.transfer.real, [[1, 0], [0, 0], [0, 1]])
    with pytest.raises(ValueError):
        pm.bw_dot(2, 3, {0: 1, 1: 1})


def test_cp_checks():
    assert pm.is_cp(channels.dephasing(2)) and pm.is_causal(channels.dephasing(2))
    t = channels.transpose_map(2)
    assert not pm.is_cp(t)
    assert pm.cp_residual(t) == pytest.approx(1.0)


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(1, 3), st.integers(0, 10**6))
def test_choi_kraus_round_trip(din, dout, rank, seed):
    rank = max(rank, -(-din // dout))
    f = channels.random_channel(din, dout, np.random.default_rng(seed), rank=rank)
    assert pm.is_cp(f) and pm.is_causal(f)
    assert pm.from_choi(pm.choi(f), f.dom, f.cod).approx_eq(f)
    assert pm.from_kraus(pm.kraus_operators(f), f.dom, f.cod).approx_eq(f)
    assert len(pm.kraus_operators(f)) <= rank


def test_quantum_view_of_classical_map():
    m = pm.classical_map([[0.3, 1.0], [0.7, 0.0]])
    assert pm.is_cp(m)
    assert (pm.read_diagonal(m.cod) @ pm.quantum_view(m) @ pm.embed(m.dom)).approx_eq(m)


def test_process_is_immutable():
    f = pm.identity(Classical(2))
    with pytest.raises(ValueError):
        f.transfer[0, 0] = 5
