import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ptlab import channels, leaks as lk, process as pm, purity
from ptlab.systems import Classical, Quantum


@pytest.mark.parametrize("f, rank", [
    (channels.unitary_channel(channels.HADAMARD), 1),
    (channels.dephasing(2), 2),
    (channels.depolarizing(2, 0.5), 4),
    (channels.amplitude_damping(0.5), 2),
])
def test_kraus_ranks(f, rank):
    assert purity.kraus_rank(f) == rank
    assert purity.is_pure_quantum(f).pure == (rank == 1)


def test_permutations_are_pure():
    for perm in itertools.permutations(range(3)):
        v = purity.is_pure_classical(pm.classical_map(np.eye(3)[list(perm)]))
        assert v.pure and np.allclose(v.classical_form[1], 1)


def test_weighted_diagonal_is_pure():
    v = purity.is_pure_classical(pm.classical_map([[0.5, 0], [0, 0.2]]))
    pattern, r = v.classical_form
    assert v.pure and pattern == {0: 0, 1: 1} and np.allclose(r, [0.5, 0.2])


def test_uniform_noise_is_impure():
    v = purity.is_pure_classical(pm.classical_map(np.full((2, 2), 0.5)))
    assert not v.pure and v.violation == {"rows": [0, 1], "columns": [0, 1]}


def test_negative_entries_rejected():
    with pytest.raises(ValueError):
        purity.is_pure_classical(pm.classical_map([[1, -0.1], [0, 1]]))


def test_causal_classical_purity():
    assert purity.is_pure_causal_classical(pm.classical_map([[1, 0], [0, 0], [0, 1]]))
    assert purity.is_pure_causal_classical(pm.identity(Classical(3)))
    assert not purity.is_pure_causal_classical(pm.classical_map(np.full((2, 2), 0.5)))
    with pytest.raises(ValueError):
        purity.is_pure_causal_classical(pm.classical_map([[0.5, 0], [0, 0.5]]))


def test_left_invertible_but_spreading_map_is_impure():
    f = pm.classical_map([[0.5, 0], [0.5, 0], [0, 1]])
    assert purity.stochastic_left_inverse(f) is not None
    assert not purity.is_isometry(f)
    assert not purity.is_pure_causal_classical(f)
    assert not purity.check_leak_commutation(f)[0]


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 10**6))
def test_support_criterion_matches_leak_commutation(m, n, seed):
    rng = np.random.default_rng(seed)
    t = rng.random((m, n)) * (rng.random((m, n)) < 0.5)
    f = pm.classical_map(t)
    assert purity.is_pure_classical(f).pure == purity.check_leak_commutation(f)[0]


def test_leak_commutation_counterexample_for_noise():
    holds, cex = purity.check_leak_commutation(pm.classical_map(np.full((2, 2), 0.5)))
    assert not holds and cex["leak_side"] in ("input", "output")


def test_leak_commutation_desk_scale():
    with pytest.raises(ValueError):
        purity.check_leak_commutation(pm.identity(Classical(5)))


def test_cq_measurement_impure_and_controlled_unitaries_pure(rng):
    assert not purity.is_pure(channels.measurement(2)).pure
    cu = channels.controlled_unitaries([np.eye(2), channels.random_unitary(2, rng)])
    assert purity.is_pure(cu).pure


def test_prepare_then_discard_is_pure_and_separable():
    f = channels.pure_state([1, 1j]) @ pm.effect(Classical(2), [0, 0.4])
    v = purity.is_pure_cq(f)
    assert v.pure and v.separable and v.product_residual < 1e-12


def test_cq_blocks_of_measurement():
    w = purity.block_weights(channels.measurement(2))
    assert np.allclose(w, [[1], [1]])


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(1, 3), st.integers(0, 10**6))
def test_dilation_witness(na, nb, ne, seed):
    rng = np.random.default_rng(seed)
    t = channels.random_stochastic(nb * ne, na, rng)
    big = pm.Process(Classical(na), Classical(nb) * Classical(ne), t)
    f = pm.compose_par(pm.identity(Classical(nb)), pm.discard(Classical(ne))) @ big
    w = purity.classical_dilation_witness(f, big)
    assert w.residual < 1e-9 and pm.is_causal(w.witness)


def test_kraus_dilation_separates_for_pure():
    u = channels.unitary_channel(channels.HADAMARD)
    d = purity.kraus_dilation(u, np.eye(1))
    assert purity.separation_residual(d, u) < 1e-12


def test_causal_extension():
    l = pm.classical_map(channels.random_stochastic(2, 2, np.random.default_rng(0)))
    ext = purity.causal_extension(l, {0: 1, 2: 0}, 3)
    assert pm.is_causal(ext)
    assert np.allclose(ext.transfer[:, 0], l.transfer[:, 1])
    assert np.allclose(ext.transfer[:, 1], [0.5, 0.5])


def test_broadcasting_nogo():
    gap, exact = purity.broadcast_constant_gap(Classical(2))
    assert gap >= 0.5 and exact == 0.5
    gap3, exact3 = purity.broadcast_constant_gap(Classical(3))
    assert gap3 >= exact3 - 1e-12
    assert purity.identity_impurity_nogo(Classical(2))
    assert not purity.identity_impurity_nogo(Quantum(2))


def test_broadcast_is_not_constant():
    b = lk.broadcast(Classical(2))
    assert lk.is_leak(b).kind_name != "Constant"
