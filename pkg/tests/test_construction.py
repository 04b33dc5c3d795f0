import numpy as np
import pytest

from ptlab import channels, construction as cons, leaks as lk, process as pm
from ptlab.systems import Classical, Quantum


def test_dephasing_extracts_hadamard():
    th = cons.dephasing_theory(2)
    h = th.project(channels.unitary_channel(channels.HADAMARD))
    assert np.allclose(cons.extract_classical(th, h).transfer, [[0.5, 0.5], [0.5, 0.5]])


def test_amplitude_damping_extracts_to_reset():
    th = cons.dephasing_theory(2)
    f = th.project(channels.amplitude_damping(1.0))
    assert np.allclose(cons.extract_classical(th, f).transfer, [[1, 1], [0, 0]])


def test_membership():
    th = cons.dephasing_theory(2)
    assert not th.member(channels.unitary_channel(channels.HADAMARD))
    assert th.member(pm.discard(Quantum(2)))
    assert th.member(channels.dephasing(2))
    with pytest.raises(cons.NotAMember):
        cons.extract_classical(th, channels.unitary_channel(channels.HADAMARD))


def test_induced_leak_is_copy():
    th = cons.dephasing_theory(3)
    leak = th.induced_leak(Quantum(3))
    assert th.leak_residual(Quantum(3)) < 1e-12
    copy3 = cons.embed_classical(pm.copy(Classical(3)))
    assert cons.extract_classical(
        cons.ConstructedTheory.of(th.preleak(Quantum(3))), leak).approx_eq(pm.copy(Classical(3)))
    assert leak.approx_eq(copy3)


@pytest.mark.parametrize("blocks", [[4], [2, 2], [1, 1, 1, 1], [3, 1]])
def test_block_dephasing(blocks):
    th = cons.block_dephasing_theory(blocks)
    assert th.leak_residual(Quantum(4)) < 1e-9


def test_mixture_preleak_idempotent_only_at_extremes():
    a = Classical(3)
    for c in (0.0, 1.0):
        cons.make_preleak(cons.mixture_preleak(a, c))
    with pytest.raises(cons.NotIdempotent) as info:
        cons.make_preleak(cons.mixture_preleak(a, 0.5))
    assert info.value.residual > 0.1


def test_non_causal_preleak_rejected():
    with pytest.raises(cons.NotCausal):
        cons.make_preleak(2 * pm.copy(Classical(2)))


def test_leak_gives_identity_construction(rng):
    pre = cons.make_preleak(lk.mixed_leak(Classical(2), 0.3))
    assert pre.induced_idempotent.approx_eq(pm.identity(Classical(2)))
    th = cons.ConstructedTheory.of(pre)
    f = pm.classical_map(channels.random_stochastic(2, 2, rng))
    assert th.member(f)


def test_unassigned_atom():
    th = cons.dephasing_theory(2)
    with pytest.raises(cons.UnassignedAtom):
        th.idempotent(Classical(2))


def test_composite_preleak_ordering():
    th = cons.ConstructedTheory.of(cons.make_preleak(channels.dephasing_copy(2)),
                                   cons.make_preleak(pm.copy(Classical(3))))
    s = Quantum(2) * Classical(3)
    p = th.composite_preleak(s)
    assert p.cod == Quantum(2) * Classical(3) * Quantum(2) * Classical(3)
    assert th.leak_residual(s) < 1e-12


def test_coassociativity():
    assert cons.is_coassociative(channels.dephasing_copy(2))
    assert cons.is_coassociative(pm.copy(Classical(3)))


def test_purification():
    p = channels.dephasing(2)
    pur = cons.purify_idempotent(p)
    assert len(pur.kraus) == 2
    u = pur.unitary
    assert np.allclose(u.conj().T @ u, np.eye(u.shape[0]))
    assert cons.stinespring_channel(pur).approx_eq(p)
    pre = cons.make_preleak(pur.preleak)
    assert pre.induced_idempotent.approx_eq(p)


def test_to_json_shape():
    data = cons.dephasing_theory(2).to_json()
    assert set(data) == {"quantum(2)"} and data["quantum(2)"]["leaked"] == "quantum(2)"
