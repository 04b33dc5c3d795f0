import numpy as np

import pytest

from ptlab import channels, process as pm
from ptlab.systems import Classical, Quantum


def test_named_channels_are_channels():
    for f in (channels.dephasing(3), channels.depolarizing(2, 0.5),
              channels.amplitude_damping(0.4), channels.unitary_channel(channels.HADAMARD),
              channels.measurement(2), channels.dephasing_copy(2)):
        assert pm.is_cp(f) and pm.is_causal(f)


def test_measurement_reads_populations():
    rho = pm.density(np.diag([0.25, 0.75]))
    assert (channels.measurement(2) @ rho).approx_eq(pm.distribution([0.25, 0.75]))


def test_preparation_and_controlled_unitaries(rng):
    prep = channels.preparation([channels.pure_state([1, 0]).transfer,
                                 channels.pure_state([1, 1]).transfer])
    assert prep.dom[0] == Classical(2) and prep.cod[0] == Quantum(2)
    assert pm.is_causal(prep)
    cu = channels.controlled_unitaries([np.eye(2), channels.random_unitary(2, rng)])
    assert pm.is_causal(cu) and cu.dom == Classical(2) * Quantum(2)


def test_random_stochastic_columns(rng):
    t = channels.random_stochastic(4, 3, rng)
    assert np.allclose(t.sum(axis=0), 1) and np.all(t >= 0)


def test_random_channel_needs_room(rng):
    with pytest.raises(ValueError):
        channels.random_channel(4, 1, rng, rank=2)
