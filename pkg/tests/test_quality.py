import itertools

import numpy as np
import pytest

from ptlab import channels, leaks as lk, process as pm
from ptlab.quality import loop_value, normalize, quality
from ptlab.systems import Classical, Quantum


@pytest.mark.parametrize("n", [2, 3, 4])
def test_broadcast_scores_one(n):
    q = quality(lk.broadcast(Classical(n)))
    assert q.normalized == pytest.approx(1.0) and q.raw == pytest.approx(n)


def test_constant_scores_zero():
    q = quality(lk.constant_leak(Classical(3), pm.distribution([0.2, 0.3, 0.5])))
    assert q.normalized == pytest.approx(0.0, abs=1e-12)


def test_mixture_matches_enumeration():
    a = Classical(3)
    leak = lk.mixed_leak(a, 0.25)
    q = quality(leak)
    best = -np.inf
    for choice in itertools.product(range(3), repeat=3):
        t = np.zeros((3, 3))
        t[list(choice), np.arange(3)] = 1
        best = max(best, loop_value(pm.classical_map(t), leak))
    assert q.raw == pytest.approx(best, abs=1e-12)
    assert q.normalized == pytest.approx(0.25, abs=1e-9)


def test_classical_leak_quality_bounded(rng):
    for _ in range(20):
        l = pm.classical_map(channels.random_stochastic(3, 3, rng))
        q = quality(lk.classical_leak(l))
        assert -1e-12 <= q.normalized <= 1 + 1e-12
        assert pm.is_causal(q.optimal_restoration)


def test_quantum_identity_leak_on_trivial_leaked_system():
    q = quality(lk.constant_leak(Quantum(2), pm.density(np.eye(2) / 2)))
    assert q.constant_certificate and abs(q.normalized) < 1e-6


def test_quantum_constant_leaks_score_zero(rng):
    for _ in range(5):
        rho = channels.random_density(2, rng)
        q = quality(lk.constant_leak(Quantum(2), rho))
        assert abs(q.normalized) < 1e-6 and q.method == "gradient"


def test_quantum_leak_with_classical_leaked_system():
    # a fair coin leaked next to a qubit
    leak = lk.constant_leak(Quantum(2), pm.distribution([0.5, 0.5]))
    assert abs(quality(leak).normalized) < 1e-6


def test_not_a_leak_raises():
    with pytest.raises(lk.NotALeak):
        quality(channels.dephasing_copy(2))


def test_normalize_degenerate_circle():
    assert normalize(1.0, 1.0) == 0.0
    assert normalize(2.0, 3.0) == 0.5


@pytest.mark.parametrize("d", [2, 3])
def test_channel_search_finds_identity_loop(d):
    from ptlab.quality import _choi_objective, maximize_channel_objective
    g = _choi_objective(pm.identity(Quantum(d)), [d], d)
    val, j = maximize_channel_objective(g, d, d, np.random.default_rng(0), restarts=2)
    assert val == pytest.approx(d * d, abs=1e-6)
    r = pm.from_choi(j, Quantum(d), Quantum(d))
    assert pm.is_cp(r, pm.Tolerance(1e-7, 1e-7)) and pm.causal_residual(r) < 1e-9
