"""Adjoin the basis-copying pre-leak to qubits and watch classical probability appear."""
import numpy as np

from ptlab import channels, construction as cons, process as pm
from ptlab.systems import Quantum

theory = cons.dephasing_theory(2)
hadamard = channels.unitary_channel(channels.HADAMARD)
print("Hadamard is a member:", theory.member(hadamard))
projected = theory.project(hadamard)
print("after projection it acts as the stochastic matrix\n",
      cons.extract_classical(theory, projected).transfer.real)

print("induced leak residual:", theory.leak_residual(Quantum(2)))

# Coarser decoherence keeps coherence inside blocks.
for blocks in ([4], [2, 2], [1, 1, 1, 1]):
    th = cons.block_dephasing_theory(blocks)
    print(f"blocks {blocks}: leak residual {th.leak_residual(Quantum(4)):.1e}")

# A mixture of copying and forgetting is only idempotent at the extremes.
for c in (0.0, 0.5, 1.0):
    try:
        cons.make_preleak(cons.mixture_preleak(pm.Classical(3), c))
        print(f"mixture c={c}: valid pre-leak")
    except cons.NotIdempotent as e:
        print(f"mixture c={c}: {e}")

pur = cons.purify_idempotent(channels.dephasing(2))
print("dephasing purified with", len(pur.kraus), "Kraus operators; unitary is unitary:",
      np.allclose(pur.unitary.conj().T @ pur.unitary, np.eye(4)))
