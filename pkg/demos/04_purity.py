"""Which processes are pure, meaning every leak commutes past them?"""
import numpy as np

from ptlab import channels, process as pm, purity

for name, f in [("hadamard", channels.unitary_channel(channels.HADAMARD)),
                ("dephasing", channels.dephasing(2)),
                ("depolarizing 0.5", channels.depolarizing(2, 0.5)),
                ("amplitude damping 0.3", channels.amplitude_damping(0.3))]:
    print(f"{name:22s} Kraus rank {purity.kraus_rank(f)}  pure {purity.is_pure(f).pure}")

sub = pm.classical_map([[0.5, 0.0], [0.0, 0.0], [0.0, 0.2]])
v = purity.is_pure(sub)
print("weighted partial injection pure:", v.pure, "pattern", v.classical_form[0])
noise = pm.classical_map(np.full((2, 2), 0.5))
print("uniform noise pure:", purity.is_pure(noise).pure, "violation", purity.is_pure(noise).violation)
print("leak commutation decides the same:", purity.check_leak_commutation(noise)[0])

spread = pm.classical_map([[0.5, 0.0], [0.5, 0.0], [0.0, 1.0]])
print("spreading map has a stochastic left inverse:",
      purity.stochastic_left_inverse(spread) is not None,
      "yet is pure:", purity.is_pure_causal_classical(spread))

print("qubit measurement pure:", purity.is_pure(channels.measurement(2)).pure)
