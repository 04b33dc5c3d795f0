"""How much does a leak reveal? Broadcast scores 1, constant leaks 0, mixtures in between."""
from ptlab import channels, leaks as lk
from ptlab.quality import quality
from ptlab.systems import Classical, Quantum

for n in (2, 3, 4):
    for c in (0.0, 0.25, 0.5, 1.0):
        q = quality(lk.mixed_leak(Classical(n), c))
        print(f"n={n} c={c:<4} raw={q.raw:.4f} circle={q.circle:.0f} normalized={q.normalized:.4f}")

# On a qubit the only leaks are constant, and the channel search confirms zero quality.
import numpy as np  # noqa: E402

rho = channels.random_density(2, np.random.default_rng(0))
q = quality(lk.constant_leak(Quantum(2), rho))
print("qubit constant leak normalized quality:", round(q.normalized, 9))
