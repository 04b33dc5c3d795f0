"""Leaks on a bit: broadcasting, constant leaks, and what quantum theory forbids."""
from ptlab import channels, leaks as lk, process as pm, purity
from ptlab.systems import Classical

bit = Classical(2)

# Broadcasting copies the input. Discarding either copy gives back the wire.
b = lk.broadcast(bit)
print("broadcast:", lk.is_leak(b).kind_name, "left counit residual", lk.left_counit_residual(b))

# A constant leak emits a fixed coin and learns nothing.
coin = pm.distribution([0.3, 0.7])
c = lk.constant_leak(bit, coin)
print("constant:", lk.is_leak(c).kind_name, "left counit residual", lk.left_counit_residual(c))

# Every classical leak copies the input and post-processes the copy.
l = pm.classical_map([[0.9, 0.2], [0.1, 0.8]])
rebuilt, err = lk.classify_classical_leak(lk.classical_leak(l))
print("recovered post-processing:\n", rebuilt.transfer.real, "error", err)

# Copying a qubit's basis is fine for populations, but it is no leak.
print("dephasing copy leak residual:", lk.leak_residual(channels.dephasing_copy(2)))
grid, exact = purity.broadcast_constant_gap(bit)
print(f"broadcast vs nearest constant leak on a bit: grid {grid:.4f}, exact {exact}")
