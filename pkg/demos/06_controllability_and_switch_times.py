"""Controllability checks and exact pairwise switch times.

The commutator closure of the drift and control Hamiltonians decides
whether the coherent side of the control system is universal.  Once it is,
relaxative transfers between eigenvalue pairs can be steered analytically:
permuting a pair at the right instant cancels an unwanted transfer exactly.
"""

import numpy as np

from noisectrl import (SIGMA_X, SIGMA_Y, ising_chain, ion_trap_model,
                       lie_closure_dimension, switch_time_amp,
                       switch_time_theta, theta_pair_admissible)

print("=== Lie closures ===")
print("{sigma_x}            ->", lie_closure_dimension([SIGMA_X]))
print("{sigma_x, sigma_y}   ->", lie_closure_dimension([SIGMA_X, SIGMA_Y]))
for n in (2, 3):
    system = ising_chain(n)
    gens = [system.h0] + [c.operator for c in system.controls]
    dim = lie_closure_dimension(gens)
    print(f"{n}-qubit chain        -> {dim}  (full control needs {4**n - 1})")

print("(the 4-qubit trap model closes to the full 255 as well; see the "
      "models test suite)")

print("\n=== neutralising an amplitude-damping transfer ===")
a, b, gamma, tau = 0.35, 0.15, 5.0, 1.0
t_switch = switch_time_amp(a, b, gamma, tau)
print(f"pair ({a}, {b}), window tau = {tau}/J: permute at {t_switch:.4f}/J")


def damp_block(t):
    e = np.exp(-gamma * t)
    return np.array([[1.0, 1.0 - e], [0.0, e]])


swap = np.array([[0.0, 1.0], [1.0, 0.0]])
out = damp_block(tau - t_switch) @ swap @ damp_block(t_switch) @ np.array([a, b])
print(f"damp, swap, damp leaves ({out[0]:.4f}, {out[1]:.4f}): "
      "the original pair, swapped")

print("\n=== the same idea for interpolating noise ===")
theta = 0.25
for pair in ((0.6, 0.1), (0.9, 0.05)):
    ok = theta_pair_admissible(*pair, theta)
    note = ""
    if ok:
        t = switch_time_theta(pair[0], pair[1], theta, gamma, tau)
        note = f", switch at {t:.4f}/J"
    print(f"pair {pair} at theta = {theta}: admissible = {ok}{note}")
print("outside the admissible ratio window the switch instant leaves [0, tau].")
