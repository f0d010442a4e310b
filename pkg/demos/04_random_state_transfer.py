"""Transitivity in action: random mixed-state pairs under switchable damping.

With full local control plus bang-bang amplitude damping on one qubit, any
state can be steered into any other.  Here the gradient optimizer performs
the transfer for a few random two-qubit pairs; with bit-flip noise instead,
only targets majorised by the initial spectrum are reachable, so the same
optimizer is pointed at a deliberately majorised target.
"""

import numpy as np

from noisectrl import (TransferProblem, ising_chain, majorises,
                       optimize_restarts, random_density, sorted_spectrum,
                       t_transform, DensityOperator)

print("=== amplitude damping: arbitrary pairs ===")
system = ising_chain(2, noise_kind="amp", gamma_star=5.0)
for pair in range(3):
    rho0 = random_density(2, 300 + pair)
    target = random_density(2, 400 + pair)
    problem = TransferProblem(system, rho0, target, 8.0, 40)
    best, finals = optimize_restarts(problem, restarts=4, seed=pair,
                                     noise_blocks=3, max_iters=300, tol=1e-4)
    print(f"pair {pair}: delta_F = {best.final_error:.2e} "
          f"after {len(finals)} restart(s)")

print("\n=== bit flip: a majorised target ===")
flip = ising_chain(2, noise_kind="bitflip", gamma_star=5.0)
rho0 = random_density(2, 99)
w = sorted_spectrum(rho0)
target_spec = t_transform(t_transform(w, (0, 3), 0.75), (1, 2), 0.8)
target = DensityOperator(np.diag(np.sort(target_spec)[::-1]).astype(complex))
print("target majorised by initial:",
      majorises(target_spec, w))
problem = TransferProblem(flip, rho0, target, 8.0, 40)
best, finals = optimize_restarts(problem, restarts=4, seed=5, noise_blocks=3,
                                 max_iters=300, tol=1e-4)
print(f"unital transfer: delta_F = {best.final_error:.2e} "
      f"after {len(finals)} restart(s)")
