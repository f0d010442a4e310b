"""The constructive majorisation scheduler, end to end.

Cooling diag(1, 2, ..., 8)/36 to the maximally mixed state needs four
pairwise averaging steps.  The scheduler computes the exact mixing
parameters and noise exposures, predicts its own residual, and compiles
everything into a schedule of ideal unitaries plus decoupled noise-on
intervals that a full Lindblad propagation then verifies.
"""

import numpy as np

from noisectrl import (DensityOperator, frobenius_error, hlp_execute,
                       hlp_plan, ising_chain, predict_executed_spectrum,
                       propagate_schedule, sorted_spectrum, thermal_state, vec)

y = np.arange(1, 9)[::-1] / 36.0
x = np.full(8, 1 / 8)
gamma_star = 5.0

plan = hlp_plan(y, x, gamma_star=gamma_star, residual_target=9.95e-5)
print("=== plan ===")
for i, step in enumerate(plan.steps):
    print(f"step {i}: pair {step.pair}, lambda = {step.lam:.3f}, "
          f"tau = {step.tau:.4f}/J")
print(f"total noise-on time: {plan.total_dissipative_time:.4f}/J")
print(f"predicted residual:  {plan.predicted_residual:.3e}")

system = ising_chain(3, noise_kind="bitflip", gamma_star=gamma_star)
schedule = hlp_execute(plan, system, trotter_steps=64)
print(f"\n=== compiled schedule: {len(schedule)} segments, "
      f"noise on for {schedule.noise_on_time:.4f}/J ===")

rho0 = DensityOperator(np.diag(plan.initial_spectrum).astype(complex))
rho_f = propagate_schedule(system, schedule, rho0)
executed = frobenius_error(vec(rho_f), vec(thermal_state(3).matrix))
predicted = predict_executed_spectrum(plan, system, trotter_steps=64)
print(f"executed residual:   {executed:.3e}")
print(f"pair-model prediction vs actual spectrum: "
      f"{np.linalg.norm(sorted_spectrum(rho_f) - predicted):.1e}")

print("\nThe plan's noise-on intervals alone sum to 12/J, the number the")
print("pairwise scheme needs for this transfer; a greedy parallel-averaging")
print("strategy could do better, but is outside this scheduler's contract.")
