"""Piecewise-constant sequence propagation and gradient-based optimization.

The error functional is the Frobenius distance between the propagated and
target vectorized states,

    delta_F^2 = || X_M ... X_1 vec(rho_0) - vec(rho_target) ||^2,

with slice propagators X_k = exp(-dt L_k).  Since the L_k are non-normal,
propagator derivatives are taken by one-sided finite differences of the
exponential in the perturbed generator, chained through cached forward
states and backward row vectors.  Box constraints (noise amplitudes in
[0, gamma_max], coherent amplitudes free) are handled by a projected
limited-memory quasi-Newton iteration (scipy's L-BFGS-B).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.optimize

from .exceptions import NumericalHealthError
from .lindblad import commutator_superop, dissipator_superop, expm_stack as _expm_stack
from .qops import as_matrix, unvec, vec

__all__ = [
    "ControlSequence", "TransferProblem", "Trajectory",
    "propagate", "error", "gradient",
    "OptimizationResult", "optimize", "optimize_restarts", "random_sequence",
]


@dataclass(frozen=True)
class ControlSequence:
    """M uniform time slices of coherent (u) and noise (gamma) amplitudes."""

    dt: float
    u: np.ndarray          # (M, n_controls)
    gamma: np.ndarray      # (M, n_noises)

    def __post_init__(self):
        u = np.atleast_2d(np.asarray(self.u, dtype=float))
        g = np.atleast_2d(np.asarray(self.gamma, dtype=float))
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if u.shape[0] != g.shape[0] or u.shape[0] < 1:
            raise ValueError("u and gamma must agree on the number of slices")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "gamma", g)

    @property
    def slice_count(self) -> int:
        return self.u.shape[0]

    @property
    def duration(self) -> float:
        return self.dt * self.slice_count

    def refine(self, factor: int = 2) -> "ControlSequence":
        """Split every slice into `factor` identical shorter slices."""
        return ControlSequence(dt=self.dt / factor,
                               u=np.repeat(self.u, factor, axis=0),
                               gamma=np.repeat(self.gamma, factor, axis=0))


@dataclass(frozen=True)
class TransferProblem:
    system: object
    rho0: object
    target: object
    total_time: float
    slices: int

    def __post_init__(self):
        if self.slices < 1:
            raise ValueError("need at least one slice")
        if self.total_time <= 0:
            raise ValueError("total time must be positive")
        dim = self.system.dim
        if as_matrix(self.rho0).shape != (dim, dim) or as_matrix(self.target).shape != (dim, dim):
            raise ValueError("state dimensions do not match the system")

    @property
    def dt(self) -> float:
        return self.total_time / self.slices


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray              # (M+1, N^2) vectorized
    sorted_eigenvalues: np.ndarray  # (M+1, N) descending

    @property
    def final_state(self) -> np.ndarray:
        return unvec(self.states[-1])


def _superop_stacks(system):
    base = 1j * commutator_superop(system.h0) + system.background_superop()
    ch = np.array([1j * commutator_superop(c.operator) for c in system.controls])
    cg = np.array([dissipator_superop(nz.operator) for nz in system.noises])
    return base, ch, cg


def _liouvillians(base, ch, cg, u, gamma):
    ell = np.broadcast_to(base, (u.shape[0],) + base.shape).copy()
    if ch.size:
        ell += np.einsum("kj,jab->kab", u, ch)
    if cg.size:
        ell += np.einsum("kl,lab->kab", gamma, cg)
    return ell


def _check_sequence(problem, seq):
    if seq.u.shape[1] != len(problem.system.controls):
        raise ValueError(f"sequence has {seq.u.shape[1]} control columns, "
                         f"system expects {len(problem.system.controls)}")
    if seq.gamma.shape[1] != len(problem.system.noises):
        raise ValueError(f"sequence has {seq.gamma.shape[1]} noise columns, "
                         f"system expects {len(problem.system.noises)}")
    bounds = problem.system.gamma_bounds
    if np.any(seq.gamma < 0) or np.any(seq.gamma > bounds[None, :]):
        raise ValueError("noise amplitudes outside [0, gamma_max]")
    if abs(seq.duration - problem.total_time) > 1e-9 * max(1.0, problem.total_time):
        raise ValueError("sequence duration does not match the problem horizon")


def _forward_states(problem, seq):
    base, ch, cg = _superop_stacks(problem.system)
    ell = _liouvillians(base, ch, cg, seq.u, seq.gamma)
    x = _expm_stack(-problem.dt * ell)
    m = seq.slice_count
    f = np.empty((m + 1, x.shape[-1]), dtype=complex)
    f[0] = vec(as_matrix(problem.rho0))
    for k in range(m):
        f[k + 1] = x[k] @ f[k]
    return x, f


def propagate(problem: TransferProblem, seq: ControlSequence,
              health_atol: float = 1e-6) -> Trajectory:
    """Propagate slice by slice, recording every state and its spectrum."""
    _check_sequence(problem, seq)
    _, f = _forward_states(problem, seq)
    m = seq.slice_count
    dim = problem.system.dim
    spectra = np.empty((m + 1, dim))
    for k in range(m + 1):
        rho = unvec(f[k])
        herm = np.abs(rho - rho.conj().T).max()
        tr = np.trace(rho).real
        evals = np.linalg.eigvalsh((rho + rho.conj().T) / 2)
        if herm > health_atol or abs(tr - 1.0) > health_atol or evals.min() < -health_atol:
            raise NumericalHealthError(
                f"state at slice {k} violates density-operator invariants "
                f"(herm {herm:.2e}, trace dev {abs(tr-1):.2e}, min eig {evals.min():.2e})")
        spectra[k] = evals[::-1]
    times = problem.dt * np.arange(m + 1)
    return Trajectory(times=times, states=f, sorted_eigenvalues=spectra)


def error(problem: TransferProblem, seq: ControlSequence) -> float:
    """Frobenius distance of the propagated final state to the target."""
    _check_sequence(problem, seq)
    _, f = _forward_states(problem, seq)
    if not np.all(np.isfinite(f[-1])):
        raise NumericalHealthError("propagation produced non-finite state")
    return float(np.linalg.norm(f[-1] - vec(as_matrix(problem.target))))


def _error_and_gradient(problem, u, gamma, stacks, fd_step):
    """delta_F^2 and its gradient, columns ordered controls then noises."""
    base, ch, cg = stacks
    dt = problem.dt
    m = u.shape[0]
    ell = _liouvillians(base, ch, cg, u, gamma)
    x = _expm_stack(-dt * ell)
    dim2 = x.shape[-1]
    f = np.empty((m + 1, dim2), dtype=complex)
    f[0] = vec(as_matrix(problem.rho0))
    for k in range(m):
        f[k + 1] = x[k] @ f[k]
    r = f[m] - vec(as_matrix(problem.target))
    e2 = float(np.vdot(r, r).real)

    b = np.empty((m, dim2), dtype=complex)
    b[m - 1] = r
    for k in range(m - 1, 0, -1):
        b[k - 1] = x[k].conj().T @ b[k]

    directions = np.concatenate([ch, cg]) if cg.size else ch
    amps = np.concatenate([u, gamma], axis=1)
    if fd_step is None:
        s = np.sqrt(np.finfo(float).eps) * (1.0 + np.abs(amps))
    else:
        s = np.full_like(amps, float(fd_step))
    pert = ell[:, None, :, :] + s[:, :, None, None] * directions[None, :, :, :]
    xp = _expm_stack((-dt * pert).reshape(-1, dim2, dim2)).reshape(
        m, amps.shape[1], dim2, dim2)
    dx = (xp - x[:, None, :, :]) / s[:, :, None, None]
    w = np.einsum("kcab,kb->kca", dx, f[:m])
    grad = 2.0 * np.real(np.einsum("ka,kca->kc", b.conj(), w))
    return e2, grad


def gradient(problem: TransferProblem, seq: ControlSequence,
             fd_step: float | None = None) -> np.ndarray:
    """Finite-difference gradient of delta_F^2, shape (M, m + l).

    Columns are ordered as the system's controls followed by its noise
    channels.  The default step is sqrt(machine eps) scaled by
    (1 + |amplitude|) per element; pass ``fd_step`` to override.
    """
    _check_sequence(problem, seq)
    if fd_step is not None and fd_step <= 0:
        raise ValueError("fd_step must be positive")
    stacks = _superop_stacks(problem.system)
    _, grad = _error_and_gradient(problem, seq.u, seq.gamma, stacks, fd_step)
    return grad


@dataclass(frozen=True)
class OptimizationResult:
    sequence: ControlSequence
    error_history: np.ndarray
    final_error: float
    iterations: int
    converged: bool
    message: str = field(default="")


class _ToleranceReached(Exception):
    pass


def optimize(problem: TransferProblem, init: ControlSequence,
             max_iters: int = 500, tol: float = 1e-6,
             fd_step: float | None = None) -> OptimizationResult:
    """Minimize delta_F over bounded amplitudes from a given start.

    Stops when delta_F <= tol, on stall, or after ``max_iters`` iterations;
    the returned history holds delta_F per objective evaluation, and the
    reported sequence is the best one seen.
    """
    _check_sequence(problem, init)
    m = init.slice_count
    n_c = init.u.shape[1]
    n_g = init.gamma.shape[1]
    stacks = _superop_stacks(problem.system)
    bounds = [(None, None)] * (m * n_c)
    for g_max in problem.system.gamma_bounds:
        bounds.extend([(0.0, g_max)] * m)
    # parameter layout: all u (slice-major), then all gamma (noise-major)
    x0 = np.concatenate([init.u.ravel(),
                         init.gamma.T.ravel()])

    history: list[float] = []
    best = {"err": np.inf, "x": x0}

    def objective(xflat):
        u = xflat[:m * n_c].reshape(m, n_c)
        gamma = xflat[m * n_c:].reshape(n_g, m).T
        e2, grad = _error_and_gradient(problem, u, gamma, stacks, fd_step)
        if not np.isfinite(e2):
            raise NumericalHealthError("objective became non-finite")
        err = float(np.sqrt(e2))
        history.append(err)
        if err < best["err"]:
            best["err"] = err
            best["x"] = xflat.copy()
        gflat = np.concatenate([grad[:, :n_c].ravel(), grad[:, n_c:].T.ravel()])
        if err <= tol:
            raise _ToleranceReached
        return e2, gflat

    converged = False
    message = ""
    iterations = 0
    try:
        res = scipy.optimize.minimize(
            objective, x0, jac=True, method="L-BFGS-B", bounds=bounds,
            options=dict(maxiter=max_iters, ftol=0.0, gtol=1e-16, maxcor=20))
        iterations = int(res.nit)
        message = str(res.message)
    except _ToleranceReached:
        converged = True
        message = "tolerance reached"
        iterations = len(history)
    if best["err"] <= tol:
        converged = True

    xb = best["x"]
    seq = ControlSequence(dt=init.dt,
                          u=xb[:m * n_c].reshape(m, n_c),
                          gamma=xb[m * n_c:].reshape(n_g, m).T)
    return OptimizationResult(sequence=seq, error_history=np.array(history),
                              final_error=best["err"], iterations=iterations,
                              converged=converged, message=message)


def random_sequence(problem: TransferProblem, seed: int,
                    noise_blocks: int | None = None,
                    u_scale: float = 1.0) -> ControlSequence:
    """Random starting sequence, deterministic in the seed.

    With ``noise_blocks`` set, the noise amplitudes are full-on in that
    many equal-duration blocks separated by equal off gaps (the block
    initialisation that steers optimizations toward economic solutions);
    otherwise they are uniform in [0, gamma_max].
    """
    rng = np.random.default_rng(seed)
    m = problem.slices
    n_c = len(problem.system.controls)
    n_g = len(problem.system.noises)
    u = rng.uniform(-u_scale, u_scale, size=(m, n_c))
    bounds = problem.system.gamma_bounds
    if noise_blocks is None:
        gamma = rng.uniform(0.0, 1.0, size=(m, n_g)) * bounds[None, :]
    else:
        if noise_blocks < 1:
            raise ValueError("noise_blocks must be positive")
        chunk = m / (2.0 * noise_blocks)
        on = (np.floor(np.arange(m) / chunk).astype(int) % 2) == 0
        gamma = np.where(on[:, None], bounds[None, :], 0.0)
    return ControlSequence(dt=problem.dt, u=u, gamma=gamma)


def optimize_restarts(problem: TransferProblem, restarts: int = 9, seed: int = 0,
                      noise_blocks: int | None = None, u_scale: float = 1.0,
                      max_iters: int = 500, tol: float = 1e-6,
                      fd_step: float | None = None):
    """Best-of-R multistart wrapper around :func:`optimize`.

    Returns ``(best_result, all_final_errors)``; stops early once a
    restart reaches the tolerance.
    """
    best = None
    finals = []
    for r in range(restarts):
        init = random_sequence(problem, seed + 1000 * r, noise_blocks=noise_blocks,
                               u_scale=u_scale)
        result = optimize(problem, init, max_iters=max_iters, tol=tol,
                          fd_step=fd_step)
        finals.append(result.final_error)
        if best is None or result.final_error < best.final_error:
            best = result
        if best.final_error <= tol:
            break
    return best, finals
