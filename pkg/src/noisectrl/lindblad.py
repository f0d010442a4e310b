"""Liouvillians, propagators and closed-form channels.

Sign conventions, fixed once and pinned by the tests:

* master equation  ``d/dt vec(rho) = -L vec(rho)``
* ``L = i H_hat + sum_l gamma_l Gamma_hat_l``  with ``H_hat`` the commutator
  superoperator and ``Gamma_hat = -D_hat`` minus the dissipator superoperator,
  so that ``d rho/dt = gamma (V rho V^dag - {V^dag V, rho}/2) - i [H, rho]``.
* propagator of a slice ``X = exp(-dt L)``.

Everything is dense; the target scale is a handful of qubits.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from . import _expm
from .exceptions import NumericalHealthError
from .qops import SIGMA_MINUS, SIGMA_PLUS, SIGMA_X, as_matrix, embed_local

__all__ = [
    "commutator_superop", "dissipator_superop", "assemble_liouvillian",
    "propagator", "expm_stack",
    "v_theta", "theta_generator", "theta_channel_exact",
    "ThetaChannelParams", "diag_channel_theta",
    "BathParams", "heat_bath_generator",
    "trotter_decoupled_propagator",
]


def commutator_superop(h) -> np.ndarray:
    """Superoperator H_hat with H_hat vec(rho) = vec(H rho - rho H).

    Under column stacking this is ``1 kron H - H^T kron 1``.
    """
    m = as_matrix(h)
    ident = np.eye(m.shape[0])
    return np.kron(ident, m) - np.kron(m.T, ident)


def dissipator_superop(v) -> np.ndarray:
    """Unit-amplitude noise superoperator Gamma_hat for a Lindblad operator V.

    Gamma_hat vec(rho) = -vec(V rho V^dag - (V^dag V rho + rho V^dag V)/2),
    i.e. the dissipative part of the master equation enters as
    ``d vec(rho)/dt = -gamma Gamma_hat vec(rho)``.
    """
    m = as_matrix(v)
    ident = np.eye(m.shape[0])
    vdv = m.conj().T @ m
    d_hat = np.kron(m.conj(), m) - 0.5 * (np.kron(ident, vdv) + np.kron(vdv.T, ident))
    return -d_hat


def assemble_liouvillian(system, u, gamma) -> np.ndarray:
    """Build L = i H_hat(H_0 + sum_j u_j H_j) + sum_l gamma_l Gamma_hat_l.

    ``u`` are unbounded real coherent amplitudes, one per control;
    ``gamma`` must lie in [0, gamma_max] for each switchable noise channel.
    Background (non-switchable) noise terms of the system are always added.
    """
    u = np.asarray(u, dtype=float)
    gamma = np.asarray(gamma, dtype=float)
    if u.shape != (len(system.controls),):
        raise ValueError(f"expected {len(system.controls)} control amplitudes, got {u.shape}")
    if gamma.shape != (len(system.noises),):
        raise ValueError(f"expected {len(system.noises)} noise amplitudes, got {gamma.shape}")
    for g, noise in zip(gamma, system.noises):
        if g < 0 or g > noise.gamma_max:
            raise ValueError(
                f"noise amplitude {g} for '{noise.label}' outside [0, {noise.gamma_max}]")
    ell = 1j * commutator_superop(system.h0) + system.background_superop()
    for amp, ctrl in zip(u, system.controls):
        if amp != 0.0:
            ell = ell + (1j * amp) * commutator_superop(ctrl.operator)
    for g, noise in zip(gamma, system.noises):
        if g != 0.0:
            ell = ell + g * dissipator_superop(noise.operator)
    return ell


def propagator(ell: np.ndarray, dt: float) -> np.ndarray:
    """Slice propagator X = exp(-dt L), valid for non-normal L."""
    if dt < 0:
        raise ValueError("dt must be nonnegative")
    try:
        return _expm.expm(-dt * np.asarray(ell, dtype=complex))
    except ValueError as exc:
        raise NumericalHealthError(str(exc)) from exc


def expm_stack(ells: np.ndarray) -> np.ndarray:
    """exp() of a stack of exponents (..., m, m); shared scaling, Pade-13."""
    try:
        return _expm.expm(ells)
    except ValueError as exc:
        raise NumericalHealthError(str(exc)) from exc


# ---------------------------------------------------------------------------
# one-parameter noise family  V_theta = [[0, 1-theta], [theta, 0]]

def v_theta(theta: float) -> np.ndarray:
    """Interpolating Lindblad generator: amplitude damping at theta=0,
    bit flip (sigma_x/2) at theta=1/2."""
    if not 0.0 <= theta <= 1.0:
        raise ValueError("theta must lie in [0, 1]")
    return np.array([[0.0, 1.0 - theta], [theta, 0.0]], dtype=complex)


def theta_generator(theta: float) -> np.ndarray:
    """4x4 noise superoperator of V_theta at unit amplitude."""
    return dissipator_superop(v_theta(theta))


def theta_channel_exact(theta: float, gamma_t: float) -> np.ndarray:
    """Closed form of exp(-gamma*t Gamma(theta)) for one qubit.

    ``gamma_t`` is the dimensionless product (rate x time).  Basis order is
    the column-stacked (rho00, rho10, rho01, rho11).  Used as an analytic
    oracle against the generic matrix-exponential path.
    """
    tb = 1.0 - theta
    c = 1.0 / (tb * tb + theta * theta)
    eps = np.exp(-gamma_t / c)
    epsp = np.exp(gamma_t * (tb * theta - 0.5))
    ch = np.cosh(gamma_t * tb * theta)
    sh = np.sinh(gamma_t * tb * theta)
    return np.array([
        [c * (tb * tb + theta * theta * eps), 0, 0, c * tb * tb * (1 - eps)],
        [0, epsp * ch, epsp * sh, 0],
        [0, epsp * sh, epsp * ch, 0],
        [c * theta * theta * (1 - eps), 0, 0, c * (theta * theta + tb * tb * eps)],
    ], dtype=complex)


@dataclass(frozen=True)
class ThetaChannelParams:
    """Parameters of the diagonal-action theta channel."""

    theta: float
    gamma_star: float
    t: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= 1.0:
            raise ValueError("theta must lie in [0, 1]")
        if self.gamma_star <= 0:
            raise ValueError("gamma_star must be positive")
        if self.t < 0:
            raise ValueError("t must be nonnegative")

    @property
    def c_theta(self) -> float:
        tb = 1.0 - self.theta
        return 1.0 / (tb * tb + self.theta * self.theta)

    @property
    def eps_theta(self) -> float:
        return float(np.exp(-self.gamma_star * self.t / self.c_theta))


def diag_channel_theta(params: ThetaChannelParams, n: int) -> np.ndarray:
    """Action of the theta channel on the diagonal of an n-qubit state.

    Returns the 2^n x 2^n stochastic matrix R_theta(t) = 1^(n-1) kron B with
    the single-qubit block B acting on each population pair.  theta=0 gives
    the amplitude-damping block (column stochastic), theta=1/2 the
    bit-flip averaging block (doubly stochastic).
    """
    th = params.theta
    tb = 1.0 - th
    c = params.c_theta
    eps = params.eps_theta
    block = c * np.array([
        [tb * tb + th * th * eps, tb * tb * (1 - eps)],
        [th * th * (1 - eps), th * th + tb * tb * eps],
    ])
    return np.kron(np.eye(2 ** (n - 1)), block)


# ---------------------------------------------------------------------------
# heat-bath generators

@dataclass(frozen=True)
class BathParams:
    """Bosonic or fermionic bath coupled through sigma_x to one qubit."""

    statistics: Literal["bosonic", "fermionic"]
    beta: float
    omega0: float
    gamma: float

    def __post_init__(self):
        if self.statistics not in ("bosonic", "fermionic"):
            raise ValueError("statistics must be 'bosonic' or 'fermionic'")
        if self.beta < 0:
            raise ValueError("beta must be nonnegative")
        if self.omega0 <= 0:
            raise ValueError("omega0 must be positive")
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")

    def occupation(self) -> float:
        """Planck / Fermi occupation n(omega0) = 1/(exp(beta omega0) -/+ 1)."""
        x = self.beta * self.omega0
        if self.statistics == "bosonic":
            if x == 0.0:
                raise ValueError("bosonic occupation diverges at beta = 0")
            if np.isinf(x):
                return 0.0
            return float(1.0 / np.expm1(x))
        if np.isinf(x):
            return 0.0
        return float(1.0 / (np.exp(x) + 1.0))


def heat_bath_generator(params: BathParams) -> np.ndarray:
    """Finite-temperature relaxation superoperator for one qubit.

    gamma (1 +/- n) Gamma_hat(sigma-) + gamma n Gamma_hat(sigma+), with the
    plus sign for bosons and minus for fermions.  At beta -> inf only the
    lowering term survives (pure amplitude damping); the fermionic beta -> 0
    limit is proportional to the joint {sigma+, sigma-} generator.
    """
    n_occ = params.occupation()
    sign = 1.0 if params.statistics == "bosonic" else -1.0
    down = dissipator_superop(SIGMA_MINUS)
    up = dissipator_superop(SIGMA_PLUS)
    return params.gamma * ((1.0 + sign * n_occ) * down + n_occ * up)


# ---------------------------------------------------------------------------
# Trotter decoupling of a diagonal drift from terminal bit-flip noise

def trotter_decoupled_propagator(h02, gamma: float, t: float, k: int) -> np.ndarray:
    """k-cycle alternating-sign product approximating exp(-t gamma Gamma_hat).

    ``h02`` is the diagonal operator on the first n-1 qubits whose coupling
    ``h02 kron sigma_z`` to the noisy terminal qubit is to be removed; the
    sign-inverted factor is what ideal pi_x pulses on that qubit produce.
    Converges to the bare bit-flip propagator as k grows, at first order
    (the error halves when k doubles).
    """
    if k < 1:
        raise ValueError("need at least one Trotter cycle")
    m = as_matrix(h02)
    n_rest = m.shape[0]
    coupling = np.kron(m, np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex))
    gam = gamma * dissipator_superop(np.kron(np.eye(n_rest), SIGMA_X / 2))
    h_hat = commutator_superop(coupling)
    h = t / (2 * k)
    halves = expm_stack(np.array([-h * (gam + 1j * h_hat), -h * (gam - 1j * h_hat)]))
    return np.linalg.matrix_power(halves[0] @ halves[1], k)
