"""Reachability machinery: majorisation, switch times, the HLP scheduler
and its executable compilation, fixed points, and Lie-closure tests.

The scheduler follows the constructive Hardy-Littlewood-Polya decomposition:
a target spectrum majorised by the initial one is reached by at most N-1
pairwise averaging steps, each realized physically by switching bit-flip
noise onto the terminal qubit while every other eigenvalue pair is parked
in a noise-immune subspace.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import _expm
from .exceptions import ConfigurationError, ReachabilityError
from .qops import SIGMA_X, DensityOperator, as_matrix, embed_local
from .schedule import HoldSegment, Schedule, UnitarySegment

__all__ = [
    "majorises", "t_transform",
    "switch_time_amp", "switch_time_theta", "theta_pair_admissible",
    "fixed_point_theta", "beta_of_theta",
    "HlpStep", "HlpPlan", "hlp_plan", "plan_state_transfer",
    "hlp_execute", "predict_executed_spectrum",
    "lie_closure_dimension",
]

_SUM_ATOL = 1e-10


# ---------------------------------------------------------------------------
# majorisation order and elementary transforms

def majorises(x, y, tol: float = 1e-10) -> bool:
    """True iff x is majorised by y (all descending partial sums of x bounded
    by those of y, equal totals)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError(f"length mismatch: {x.shape} vs {y.shape}")
    xs = np.sort(x)[::-1]
    ys = np.sort(y)[::-1]
    if abs(xs.sum() - ys.sum()) > tol:
        return False
    return bool(np.all(np.cumsum(xs) <= np.cumsum(ys) + tol))


def t_transform(v, pair: tuple[int, int], lam: float) -> np.ndarray:
    """Mix entries j and k of v: (v_j, v_k) -> (lam v_j + (1-lam) v_k, ...).

    The output is majorised by the input for lam in [0, 1]."""
    if not 0.0 <= lam <= 1.0:
        raise ValueError("mixing parameter must lie in [0, 1]")
    v = np.array(v, dtype=float)
    j, k = pair
    vj, vk = v[j], v[k]
    v[j] = lam * vj + (1.0 - lam) * vk
    v[k] = (1.0 - lam) * vj + lam * vk
    return v


# ---------------------------------------------------------------------------
# exact switch times for pairwise transfers

def switch_time_amp(rho_ii: float, rho_jj: float, gamma_star: float, tau: float) -> float:
    """Permutation instant that neutralises an amplitude-damping transfer.

    Permuting the pair at this time and letting damping act for the
    remaining tau - tau_ij restores the pair up to a swap.
    """
    if rho_ii < 0 or rho_jj < 0 or rho_ii + rho_jj == 0:
        raise ValueError("populations must be nonnegative and not both zero")
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    return float(np.log((rho_ii * np.exp(gamma_star * tau) + rho_jj)
                        / (rho_ii + rho_jj)) / gamma_star)


def theta_pair_admissible(rho_ii: float, rho_jj: float, theta: float) -> bool:
    """Pairing condition theta^2/(1-theta)^2 <= rho_ii/rho_jj <= its inverse."""
    if not 0.0 <= theta < 0.5:
        raise ValueError("theta must lie in [0, 1/2)")
    if rho_ii < 0 or rho_jj < 0:
        raise ValueError("populations must be nonnegative")
    tb = 1.0 - theta
    lo, hi = theta ** 2 / tb ** 2, tb ** 2 / theta ** 2 if theta > 0 else np.inf
    if rho_jj == 0:
        return rho_ii == 0
    r = rho_ii / rho_jj
    return bool(lo <= r <= hi)


def switch_time_theta(rho_ii: float, rho_jj: float, theta: float,
                      gamma_star: float, tau: float) -> float:
    """Generalised switch time for the interpolating noise V_theta.

    Reduces to :func:`switch_time_amp` at theta = 0 and is meaningful
    (in [0, tau]) exactly when the evolved pair stays admissible.  The
    formula degenerates at theta = 1/2.
    """
    if not 0.0 <= theta < 0.5:
        raise ValueError("theta must lie in [0, 1/2); the formula degenerates at 1/2")
    if rho_ii < 0 or rho_jj < 0 or rho_ii + rho_jj == 0:
        raise ValueError("populations must be nonnegative and not both zero")
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    tb = 1.0 - theta
    c = 1.0 / (tb ** 2 + theta ** 2)
    num = (np.exp(gamma_star * tau / c) * (tb ** 2 * rho_ii - theta ** 2 * rho_jj)
           + (tb ** 2 * rho_jj - theta ** 2 * rho_ii))
    den = (tb ** 2 - theta ** 2) * (rho_ii + rho_jj)
    return float(c / gamma_star * np.log(num / den))


def fixed_point_theta(theta: float) -> DensityOperator:
    """Single-qubit stationary state of V_theta relaxation.

    Unique for theta != 1/2; at theta = 1/2 every mixture of the pair is
    stationary and the returned maximally mixed state is just one of them.
    """
    if not 0.0 <= theta <= 1.0:
        raise ValueError("theta must lie in [0, 1]")
    tb = 1.0 - theta
    c = 1.0 / (tb ** 2 + theta ** 2)
    return DensityOperator(np.diag([c * tb ** 2, c * theta ** 2]).astype(complex))


def beta_of_theta(theta: float, delta_energy: float) -> float:
    """Inverse bath temperature whose equilibrium matches the V_theta fixed
    point on a qubit with level splitting ``delta_energy``.

    beta = (2/Delta) artanh((tb^2 - theta^2)/(tb^2 + theta^2)); infinite at
    theta = 0 (zero temperature), zero at theta = 1/2.
    """
    if not 0.0 <= theta <= 1.0:
        raise ValueError("theta must lie in [0, 1]")
    if delta_energy <= 0:
        raise ValueError("level splitting must be positive")
    tb = 1.0 - theta
    bias = (tb ** 2 - theta ** 2) / (tb ** 2 + theta ** 2)
    if abs(bias) >= 1.0:
        return float(np.inf) if bias > 0 else float(-np.inf)
    return float(2.0 / delta_energy * np.arctanh(bias))


# ---------------------------------------------------------------------------
# HLP scheduling

@dataclass(frozen=True)
class HlpStep:
    """One pairwise averaging step.

    ``pair`` indexes the two values in the initial sorted frame (value
    identities, 0-based).  ``tau`` is the bit-flip exposure realizing the
    mixing parameter: tau = -(2/gamma*) ln|1 - 2 lambda| when lam != 1/2,
    while lam = 1/2 steps carry the truncated finite tau from the plan's
    residual allocation (eps = exp(-gamma* tau / 2)).  ``pre_permutation``
    lists, per terminal-qubit slot, which value identity is parked there
    while the noise runs: slots 0 and 1 hold the averaging pair, the rest
    sit in protected pairs.
    """

    pair: tuple[int, int]
    lam: float
    tau: float
    eps: float
    pre_permutation: tuple[int, ...]


@dataclass(frozen=True)
class HlpPlan:
    """Full transfer plan: sorted spectra, steps, and its own prediction."""

    initial_spectrum: np.ndarray
    target_spectrum: np.ndarray
    gamma_star: float
    residual_target: float
    steps: tuple[HlpStep, ...]
    predicted_final_spectrum: np.ndarray
    predicted_residual: float
    diagonalizer_initial: np.ndarray | None = field(default=None)
    diagonalizer_target: np.ndarray | None = field(default=None)

    @property
    def total_dissipative_time(self) -> float:
        return float(sum(s.tau for s in self.steps))

    def to_json(self) -> str:
        payload = {
            "initial_spectrum": list(self.initial_spectrum),
            "target_spectrum": list(self.target_spectrum),
            "gamma_star": self.gamma_star,
            "residual_target": self.residual_target,
            "total_dissipative_time": self.total_dissipative_time,
            "predicted_residual": self.predicted_residual,
            "predicted_final_spectrum": list(self.predicted_final_spectrum),
            "steps": [
                {"pair": list(s.pair), "lambda": s.lam, "tau": s.tau,
                 "eps": s.eps, "pre_permutation": list(s.pre_permutation)}
                for s in self.steps
            ],
        }
        return json.dumps(payload, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "HlpPlan":
        data = json.loads(text)
        steps = tuple(
            HlpStep(pair=tuple(s["pair"]), lam=s["lambda"], tau=s["tau"],
                    eps=s["eps"], pre_permutation=tuple(s["pre_permutation"]))
            for s in data["steps"])
        return cls(
            initial_spectrum=np.array(data["initial_spectrum"]),
            target_spectrum=np.array(data["target_spectrum"]),
            gamma_star=data["gamma_star"],
            residual_target=data["residual_target"],
            steps=steps,
            predicted_final_spectrum=np.array(data["predicted_final_spectrum"]),
            predicted_residual=data["predicted_residual"],
        )


def _hlp_raw_steps(y_sorted: np.ndarray, x_sorted: np.ndarray, tol: float):
    """Adjacent-rule HLP decomposition with value-identity tracking.

    Identity i means "value initially at sorted position i".  Returns
    [(id_j, id_k, lambda)], at most N-1 entries, fixing at least one value
    per step.
    """
    w = y_sorted.copy()
    ids = list(range(len(w)))
    out = []
    for _ in range(len(w) - 1):
        if np.abs(w - x_sorted).max() <= tol:
            break
        below = np.where(x_sorted < w - tol)[0]
        j = int(below.max())                      # largest index with x_j < w_j
        above = np.where(x_sorted > w + tol)[0]
        above = above[above > j]
        if above.size == 0:
            # only tolerance dust remains at the majorisation boundary
            break
        k = int(above.min())                      # smallest index k > j with x_k > w_k
        delta = min(w[j] - x_sorted[j], x_sorted[k] - w[k])
        lam = 1.0 - delta / (w[j] - w[k])
        out.append((ids[j], ids[k], float(lam)))
        wj, wk = w[j], w[k]
        w[j] = lam * wj + (1.0 - lam) * wk
        w[k] = (1.0 - lam) * wj + lam * wk
        order = np.argsort(-w, kind="stable")
        w = w[order]
        ids = [ids[o] for o in order]
    return out


def _spectator_pairing(step_idx, raw_steps, values):
    """Terminal-qubit slot layout for one step.

    Slots 0,1 take the averaging pair.  Spectators are paired for parking:
    values destined to be averaged together by a later step are paired with
    each other (their parking contraction is then absorbed by that step's
    own averaging), the remainder adjacently by current value.
    """
    n_vals = len(values)
    ja, ka, _ = raw_steps[step_idx]
    used = {ja, ka}
    pairs = []
    for fa, fb, _ in raw_steps[step_idx + 1:]:
        if fa not in used and fb not in used:
            pairs.append((fa, fb))
            used.update((fa, fb))
    rest = sorted((i for i in range(n_vals) if i not in used),
                  key=lambda i: -values[i])
    pairs.extend((rest[i], rest[i + 1]) for i in range(0, len(rest), 2))
    return [ja, ka] + [q for p in pairs for q in p]


def _simulate_ideal(y_sorted, raw_steps, eps_list):
    """Value-identity simulation through the exact averaging blocks."""
    vals = y_sorted.copy()
    for (ja, ka, _lam), eps in zip(raw_steps, eps_list):
        m = 0.5 * (vals[ja] + vals[ka])
        d = 0.5 * (vals[ja] - vals[ka])
        vals[ja], vals[ka] = m + eps * d, m - eps * d
    return vals


def hlp_plan(y, x, gamma_star: float, residual_target: float = 1e-4) -> HlpPlan:
    """Decompose a majorised spectrum transfer into pairwise averaging steps.

    ``y`` and ``x`` are the initial and target spectra (sorted internally).
    Steps follow the constructive rule: take the largest index j with
    x_j < y_j, the smallest k > j with x_k > y_k, and mix with
    lambda = 1 - min{y_j - x_j, x_k - y_k}/(y_j - y_k).  Exactly-half
    mixes need unbounded noise exposure, so every step's eps is floored at
    a common value chosen (by bisection through the exact step arithmetic)
    as the largest one whose predicted residual still meets
    ``residual_target``; that spends the least total noise-on time
    compatible with the requested accuracy.
    """
    y = np.asarray(y, dtype=float)
    x = np.asarray(x, dtype=float)
    if y.shape != x.shape or y.ndim != 1:
        raise ValueError("spectra must be equal-length vectors")
    if abs(y.sum() - 1.0) > _SUM_ATOL or abs(x.sum() - 1.0) > _SUM_ATOL:
        raise ValueError("spectra must sum to one")
    if gamma_star <= 0:
        raise ValueError("gamma_star must be positive")
    if residual_target <= 0:
        raise ValueError("residual_target must be positive")
    if not majorises(x, y):
        raise ReachabilityError("target spectrum is not majorised by the initial one")

    y_s = np.sort(y)[::-1].copy()
    x_s = np.sort(x)[::-1].copy()
    raw = _hlp_raw_steps(y_s, x_s, tol=1e-14)
    if not raw:
        return HlpPlan(initial_spectrum=y_s, target_spectrum=x_s,
                       gamma_star=gamma_star, residual_target=residual_target,
                       steps=(), predicted_final_spectrum=y_s.copy(),
                       predicted_residual=float(np.linalg.norm(y_s - x_s)))

    eps_star = np.clip([2.0 * lam - 1.0 for _, _, lam in raw], 0.0, 1.0)
    is_half = eps_star <= 1e-12   # only exact half-mixes get truncated

    def residual(eps_floor):
        eps = np.where(is_half, eps_floor, eps_star)
        final = _simulate_ideal(y_s, raw, eps)
        return float(np.linalg.norm(np.sort(final) - np.sort(x_s)))

    if not np.any(is_half):
        eps_floor = 0.0
    else:
        hi = 1.0 - 1e-12
        lo = 1e-15
        if residual(hi) <= residual_target:
            eps_floor = hi
        else:
            for _ in range(200):
                mid = np.sqrt(lo * hi)
                if residual(mid) <= residual_target:
                    lo = mid
                else:
                    hi = mid
            eps_floor = lo

    eps_all = np.where(is_half, eps_floor, eps_star)
    taus = -2.0 / gamma_star * np.log(eps_all)
    final = _simulate_ideal(y_s, raw, eps_all)

    # spectator layouts, computed against the running value assignment
    steps = []
    vals = y_s.copy()
    for idx, ((ja, ka, lam), eps, tau) in enumerate(zip(raw, eps_all, taus)):
        slots = _spectator_pairing(idx, raw, vals)
        steps.append(HlpStep(pair=(ja, ka), lam=lam, tau=float(tau),
                             eps=float(eps), pre_permutation=tuple(slots)))
        m = 0.5 * (vals[ja] + vals[ka])
        d = 0.5 * (vals[ja] - vals[ka])
        vals[ja], vals[ka] = m + eps * d, m - eps * d

    return HlpPlan(
        initial_spectrum=y_s, target_spectrum=x_s, gamma_star=gamma_star,
        residual_target=residual_target, steps=tuple(steps),
        predicted_final_spectrum=np.sort(final)[::-1].copy(),
        predicted_residual=float(np.linalg.norm(np.sort(final) - np.sort(x_s))))


def plan_state_transfer(rho0, rho_target, gamma_star: float,
                        residual_target: float = 1e-4) -> HlpPlan:
    """HLP plan between density operators, keeping their diagonalizers.

    The emitted schedule then starts by rotating rho0 to its sorted
    eigenbasis and ends by rotating into the target eigenbasis.
    """
    m0 = as_matrix(rho0)
    mt = as_matrix(rho_target)
    w0, v0 = np.linalg.eigh(m0)
    wt, vt = np.linalg.eigh(mt)
    order0 = np.argsort(-w0)
    ordert = np.argsort(-wt)
    base = hlp_plan(w0[order0], wt[ordert], gamma_star, residual_target)
    return HlpPlan(
        initial_spectrum=base.initial_spectrum,
        target_spectrum=base.target_spectrum,
        gamma_star=base.gamma_star, residual_target=base.residual_target,
        steps=base.steps,
        predicted_final_spectrum=base.predicted_final_spectrum,
        predicted_residual=base.predicted_residual,
        diagonalizer_initial=v0[:, order0],
        diagonalizer_target=vt[:, ordert])


# ---------------------------------------------------------------------------
# compiling a plan onto a physical system

def _protection_unitary(dim: int) -> np.ndarray:
    """Identity on the first terminal-qubit pair, the rotation
    (1/sqrt2)[[1,-1],[1,1]] on every other pair.

    Conjugating a diagonal state moves each protected pair difference into
    the real coherence quadrature that terminal bit-flip noise leaves
    invariant."""
    v = np.array([[1.0, -1.0], [1.0, 1.0]], dtype=complex) / np.sqrt(2.0)
    out = np.eye(dim, dtype=complex)
    for i in range(1, dim // 2):
        out[2 * i:2 * i + 2, 2 * i:2 * i + 2] = v
    return out


def _permutation_matrix(slots) -> np.ndarray:
    dim = len(slots)
    p = np.zeros((dim, dim), dtype=complex)
    for slot, src in enumerate(slots):
        p[slot, src] = 1.0
    return p


def _require_terminal_bitflip(system):
    expected = embed_local(SIGMA_X / 2, system.n, system.n)
    for idx, noise in enumerate(system.noises):
        if np.allclose(as_matrix(noise.operator), expected, atol=1e-12):
            return idx
    raise ConfigurationError("system lacks switchable bit-flip noise on the terminal qubit")


def _require_diagonal_drift(system) -> np.ndarray:
    h0 = as_matrix(system.h0)
    if np.abs(h0 - np.diag(np.diag(h0))).max() > 1e-12:
        raise ConfigurationError("scheduler requires a diagonal drift Hamiltonian")
    return np.real(np.diag(h0))


def _pair_block_map(omega: float, gamma_star: float, tau: float, nseg: int) -> np.ndarray:
    """Exact (Re c, Im c) map of one kicked decoupling train for a protected
    pair with drift splitting omega."""
    h = tau / nseg
    gen = np.array([[0.0, omega], [-omega, -gamma_star / 2.0]])
    c, s = np.cos(omega * h / 2.0), np.sin(omega * h / 2.0)
    half_kick = np.array([[c, -s], [s, c]])
    seg = half_kick @ np.real(_expm.expm(h * gen)) @ half_kick
    return np.linalg.matrix_power(seg, nseg)


def _noise_block_segments(system, noise_idx, energies, tau, trotter_steps):
    """Decoupled noise-on train plus its per-pair echo phase correction.

    One Trotter cycle is two exponential segments; the drift sign inversion
    of the decoupling identity is realized by exact diagonal drift-echo
    unitaries between segments (symmetric placement).  The leftover
    deterministic rotation of each protected coherence is cancelled by a
    closing diagonal unitary computed from the exact pair dynamics.
    """
    dim = system.dim
    nseg = 2 * trotter_steps
    h = tau / nseg
    gamma_vec = np.zeros(len(system.noises))
    gamma_vec[noise_idx] = system.noises[noise_idx].gamma_max
    u_vec = np.zeros(len(system.controls))

    kick_half = np.diag(np.exp(1j * (h / 2.0) * energies))
    kick_full = np.diag(np.exp(1j * h * energies))
    hold = HoldSegment(u=u_vec, gamma=gamma_vec, duration=h, label="noise-on")

    segments = [UnitarySegment(kick_half, label="drift-echo")]
    for i in range(nseg):
        segments.append(hold)
        if i < nseg - 1:
            segments.append(UnitarySegment(kick_full, label="drift-echo"))
    segments.append(UnitarySegment(kick_half, label="drift-echo"))

    corr = np.ones(dim, dtype=complex)
    mus = np.empty(dim // 2)
    gamma_star = system.noises[noise_idx].gamma_max
    for i in range(dim // 2):
        omega = energies[2 * i] - energies[2 * i + 1]
        m = _pair_block_map(omega, gamma_star, tau, nseg)
        theta = np.arctan2(m[1, 0] - m[0, 1], m[0, 0] + m[1, 1])
        rot = np.array([[np.cos(theta), np.sin(theta)],
                        [-np.sin(theta), np.cos(theta)]])
        mus[i] = (rot @ m)[0, 0]
        corr[2 * i] = np.exp(-1j * theta / 2.0)
        corr[2 * i + 1] = np.exp(+1j * theta / 2.0)
    segments.append(UnitarySegment(np.diag(corr), label="echo-phase"))
    return segments, mus


def hlp_execute(plan: HlpPlan, system, trotter_steps: int = 64) -> Schedule:
    """Compile a plan into a schedule of ideal unitaries and noise holds.

    Requires switchable bit-flip noise on the terminal qubit, a diagonal
    drift, and full unitary controllability (permutations and the
    protection rotation are emitted as ideal instantaneous unitaries).
    Propagating the schedule reproduces the plan's predicted spectrum up
    to the residual allocation plus the finite-k decoupling error.
    """
    if trotter_steps < 1:
        raise ValueError("need at least one Trotter cycle")
    noise_idx = _require_terminal_bitflip(system)
    energies = _require_diagonal_drift(system)
    dim = system.dim
    if len(plan.initial_spectrum) != dim:
        raise ConfigurationError(
            f"plan is for dimension {len(plan.initial_spectrum)}, system has {dim}")

    u12 = _protection_unitary(dim)
    segments = []
    if plan.diagonalizer_initial is not None:
        segments.append(UnitarySegment(plan.diagonalizer_initial.conj().T,
                                       label="diagonalize"))
    for step in plan.steps:
        perm = _permutation_matrix(step.pre_permutation)
        place = u12 @ perm
        segments.append(UnitarySegment(place, label="place+protect"))
        block, _ = _noise_block_segments(system, noise_idx, energies,
                                         step.tau, trotter_steps)
        segments.extend(block)
        segments.append(UnitarySegment(place.conj().T, label="unprotect"))
    if plan.diagonalizer_target is not None:
        segments.append(UnitarySegment(plan.diagonalizer_target, label="target-basis"))
    return Schedule(segments=tuple(segments))


def predict_executed_spectrum(plan: HlpPlan, system, trotter_steps: int = 64) -> np.ndarray:
    """Spectrum the compiled schedule should produce, from the exact
    two-level pair dynamics (populations average exactly; protected pairs
    contract by the computable decoupling factor)."""
    noise_idx = _require_terminal_bitflip(system)
    energies = _require_diagonal_drift(system)
    vals = plan.initial_spectrum.copy()
    for step in plan.steps:
        _, mus = _noise_block_segments(system, noise_idx, energies,
                                       step.tau, trotter_steps)
        slots = step.pre_permutation
        factors = np.concatenate([[step.eps], mus[1:]])
        for i, f in enumerate(factors):
            a, b = vals[slots[2 * i]], vals[slots[2 * i + 1]]
            m, d = 0.5 * (a + b), 0.5 * (a - b)
            vals[slots[2 * i]], vals[slots[2 * i + 1]] = m + f * d, m - f * d
    return np.sort(vals)[::-1]


# ---------------------------------------------------------------------------
# Lie closure

def lie_closure_dimension(generators, tol: float = 1e-10) -> int:
    """Dimension of the real Lie algebra generated by {i H} under commutators.

    Generators are projected to their traceless part; candidates are
    orthonormalized against the running basis in the Hilbert-Schmidt inner
    product (two Gram-Schmidt passes, threshold ``tol``).  Full unitary
    controllability on n qubits corresponds to the value N^2 - 1.
    """
    mats = [as_matrix(g) for g in generators]
    if not mats:
        raise ValueError("need at least one generator")
    dim = mats[0].shape[0]
    for m in mats:
        if m.shape != (dim, dim):
            raise ValueError("generators must share one dimension")
        if np.abs(m - m.conj().T).max() > 1e-10:
            raise ValueError("generators must be Hermitian")

    max_dim = dim * dim
    basis_flat = np.empty((max_dim, dim * dim), dtype=complex)
    basis_mats: list[np.ndarray] = []

    def try_add(candidate: np.ndarray) -> None:
        v = candidate.reshape(-1)
        m = len(basis_mats)
        for _ in range(2):
            if m:
                coeff = basis_flat[:m].conj() @ v
                v = v - basis_flat[:m].T @ coeff
        nrm = np.linalg.norm(v)
        if nrm > tol:
            v = v / nrm
            basis_flat[m] = v
            basis_mats.append(v.reshape(dim, dim))

    for m in mats:
        traceless = m - (np.trace(m) / dim) * np.eye(dim)
        try_add(1j * traceless)

    i = 0
    while i < len(basis_mats):
        a = basis_mats[i]
        for j in range(i):
            b = basis_mats[j]
            try_add(a @ b - b @ a)
        i += 1
    return len(basis_mats)
