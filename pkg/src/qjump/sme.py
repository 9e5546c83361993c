"""Conditional (stochastic) integrators for continuous homodyne monitoring.

Two unravellings of the same record are provided:

* ``mode="full"``: Euler-Maruyama on the joint stochastic master equation

      drho = -i[H, rho] dt + kappa D[a] rho dt
             + gamma(nbar+1) D[b] rho dt + gamma nbar D[b†] rho dt
             + sqrt(eta kappa) dW  H[a e^{-i pi/2}] rho,

  with the photocurrent i_h = eta kappa <a e^{-i pi/2} + a† e^{i pi/2}>
  + sqrt(eta kappa) dW/dt.

* ``mode="adiabatic"``: the cavity eliminated at its steady value
  a = -i(chi/kappa) b†b, leaving the diagonal stochastic rate equation

      dp_n = gamma nbar [n p_{n-1} - (n+1) p_n] dt
             + gamma(nbar+1) [(n+1) p_{n+1} - n p_n] dt
             - 2 sqrt(eta Gamma) (n - <n>) p_n dW,

  Gamma = chi^2/kappa, with photocurrent -2 eta chi <n> + sqrt(eta kappa) dW/dt.

The same Wiener increment drives the state update and the photocurrent
sample of a step; the record is only a valid conditioning record with that
correlation in place.  ``step_full``/``step_diagonal`` are single-step
reference implementations in plain matrix algebra; ``simulate`` runs the
equivalent fused kernels (equivalence is covered by tests).

Sampling: a record row k holds the state moments at the end of output bin k
(time (k+1)*dt*sample_every) together with the photocurrent averaged over
the bin and the summed Wiener increment of the bin.  With sample_every=1
these are the per-step samples; coarser sampling is a bin average, not a
subsample, so windowed statistics of the record are preserved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import NumericFailure, StepSizeError, TruncationError
from .hilbert import (
    CAVITY,
    DensityMatrix,
    HilbertSpec,
    annihilation,
    lift,
    measurement_superop,
)
from .lindblad import SimParams, rhs_unconditional

NOISE_BLOCK = 1 << 16
DEFAULT_CLAMP_LIMIT = 1e-3
DEFAULT_TRUNCATION_GUARD = 1e-6


def trajectory_rng(seed: int, k: int = 0) -> np.random.Generator:
    """Counter-based generator for trajectory k of an ensemble keyed on seed.

    Streams for different (seed, k) are independent, and trajectory k is
    reproducible regardless of which other trajectories run.
    """
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(k,))
    return np.random.Generator(np.random.Philox(ss))


def wiener_increment(rng: np.random.Generator, dt: float) -> float:
    """One Gaussian increment with mean 0 and variance dt."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    return float(rng.normal(0.0, math.sqrt(dt)))


@dataclass(frozen=True)
class PhononDistribution:
    """Probabilities over Fock levels 0..n_max, renormalized on construction."""

    p: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.p, dtype=float)
        if arr.ndim != 1 or arr.size < 2:
            raise ValueError("need a 1-d distribution over at least 2 levels")
        if not np.all(np.isfinite(arr)):
            raise ValueError("non-finite probabilities")
        if np.any(arr < -1e-12):
            raise ValueError(f"negative probability {arr.min():.3e}")
        total = arr.sum()
        if total <= 0:
            raise ValueError("distribution sums to zero")
        arr = np.clip(arr, 0.0, None)
        arr /= arr.sum()
        arr.setflags(write=False)
        object.__setattr__(self, "p", arr)

    @property
    def n_max(self) -> int:
        return self.p.size - 1

    def mean(self) -> float:
        return float(np.arange(self.p.size) @ self.p)

    def var(self) -> float:
        n = np.arange(self.p.size)
        m = self.mean()
        return float(((n - m) ** 2) @ self.p)

    @classmethod
    def ground(cls, n_max: int) -> "PhononDistribution":
        return cls.fock(0, n_max)

    @classmethod
    def fock(cls, k: int, n_max: int) -> "PhononDistribution":
        if not 0 <= k <= n_max:
            raise ValueError(f"level {k} outside 0..{n_max}")
        p = np.zeros(n_max + 1)
        p[k] = 1.0
        return cls(p)

    @classmethod
    def thermal(cls, nbar: float, n_max: int) -> "PhononDistribution":
        if nbar < 0:
            raise ValueError("nbar must be >= 0")
        if nbar == 0:
            return cls.fock(0, n_max)
        return cls((nbar / (nbar + 1.0)) ** np.arange(n_max + 1))


@dataclass(frozen=True)
class TrajectoryRecord:
    """One conditional trajectory plus its raw measurement record.

    All arrays share the sample grid times[k] = (k+1)*dt_sample.
    ``photocurrent`` rows are bin averages of the per-step i_h samples and
    ``dW`` rows are bin sums of the increments that drove the state.
    ``diag`` carries integrator diagnostics (clamped mass, dropped top-level
    thermal flux, trace drift, ...).
    """

    times: np.ndarray
    mean_n: np.ndarray
    var_n: np.ndarray
    quad_phase: np.ndarray
    photocurrent: np.ndarray
    dW: np.ndarray
    seed: int
    traj_key: int
    dt: float
    dt_sample: float
    mode: str
    params: SimParams
    final_state: object = None
    diag: dict = field(default_factory=dict)

    def __post_init__(self):
        n = self.times.size
        for name in ("mean_n", "var_n", "quad_phase", "photocurrent", "dW"):
            if getattr(self, name).size != n:
                raise ValueError(f"record column {name} has mismatched length")
        if n and self.var_n.min() < -1e-10:
            raise ValueError(f"negative conditional variance {self.var_n.min():.3e}")


def step_diagonal(dist: PhononDistribution, params: SimParams, dW: float,
                  clamp_limit: float = DEFAULT_CLAMP_LIMIT) -> PhononDistribution:
    """One Euler-Maruyama step of the diagonal stochastic rate equation.

    Boundary convention: p_{-1} = 0 and the upward thermal flow out of the
    top level is dropped, which keeps the total probability exactly
    conserved on the truncated range.  Negative excursions are clamped to 0
    and the distribution renormalized; clamping more than ``clamp_limit``
    mass in the step raises StepSizeError.
    """
    p = dist.p
    n = np.arange(p.size, dtype=float)
    a_up = params.gamma * params.nbar * (n + 1.0)
    a_dn = params.gamma * (params.nbar + 1.0) * n
    out_rate = a_dn.copy()
    out_rate[:-1] += a_up[:-1]  # top level keeps its would-be upward flow
    drift = -out_rate * p
    drift[1:] += a_up[:-1] * p[:-1]
    drift[:-1] += a_dn[1:] * p[1:]
    meas = 2.0 * math.sqrt(params.eta * params.meas_rate)
    v = p + drift * params.dt - meas * (n - dist.mean()) * p * dW
    clamped = -float(v[v < 0].sum())
    if clamped > clamp_limit:
        raise StepSizeError(
            f"clamped probability {clamped:.3e} > {clamp_limit:g} in one step; "
            "reduce dt")
    return PhononDistribution(np.clip(v, 0.0, None))


def step_full(rho: DensityMatrix, params: SimParams, spec: HilbertSpec,
              dW: float) -> DensityMatrix:
    """One Euler-Maruyama step of the joint SME (reference implementation).

    Update, then hermitize as (rho + rho†)/2 and renormalize the trace.
    """
    if not np.isfinite(dW):
        raise NumericFailure("non-finite Wiener increment")
    a = lift(annihilation(spec.cavity_dim), CAVITY, spec)
    det = rhs_unconditional(rho.mat, params, spec)
    innov = measurement_superop(-1j * a, rho.mat)
    amp = math.sqrt(params.eta * params.kappa)
    new = rho.mat + params.dt * det + amp * dW * innov
    if not np.all(np.isfinite(new)):
        raise NumericFailure("non-finite state after SME step")
    new = 0.5 * (new + new.conj().T)
    new /= np.trace(new).real
    return DensityMatrix(new, spec)


def photocurrent_sample(state, params: SimParams, dW: float, dt: float,
                        mode: str) -> float:
    """Homodyne current over one step, sharing dW with the state update."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    noise = math.sqrt(params.eta * params.kappa) * dW / dt
    if mode == "adiabatic":
        if not isinstance(state, PhononDistribution):
            raise ValueError("adiabatic photocurrent needs a PhononDistribution")
        return -2.0 * params.eta * params.chi * state.mean() + noise
    if mode == "full":
        if not (isinstance(state, DensityMatrix)
                and isinstance(state.space, HilbertSpec)):
            raise ValueError("full-mode photocurrent needs a joint DensityMatrix")
        a = lift(annihilation(state.space.cavity_dim), CAVITY, state.space)
        quad = 2.0 * complex(np.einsum("ij,ji->", a, state.mat)).imag
        return params.eta * params.kappa * quad + noise
    raise ValueError(f"unknown mode {mode!r}")


def simulate(params: SimParams, initial, mode: str, spec: HilbertSpec = None,
             sample_every: int = 1, seed: int = None, traj_key: int = 0,
             dtype=np.complex128,
             truncation_guard: float = DEFAULT_TRUNCATION_GUARD,
             clamp_limit: float = DEFAULT_CLAMP_LIMIT) -> TrajectoryRecord:
    """Integrate one conditional trajectory and synthesize its record.

    ``initial`` is a joint DensityMatrix (mode "full", with ``spec``) or a
    PhononDistribution (mode "adiabatic").  The noise stream is derived from
    (seed, traj_key); seed defaults to params.seed.  ``dtype`` may be set to
    complex64 for wide full-mode runs where memory bandwidth dominates.

    Raises TruncationError when the population of the top cavity/mechanics
    level exceeds ``truncation_guard`` at a sample time, NumericFailure on
    NaN/Inf, StepSizeError when a diagonal step clamps too much mass.
    """
    if seed is None:
        seed = params.seed
    if sample_every < 1:
        raise ValueError("sample_every must be >= 1")
    n_samples = int(round(params.t_final / params.dt)) // sample_every
    if n_samples < 1:
        raise ValueError("horizon shorter than one output bin")
    n_steps = n_samples * sample_every
    rng = trajectory_rng(seed, traj_key)

    if mode == "adiabatic":
        return _simulate_sre(params, initial, n_steps, n_samples, sample_every,
                             rng, seed, traj_key, clamp_limit)
    if mode == "full":
        return _simulate_full(params, initial, spec, n_steps, n_samples,
                              sample_every, rng, seed, traj_key, dtype,
                              truncation_guard)
    raise ValueError(f"unknown mode {mode!r}")


def _simulate_sre(params, initial, n_steps, n_samples, sample_every, rng,
                  seed, traj_key, clamp_limit):
    if not isinstance(initial, PhononDistribution):
        raise ValueError("adiabatic mode needs a PhononDistribution initial state")
    nl = initial.p.size
    n = np.arange(nl, dtype=float)
    a_up = params.gamma * params.nbar * (n + 1.0)
    a_dn = params.gamma * (params.nbar + 1.0) * n
    meas = 2.0 * math.sqrt(params.eta * params.meas_rate)
    det_gain = -2.0 * params.eta * params.chi
    noise_gain = math.sqrt(params.eta * params.kappa)

    p = initial.p.copy()
    work = np.empty_like(p)
    dW = rng.normal(0.0, math.sqrt(params.dt), size=n_steps)
    mean_out = np.empty(n_samples)
    var_out = np.empty(n_samples)
    ih_out = np.empty(n_samples)
    dw_out = np.empty(n_samples)
    clamp_out = np.empty(n_samples)
    flux_out = np.empty(n_samples)
    status, bad = _kernels.sre_run(
        p, work, dW, a_up, a_dn, meas, det_gain, noise_gain, params.dt,
        sample_every, clamp_limit, mean_out, var_out, ih_out, dw_out,
        clamp_out, flux_out)
    if status == 1:
        raise StepSizeError(
            f"clamped probability above {clamp_limit:g} at step {bad} "
            f"(t={bad * params.dt:.6g}); reduce dt", step_index=bad)
    if status == 2:
        raise NumericFailure(f"non-finite distribution at step {bad}",
                             step_index=bad)
    dt_s = params.dt * sample_every
    times = dt_s * np.arange(1, n_samples + 1)
    gain = 2.0 * params.chi / params.kappa
    return TrajectoryRecord(
        times=times, mean_n=mean_out, var_n=var_out,
        quad_phase=-gain * mean_out, photocurrent=ih_out, dW=dw_out,
        seed=seed, traj_key=traj_key, dt=params.dt, dt_sample=dt_s,
        mode="adiabatic", params=params,
        final_state=PhononDistribution(p),
        diag={"clamped_mass": clamp_out, "top_flux": flux_out},
    )


def _simulate_full(params, initial, spec, n_steps, n_samples, sample_every,
                   rng, seed, traj_key, dtype, truncation_guard):
    if spec is None or not isinstance(spec, HilbertSpec):
        raise ValueError("full mode needs a HilbertSpec")
    if not isinstance(initial, DensityMatrix) or initial.dim != spec.joint_dim:
        raise ValueError("full mode needs a joint-space DensityMatrix")
    dc, dm = spec.cavity_dim, spec.mech_dim
    sc, sm, cup, itab, ntab = _kernels.ladder_tables(dc, dm)
    g_dn = params.gamma * (params.nbar + 1.0)
    g_up = params.gamma * params.nbar
    s_meas = math.sqrt(params.eta * params.kappa)
    sqdt = math.sqrt(params.dt)

    rho = np.array(initial.mat, dtype=dtype)
    out = np.empty_like(rho)
    mean_out = np.empty(n_samples)
    var_out = np.empty(n_samples)
    quad_out = np.empty(n_samples)
    ih_out = np.empty(n_samples)
    dw_out = np.empty(n_samples)
    drift_out = np.empty(n_samples)

    bin_ih = 0.0
    bin_dw = 0.0
    worst_drift = 0.0
    block = np.empty(0)
    used = 0
    for k in range(n_steps):
        if used == block.size:
            block = rng.normal(0.0, sqdt, size=min(NOISE_BLOCK, n_steps - k))
            used = 0
        dw = block[used]
        used += 1
        tr, re_a, im_a, _, _ = _kernels.joint_stats(rho, dm, sc)
        if not (tr > 0.0) or not math.isfinite(tr):
            raise NumericFailure(f"non-finite trace at step {k}", step_index=k)
        worst_drift = max(worst_drift, abs(tr - 1.0))
        q = 2.0 * im_a / tr
        bin_ih += params.eta * params.kappa * q + s_meas * dw / params.dt
        bin_dw += dw
        _kernels.apply_generator(rho, out, dc, dm, itab, ntab, sc, sm, cup,
                                 params.chi, params.kappa, g_dn, g_up,
                                 1.0, params.dt, s_meas * dw, q)
        rho, out = out, rho
        if (k + 1) % sample_every == 0:
            idx = (k + 1) // sample_every - 1
            tr, re_a, im_a, sum_n, sum_n2 = _kernels.joint_stats(rho, dm, sc)
            if not (tr > 0.0) or not math.isfinite(tr):
                raise NumericFailure(f"non-finite trace at step {k + 1}",
                                     step_index=k + 1)
            rho *= 1.0 / tr
            mean = sum_n / tr
            mean_out[idx] = mean
            var_out[idx] = max(sum_n2 / tr - mean * mean, 0.0)
            quad_out[idx] = 2.0 * im_a / tr
            ih_out[idx] = bin_ih / sample_every
            dw_out[idx] = bin_dw
            drift_out[idx] = worst_drift
            bin_ih = 0.0
            bin_dw = 0.0
            worst_drift = 0.0
            cav_top, mech_top = _kernels.edge_populations(rho, dc, dm)
            if cav_top > truncation_guard or mech_top > truncation_guard:
                raise TruncationError(
                    f"truncation leak at t={(k + 1) * params.dt:.6g}: top-level "
                    f"population cavity {cav_top:.2e}, mechanics {mech_top:.2e} "
                    f"> {truncation_guard:g}; enlarge the space")

    final = np.asarray(rho, dtype=np.complex128)
    final = final / np.trace(final).real
    dt_s = params.dt * sample_every
    return TrajectoryRecord(
        times=dt_s * np.arange(1, n_samples + 1),
        mean_n=mean_out, var_n=var_out, quad_phase=quad_out,
        photocurrent=ih_out, dW=dw_out, seed=seed, traj_key=traj_key,
        dt=params.dt, dt_sample=dt_s, mode="full", params=params,
        final_state=DensityMatrix(final, spec),
        diag={"trace_drift": drift_out},
    )
