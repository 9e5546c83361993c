"""Deterministic integrator for the unconditional master equation.

The model (hbar scaled out, all rates in 1/time):

    drho/dt = -i[H, rho] + kappa D[a] rho
              + gamma (nbar+1) D[b] rho + gamma nbar D[b†] rho,

with H = (chi/2)(a + a†) b†b on the joint cavity ⊗ mechanics space.
``rhs_unconditional`` is the readable dense-matrix form of the generator;
``evolve`` runs fixed-step RK4 through the equivalent fused stencil kernel
(the two are equivalence-tested).  Fixed step keeps runs bit-reproducible.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np

from . import _kernels
from .errors import IntegrationError
from .hilbert import (
    CAVITY,
    MECHANICS,
    DensityMatrix,
    HilbertSpec,
    annihilation,
    dissipator,
    lift,
    number_op,
)

# kappa*dt / Gamma*dt above which we warn (soft) or refuse to run (hard).
STABILITY_WARN = 0.1
STABILITY_ERROR = 0.5


@dataclass(frozen=True)
class SimParams:
    """Physical rates and integration settings.

    kappa   cavity damping rate
    gamma   mechanical damping rate
    nbar    mean thermal occupation of the mechanical bath
    chi     effective optomechanical coupling rate
    eta     homodyne detector efficiency (1 in all headline runs)
    dt      integration step
    t_final horizon
    seed    base RNG seed for stochastic runs
    """

    kappa: float
    gamma: float
    nbar: float
    chi: float
    dt: float
    t_final: float
    eta: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.kappa <= 0:
            raise ValueError("kappa must be positive")
        if self.gamma < 0 or self.nbar < 0:
            raise ValueError("gamma and nbar must be >= 0")
        if not 0 < self.eta <= 1:
            raise ValueError("eta must be in (0, 1]")
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.t_final < self.dt:
            raise ValueError("t_final must be at least one step")
        worst = max(self.kappa * self.dt, self.meas_rate * self.dt)
        if worst > STABILITY_ERROR:
            raise ValueError(
                f"dt={self.dt:g} leaves the fastest rate unresolved "
                f"(max rate*dt = {worst:.3g} > {STABILITY_ERROR})"
            )
        if worst > STABILITY_WARN:
            warnings.warn(
                f"rate*dt = {worst:.3g} exceeds {STABILITY_WARN}; "
                "results may be inaccurate", stacklevel=2)

    @property
    def meas_rate(self) -> float:
        """Phonon-number measurement rate chi^2/kappa."""
        return self.chi**2 / self.kappa

    def with_seed(self, seed: int) -> "SimParams":
        return replace(self, seed=seed)


def default_dt(kappa: float, chi: float, gamma: float, nbar: float,
               n_max: int) -> float:
    """Step size resolving the cavity, measurement and thermal scales:
    min(0.02/kappa, 0.02/Gamma, 0.001/(gamma (nbar+1)(n_max+1)))."""
    candidates = [0.02 / kappa]
    gamma_meas = chi**2 / kappa
    if gamma_meas > 0:
        candidates.append(0.02 / gamma_meas)
    thermal = gamma * (nbar + 1.0) * (n_max + 1.0)
    if thermal > 0:
        candidates.append(0.001 / thermal)
    return min(candidates)


def hamiltonian(chi: float, spec: HilbertSpec) -> np.ndarray:
    """H = (chi/2)(a + a†) b†b on the joint space (hbar scaled out)."""
    a = lift(annihilation(spec.cavity_dim), CAVITY, spec)
    nb = lift(number_op(spec.mech_dim), MECHANICS, spec)
    return 0.5 * chi * (a + a.conj().T) @ nb


def rhs_unconditional(rho: np.ndarray | DensityMatrix, p: SimParams,
                      spec: HilbertSpec) -> np.ndarray:
    """Master-equation right-hand side as explicit dense matrix algebra.

    Reference implementation; ``evolve`` uses the fused kernel equivalent.
    """
    mat = rho.mat if isinstance(rho, DensityMatrix) else rho
    if mat.shape != (spec.joint_dim, spec.joint_dim):
        raise ValueError(f"state shape {mat.shape} != joint dim {spec.joint_dim}")
    h = hamiltonian(p.chi, spec)
    a = lift(annihilation(spec.cavity_dim), CAVITY, spec)
    b = lift(annihilation(spec.mech_dim), MECHANICS, spec)
    out = -1j * (h @ mat - mat @ h)
    out += p.kappa * dissipator(a, mat)
    if p.gamma > 0:
        out += p.gamma * (p.nbar + 1.0) * dissipator(b, mat)
        if p.nbar > 0:
            out += p.gamma * p.nbar * dissipator(b.conj().T, mat)
    return out


def _rhs_fast(rho, out, spec, p, tables):
    sc, sm, cup, itab, ntab = tables
    _kernels.apply_generator(
        rho, out, spec.cavity_dim, spec.mech_dim, itab, ntab, sc, sm, cup,
        p.chi, p.kappa, p.gamma * (p.nbar + 1.0), p.gamma * p.nbar,
        0.0, 1.0, 0.0, 0.0)


def evolve(rho0: DensityMatrix, p: SimParams, spec: HilbertSpec,
           sample_every: int = 1, positivity_interval: int = 0,
           pos_tol: float = 1e-8):
    """Fixed-step RK4 trajectory of the unconditional state.

    Returns (samples, drift) where samples is a list of (t, DensityMatrix)
    including t=0 and drift is the series of worst pre-renormalization trace
    deviations per step, one entry per sample interval.  Each state is
    renormalized to unit trace every step; positivity (smallest eigenvalue
    >= -pos_tol) is checked every positivity_interval samples when that is
    nonzero -- the eigendecomposition dominates the cost otherwise.
    """
    if rho0.dim != spec.joint_dim:
        raise ValueError("initial state does not live on the given space")
    if sample_every < 1:
        raise ValueError("sample_every must be >= 1")
    n_steps = int(round(p.t_final / p.dt))
    tables = _kernels.ladder_tables(spec.cavity_dim, spec.mech_dim)

    rho = np.array(rho0.mat, dtype=complex)
    k1, k2, k3, k4, stage = (np.empty_like(rho) for _ in range(5))
    samples = [(0.0, rho0)]
    drift = []
    interval_drift = 0.0
    for step in range(1, n_steps + 1):
        _rhs_fast(rho, k1, spec, p, tables)
        np.multiply(k1, 0.5 * p.dt, out=stage)
        stage += rho
        _rhs_fast(stage, k2, spec, p, tables)
        np.multiply(k2, 0.5 * p.dt, out=stage)
        stage += rho
        _rhs_fast(stage, k3, spec, p, tables)
        np.multiply(k3, p.dt, out=stage)
        stage += rho
        _rhs_fast(stage, k4, spec, p, tables)
        k2 += k3
        k2 *= 2.0
        k1 += k4
        k1 += k2
        k1 *= p.dt / 6.0
        rho += k1
        tr = np.trace(rho).real
        interval_drift = max(interval_drift, abs(tr - 1.0))
        rho *= 1.0 / tr
        if step % sample_every == 0:
            state = DensityMatrix(rho.copy(), spec)
            if positivity_interval and (len(samples) % positivity_interval == 0):
                lo = state.min_eigenvalue()
                if lo < -pos_tol:
                    raise IntegrationError(
                        f"eigenvalue {lo:.3e} < -{pos_tol:g} at t={step * p.dt:g}; "
                        "reduce dt or enlarge the truncation")
            samples.append((step * p.dt, state))
            drift.append(interval_drift)
            interval_drift = 0.0
    return samples, np.asarray(drift)
