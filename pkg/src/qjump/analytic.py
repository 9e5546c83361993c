"""Closed-form solutions used as oracles for the numerical integrators.

Covers the undamped-mechanics (gamma = 0) joint state, the per-Fock-level
pointer coherent amplitudes the cavity is driven to, and the first-moment
solutions of the unconditional master equation.  No closed form exists for
the full conditional problem with gamma > 0; these functions deliberately
stop there.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hilbert import (
    DensityMatrix,
    HilbertSpec,
    coherent_vector,
    LEAK_TOL,
)

# Relative scale (in units of kappa) below which |kappa/2 - gamma| is treated
# as a degenerate pole of the mean-field solution and the limit form is used.
DEGENERACY_TOL = 1e-9


def coherent_amplitude_n(n: int, alpha: complex, chi: float, kappa: float,
                         t: float) -> complex:
    """Cavity amplitude at time t given the mechanics pinned at Fock level n.

    alpha is the initial cavity amplitude.  The steady value is -i*chi*n/kappa.
    """
    if kappa <= 0:
        raise ValueError("kappa must be positive")
    if t < 0:
        raise ValueError("t must be >= 0")
    decay = np.exp(-0.5 * kappa * t)
    return -1j * (chi * n / kappa) * (1.0 - decay) + alpha * decay


def decoherence_factor(n: int, m: int, chi: float, kappa: float,
                       t: float) -> float:
    """Damping factor of the (n, m) mechanics coherence at gamma = 0.

    Equals exp[(chi/kappa)^2 (n-m)^2 (1 - kappa*t/2 - exp(-kappa*t/2))];
    1 on the diagonal and at t = 0, and decays in t and |n - m| otherwise.
    """
    if kappa <= 0:
        raise ValueError("kappa must be positive")
    if t < 0:
        raise ValueError("t must be >= 0")
    x = 0.5 * kappa * t
    expo = (chi / kappa) ** 2 * (n - m) ** 2 * (1.0 - x - np.exp(-x))
    return float(np.exp(expo))


@dataclass(frozen=True)
class InitialWeights:
    """Sparse expansion of the initial joint state over
    (mech |n><m|) ⊗ (cavity |alpha><alpha'| / <alpha'|alpha>) dyads.

    terms: list of (n, m, alpha, alpha_p, weight).  Hermiticity requires the
    weight for (m, n, alpha_p, alpha) to be the conjugate of the weight for
    (n, m, alpha, alpha_p); the diagonal weights must sum to 1.
    """

    terms: tuple

    def __post_init__(self):
        tr = sum(w for (n, m, a, ap, w) in self.terms if n == m and a == ap)
        if abs(tr - 1.0) > 1e-10:
            raise ValueError(f"diagonal weights sum to {tr}, expected 1")

    @classmethod
    def mech_vector_with_cavity(cls, amplitudes, alpha: complex = 0.0):
        """Pure mechanics state sum_n c_n |n> with the cavity in |alpha>."""
        c = np.asarray(amplitudes, dtype=complex)
        c = c / np.linalg.norm(c)
        terms = []
        for n in range(len(c)):
            for m in range(len(c)):
                w = c[n] * np.conj(c[m])
                if w != 0:
                    terms.append((n, m, alpha, alpha, w))
        return cls(tuple(terms))

    @classmethod
    def mech_diagonal_with_cavity(cls, populations, alpha: complex = 0.0):
        """Mixed diagonal mechanics state with the cavity in |alpha>."""
        p = np.asarray(populations, dtype=float)
        p = p / p.sum()
        terms = [(n, n, alpha, alpha, complex(p[n]))
                 for n in range(len(p)) if p[n] != 0]
        return cls(tuple(terms))


def walls_state(init: InitialWeights, chi: float, kappa: float, t: float,
                spec: HilbertSpec, leak_tol: float = LEAK_TOL) -> DensityMatrix:
    """Exact joint state at time t for gamma = 0.

    Each initial dyad evolves into a product of the surviving mechanics
    coherence, a real decoherence factor, a cross-phase factor and the
    normalized dyad of the two pointer-evolving coherent amplitudes.
    Mechanics populations are exactly time-invariant.
    """
    if kappa <= 0:
        raise ValueError("kappa must be positive")
    dc, dm = spec.cavity_dim, spec.mech_dim
    ramp = 1.0 - np.exp(-0.5 * kappa * t)
    rho = np.zeros((spec.joint_dim, spec.joint_dim), dtype=complex)
    g = chi / kappa
    for (n, m, alpha, alpha_p, w) in init.terms:
        if not (0 <= n < dm and 0 <= m < dm):
            raise ValueError(f"Fock index ({n},{m}) outside mech_dim {dm}")
        dec = decoherence_factor(n, m, chi, kappa, t)
        cross = np.exp((n - m) * (-1j * g * np.conj(alpha_p) - 1j * g * alpha) * ramp)
        u = coherent_vector(coherent_amplitude_n(n, alpha, chi, kappa, t), dc,
                            leak_tol)
        v = coherent_vector(coherent_amplitude_n(m, alpha_p, chi, kappa, t), dc,
                            leak_tol)
        overlap = np.vdot(v, u)  # <alpha'_m(t) | alpha_n(t)> on the truncated space
        coeff = w * dec * cross / overlap
        cav = np.outer(u, v.conj())
        mech = np.zeros((dm, dm), dtype=complex)
        mech[n, m] = 1.0
        rho += coeff * np.kron(cav, mech)
    rho /= np.trace(rho).real  # absorb coherent-state truncation leak
    return DensityMatrix(rho, spec)


def mean_phonon_unconditional(n0: float, nbar: float, gamma: float,
                              t) -> np.ndarray | float:
    """Unconditional mean phonon number n0*exp(-gamma t) + nbar*(1 - exp(-gamma t))."""
    if gamma < 0 or nbar < 0:
        raise ValueError("gamma and nbar must be >= 0")
    decay = np.exp(-gamma * np.asarray(t, dtype=float))
    out = n0 * decay + nbar * (1.0 - decay)
    return out if out.ndim else float(out)


def mean_field_unconditional(a0: complex, n0: float, nbar: float, chi: float,
                             gamma: float, kappa: float, t) -> np.ndarray | complex:
    """Unconditional cavity amplitude <a>(t) from the moment equations.

    In the adiabatic limit kappa >> gamma this approaches -i(chi/kappa) * n_b(t).
    Near the pole kappa/2 = gamma the removable singularity is evaluated via
    its limit form t*exp(-gamma t).
    """
    if kappa <= 0:
        raise ValueError("kappa must be positive")
    if gamma < 0:
        raise ValueError("gamma must be >= 0")
    t = np.asarray(t, dtype=float)
    e_k = np.exp(-0.5 * kappa * t)
    e_g = np.exp(-gamma * t)
    pole = 0.5 * kappa - gamma
    if abs(pole) < DEGENERACY_TOL * kappa:
        relax = t * e_g
    else:
        relax = (e_g - e_k) / pole
    out = a0 * e_k - 0.5j * chi * ((n0 - nbar) * relax
                                   + nbar * (1.0 - e_k) / (0.5 * kappa))
    return out if out.ndim else complex(out)
