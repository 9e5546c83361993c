"""Truncated Fock-space linear algebra for the cavity + mechanics system.

Operators are plain dense complex ``numpy`` arrays.  The joint space uses
the fixed ordering

    cavity (tensor) mechanics,

i.e. joint index = i * mech_dim + n for cavity level i and phonon level n,
which is the convention of ``numpy.kron(cavity_op, mech_op)``.  Every
function here is pure; returned arrays are freshly allocated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import TruncationError

CAVITY = "cavity"
MECHANICS = "mechanics"

# Default tolerances for state bookkeeping.
TRACE_TOL = 1e-9
HERM_TOL = 1e-10
POS_TOL = 1e-8
LEAK_TOL = 1e-6


@dataclass(frozen=True)
class HilbertSpec:
    """Truncation sizes of the joint space (cavity ⊗ mechanics)."""

    cavity_dim: int
    mech_dim: int

    def __post_init__(self):
        if self.cavity_dim < 2 or self.mech_dim < 2:
            raise ValueError(
                f"need at least 2 Fock levels per mode, got "
                f"({self.cavity_dim}, {self.mech_dim})"
            )

    @property
    def joint_dim(self) -> int:
        return self.cavity_dim * self.mech_dim

    @classmethod
    def for_pointer_states(cls, chi: float, kappa: float, n_max: int,
                           alpha0: float = 0.0) -> "HilbertSpec":
        """Size the space so pointer coherent states up to phonon level
        ``n_max`` fit with leak well below ``LEAK_TOL``.

        The largest amplitude the cavity reaches is |alpha| = chi*n_max/kappa
        (plus any initial amplitude ``alpha0``); the cavity dimension is
        |alpha|^2 + 6|alpha| + 10 and the mechanics gets n_max + 5 levels.
        """
        if kappa <= 0:
            raise ValueError("kappa must be positive")
        a = abs(chi) * n_max / kappa + abs(alpha0)
        cavity_dim = int(math.ceil(a * a + 6.0 * a + 10.0))
        return cls(cavity_dim=cavity_dim, mech_dim=n_max + 5)


def annihilation(dim: int) -> np.ndarray:
    """Ladder operator a with a[i, i+1] = sqrt(i+1) on ``dim`` levels."""
    if dim < 2:
        raise ValueError(f"annihilation needs dim >= 2, got {dim}")
    a = np.zeros((dim, dim), dtype=complex)
    idx = np.arange(dim - 1)
    a[idx, idx + 1] = np.sqrt(idx + 1.0)
    return a


def number_op(dim: int) -> np.ndarray:
    return np.diag(np.arange(dim, dtype=float)).astype(complex)


def identity(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex)


def lift(op: np.ndarray, which: str, spec: HilbertSpec) -> np.ndarray:
    """Embed a single-mode operator into the joint space (op ⊗ I or I ⊗ op)."""
    d = op.shape[0]
    if op.shape != (d, d):
        raise ValueError(f"operator must be square, got shape {op.shape}")
    if which == CAVITY:
        if d != spec.cavity_dim:
            raise ValueError(f"cavity operator dim {d} != {spec.cavity_dim}")
        return np.kron(op, identity(spec.mech_dim))
    if which == MECHANICS:
        if d != spec.mech_dim:
            raise ValueError(f"mechanics operator dim {d} != {spec.mech_dim}")
        return np.kron(identity(spec.cavity_dim), op)
    raise ValueError(f"which must be '{CAVITY}' or '{MECHANICS}', got {which!r}")


def _check_same_dim(c: np.ndarray, rho: np.ndarray):
    if c.shape != rho.shape or c.shape[0] != c.shape[1]:
        raise ValueError(f"dimension mismatch: operator {c.shape} vs state {rho.shape}")


def dissipator(c: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """Lindblad dissipator D[c]rho = c rho c† - (c†c rho + rho c†c)/2."""
    _check_same_dim(c, rho)
    cdc = c.conj().T @ c
    return c @ rho @ c.conj().T - 0.5 * (cdc @ rho + rho @ cdc)


def measurement_superop(c: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """Homodyne innovation superoperator H[c]rho = c rho + rho c† - Tr(c rho + rho c†) rho."""
    _check_same_dim(c, rho)
    m = c @ rho + rho @ c.conj().T
    return m - np.trace(m) * rho


def expectation(op: np.ndarray, rho) -> complex:
    """Tr(op rho); accepts a DensityMatrix or a bare matrix."""
    mat = rho.mat if isinstance(rho, DensityMatrix) else rho
    _check_same_dim(op, mat)
    return complex(np.einsum("ij,ji->", op, mat))


@dataclass(frozen=True)
class DensityMatrix:
    """Dense density matrix with trace/hermiticity bookkeeping.

    ``space`` is a HilbertSpec for joint states or an int for a single mode.
    The underlying array is marked read-only; treat instances as immutable.
    """

    mat: np.ndarray
    space: HilbertSpec | int
    trace_tol: float = field(default=TRACE_TOL, repr=False)
    herm_tol: float = field(default=HERM_TOL, repr=False)

    def __post_init__(self):
        d = self.dim
        if self.mat.shape != (d, d):
            raise ValueError(f"state shape {self.mat.shape} != space dim {d}")
        if not np.all(np.isfinite(self.mat)):
            raise ValueError("state contains non-finite entries")
        tr = np.trace(self.mat)
        if abs(tr - 1.0) > self.trace_tol:
            raise ValueError(f"trace {tr} deviates from 1 beyond {self.trace_tol}")
        asym = np.max(np.abs(self.mat - self.mat.conj().T))
        if asym > self.herm_tol:
            raise ValueError(f"hermiticity violation {asym:.3e} > {self.herm_tol}")
        self.mat.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.space if isinstance(self.space, int) else self.space.joint_dim

    def expect(self, op: np.ndarray) -> complex:
        return expectation(op, self.mat)

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.mat)[0])

    def check_positive(self, pos_tol: float = POS_TOL):
        lo = self.min_eigenvalue()
        if lo < -pos_tol:
            raise ValueError(f"negative eigenvalue {lo:.3e} below -{pos_tol}")

    def mech_populations(self) -> np.ndarray:
        """Diagonal of the mechanics marginal (joint states only)."""
        spec = self.space
        if not isinstance(spec, HilbertSpec):
            raise ValueError("mech_populations needs a joint-space state")
        diag = np.real(np.diagonal(self.mat)).reshape(spec.cavity_dim, spec.mech_dim)
        return diag.sum(axis=0)


def _as_state(vec: np.ndarray, space) -> DensityMatrix:
    rho = np.outer(vec, vec.conj())
    rho /= np.trace(rho).real
    return DensityMatrix(rho, space)


def fock_state(n: int, dim: int) -> DensityMatrix:
    if not 0 <= n < dim:
        raise ValueError(f"Fock level {n} outside 0..{dim - 1}")
    vec = np.zeros(dim, dtype=complex)
    vec[n] = 1.0
    return _as_state(vec, dim)


def coherent_vector(alpha: complex, dim: int,
                    leak_tol: float = LEAK_TOL) -> np.ndarray:
    """Unit-norm truncated coherent state vector; errors on excessive leak."""
    n = np.arange(dim)
    # log of |alpha|^k / sqrt(k!) to dodge overflow, then phase
    with np.errstate(divide="ignore"):
        logmag = n * np.log(np.abs(alpha)) if alpha != 0 else np.where(n == 0, 0.0, -np.inf)
    logmag = logmag - 0.5 * np.cumsum(np.log(np.maximum(n, 1)))
    mag = np.exp(logmag - 0.5 * abs(alpha) ** 2)
    phase = np.exp(1j * n * np.angle(alpha)) if alpha != 0 else np.ones(dim)
    vec = mag * phase
    norm2 = float(np.sum(mag * mag))
    leak = 1.0 - norm2
    if leak > leak_tol:
        # invert the sizing rule for a helpful error
        a = abs(alpha)
        need = int(math.ceil(a * a + 6.0 * a + 10.0))
        raise TruncationError(
            f"coherent state |alpha|={a:.3g} leaks {leak:.3e} > {leak_tol:.1e} "
            f"at dim {dim}; need dim >= {need}",
            required_dim=need,
        )
    return vec / math.sqrt(norm2)


def coherent_state(alpha: complex, dim: int,
                   leak_tol: float = LEAK_TOL) -> DensityMatrix:
    return _as_state(coherent_vector(alpha, dim, leak_tol), dim)


def thermal_state(nbar: float, dim: int,
                  leak_tol: float = LEAK_TOL) -> DensityMatrix:
    """Bose-Einstein mixture p_n = nbar^n / (nbar+1)^(n+1), renormalized."""
    if nbar < 0:
        raise ValueError("nbar must be >= 0")
    if nbar == 0:
        return fock_state(0, dim)
    r = nbar / (nbar + 1.0)
    p = r ** np.arange(dim) / (nbar + 1.0)
    leak = r**dim  # geometric tail mass
    if leak > leak_tol:
        need = int(math.ceil(math.log(leak_tol) / math.log(r))) + 1
        raise TruncationError(
            f"thermal state nbar={nbar} leaks {leak:.3e} > {leak_tol:.1e} "
            f"at dim {dim}; need dim >= {need}",
            required_dim=need,
        )
    return DensityMatrix(np.diag(p / p.sum()).astype(complex), dim)


def product_state(cavity: DensityMatrix, mech: DensityMatrix,
                  spec: HilbertSpec) -> DensityMatrix:
    if cavity.dim != spec.cavity_dim or mech.dim != spec.mech_dim:
        raise ValueError("factor dimensions do not match the spec")
    return DensityMatrix(np.kron(cavity.mat, mech.mat), spec)
