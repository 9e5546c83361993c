"""Ensemble execution and conditional Fock-state statistics.

Averaging the conditional mean phonon number over many records must
reproduce the unconditional solution; that consistency check is the main
consumer of ``run_ensemble``.  ``fock_histogram`` bins round(mean_n) over a
trajectory, which is how the conditional number statistics are compared
against the thermal law.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EnsembleRunError
from .sme import PhononDistribution, TrajectoryRecord, simulate


@dataclass(frozen=True)
class EnsembleSummary:
    """Across-trajectory mean and standard error of the conditional mean
    phonon number on a common time grid."""

    times: np.ndarray
    mean_of_mean_n: np.ndarray
    stderr: np.ndarray
    M: int

    def __post_init__(self):
        if self.M < 1:
            raise ValueError("M must be >= 1")
        if np.any(self.stderr < 0):
            raise ValueError("negative standard error")


def run_ensemble(params, initial, mode: str, M: int, base_seed: int,
                 spec=None, sample_every: int = 1,
                 keep_records: bool = False, **sim_kwargs):
    """Run M independent trajectories seeded from (base_seed, k).

    Trajectories share nothing and are aggregated by index, so the summary
    is bit-reproducible regardless of execution order.  If any trajectory
    fails, the others still run and an EnsembleRunError listing the failed
    indices is raised at the end.

    Returns an EnsembleSummary, or (EnsembleSummary, records) when
    ``keep_records`` is set.
    """
    if M < 2:
        raise ValueError("an ensemble needs M >= 2")
    records: list[TrajectoryRecord | None] = [None] * M
    failures = {}
    for k in range(M):
        try:
            records[k] = simulate(params, initial, mode, spec=spec,
                                  sample_every=sample_every,
                                  seed=base_seed, traj_key=k, **sim_kwargs)
        except Exception as exc:  # noqa: BLE001 - reported per index below
            failures[k] = f"{type(exc).__name__}: {exc}"
    if failures:
        raise EnsembleRunError(failures)
    stack = np.stack([rec.mean_n for rec in records])
    mean = stack.mean(axis=0)
    stderr = stack.std(axis=0, ddof=1) / np.sqrt(M)
    summary = EnsembleSummary(times=records[0].times.copy(),
                              mean_of_mean_n=mean, stderr=stderr, M=M)
    return (summary, records) if keep_records else summary


@dataclass(frozen=True)
class FockHistogram:
    """Occupation frequencies of round(mean_n) over retained samples."""

    weights: np.ndarray
    counts: np.ndarray
    total_samples: int

    def __post_init__(self):
        if self.total_samples < 1:
            raise ValueError("empty histogram")
        if abs(self.weights.sum() - 1.0) > 1e-12:
            raise ValueError("weights must sum to 1")

    @property
    def n_max(self) -> int:
        return self.weights.size - 1


def fock_histogram(traj: TrajectoryRecord, discard: float = 0.0,
                   n_max: int = None) -> FockHistogram:
    """Histogram of the rounded conditional mean phonon number.

    Samples with t <= discard are dropped (warm-up); levels above n_max are
    counted into the top bin.  n_max defaults to the largest level seen.
    """
    keep = traj.times > discard
    if not np.any(keep):
        raise ValueError(f"no samples beyond discard={discard:g}")
    levels = np.rint(traj.mean_n[keep]).astype(int)
    levels = np.clip(levels, 0, None)
    if n_max is None:
        n_max = int(levels.max())
    levels = np.clip(levels, 0, n_max)
    counts = np.bincount(levels, minlength=n_max + 1)
    total = int(counts.sum())
    return FockHistogram(weights=counts / total, counts=counts,
                         total_samples=total)


def thermal_distribution(nbar: float, n_max: int) -> PhononDistribution:
    """Bose-Einstein weights (nbar/(nbar+1))^n renormalized on 0..n_max."""
    return PhononDistribution.thermal(nbar, n_max)


def total_variation(p, q) -> float:
    """Total-variation distance (1/2) sum |p_n - q_n| between distributions."""
    pa = p.p if isinstance(p, PhononDistribution) else np.asarray(p, dtype=float)
    qa = q.p if isinstance(q, PhononDistribution) else np.asarray(q, dtype=float)
    if pa.shape != qa.shape:
        raise ValueError(f"support mismatch: {pa.shape} vs {qa.shape}")
    return 0.5 * float(np.abs(pa - qa).sum())
