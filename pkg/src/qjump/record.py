"""Measurement-record processing.

A raw homodyne record is dominated by local-oscillator noise; a causal
sliding average over a window much shorter than the Fock-state lifetime is
enough to expose the staircase of phonon levels.  Integrating the record
over a window of length w turns it into a generalized number measurement
with Gaussian likelihood

    P(x | n) = N(x; -2 chi n w, kappa w),

whose Bayes inversion over integer levels has mean -x/(2 chi w) and
variance kappa/(8 chi^2 w).  The jump detector maps the rescaled filtered
signal to integer levels with hysteresis so noise at a level midpoint does
not chatter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateEvidenceError
from .sme import PhononDistribution


@dataclass(frozen=True)
class FilteredSeries:
    """Causally filtered record; entries before ``warmup`` average a partial
    window and should be skipped by downstream detectors."""

    times: np.ndarray
    values: np.ndarray
    window: float
    warmup: int

    def __post_init__(self):
        if self.window <= 0:
            raise ValueError("window must be positive")
        if self.times.size != self.values.size:
            raise ValueError("times and values must have equal length")


@dataclass(frozen=True)
class JumpEvent:
    """A committed level change in a record or level series."""

    t: float
    from_n: int
    to_n: int

    @property
    def thermal_like(self) -> bool:
        """Single-quantum events; anything else cannot come from the bath alone."""
        return abs(self.to_n - self.from_n) == 1


def _uniform_dt(times: np.ndarray) -> float:
    if times.size < 2:
        raise ValueError("need at least two samples")
    dt = float(times[1] - times[0])
    if dt <= 0 or not np.allclose(np.diff(times), dt, rtol=1e-6, atol=dt * 1e-6):
        raise ValueError("record must be uniformly sampled")
    return dt


def sliding_average(times: np.ndarray, values: np.ndarray,
                    window: float) -> FilteredSeries:
    """Causal boxcar mean of the trailing ``window`` of the record.

    The first window-length of output averages over the partial available
    history and is marked as warm-up via ``FilteredSeries.warmup``.
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    dt = _uniform_dt(times)
    w = int(round(window / dt))
    if w < 2:
        raise ValueError(f"window {window:g} spans fewer than 2 samples (dt={dt:g})")
    csum = np.concatenate(([0.0], np.cumsum(values)))
    out = np.empty_like(values)
    out[w - 1:] = (csum[w:] - csum[:-w]) / w
    out[:w - 1] = csum[1:w] / np.arange(1, w)
    return FilteredSeries(times=times, values=out, window=w * dt, warmup=w - 1)


def integrate_window(times: np.ndarray, values: np.ndarray, t0: float,
                     delta_t: float) -> float:
    """Riemann sum of the record over [t0, t0 + delta_t).

    Sample k is the bin average over (times[k] - dt, times[k]], so the sum
    collects the bins whose end times fall inside the window.
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    dt = _uniform_dt(times)
    eps = 1e-9 * dt
    if t0 < times[0] - dt - eps or t0 + delta_t > times[-1] + eps:
        raise ValueError(
            f"window [{t0:g}, {t0 + delta_t:g}) outside record "
            f"[{times[0] - dt:g}, {times[-1]:g}]")
    mask = (times > t0 + eps) & (times <= t0 + delta_t + eps)
    if not np.any(mask):
        raise ValueError("window contains no samples")
    return float(values[mask].sum() * dt)


def likelihood(x: float, n: int, chi: float, kappa: float,
               delta_t: float) -> float:
    """Gaussian density of the windowed record value x given phonon level n."""
    if delta_t <= 0 or kappa <= 0:
        raise ValueError("kappa and delta_t must be positive")
    var = kappa * delta_t
    return math.exp(-((x + 2.0 * chi * n * delta_t) ** 2) / (2.0 * var)) \
        / math.sqrt(2.0 * math.pi * var)


def posterior_sharpness(chi: float, kappa: float, delta_t: float) -> float:
    """Variance kappa/(8 chi^2 delta_t) of the level estimate from one window."""
    if delta_t <= 0 or kappa <= 0 or chi == 0:
        raise ValueError("need kappa, delta_t > 0 and chi != 0")
    return kappa / (8.0 * chi**2 * delta_t)


def bayes_update(prior: PhononDistribution, x: float, chi: float,
                 kappa: float, delta_t: float) -> PhononDistribution:
    """Posterior over Fock levels after observing the windowed value x.

    The Gaussian level estimate (mean -x/(2 chi delta_t), variance
    kappa/(8 chi^2 delta_t)) is evaluated on the integers 0..n_max and
    renormalized there.  If every weight underflows to zero -- x wildly
    inconsistent with the prior's support -- DegenerateEvidenceError is
    raised rather than returning an arbitrary state.
    """
    delta = posterior_sharpness(chi, kappa, delta_t)
    n_est = -x / (2.0 * chi * delta_t)
    n = np.arange(prior.p.size)
    weights = prior.p * np.exp(-((n - n_est) ** 2) / (2.0 * delta))
    total = weights.sum()
    if total <= 0.0:
        raise DegenerateEvidenceError(
            f"posterior underflowed: level estimate {n_est:.3g} with variance "
            f"{delta:.3g} is inconsistent with levels 0..{prior.n_max}")
    return PhononDistribution(weights)


def detect_jumps(filtered: FilteredSeries, gain: float,
                 hysteresis: float = 0.3) -> list[JumpEvent]:
    """Extract committed level transitions from a filtered record.

    ``gain`` is the record displacement per phonon, stated by the caller:
    2*eta*chi for a photocurrent record or 2*chi/kappa for a quadrature
    trajectory; the signal is assumed to sit near -gain * level.  A change
    from level L is committed only when the rescaled signal passes the
    midpoint to the neighbouring level by more than ``hysteresis`` levels,
    which suppresses chatter; levels are floored at 0.
    """
    if gain == 0:
        raise ValueError("gain must be nonzero")
    if not 0 < hysteresis < 0.5:
        raise ValueError("hysteresis must lie in (0, 0.5)")
    signal = -filtered.values / gain
    start = min(filtered.warmup, signal.size - 1)
    level = max(int(round(signal[start])), 0)
    up = 0.5 + hysteresis
    events = []
    for k in range(start, signal.size):
        s = signal[k]
        while s > level + up:
            events.append(JumpEvent(float(filtered.times[k]), level, level + 1))
            level += 1
        while s < level - up and level > 0:
            events.append(JumpEvent(float(filtered.times[k]), level, level - 1))
            level -= 1
    return events


def level_transitions(times: np.ndarray, series: np.ndarray,
                      min_dwell: float = 0.0) -> list[JumpEvent]:
    """Transitions of the rounded series, ignoring dwells below min_dwell.

    Used to pull the "true" jump times out of a simulated mean-phonon
    trajectory.  Excursions shorter than ``min_dwell`` are treated as never
    having left the previous level: a record integrated over a finite
    window cannot resolve them, and they are excluded from recovery
    denominators on the same grounds.
    """
    times = np.asarray(times, dtype=float)
    levels = np.rint(np.asarray(series, dtype=float)).astype(int)
    dt = _uniform_dt(times)
    # run-length encode, then drop runs shorter than min_dwell
    change = np.flatnonzero(np.diff(levels)) + 1
    starts = np.concatenate(([0], change))
    lengths = np.diff(np.concatenate((starts, [levels.size])))
    accepted_levels = []
    accepted_starts = []
    for s, ln in zip(starts, lengths):
        if ln * dt < min_dwell and accepted_levels:
            continue  # too brief: remain on the previous accepted level
        lev = levels[s]
        if accepted_levels and accepted_levels[-1] == lev:
            continue
        accepted_levels.append(lev)
        accepted_starts.append(s)
    return [
        JumpEvent(float(times[s]), int(prev), int(cur))
        for prev, cur, s in zip(accepted_levels, accepted_levels[1:],
                                accepted_starts[1:])
    ]


def match_events(true_events: list[JumpEvent], detected: list[JumpEvent],
                 tol: float) -> int:
    """Count true events matched one-to-one by a detection within tol
    (same direction, nearest-in-time greedy pairing)."""
    free = list(detected)
    matched = 0
    for ev in true_events:
        best = None
        best_gap = tol
        sign = ev.to_n - ev.from_n
        for d in free:
            gap = abs(d.t - ev.t)
            if gap <= best_gap and (d.to_n - d.from_n) * sign > 0:
                best, best_gap = d, gap
        if best is not None:
            free.remove(best)
            matched += 1
    return matched
