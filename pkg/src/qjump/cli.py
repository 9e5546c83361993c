"""Command-line front end.

Subcommands:

    qjump figure <k>      reproduce the parameter regime of figure k (1..4):
                          trajectory/histogram CSVs plus SVG quick-looks,
                          with the regime report printed per parameter set
    qjump verify <suite>  run a verification suite (oracles | conditions |
                          record); JSON-lines report, exit 0 iff all pass
    qjump feasibility     evaluate the two conditions for a physical device
    qjump run <config>    run a flat key=value experiment config

Rates in figure regimes and gnbar-units configs are multiples of
gamma*nbar (so gamma = 1/nbar) and times are in units of 1/(gamma*nbar);
feasibility uses absolute SI units.  Each figure command has a fixed
default seed so published artifacts are reproducible; --seed overrides.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import analytic, record, regimes, stats
from .errors import QjumpError
from .hilbert import DensityMatrix, HilbertSpec, fock_state, product_state, thermal_state
from .lindblad import SimParams, default_dt, evolve
from .output import (
    read_csv,
    svg_line_plot,
    write_histogram_csv,
    write_jsonl,
    write_trajectory_csv,
)
from .sme import PhononDistribution, simulate


# --------------------------------------------------------------------------
# experiment configs


@dataclass
class ExperimentConfig:
    """One parsed experiment: rates in gnbar units unless units=absolute."""

    mode: str = "adiabatic"            # full | adiabatic | lindblad
    nbar: float = 0.5
    kappa: float = 100.0
    chi: float = None
    chi_over_kappa: float = None
    big_gamma: float = None            # chi^2/kappa, alternative to chi
    gamma: float = None                # default 1/nbar in gnbar units
    eta: float = 1.0
    dt: float = None                   # default: resolve all rates
    t_final: float = 2.0
    seed: int = 1
    n_max: int = 3                     # largest level to resolve / SRE top level
    cavity_dim: int = None             # default: pointer-state sizing
    mech_dim: int = None
    initial: str = "ground"            # ground | fock:n | thermal:x
    window: float = None               # default: fock_lifetime(n_max)/10
    sample_every: int = 1
    m: int = 1                         # ensemble size
    units: str = "gnbar"
    dtype: str = "complex128"
    truncation_guard: float = 1e-6
    out: str = "out"

    def resolve_chi(self) -> float:
        given = [v is not None for v in (self.chi, self.chi_over_kappa, self.big_gamma)]
        if sum(given) != 1:
            raise ValueError("give exactly one of chi, chi_over_kappa, big_gamma")
        if self.chi is not None:
            return self.chi
        if self.chi_over_kappa is not None:
            return self.chi_over_kappa * self.kappa
        return math.sqrt(self.big_gamma * self.kappa)

    def sim_params(self) -> SimParams:
        chi = self.resolve_chi()
        gamma = self.gamma
        if gamma is None:
            if self.units != "gnbar":
                raise ValueError("gamma is required in absolute units")
            if self.nbar <= 0:
                raise ValueError("gnbar units need nbar > 0 (or give gamma)")
            gamma = 1.0 / self.nbar
        dt = self.dt
        if dt is None:
            dt = default_dt(self.kappa, chi, gamma, self.nbar, self.n_max)
        return SimParams(kappa=self.kappa, gamma=gamma, nbar=self.nbar,
                         chi=chi, eta=self.eta, dt=dt, t_final=self.t_final,
                         seed=self.seed)

    def spec(self, chi: float) -> HilbertSpec:
        if self.cavity_dim is not None and self.mech_dim is not None:
            return HilbertSpec(self.cavity_dim, self.mech_dim)
        auto = HilbertSpec.for_pointer_states(chi, self.kappa, self.n_max)
        return HilbertSpec(self.cavity_dim or auto.cavity_dim,
                           self.mech_dim or auto.mech_dim)

    def window_or_default(self, gamma: float) -> float:
        if self.window is not None:
            return self.window
        return regimes.fock_lifetime(self.n_max, self.nbar, gamma) / 10.0

    def initial_distribution(self) -> PhononDistribution:
        kind, _, arg = self.initial.partition(":")
        if kind == "ground":
            return PhononDistribution.ground(self.n_max)
        if kind == "fock":
            return PhononDistribution.fock(int(arg), self.n_max)
        if kind == "thermal":
            return PhononDistribution.thermal(float(arg), self.n_max)
        raise ValueError(f"unknown initial state {self.initial!r}")

    def initial_joint(self, spec: HilbertSpec) -> DensityMatrix:
        kind, _, arg = self.initial.partition(":")
        cavity = fock_state(0, spec.cavity_dim)
        if kind == "ground":
            mech = fock_state(0, spec.mech_dim)
        elif kind == "fock":
            mech = fock_state(int(arg), spec.mech_dim)
        elif kind == "thermal":
            mech = thermal_state(float(arg), spec.mech_dim)
        else:
            raise ValueError(f"unknown initial state {self.initial!r}")
        return product_state(cavity, mech, spec)


_CONFIG_TYPES = {
    "nbar": float, "kappa": float, "chi": float, "chi_over_kappa": float,
    "big_gamma": float, "gamma": float, "eta": float, "dt": float,
    "t_final": float, "seed": int, "n_max": int, "cavity_dim": int,
    "mech_dim": int, "window": float, "sample_every": int, "m": int,
    "truncation_guard": float,
}


def parse_config(path) -> ExperimentConfig:
    """Parse a flat 'key = value' file ('#' starts a comment)."""
    cfg = ExperimentConfig()
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not hasattr(cfg, key):
            raise ValueError(f"{path}:{lineno}: bad config line {raw!r}")
        setattr(cfg, key, _CONFIG_TYPES.get(key, str)(value))
    return cfg


# --------------------------------------------------------------------------
# figure regimes (paper units: gamma*nbar = 1)


def fig1_config(seed: int = 101) -> ExperimentConfig:
    """Good-measurement limit: nbar=0.5, chi/kappa=1.5, kappa=100,
    Gamma=225 (all in gamma*nbar units), ground-state start."""
    return ExperimentConfig(mode="full", nbar=0.5, kappa=100.0,
                            chi_over_kappa=1.5, t_final=2.0, seed=seed,
                            n_max=3, sample_every=4, window=None)


def fig2_configs(seed: int = 201) -> list[tuple[str, ExperimentConfig]]:
    """Adiabatic-condition sweep: Gamma=100 fixed, kappa in {1, 10, 100}.

    The two non-adiabatic panels need wide cavity spaces because the field
    cannot lock to the pointer amplitudes; their dimensions come from runs
    monitored by the truncation guard, not from the pointer sizing rule,
    and they integrate in complex64 to halve memory traffic.
    """
    common = dict(mode="full", nbar=0.5, big_gamma=100.0, window=0.02)
    return [
        ("a", ExperimentConfig(kappa=1.0, t_final=5.0, seed=seed,
                               cavity_dim=170, mech_dim=11, dt=2e-4,
                               sample_every=10, dtype="complex64",
                               truncation_guard=1e-4, n_max=1, **common)),
        ("b", ExperimentConfig(kappa=10.0, t_final=3.0, seed=seed + 1,
                               cavity_dim=200, mech_dim=8, dt=1e-4,
                               sample_every=10, dtype="complex64",
                               truncation_guard=1e-4, n_max=1, **common)),
        ("c", ExperimentConfig(kappa=100.0, t_final=4.0, seed=seed + 2,
                               n_max=3, sample_every=12, **common)),
    ]


def fig3_configs(seed: int = 301) -> list[tuple[str, ExperimentConfig]]:
    """Fast-measurement sweep on the adiabatic integrator: kappa=10^4,
    Gamma in {1, 10, 100}."""
    common = dict(mode="adiabatic", nbar=0.5, kappa=1e4, t_final=8.0,
                  n_max=13, sample_every=1000, window=0.02)
    return [
        ("a", ExperimentConfig(big_gamma=1.0, seed=seed, **common)),
        ("b", ExperimentConfig(big_gamma=10.0, seed=seed + 1, **common)),
        ("c", ExperimentConfig(big_gamma=100.0, seed=seed + 2, **common)),
    ]


def fig4_configs(seed: int = 401) -> list[tuple[str, ExperimentConfig]]:
    """Conditional Fock statistics: kappa=100, Gamma=400, horizon 30."""
    common = dict(mode="adiabatic", kappa=100.0, big_gamma=400.0,
                  t_final=30.0, sample_every=1, window=None)
    return [
        ("a", ExperimentConfig(nbar=0.5, n_max=13, seed=seed, **common)),
        ("b", ExperimentConfig(nbar=1.0, n_max=20, seed=seed + 1, **common)),
    ]


def run_experiment(cfg: ExperimentConfig):
    """Run one config; returns (params, TrajectoryRecord or evolve output)."""
    params = cfg.sim_params()
    if cfg.mode == "adiabatic":
        rec = simulate(params, cfg.initial_distribution(), "adiabatic",
                       sample_every=cfg.sample_every)
        return params, rec
    spec = cfg.spec(params.chi)
    if cfg.mode == "full":
        rec = simulate(params, cfg.initial_joint(spec), "full", spec=spec,
                       sample_every=cfg.sample_every,
                       dtype=np.complex64 if cfg.dtype == "complex64" else np.complex128,
                       truncation_guard=cfg.truncation_guard)
        return params, rec
    if cfg.mode == "lindblad":
        return params, evolve(cfg.initial_joint(spec), params, spec,
                              sample_every=cfg.sample_every)
    raise ValueError(f"unknown mode {cfg.mode!r}")


def _figure_meta(label: str, cfg: ExperimentConfig, params: SimParams) -> dict:
    return {
        "figure": label, "mode": cfg.mode, "units": "gamma*nbar = 1",
        "nbar": params.nbar, "gamma": params.gamma, "kappa": params.kappa,
        "chi": params.chi, "Gamma": params.meas_rate, "eta": params.eta,
        "dt": params.dt, "t_final": params.t_final, "seed": params.seed,
        "sample_every": cfg.sample_every,
    }


def _write_trajectory_outputs(outdir: Path, name: str, cfg, params, rec,
                              thin: int = 1):
    window = cfg.window_or_default(params.gamma)
    filt = record.sliding_average(rec.times, rec.photocurrent, window)
    meta = _figure_meta(name, cfg, params)
    meta["filter_window"] = window
    if thin > 1:
        meta["thinned_by"] = thin
    sl = slice(None, None, thin)
    thinned = rec if thin == 1 else _thin_record(rec, thin)
    write_trajectory_csv(outdir / f"{name}.csv", thinned,
                         filt.values[sl], meta)
    level_from_record = -filt.values / (2.0 * params.eta * params.chi)
    svg_line_plot(
        outdir / f"{name}.svg", rec.times,
        {"mean_n": rec.mean_n,
         "level from filtered record": level_from_record,
         "var_n": rec.var_n},
        title=f"{name}: conditional phonon number "
              f"(kappa={params.kappa:g}, Gamma={params.meas_rate:g})")


def _thin_record(rec, thin):
    from dataclasses import replace
    sl = slice(None, None, thin)
    return replace(rec, times=rec.times[sl], mean_n=rec.mean_n[sl],
                   var_n=rec.var_n[sl], quad_phase=rec.quad_phase[sl],
                   photocurrent=rec.photocurrent[sl], dW=rec.dW[sl],
                   diag={})


def cmd_figure(args) -> int:
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    makers = {1: lambda: [("", fig1_config())], 2: fig2_configs,
              3: fig3_configs, 4: fig4_configs}
    panels = makers[args.k]()
    for label, cfg in panels:
        if args.seed is not None:
            cfg.seed = args.seed + ord(label) - ord("a") if label else args.seed
        if args.dt is not None:
            cfg.dt = args.dt
        name = f"fig{args.k}{label}"
        params = cfg.sim_params()
        print(f"== {name}: mode={cfg.mode} nbar={params.nbar:g} "
              f"kappa={params.kappa:g} chi={params.chi:g} "
              f"Gamma={params.meas_rate:g} dt={params.dt:g} "
              f"t_final={params.t_final:g} seed={params.seed}")
        report = regimes.check_conditions(params, n_max=1)
        for line in report.lines():
            print("   " + line)
        params, rec = run_experiment(cfg)
        if args.k == 4:
            hist = stats.fock_histogram(rec, discard=0.0, n_max=cfg.n_max)
            thermal = stats.thermal_distribution(params.nbar, cfg.n_max)
            tv = stats.total_variation(hist.weights, thermal.p)
            meta = _figure_meta(name, cfg, params)
            meta["total_variation_vs_thermal"] = _round(tv)
            write_histogram_csv(outdir / f"{name}_histogram.csv",
                                hist.weights, thermal.p, meta)
            svg_line_plot(outdir / f"{name}_histogram.svg",
                          np.arange(cfg.n_max + 1),
                          {"conditional": hist.weights, "thermal": thermal.p},
                          title=f"{name}: Fock statistics (nbar={params.nbar:g}, "
                                f"TV={tv:.3f})")
            _write_trajectory_outputs(outdir, name, cfg, params, rec, thin=500)
            print(f"   total variation vs thermal: {tv:.4f}")
        else:
            _write_trajectory_outputs(outdir, name, cfg, params, rec)
    print(f"outputs in {outdir}/")
    return 0


# --------------------------------------------------------------------------
# verify suites


def _round(x, sig: int = 6):
    return float(f"{x:.{sig}g}")


def _check(suite, name, measured, bound, ok, **extra):
    entry = {"suite": suite, "check": name, "measured": _round(measured),
             "bound": bound, "pass": bool(ok)}
    entry.update(extra)
    return entry


def verify_oracles() -> list[dict]:
    checks = []
    # closed-form joint state vs RK4 integration, gamma = 0
    spec = HilbertSpec(20, 6)
    alpha = 0.3
    init = analytic.InitialWeights.mech_vector_with_cavity(
        [1.0, 1.0, 0.0], alpha=alpha)
    worst = 0.0
    for kt in (0.5, 2.0, 5.0):
        p = SimParams(kappa=1.0, gamma=0.0, nbar=0.0, chi=1.0, dt=0.005,
                      t_final=kt)
        mech = np.zeros((6, 6), dtype=complex)
        mech[:2, :2] = 0.5
        from .hilbert import coherent_vector
        u = coherent_vector(alpha, 20)
        rho0 = DensityMatrix(np.kron(np.outer(u, u.conj()), mech), spec)
        samples, _ = evolve(rho0, p, spec, sample_every=int(round(kt / 0.005)))
        got = samples[-1][1].mat
        want = analytic.walls_state(init, 1.0, 1.0, kt, spec).mat
        worst = max(worst, float(np.max(np.abs(got - want))))
    checks.append(_check("oracles", "lindblad_matches_walls_state", worst,
                         1e-6, worst <= 1e-6, times="kt in {0.5, 2, 5}"))

    # first moments vs closed forms over kt in [0, 10], gamma = kappa/100
    spec = HilbertSpec(16, 9)
    p = SimParams(kappa=1.0, gamma=0.01, nbar=0.5, chi=0.1, dt=0.005,
                  t_final=10.0)
    rho0 = product_state(fock_state(0, 16), fock_state(1, 9), spec)
    samples, _ = evolve(rho0, p, spec, sample_every=40)
    from .hilbert import CAVITY, MECHANICS, annihilation, lift, number_op
    a = lift(annihilation(16), CAVITY, spec)
    nb = lift(number_op(9), MECHANICS, spec)
    worst_n = worst_a = 0.0
    for t, state in samples[1:]:
        n_got = state.expect(nb).real
        n_want = analytic.mean_phonon_unconditional(1.0, 0.5, 0.01, t)
        worst_n = max(worst_n, abs(n_got - n_want) / abs(n_want))
        a_got = state.expect(a)
        a_want = analytic.mean_field_unconditional(0.0, 1.0, 0.5, 0.1, 0.01,
                                                   1.0, t)
        worst_a = max(worst_a, abs(a_got - a_want) / abs(a_want))
    checks.append(_check("oracles", "mean_phonon_matches_moment_solution",
                         worst_n, 1e-4, worst_n <= 1e-4))
    checks.append(_check("oracles", "mean_field_matches_moment_solution",
                         worst_a, 1e-4, worst_a <= 1e-4))
    return checks


def verify_conditions() -> list[dict]:
    checks = []
    cases = [
        ("fig2", "adiabatic", [(1.0, 100.0), (10.0, 100.0), (100.0, 100.0)]),
        ("fig3", "fast_meas", [(1e4, 1.0), (1e4, 10.0), (1e4, 100.0)]),
    ]
    expected = ["fails", "borderline", "passes"]
    for fig, which, triples in cases:
        for (kappa, big_gamma), want in zip(triples, expected):
            chi = math.sqrt(big_gamma * kappa)
            p = SimParams(kappa=kappa, gamma=2.0, nbar=0.5, chi=chi,
                          dt=1e-6, t_final=1e-6)
            rep = regimes.check_conditions(p, n_max=1)
            ratio = rep.adiabatic_ratio if which == "adiabatic" else rep.fast_meas_ratio
            got = ("passes" if ratio >= regimes.CONDITION_THRESHOLD
                   else "borderline" if ratio >= 1.0 else "fails")
            checks.append(_check(
                "conditions", f"{fig}_{which}_ratio_{ratio:g}", ratio, want,
                got == want, classified=got))
    return checks


def verify_record() -> list[dict]:
    checks = []
    rng = np.random.default_rng(7)
    # posterior variance formula vs 1/(8 Gamma dt) on random parameters
    worst = 0.0
    for _ in range(50):
        chi, kappa, w = rng.uniform(0.1, 50.0, size=3)
        delta = record.posterior_sharpness(chi, kappa, w)
        worst = max(worst, abs(delta * 8.0 * (chi**2 / kappa) * w - 1.0))
    checks.append(_check("record", "sharpness_is_inverse_8_Gamma_dt", worst,
                         1e-12, worst <= 1e-12))
    # Gamma*dt = 10 reproduces the headline posterior variance 0.0125
    delta = record.posterior_sharpness(10.0, 1.0, 0.1)
    checks.append(_check("record", "sharpness_at_Gamma_dt_10", delta, 0.0125,
                         abs(delta - 0.0125) < 1e-15))
    # window = lifetime/10 turns the sharpness condition into the
    # fast-measurement condition up to an order-one factor
    worst_ratio = None
    ok = True
    for nbar in (0.3, 0.5, 1.0, 2.0):
        for n_max in (1, 2, 4):
            gamma = 1.0 / nbar
            rate = regimes.thermalization_rate(n_max, nbar, gamma)
            w = regimes.fock_lifetime(n_max, nbar, gamma) / 10.0
            for big_gamma in (0.1 * rate, rate, 10.0 * rate, 100.0 * rate):
                sharp = 8.0 * big_gamma * w          # the 8*Gamma*dt >> 1 side
                fast = big_gamma / rate              # the Gamma >> rate side
                ratio = sharp / fast
                worst_ratio = ratio if worst_ratio is None else worst_ratio
                ok &= 0.1 <= ratio <= 10.0
    checks.append(_check("record", "window_lifetime_over_10_gives_fast_condition",
                         worst_ratio, "within one order of magnitude", ok))
    # likelihood normalization by quadrature
    xs = np.linspace(-60.0, 40.0, 400001)
    dens = [record.likelihood(x, 2, chi=1.0, kappa=2.0, delta_t=3.0) for x in xs]
    integral = float(np.trapezoid(dens, xs))
    checks.append(_check("record", "likelihood_normalized", integral, 1.0,
                         abs(integral - 1.0) <= 1e-8))
    # sharp-window Bayes update collapses a flat prior onto the true level
    prior = PhononDistribution(np.full(8, 1.0 / 8.0))
    chi, kappa = 1.0, 1.0
    w = 1.0 / (8.0 * 0.01)  # Delta = 0.01
    post = record.bayes_update(prior, x=-2.0 * chi * 3 * w, chi=chi,
                               kappa=kappa, delta_t=w)
    checks.append(_check("record", "bayes_collapse_on_level_3", post.p[3],
                         0.99, post.p[3] > 0.99))
    return checks


_SUITES = {"oracles": verify_oracles, "conditions": verify_conditions,
           "record": verify_record}


def cmd_verify(args) -> int:
    checks = _SUITES[args.suite]()
    for c in checks:
        print(json.dumps(c))
    if args.out:
        write_jsonl(args.out, checks)
    return 0 if all(c["pass"] for c in checks) else 1


# --------------------------------------------------------------------------
# feasibility


def cmd_feasibility(args) -> int:
    if args.chi is not None and args.G is not None:
        raise ValueError("give either --chi or --G/--alpha0, not both")
    chi = args.chi
    if chi is None and args.G is not None:
        if args.alpha0 is None:
            raise ValueError("--G needs --alpha0")
        chi = regimes.chi_from_drive(args.G, args.alpha0)
        print(f"chi = 2 G alpha0 = {chi:.6g} 1/s")
    if chi is None:
        chi = 10.0  # membrane-in-the-middle estimate at 10 uW drive
    rep = regimes.feasibility(args.T, args.Q, args.kappa, chi)
    for line in rep.lines():
        print(line)
    verdict = "feasible" if (rep.adiabatic_ok and rep.fast_ok) else "not feasible"
    print(f"jump observation: {verdict} at threshold "
          f"{regimes.CONDITION_THRESHOLD:g}x")
    return 0


# --------------------------------------------------------------------------
# config runner


def cmd_run(args) -> int:
    cfg = parse_config(args.config)
    outdir = Path(cfg.out)
    outdir.mkdir(parents=True, exist_ok=True)
    params = cfg.sim_params()
    report = regimes.check_conditions(params, cfg.n_max)
    for line in report.lines():
        print("   " + line)
    if cfg.m >= 2:
        if cfg.mode != "adiabatic":
            raise ValueError("ensembles are supported for adiabatic mode")
        summary = stats.run_ensemble(params, cfg.initial_distribution(),
                                     "adiabatic", cfg.m, base_seed=cfg.seed,
                                     sample_every=cfg.sample_every)
        lines = [f"# {k} = {v}" for k, v in _figure_meta("run", cfg, params).items()]
        lines.append("time,mean_of_mean_n,stderr")
        for t, m, s in zip(summary.times, summary.mean_of_mean_n, summary.stderr):
            lines.append(f"{t:.17g},{m:.17g},{s:.17g}")
        (outdir / "ensemble.csv").write_text("\n".join(lines) + "\n")
        print(f"ensemble of {cfg.m} trajectories -> {outdir / 'ensemble.csv'}")
        return 0
    params, rec = run_experiment(cfg)
    if cfg.mode == "lindblad":
        samples, _ = rec
        _write_lindblad_csv(outdir / "trajectory.csv", cfg, params, samples)
    else:
        _write_trajectory_outputs(outdir, "trajectory", cfg, params, rec)
    print(f"outputs in {outdir}/")
    return 0


def _write_lindblad_csv(path, cfg, params, samples):
    from .hilbert import CAVITY, MECHANICS, annihilation, lift, number_op
    spec = samples[0][1].space
    a = lift(annihilation(spec.cavity_dim), CAVITY, spec)
    nb = lift(number_op(spec.mech_dim), MECHANICS, spec)
    nb2 = nb @ nb
    rows = []
    for t, state in samples:
        mean = state.expect(nb).real
        var = state.expect(nb2).real - mean**2
        quad = 2.0 * state.expect(a).imag
        rows.append((t, mean, var, quad, math.nan, math.nan))
    lines = [f"# {k} = {v}" for k, v in _figure_meta("run", cfg, params).items()]
    lines.append("time,mean_n,var_n,quad_phase,i_h_raw,i_h_filtered")
    for row in rows:
        lines.append(",".join(format(v, ".17g") for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="qjump",
        description="Phonon-number quantum-jump trajectory simulator")
    sub = ap.add_subparsers(dest="command", required=True)

    fig = sub.add_parser("figure", help="reproduce a figure regime (1..4)")
    fig.add_argument("k", type=int, choices=(1, 2, 3, 4))
    fig.add_argument("--seed", type=int, default=None)
    fig.add_argument("--dt", type=float, default=None)
    fig.add_argument("--out", default="out")
    fig.set_defaults(func=cmd_figure)

    ver = sub.add_parser("verify", help="run a verification suite")
    ver.add_argument("suite", choices=sorted(_SUITES))
    ver.add_argument("--out", default=None, help="also write a JSON-lines report")
    ver.set_defaults(func=cmd_verify)

    fea = sub.add_parser("feasibility", help="device feasibility calculator")
    fea.add_argument("--T", type=float, default=0.3, help="bath temperature [K]")
    fea.add_argument("--Q", type=float, default=1.2e7, help="mechanical quality factor")
    fea.add_argument("--kappa", type=float, default=0.3e6, help="cavity rate [1/s]")
    fea.add_argument("--chi", type=float, default=10.0,
                     help="coupling rate [1/s]; omit when giving --G/--alpha0")
    fea.add_argument("--G", type=float, default=None,
                     help="quadratic single-photon coupling [1/s]")
    fea.add_argument("--alpha0", type=float, default=None,
                     help="steady intracavity amplitude (real, >= 0)")
    fea.set_defaults(func=cmd_feasibility)

    run = sub.add_parser("run", help="run an experiment config file")
    run.add_argument("config")
    run.set_defaults(func=cmd_run)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (QjumpError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
