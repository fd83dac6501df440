"""Randomized consistency suite behind ``kickosc verify``.

Hard checks compare independent computation routes and must hold to fixed
tolerances. Diagnostics compare the printed special-case formulas with the
exact values; they are reported, never failed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from kickosc import chebyshev as cheb
from kickosc import observables as obs
from kickosc import propagator as prop
from kickosc import stability as stab

N_TIME_SAMPLES = 64

TOLERANCES = {
    "unimodularity": 1e-12,
    "closed_form_vs_direct": 1e-9,
    "pseudo_norm": 1e-10,
    "purity": 1e-10,
    "energy_identity_vs_mode": 1e-10,
    "sigma_xx_expanded_vs_mode": 1e-10,
    "convention_shift": 1e-10,
}


@dataclass
class CheckResult:
    name: str
    tolerance: float
    max_error: float = 0.0
    worst: prop.KickSchedule | None = None

    @property
    def passed(self) -> bool:
        return self.max_error <= self.tolerance

    def update(self, err: float, s: prop.KickSchedule) -> None:
        if not err <= self.max_error:  # NaN counts as a failure
            self.max_error = err if not math.isnan(err) else math.inf
            self.worst = s


@dataclass
class VerifyReport:
    seed: int
    cases: int
    checks: list[CheckResult] = field(default_factory=list)
    diagnostics: list[tuple[str, str]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def random_schedules(seed: int, cases: int) -> list[prop.KickSchedule]:
    """Seeded schedules: n <= 100, |kappa/omega0| <= 5, omega0 tau in (0.1, 4 pi)."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(cases):
        omega0 = float(rng.uniform(0.5, 2.0))
        k = float(rng.uniform(-5.0, 5.0))
        phase = float(rng.uniform(0.1, 4.0 * math.pi))
        n = int(rng.integers(1, 101))
        out.append(prop.KickSchedule(omega0, k * omega0, phase / omega0, n))
    return out


def _rel(a: complex, b: complex, scale: float) -> float:
    return abs(a - b) / max(1.0, scale)


def check_schedule(s: prop.KickSchedule, ctx: obs.PhysicalContext) -> dict[str, float]:
    """Errors of every hard check for one schedule (n_kicks >= 1)."""
    direct = prop.propagate_direct(s)
    closed = prop.propagate_closed_form(s)
    scale = direct.max_abs()
    errs = {
        "unimodularity": direct.unimodularity_defect(),
        "closed_form_vs_direct": max(_rel(a, b, scale) for a, b in zip(direct.entries(), closed.entries())),
    }

    c_closed = prop.ModeCoefficients(closed.m11, closed.m21, s.n_kicks)
    c_seq = prop.sequential_coefficients(s)
    w_closed = obs.energy_from_mode(c_closed)
    w_seq = obs.energy_from_mode(c_seq)
    errs["pseudo_norm"] = max(
        abs(c_closed.pseudo_norm() - 1.0) / w_closed,
        abs(c_seq.pseudo_norm() - 1.0) / w_seq,
    )
    errs["energy_identity_vs_mode"] = abs(obs.energy_identity_form(s) - w_seq) / w_seq

    phase = prop.convention_phase(s)
    errs["convention_shift"] = max(
        _rel(phase * c_seq.a, c_closed.a, abs(c_closed.a)),
        _rel(phase * c_seq.b, c_closed.b, abs(c_closed.a)),
        abs(abs(c_seq.a) - abs(c_closed.a)) / abs(c_closed.a),
        abs(abs(c_seq.b) - abs(c_closed.b)) / abs(c_closed.a),
    )

    # sample one free period after the last kick
    t0 = (s.n_kicks - 1) * s.tau
    ts = t0 + np.linspace(0.0, 2.0 * math.pi / s.omega0, N_TIME_SAMPLES, endpoint=False)
    purity = 0.0
    sxx = 0.0
    envelope = ctx.x_unit * w_closed
    for t in ts:
        t = float(t)
        for c in (c_closed, c_seq):
            cov = obs.covariances_from_mode(ctx, prop.mode_function(c, s, t))
            purity = max(purity, cov.purity_defect(ctx.hbar))
        cov = obs.covariances_from_mode(ctx, prop.mode_function(c_closed, s, t))
        sxx = max(sxx, abs(obs.sigma_xx_expanded(ctx, s, t) - cov.sigma_xx) / envelope)
    errs["purity"] = purity
    errs["sigma_xx_expanded_vs_mode"] = sxx
    return errs


def _fmt(v: float) -> str:
    return format(v, ".6e")


def diagnostics(ctx: obs.PhysicalContext, schedules: list[prop.KickSchedule]) -> list[tuple[str, str]]:
    """Printed-versus-reconciled comparisons; informational only."""
    out = []

    s = prop.KickSchedule(1.0, 1.0, 0.5 * math.pi, 1)
    w_mode = obs.energy_from_mode(prop.mode_coefficients(s))
    out.append((
        "energy_adjudication n=1 kappa/omega0=1 omega0*tau=pi/2",
        f"paper_eq={obs.energy_paper_form(s):.12g} mode={w_mode:.12g} identity={obs.energy_identity_form(s):.12g}",
    ))

    s = prop.KickSchedule(1.0, 0.5, 2.0 * math.pi, 3)
    w_mode = obs.energy_from_mode(prop.sequential_coefficients(s))
    out.append((
        "resonant kappa/omega0=0.5 omega0*tau=2pi n=3",
        f"paper={stab.resonant_energy_paper(s):.12g} reconciled={stab.resonant_energy_reconciled(s):.12g} mode={w_mode:.12g}",
    ))

    s = prop.KickSchedule(1.0, 10.0, 0.5 * math.pi, 30)
    lw = stab.log_energy_trajectory(s)
    slope = lw[-1] - lw[-2]
    printed = 2.0 * math.log(20.0)
    out.append((
        "strong_kick kappa/omega0=10 omega0*tau=pi/2 per-kick ln W slope",
        f"exact={_fmt(slope)} paper={_fmt(printed)} rel_dev={_fmt(abs(slope - printed) / printed)}",
    ))
    out.append((
        "strong_kick n=30 ln W",
        f"exact={_fmt(lw[-1])} paper={_fmt(stab.strong_kick_energy_paper(s, log=True))} "
        f"reconciled={_fmt(stab.strong_kick_energy_reconciled(s, log=True))}",
    ))

    s = prop.KickSchedule(1.0, 5.0, 0.5 * math.pi, 20)
    lw = stab.log_energy_trajectory(s)
    offs = [
        stab.asymptotic_energy_paper(s.with_kicks(n), log=True) - lw[n] for n in (10, 20)
    ]
    recon = [
        stab.asymptotic_energy_reconciled(s.with_kicks(n), log=True) - lw[n] for n in (10, 20)
    ]
    out.append((
        "asymptotic kappa/omega0=5 omega0*tau=pi/2 ln(W_formula/W_exact) at n=10,20",
        f"paper={_fmt(offs[0])},{_fmt(offs[1])} reconciled={_fmt(recon[0])},{_fmt(recon[1])}",
    ))

    ratios = []
    for n, x in ((10, 2.0), (50, 1.5), (200, 1.5)):
        ratios.append(f"U_{n}({x:g}):{cheb.chebyshev_u_asymptotic(n, x) / cheb.chebyshev_u(n, x):.9f}")
    out.append(("chebyshev_asymptotic ratio printed/exact", " ".join(ratios)))

    # small kicks at omega0 tau = pi/2: both bounds hold, which one is tight
    s = prop.KickSchedule(1.0, 0.05, 0.5 * math.pi, 40)
    lw = stab.log_energy_trajectory(s)
    w_max = float(np.exp(lw[1:]).max())
    x = prop.trace_parameter(s)
    out.append((
        "small_kick bound kappa/omega0=0.05 omega0*tau=pi/2 n<=40",
        f"W_max={w_max:.12g} paper_bound={stab.resonant_energy_paper(s):.12g} "
        f"reconciled_bound={stab.resonant_energy_reconciled(s):.12g} "
        f"band_envelope={stab.stable_envelope(s.kappa_ratio, x):.12g}",
    ))

    worst = 0.0
    nan_count = 0
    total = 0
    for s in schedules:
        ctx_s = obs.PhysicalContext(ctx.hbar, ctx.mass, s.omega0)
        c = prop.mode_coefficients(s, "closed_form")
        w = obs.energy_from_mode(c)
        t0 = (s.n_kicks - 1) * s.tau
        for t in t0 + np.linspace(0.0, 2.0 * math.pi / s.omega0, 16, endpoint=False):
            t = float(t)
            cov = obs.covariances_from_mode(ctx_s, prop.mode_function(c, s, t))
            printed = obs.sigma_xp_paper(ctx_s, s, t)
            total += 1
            if math.isnan(printed):
                nan_count += 1
                continue
            worst = max(worst, abs(printed - abs(cov.sigma_xp)) / (0.5 * ctx.hbar * w))
    out.append((
        "sigma_xp printed vs mode",
        f"max_rel_dev={_fmt(worst)} negative_radicand={nan_count}/{total}",
    ))
    return out


def run_verify(seed: int = 0, cases: int = 100, ctx: obs.PhysicalContext | None = None) -> VerifyReport:
    if cases < 1:
        raise ValueError("cases must be >= 1")
    base = ctx or obs.PhysicalContext()
    schedules = random_schedules(seed, cases)
    report = VerifyReport(seed=seed, cases=cases)
    results = {name: CheckResult(name, tol) for name, tol in TOLERANCES.items()}
    for s in schedules:
        ctx_s = obs.PhysicalContext(base.hbar, base.mass, s.omega0)
        for name, err in check_schedule(s, ctx_s).items():
            results[name].update(err, s)
    report.checks = list(results.values())
    report.diagnostics = diagnostics(base, schedules[: min(len(schedules), 20)])
    return report


def format_report(report: VerifyReport) -> str:
    lines = [f"kickosc verify seed={report.seed} cases={report.cases}"]
    for c in report.checks:
        status = "PASS" if c.passed else "FAIL"
        lines.append(f"{status} {c.name} max_error={_fmt(c.max_error)} tol={c.tolerance:.0e}")
        if not c.passed and c.worst is not None:
            w = c.worst
            lines.append(
                f"  reproduce: --omega0 {w.omega0!r} --kappa {w.kappa!r} --tau {w.tau!r} --kicks {w.n_kicks}"
            )
    for name, text in report.diagnostics:
        lines.append(f"INFO {name}: {text}")
    lines.append("RESULT " + ("PASS" if report.passed else "FAIL"))
    return "\n".join(lines) + "\n"


def report_as_dict(report: VerifyReport) -> dict:
    return {
        "seed": report.seed,
        "cases": report.cases,
        "passed": report.passed,
        "checks": [
            {"name": c.name, "max_error": c.max_error, "tolerance": c.tolerance, "passed": c.passed}
            for c in report.checks
        ],
        "diagnostics": [{"name": n, "detail": d} for n, d in report.diagnostics],
    }
