"""``kickosc`` command line: evolve | energy | scan | verify.

Numbers accept multiples of pi (``pi/2``, ``2pi``, ``-3*pi/4``). Settings
come from defaults, then an optional key=value config file (``--config`` or
``$KICKOSC_CONFIG``), then flags; later sources win.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
from dataclasses import dataclass

from kickosc import observables as obs
from kickosc import propagator as prop
from kickosc import stability as stab
from kickosc import verify as ver
from kickosc.errors import ContractViolation

EXIT_OK = 0
EXIT_INVARIANT = 1
EXIT_USAGE = 2

DEFAULTS = {
    "omega0": "1",
    "kappa": "1",
    "tau": "pi/2",
    "kicks": "3",
    "n-max": "20",
    "hbar": "1",
    "mass": "1",
    "samples-per-period": "16",
    "tau-range": "0.1:4pi:200",
    "kappa-range": "-5:5:200",
    "n-probe": "0",
    "format": "csv",
    "seed": "0",
    "cases": "100",
    "output": "-",
}

_PI_RE = re.compile(r"^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*\*?\s*pi\s*(?:/\s*(\d+\.?\d*))?\s*$")


class UsageError(Exception):
    pass


def parse_number(text: str) -> float:
    """Float or a rational multiple of pi."""
    text = str(text).strip()
    try:
        return float(text)
    except ValueError:
        pass
    m = _PI_RE.match(text.replace("-pi", "-1pi").replace("+pi", "+1pi"))
    if not m:
        raise UsageError(f"not a number: {text!r}")
    coef = float(m.group(1)) if m.group(1) else 1.0
    div = float(m.group(2)) if m.group(2) else 1.0
    return coef * math.pi / div


def parse_range(text: str) -> tuple[float, float, int]:
    parts = str(text).split(":")
    if len(parts) != 3:
        raise UsageError(f"range must look like a:b:count, got {text!r}")
    try:
        count = int(parts[2])
    except ValueError:
        raise UsageError(f"range count must be an integer, got {parts[2]!r}") from None
    return parse_number(parts[0]), parse_number(parts[1]), count


def read_config(path: str) -> dict[str, str]:
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path!r}: {exc}") from None
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (p.strip() for p in line.split("=", 1))
        key = key.lstrip("-").replace("_", "-")
        if key not in DEFAULTS or key == "config":
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = value
    return out


@dataclass(frozen=True)
class RunConfig:
    schedule: prop.KickSchedule
    context: obs.PhysicalContext
    fmt: str
    samples_per_period: int
    grid: stab.ScanGrid | None
    seed: int
    n_max: int
    n_probe: int
    cases: int
    output: str


def _int(settings, key, minimum):
    try:
        v = int(settings[key])
    except ValueError:
        raise UsageError(f"--{key} must be an integer, got {settings[key]!r}") from None
    if v < minimum:
        raise UsageError(f"--{key} must be >= {minimum}, got {v}")
    return v


def build_config(settings: dict[str, str]) -> RunConfig:
    fmt = settings["format"]
    if fmt not in ("csv", "json"):
        raise UsageError(f"--format must be csv or json, got {fmt!r}")
    omega0 = parse_number(settings["omega0"])
    try:
        schedule = prop.KickSchedule(
            omega0,
            parse_number(settings["kappa"]),
            parse_number(settings["tau"]),
            _int(settings, "kicks", 0),
        )
        context = obs.PhysicalContext(parse_number(settings["hbar"]), parse_number(settings["mass"]), omega0)
        n_probe = _int(settings, "n-probe", 0)
        grid = stab.ScanGrid(
            parse_range(settings["tau-range"]),
            parse_range(settings["kappa-range"]),
            n_probe if n_probe else stab.DEFAULT_N_PROBE,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    seed = _int(settings, "seed", 0)
    return RunConfig(
        schedule=schedule,
        context=context,
        fmt=fmt,
        samples_per_period=_int(settings, "samples-per-period", 1),
        grid=grid,
        seed=seed,
        n_max=_int(settings, "n-max", 1),
        n_probe=n_probe,
        cases=_int(settings, "cases", 1),
        output=settings["output"],
    )


# ---------------------------------------------------------------- output

def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def _json_cell(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def render(columns: list[str], rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        data = [{c: _json_cell(r.get(c)) for c in columns} for r in rows]
        return json.dumps(data, indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_cell(r.get(c)) for c in columns])
    return buf.getvalue()


def _emit(cfg: RunConfig, text: str, stdout) -> None:
    if cfg.output == "-":
        stdout.write(text)
    else:
        with open(cfg.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


# -------------------------------------------------------------- commands

EVOLVE_COLUMNS = ["t", "side", "re_eps", "im_eps", "sigma_xx", "sigma_xp", "sigma_pp", "W", "purity_defect", "overflow"]


def _evolve_row(cfg: RunConfig, c: prop.ModeCoefficients, t: float, side: str) -> dict:
    s, ctx = cfg.schedule, cfg.context
    row = {"t": t, "side": side}
    ms = prop.mode_function(c, s, t)
    finite = all(math.isfinite(v) for v in (ms.eps.real, ms.eps.imag, ms.eps_dot.real, ms.eps_dot.imag))
    cov = None
    if finite:
        try:
            cov = obs.covariances_from_mode(ctx, ms)
        except ContractViolation:
            cov = None
        if cov is not None and not all(math.isfinite(v) for v in (cov.sigma_xx, cov.sigma_pp, cov.sigma_xp)):
            cov = None
    row["re_eps"] = ms.eps.real
    row["im_eps"] = ms.eps.imag
    if cov is None:
        nan = math.nan
        row.update(sigma_xx=nan, sigma_xp=nan, sigma_pp=nan, W=nan, purity_defect=nan, overflow=True)
    else:
        row.update(
            sigma_xx=cov.sigma_xx,
            sigma_xp=cov.sigma_xp,
            sigma_pp=cov.sigma_pp,
            W=cov.fluctuation_energy(ctx),
            purity_defect=cov.purity_defect(ctx.hbar),
            overflow=False,
        )
    return row


def evolve_rows(cfg: RunConfig) -> list[dict]:
    """Samples t = j tau / spp over [0, (n+1) tau]; both sides at each kick."""
    s = cfg.schedule
    n, spp = s.n_kicks, cfg.samples_per_period
    segments = prop.evolve_sequential(s)
    rows = []
    for j in range(spp * (n + 1) + 1):
        k, r = divmod(j, spp)
        if r == 0:
            t = k * s.tau
            if k < n:
                rows.append(_evolve_row(cfg, segments[k], t, "pre"))
                rows.append(_evolve_row(cfg, segments[k + 1], t, "post"))
                continue
            absorbed = min(n, k)
        else:
            t = j * s.tau / spp
            absorbed = min(n, k + 1)
        rows.append(_evolve_row(cfg, segments[absorbed], t, ""))
    return rows


def cmd_evolve(cfg: RunConfig, stdout=sys.stdout) -> int:
    _emit(cfg, render(EVOLVE_COLUMNS, evolve_rows(cfg), cfg.fmt), stdout)
    return EXIT_OK


ENERGY_COLUMNS = [
    "n", "w_mode", "w_paper_eq", "w_identity", "r_max", "k_max_sq", "log10_w_mode",
    "log10_w_resonant_paper", "log10_w_resonant_reconciled",
    "log10_w_strong_kick_paper", "log10_w_strong_kick_reconciled",
    "log10_w_asymptotic_paper", "log10_w_asymptotic_reconciled", "overflow",
]


def energy_rows(cfg: RunConfig) -> list[dict]:
    base = cfg.schedule.with_kicks(cfg.n_max)
    segments = prop.evolve_sequential(base)
    log_w = stab.log_energy_trajectory(base)
    x = prop.trace_parameter(base)
    regime = stab.classify(x)
    strong = stab.is_quarter_period(base) and base.kappa_ratio > 1.0
    ln10 = math.log(10.0)
    rows = []
    for n in range(1, cfg.n_max + 1):
        s = base.with_kicks(n)
        w_mode = obs.energy_from_mode(segments[n])
        row = {
            "n": n,
            "w_mode": w_mode,
            "w_paper_eq": obs.energy_paper_form(s),
            "w_identity": obs.energy_identity_form(s),
            "log10_w_mode": float(log_w[n]) / ln10,
            "overflow": not math.isfinite(w_mode),
        }
        if math.isfinite(w_mode):
            sq = obs.squeeze_coefficients(max(w_mode, 1.0))
            row["r_max"], row["k_max_sq"] = sq.r_max, sq.k_max_sq
        if regime is stab.Regime.EDGE:
            row["log10_w_resonant_paper"] = math.log10(stab.resonant_energy_paper(s))
            row["log10_w_resonant_reconciled"] = math.log10(stab.resonant_energy_reconciled(s))
        if strong:
            row["log10_w_strong_kick_paper"] = stab.strong_kick_energy_paper(s, log=True) / ln10
            row["log10_w_strong_kick_reconciled"] = stab.strong_kick_energy_reconciled(s, log=True) / ln10
        if regime is stab.Regime.UNSTABLE:
            row["log10_w_asymptotic_paper"] = stab.asymptotic_energy_paper(s, log=True) / ln10
            row["log10_w_asymptotic_reconciled"] = stab.asymptotic_energy_reconciled(s, log=True) / ln10
        rows.append(row)
    return rows


def cmd_energy(cfg: RunConfig, stdout=sys.stdout) -> int:
    _emit(cfg, render(ENERGY_COLUMNS, energy_rows(cfg), cfg.fmt), stdout)
    return EXIT_OK


SCAN_COLUMNS = ["omega0_tau", "kappa_over_omega0", "chi_half", "regime", "lyapunov"]
PROBE_COLUMNS = ["probe_log_w_max", "probe_growth_rate", "probe_consistent"]


def scan_rows(cfg: RunConfig) -> tuple[list[str], list[dict]]:
    probe = cfg.n_probe > 0
    points = stab.band_scan(cfg.grid, probe=probe)
    rows = []
    for p in points:
        row = {
            "omega0_tau": p.omega0_tau,
            "kappa_over_omega0": p.kappa_over_omega0,
            "chi_half": p.chi_half,
            "regime": p.regime.value,
            "lyapunov": p.lyapunov,
        }
        if probe:
            row["probe_log_w_max"] = p.probe.log_w_max
            row["probe_growth_rate"] = p.probe.growth_rate
            row["probe_consistent"] = p.probe_consistent()
        rows.append(row)
    return SCAN_COLUMNS + (PROBE_COLUMNS if probe else []), rows


def cmd_scan(cfg: RunConfig, stdout=sys.stdout) -> int:
    columns, rows = scan_rows(cfg)
    _emit(cfg, render(columns, rows, cfg.fmt), stdout)
    return EXIT_OK


def cmd_verify(cfg: RunConfig, stdout=sys.stdout) -> int:
    report = ver.run_verify(cfg.seed, cfg.cases, cfg.context)
    if cfg.fmt == "json":
        text = json.dumps(ver.report_as_dict(report), indent=1, default=lambda v: None) + "\n"
    else:
        text = ver.format_report(report)
    _emit(cfg, text, stdout)
    return EXIT_OK if report.passed else EXIT_INVARIANT


COMMANDS = {"evolve": cmd_evolve, "energy": cmd_energy, "scan": cmd_scan, "verify": cmd_verify}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    for key in DEFAULTS:
        common.add_argument(f"--{key}", dest=key.replace("-", "_"), default=None, metavar=key.upper().replace("-", "_"))
    common.add_argument("--config", default=None, metavar="PATH", help="key=value settings file")
    parser = argparse.ArgumentParser(prog="kickosc", description="Periodically delta-kicked quantum oscillator.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("evolve", parents=[common], help="sigma(t), W(t) across the kick sequence")
    sub.add_parser("energy", parents=[common], help="fluctuation energy per kick count, exact and printed forms")
    sub.add_parser("scan", parents=[common], help="stability band map over (omega0 tau, kappa/omega0)")
    sub.add_parser("verify", parents=[common], help="randomized consistency suite")
    return parser


def _glue_negative_values(argv: list[str]) -> list[str]:
    """Turn ``--kappa-range -1:1:3`` into ``--kappa-range=-1:1:3``.

    argparse would otherwise read a value such as ``-1:1:3`` as a flag.
    """
    flags = {f"--{k}" for k in DEFAULTS} | {"--config"}
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in flags and i + 1 < len(argv) and argv[i + 1].startswith("-") and argv[i + 1] not in flags:
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv: list[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parser.parse_args(_glue_negative_values(argv))
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_USAGE
    settings = dict(DEFAULTS)
    try:
        config_path = args.config or os.environ.get("KICKOSC_CONFIG")
        if config_path:
            settings.update(read_config(config_path))
        for key in DEFAULTS:
            v = getattr(args, key.replace("-", "_"))
            if v is not None:
                settings[key] = v
        cfg = build_config(settings)
    except UsageError as exc:
        print(f"kickosc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return COMMANDS[args.command](cfg, stdout)


if __name__ == "__main__":
    sys.exit(main())
