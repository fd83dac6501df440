"""Band classification, growth exponents and (omega0 tau, kappa/omega0) scans.

Parametric stability is decided by the half trace x = chi/2 of the
one-period matrix: |x| < 1 keeps the mode bounded (an allowed band of the
equivalent Kronig-Penney lattice), |x| > 1 makes it grow like
lambda^n with lambda = |x| + sqrt(x^2 - 1), and |x| = 1 grows linearly.
Everything that can overflow is carried as a logarithm.
"""

from __future__ import annotations

import enum
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from kickosc import kernels
from kickosc.chebyshev import EDGE_DELTA, log_growth_factor
from kickosc.errors import DomainError, RegimeWarning
from kickosc.observables import _log1p_exp
from kickosc.propagator import KickSchedule, trace_parameter

DEFAULT_N_PROBE = 500
DEFAULT_N_MEASURE = 200
STABLE_TOL = 1e-6


class Regime(str, enum.Enum):
    STABLE = "Stable"
    EDGE = "Edge"
    UNSTABLE = "Unstable"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class ProbeResult:
    """Logarithms of W(n) recorded while iterating the one-period map."""

    n_probe: int
    n_measure: int
    log_w_first: float
    log_w_max: float
    log_w_measure_prev: float
    log_w_measure: float
    log_w_final: float

    @property
    def growth_rate(self) -> float:
        """ln W(n_measure) - ln W(n_measure - 1)."""
        return self.log_w_measure - self.log_w_measure_prev


@dataclass(frozen=True)
class BandPoint:
    omega0_tau: float
    kappa_over_omega0: float
    chi_half: float
    regime: Regime
    lyapunov: float
    probe: ProbeResult | None = None

    def probe_consistent(self) -> bool | None:
        """Does the probed dynamics agree with the classification?

        Stable: max W stays under the band envelope. Unstable: W grows at
        least by e^{lyapunov n_probe} / 4. Edge: W stays within 1% of the
        linear-growth value 1 + 2 k^2 n^2. ``None`` without a probe.
        """
        p = self.probe
        if p is None:
            return None
        k = self.kappa_over_omega0
        if self.regime is Regime.STABLE:
            bound = stable_envelope(k, self.chi_half) + STABLE_TOL
            return p.log_w_max <= math.log(bound)
        if self.regime is Regime.UNSTABLE:
            return p.log_w_final - p.log_w_first >= self.lyapunov * p.n_probe - math.log(4.0)
        edge_w = 1.0 + 2.0 * k * k * p.n_probe**2
        return p.log_w_final <= math.log(edge_w) + math.log(1.01)


@dataclass(frozen=True)
class ScanGrid:
    """Axes are (min, max, count) over omega0*tau and kappa/omega0."""

    tau_axis: tuple[float, float, int]
    kappa_axis: tuple[float, float, int]
    n_probe: int = DEFAULT_N_PROBE

    def __post_init__(self):
        for name in ("tau_axis", "kappa_axis"):
            lo, hi, count = getattr(self, name)
            if int(count) != count or count < 2:
                raise ValueError(f"{name}: count must be an integer >= 2, got {count!r}")
            if not lo < hi:
                raise ValueError(f"{name}: need min < max, got {lo!r}, {hi!r}")
        if self.n_probe < 2:
            raise ValueError(f"n_probe must be >= 2, got {self.n_probe!r}")

    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        lo, hi, count = self.tau_axis
        taus = np.linspace(lo, hi, int(count))
        lo, hi, count = self.kappa_axis
        return taus, np.linspace(lo, hi, int(count))

    def nodes(self) -> tuple[np.ndarray, np.ndarray]:
        """Flattened (omega0_tau, kappa/omega0) in row-major order, tau outer."""
        taus, kappas = self.axes()
        tt, kk = np.meshgrid(taus, kappas, indexing="ij")
        return tt.ravel(), kk.ravel()


def classify(chi_half: float) -> Regime:
    if not math.isfinite(chi_half):
        raise DomainError(f"chi/2 must be finite, got {chi_half!r}")
    gap = abs(chi_half) - 1.0
    if abs(gap) <= EDGE_DELTA:
        return Regime.EDGE
    return Regime.STABLE if gap < 0 else Regime.UNSTABLE


def lyapunov_exponent(chi_half: float) -> float:
    """Per-period log growth ln(|x| + sqrt(x^2 - 1)); 0 unless unstable."""
    if classify(chi_half) is not Regime.UNSTABLE:
        return 0.0
    return log_growth_factor(chi_half)


def stable_envelope(kappa_ratio: float, chi_half: float) -> float:
    """Upper bound 1 + 2 k^2 / (1 - x^2) on W(n) inside the band."""
    return 1.0 + 2.0 * kappa_ratio**2 / ((1.0 - chi_half) * (1.0 + chi_half))


def log_energy_trajectory(s: KickSchedule) -> np.ndarray:
    """ln W(n) for n = 0..s.n_kicks by iterating the kick map (no Chebyshev)."""
    return kernels.log_energy_trajectory(s.kappa_ratio, s.phase, s.n_kicks)


def _unstable_x(s: KickSchedule) -> float:
    x = trace_parameter(s)
    if classify(x) is not Regime.UNSTABLE:
        raise DomainError(f"asymptotic form needs |chi/2| > 1, got {x!r}")
    if s.n_kicks < 1:
        raise DomainError("asymptotic form needs n_kicks >= 1")
    return abs(x)


def _maybe_exp(log_w: float, log: bool) -> float:
    if log:
        return log_w
    return math.exp(log_w) if log_w < 709.78 else math.inf


def asymptotic_energy_paper(s: KickSchedule, log: bool = False) -> float:
    """4 k^2 lambda^{2n} / (x^2 - 1), the printed large-n energy.

    ``x`` is taken as |chi/2|, since W only depends on U^2. Returns ln W
    when ``log`` is true.
    """
    x = _unstable_x(s)
    k = s.kappa_ratio
    log_w = math.log(4.0 * k * k) + 2.0 * s.n_kicks * log_growth_factor(x) - math.log((x - 1.0) * (x + 1.0))
    return _maybe_exp(log_w, log)


def asymptotic_energy_reconciled(s: KickSchedule, log: bool = False) -> float:
    """1 + 2 k^2 lambda^{2n} / (4 (x^2 - 1)): leading term of 1 + 2 k^2 U_{n-1}^2."""
    x = _unstable_x(s)
    k = s.kappa_ratio
    z = math.log(0.5 * k * k) + 2.0 * s.n_kicks * log_growth_factor(x) - math.log((x - 1.0) * (x + 1.0))
    return _maybe_exp(_log1p_exp(z), log)


def resonant_energy_paper(s: KickSchedule) -> float:
    """1 + 4 k^2 n^2: printed energy at omega0 tau = 2 pi m (and small-k bound)."""
    return 1.0 + 4.0 * s.kappa_ratio**2 * s.n_kicks**2


def resonant_energy_reconciled(s: KickSchedule) -> float:
    """1 + 2 k^2 n^2, the exact energy whenever |chi/2| = 1."""
    return 1.0 + 2.0 * s.kappa_ratio**2 * s.n_kicks**2


def strong_kick_energy_paper(s: KickSchedule, log: bool = False) -> float:
    """4 (2 kappa/omega0)^{2n} for omega0 tau = pi/2 mod 2 pi, kappa >> omega0.

    Warns with :class:`RegimeWarning` when kappa/omega0 <= 1.
    """
    k = s.kappa_ratio
    if k <= 1.0:
        warnings.warn(f"strong-kick form used at kappa/omega0={k!r} <= 1", RegimeWarning, stacklevel=2)
    if k == 0:
        return -math.inf if log else 0.0
    log_w = math.log(4.0) + 2.0 * s.n_kicks * math.log(2.0 * abs(k))
    return _maybe_exp(log_w, log)


def strong_kick_energy_reconciled(s: KickSchedule, log: bool = False) -> float:
    """(2 kappa/omega0)^{2n} / 2, same limit taken from 1 + 2 k^2 U_{n-1}^2."""
    k = s.kappa_ratio
    if k == 0:
        return -math.inf if log else 0.0
    log_w = math.log(0.5) + 2.0 * s.n_kicks * math.log(2.0 * abs(k))
    return _maybe_exp(log_w, log)


def is_quarter_period(s: KickSchedule, tol: float = 1e-9) -> bool:
    """omega0 tau == pi/2 (mod 2 pi) within ``tol``."""
    r = math.remainder(s.phase - 0.5 * math.pi, 2.0 * math.pi)
    return abs(r) <= tol


def _probe_chunk(kr, th, n_probe, n_measure):
    return kernels.probe_summary(kr, th, n_probe, n_measure)


def band_scan(grid: ScanGrid, probe: bool = False, n_measure: int = DEFAULT_N_MEASURE,
              workers: int | None = None) -> list[BandPoint]:
    """Classify every grid node; rows come back in row-major order.

    With ``probe=True`` each node is also iterated for ``grid.n_probe``
    kicks (log space) and the result attached as ``BandPoint.probe``.
    """
    taus, kappas = grid.nodes()
    chi = np.cos(taus) + kappas * np.sin(taus)
    probes = None
    if probe:
        n_measure = min(n_measure, grid.n_probe)
        chunks = np.array_split(np.arange(taus.size), max(1, min(64, taus.size // 256)))
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda idx: _probe_chunk(kappas[idx], taus[idx], grid.n_probe, n_measure), chunks))
        probes = np.concatenate(parts, axis=0)

    points = []
    for i in range(taus.size):
        x = float(chi[i])
        pr = None
        if probes is not None:
            row = probes[i]
            pr = ProbeResult(grid.n_probe, n_measure, *(float(v) for v in row))
        points.append(BandPoint(float(taus[i]), float(kappas[i]), x, classify(x), lyapunov_exponent(x), pr))
    return points
