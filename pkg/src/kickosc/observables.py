"""Covariances, fluctuation energy and squeezing of the kicked oscillator.

The ground truth is the mode route: (eps, eps_dot) -> covariance triple.
The long n-kick expressions built from Chebyshev polynomials are kept as
separate literal transcriptions (``*_expanded``, ``*_paper_*``) so they can be
checked against it. Two of them carry coefficient slips as printed; see
``energy_paper_form`` and ``sigma_xp_paper``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from kickosc.chebyshev import chebyshev_u, log_abs_chebyshev_u
from kickosc.errors import ContractViolation, DomainError
from kickosc.propagator import KickSchedule, ModeCoefficients, ModeSample, trace_parameter

WRONSKIAN_TOL = 1e-6


@dataclass(frozen=True)
class PhysicalContext:
    hbar: float = 1.0
    mass: float = 1.0
    omega0: float = 1.0

    def __post_init__(self):
        for name in ("hbar", "mass", "omega0"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise ValueError(f"{name} must be positive and finite, got {v!r}")

    @property
    def x_unit(self) -> float:
        """Ground-state position variance hbar / (2 m omega0)."""
        return self.hbar / (2.0 * self.mass * self.omega0)

    @property
    def p_unit(self) -> float:
        """Ground-state momentum variance hbar m omega0 / 2."""
        return 0.5 * self.hbar * self.mass * self.omega0


@dataclass(frozen=True)
class CovarianceTriple:
    sigma_xx: float
    sigma_pp: float
    sigma_xp: float

    def purity_defect(self, hbar: float) -> float:
        """|sigma_xx sigma_pp - sigma_xp^2 - hbar^2/4| / (sigma_xx sigma_pp).

        Evaluated in scaled form so it stays finite when the variances are
        too large to multiply.
        """
        root = math.sqrt(self.sigma_xx) * math.sqrt(self.sigma_pp)
        corr = self.sigma_xp / root
        floor = 0.5 * hbar / root
        return abs(1.0 - corr * corr - floor * floor)

    def fluctuation_energy(self, ctx: PhysicalContext) -> float:
        """W = (m omega0 / hbar) sigma_xx + sigma_pp / (hbar m omega0)."""
        return 0.5 * (self.sigma_xx / ctx.x_unit + self.sigma_pp / ctx.p_unit)


@dataclass(frozen=True)
class SqueezeReport:
    w: float
    r_max: float
    k_max_sq: float

    def one_minus_r(self) -> float:
        """1 - r_max without cancellation: (1/w^2) / (1 + r_max)."""
        return (1.0 / self.w) / self.w / (1.0 + self.r_max)


def covariances_from_mode(ctx: PhysicalContext, ms: ModeSample) -> CovarianceTriple:
    """Position/momentum (co)variances of the Gaussian state carried by ``ms``.

    Raises ContractViolation when the Wronskian Im(eps_dot conj eps) is not
    omega0 to within 1e-6, measured relative to omega0 and to the size of
    |eps||eps_dot| (the product cannot be resolved any better than that).
    """
    w0 = ctx.omega0
    wr = ms.wronskian()
    scale = max(1.0, abs(ms.eps) * abs(ms.eps_dot) / w0)
    if not abs(wr - w0) <= WRONSKIAN_TOL * w0 * scale:
        raise ContractViolation(f"mode sample not Wronskian-normalized: Im(eps_dot conj eps)={wr!r}, omega0={w0!r}")
    return CovarianceTriple(
        sigma_xx=ctx.hbar * abs(ms.eps) * abs(ms.eps) / (2.0 * ctx.mass * w0),
        sigma_pp=ctx.hbar * ctx.mass * abs(ms.eps_dot) * abs(ms.eps_dot) / (2.0 * w0),
        sigma_xp=ctx.hbar * (ms.eps_dot * ms.eps.conjugate()).real / (2.0 * w0),
    )


def _u_pair(s: KickSchedule) -> tuple[float, float, float]:
    if s.n_kicks < 1:
        raise DomainError("n-kick formulas need n_kicks >= 1")
    x = trace_parameter(s)
    return x, chebyshev_u(s.n_kicks - 1, x), chebyshev_u(s.n_kicks - 2, x)


def sigma_xx_expanded(ctx: PhysicalContext, s: KickSchedule, t: float) -> float:
    """Position variance after n kicks from the six-term Chebyshev expansion."""
    x, u1, u2 = _u_pair(s)
    k = s.kappa_ratio
    w0, n, tau = s.omega0, s.n_kicks, s.tau
    chi = 2.0 * x
    ph1 = w0 * (t - (n - 1) * tau)
    ph2 = w0 * (t - (n - 0.5) * tau)
    bracket = (
        u1 * u1
        + u2 * u2
        + 2.0 * k * u1 * u1 * math.sin(2.0 * ph1)
        - chi * u1 * u2
        + 4.0 * k * k * u1 * u1 * math.sin(ph1) ** 2
        - 2.0 * k * u1 * u2 * math.sin(2.0 * ph2)
    )
    return ctx.hbar / (2.0 * ctx.mass * ctx.omega0) * bracket


def sigma_xp_paper(ctx: PhysicalContext, s: KickSchedule, t: float) -> float:
    """Printed n-kick correlation, transcribed literally.

    hbar/2 * sqrt(P^2 - Q^2 - 1) with
    P = (1 + 2k^2) U1^2 + U2^2 - chi U1 U2 and
    Q = 2k U1^2 sin 2a - 2k^2 cos 2a - 2k U1 U2 sin 2b.

    Q drops a U1^2 factor on its cosine term, so this disagrees with the
    mode route once U1 != 1. A radicand that is negative beyond rounding
    returns NaN; rounding-level negatives clamp to 0.
    """
    x, u1, u2 = _u_pair(s)
    k = s.kappa_ratio
    w0, n, tau = s.omega0, s.n_kicks, s.tau
    ph1 = w0 * (t - (n - 1) * tau)
    ph2 = w0 * (t - (n - 0.5) * tau)
    # P reduces to 1 + 2k^2 U1^2 by the Pell identity; using that form keeps
    # P^2 - 1 free of cancellation (it is exactly 0 without kicks).
    p_minus_1 = 2.0 * k * k * u1 * u1
    p = 1.0 + p_minus_1
    q = 2.0 * k * u1 * u1 * math.sin(2.0 * ph1) - 2.0 * k * k * math.cos(2.0 * ph1) - 2.0 * k * u1 * u2 * math.sin(2.0 * ph2)
    radicand = p_minus_1 * (p + 1.0) - q * q
    if radicand < 0:
        if radicand >= -1e-12 * max(1.0, abs(p)) * max(1.0, abs(p)):
            radicand = 0.0
        else:
            return math.nan
    return 0.5 * ctx.hbar * math.sqrt(radicand)


def energy_from_mode(c: ModeCoefficients) -> float:
    """W = |a|^2 + |b|^2, the between-kick value of the fluctuation energy."""
    return abs(c.a) * abs(c.a) + abs(c.b) * abs(c.b)


def energy_paper_form(s: KickSchedule) -> float:
    """U1^2 + U2^2 + 4 k^2 U1^2 - chi U1 U2, as printed (k = kappa/omega0).

    The mode route gives 2 k^2 where this has 4 k^2.
    """
    x, u1, u2 = _u_pair(s)
    k = s.kappa_ratio
    return u1 * u1 + u2 * u2 + 4.0 * k * k * u1 * u1 - 2.0 * x * u1 * u2


def energy_identity_form(s: KickSchedule) -> float:
    """W = 1 + 2 (kappa/omega0)^2 U_{n-1}(chi/2)^2."""
    _, u1, _ = _u_pair(s)
    k = s.kappa_ratio
    return 1.0 + 2.0 * k * k * u1 * u1


def log_energy_identity_form(s: KickSchedule) -> float:
    """ln of :func:`energy_identity_form` without overflow."""
    if s.n_kicks < 1:
        raise DomainError("n-kick formulas need n_kicks >= 1")
    k = s.kappa_ratio
    if k == 0:
        return 0.0
    lu = log_abs_chebyshev_u(s.n_kicks - 1, trace_parameter(s))
    if lu == -math.inf:
        return 0.0
    return _log1p_exp(math.log(2.0 * k * k) + 2.0 * lu)


def _log1p_exp(z: float) -> float:
    """ln(1 + e^z)."""
    return z + math.log1p(math.exp(-z)) if z > 0 else math.log1p(math.exp(z))


def squeeze_coefficients(w: float) -> SqueezeReport:
    """Maximum squeezing r_max and correlation k_max^2 for energy ``w``.

    r_max = sqrt(1 - 1/w^2); k_max^2 = (1 + r)/(1 - r), computed as
    (1 + r)^2 w^2 so it keeps full precision as r -> 1.

    >>> squeeze_coefficients(1.0)
    SqueezeReport(w=1.0, r_max=0.0, k_max_sq=1.0)
    """
    if not (w >= 1.0) or math.isinf(w):
        raise DomainError(f"fluctuation energy must be finite and >= 1, got {w!r}")
    r = math.sqrt((w - 1.0) * (w + 1.0)) / w
    k_sq = (1.0 + r) * w * ((1.0 + r) * w)
    return SqueezeReport(w=w, r_max=r, k_max_sq=k_sq)
