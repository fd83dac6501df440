"""Transfer matrices and the classical mode function of the kicked oscillator.

The mode function obeys eps'' + omega(t)^2 eps = 0 with
omega(t)^2 = omega0^2 - 2 kappa sum_k delta(t - k tau). Between kicks
eps(t) = a e^{i omega0 t} + b e^{-i omega0 t}; a kick keeps eps continuous and
adds 2 kappa eps to its derivative.

Two propagation routes are provided:

* ``kick_step`` / ``evolve_sequential`` apply kicks one by one at the
  physical instants t_k = k tau, k = 0..n-1 (ground truth);
* ``propagate_direct`` / ``propagate_closed_form`` build the n-kick matrix
  T^{-(n-1)} (M T)^n, by brute-force products and by Chebyshev polynomials.

The matrix route carries one extra free flight on the right, so acting on
(1, 0) it returns the sequential coefficients times ``e^{i omega0 tau}``:
a constant phase, invisible in every observable.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from kickosc import kernels
from kickosc.chebyshev import chebyshev_u


@dataclass(frozen=True)
class KickSchedule:
    """Drive parameters: base frequency, kick strength, period, kick count.

    ``kappa > 0`` is a comb of delta barriers, ``kappa < 0`` of delta wells.
    """

    omega0: float
    kappa: float
    tau: float
    n_kicks: int

    def __post_init__(self):
        if not (self.omega0 > 0 and math.isfinite(self.omega0)):
            raise ValueError(f"omega0 must be positive and finite, got {self.omega0!r}")
        if not math.isfinite(self.kappa):
            raise ValueError(f"kappa must be finite, got {self.kappa!r}")
        if not (self.tau > 0 and math.isfinite(self.tau)):
            raise ValueError(f"tau must be positive and finite, got {self.tau!r}")
        if int(self.n_kicks) != self.n_kicks or self.n_kicks < 0:
            raise ValueError(f"n_kicks must be a non-negative integer, got {self.n_kicks!r}")
        object.__setattr__(self, "n_kicks", int(self.n_kicks))

    @property
    def kappa_ratio(self) -> float:
        return self.kappa / self.omega0

    @property
    def phase(self) -> float:
        """omega0 * tau, the free-flight phase per period."""
        return self.omega0 * self.tau

    def with_kicks(self, n_kicks: int) -> KickSchedule:
        return KickSchedule(self.omega0, self.kappa, self.tau, n_kicks)


@dataclass(frozen=True)
class TwoByTwoComplex:
    m11: complex
    m12: complex
    m21: complex
    m22: complex

    @classmethod
    def identity(cls) -> TwoByTwoComplex:
        return cls(1 + 0j, 0j, 0j, 1 + 0j)

    def __matmul__(self, other: TwoByTwoComplex) -> TwoByTwoComplex:
        return TwoByTwoComplex(
            self.m11 * other.m11 + self.m12 * other.m21,
            self.m11 * other.m12 + self.m12 * other.m22,
            self.m21 * other.m11 + self.m22 * other.m21,
            self.m21 * other.m12 + self.m22 * other.m22,
        )

    def apply(self, a: complex, b: complex) -> tuple[complex, complex]:
        return self.m11 * a + self.m12 * b, self.m21 * a + self.m22 * b

    def det(self) -> complex:
        return self.m11 * self.m22 - self.m12 * self.m21

    def trace(self) -> complex:
        return self.m11 + self.m22

    def entries(self) -> tuple[complex, complex, complex, complex]:
        return self.m11, self.m12, self.m21, self.m22

    def max_abs(self) -> float:
        return max(abs(z) for z in self.entries())

    def unimodularity_defect(self) -> float:
        """|det - 1| / max(1, largest |entry|)^2, safe for huge entries."""
        scale = max(1.0, self.max_abs())
        u11, u12, u21, u22 = (z / scale for z in self.entries())
        return abs(u11 * u22 - u12 * u21 - (1.0 / scale) / scale)

    @property
    def overflowed(self) -> bool:
        """True when any entry is no longer finite."""
        return not all(cmath.isfinite(z) for z in self.entries())


@dataclass(frozen=True)
class ModeCoefficients:
    """Amplitudes of eps = a e^{i w t} + b e^{-i w t} after ``segment`` kicks."""

    a: complex
    b: complex
    segment: int = 0

    def pseudo_norm(self) -> float:
        """|a|^2 - |b|^2, equal to 1 for the coherent initial condition."""
        return abs(self.a) * abs(self.a) - abs(self.b) * abs(self.b)


@dataclass(frozen=True)
class ModeSample:
    eps: complex
    eps_dot: complex
    t: float

    def wronskian(self) -> float:
        """Im(eps_dot * conj(eps)); equals omega0 for a normalized mode."""
        return (self.eps_dot * self.eps.conjugate()).imag


INITIAL = ModeCoefficients(1 + 0j, 0j, 0)


def kick_matrix(s: KickSchedule) -> TwoByTwoComplex:
    ik = 1j * s.kappa_ratio
    return TwoByTwoComplex(1 - ik, -ik, ik, 1 + ik)


def free_matrix(s: KickSchedule) -> TwoByTwoComplex:
    e = cmath.exp(1j * s.phase)
    return TwoByTwoComplex(e, 0j, 0j, e.conjugate())


def one_period_matrix(s: KickSchedule) -> TwoByTwoComplex:
    """S = M T, written out entry by entry."""
    ik = 1j * s.kappa_ratio
    e = cmath.exp(1j * s.phase)
    ei = e.conjugate()
    return TwoByTwoComplex((1 - ik) * e, -ik * ei, ik * e, (1 + ik) * ei)


def trace_parameter(s: KickSchedule) -> float:
    """chi/2 = cos(omega0 tau) + (kappa/omega0) sin(omega0 tau)."""
    return math.cos(s.phase) + s.kappa_ratio * math.sin(s.phase)


def propagate_direct(s: KickSchedule) -> TwoByTwoComplex:
    """T^{-(n-1)} (M T)^n by explicit multiplication; identity for n = 0.

    Deep in the unstable band entries may overflow; check ``.overflowed``.
    """
    if s.n_kicks == 0:
        return TwoByTwoComplex.identity()
    return TwoByTwoComplex(*kernels.direct_product(s.kappa_ratio, s.phase, s.n_kicks))


def propagate_closed_form(s: KickSchedule) -> TwoByTwoComplex:
    """The n-kick matrix from U_{n-1}(chi/2) and U_{n-2}(chi/2)."""
    n = s.n_kicks
    if n < 1:
        raise ValueError("closed form needs n_kicks >= 1")
    x = trace_parameter(s)
    u1 = chebyshev_u(n - 1, x)
    u2 = chebyshev_u(n - 2, x)
    ik = 1j * s.kappa_ratio
    th = s.phase

    def ph(k):
        return cmath.exp(1j * k * th)

    return TwoByTwoComplex(
        (1 - ik) * u1 * ph(-(n - 2)) - u2 * ph(-(n - 1)),
        -ik * u1 * ph(-n),
        ik * u1 * ph(n),
        (1 + ik) * u1 * ph(n - 2) - u2 * ph(n - 1),
    )


def mode_coefficients(s: KickSchedule, method: str = "direct") -> ModeCoefficients:
    """(A_n, B_n) = first column of the n-kick matrix.

    ``method`` is ``"direct"`` or ``"closed_form"``.
    """
    if method == "direct":
        m = propagate_direct(s)
    elif method == "closed_form":
        if s.n_kicks == 0:
            return INITIAL
        m = propagate_closed_form(s)
    else:
        raise ValueError(f"unknown method {method!r}")
    return ModeCoefficients(m.m11, m.m21, s.n_kicks)


def kick_step(c: ModeCoefficients, s: KickSchedule, t_kick: float) -> ModeCoefficients:
    """Apply one delta-kick at time ``t_kick``.

    Equivalent to P(-t) M P(t) with P(t) = diag(e^{i w t}, e^{-i w t}).
    """
    ik = 1j * s.kappa_ratio
    e2 = cmath.exp(2j * s.omega0 * t_kick)
    a = (1 - ik) * c.a - ik * c.b * e2.conjugate()
    b = ik * c.a * e2 + (1 + ik) * c.b
    return ModeCoefficients(a, b, c.segment + 1)


def evolve_sequential(s: KickSchedule, initial: ModeCoefficients = INITIAL) -> list[ModeCoefficients]:
    """Coefficients on every segment: entry k is valid on (t_{k-1}, t_k)."""
    out = [initial]
    c = initial
    for k in range(s.n_kicks):
        c = kick_step(c, s, k * s.tau)
        out.append(c)
    return out


def sequential_coefficients(s: KickSchedule) -> ModeCoefficients:
    return evolve_sequential(s)[-1]


def convention_phase(s: KickSchedule) -> complex:
    """Factor relating the matrix route to the sequential one.

    ``mode_coefficients(s)`` equals ``convention_phase(s) *
    sequential_coefficients(s)`` for n >= 1: the matrix route starts from
    the free mode advanced by one period, e^{i w (t + tau)}.
    """
    return cmath.exp(1j * s.phase) if s.n_kicks >= 1 else 1 + 0j


def mode_function(c: ModeCoefficients, s: KickSchedule, t: float) -> ModeSample:
    """eps(t) and its derivative; ``t`` must lie in the segment of ``c``."""
    e = cmath.exp(1j * s.omega0 * t)
    up = c.a * e
    down = c.b * e.conjugate()
    return ModeSample(up + down, 1j * s.omega0 * (up - down), t)

