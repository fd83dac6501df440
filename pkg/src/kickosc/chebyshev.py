"""Chebyshev polynomials of the second kind on the whole real line.

Three evaluation strategies are combined:

* inside the band, ``|x| < 1 - EDGE_DELTA``: ``sin((n+1)phi) / sin(phi)``
  with ``x = cos(phi)``;
* outside, ``|x| > 1 + EDGE_DELTA``: ``sinh((n+1)theta) / sinh(theta)``
  with ``|x| = cosh(theta)`` plus parity, evaluated through logarithms so
  that only a genuinely unrepresentable result overflows;
* in the edge window the three-term recurrence, where both closed forms
  degenerate to 0/0.
"""

import math

from kickosc import kernels
from kickosc.errors import DomainError

EDGE_DELTA = 1e-8

# exp() overflows past this argument.
_LOG_MAX = math.log(1.7976931348623157e308)


def _check(n, x):
    if not math.isfinite(x):
        raise DomainError(f"x must be finite, got {x!r}")
    if n < -1:
        raise DomainError(f"n must be >= -1, got {n}")


def _u_trig(n, x):
    ax = abs(x)
    phi = math.acos(ax)
    sin_phi = math.sqrt((1.0 - ax) * (1.0 + ax))
    val = math.sin((n + 1) * phi) / sin_phi
    return -val if (x < 0 and n % 2) else val


def _log_abs_u_hyperbolic(n, ax):
    """ln U_n(ax) for ax > 1."""
    d = ax - 1.0
    sinh_theta = math.sqrt(d * (ax + 1.0))
    theta = math.log1p(d + sinh_theta)
    arg = (n + 1) * theta
    return arg + math.log1p(-math.exp(-2.0 * arg)) - math.log(2.0 * sinh_theta)


def _u_hyperbolic(n, x):
    ax = abs(x)
    if n == -1:
        return 0.0
    lu = _log_abs_u_hyperbolic(n, ax)
    val = math.exp(lu) if lu < _LOG_MAX else math.inf
    return -val if (x < 0 and n % 2) else val


def _u_recurrence(n, x):
    return kernels.u_recurrence(n, x)


def chebyshev_u(n, x):
    """Return U_n(x) for integer ``n >= -1`` and finite real ``x``.

    Overflows to ``+-inf`` when the value exceeds double range; use
    :func:`log_abs_chebyshev_u` when only the magnitude is needed.

    >>> chebyshev_u(5, 2.0)
    780.0
    """
    _check(n, x)
    if n == -1:
        return 0.0
    if n == 0:
        return 1.0
    edge_gap = abs(x) - 1.0
    if abs(edge_gap) <= EDGE_DELTA:
        return _u_recurrence(n, x)
    if edge_gap < 0:
        return _u_trig(n, x)
    return _u_hyperbolic(n, x)


def log_abs_chebyshev_u(n, x):
    """ln|U_n(x)|; ``-inf`` at zeros and for ``n == -1``."""
    _check(n, x)
    if n == -1:
        return -math.inf
    if abs(x) > 1.0 + EDGE_DELTA:
        return _log_abs_u_hyperbolic(n, abs(x))
    u = chebyshev_u(n, x)
    return math.log(abs(u)) if u != 0 else -math.inf


def chebyshev_u_asymptotic(n, x):
    """Large-``n`` asymptotic form of U_n(x) for x > 1, as printed.

    sqrt(n) / (2 sqrt(n-1)) * (x^2-1)^(-1/2) * [sqrt(x+1) + sqrt(x-1)]
    * [x + sqrt(x^2-1)]^(n-1/2)

    Kept for diagnostics only; its prefactor is not the exact leading
    coefficient, so compare against :func:`chebyshev_u` rather than trust it.
    """
    if not math.isfinite(x) or x <= 1.0:
        raise DomainError(f"asymptotic form needs x > 1, got {x!r}")
    if n < 2:
        raise DomainError(f"asymptotic form needs n >= 2, got {n}")
    root = math.sqrt((x - 1.0) * (x + 1.0))
    log_val = (
        0.5 * math.log(n)
        - math.log(2.0)
        - 0.5 * math.log(n - 1)
        - math.log(root)
        + math.log(math.sqrt(x + 1.0) + math.sqrt(x - 1.0))
        + (n - 0.5) * math.log(x + root)
    )
    return math.exp(log_val) if log_val < _LOG_MAX else math.inf


def growth_factor(x):
    """Dominant root ``|x| + sqrt(x^2 - 1)`` outside the band, else 1."""
    if not math.isfinite(x):
        raise DomainError(f"x must be finite, got {x!r}")
    ax = abs(x)
    if ax <= 1.0:
        return 1.0
    return ax + math.sqrt((ax - 1.0) * (ax + 1.0))


def log_growth_factor(x):
    """ln of :func:`growth_factor`, accurate close to the band edge."""
    if not math.isfinite(x):
        raise DomainError(f"x must be finite, got {x!r}")
    ax = abs(x)
    if ax <= 1.0:
        return 0.0
    d = ax - 1.0
    return math.log1p(d + math.sqrt(d * (ax + 1.0)))
