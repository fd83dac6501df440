"""Pure-Python/numpy implementations of the hot kernels.

Mirrors ``kickosc._native`` function for function; selected at import when
the compiled extension is missing or ``KICKOSC_BACKEND=python`` is set.
"""

import cmath
import math

import numpy as np

# Rescale the running vector once its squared norm passes this value.
_RESCALE_AT = 1e200


def u_recurrence(n, x):
    """U_n(x) by the three-term recurrence, seeds U_{-1}=0, U_0=1."""
    if n < 0:
        return 0.0
    prev, cur = 0.0, 1.0
    two_x = 2.0 * x
    for _ in range(n):
        prev, cur = cur, two_x * cur - prev
    return cur


def direct_product(kr, theta, n):
    """T^{-(n-1)} (M T)^n by repeated 2x2 multiplication, n >= 1.

    Returns the entries as a tuple ``(m11, m12, m21, m22)``.
    """
    e = cmath.exp(1j * theta)
    ei = e.conjugate()
    ik = 1j * kr
    # S = M T
    s11, s12 = (1 - ik) * e, -ik * ei
    s21, s22 = ik * e, (1 + ik) * ei
    p11, p12, p21, p22 = s11, s12, s21, s22
    for _ in range(n - 1):
        p11, p12, p21, p22 = (
            s11 * p11 + s12 * p21,
            s11 * p12 + s12 * p22,
            s21 * p11 + s22 * p21,
            s21 * p12 + s22 * p22,
        )
    # left-multiply by T^{-1} one step at a time
    for _ in range(n - 1):
        p11, p12 = ei * p11, ei * p12
        p21, p22 = e * p21, e * p22
    return p11, p12, p21, p22


def log_energy_trajectory(kr, theta, n_max):
    """ln W(n) for n = 0..n_max, W(n) = |S^n e1|^2, overflow-free.

    Iterates in the rotating frame u_n = T^{-n} S^n e1, where step n applies
    T^{-n} M T^n with the phase e^{2 i n theta} evaluated afresh. T is
    unitary so |u_n| = |S^n e1|, and no rounding in |e^{i theta}| builds up
    over many kicks (without kicks the update is exactly the identity).
    """
    out = np.empty(n_max + 1)
    ik = 1j * kr
    a, b = 1.0 + 0j, 0j
    log_scale = 0.0
    out[0] = 0.0
    for n in range(1, n_max + 1):
        ang = 2.0 * n * theta
        q = complex(math.cos(ang), math.sin(ang))
        a, b = (1 - ik) * a - ik * q.conjugate() * b, ik * q * a + (1 + ik) * b
        w = abs(a) * abs(a) + abs(b) * abs(b)
        if w > _RESCALE_AT:
            f = 1.0 / math.sqrt(w)
            a, b = a * f, b * f
            log_scale += math.log(w)
            w = abs(a) * abs(a) + abs(b) * abs(b)
        out[n] = log_scale + math.log(w)
    return out


def probe_summary(kr, theta, n_probe, n_measure):
    """Boundedness/growth probe for many parameter points at once.

    Returns an ``(len(kr), 5)`` array with columns
    ln W(1), max_{1<=n<=n_probe} ln W(n), ln W(n_measure-1), ln W(n_measure),
    ln W(n_probe).
    """
    kr = np.asarray(kr, dtype=float)
    theta = np.asarray(theta, dtype=float)
    out = np.full((kr.size, 5), np.nan)
    if kr.size == 0:
        return out
    ik = 1j * kr
    a = np.ones(kr.size, dtype=complex)
    b = np.zeros(kr.size, dtype=complex)
    log_scale = np.zeros(kr.size)
    log_max = np.full(kr.size, -np.inf)
    for n in range(1, n_probe + 1):
        # same rotating-frame step as log_energy_trajectory
        q = np.exp(2j * n * theta)
        a, b = (1 - ik) * a - ik * np.conj(q) * b, ik * q * a + (1 + ik) * b
        w = a.real**2 + a.imag**2 + b.real**2 + b.imag**2
        big = w > _RESCALE_AT
        if big.any():
            f = 1.0 / np.sqrt(w[big])
            a[big] *= f
            b[big] *= f
            log_scale[big] += np.log(w[big])
            w[big] = a[big].real**2 + a[big].imag**2 + b[big].real**2 + b[big].imag**2
        lw = log_scale + np.log(w)
        np.maximum(log_max, lw, out=log_max)
        if n == 1:
            out[:, 0] = lw
        if n == n_measure - 1:
            out[:, 2] = lw
        if n == n_measure:
            out[:, 3] = lw
        if n == n_probe:
            out[:, 4] = lw
    out[:, 1] = log_max
    return out
