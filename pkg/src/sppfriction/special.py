"""Modified Bessel functions of the second kind, K_0, K_1 and K_n.

A self-contained implementation used as an independent oracle for the
quadrature kernel (which never calls into this module). Small arguments use
the ascending series, large arguments Steed's continued fraction for
K_1/K_0 combined with the Temme normalisation sum, the pairing used by the
classic ``bessik`` routine.
"""

from __future__ import annotations

import math

EULER_GAMMA = 0.57721566490153286061
_EPS = 1e-16
_MAX_ITER = 10000
_SERIES_LIMIT = 2.0


def _k0_k1_series(x):
    # K0 = -(ln(x/2)+gamma) I0 + sum_k (x^2/4)^k/(k!)^2 H_k
    y = 0.25 * x * x
    log_term = math.log(0.5 * x) + EULER_GAMMA
    term = 1.0
    harmonic = 0.0
    k0 = -log_term
    i0 = 1.0
    # K1(x) = 1/x + (x/2) * sum_k (y^k / (k!(k+1)!)) * [ln(x/2) + gamma - (H_k + H_{k+1})/2]
    k1_sum = log_term - 0.5 * (0.0 + 1.0)
    term1 = 1.0
    for k in range(1, _MAX_ITER):
        term *= y / (k * k)
        harmonic += 1.0 / k
        i0 += term
        k0 += term * (harmonic - log_term)
        term1 *= y / (k * (k + 1))
        h_next = harmonic + 1.0 / (k + 1)
        k1_sum += term1 * (log_term - 0.5 * (harmonic + h_next))
        if term < _EPS * abs(k0) and term1 < _EPS * abs(k1_sum):
            break
    k1 = 1.0 / x + 0.5 * x * k1_sum
    return k0, k1


def _k0_k1_steed(x):
    # Steed's CF2 (Temme's variant) for x >= 2, nu = 0.
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = delh = d
    q1, q2 = 0.0, 1.0
    a1 = 0.25
    q = c = a1
    a = -a1
    s = 1.0 + q * delh
    for i in range(2, _MAX_ITER):
        a -= 2 * (i - 1)
        c = -a * c / i
        qnew = (q1 - b * q2) / a
        q1, q2 = q2, qnew
        q += c * qnew
        b += 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h += delh
        dels = q * delh
        s += dels
        if abs(dels / s) < _EPS:
            break
    else:  # pragma: no cover - the fraction converges for x >= 2
        raise ArithmeticError("Steed continued fraction failed to converge")
    k0 = math.sqrt(math.pi / (2.0 * x)) * math.exp(-x) / s
    k1 = k0 * (x + 0.5 - a1 * h) / x
    return k0, k1


def bessel_k01(x):
    """Return (K_0(x), K_1(x)) for x > 0."""
    if not x > 0:
        raise ValueError(f"K_n(x) requires x > 0, got {x!r}")
    if x <= _SERIES_LIMIT:
        return _k0_k1_series(x)
    return _k0_k1_steed(x)


def bessel_k(n, x):
    """K_n(x) for integer n >= 0 and x > 0 via upward recurrence
    K_{n+1} = K_{n-1} + (2n/x) K_n (stable for K)."""
    if n < 0:
        n = -n
    k0, k1 = bessel_k01(x)
    if n == 0:
        return k0
    km, kn = k0, k1
    for j in range(1, n):
        km, kn = kn, km + (2.0 * j / x) * kn
    return kn
