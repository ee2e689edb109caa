"""Closed-form quasi-static transition rates.

Every quasi-static observable reduces to the dimensionless kernel

    G(a, b) = b/(8 pi) * int_0^inf s(u) exp(-2 s(u)) du,   s(u) = sqrt(u^2 + (a - b)^2)

evaluated at a = +omega0 d/|v| (descending channel) and a = -omega0 d/|v|
(ascending channel), with b = omega_sp d/|v|.
"""

from __future__ import annotations

import math

import numpy as np

from .config import CONSTANTS, DEFAULT_QUADRATURE, QuadratureSettings, RatePair, SystemConfig
from .errors import DomainError
from .quadrature import graded_breakpoints, integrate

#: Beyond 2c > 690 the kernel is below the smallest normal double; return 0.
UNDERFLOW_EXPONENT = 690.0
#: Integration upper limit is c + TAIL_LENGTH (tail weight ~ exp(-60)).
TAIL_LENGTH = 30.0


def g_kernel(a, b, settings: QuadratureSettings = DEFAULT_QUADRATURE):
    """Quasi-static kernel G(a, b) by adaptive Gauss-Legendre quadrature.

    Depends on ``a`` only through ``c = |a - b|``. Exactly ``b/(32 pi)`` at
    c = 0 and exactly 0 once ``2c`` exceeds the underflow guard.
    """
    if not b > 0:
        raise DomainError(f"G(a, b) requires b > 0, got b={b!r}")
    c = abs(a - b)
    if c == 0:
        return b / (32.0 * math.pi)
    if 2.0 * c > UNDERFLOW_EXPONENT:
        return 0.0
    c2 = c * c

    # exp(-2c) is factored out so the integrand stays O(1) for large c
    def integrand(u):
        s = np.sqrt(u * u + c2)
        return s * np.exp(-2.0 * (s - c))

    # branch points of s(u) at u = +-ic: grade panels toward u = 0 on scale c
    integral = integrate(integrand, graded_breakpoints(0.0, c + TAIL_LENGTH, c), settings)
    return b / (8.0 * math.pi) * integral * math.exp(-2.0 * c)


def normalized_pair(a, b, settings: QuadratureSettings = DEFAULT_QUADRATURE):
    """(G(a, b), G(-a, b)): descending and ascending kernel values."""
    return g_kernel(a, b, settings), g_kernel(-a, b, settings)


def gamma_pair(config: SystemConfig, settings: QuadratureSettings = DEFAULT_QUADRATURE) -> RatePair:
    """Quasi-static rates Gamma+ (e -> g) and Gamma- (g -> e, motion induced)."""
    p = config.normalized
    g_plus, g_minus = normalized_pair(p.a, p.b, settings)
    scale = config.rate_prefactor
    return RatePair(scale * g_plus, scale * g_minus, g_plus, g_minus)


def gamma_total(pair: RatePair) -> float:
    """Net decay rate Gamma+ - Gamma-; negative means population inversion."""
    return pair.gamma_plus - pair.gamma_minus


def im_c_int_zz(config: SystemConfig, settings: QuadratureSettings = DEFAULT_QUADRATURE) -> float:
    """Imaginary part of the zz interaction constant, in 1/m^3."""
    p = config.normalized
    g_plus, g_minus = normalized_pair(p.a, p.b, settings)
    return (g_plus - g_minus) / config.d**3


def im_c_from_rates(config: SystemConfig, pair: RatePair) -> float:
    """Im C_int,zz recovered from a rate pair: eps0 hbar/(2 gamma^2) * (Gamma+ - Gamma-)."""
    return CONSTANTS.eps0 * CONSTANTS.hbar / (2.0 * config.gamma_eg**2) * gamma_total(pair)
