"""Quasi-static friction force on the atom and the power it radiates.

Sign convention: ``config.v`` is the slab velocity relative to the atom, so in
the slab frame the atom moves with -v. The reported force is the x-component
acting on the atom; the stationary force has the sign of v, i.e. it opposes
the atom's motion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .config import CONSTANTS, RatePair, SystemConfig
from .dynamics import pe_steady
from .errors import DomainError


@dataclass(frozen=True)
class FrictionResult:
    force: float
    power: float
    normalized_force: float
    normalized_power: float


def _result(config: SystemConfig, force) -> FrictionResult:
    power = force * config.v
    four_pi_eps0 = 4.0 * math.pi * CONSTANTS.eps0
    g2 = config.gamma_eg**2
    return FrictionResult(
        force=force,
        power=power,
        normalized_force=force * four_pi_eps0 * config.d**4 / g2,
        normalized_power=power * four_pi_eps0 * config.d**3 / (config.omega_sp * g2),
    )


def friction_force(config: SystemConfig, pair: RatePair, p_e) -> FrictionResult:
    """Force at instantaneous excited-state probability ``p_e``:

    F = -p_e G+ hbar (w0 - wsp)/v + (1 - p_e) G- hbar (w0 + wsp)/v
    """
    config.require_motion()
    if not 0.0 <= p_e <= 1.0:
        raise DomainError(f"p_e must lie in [0, 1], got {p_e!r}")
    hbar, v = CONSTANTS.hbar, config.v
    force = (
        -p_e * pair.gamma_plus * hbar * (config.omega0 - config.omega_sp) / v
        + (1.0 - p_e) * pair.gamma_minus * hbar * (config.omega0 + config.omega_sp) / v
    )
    return _result(config, force)


def friction_steady(config: SystemConfig, pair: RatePair) -> FrictionResult:
    """Stationary force 2 hbar wsp / v * G+ G- / (G+ + G-)."""
    config.require_motion()
    pe_steady(pair)  # raises when both rates vanish
    force = 2.0 * CONSTANTS.hbar * config.omega_sp / config.v * pair.gamma_plus * pair.gamma_minus / pair.total
    return _result(config, force)


def radiated_power_steady(config: SystemConfig, pair: RatePair) -> float:
    """Stationary radiated power F v (W), equal to 2 hbar wsp P_inf G+."""
    return friction_steady(config, pair).power


def normalized_force(g_plus, g_minus, b):
    """Stationary normalized force F 4 pi eps0 d^4/gamma^2 from kernel values (v > 0)."""
    total = g_plus + g_minus
    return 16.0 * math.pi * b * g_plus * g_minus / total if total > 0 else 0.0


def normalized_power(g_plus, g_minus):
    """Stationary normalized power F v 4 pi eps0 d^3/(wsp gamma^2) from kernel values."""
    total = g_plus + g_minus
    return 16.0 * math.pi * g_plus * g_minus / total if total > 0 else 0.0
