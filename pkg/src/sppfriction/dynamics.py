"""Markov rate dynamics of the two-level atom population."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .config import RatePair
from .errors import DomainError, IntegrationError, UndefinedEquilibriumError


@dataclass(frozen=True)
class PopulationState:
    p_e: float

    def __post_init__(self):
        if not 0.0 <= self.p_e <= 1.0:
            raise DomainError(f"p_e must lie in [0, 1], got {self.p_e!r}")


@dataclass(frozen=True)
class PopulationTrajectory:
    t: np.ndarray
    p_e: np.ndarray
    p_e_infinity: float

    def rows(self):
        return [{"t_seconds": float(t), "p_e": float(p)} for t, p in zip(self.t, self.p_e)]


def _check_probability(p, name="p0"):
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"{name} must lie in [0, 1], got {p!r}")


def pe_closed_form(pair: RatePair, p0, t):
    """P_e(t) = P_inf (1 - e^{-(G+ + G-)t}) + p0 e^{-(G+ + G-)t}.

    Accepts scalar or array ``t``. With both rates zero P_e stays at p0.
    """
    _check_probability(p0)
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise DomainError("t must be >= 0")
    total = pair.total
    if total == 0:
        out = np.full_like(t, p0)
    else:
        decay = np.exp(-total * t)
        out = pair.gamma_minus / total * (1.0 - decay) + p0 * decay
    return float(out) if out.ndim == 0 else out


def pe_steady(pair: RatePair) -> float:
    """Stationary excited-state probability Gamma- / (Gamma- + Gamma+)."""
    if pair.total == 0:
        raise UndefinedEquilibriumError("both transition rates vanish; the stationary population is undefined")
    return pair.gamma_minus / pair.total


def rate_equation(pair: RatePair):
    """Right-hand side dP/dt = Gamma- - P (Gamma- + Gamma+)."""
    gm, total = pair.gamma_minus, pair.total
    return lambda t, p: gm - p * total


def evolve_ode(pair: RatePair, p0, t_grid, rel_tol=1e-9) -> PopulationTrajectory:
    """Integrate the rate equation with an embedded Runge-Kutta 4(5) pair
    (Dormand-Prince, step rejection on local error) and sample on ``t_grid``.

    Used to cross-check :func:`pe_closed_form`.
    """
    _check_probability(p0)
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or t_grid.size < 1 or t_grid[0] != 0 or np.any(np.diff(t_grid) <= 0):
        raise DomainError("t_grid must be strictly increasing and start at 0")
    p_inf = pe_steady(pair) if pair.total > 0 else p0
    if t_grid.size == 1:
        return PopulationTrajectory(t_grid, np.array([p0]), p_inf)
    sol = solve_ivp(
        rate_equation(pair),
        (0.0, t_grid[-1]),
        [p0],
        method="RK45",
        t_eval=t_grid,
        rtol=rel_tol,
        atol=rel_tol * 1e-2,
    )
    if not sol.success:
        raise IntegrationError(f"rate-equation integration failed: {sol.message}")
    return PopulationTrajectory(sol.t, np.clip(sol.y[0], 0.0, 1.0), p_inf)


def relaxation_time(pair: RatePair) -> float:
    """1 / (Gamma+ + Gamma-)."""
    if pair.total == 0:
        return math.inf
    return 1.0 / pair.total


def sigma_z_expectation(state: PopulationState) -> float:
    return 2.0 * state.p_e - 1.0


def detailed_balance_residual(pair: RatePair, p) -> float:
    """Net downward flux p Gamma+ - (1 - p) Gamma-; zero at the stationary state."""
    return p * pair.gamma_plus - (1.0 - p) * pair.gamma_minus
