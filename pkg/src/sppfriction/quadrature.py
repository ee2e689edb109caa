"""Adaptive composite Gauss-Legendre quadrature on a finite interval."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .config import DEFAULT_QUADRATURE, QuadratureSettings
from .errors import ConvergenceError

PANEL_ORDER = 15
INITIAL_PANELS = 8


@lru_cache(maxsize=None)
def _reference_rule(order):
    nodes, weights = np.polynomial.legendre.leggauss(order)
    return nodes, weights


def composite_gauss_legendre(f, breakpoints, panels, order=PANEL_ORDER):
    """Fixed composite rule: every segment between consecutive ``breakpoints``
    is split into ``panels`` equal sub-intervals with ``order`` nodes each.

    ``f`` must accept and return numpy arrays.
    """
    nodes, weights = _reference_rule(order)
    breakpoints = np.asarray(breakpoints, dtype=float)
    t = np.linspace(0.0, 1.0, panels + 1)
    start = breakpoints[:-1, None]
    width = np.diff(breakpoints)[:, None]
    lo = (start + width * t[None, :-1]).ravel()
    hi = (start + width * t[None, 1:]).ravel()
    half = 0.5 * (hi - lo)
    mid = 0.5 * (lo + hi)
    x = mid[:, None] + half[:, None] * nodes[None, :]
    fx = f(x)
    return float(np.sum(half * (fx @ weights)))


def graded_breakpoints(lo, hi, scale):
    """Breakpoints lo, lo+scale, lo+2*scale, lo+4*scale, ... (doubling lengths) up
    to lo+1, then hi. Resolves features of width ``scale`` sitting at ``lo``."""
    points = [lo]
    step = scale
    while step < 1.0 and lo + step < hi:
        points.append(lo + step)
        step *= 2.0
    points.append(hi)
    return points


def integrate(f, breakpoints, settings: QuadratureSettings = DEFAULT_QUADRATURE):
    """Integrate ``f`` over [breakpoints[0], breakpoints[-1]].

    The panel count per segment is doubled until two successive estimates
    agree to ``max(abs_tol, rel_tol*|I|)``.

    Raises
    ------
    ConvergenceError
        When the total panel count would exceed ``settings.max_subdivisions``;
        the last two estimates are attached as ``exc.estimates``.
    """
    segments = len(breakpoints) - 1
    panels = INITIAL_PANELS
    estimates = [composite_gauss_legendre(f, breakpoints, panels)]
    while 2 * panels * segments <= settings.max_subdivisions:
        panels *= 2
        estimates.append(composite_gauss_legendre(f, breakpoints, panels))
        previous, current = estimates[-2:]
        if abs(current - previous) <= max(settings.abs_tol, settings.rel_tol * abs(current)):
            return current
    raise ConvergenceError(
        f"quadrature did not converge within {settings.max_subdivisions} panels",
        estimates=estimates[-2:],
    )
