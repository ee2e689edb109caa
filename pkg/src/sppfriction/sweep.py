"""Parameter sweeps, golden-section optimisation and the material report."""

from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .config import CONSTANTS, DEFAULT_QUADRATURE, QuadratureSettings, SystemConfig
from .dynamics import pe_steady
from .errors import DomainError, OptimizationError, UndefinedEquilibriumError
from .friction import friction_steady, normalized_force, normalized_power
from .quasistatic import gamma_pair, gamma_total, normalized_pair

QUANTITIES = ("pe_steady", "gamma_total", "normalized_force", "normalized_power", "gamma_plus", "gamma_minus")
NORMALIZED_AXES = ("a", "b")
PHYSICAL_AXES = ("v", "d", "omega0")
CONFIG_FIELDS = ("omega0", "omega_sp", "d", "v", "gamma_eg")
INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class MaterialPreset:
    name: str
    omega_sp: float


MATERIALS = {"silver": MaterialPreset("silver", 2.0 * math.pi * 646e12)}


@dataclass(frozen=True)
class Axis:
    name: str
    min: float
    max: float
    count: int
    scale: str = "linear"

    def __post_init__(self):
        if self.name not in NORMALIZED_AXES + PHYSICAL_AXES:
            raise DomainError(f"axis name must be one of {NORMALIZED_AXES + PHYSICAL_AXES}, got {self.name!r}")
        if self.count < 2:
            raise DomainError(f"axis {self.name}: count must be >= 2, got {self.count}")
        if not self.min < self.max:
            raise DomainError(f"axis {self.name}: min must be < max")
        if self.scale not in ("linear", "log"):
            raise DomainError(f"axis {self.name}: scale must be 'linear' or 'log', got {self.scale!r}")
        if self.scale == "log" and self.min <= 0:
            raise DomainError(f"axis {self.name}: log scale needs min > 0")

    def values(self):
        if self.scale == "log":
            return np.geomspace(self.min, self.max, self.count)
        return np.linspace(self.min, self.max, self.count)


@dataclass(frozen=True)
class SweepSpec:
    """A 1-D (``axis2=None``) or 2-D grid over normalized (a, b) or physical
    (v, d, omega0) parameters. ``fixed`` supplies the remaining config fields
    for physical sweeps, or the other of a/b for a 1-D normalized sweep."""

    axis1: Axis
    quantity: str
    axis2: Optional[Axis] = None
    fixed: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.quantity not in QUANTITIES:
            raise DomainError(f"quantity must be one of {QUANTITIES}, got {self.quantity!r}")
        names = [self.axis1.name] + ([self.axis2.name] if self.axis2 else [])
        if len(set(names)) != len(names):
            raise DomainError("sweep axes must name distinct fields")
        kinds = {n in NORMALIZED_AXES for n in names}
        if len(kinds) > 1:
            raise DomainError("cannot mix normalized (a, b) and physical (v, d, omega0) axes")

    @property
    def normalized(self):
        return self.axis1.name in NORMALIZED_AXES

    @property
    def columns(self):
        names = [self.axis1.name] + ([self.axis2.name] if self.axis2 else [])
        return names + [self.quantity]


def evaluate_normalized(a, b, quantity, settings: QuadratureSettings = DEFAULT_QUADRATURE):
    """Dimensionless quantity at (a, b); rate quantities are reported as kernel
    values G. Returns None where the stationary state is undefined."""
    g_plus, g_minus = normalized_pair(a, b, settings)
    if quantity == "gamma_plus":
        return g_plus
    if quantity == "gamma_minus":
        return g_minus
    if quantity == "gamma_total":
        return g_plus - g_minus
    if quantity == "normalized_force":
        return normalized_force(g_plus, g_minus, b)
    if quantity == "normalized_power":
        return normalized_power(g_plus, g_minus)
    total = g_plus + g_minus
    return g_minus / total if total > 0 else None


def evaluate_physical(config: SystemConfig, quantity, settings: QuadratureSettings = DEFAULT_QUADRATURE):
    """SI quantity for a configuration; None when v = 0 or the stationary
    state is undefined."""
    if config.v == 0:
        return None
    pair = gamma_pair(config, settings)
    if quantity == "gamma_plus":
        return pair.gamma_plus
    if quantity == "gamma_minus":
        return pair.gamma_minus
    if quantity == "gamma_total":
        return gamma_total(pair)
    try:
        if quantity == "pe_steady":
            return pe_steady(pair)
        result = friction_steady(config, pair)
    except UndefinedEquilibriumError:
        return None
    return result.normalized_force if quantity == "normalized_force" else result.normalized_power


def _evaluate_point(args):
    spec, point, settings = args
    if spec.normalized:
        values = dict(spec.fixed)
        values.update(point)
        if "a" not in values or "b" not in values:
            raise DomainError("normalized sweep needs both a and b (axis or fixed)")
        if not values["b"] > 0:
            raise DomainError("normalized sweep needs b > 0")
        return evaluate_normalized(values["a"], values["b"], spec.quantity, settings)
    values = dict(spec.fixed)
    values.update(point)
    missing = [f for f in CONFIG_FIELDS if f not in values]
    if missing:
        raise DomainError(f"physical sweep is missing fixed fields: {', '.join(missing)}")
    config = SystemConfig(**{f: values[f] for f in CONFIG_FIELDS})
    return evaluate_physical(config, spec.quantity, settings)


def _evaluate_chunk(args):
    spec, points, settings = args
    return [_evaluate_point((spec, p, settings)) for p in points]


def grid_points(spec: SweepSpec):
    """Row-major list of {axis name: value} dicts (axis1 is the slow index)."""
    v1 = spec.axis1.values()
    if spec.axis2 is None:
        return [{spec.axis1.name: float(x)} for x in v1]
    v2 = spec.axis2.values()
    return [{spec.axis1.name: float(x), spec.axis2.name: float(y)} for x in v1 for y in v2]


def run_sweep(spec: SweepSpec, settings: QuadratureSettings = DEFAULT_QUADRATURE, threads=1):
    """Evaluate ``spec.quantity`` on the sweep grid.

    Returns row-major records ``{axis1, [axis2], quantity}``. ``threads`` > 1
    (or 0 for one per CPU) evaluates chunks in worker processes; records are
    assembled in grid order, so the output is independent of the worker count.
    """
    points = grid_points(spec)
    workers = (os.cpu_count() or 1) if threads == 0 else threads
    if workers <= 1 or len(points) < 2:
        values = [_evaluate_point((spec, p, settings)) for p in points]
    else:
        size = max(1, math.ceil(len(points) / (4 * workers)))
        chunks = [(spec, points[i : i + size], settings) for i in range(0, len(points), size)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            values = [v for chunk in pool.map(_evaluate_chunk, chunks) for v in chunk]
    return [dict(p, **{spec.quantity: v}) for p, v in zip(points, values)]


def golden_section_max(f, lo, hi, tol):
    """Maximise a unimodal ``f`` on [lo, hi] to an argmax uncertainty <= tol.

    Raises OptimizationError for flat objectives and when the best interior
    value does not beat both endpoints (maximum not bracketed).
    """
    if not lo < hi:
        raise OptimizationError(f"bracket needs lo < hi, got ({lo}, {hi})")
    if not tol > 0:
        raise OptimizationError("tol must be > 0")
    f_lo, f_hi = f(lo), f(hi)
    a, b = lo, hi
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    fx = f(x)
    best = max(fx, fc, fd)
    if best == f_lo == f_hi:
        raise OptimizationError("objective is flat on the bracket")
    if best <= f_lo or best <= f_hi:
        raise OptimizationError(f"maximum not bracketed by ({lo}, {hi}): it lies at or beyond an endpoint")
    return x, fx


OBJECTIVES = ("pe_steady_diag", "normalized_force_boundary")
DEFAULT_BOUNDARY_A = 1e-3


@dataclass(frozen=True)
class Optimum:
    argmax: float
    max: float


def objective_function(objective, settings: QuadratureSettings = DEFAULT_QUADRATURE, a_fixed=DEFAULT_BOUNDARY_A):
    """Objective of b: stationary population along a = b, or the stationary
    normalized force at fixed small a."""
    if objective == "pe_steady_diag":
        return lambda b: evaluate_normalized(b, b, "pe_steady", settings)
    if objective == "normalized_force_boundary":
        return lambda b: evaluate_normalized(a_fixed, b, "normalized_force", settings)
    raise DomainError(f"objective must be one of {OBJECTIVES}, got {objective!r}")


def optimize_1d(objective, bracket, tol=1e-4, settings: QuadratureSettings = DEFAULT_QUADRATURE, a_fixed=DEFAULT_BOUNDARY_A):
    lo, hi = bracket
    x, fx = golden_section_max(objective_function(objective, settings, a_fixed), lo, hi, tol)
    return Optimum(x, fx)


@dataclass(frozen=True)
class ReportRecord:
    v_mps: float
    v_over_c: float
    pe_steady: float
    gamma_plus: float
    gamma_minus: float
    force: float
    power: float


@dataclass(frozen=True)
class Report:
    records: list
    v_star: float
    pe_max: float
    omega_sp: float
    d: float

    @property
    def v_star_over_c(self):
        return self.v_star / CONSTANTS.c

    @property
    def v_star_over_omega_sp_d(self):
        return self.v_star / (self.omega_sp * self.d)


def physical_report(
    preset: MaterialPreset,
    d,
    omega0,
    gamma_eg,
    v_range,
    settings: QuadratureSettings = DEFAULT_QUADRATURE,
    tol=None,
) -> Report:
    """Stationary population, rates, force and power over a velocity grid
    ``v_range = (v_min, v_max, count)`` (m/s, v_min > 0), plus the velocity v*
    maximising the stationary population (grid argmax refined by golden
    section between its neighbours)."""
    v_min, v_max, count = v_range
    if not (0 < v_min < v_max) or count < 3:
        raise DomainError("v_range needs 0 < v_min < v_max and count >= 3")
    SystemConfig(omega0=omega0, omega_sp=preset.omega_sp, d=d, v=v_max, gamma_eg=gamma_eg)  # validates, warns once
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        return _scan(preset, d, omega0, gamma_eg, v_min, v_max, count, settings, tol)


def _scan(preset, d, omega0, gamma_eg, v_min, v_max, count, settings, tol):
    base = SystemConfig(omega0=omega0, omega_sp=preset.omega_sp, d=d, v=v_min, gamma_eg=gamma_eg)
    velocities = np.linspace(v_min, v_max, count)
    records = []
    for v in velocities:
        config = replace(base, v=float(v))
        pair = gamma_pair(config, settings)
        fr = friction_steady(config, pair)
        records.append(
            ReportRecord(
                v_mps=float(v),
                v_over_c=float(v) / CONSTANTS.c,
                pe_steady=pe_steady(pair),
                gamma_plus=pair.gamma_plus,
                gamma_minus=pair.gamma_minus,
                force=fr.force,
                power=fr.power,
            )
        )
    best = int(np.argmax([r.pe_steady for r in records]))
    lo = velocities[max(best - 1, 0)]
    hi = velocities[min(best + 1, count - 1)]
    tol = 1e-7 * v_max if tol is None else tol

    def p_of_v(v):
        return pe_steady(gamma_pair(replace(base, v=float(v)), settings))

    if 0 < best < count - 1:
        v_star, p_max = golden_section_max(p_of_v, lo, hi, tol)
    else:
        v_star, p_max = float(velocities[best]), records[best].pe_steady
    return Report(records, float(v_star), float(p_max), preset.omega_sp, d)
