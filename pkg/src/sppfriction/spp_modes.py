"""Quasi-static surface-plasmon modes of a Drude half-space and a brute-force
k-space mode sum used to cross-check the closed-form rates.

Geometry: the slab fills z < 0, vacuum fills z > 0, the atom sits at z = d.
Each mode has potential ``phi = A_k exp(i k.r) exp(-k|z|)`` and frequency
omega_sp; the energy normalisation fixes ``|A_k|^2 = 1/(2 k eps0 S0)``.

The Dirac deltas of the golden-rule sums are replaced by a normalised
broadening kernel of width ``eta`` (rad/s) on a square grid of spacing ``dk``;
the quantisation area is tied to the spacing, ``S0 = (2 pi/dk)^2``, so that
``(1/S0) sum_k`` is exactly the Riemann sum of ``(2 pi)^-2 int d^2k``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .config import CONSTANTS, DEFAULT_QUADRATURE, QuadratureSettings, RatePair, SystemConfig
from .errors import CutoffError, DomainError, PreconditionError
from . import quasistatic

ROWS_PER_CHUNK = 64
MIN_CELLS = 64
MIN_BROADENING_CELLS = 3.0


@dataclass(frozen=True)
class DrudeSlab:
    """Lossless Drude metal, eps(omega) = eps0 (1 - 2 omega_sp^2/omega^2) for z < 0."""

    omega_sp: float

    def permittivity(self, omega, z):
        """Absolute permittivity (F/m) at angular frequency ``omega`` and height ``z``."""
        if z > 0:
            return CONSTANTS.eps0
        return CONSTANTS.eps0 * (1.0 - 2.0 * self.omega_sp**2 / omega**2)

    def d_omega_eps(self, omega, z):
        """d[omega eps(omega)]/d omega, the dispersive energy weight."""
        if z > 0:
            return CONSTANTS.eps0
        return CONSTANTS.eps0 * (1.0 + 2.0 * self.omega_sp**2 / omega**2)


def dispersive_weight(z_sign: Literal["above", "below"]) -> float:
    """d[omega eps]/d omega at omega_sp, as a multiple of eps0: 1 above the
    interface, 3 inside the metal."""
    if z_sign == "above":
        return 1.0
    if z_sign == "below":
        return 3.0
    raise DomainError(f"z_sign must be 'above' or 'below', got {z_sign!r}")


@dataclass(frozen=True)
class SPPMode:
    kx: float
    ky: float
    S0: float
    omega: float

    def __post_init__(self):
        if not self.k > 0:
            raise DomainError("SPP modes need |k| > 0")
        if not self.S0 > 0:
            raise DomainError("quantization area must be > 0")

    @property
    def k(self):
        return math.hypot(self.kx, self.ky)

    @property
    def amplitude(self):
        """|A_k| in volts."""
        return math.sqrt(1.0 / (2.0 * self.k * CONSTANTS.eps0 * self.S0))

    def potential(self, x, y, z):
        return self.amplitude * np.exp(1j * (self.kx * x + self.ky * y)) * np.exp(-self.k * np.abs(z))

    def field(self, x, y, z):
        """Complex field vector E = -grad(phi) = -(i kx, i ky, -k sign z) phi."""
        phi = self.potential(x, y, z)
        return -np.array([1j * self.kx * phi, 1j * self.ky * phi, -self.k * np.sign(z) * phi])


def mode_field_z(mode: SPPMode, z):
    """|E_z(z)|^2 = k^2 |A|^2 e^{-2kz} = k e^{-2kz} / (2 eps0 S0), for z >= 0."""
    if np.any(np.asarray(z) < 0):
        raise DomainError("mode_field_z is defined on the atom side, z >= 0")
    return mode.k * np.exp(-2.0 * mode.k * z) / (2.0 * CONSTANTS.eps0 * mode.S0)


def normalization_integral(mode: SPPMode) -> float:
    """(1/2) int |E|^2 d[omega eps]/d omega d^3r over the area S0.

    |E|^2 = 2 k^2 |A|^2 e^{-2k|z|}; the z-integral of e^{-2k|z|} over each
    half-space is 1/(2k).
    """
    per_region = 0.5 * mode.S0 * 2.0 * mode.k**2 * mode.amplitude**2 / (2.0 * mode.k)
    eps0 = CONSTANTS.eps0
    return per_region * eps0 * (dispersive_weight("above") + dispersive_weight("below"))


def gaussian_delta(x, eta):
    return np.exp(-0.5 * (x / eta) ** 2) / (math.sqrt(2.0 * math.pi) * eta)


def lorentzian_delta(x, eta):
    return eta / (math.pi * (x * x + eta * eta))


BROADENINGS = {"gaussian": gaussian_delta, "lorentzian": lorentzian_delta}


@dataclass(frozen=True)
class ModeGrid:
    """Discretisation of the transverse wave-vector plane.

    ``dk`` and ``k_max`` in rad/m, ``eta`` (kernel width, rad/s). For the
    Gaussian kernel ``eta`` is the standard deviation, for the Lorentzian the
    half-width at half maximum.
    """

    dk: float
    k_max: float
    eta: float
    broadening: str = "gaussian"
    S0: float = field(init=False)

    def __post_init__(self):
        if not (self.dk > 0 and self.eta > 0):
            raise PreconditionError("grid needs dk > 0 and eta > 0")
        if self.k_max / self.dk < MIN_CELLS:
            raise PreconditionError(f"k_max/dk must be >= {MIN_CELLS}, got {self.k_max / self.dk:.3g}")
        if self.broadening not in BROADENINGS:
            raise PreconditionError(f"unknown broadening {self.broadening!r}")
        object.__setattr__(self, "S0", (2.0 * math.pi / self.dk) ** 2)

    @property
    def half_count(self):
        return int(math.ceil(self.k_max / self.dk))

    def axis(self):
        """Grid values m*dk, |m| <= half_count, ordered by ascending |k|:
        0, +dk, -dk, +2dk, -2dk, ..."""
        n = self.half_count
        m = np.empty(2 * n + 1)
        m[0] = 0.0
        m[1::2] = np.arange(1, n + 1)
        m[2::2] = -np.arange(1, n + 1)
        return m * self.dk


def resonance_lines(config: SystemConfig):
    """k_x positions of the descending and ascending resonance lines (rad/m)."""
    config.require_motion()
    return (config.omega0 - config.omega_sp) / config.v, -(config.omega0 + config.omega_sp) / config.v


def default_schedule(config: SystemConfig, levels=3, finest_dk_d=0.005, cells_per_eta=5.0):
    """Refinement schedule, coarse to fine, halving dk (and eta) each level.

    At the finest level dk = finest_dk_d/d; k_max = max(30/d, 3 * |resonance k_x|);
    eta = cells_per_eta * |v| * dk.
    """
    lines = resonance_lines(config)
    k_max = max(30.0 / config.d, 3.0 * max(abs(k) for k in lines))
    grids = []
    for level in range(levels):
        dk = finest_dk_d / config.d * 2.0 ** (levels - 1 - level)
        grids.append(ModeGrid(dk=dk, k_max=k_max, eta=cells_per_eta * abs(config.v) * dk))
    return grids


def _check_grid(config: SystemConfig, grid: ModeGrid, omegas=None):
    config.require_motion()
    if grid.eta < MIN_BROADENING_CELLS * abs(config.v) * grid.dk:
        raise PreconditionError(
            f"broadening eta={grid.eta:.3g} does not resolve the grid: need eta >= "
            f"{MIN_BROADENING_CELLS}|v|dk = {MIN_BROADENING_CELLS * abs(config.v) * grid.dk:.3g}"
        )
    if omegas is None:
        lines = resonance_lines(config)
    else:
        lines = [(w - config.omega_sp) / config.v for w in omegas] + [
            -(w + config.omega_sp) / config.v for w in omegas
        ]
    for kx in lines:
        if abs(kx) > grid.k_max:
            raise CutoffError(f"resonance line k_x={kx:.4g} lies outside [-k_max, k_max], k_max={grid.k_max:.4g}")


def _row_sums_chunk(kx, ky, d):
    k = np.hypot(kx[:, None], ky[None, :])
    return np.sum(k * np.exp(-2.0 * d * k), axis=1)


def row_sums(config: SystemConfig, grid: ModeGrid, ky_side=None, threads=1):
    """Per-row k-sums ``sum_ky k exp(-2 k d)`` for every k_x of the grid.

    Rows come in ascending-|k_x| order. ``ky_side`` restricts the inner sum to
    ``"positive"`` or ``"negative"`` k_y (k_y = 0 excluded), for parity checks.
    The per-row results do not depend on ``threads``.
    """
    kx = grid.axis()
    ky = grid.axis()
    if ky_side == "positive":
        ky = ky[ky > 0]
    elif ky_side == "negative":
        ky = ky[ky < 0]
    elif ky_side is not None:
        raise DomainError(f"ky_side must be None, 'positive' or 'negative', got {ky_side!r}")
    starts = range(0, kx.size, ROWS_PER_CHUNK)
    out = np.empty(kx.size)

    def work(i0):
        out[i0 : i0 + ROWS_PER_CHUNK] = _row_sums_chunk(kx[i0 : i0 + ROWS_PER_CHUNK], ky, config.d)

    if threads == 1:
        for i0 in starts:
            work(i0)
    else:
        with ThreadPoolExecutor(max_workers=threads or None) as pool:
            list(pool.map(work, starts))
    return kx, out


def _line_sums(config, grid, rows, detunings, weighted=False):
    """sum over rows of F(kx) [kx] delta_eta(omega_sp + kx v - w) for each detuning w."""
    kx, f = rows
    delta = BROADENINGS[grid.broadening]
    base = f * kx if weighted else f
    return [float(np.sum(base * delta(config.omega_sp + kx * config.v - w, grid.eta))) for w in detunings]


def _mode_prefactor(config: SystemConfig, grid: ModeGrid):
    # pi omega_sp |E_z|^2 / (k e^{-2kd}) = pi omega_sp / (2 eps0 S0)
    return math.pi * config.omega_sp / (2.0 * CONSTANTS.eps0 * grid.S0)


def _rates(config, grid, rows):
    plus, minus = _line_sums(config, grid, rows, (config.omega0, -config.omega0))
    scale = _mode_prefactor(config, grid) * config.gamma_eg**2 / CONSTANTS.hbar
    norm = config.rate_prefactor
    return RatePair(scale * plus, scale * minus, scale * plus / norm, scale * minus / norm)


def _friction(config, grid, rows, p_e):
    plus, minus = _line_sums(config, grid, rows, (config.omega0, -config.omega0), weighted=True)
    scale = _mode_prefactor(config, grid) * config.gamma_eg**2
    return -p_e * scale * plus - (1.0 - p_e) * scale * minus


def brute_force_rates(config: SystemConfig, grid: ModeGrid, threads=1) -> RatePair:
    """Golden-rule mode sums for Gamma+ and Gamma- over the discretised grid."""
    _check_grid(config, grid)
    return _rates(config, grid, row_sums(config, grid, threads=threads))


def anti_hermitian_c_zz(config: SystemConfig, grid: ModeGrid, omega, threads=1) -> float:
    """zz element of the anti-Hermitian part of the interaction dyadic at
    frequency ``omega``, in the Im C_int,zz convention (1/m^3)."""
    _check_grid(config, grid, omegas=(omega,))
    rows = row_sums(config, grid, threads=threads)
    plus, minus = _line_sums(config, grid, rows, (omega, -omega))
    return CONSTANTS.eps0 * _mode_prefactor(config, grid) * (plus - minus) / 2.0


def brute_force_friction(config: SystemConfig, grid: ModeGrid, p_e, threads=1) -> float:
    """Mode-sum friction force (N) on the atom for excited-state probability ``p_e``."""
    if not 0.0 <= p_e <= 1.0:
        raise DomainError(f"p_e must lie in [0, 1], got {p_e!r}")
    _check_grid(config, grid)
    return _friction(config, grid, row_sums(config, grid, threads=threads), p_e)


@dataclass(frozen=True)
class RefinementRecord:
    level: int
    dk: float
    eta: float
    gamma_plus: float
    gamma_minus: float
    friction: float
    err_plus: float
    err_minus: float
    err_friction: float

    @property
    def max_error(self):
        return max(self.err_plus, self.err_minus, self.err_friction)


def refinement_study(
    config: SystemConfig,
    grids=None,
    settings: QuadratureSettings = DEFAULT_QUADRATURE,
    threads=1,
):
    """Brute-force rates and stationary friction on each grid, with relative
    errors against the closed forms."""
    from .dynamics import pe_steady
    from .friction import friction_steady

    grids = default_schedule(config) if grids is None else grids
    exact = quasistatic.gamma_pair(config, settings)
    p_inf = pe_steady(exact)
    f_exact = friction_steady(config, exact).force
    records = []
    for level, grid in enumerate(grids):
        _check_grid(config, grid)
        rows = row_sums(config, grid, threads=threads)
        pair = _rates(config, grid, rows)
        force = _friction(config, grid, rows, p_inf)
        records.append(
            RefinementRecord(
                level=level,
                dk=grid.dk,
                eta=grid.eta,
                gamma_plus=pair.gamma_plus,
                gamma_minus=pair.gamma_minus,
                friction=force,
                err_plus=abs(pair.gamma_plus / exact.gamma_plus - 1.0),
                err_minus=abs(pair.gamma_minus / exact.gamma_minus - 1.0),
                err_friction=abs(force / f_exact - 1.0),
            )
        )
    return records
