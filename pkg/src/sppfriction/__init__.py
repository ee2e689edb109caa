"""Motion-induced spontaneous emission and quantum friction of a two-level atom
moving parallel to a lossless plasmonic slab, in the quasi-static limit."""

__version__ = "0.1.0"

from .config import (
    CONSTANTS,
    NormalizedParams,
    PhysicalConstants,
    QuadratureSettings,
    RatePair,
    SystemConfig,
)
from .dynamics import evolve_ode, pe_closed_form, pe_steady
from .friction import FrictionResult, friction_force, friction_steady, radiated_power_steady
from .quasistatic import g_kernel, gamma_pair, gamma_total, im_c_int_zz

__all__ = [
    "CONSTANTS",
    "FrictionResult",
    "NormalizedParams",
    "PhysicalConstants",
    "QuadratureSettings",
    "RatePair",
    "SystemConfig",
    "evolve_ode",
    "friction_force",
    "friction_steady",
    "g_kernel",
    "gamma_pair",
    "gamma_total",
    "im_c_int_zz",
    "pe_closed_form",
    "pe_steady",
    "radiated_power_steady",
]
