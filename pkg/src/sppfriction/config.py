"""Configuration and value types shared by every module."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional

from scipy import constants as _sc

from .errors import DegenerateInputError, DomainError, PreconditionError

#: |v|/c above which a non-relativistic warning is emitted.
VELOCITY_WARN_FRACTION = 0.3
#: |v|/c at and above which configurations are rejected.
VELOCITY_MAX_FRACTION = 0.5


@dataclass(frozen=True)
class PhysicalConstants:
    """CODATA constants in SI units."""

    hbar: float = _sc.hbar
    eps0: float = _sc.epsilon_0
    c: float = _sc.c


CONSTANTS = PhysicalConstants()


@dataclass(frozen=True)
class SystemConfig:
    """Atom moving parallel to a lossless Drude slab.

    Parameters
    ----------
    omega0 : float
        Atomic transition angular frequency (rad/s).
    omega_sp : float
        Surface-plasmon resonance angular frequency (rad/s).
    d : float
        Atom-interface distance (m). The slab fills z < 0, the atom sits at z = d.
    v : float
        Velocity of the slab relative to the atom along x (m/s). In the slab
        frame the atom moves with velocity -v. Signed; may be zero, but every
        rate operation rejects v = 0.
    gamma_eg : float
        Transition dipole magnitude (C m), oriented along z.
    """

    omega0: float
    omega_sp: float
    d: float
    v: float
    gamma_eg: float

    def __post_init__(self):
        for name in ("omega0", "omega_sp", "d", "gamma_eg"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be finite and > 0, got {value!r}")
        if not math.isfinite(self.v):
            raise DomainError(f"v must be finite, got {self.v!r}")
        beta = abs(self.v) / CONSTANTS.c
        if beta >= VELOCITY_MAX_FRACTION:
            raise DomainError(
                f"|v|/c = {beta:.3g} is outside the non-relativistic range (< {VELOCITY_MAX_FRACTION})"
            )
        if beta > VELOCITY_WARN_FRACTION:
            warnings.warn(
                f"|v|/c = {beta:.3g} exceeds {VELOCITY_WARN_FRACTION}; Galilean treatment is approximate",
                RuntimeWarning,
                stacklevel=3,
            )

    def require_motion(self):
        if self.v == 0:
            raise DegenerateInputError(
                "v = 0: the normalized parameters omega*d/|v| diverge; rate operations need relative motion"
            )

    @property
    def normalized(self) -> "NormalizedParams":
        self.require_motion()
        return NormalizedParams(self.omega0 * self.d / abs(self.v), self.omega_sp * self.d / abs(self.v))

    @property
    def rate_prefactor(self) -> float:
        """2 gamma_eg^2 / (eps0 hbar d^3), converting kernel values to rates (1/s)."""
        return 2.0 * self.gamma_eg**2 / (CONSTANTS.eps0 * CONSTANTS.hbar * self.d**3)

    @classmethod
    def from_normalized(cls, a, b, *, omega_sp, d, gamma_eg, v_sign=1.0):
        """Build the physical config reproducing a given (a, b) pair."""
        if a <= 0 or b <= 0:
            raise DomainError("physical configurations need a > 0 and b > 0")
        v = omega_sp * d / b
        return cls(omega0=a * v / d, omega_sp=omega_sp, d=d, v=math.copysign(v, v_sign), gamma_eg=gamma_eg)


@dataclass(frozen=True)
class NormalizedParams:
    """Dimensionless pair a = omega0 d/|v|, b = omega_sp d/|v|."""

    a: float
    b: float

    def __post_init__(self):
        if not self.b > 0:
            raise DomainError(f"b must be > 0, got {self.b!r}")


@dataclass(frozen=True)
class RatePair:
    """Descending (gamma_plus) and ascending (gamma_minus) transition rates in 1/s.

    ``g_plus``/``g_minus`` hold the dimensionless kernel values when the pair
    was produced from a configuration; they are ``None`` for pairs built from
    bare rates.
    """

    gamma_plus: float
    gamma_minus: float
    g_plus: Optional[float] = None
    g_minus: Optional[float] = None

    def __post_init__(self):
        for name in ("gamma_plus", "gamma_minus"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise DomainError(f"{name} must be finite and >= 0, got {value!r}")

    @property
    def total(self) -> float:
        return self.gamma_plus + self.gamma_minus


@dataclass(frozen=True)
class QuadratureSettings:
    rel_tol: float = 1e-12
    abs_tol: float = 0.0
    max_subdivisions: int = 4096

    def __post_init__(self):
        if not (0 < self.rel_tol <= 1e-6):
            raise PreconditionError(f"rel_tol must lie in (0, 1e-6], got {self.rel_tol!r}")
        if self.abs_tol < 0:
            raise PreconditionError(f"abs_tol must be >= 0, got {self.abs_tol!r}")
        if self.max_subdivisions < 16:
            raise PreconditionError(f"max_subdivisions must be >= 16, got {self.max_subdivisions!r}")


DEFAULT_QUADRATURE = QuadratureSettings()
