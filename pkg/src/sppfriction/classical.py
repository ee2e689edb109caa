"""Semi-classical dipole model of the atom.

The atom is a polarizable dipole along z. Its decay rate follows from the
imaginary part of the zz interaction constant; with the quasi-static
``Im C_int,zz`` this reproduces the quantum net rate Gamma+ - Gamma- up to the
free-space term.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .config import CONSTANTS
from .errors import ConvergenceError, DomainError

HIGH_Q_LIMIT = 1e-3


@dataclass(frozen=True)
class AtomPolarizability:
    omega0: float
    gamma_eg: float

    def __post_init__(self):
        if not (self.omega0 > 0 and self.gamma_eg > 0):
            raise DomainError("omega0 and gamma_eg must be > 0")

    @property
    def gamma0(self):
        """Field decay constant gamma^2 (omega0/c)^3 / (6 pi eps0 hbar)."""
        return self.gamma_eg**2 * (self.omega0 / CONSTANTS.c) ** 3 / (6.0 * math.pi * CONSTANTS.eps0 * CONSTANTS.hbar)

    @property
    def scale(self):
        """hbar omega0 eps0 / gamma^2 (1/m^3)."""
        return CONSTANTS.hbar * self.omega0 * CONSTANTS.eps0 / self.gamma_eg**2


def inverse_polarizability(atom: AtomPolarizability, omega) -> complex:
    w0, g0 = atom.omega0, atom.gamma0
    # factored so g0^2 (~1e-17 of w0^2) is not lost to cancellation near resonance
    detuning = (w0 - omega) * (w0 + omega) + g0**2
    return atom.scale * (detuning / (2.0 * w0**2) - 1j * g0 * omega / w0**2)


def free_space_rate(atom: AtomPolarizability) -> float:
    """Gamma_sp = gamma^2 omega0^3 / (3 pi eps0 hbar c^3)."""
    return atom.gamma_eg**2 * (atom.omega0 / CONSTANTS.c) ** 3 / (3.0 * math.pi * CONSTANTS.eps0 * CONSTANTS.hbar)


def classical_decay_rate(atom: AtomPolarizability, im_c_int_zz) -> float:
    """Gamma_cl = -2 omega'' = (2 gamma^2 / hbar eps0) [(omega0/c)^3/(6 pi) + Im C_int,zz].

    Warns when Gamma_cl/omega0 exceeds the high-Q limit of the perturbative
    treatment.
    """
    free = (atom.omega0 / CONSTANTS.c) ** 3 / (6.0 * math.pi)
    rate = 2.0 * atom.gamma_eg**2 / (CONSTANTS.hbar * CONSTANTS.eps0) * (free + im_c_int_zz)
    if abs(rate) / atom.omega0 > HIGH_Q_LIMIT:
        warnings.warn(
            f"|Gamma_cl|/omega0 = {abs(rate) / atom.omega0:.3g} > {HIGH_Q_LIMIT}: perturbative decay rate unreliable",
            RuntimeWarning,
            stacklevel=2,
        )
    return rate


def perturbative_frequency(atom: AtomPolarizability, im_c_int_zz) -> complex:
    """omega0 + i omega'' with omega'' = -Gamma_cl / 2."""
    free = (atom.omega0 / CONSTANTS.c) ** 3 / (6.0 * math.pi)
    omega_im = -atom.gamma_eg**2 / (CONSTANTS.hbar * CONSTANTS.eps0) * (free + im_c_int_zz)
    return complex(atom.omega0, omega_im)


def characteristic_residual(atom: AtomPolarizability, omega, c_int_zz) -> complex:
    """gamma^2 [alpha^-1(omega) - C_int,zz]; zero at a natural frequency."""
    return atom.gamma_eg**2 * (inverse_polarizability(atom, omega) - c_int_zz)


def characteristic_root(atom: AtomPolarizability, c_int_zz, omega_guess=None, tol=1e-14, max_iter=50) -> complex:
    """Complex Newton iteration for the natural frequency with a constant
    (frequency independent) interaction constant."""
    omega = complex(atom.omega0 if omega_guess is None else omega_guess)
    w0, g0 = atom.omega0, atom.gamma0
    for _ in range(max_iter):
        f = inverse_polarizability(atom, omega) - c_int_zz
        df = atom.scale * (-omega / w0**2 - 1j * g0 / w0**2)
        step = f / df
        omega -= step
        if abs(step) <= tol * abs(omega):
            return omega
    raise ConvergenceError("Newton iteration on the characteristic equation did not converge", estimates=(omega,))
