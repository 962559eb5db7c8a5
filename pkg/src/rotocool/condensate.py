"""Bogoliubov phonon branch: dispersion, weights, occupations.

Momenta in 1/xi, energies in c/xi; both dimensionless in code units.
"""
import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import DomainError
from .params import SystemParams, derive_constants


def dispersion(k: float) -> float:
    """Phonon energy omega = k sqrt(1 + k^2/2); gapless and monotone."""
    if k < 0.0:
        raise DomainError("momentum must be nonnegative")
    return k * math.sqrt(1.0 + 0.5 * k * k)


def inverse_dispersion(omega: float) -> float:
    """Momentum of the phonon with energy omega.

    Uses k = omega sqrt(2/(sqrt(1+2 omega^2)+1)), which is the textbook
    sqrt(sqrt(1+2 omega^2)-1) rewritten to avoid cancellation near 0.
    """
    if omega < 0.0:
        raise DomainError("energy must be nonnegative")
    s = math.sqrt(1.0 + 2.0 * omega * omega)
    return omega * math.sqrt(2.0 / (s + 1.0))


def dk_domega(omega: float) -> float:
    """Density-of-states factor dk/domega along the phonon branch.

    Analytic derivative of inverse_dispersion; the omega -> 0 limit is
    exactly 1 (linear branch) and is returned at omega = 0.
    """
    if omega < 0.0:
        raise DomainError("energy must be nonnegative")
    s = math.sqrt(1.0 + 2.0 * omega * omega)
    return math.sqrt(0.5 * (s + 1.0)) / s


def w_factor(k: float) -> float:
    """Bogoliubov weight W_k = (k^2/(2+k^2))^(1/4), in (0, 1)."""
    if k <= 0.0:
        raise DomainError("momentum must be positive")
    return (k * k / (2.0 + k * k)) ** 0.25


def w_cross(k: float, kp: float) -> float:
    """Two-phonon scattering weight W_k W_k' + (W_k W_k')^(-1)."""
    ww = w_factor(k) * w_factor(kp)
    return ww + 1.0 / ww


def w_prec(k: float, kp: float) -> float:
    """Two-phonon pair weight W_k W_k' - (W_k W_k')^(-1)."""
    ww = w_factor(k) * w_factor(kp)
    return ww - 1.0 / ww


def occupation_at_temperature(omega: float, temperature: float) -> float:
    """Bose-Einstein occupation at an explicit temperature in code units."""
    if temperature <= 0.0 or omega <= 0.0:
        return 0.0
    x = omega / temperature
    if x > 700.0:
        # e^700 exceeds double range; true value is below 1e-300
        return 0.0
    return 1.0 / math.expm1(x)


@lru_cache(maxsize=None)
def _temperature_of(p: SystemParams) -> float:
    return derive_constants(p).temperature


def thermal_occupation(omega: float, p: SystemParams) -> float:
    """Thermal phonon number at energy omega for the given parameters.

    Exactly 0 when T_over_Tc = 0.
    """
    if omega <= 0.0:
        raise DomainError("energy must be positive")
    return occupation_at_temperature(omega, _temperature_of(p))


@dataclass(frozen=True)
class PhononMode:
    """A point on the phonon branch; omega must match dispersion(k)."""

    k: float
    omega: float

    def __post_init__(self):
        ref = dispersion(self.k)
        tol = 1e-12 * max(1.0, abs(ref))
        if abs(self.omega - ref) > tol:
            raise DomainError("omega inconsistent with dispersion(k)")

    @classmethod
    def from_momentum(cls, k: float) -> "PhononMode":
        return cls(k=k, omega=dispersion(k))

    @classmethod
    def from_energy(cls, omega: float) -> "PhononMode":
        return cls(k=inverse_dispersion(omega), omega=omega)
