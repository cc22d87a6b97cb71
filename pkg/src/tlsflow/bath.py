"""Thermal reservoir model: power-law spectral density and occupation factors.

Each reservoir is characterized by a temperature T and a coupling spectrum
gamma(omega) = c * omega**n.  The Fourier transforms of the bath correlation
function at positive and negative frequency,

    G(+omega) = gamma(omega) * n(omega)        (absorption from the bath)
    G(-omega) = gamma(omega) * (n(omega) + 1)  (emission into the bath)

with n(omega) = 1 / (exp(omega/T) - 1), drive the dissipators.  The
half-sum g = gamma(omega) * (n + 1/2) is the transverse relaxation rate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

__all__ = [
    "ReservoirSpec",
    "mean_occupation",
    "coupling_rate",
    "correlation_fourier",
    "relaxation_rate",
]


@dataclass(frozen=True)
class ReservoirSpec:
    """Thermal reservoir: temperature plus power-law coupling gamma = c * w**n."""

    temperature: float
    prefactor: float
    exponent: int = 3

    def __post_init__(self) -> None:
        if not self.temperature > 0.0:
            raise DomainError(f"reservoir temperature must be > 0, got {self.temperature}")
        if not self.prefactor > 0.0:
            raise DomainError(f"coupling prefactor must be > 0, got {self.prefactor}")
        if self.exponent != int(self.exponent) or self.exponent < 0:
            raise DomainError(f"spectral exponent must be an integer >= 0, got {self.exponent}")


def mean_occupation(omega: float, temperature: float) -> float:
    """Bose-Einstein occupation n(omega) = 1/(exp(omega/T) - 1).

    Evaluated as exp(-x)/(1 - exp(-x)) which is stable both for x << 1
    and for x large enough that exp(x) would overflow.
    """
    if not omega > 0.0:
        raise DomainError(f"frequency must be > 0, got {omega}")
    if not temperature > 0.0:
        raise DomainError(f"temperature must be > 0, got {temperature}")
    x = omega / temperature
    return math.exp(-x) / (-math.expm1(-x))


def coupling_rate(spec: ReservoirSpec, omega: float) -> float:
    """Spectral coupling rate gamma(omega) = c * omega**n."""
    if not omega > 0.0:
        raise DomainError(f"frequency must be > 0, got {omega}")
    return spec.prefactor * omega**spec.exponent


def correlation_fourier(spec: ReservoirSpec, omega: float, sign: int) -> float:
    """Bath correlation Fourier component at +omega (sign=+1) or -omega (sign=-1).

    sign=+1 returns G(+omega) = gamma(omega) n(omega); sign=-1 returns
    G(-omega) = gamma(omega) (n(omega) + 1).  omega itself must be positive.
    """
    if sign not in (1, -1):
        raise DomainError(f"sign must be +1 or -1, got {sign}")
    n = mean_occupation(omega, spec.temperature)
    g = coupling_rate(spec, omega)
    return g * n if sign == 1 else g * (n + 1.0)


def relaxation_rate(spec: ReservoirSpec, omega: float) -> float:
    """Transverse relaxation rate g = gamma(omega) (n(omega) + 1/2).

    Equals (G(+omega) + G(-omega)) / 2.
    """
    return coupling_rate(spec, omega) * (mean_occupation(omega, spec.temperature) + 0.5)
