"""Two coupled two-level systems: Hamiltonian, dressed frame, dressed operators.

Fixed product basis {|gg>, |ge>, |eg>, |ee>} with the first label for TLS 1.
The Hamiltonian is

    H = w1 n1 + w2 n2 + Omega (s1+ s2 + s2+ s1)

with lowering operators s_j and number operators n_j = s_j+ s_j.  Hybridizing
the single-excitation sector gives dressed transition frequencies
w_avg +- rabi_eff where w_avg = (w1+w2)/2 and rabi_eff = sqrt(dw^2+4 Omega^2)/2.
The dressed jump operators a_j, b_j are eigenoperators of H at the upper and
lower dressed frequency respectively and satisfy a_j + b_j = s_j.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError, DressedFrameError

__all__ = [
    "BASIS_LABELS",
    "SIGMA1",
    "SIGMA2",
    "NUM1",
    "NUM2",
    "RWA_VALIDITY_FACTOR",
    "TlsPair",
    "DressedFrame",
    "DressedOps",
    "validity_check",
    "dressed_frame",
    "hamiltonian_matrix",
    "dressed_operator_matrices",
]

BASIS_LABELS = ("gg", "ge", "eg", "ee")

_SM = np.array([[0.0, 1.0], [0.0, 0.0]])
_I2 = np.eye(2)

SIGMA1 = np.kron(_SM, _I2)
SIGMA2 = np.kron(_I2, _SM)
NUM1 = SIGMA1.T @ SIGMA1
NUM2 = SIGMA2.T @ SIGMA2

# weak-coupling validity bound: Omega above this fraction of min(w1, w2)
# strains the rotating-wave form of the interaction
RWA_VALIDITY_FACTOR = 0.1


@dataclass(frozen=True)
class TlsPair:
    """Two coupled TLSs: bare frequencies omega1, omega2 and coupling rabi."""

    omega1: float
    omega2: float
    rabi: float

    def __post_init__(self) -> None:
        if not self.omega1 > 0.0:
            raise DomainError(f"omega1 must be > 0, got {self.omega1}")
        if not self.omega2 > 0.0:
            raise DomainError(f"omega2 must be > 0, got {self.omega2}")
        if not self.rabi >= 0.0:
            raise DomainError(f"rabi must be >= 0, got {self.rabi}")

    @property
    def detuning(self) -> float:
        return self.omega1 - self.omega2


def validity_check(pair: TlsPair) -> list[str]:
    """Return warnings for parameter regimes that strain the model, if any."""
    warnings = []
    bound = RWA_VALIDITY_FACTOR * min(pair.omega1, pair.omega2)
    if pair.rabi > bound:
        warnings.append(
            f"coupling rabi={pair.rabi:g} exceeds {RWA_VALIDITY_FACTOR:g}*min(omega1, omega2)"
            f"={bound:g}; weak-coupling treatment is strained"
        )
    return warnings


@dataclass(frozen=True)
class DressedFrame:
    """Dressed-basis bookkeeping for a coupled pair.

    detuning  = w1 - w2
    omega_avg = (w1 + w2) / 2
    rabi_eff  = sqrt(detuning^2 + 4 rabi^2) / 2
    y         = detuning / rabi   (mixing ratio)
    r         = sqrt(y^2/4 + 1)   (mixing norm; note y^2 - 4 r^2 = -4)

    upper / lower are the dressed transition frequencies omega_avg +- rabi_eff.
    """

    detuning: float
    omega_avg: float
    rabi_eff: float
    y: float
    r: float

    @property
    def upper(self) -> float:
        return self.omega_avg + self.rabi_eff

    @property
    def lower(self) -> float:
        return self.omega_avg - self.rabi_eff


def dressed_frame(pair: TlsPair) -> DressedFrame:
    """Compute the dressed frame. Requires rabi > 0 and a positive lower frequency."""
    if pair.rabi == 0.0:
        raise DressedFrameError("dressed frame undefined for zero coupling (rabi = 0)")
    dw = pair.detuning
    w_avg = 0.5 * (pair.omega1 + pair.omega2)
    rabi_eff = 0.5 * math.sqrt(dw * dw + 4.0 * pair.rabi * pair.rabi)
    if not w_avg - rabi_eff > 0.0:
        raise DressedFrameError(
            f"lower dressed frequency {w_avg - rabi_eff:g} is not positive; "
            "the dressed description does not apply"
        )
    y = dw / pair.rabi
    r = math.sqrt(0.25 * y * y + 1.0)
    return DressedFrame(detuning=dw, omega_avg=w_avg, rabi_eff=rabi_eff, y=y, r=r)


def hamiltonian_matrix(pair: TlsPair) -> np.ndarray:
    """4x4 Hamiltonian in the product basis. Real symmetric."""
    return (
        pair.omega1 * NUM1
        + pair.omega2 * NUM2
        + pair.rabi * (SIGMA1.T @ SIGMA2 + SIGMA2.T @ SIGMA1)
    )


class DressedOps(NamedTuple):
    """Dressed jump operators; a_j at the upper frequency, b_j at the lower."""

    a1: np.ndarray
    b1: np.ndarray
    a2: np.ndarray
    b2: np.ndarray


def dressed_operator_matrices(pair: TlsPair) -> DressedOps:
    """Dressed jump operators as 4x4 matrices.

    a_j and b_j are eigenoperators of the Hamiltonian: [H, a_j] = -upper * a_j
    and [H, b_j] = -lower * b_j, and they split the bare operators as
    a_j + b_j = s_j.
    """
    frame = dressed_frame(pair)
    y, r = frame.y, frame.r
    a1 = (SIGMA1 * (y + 2.0 * r) / 2.0 + SIGMA2 - 2.0 * (NUM1 @ SIGMA2)) / (2.0 * r)
    b1 = (-SIGMA1 * (y - 2.0 * r) / 2.0 - SIGMA2 + 2.0 * (NUM1 @ SIGMA2)) / (2.0 * r)
    a2 = (SIGMA2 * (-y + 2.0 * r) / 2.0 + SIGMA1 - 2.0 * (NUM2 @ SIGMA1)) / (2.0 * r)
    b2 = (SIGMA2 * (y + 2.0 * r) / 2.0 - SIGMA1 + 2.0 * (NUM2 @ SIGMA1)) / (2.0 * r)
    return DressedOps(a1=a1, b1=b1, a2=a2, b2=b2)
