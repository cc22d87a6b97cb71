"""Full 16x16 generator on the vectorized density matrix.

Independent reference route: the master equations are written directly in
operator form (bare or dressed jump operators, cross dissipators, commutator
terms) and vectorized by column stacking, with no use of the moment-space
weight tables.  Agreement between this route and the moment equations is one
of the standing verification gates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .bath import ReservoirSpec, correlation_fourier
from .dressed import APPROACHES
from .errors import DomainError, SteadyStateError
from .system import (SIGMA1, SIGMA2, TlsPair, dressed_frame,
                     dressed_operator_matrices, hamiltonian_matrix)

__all__ = [
    "vec",
    "unvec",
    "sandwich_superop",
    "lindblad_superop",
    "commutator_superop",
    "Liouvillian",
    "build_liouvillian",
    "steady_density",
    "density_flows",
    "evolve_density",
    "check_density",
]

_I4 = np.eye(4)


def vec(m: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization."""
    return np.asarray(m).reshape(-1, order="F")


def unvec(v: np.ndarray) -> np.ndarray:
    return np.asarray(v).reshape((4, 4), order="F")


def sandwich_superop(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix of rho -> a rho b under column stacking."""
    return np.kron(b.T, a)


def lindblad_superop(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Matrix of rho -> 2 x rho y - y x rho - rho y x."""
    yx = y @ x
    return (2.0 * sandwich_superop(x, y)
            - sandwich_superop(yx, _I4) - sandwich_superop(_I4, yx))


def commutator_superop(w: np.ndarray) -> np.ndarray:
    """Matrix of rho -> [w, rho]."""
    return sandwich_superop(w, _I4) - sandwich_superop(_I4, w)


@dataclass(frozen=True)
class Liouvillian:
    """Vectorized generator with the reservoir parts kept separate."""

    approach: str
    pair: TlsPair
    baths: tuple[ReservoirSpec, ReservoirSpec]
    hamiltonian: np.ndarray
    coherent: np.ndarray
    res_parts: tuple[np.ndarray, np.ndarray]

    @property
    def total(self) -> np.ndarray:
        return self.coherent + self.res_parts[0] + self.res_parts[1]


def _local_part(spec: ReservoirSpec, omega: float, op: np.ndarray) -> np.ndarray:
    gp = correlation_fourier(spec, omega, +1)
    gm = correlation_fourier(spec, omega, -1)
    return (gm / 2.0) * lindblad_superop(op, op.conj().T) \
        + (gp / 2.0) * lindblad_superop(op.conj().T, op)


def _dressed_part(spec: ReservoirSpec, upper: float, lower: float,
                  a: np.ndarray, b: np.ndarray, cross: bool) -> np.ndarray:
    em_u = correlation_fourier(spec, upper, -1)
    ab_u = correlation_fourier(spec, upper, +1)
    em_l = correlation_fourier(spec, lower, -1)
    ab_l = correlation_fourier(spec, lower, +1)
    ad, bd = a.conj().T, b.conj().T
    part = (em_u / 2.0) * lindblad_superop(a, ad) \
        + (ab_u / 2.0) * lindblad_superop(ad, a) \
        + (em_l / 2.0) * lindblad_superop(b, bd) \
        + (ab_l / 2.0) * lindblad_superop(bd, b)
    if cross:
        # cross-frequency dissipators: half-sum strengths
        part = part + ((em_l + em_u) / 4.0) * lindblad_superop(a, bd)
        part = part + ((ab_u + ab_l) / 4.0) * lindblad_superop(bd, a)
        part = part + ((ab_l + ab_u) / 4.0) * lindblad_superop(ad, b)
        part = part + ((em_u + em_l) / 4.0) * lindblad_superop(b, ad)
        # commutator terms: half-difference strengths, real prefactors
        part = part + ((em_l - em_u) / 4.0) * commutator_superop(bd @ a)
        part = part + ((ab_u - ab_l) / 4.0) * commutator_superop(a @ bd)
        part = part + ((ab_l - ab_u) / 4.0) * commutator_superop(b @ ad)
        part = part + ((em_u - em_l) / 4.0) * commutator_superop(ad @ b)
    return part


def build_liouvillian(
    approach: str,
    pair: TlsPair,
    baths: tuple[ReservoirSpec, ReservoirSpec],
) -> Liouvillian:
    if approach not in APPROACHES:
        raise DomainError(f"unknown approach '{approach}', expected one of {APPROACHES}")
    h = hamiltonian_matrix(pair)
    coherent = -1j * commutator_superop(h)
    if approach == "local":
        parts = (
            _local_part(baths[0], pair.omega1, SIGMA1),
            _local_part(baths[1], pair.omega2, SIGMA2),
        )
    else:
        frame = dressed_frame(pair)
        ops = dressed_operator_matrices(pair)
        cross = approach == "ps"
        parts = (
            _dressed_part(baths[0], frame.upper, frame.lower, ops.a1, ops.b1, cross),
            _dressed_part(baths[1], frame.upper, frame.lower, ops.a2, ops.b2, cross),
        )
    return Liouvillian(approach=approach, pair=pair, baths=baths,
                       hamiltonian=h, coherent=coherent, res_parts=parts)


def steady_density(liou: Liouvillian, zero_tol: float = 1e-10) -> np.ndarray:
    """Stationary density matrix from the kernel of the generator.

    Requires exactly one eigenvalue within `zero_tol` of zero so a unique
    stationary state exists; the kernel vector is hermitized and normalized
    to unit trace, and the residual is checked.
    """
    total = liou.total
    evals, evecs = np.linalg.eig(total)
    null = np.flatnonzero(np.abs(evals) < zero_tol)
    if null.size != 1:
        raise SteadyStateError(
            f"expected one stationary mode, found {null.size} within {zero_tol:.1e}")
    rho = unvec(evecs[:, null[0]])
    rho = 0.5 * (rho + rho.conj().T)
    tr = np.trace(rho).real
    if abs(tr) < 1e-14:
        raise SteadyStateError("stationary mode is traceless, cannot normalize")
    rho = rho / tr
    resid = np.linalg.norm(total @ vec(rho))
    scale = np.linalg.norm(total)
    if resid > 1e-11 * max(scale, 1.0):
        raise SteadyStateError(f"stationary residual {resid:.3e} too large")
    return rho


def density_flows(liou: Liouvillian, rho: np.ndarray) -> tuple[float, float]:
    """Energy flow per reservoir, Tr(H L_j[rho])."""
    out = []
    for part in liou.res_parts:
        val = complex(np.trace(liou.hamiltonian @ unvec(part @ vec(rho))))
        if abs(val.imag) > 1e-10 * max(1.0, abs(val)):
            raise SteadyStateError(f"flow has imaginary part {val.imag:.3e}")
        out.append(val.real)
    return out[0], out[1]


def evolve_density(liou: Liouvillian, rho0: np.ndarray,
                   times: np.ndarray) -> np.ndarray:
    """Propagate rho through the time stamps; rho(times[0]) = rho0."""
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise DomainError("times must be a nonempty 1-d array")
    if np.any(np.diff(times) < 0.0):
        raise DomainError("times must be nondecreasing")
    total = liou.total
    state = vec(np.asarray(rho0, dtype=complex))
    out = np.empty((times.size, 4, 4), dtype=complex)
    out[0] = unvec(state)
    for k in range(1, times.size):
        dt = times[k] - times[k - 1]
        if dt > 0.0:
            state = expm(total * dt) @ state
        out[k] = unvec(state)
    return out


def check_density(rho: np.ndarray, tol: float = 1e-10) -> None:
    """Raise DomainError when rho is not a density matrix within tol."""
    rho = np.asarray(rho)
    if rho.shape != (4, 4):
        raise DomainError("density matrix must be 4x4")
    herm = np.abs(rho - rho.conj().T).max()
    if herm > tol:
        raise DomainError(f"density matrix not hermitian, deviation {herm:.3e}")
    tr = np.trace(rho)
    if abs(tr - 1.0) > tol:
        raise DomainError(f"density matrix trace {tr:.6e} differs from 1")
    wmin = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min())
    if wmin < -tol:
        raise DomainError(f"density matrix has negative eigenvalue {wmin:.3e}")
