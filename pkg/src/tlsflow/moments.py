"""Closed equations of motion for the second-order moments.

For every approach the dissipative generator closes on the four moments

    v = (<s1+ s1>, <s2+ s2>, <s1+ s2>, <s2+ s1>)

so the full density-matrix dynamics reduces to dv/dt = M v + G with a 4x4
matrix M and constant source G.  M splits into a coherent part (coupling and
detuning, traceless under the energy contraction) and one dissipative part
per reservoir; the per-reservoir split is what defines the stationary energy
flow attribution.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .bath import ReservoirSpec
from .dressed import Coefficients, assemble_coefficients
from .errors import DomainError, SteadyStateError
from .system import TlsPair

__all__ = [
    "MOMENT_LABELS",
    "MomentSystem",
    "h_vector",
    "coherent_matrix",
    "build_moment_system",
    "steady_moments",
    "evolve_moments",
    "check_moment_vector",
]

MOMENT_LABELS = ("occ1", "occ2", "coh12", "coh21")

# Development-only fault injection for exercising the validation harness.
# Known names: "local-sign-flip" flips one coherent-coupling sign in the
# local moment matrix, which must trip the closed-form criteria.
DEV_MUTATIONS: set[str] = set()


@dataclass(frozen=True)
class MomentSystem:
    """Moment-space generator dv/dt = matrix @ v + source.

    `matrix` = `coherent` + sum of `res_matrices`; `source` = sum of
    `res_sources`.  The reservoir-resolved parts feed the flow attribution.
    """

    approach: str
    pair: TlsPair
    baths: tuple[ReservoirSpec, ReservoirSpec]
    matrix: np.ndarray
    source: np.ndarray
    coherent: np.ndarray
    res_matrices: tuple[np.ndarray, np.ndarray]
    res_sources: tuple[np.ndarray, np.ndarray]


def h_vector(pair: TlsPair) -> np.ndarray:
    """Energy contraction: <H> = h . v up to the constant ground offset."""
    return np.array([pair.omega1, pair.omega2, pair.rabi, pair.rabi])


def coherent_matrix(pair: TlsPair) -> np.ndarray:
    om = pair.rabi
    dw = pair.detuning
    return np.array([
        [0.0, 0.0, -1j * om, 1j * om],
        [0.0, 0.0, 1j * om, -1j * om],
        [-1j * om, 1j * om, 1j * dw, 0.0],
        [1j * om, -1j * om, 0.0, -1j * dw],
    ])


def _reservoir_matrix(coefs: Coefficients, j: int) -> np.ndarray:
    a = coefs.reservoir("damp1", j)
    f = coefs.reservoir("damp2", j)
    q = coefs.couple_occ1(j)
    t = coefs.couple_occ2(j)
    y = coefs.coh_damp(j)
    return np.array([
        [a, 0.0, q, q],
        [0.0, f, t, t],
        [t, q, y, 0.0],
        [t, q, 0.0, y],
    ], dtype=complex)


def _reservoir_source(coefs: Coefficients, j: int) -> np.ndarray:
    s11 = coefs.reservoir("src_occ1", j)
    s22 = coefs.reservoir("src_occ2", j)
    s12 = coefs.reservoir("src_coh", j)
    return np.array([s11, s22, s12, s12], dtype=complex)


def build_moment_system(
    approach: str,
    pair: TlsPair,
    baths: tuple[ReservoirSpec, ReservoirSpec],
) -> MomentSystem:
    coefs = assemble_coefficients(approach, pair, baths)
    res_m = tuple(_reservoir_matrix(coefs, j) for j in (1, 2))
    res_g = tuple(_reservoir_source(coefs, j) for j in (1, 2))
    coh = coherent_matrix(pair)
    if approach == "local" and "local-sign-flip" in DEV_MUTATIONS:
        coh = coh.copy()
        coh[0, 2] = -coh[0, 2]
    return MomentSystem(
        approach=approach,
        pair=pair,
        baths=baths,
        matrix=coh + res_m[0] + res_m[1],
        source=res_g[0] + res_g[1],
        coherent=coh,
        res_matrices=res_m,
        res_sources=res_g,
    )


def steady_moments(system: MomentSystem, cond_limit: float = 1e12) -> np.ndarray:
    """Stationary moment vector, solving M v = -G with iterative refinement.

    Raises SteadyStateError when the matrix is too ill-conditioned to trust
    or the refined residual fails to reach 1e-12 * ||G||.
    """
    m, g = system.matrix, system.source
    cond = np.linalg.cond(m)
    if not np.isfinite(cond) or cond > cond_limit:
        raise SteadyStateError(
            f"moment matrix condition number {cond:.3e} exceeds {cond_limit:.1e}")
    gnorm = np.linalg.norm(g)
    if gnorm == 0.0:
        raise SteadyStateError("moment source vanishes, stationary state undefined")
    v = np.linalg.solve(m, -g)
    # refine to the roundoff floor, not merely to the contract threshold: the
    # leftover residual feeds straight into the first-law bookkeeping
    resid = np.linalg.norm(m @ v + g)
    for _ in range(5):
        if resid == 0.0:
            break
        v_try = v - np.linalg.solve(m, m @ v + g)
        resid_try = np.linalg.norm(m @ v_try + g)
        if resid_try >= resid:
            break
        v, resid = v_try, resid_try
    if resid > 1e-12 * gnorm:
        raise SteadyStateError(
            f"stationary residual {resid:.3e} above {1e-12 * gnorm:.3e} after refinement")
    return v


def evolve_moments(system: MomentSystem, v0: np.ndarray, times: np.ndarray) -> np.ndarray:
    """Propagate the affine system through the given time stamps.

    `times` must be nondecreasing; row k of the result is v(times[k]) with
    v(times[0]) = v0.  Uses the exact exponential of the augmented generator.
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise DomainError("times must be a nonempty 1-d array")
    if np.any(np.diff(times) < 0.0):
        raise DomainError("times must be nondecreasing")
    aug = np.zeros((5, 5), dtype=complex)
    aug[:4, :4] = system.matrix
    aug[:4, 4] = system.source
    state = np.append(np.asarray(v0, dtype=complex), 1.0)
    out = np.empty((times.size, 4), dtype=complex)
    out[0] = state[:4]
    for k in range(1, times.size):
        dt = times[k] - times[k - 1]
        if dt > 0.0:
            state = expm(aug * dt) @ state
        out[k] = state[:4]
    return out


def check_moment_vector(v: np.ndarray, tol: float = 1e-10) -> None:
    """Raise DomainError when the moment vector is unphysical.

    Occupations must be real in [0, 1], the coherences mutually conjugate,
    and |<s1+ s2>| <= sqrt(<n1><n2>), all within tol.
    """
    v = np.asarray(v, dtype=complex)
    if v.shape != (4,):
        raise DomainError("moment vector must have shape (4,)")
    for k in (0, 1):
        if abs(v[k].imag) > tol:
            raise DomainError(f"occupation {k + 1} has imaginary part {v[k].imag:.3e}")
        if not -tol <= v[k].real <= 1.0 + tol:
            raise DomainError(f"occupation {k + 1} = {v[k].real:.6e} outside [0, 1]")
    if abs(v[3] - np.conj(v[2])) > tol:
        raise DomainError("coherence components are not conjugate partners")
    bound = np.sqrt(max(v[0].real, 0.0) * max(v[1].real, 0.0))
    if abs(v[2]) > bound + tol:
        raise DomainError(
            f"coherence magnitude {abs(v[2]):.6e} exceeds Cauchy-Schwarz bound {bound:.6e}")
