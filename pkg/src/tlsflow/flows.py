"""Stationary energy flows, their closed forms, and coupling optimization.

The flow attributed to reservoir j is J_j = h . (M_j v + G_j) evaluated at
the stationary moment vector, with h = (w1, w2, Om, Om) the energy
contraction.  The coherent part of the generator contributes nothing to
dE/dt, which is asserted on every evaluation.  First law: J_1 + J_2 = 0 at
stationarity.  Second law (for the thermodynamically consistent approaches):
heat leaves the hot reservoir and enters the cold one.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .bath import (ReservoirSpec, correlation_fourier, coupling_rate,
                   mean_occupation, relaxation_rate)
from .errors import DomainError, DressedFrameError, SteadyStateError
from .moments import MomentSystem, build_moment_system, h_vector, steady_moments
from .system import TlsPair, dressed_frame

__all__ = [
    "FIRST_LAW_TOL",
    "SECOND_LAW_TOL",
    "FlowReport",
    "hot_reservoir",
    "stationary_flows",
    "ThermoVerdict",
    "thermo_check",
    "LocalFlowClosed",
    "local_flow_closed",
    "omega_max_local_closed",
    "global_flow_closed",
    "figure_of_merit",
    "PeakResult",
    "omega_max_numeric",
    "OptimalLine",
    "optimal_line",
]

FIRST_LAW_TOL = 1e-10   # relative on max(|J1|, |J2|)
SECOND_LAW_TOL = 1e-12  # absolute on each flow


def hot_reservoir(baths: tuple[ReservoirSpec, ReservoirSpec]) -> int:
    """Index (1 or 2) of the hotter reservoir; ties go to 2."""
    return 2 if baths[1].temperature >= baths[0].temperature else 1


@dataclass(frozen=True)
class FlowReport:
    """Stationary state and reservoir-resolved energy flows.

    first_law_residual is J1 + J2 evaluated through the generator identity
    h.(Mv + G) - h.(M_coh v), which agrees with the sum of the reported
    flows up to the rounding noise of the two flow contractions (~1e-16
    times the relaxation-rate scale in absolute terms).
    """

    approach: str
    pair: TlsPair
    baths: tuple[ReservoirSpec, ReservoirSpec]
    occ1: float
    occ2: float
    coherence: complex
    j1: float
    j2: float
    first_law_residual: float
    coherent_leak: float
    hot: int

    @property
    def j_hot(self) -> float:
        return self.j1 if self.hot == 1 else self.j2

    @property
    def j_cold(self) -> float:
        return self.j2 if self.hot == 1 else self.j1

    @property
    def specific_hot(self) -> float:
        """Flow out of the hot reservoir per unit coupling."""
        if self.pair.rabi == 0.0:
            return math.nan
        return self.j_hot / self.pair.rabi

    @property
    def second_law_ok(self) -> bool:
        return self.j_hot >= -SECOND_LAW_TOL and self.j_cold <= SECOND_LAW_TOL


def stationary_flows(system: MomentSystem,
                     moments: np.ndarray | None = None) -> FlowReport:
    """Flows at the stationary point (solved here unless supplied)."""
    v = steady_moments(system) if moments is None else np.asarray(moments, dtype=complex)
    m, g = system.matrix, system.source
    rvec = m @ v + g
    resid = np.linalg.norm(rvec)
    if resid > 1e-9 * np.linalg.norm(g):
        raise SteadyStateError(
            f"moment vector is not stationary, residual {resid:.3e}")
    h = h_vector(system.pair)
    scale = max(1.0, float(np.linalg.norm(h) * np.linalg.norm(v)))
    leak = complex(h @ (system.coherent @ v))
    if abs(leak) > 1e-12 * scale:
        raise SteadyStateError(
            f"coherent part leaks energy ({abs(leak):.3e}), generator inconsistent")
    flows = []
    for mm, gg in zip(system.res_matrices, system.res_sources):
        val = complex(h @ (mm @ v + gg))
        if abs(val.imag) > 1e-12 * scale:
            raise SteadyStateError(f"flow has imaginary part {val.imag:.3e}")
        flows.append(val.real)
    # J1 + J2 equals h.(Mv + G) - h.(M_coh v) in exact arithmetic.  Evaluate
    # it that way: summing the two flows directly loses everything to
    # cancellation (each is a small difference of rate-scale terms), while the
    # residual vector and the coherent contraction are both at the rounding
    # floor of the solve.
    balance = complex(h @ rvec) - leak
    return FlowReport(
        approach=system.approach,
        pair=system.pair,
        baths=system.baths,
        occ1=v[0].real,
        occ2=v[1].real,
        coherence=complex(v[2]),
        j1=flows[0],
        j2=flows[1],
        first_law_residual=balance.real,
        coherent_leak=abs(leak),
        hot=hot_reservoir(system.baths),
    )


@dataclass(frozen=True)
class ThermoVerdict:
    """First- and second-law bookkeeping for one stationary report."""

    first_law_ok: bool
    first_law_residual: float
    second_law_ok: bool
    hot: int
    violation_predicted: bool


def _local_violation_predicted(pair: TlsPair,
                               baths: tuple[ReservoirSpec, ReservoirSpec]) -> bool:
    """Local approach runs heat hot-to-cold only when w_hot/T_hot <= w_cold/T_cold."""
    t1, t2 = baths[0].temperature, baths[1].temperature
    if t1 == t2:
        return False
    if hot_reservoir(baths) == 2:
        w_hot, t_hot, w_cold, t_cold = pair.omega2, t2, pair.omega1, t1
    else:
        w_hot, t_hot, w_cold, t_cold = pair.omega1, t1, pair.omega2, t2
    return w_hot / t_hot > w_cold / t_cold


def thermo_check(report: FlowReport) -> ThermoVerdict:
    scale = max(abs(report.j1), abs(report.j2), 1e-30)
    predicted = (report.approach == "local"
                 and _local_violation_predicted(report.pair, report.baths))
    return ThermoVerdict(
        first_law_ok=abs(report.first_law_residual) <= FIRST_LAW_TOL * scale,
        first_law_residual=report.first_law_residual,
        second_law_ok=report.second_law_ok,
        hot=report.hot,
        violation_predicted=predicted,
    )


@dataclass(frozen=True)
class LocalFlowClosed:
    """Closed-form local stationary state and reservoir-1 flow.

    `imbalance` is the antisymmetrized rate product driving the coherence
    and `rabi_star_sq` the squared coupling that maximizes the flow.
    """

    flow1: float
    occ1: float
    occ2: float
    coherence: complex
    imbalance: float
    rabi_star_sq: float


def local_flow_closed(pair: TlsPair,
                      baths: tuple[ReservoirSpec, ReservoirSpec]) -> LocalFlowClosed:
    w1, w2, om = pair.omega1, pair.omega2, pair.rabi
    dw = pair.detuning
    g1 = relaxation_rate(baths[0], w1)
    g2 = relaxation_rate(baths[1], w2)
    g1p = correlation_fourier(baths[0], w1, +1)
    g1m = correlation_fourier(baths[0], w1, -1)
    g2p = correlation_fourier(baths[1], w2, +1)
    g2m = correlation_fourier(baths[1], w2, -1)
    s = g1 + g2
    e = g1 * g2 * (1.0 + dw * dw / (s * s))
    f = (g1p * g2m - g1m * g2p) / (4.0 * s)
    p = -f * om / (e + om * om)
    c = -dw * p / s
    x1 = (2.0 * om * p + g1p) / (2.0 * g1)
    x2 = (g2p - 2.0 * om * p) / (2.0 * g2)
    j1 = -2.0 * w1 * g1 * x1 + w1 * g1p - 2.0 * om * g1 * c
    return LocalFlowClosed(flow1=j1, occ1=x1, occ2=x2,
                           coherence=complex(c, p), imbalance=f, rabi_star_sq=e)


def omega_max_local_closed(g1: float, g2: float, detuning: float) -> float:
    """Coupling that maximizes the local |flow| at fixed rates and detuning."""
    s = g1 + g2
    return math.sqrt(g1 * g2 * (1.0 + detuning * detuning / (s * s)))


def global_flow_closed(pair: TlsPair,
                       baths: tuple[ReservoirSpec, ReservoirSpec]) -> float:
    """Global-approach reservoir-1 flow at equal bare frequencies.

    Sum of two independent single-transition heat conductances, one per
    dressed frequency.  Requires zero detuning, where the closed form holds.
    """
    if pair.detuning != 0.0:
        raise DomainError("closed global flow requires equal bare frequencies")
    frame = dressed_frame(pair)
    t1, t2 = baths[0].temperature, baths[1].temperature
    total = 0.0
    for wb in (frame.upper, frame.lower):
        gam1 = coupling_rate(baths[0], wb)
        gam2 = coupling_rate(baths[1], wb)
        n1 = mean_occupation(wb, t1)
        n2 = mean_occupation(wb, t2)
        total += (wb / 2.0) * gam1 * gam2 * (n1 - n2) / (
            (2.0 * n1 + 1.0) * gam1 + (2.0 * n2 + 1.0) * gam2)
    return total


def figure_of_merit(approach: str, pair: TlsPair,
                    baths: tuple[ReservoirSpec, ReservoirSpec],
                    rabi: float) -> float | None:
    """|J_hot| / coupling at one coupling value; None where undefined."""
    try:
        point = TlsPair(pair.omega1, pair.omega2, rabi)
        system = build_moment_system(approach, point, baths)
        report = stationary_flows(system)
    except (DressedFrameError, DomainError):
        return None
    return abs(report.j_hot) / rabi


def _golden_max(f: Callable[[float], float], lo: float, hi: float,
                tol: float = 1e-10) -> tuple[float, float]:
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > tol * max(abs(a), abs(b)):
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


@dataclass(frozen=True)
class PeakResult:
    """Best coupling for the flow figure of merit over a search interval.

    `peaks` lists every refined interior maximum as (coupling, merit) pairs,
    best first; `boundary` flags a best value pinned to the search edge.
    """

    omega_star: float
    j_star: float
    boundary: bool
    peaks: tuple[tuple[float, float], ...]


def omega_max_numeric(
    approach: str,
    pair: TlsPair,
    baths: tuple[ReservoirSpec, ReservoirSpec],
    bounds: tuple[float, float],
    coarse: int = 64,
) -> PeakResult:
    """Maximize |J_hot|/coupling over couplings in `bounds`.

    Coarse log-spaced scan to locate candidate maxima, then golden-section
    refinement of each bracket.  Deterministic for fixed inputs.
    """
    lo, hi = bounds
    if not (0.0 < lo < hi):
        raise DomainError("search bounds must satisfy 0 < lo < hi")
    grid = np.geomspace(lo, hi, coarse)

    def merit(om: float) -> float:
        val = figure_of_merit(approach, pair, baths, om)
        return -math.inf if val is None else val

    vals = np.array([merit(om) for om in grid])
    if not np.any(np.isfinite(vals)):
        raise DomainError("figure of merit undefined over the whole search range")
    candidates = []
    for k in range(coarse):
        left = vals[k - 1] if k > 0 else -math.inf
        right = vals[k + 1] if k < coarse - 1 else -math.inf
        if np.isfinite(vals[k]) and vals[k] >= left and vals[k] >= right:
            candidates.append(k)
    peaks = []
    for k in candidates:
        blo = grid[max(0, k - 1)]
        bhi = grid[min(coarse - 1, k + 1)]
        peaks.append(_golden_max(merit, blo, bhi))
    peaks.sort(key=lambda t: -t[1])
    best_om, best_j = peaks[0]
    k_best = int(np.nanargmax(np.where(np.isfinite(vals), vals, -math.inf)))
    boundary = k_best in (0, coarse - 1)
    return PeakResult(omega_star=best_om, j_star=best_j, boundary=boundary,
                      peaks=tuple(peaks))


@dataclass(frozen=True)
class OptimalLine:
    """Optimal coupling as a function of the reservoir-1 rate scale."""

    approach: str
    gamma1_ref: np.ndarray
    omega_star: np.ndarray
    j_star: np.ndarray
    boundary: np.ndarray


def optimal_line(
    approach: str,
    pair: TlsPair,
    bath_factory: Callable[[float], tuple[ReservoirSpec, ReservoirSpec]],
    c1_values: np.ndarray,
    bounds: tuple[float, float],
    coarse: int = 64,
    threads: int = 1,
) -> OptimalLine:
    """Trace the optimal coupling across bath prefactors.

    `bath_factory` maps a reservoir-1 prefactor to the bath pair (fixing
    however the second reservoir is tied to the first); results are ordered
    like `c1_values` regardless of thread count.
    """
    c1_values = np.asarray(c1_values, dtype=float)

    def solve(c1: float) -> tuple[float, PeakResult]:
        baths = bath_factory(c1)
        gref = coupling_rate(baths[0], pair.omega1)
        return gref, omega_max_numeric(approach, pair, baths, bounds, coarse)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(solve, c1_values))
    else:
        rows = [solve(c1) for c1 in c1_values]
    return OptimalLine(
        approach=approach,
        gamma1_ref=np.array([r[0] for r in rows]),
        omega_star=np.array([r[1].omega_star for r in rows]),
        j_star=np.array([r[1].j_star for r in rows]),
        boundary=np.array([r[1].boundary for r in rows]),
    )
