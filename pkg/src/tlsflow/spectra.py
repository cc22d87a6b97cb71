"""Relaxation spectra of the moment generator and their pair structure.

The four eigenvalues of the moment matrix organize, across the coupling
range, into one pair that stays degenerate in its imaginary parts and one
pair whose imaginary-part gap is the observable splitting.  The local
approach admits a closed quartic for the spectrum with an exceptional point
at |g1 - g2| / 2; the other approaches are diagnosed numerically with the
same pairing rule.
"""

from __future__ import annotations

import cmath
import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .bath import ReservoirSpec, relaxation_rate
from .errors import DomainError, DressedFrameError
from .moments import build_moment_system
from .system import TlsPair

__all__ = [
    "relaxation_eigenvalues",
    "match_order",
    "LocalSpectrum",
    "local_quartic_coefficients",
    "local_spectrum_closed",
    "ep_coupling",
    "PairStructure",
    "pair_structure",
    "SpectrumScan",
    "splitting_scan",
    "inflection_brackets",
]


def _canonical_sort(values: np.ndarray) -> np.ndarray:
    order = np.lexsort((values.real, values.imag))
    return values[order]


def relaxation_eigenvalues(matrix: np.ndarray) -> np.ndarray:
    """Eigenvalues of a moment matrix, sorted by (imag, real)."""
    return _canonical_sort(np.linalg.eigvals(matrix))


def match_order(reference: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Permute `values` to minimize the summed distance to `reference`.

    Brute force over the 24 permutations; used to track eigenvalue branches
    across a parameter scan and to compare spectra between approaches.
    """
    best = min(itertools.permutations(range(4)),
               key=lambda p: sum(abs(reference[i] - values[p[i]]) for i in range(4)))
    return values[list(best)]


class LocalSpectrum(NamedTuple):
    """Closed local spectrum: quartic roots and the monic coefficients."""

    roots: np.ndarray
    coefficients: np.ndarray


def local_quartic_coefficients(g1: float, g2: float, detuning: float,
                               rabi: float) -> np.ndarray:
    """Monic quartic whose roots are the local relaxation eigenvalues.

    P(R + dw^2) + 4 Om^2 R with P = (l + 2 g1)(l + 2 g2), R = (l + g1 + g2)^2.
    """
    s = g1 + g2
    quartic = np.polymul([1.0, 2.0 * s, 4.0 * g1 * g2],
                         [1.0, 2.0 * s, s * s + detuning * detuning])
    return np.polyadd(quartic, 4.0 * rabi * rabi * np.array([1.0, 2.0 * s, s * s]))


def local_spectrum_closed(pair: TlsPair,
                          baths: tuple[ReservoirSpec, ReservoirSpec]) -> LocalSpectrum:
    """Roots of the local quartic, exact at zero detuning.

    At detuning 0 the quartic factors: a double root at -(g1 + g2) and the
    pair -(g1 + g2) +- sqrt((g1 - g2)^2 - 4 Om^2), which coalesces at the
    exceptional coupling |g1 - g2| / 2.  The double root is returned exactly
    (bitwise) rather than through the generic root finder.
    """
    g1 = relaxation_rate(baths[0], pair.omega1)
    g2 = relaxation_rate(baths[1], pair.omega2)
    coeffs = local_quartic_coefficients(g1, g2, pair.detuning, pair.rabi)
    s = g1 + g2
    if pair.detuning == 0.0:
        d = cmath.sqrt(complex((g1 - g2) ** 2 - 4.0 * pair.rabi ** 2))
        roots = np.array([-s, -s, -s + d, -s - d])
    else:
        roots = np.roots(coeffs)
    return LocalSpectrum(roots=_canonical_sort(roots), coefficients=coeffs)


def ep_coupling(g1: float, g2: float) -> float:
    """Coupling at which the local spectrum has its exceptional point."""
    return abs(g1 - g2) / 2.0


class PairStructure(NamedTuple):
    """Pairing of four eigenvalues by imaginary part.

    `degenerate` indexes the middle two after sorting by imaginary part (the
    pair that should share Im for the structure seen here: two real modes
    plus one conjugate pair); `splitting` is the spread of the outer pair.
    """

    degenerate: tuple[int, int]
    im_gap: float
    full_gap: float
    splitting: float


def pair_structure(values: np.ndarray) -> PairStructure:
    values = np.asarray(values)
    if values.shape != (4,):
        raise DomainError("pair structure requires exactly four eigenvalues")
    order = np.argsort(values.imag, kind="stable")
    mid = values[order[1]], values[order[2]]
    return PairStructure(
        degenerate=(int(order[1]), int(order[2])),
        im_gap=abs(mid[0].imag - mid[1].imag),
        full_gap=abs(mid[0] - mid[1]),
        splitting=float(values[order[3]].imag - values[order[0]].imag),
    )


@dataclass(frozen=True)
class SpectrumScan:
    """Eigenvalue branches along a coupling grid.

    Rows of `values` are permuted for continuity against the previous valid
    row, so values[:, k] traces one branch.  Points whose dressed frame is
    undefined are flagged in `skipped` and carry NaN rows.
    """

    approach: str
    rabis: np.ndarray
    values: np.ndarray
    splitting: np.ndarray
    degenerate_im_gap: np.ndarray
    degenerate_full_gap: np.ndarray
    skipped: np.ndarray


def _scan_point(approach: str, pair: TlsPair,
                baths: tuple[ReservoirSpec, ReservoirSpec],
                rabi: float) -> np.ndarray | None:
    try:
        point = TlsPair(pair.omega1, pair.omega2, rabi)
        system = build_moment_system(approach, point, baths)
    except (DressedFrameError, DomainError):
        return None
    return relaxation_eigenvalues(system.matrix)


def splitting_scan(
    approach: str,
    pair: TlsPair,
    baths: tuple[ReservoirSpec, ReservoirSpec],
    rabis: np.ndarray,
    threads: int = 1,
) -> SpectrumScan:
    """Scan the spectrum over couplings, tracking branches and splitting.

    `pair` supplies the bare frequencies; its coupling is replaced by each
    grid value in turn.  Results are deterministic for any thread count.
    """
    rabis = np.asarray(rabis, dtype=float)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            raw = list(pool.map(
                lambda om: _scan_point(approach, pair, baths, om), rabis))
    else:
        raw = [_scan_point(approach, pair, baths, om) for om in rabis]

    n = rabis.size
    values = np.full((n, 4), np.nan, dtype=complex)
    splitting = np.full(n, np.nan)
    im_gap = np.full(n, np.nan)
    full_gap = np.full(n, np.nan)
    skipped = np.zeros(n, dtype=bool)
    prev = None
    for i, ev in enumerate(raw):
        if ev is None:
            skipped[i] = True
            continue
        if prev is not None:
            ev = match_order(prev, ev)
        values[i] = ev
        prev = ev
        ps = pair_structure(ev)
        splitting[i] = ps.splitting
        im_gap[i] = ps.im_gap
        full_gap[i] = ps.full_gap
    return SpectrumScan(
        approach=approach,
        rabis=rabis,
        values=values,
        splitting=splitting,
        degenerate_im_gap=im_gap,
        degenerate_full_gap=full_gap,
        skipped=skipped,
    )


def inflection_brackets(scan: SpectrumScan) -> list[tuple[float, float]]:
    """Bracket sign changes of the second difference of the splitting curve.

    Treats the grid as uniform in log(coupling), which is how scans are
    normally set up; brackets touching skipped points are discarded.
    """
    s = scan.splitting
    n = s.size
    brackets = []
    for k in range(1, n - 2):
        window = slice(k - 1, k + 3)
        if np.any(scan.skipped[window]) or np.any(np.isnan(s[window])):
            continue
        d2a = s[k - 1] - 2.0 * s[k] + s[k + 1]
        d2b = s[k] - 2.0 * s[k + 1] + s[k + 2]
        if d2a * d2b < 0.0:
            brackets.append((float(scan.rabis[k]), float(scan.rabis[k + 1])))
    return brackets
