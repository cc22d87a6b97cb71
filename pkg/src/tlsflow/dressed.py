"""Projection weights and relaxation coefficients for the moment equations.

The dissipative part of each master equation acts on the moment vector
(<n1>, <n2>, <s1+ s2>, <s2+ s1>) through a handful of real coefficients.
Every coefficient is an inner product between a vector of bath correlation
components (a "G-vector") and a weight vector that depends only on the mixing
parameters (y, r) of the dressed frame.  Two channels exist per reservoir:

  secular channel  (gl): the four frequency-resolved dissipators, one per
                         dressed transition and direction,
  cross channel    (ps): the cross-frequency dissipators and commutator terms
                         kept by the partial-secular treatment.

Each one-sided bath transform is taken as half of the full Fourier component
G_j.  With that convention the secular frequency-shift vector vanishes
identically, so the secular commutator (Lamb-shift-like) terms drop out on
their own, and the cross-channel commutator strengths are half-differences of
correlation components.

Coefficient names map onto the moment matrix as

    row 1:  damp1 on the diagonal, q1 = cross + comm_cross to the coherences
    row 2:  damp2 on the diagonal, q2 = cross - comm_cross to the coherences
    rows 3,4: coherence damping (damp1 + damp2)/2 + comm_coh on the diagonal,
              q2 / q1 back-coupling to the occupations

with sources (src_occ1, src_occ2, src_coh, src_coh) on the right-hand side.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bath import ReservoirSpec, correlation_fourier, relaxation_rate
from .errors import DomainError
from .system import DressedFrame, TlsPair, dressed_frame

__all__ = [
    "APPROACHES",
    "GVectorSet",
    "WeightTables",
    "Coefficients",
    "build_gvectors",
    "build_weight_tables",
    "assemble_coefficients",
]

APPROACHES = ("local", "global", "ps")

_CHANNELS = ("gl1", "ps1", "gl2", "ps2")

COEF_NAMES = (
    "damp1", "damp2", "cross", "comm_cross", "comm_coh",
    "src_occ1", "src_occ2", "src_coh",
)


@dataclass(frozen=True)
class GVectorSet:
    """Bath correlation components for one reservoir at the dressed frequencies.

    Component order matches the weight tables: for `gl` the four
    frequency-resolved dissipator channels (upper emission, upper absorption,
    lower emission, lower absorption); for `ps` / `ps_fs` the four
    cross-frequency dissipator / commutator channels.  `gl_fs` is identically
    zero under the even one-sided split and is kept for symmetry checks.
    """

    gl: np.ndarray
    ps: np.ndarray
    gl_fs: np.ndarray
    ps_fs: np.ndarray


def build_gvectors(spec: ReservoirSpec, frame: DressedFrame) -> GVectorSet:
    em_u = correlation_fourier(spec, frame.upper, -1)
    ab_u = correlation_fourier(spec, frame.upper, +1)
    em_l = correlation_fourier(spec, frame.lower, -1)
    ab_l = correlation_fourier(spec, frame.lower, +1)
    gl = 0.5 * np.array([em_u, ab_u, em_l, ab_l])
    ps = 0.25 * np.array([em_l + em_u, ab_u + ab_l, ab_l + ab_u, em_u + em_l])
    ps_fs = 0.25 * np.array([em_l - em_u, ab_u - ab_l, ab_l - ab_u, em_u - em_l])
    return GVectorSet(gl=gl, ps=ps, gl_fs=np.zeros(4), ps_fs=ps_fs)


@dataclass(frozen=True)
class WeightTables:
    """Weight vectors, one 4-vector per (target, channel).

    `occ*_from_occ*` damp the occupations, `occ*_from_coh` couple occupations
    to the coherences through the dissipators, the `_comm` families carry the
    commutator contributions, and the `src_*` families are the inhomogeneous
    source weights.
    """

    occ1_from_occ1: dict[str, np.ndarray]
    occ2_from_occ2: dict[str, np.ndarray]
    occ1_from_coh: dict[str, np.ndarray]
    occ2_from_coh: dict[str, np.ndarray]
    occ1_from_coh_comm: dict[str, np.ndarray]
    occ2_from_coh_comm: dict[str, np.ndarray]
    coh_from_coh_comm: dict[str, np.ndarray]
    src_occ1: dict[str, np.ndarray]
    src_occ2: dict[str, np.ndarray]
    src_coh: dict[str, np.ndarray]


def _split_mix(y: float, r: float) -> tuple[float, float]:
    """Return (y + 2r, y - 2r) avoiding cancellation at large |y|.

    Uses (y + 2r)(y - 2r) = y^2 - 4r^2 = -4, exact by construction of r.
    """
    if y >= 0.0:
        yp = y + 2.0 * r
        return yp, -4.0 / yp
    ym = y - 2.0 * r
    return -4.0 / ym, ym


def build_weight_tables(frame: DressedFrame) -> WeightTables:
    y, r = frame.y, frame.r
    yp, ym = _split_mix(y, r)
    u = yp / (4.0 * r)
    w = ym / (4.0 * r)
    q = 1.0 / (4.0 * r * r)   # equals -u*w
    q2 = 1.0 / (2.0 * r * r)
    a = np.array

    occ1_from_occ1 = {
        "gl1": a([-2 * u * u, -2 * u * u, -2 * w * w, -2 * w * w]),
        "ps1": a([-q2, -q2, -q2, -q2]),
        "gl2": a([-q2, -q2, -q2, -q2]),
        "ps2": a([q2, q2, q2, q2]),
    }
    occ2_from_occ2 = {
        "gl1": a([-q2, -q2, -q2, -q2]),
        "ps1": a([q2, q2, q2, q2]),
        "gl2": a([-2 * w * w, -2 * w * w, -2 * u * u, -2 * u * u]),
        "ps2": a([-q2, -q2, -q2, -q2]),
    }
    h = 1.0 / (2.0 * r)
    occ1_from_coh = {
        "gl1": a([-u * h, -u * h, -w * h, -w * h]),
        "ps1": a([w * h, w * h, u * h, u * h]),
        "gl2": a([w * h, w * h, u * h, u * h]),
        "ps2": a([-w * h, -w * h, -u * h, -u * h]),
    }
    # same dissipators drive <n2> through the coherences with identical weights
    occ2_from_coh = {ch: v.copy() for ch, v in occ1_from_coh.items()}
    occ1_from_coh_comm = {
        "gl1": a([u * h, -u * h, w * h, -w * h]),
        "ps1": a([-w * h, w * h, u * h, -u * h]),
        "gl2": a([-w * h, w * h, -u * h, u * h]),
        "ps2": a([w * h, -w * h, -u * h, u * h]),
    }
    # and with the opposite sign for <n2> (antisymmetric partner)
    occ2_from_coh_comm = {ch: -v for ch, v in occ1_from_coh_comm.items()}
    coh_from_coh_comm = {
        "gl1": a([-u * u + q, u * u - q, -w * w + q, w * w - q]),
        "ps1": a([-q2, q2, q2, -q2]),
        "gl2": a([w * w - q, -w * w + q, u * u - q, -u * u + q]),
        "ps2": a([q2, -q2, -q2, q2]),
    }
    src_occ1 = {
        "gl1": a([0.0, 2 * u * u, 0.0, 2 * w * w]),
        "ps1": a([0.0, q2, q2, 0.0]),
        "gl2": a([0.0, q2, 0.0, q2]),
        "ps2": a([0.0, -q2, -q2, 0.0]),
    }
    src_occ2 = {
        "gl1": a([0.0, q2, 0.0, q2]),
        "ps1": a([0.0, -q2, -q2, 0.0]),
        "gl2": a([0.0, 2 * w * w, 0.0, 2 * u * u]),
        "ps2": a([0.0, q2, q2, 0.0]),
    }
    src_coh = {
        "gl1": a([0.0, u / r, 0.0, w / r]),
        "ps1": a([0.0, -u / r, -w / r, 0.0]),
        "gl2": a([0.0, -w / r, 0.0, -u / r]),
        "ps2": a([0.0, u / r, w / r, 0.0]),
    }
    return WeightTables(
        occ1_from_occ1=occ1_from_occ1,
        occ2_from_occ2=occ2_from_occ2,
        occ1_from_coh=occ1_from_coh,
        occ2_from_coh=occ2_from_coh,
        occ1_from_coh_comm=occ1_from_coh_comm,
        occ2_from_coh_comm=occ2_from_coh_comm,
        coh_from_coh_comm=coh_from_coh_comm,
        src_occ1=src_occ1,
        src_occ2=src_occ2,
        src_coh=src_coh,
    )


@dataclass(frozen=True)
class Coefficients:
    """Relaxation coefficients, resolved by reservoir and channel.

    Each entry of `parts` is a (2, 2) array indexed [reservoir - 1, channel]
    with channel 0 the secular and channel 1 the cross contribution.  The
    local approach stores its bare-rate values in channel 0.  Zeroing by
    approach has already been applied: the global approach drops the cross
    channel entirely, and secular commutator terms vanish identically.
    """

    approach: str
    parts: dict[str, np.ndarray]

    def total(self, name: str) -> float:
        return float(self.parts[name].sum())

    def reservoir(self, name: str, j: int) -> float:
        return float(self.parts[name][j - 1].sum())

    def coh_damp(self, j: int) -> float:
        """Coherence damping contributed by reservoir j."""
        return 0.5 * (self.reservoir("damp1", j) + self.reservoir("damp2", j)) \
            + self.reservoir("comm_coh", j)

    def couple_occ1(self, j: int) -> float:
        """Occupation-1 row coupling to the coherences (reservoir j part)."""
        return self.reservoir("cross", j) + self.reservoir("comm_cross", j)

    def couple_occ2(self, j: int) -> float:
        """Occupation-2 row coupling to the coherences (reservoir j part)."""
        return self.reservoir("cross", j) - self.reservoir("comm_cross", j)


def assemble_coefficients(
    approach: str,
    pair: TlsPair,
    baths: tuple[ReservoirSpec, ReservoirSpec],
) -> Coefficients:
    """Assemble the relaxation coefficients for one approach.

    local  : bare-frequency rates, no cross terms
    global : secular channel only
    ps     : secular plus cross channel
    """
    if approach not in APPROACHES:
        raise DomainError(f"unknown approach '{approach}', expected one of {APPROACHES}")
    parts = {name: np.zeros((2, 2)) for name in COEF_NAMES}

    if approach == "local":
        omegas = (pair.omega1, pair.omega2)
        for j, (spec, omega) in enumerate(zip(baths, omegas)):
            g = relaxation_rate(spec, omega)
            parts["damp1" if j == 0 else "damp2"][j, 0] = -2.0 * g
            parts["src_occ1" if j == 0 else "src_occ2"][j, 0] = \
                correlation_fourier(spec, omega, +1)
        return Coefficients(approach=approach, parts=parts)

    frame = dressed_frame(pair)
    tables = build_weight_tables(frame)
    use_cross = approach == "ps"
    targets = {
        "damp1": (tables.occ1_from_occ1, "plain"),
        "damp2": (tables.occ2_from_occ2, "plain"),
        "cross": (tables.occ1_from_coh, "plain"),
        "comm_cross": (tables.occ1_from_coh_comm, "comm"),
        "comm_coh": (tables.coh_from_coh_comm, "comm"),
        "src_occ1": (tables.src_occ1, "plain"),
        "src_occ2": (tables.src_occ2, "plain"),
        "src_coh": (tables.src_coh, "plain"),
    }
    for j, spec in enumerate(baths, start=1):
        gv = build_gvectors(spec, frame)
        for name, (table, kind) in targets.items():
            if kind == "plain":
                sec, crs = gv.gl, gv.ps
            else:
                sec, crs = gv.gl_fs, gv.ps_fs
            parts[name][j - 1, 0] = float(sec @ table[f"gl{j}"])
            if use_cross:
                parts[name][j - 1, 1] = float(crs @ table[f"ps{j}"])
    return Coefficients(approach=approach, parts=parts)
