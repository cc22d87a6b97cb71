"""Projection weights and relaxation coefficients."""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from tlsflow.bath import ReservoirSpec, correlation_fourier
from tlsflow.dressed import (APPROACHES, assemble_coefficients, build_gvectors,
                             build_weight_tables, COEF_NAMES)
from tlsflow.errors import DomainError
from tlsflow.system import TlsPair, dressed_frame

BATHS = (ReservoirSpec(temperature=0.2, prefactor=0.002),
         ReservoirSpec(temperature=0.22, prefactor=0.04))


def test_gvector_components_and_recombination():
    frame = dressed_frame(TlsPair(1.0, 0.93, 0.04))
    spec = BATHS[0]
    gv = build_gvectors(spec, frame)
    em_u = correlation_fourier(spec, frame.upper, -1)
    ab_u = correlation_fourier(spec, frame.upper, +1)
    em_l = correlation_fourier(spec, frame.lower, -1)
    ab_l = correlation_fourier(spec, frame.lower, +1)
    assert np.allclose(gv.gl, 0.5 * np.array([em_u, ab_u, em_l, ab_l]), rtol=1e-15)
    # even one-sided split: the secular shift vector vanishes identically
    assert np.array_equal(gv.gl_fs, np.zeros(4))
    # half-sum and half-difference recombine to the one-sided components
    assert np.allclose(gv.ps + gv.ps_fs,
                       0.5 * np.array([em_l, ab_u, ab_l, em_u]), rtol=1e-14)
    assert np.allclose(gv.ps - gv.ps_fs,
                       0.5 * np.array([em_u, ab_l, ab_u, em_l]), rtol=1e-14)


def test_weight_tables_resonant_values():
    # y = 0: u = 1/2, w = -1/2, q = 1/4, q2 = 1/2
    tables = build_weight_tables(dressed_frame(TlsPair(1.0, 1.0, 0.05)))
    half = 0.5 * np.ones(4)
    assert np.allclose(tables.occ1_from_occ1["gl1"], -half, rtol=1e-14)
    assert np.allclose(tables.occ1_from_occ1["ps1"], -half, rtol=1e-14)
    assert np.allclose(tables.occ1_from_occ1["ps2"], half, rtol=1e-14)
    assert np.allclose(tables.occ1_from_coh["gl1"],
                       [-0.25, -0.25, 0.25, 0.25], rtol=1e-14)
    # commutator weight on the coherence vanishes at resonance (u^2 = q)
    assert np.allclose(tables.coh_from_coh_comm["gl1"], np.zeros(4), atol=1e-15)
    assert np.allclose(tables.coh_from_coh_comm["ps1"],
                       [-0.5, 0.5, 0.5, -0.5], rtol=1e-14)
    assert np.allclose(tables.src_coh["gl1"], [0.0, 0.5, 0.0, -0.5], rtol=1e-14)


@given(w1=st.floats(0.5, 1.5), dw=st.floats(-0.1, 0.1), om=st.floats(1e-3, 0.1))
def test_weight_table_symmetries(w1, dw, om):
    frame = dressed_frame(TlsPair(w1, w1 - dw, om))
    tables = build_weight_tables(frame)
    for ch in ("gl1", "ps1", "gl2", "ps2"):
        # both occupations couple to the coherences with the same weights
        assert np.array_equal(tables.occ2_from_coh[ch], tables.occ1_from_coh[ch])
        # and antisymmetrically through the commutator terms
        assert np.array_equal(tables.occ2_from_coh_comm[ch],
                              -tables.occ1_from_coh_comm[ch])
        # sources draw only on absorption-type slots; emission slots are
        # channel-family dependent (0, 2 secular; 0, 3 cross)
        zero_slots = (0, 2) if ch.startswith("gl") else (0, 3)
        for k in zero_slots:
            assert tables.src_occ1[ch][k] == 0.0
    # u^2 - w^2 = y/(2r): mixing asymmetry enters only off resonance
    u2 = -0.5 * tables.occ1_from_occ1["gl1"][0]
    w2 = -0.5 * tables.occ1_from_occ1["gl1"][2]
    assert u2 - w2 == pytest.approx(frame.y / (2.0 * frame.r), rel=1e-10)
    assert u2 + w2 == pytest.approx(1.0 - 1.0 / (2.0 * frame.r**2), rel=1e-10)


def test_source_weights_mirror_damping_weights():
    tables = build_weight_tables(dressed_frame(TlsPair(1.0, 0.93, 0.04)))
    # src_occ1[gl1] carries 2u^2 and 2w^2 in the absorption slots
    assert tables.src_occ1["gl1"][1] == pytest.approx(
        -tables.occ1_from_occ1["gl1"][0], rel=1e-15)
    assert tables.src_occ1["gl1"][3] == pytest.approx(
        -tables.occ1_from_occ1["gl1"][2], rel=1e-15)


def test_local_coefficients_are_bare_rates():
    pair = TlsPair(1.0, 0.93, 0.04)
    coefs = assemble_coefficients("local", pair, BATHS)
    from tlsflow.bath import relaxation_rate
    assert coefs.reservoir("damp1", 1) == pytest.approx(
        -2.0 * relaxation_rate(BATHS[0], 1.0), rel=1e-15)
    assert coefs.reservoir("damp2", 2) == pytest.approx(
        -2.0 * relaxation_rate(BATHS[1], 0.93), rel=1e-15)
    assert coefs.reservoir("src_occ1", 1) == pytest.approx(
        correlation_fourier(BATHS[0], 1.0, +1), rel=1e-15)
    # no cross-reservoir or coherence-coupling terms in the local generator
    for name in ("cross", "comm_cross", "comm_coh", "src_coh"):
        assert coefs.total(name) == 0.0
    assert coefs.reservoir("damp1", 2) == 0.0


def test_global_drops_cross_channel():
    pair = TlsPair(1.0, 0.93, 0.04)
    glob = assemble_coefficients("global", pair, BATHS)
    part = assemble_coefficients("ps", pair, BATHS)
    for name in COEF_NAMES:
        assert np.array_equal(glob.parts[name][:, 1], np.zeros(2))
        # secular channel is shared between global and ps
        assert np.allclose(glob.parts[name][:, 0], part.parts[name][:, 0], rtol=1e-15)
    # ps keeps genuinely nonzero cross terms off resonance
    assert any(abs(part.parts[name][:, 1]).max() > 0.0 for name in COEF_NAMES)


def test_damping_total_is_negative_everywhere():
    pair = TlsPair(1.0, 0.93, 0.04)
    for approach in APPROACHES:
        coefs = assemble_coefficients(approach, pair, BATHS)
        assert coefs.total("damp1") < 0.0
        assert coefs.total("damp2") < 0.0
        assert coefs.coh_damp(1) + coefs.coh_damp(2) < 0.0


def test_unknown_approach_rejected():
    with pytest.raises(DomainError):
        assemble_coefficients("secular", TlsPair(1.0, 1.0, 0.05), BATHS)
