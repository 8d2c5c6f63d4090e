import numpy as np
import pytest

from nonlocal_ssh.bulk import (
    bloch_matrix,
    bloch_state,
    energy_bands,
    parity_check,
    phase_phi,
    wilson_loop_phase,
    zak_analytic,
    zak_wilson,
)
from nonlocal_ssh.errors import CriticalPoint, GapClosure, ValidationError
from nonlocal_ssh.model import BulkParams

P_TOPO = BulkParams(v=0.5, w=1.0, a=1.0)
P_TRIV = BulkParams(v=2.0, w=1.0, a=1.0)

RNG = np.random.default_rng(20260822)


def test_band_edges_closed_form():
    bp0 = energy_bands(P_TOPO, 0.0)
    bppi = energy_bands(P_TOPO, np.pi)
    assert bp0.e_plus == pytest.approx(1.5, abs=0)
    assert bp0.e_minus == pytest.approx(-1.5, abs=0)
    assert bppi.e_plus == pytest.approx(0.5, abs=1e-15)
    assert bppi.e_minus == pytest.approx(-0.5, abs=1e-15)


def test_band_dispersion_formula():
    k = RNG.uniform(-10, 10, 64)
    for v, w, a in [(0.5, 1.0, 1.0), (2.0, -1.0, 0.3), (-1.5, 0.7, 2.5)]:
        p = BulkParams(v=v, w=w, a=a)
        ref = np.sqrt(v**2 + w**2 + 2 * v * w * np.cos(a * k))
        bp = energy_bands(p, k)
        assert np.allclose(bp.e_plus, ref, atol=1e-14)
        assert np.allclose(bp.e_minus, -ref, atol=1e-14)


def test_band_periodicity():
    k = RNG.uniform(-20, 20, 100)
    for a in (0.2, 1.0, 3.0):
        p = BulkParams(v=0.5, w=1.0, a=a)
        e0 = energy_bands(p, k).e_plus
        e1 = energy_bands(p, k + 2 * np.pi / a).e_plus
        assert np.max(np.abs(e1 - e0)) < 1e-12


def test_phase_matches_arg_of_offdiag():
    k = RNG.uniform(-3, 3, 32)
    phi = phase_phi(P_TOPO, k)
    ref = np.angle(P_TOPO.v + P_TOPO.w * np.exp(-1j * P_TOPO.a * k))
    assert np.allclose(phi, ref, atol=1e-13)


def test_phase_zone_boundary_branch():
    # v < w: h(pi/a) is a negative real; its argument must come out +pi,
    # not -pi from a sign flip in the rounded sine
    assert phase_phi(P_TOPO, np.pi) == pytest.approx(np.pi)
    assert phase_phi(P_TOPO, -np.pi) == pytest.approx(np.pi)
    assert phase_phi(P_TOPO, 3 * np.pi) == pytest.approx(np.pi)


def test_phase_gap_closure():
    p = BulkParams(v=1.0, w=-1.0, a=1.0)
    with pytest.raises(GapClosure):
        phase_phi(p, 0.0)


def test_bloch_state_is_eigenvector():
    for k in (-2.1, 0.0, 0.7, np.pi):
        h = bloch_matrix(P_TOPO, k)
        for band, e in (("plus", 1), ("minus", -1)):
            st = bloch_state(P_TOPO, k, band)
            u = st.vector()
            lam = e * energy_bands(P_TOPO, k).e_plus
            assert np.linalg.norm(h @ u - lam * u) < 1e-12
    up = bloch_state(P_TOPO, 0.7, "plus").vector()
    um = bloch_state(P_TOPO, 0.7, "minus").vector()
    assert abs(np.vdot(up, um)) < 1e-13


def test_zak_analytic_cases():
    assert zak_analytic(P_TOPO).value == pytest.approx(np.pi)
    assert zak_analytic(P_TOPO).classification == "topological"
    assert zak_analytic(P_TRIV).value == 0.0
    assert zak_analytic(P_TRIV).classification == "trivial"
    # only |v| vs |w| matters
    assert zak_analytic(BulkParams(v=1.0, w=-2.0, a=0.4)).value == pytest.approx(np.pi)
    assert zak_analytic(BulkParams(v=-3.0, w=1.0, a=0.4)).value == 0.0
    with pytest.raises(CriticalPoint):
        zak_analytic(BulkParams(v=1.0, w=-1.0, a=1.0))


def test_zak_wilson_matches_analytic():
    for v, w in [(0.5, 1.0), (1.5, 1.0), (1.0, -2.0), (-3.0, 1.0)]:
        for a in (0.2, 1.0, 3.0):
            p = BulkParams(v=v, w=w, a=a)
            got = zak_wilson(p, nk=2048).value
            want = zak_analytic(p).value
            # compare on the circle
            d = np.angle(np.exp(1j * (got - want)))
            assert abs(d) < 1e-6, (v, w, a)


def test_zak_wilson_both_bands_agree():
    gp = zak_wilson(P_TOPO, band="plus").value
    gm = zak_wilson(P_TOPO, band="minus").value
    assert abs(np.angle(np.exp(1j * (gp - gm)))) < 1e-6


def test_zak_wilson_validation():
    with pytest.raises(ValidationError):
        zak_wilson(P_TOPO, nk=8)
    with pytest.raises(GapClosure):
        zak_wilson(BulkParams(v=1.0, w=-1.0, a=1.0))


def test_wilson_loop_gauge_invariance():
    nk = 512
    k = -np.pi + 2 * np.pi * np.arange(nk) / nk
    states = np.stack(
        [bloch_state(P_TOPO, kk, "plus").vector() for kk in k], axis=0
    )
    base = wilson_loop_phase(states)
    # random U(1) gauge per k point cancels around the loop
    gauged = states * np.exp(1j * RNG.uniform(0, 2 * np.pi, nk))[:, None]
    assert wilson_loop_phase(gauged) == pytest.approx(base, abs=1e-10)
    with pytest.raises(ValidationError):
        wilson_loop_phase(states[:1])


def test_parity_relation():
    for k in RNG.uniform(-5, 5, 16):
        assert parity_check(P_TOPO, k) < 1e-14
        assert parity_check(BulkParams(v=-1.2, w=0.4, a=2.2), k) < 1e-14
