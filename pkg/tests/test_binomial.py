"""Binomial and Bernoulli state construction, overlaps, orthogonality."""

import math

import numpy as np
import pytest

from cavity_bell.binomial import (
    BinomialParams,
    GbsParams,
    binomial_overlap,
    binomial_state,
    gbs_state,
    orthogonal_partner,
    wrap_angle,
)
from cavity_bell.fock import inner


def test_wrap_angle_range():
    for x in np.linspace(-12.0, 12.0, 97):
        w = wrap_angle(float(x))
        assert -math.pi < w <= math.pi
        assert math.isclose(math.cos(w), math.cos(x), abs_tol=1e-12)
        assert math.isclose(math.sin(w), math.sin(x), abs_tol=1e-12)
    assert wrap_angle(math.pi) == math.pi
    assert wrap_angle(-math.pi) == math.pi
    assert wrap_angle(3 * math.pi) == math.pi


def test_binomial_amplitudes_match_definition():
    params = BinomialParams(4, 0.35, 0.8)
    state = binomial_state(params, n_max=6)
    for n in range(5):
        want = math.sqrt(math.comb(4, n) * 0.35**n * 0.65 ** (4 - n)) * np.exp(1j * n * 0.8)
        assert abs(state.amplitudes[n] - want) < 1e-14
    assert np.all(state.amplitudes[5:] == 0)
    assert math.isclose(np.linalg.norm(state.amplitudes), 1.0, abs_tol=1e-14)


def test_binomial_endpoints_are_fock_states():
    lo = binomial_state(BinomialParams(3, 0.0, 0.4), n_max=4)
    hi = binomial_state(BinomialParams(3, 1.0, 0.4), n_max=4)
    assert abs(abs(lo.amplitudes[0]) - 1.0) < 1e-14
    assert abs(abs(hi.amplitudes[3]) - 1.0) < 1e-14


def test_bernoulli_state_two_levels():
    g = GbsParams(0.3, 1.2)
    s = gbs_state(g, n_max=2)
    assert abs(s.amplitudes[0] - math.sqrt(0.7)) < 1e-14
    assert abs(s.amplitudes[1] - math.sqrt(0.3) * np.exp(1.2j)) < 1e-14
    assert s.amplitudes[2] == 0


def test_overlap_closed_form_matches_inner_product():
    rng = np.random.default_rng(42)
    for _ in range(200):
        n = int(rng.integers(1, 9))
        pa, pb = rng.uniform(0.0, 1.0, 2)
        fa, fb = rng.uniform(-math.pi, math.pi, 2)
        a = BinomialParams(n, pa, fa)
        b = BinomialParams(n, pb, fb)
        closed = binomial_overlap(a, b)
        direct = inner(binomial_state(a, n + 1), binomial_state(b, n + 1))
        assert abs(closed - direct) < 1e-12


def test_overlap_requires_equal_photon_budget():
    with pytest.raises(ValueError):
        binomial_overlap(BinomialParams(2, 0.5, 0.0), BinomialParams(3, 0.5, 0.0))


def test_partner_is_orthogonal():
    for p in (0.05, 0.3, 0.5, 0.9):
        for phi in (0.0, math.pi / 3, -2.0):
            g = GbsParams(p, phi)
            h = orthogonal_partner(g)
            assert abs(inner(gbs_state(g), gbs_state(h))) < 1e-12
            assert math.isclose(h.p, 1.0 - p, abs_tol=1e-14)


def test_orthogonality_needs_both_conditions():
    # flipping only the probability or only the phase leaves an overlap
    g = GbsParams(0.3, 0.4)
    only_p = GbsParams(0.7, 0.4)
    only_phi = GbsParams(0.3, 0.4 + math.pi)
    assert abs(inner(gbs_state(g), gbs_state(only_p))) > 1e-3
    assert abs(inner(gbs_state(g), gbs_state(only_phi))) > 1e-3


def test_endpoint_orthogonality_ignores_phase():
    # p = 0 against p' = 1 are distinct Fock states for any phases
    a = BinomialParams(5, 0.0, 0.1)
    b = BinomialParams(5, 1.0, 2.2)
    assert abs(binomial_overlap(a, b)) < 1e-14


def test_parameter_validation():
    with pytest.raises(ValueError):
        BinomialParams(-1, 0.5, 0.0)
    with pytest.raises(ValueError):
        BinomialParams(2, 1.5, 0.0)
    with pytest.raises(ValueError):
        BinomialParams(2, -0.1, 0.0)
    with pytest.raises(ValueError):
        binomial_state(BinomialParams(70, 0.5, 0.0), n_max=71)
    with pytest.raises(ValueError):
        binomial_state(BinomialParams(3, 0.5, 0.0), n_max=2)


def test_phase_is_wrapped():
    g = GbsParams(0.5, 2 * math.pi + 0.3)
    assert math.isclose(g.phi, 0.3, abs_tol=1e-12)
