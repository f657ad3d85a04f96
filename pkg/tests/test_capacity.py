import math

import pytest
from scipy import optimize

from huygens.capacity import (
    PERTURBATIVE_LIMIT,
    capacity_lambda_closed,
    capacity_matter_closed,
    channel_capacity,
    evaluate,
    require_strict_timelike,
)
from huygens.causality import CausalClass, CommPair, DetectorConfig, Proper, classify, comoving_from_proper
from huygens.errors import DomainError
from huygens.numerics import cosine_integral, find_root
from huygens.signaling import DetectorState, Method, i_theta, i_theta_closed_matter, receiver_state

from conftest import ANCHOR, make_pair

LN2 = math.log(2.0)


def test_zero_signal_zero_capacity():
    assert channel_capacity(0.0, receiver_state(), 1.0, 1.0).capacity_bits == 0.0


def test_reference_arithmetic():
    c = channel_capacity(1.0 / (4 * math.pi), receiver_state(), 1.0, 1.0).capacity_bits
    assert c == pytest.approx(1.0 / (32 * math.pi ** 2 * LN2), rel=1e-14)
    assert c == pytest.approx(0.004568, abs=1e-6)


def test_coupling_scaling():
    one = channel_capacity(0.01, receiver_state(), 1.0, 1.0).capacity_bits
    two = channel_capacity(0.01, receiver_state(), 2.0, 2.0).capacity_bits
    assert two == pytest.approx(16 * one, rel=1e-15)


def test_no_coherence_undefined():
    with pytest.raises(DomainError):
        channel_capacity(0.01, DetectorState(1.0, 0.0), 1.0, 1.0)


def test_large_capacity_warns():
    res = channel_capacity(1.0, receiver_state(), 1.0, 1.0)
    assert res.capacity_bits > PERTURBATIVE_LIMIT
    assert res.warnings


def test_matter_composition_identity():
    pair = make_pair(t_ib=2.0)
    theta = i_theta_closed_matter(pair.alice, pair.bob)
    composed = channel_capacity(theta / (4 * math.pi), receiver_state(), 1.0, 1.0).capacity_bits
    assert capacity_matter_closed(pair.alice, pair.bob).capacity_bits == composed
    # same number from the fully expanded dust expression
    dci = lambda w, t, d: cosine_integral(w * (t + d)) - cosine_integral(w * t)
    expanded = dci(10, ANCHOR, 0.01) ** 2 * dci(10, 2.0, 0.01) ** 2 / (2592 * math.pi ** 2 * LN2)
    assert composed == pytest.approx(expanded, rel=1e-13)


def test_matter_gapless_decay_ratio():
    c2 = capacity_matter_closed(*_gapless(2.0)).capacity_bits
    c20 = capacity_matter_closed(*_gapless(20.0)).capacity_bits
    expected = (math.log(20.01 / 20) / math.log(2.01 / 2)) ** 2
    assert c20 / c2 == pytest.approx(expected, rel=1e-12)
    assert c20 / c2 == pytest.approx(0.010045, abs=1e-6)


def test_matter_envelope_inverse_square():
    c20 = capacity_matter_closed(*_gapless(20.0)).capacity_bits
    c200 = capacity_matter_closed(*_gapless(200.0)).capacity_bits
    assert c200 / c20 == pytest.approx(1e-2, rel=0.02)


def _dets(omega, t_ib):
    pair = make_pair(gap_a=omega, gap_b=omega, t_ib=t_ib)
    return pair.alice, pair.bob


def _gapless(t_ib):
    return _dets(0.0, t_ib)


def test_matter_oscillation_zeros_agree(matter):
    omega = 10.0

    def closed(t):
        return cosine_integral(omega * (t + 0.01)) - cosine_integral(omega * t)

    def quadrature(t):
        return i_theta(matter, make_pair(gap_a=omega, gap_b=omega, t_ib=t))

    # Delta Ci_B changes sign roughly every pi / omega; check three zeros
    for start in (2.0, 2.3, 5.0):
        grid = [start + k * 0.02 for k in range(20)]
        lo = next(x for x, y in zip(grid, grid[1:]) if closed(x) * closed(y) < 0)
        z_closed = find_root(closed, lo, lo + 0.02, xtol=1e-13)
        z_quad = find_root(quadrature, lo, lo + 0.02, xtol=1e-13)
        assert abs(z_closed - z_quad) < 1e-6
        assert capacity_matter_closed(*_dets(omega, z_closed)).capacity_bits < 1e-25


def test_lambda_periodicity_and_scaling():
    omega = 10.0
    base = make_pair(gap_a=omega, gap_b=omega, t_ib=2.0)
    later = make_pair(gap_a=omega, gap_b=omega, t_ib=2.0 + math.pi / omega)
    c = capacity_lambda_closed(base.alice, base.bob, 1.0).capacity_bits
    assert capacity_lambda_closed(later.alice, later.bob, 1.0).capacity_bits == pytest.approx(c, rel=1e-10)
    assert capacity_lambda_closed(base.alice, base.bob, 2.0).capacity_bits / c == pytest.approx(16.0, rel=1e-12)


def test_lambda_compositional_prefactor():
    omega = 10.0
    pair = make_pair(gap_a=omega, gap_b=omega, t_ib=2.0)
    trig = (
        math.sin(omega * 0.005) ** 2
        * math.cos(omega * (ANCHOR + 0.005))
        * math.cos(omega * 2.005)
    ) ** 2
    expected = trig / (2 * math.pi ** 2 * LN2 * omega ** 4)
    assert capacity_lambda_closed(pair.alice, pair.bob, 1.0).capacity_bits == pytest.approx(expected, rel=1e-12)


def test_lambda_period_max_constant():
    omega = 10.0
    period = math.pi / omega

    def period_max(t0):
        f = lambda t: -capacity_lambda_closed(*_dets(omega, t), 1.0).capacity_bits
        grid = [t0 + period * k / 200 for k in range(201)]
        best = min(grid, key=f)
        res = optimize.minimize_scalar(f, bounds=(best - period / 200, best + period / 200), method="bounded",
                                       options={"xatol": 1e-12})
        return -res.fun

    ref = period_max(2.0)
    assert period_max(102.0) == pytest.approx(ref, rel=1e-10)


def test_closed_matches_quadrature(model):
    pair = make_pair(t_ib=2.0)
    closed = evaluate(model, pair)
    quad = evaluate(model, pair, method="quadrature")
    assert closed.signal.method is Method.CLOSED_FORM
    assert quad.signal.method is Method.QUADRATURE
    assert quad.capacity.capacity_bits == pytest.approx(closed.capacity.capacity_bits, rel=1e-7)


def test_phase_invariance(model):
    pair = make_pair(t_ib=1.31, delta_b=0.05)
    base = evaluate(model, pair, method="quadrature").capacity.capacity_bits
    rotated = evaluate(model, pair, state_b=receiver_state().with_phase(1.234)).capacity.capacity_bits
    assert rotated == pytest.approx(base, rel=1e-10)
    assert base >= 0


def test_separation_independence(model):
    caps = []
    for R in (0.1, 0.3, 0.5):
        caps.append(evaluate(model, make_pair(t_ib=2.0, R=R), method="quadrature").capacity.capacity_bits)
    for P in (0.1, 0.5):
        pair = CommPair(DetectorConfig(10.0), DetectorConfig(10.0, switch_on=2.0), Proper(P))
        assert classify(model, pair) is CausalClass.B5_STRICT_TIMELIKE
        assert comoving_from_proper(model, P, 2.0) > 0
        caps.append(evaluate(model, pair, method="quadrature").capacity.capacity_bits)
    assert max(caps) - min(caps) <= 1e-8 * caps[0]


def test_closed_request_outside_b5_falls_back(matter):
    ev = evaluate(matter, make_pair(t_ib=1.31, delta_b=0.05), method="closed")
    assert ev.signal.method is Method.QUADRATURE
    assert any("closed form requested" in w for w in ev.warnings)


def test_require_strict_timelike(matter):
    require_strict_timelike(matter, make_pair(t_ib=2.0))
    with pytest.raises(DomainError):
        require_strict_timelike(matter, make_pair(t_ib=0.7))
