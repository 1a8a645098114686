import math

import numpy as np
import pytest

from auglimb import scissor
from auglimb.scissor import (
    ScissorParams,
    actuator_to_theta,
    actuator_travel_max,
    d_extension_d_actuator,
    default_params,
    extension_of_theta,
    extension_range,
    extension_ratio,
    theta_of_extension,
    theta_to_actuator,
)


def test_default_endpoints():
    p = default_params()
    lo, hi = p.theta_range
    assert extension_of_theta(p, lo) == pytest.approx(70.0, abs=1e-9)
    assert extension_of_theta(p, hi) == pytest.approx(250.0, abs=1e-9)


def test_simple_triangle_case():
    # e0=0, N=1, a=50, theta=pi/6: sin = 1/2 exactly
    p = ScissorParams(1, 50.0, 0.0, 1, (0.1, 1.5), 1.0)
    assert extension_of_theta(p, math.pi / 6) == pytest.approx(50.0, abs=1e-12)


def test_theta_out_of_range_rejected():
    p = default_params()
    with pytest.raises(ValueError):
        extension_of_theta(p, p.theta_range[1] + 0.1)
    with pytest.raises(ValueError):
        extension_of_theta(p, 0.0)


def test_degenerate_range_rejected_at_construction():
    with pytest.raises(ValueError):
        ScissorParams(2, 60.0, 30.0, 2, (0.5, 0.5), 1.0)
    with pytest.raises(ValueError):
        ScissorParams(2, 60.0, 30.0, 2, (0.0, 1.0), 1.0)
    with pytest.raises(ValueError):
        ScissorParams(0, 60.0, 30.0, 2, (0.2, 1.0), 1.0)


def test_inverse_hits_paper_endpoints():
    p = default_params()
    assert theta_of_extension(p, 70.0) == pytest.approx(p.theta_range[0], abs=1e-12)
    assert theta_of_extension(p, 250.0) == pytest.approx(p.theta_range[1], abs=1e-12)
    with pytest.raises(ValueError):
        theta_of_extension(p, 69.0)
    with pytest.raises(ValueError):
        theta_of_extension(p, 251.0)


def test_inverse_round_trip_100_points():
    p = default_params()
    rng = np.random.default_rng(42)
    for e in rng.uniform(70.0, 250.0, size=100):
        assert extension_of_theta(p, theta_of_extension(p, e)) == pytest.approx(
            e, abs=1e-9
        )


def test_extension_ratio_default():
    # 250/70 = 3.5714..., which the hardware spec rounds to 3.6x
    assert extension_ratio(default_params()) == pytest.approx(250.0 / 70.0, rel=1e-12)


def test_extension_ratio_zero_offset_independent_of_a_and_n():
    # with e0=0 the ratio reduces to sin(max)/sin(min)
    rng = np.random.default_rng(3)
    lo, hi = 0.3, 1.2
    expected = math.sin(hi) / math.sin(lo)
    for _ in range(20):
        a = rng.uniform(10.0, 200.0)
        n = int(rng.integers(1, 6))
        p = ScissorParams(n, a, 0.0, 1, (lo, hi), 1.0)
        assert extension_ratio(p) == pytest.approx(expected, rel=1e-12)


def test_actuator_boundaries():
    p = default_params()
    lo, hi = p.theta_range
    assert actuator_to_theta(p, 0.0) == pytest.approx(lo, abs=1e-12)
    assert actuator_to_theta(p, actuator_travel_max(p)) == pytest.approx(hi, abs=1e-12)
    with pytest.raises(ValueError):
        actuator_to_theta(p, -1.0)
    with pytest.raises(ValueError):
        actuator_to_theta(p, actuator_travel_max(p) + 1.0)


def test_actuator_mid_travel():
    # half travel closes half the pivot width: cos(theta) is the midpoint
    p = default_params()
    lo, hi = p.theta_range
    theta = actuator_to_theta(p, actuator_travel_max(p) / 2.0)
    assert math.cos(theta) == pytest.approx((math.cos(lo) + math.cos(hi)) / 2.0, abs=1e-12)


def test_actuator_round_trip():
    p = default_params()
    rng = np.random.default_rng(7)
    for s in rng.uniform(0.0, actuator_travel_max(p), size=50):
        assert theta_to_actuator(p, actuator_to_theta(p, s)) == pytest.approx(s, abs=1e-9)


def test_gain_unit_case():
    # N=1 at theta=pi/4: cot = 1
    p = ScissorParams(1, 80.0, 0.0, 1, (0.2, 1.3), 1.0)
    s = theta_to_actuator(p, math.pi / 4)
    assert d_extension_d_actuator(p, s) == pytest.approx(1.0, abs=1e-12)


def test_gain_at_retracted_stop():
    p = default_params()
    lo, _ = p.theta_range
    gain = d_extension_d_actuator(p, 0.0)
    assert gain == pytest.approx(p.stages * math.cos(lo) / math.sin(lo), rel=1e-12)
    assert math.isfinite(gain) and gain > p.stages


def test_gain_matches_finite_difference():
    # independent check: central difference of the composed map s -> e
    p = default_params()
    s_max = actuator_travel_max(p)
    h = 1e-6 * s_max
    ss = np.linspace(h, s_max - h, 100)
    for s in ss:
        e_plus = extension_of_theta(p, actuator_to_theta(p, s + h))
        e_minus = extension_of_theta(p, actuator_to_theta(p, s - h))
        fd = (e_plus - e_minus) / (2.0 * h)
        gain = d_extension_d_actuator(p, s)
        assert abs(gain - fd) / abs(fd) < 1e-5


def test_gain_decreases_with_travel():
    p = default_params()
    s_max = actuator_travel_max(p)
    gains = [d_extension_d_actuator(p, s) for s in np.linspace(0.0, s_max, 50)]
    assert all(g1 > g2 for g1, g2 in zip(gains, gains[1:]))


def test_extension_monotone_and_bounded():
    p = default_params()
    lo, hi = p.theta_range
    thetas = np.linspace(lo, hi, 500)
    es = [extension_of_theta(p, t) for t in thetas]
    assert all(e1 < e2 for e1, e2 in zip(es, es[1:]))
    assert all(70.0 - 1e-9 <= e <= 250.0 + 1e-9 for e in es)
    assert es[0] == pytest.approx(70.0, abs=1e-9)
    assert es[-1] == pytest.approx(250.0, abs=1e-9)


def test_composed_map_strictly_increasing():
    p = default_params()
    s_max = actuator_travel_max(p)
    es = [extension_of_theta(p, actuator_to_theta(p, s)) for s in np.linspace(0, s_max, 200)]
    assert all(e1 < e2 for e1, e2 in zip(es, es[1:]))


def test_layer_count_changes_no_kinematic_output():
    lo, hi = math.asin(1 / 6), math.asin(11 / 12)
    one = ScissorParams(2, 60.0, 30.0, 1, (lo, hi), 0.7)
    two = ScissorParams(2, 60.0, 30.0, 2, (lo, hi), 0.7)
    assert extension_range(one) == extension_range(two)
    assert extension_ratio(one) == extension_ratio(two)
    for s in np.linspace(0.0, actuator_travel_max(one), 20):
        assert actuator_to_theta(one, s) == actuator_to_theta(two, s)
        assert d_extension_d_actuator(one, s) == d_extension_d_actuator(two, s)


def test_extension_range_helper():
    elo, ehi = extension_range(default_params())
    assert elo == pytest.approx(70.0, abs=1e-9)
    assert ehi == pytest.approx(250.0, abs=1e-9)
    assert scissor.actuator_travel_max(default_params()) > 0
