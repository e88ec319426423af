import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from imqfast.expansion import (
    factor_pair,
    green_exact,
    green_truncated,
    phi_imq,
    translated_kernel_approx,
    truncation_error_bound,
)
from imqfast.geometry import lift_center, lift_pair, to_cartesian
from imqfast.specfun import assoc_legendre

def _roundoff(G):
    # collinear points attain the bound exactly, so summation roundoff can exceed it
    return 64 * np.finfo(float).eps * G


planar = st.tuples(st.floats(-5, 5), st.floats(-5, 5))


def test_phi_examples():
    assert phi_imq((0.2, 0.3), (0.2, 0.3), 1.0) == 1.0
    assert phi_imq((np.sqrt(3), 0), (0, 0), 1.0) == pytest.approx(0.5, rel=1e-15)
    assert phi_imq((1, 1), (0, 0), 2.0) == pytest.approx(1 / np.sqrt(6), rel=1e-15)


@given(planar, planar, st.floats(0.01, 10))
def test_phi_range(x, y, t):
    v = phi_imq(x, y, t)
    assert 0 < v <= 1 / t


@given(planar, planar, st.floats(0.01, 10))
def test_phi_equals_lifted_green(x, y, t):
    X, Y = lift_pair(x, y, t)
    assert green_exact(X, Y) == pytest.approx(phi_imq(x, y, t), rel=4e-16)


def test_green_exact():
    assert green_exact((1, 0, 0), (0, 0, 0)) == 1.0
    assert green_exact((3, 4, 0), (0, 0, 0)) == pytest.approx(0.2, rel=1e-15)
    X, Y = lift_pair((np.sqrt(3), 1), (0, 1), 1.0)
    assert green_exact(X, Y) == pytest.approx(0.5, rel=1e-15)
    with pytest.raises(ValueError):
        green_exact((1, 2, 3), (1, 2, 3))


def test_green_truncated_monopole():
    X = np.array([0.3, -2.0, 1.0])
    Y = np.array([0.1, 0.2, -0.3])
    assert green_truncated(X, Y, 0) == pytest.approx(1 / np.linalg.norm(X), rel=1e-15)


def test_green_truncated_collinear():
    X, Y = np.array([0, 0, 2.0]), np.array([0, 0, 1.0])
    err = abs(green_truncated(X, Y, 20) - green_exact(X, Y))
    assert err <= truncation_error_bound(2.0, 0.5, 20)
    assert err <= 9.6e-7
    # collinear points make the bound an equality
    assert err == pytest.approx(truncation_error_bound(2.0, 0.5, 20), rel=1e-9)


def test_green_truncated_rejects_equal_radii():
    with pytest.raises(ValueError):
        green_truncated((1, 0, 0), (0, 1, 0), 5)


def test_green_truncated_symmetric(rng):
    for _ in range(50):
        X, Y = rng.normal(size=3), rng.normal(size=3)
        a, b = green_truncated(X, Y, 12), green_truncated(Y, X, 12)
        assert a == pytest.approx(b, rel=1e-13)


def test_error_trend_protocol():
    # unit source radius, target radius swept outward, both angle settings
    rho = np.linspace(1.1, 21, 60)
    cases = {"a": (np.pi / 3,) * 4, "b": (np.pi, np.pi / 4, np.pi / 3, np.pi / 2)}
    for case, (th_x, th_y, om_x, om_y) in cases.items():
        X = to_cartesian((rho, np.full_like(rho, th_x), np.full_like(rho, om_x)))
        Y = np.broadcast_to(to_cartesian((1.0, th_y, om_y)), X.shape)
        errs = {M: np.abs(green_exact(X, Y) - green_truncated(X, Y, M)) for M in (5, 10, 20)}
        floor = 1e-15
        for M, e in errs.items():
            resolved = e > floor
            assert np.all(np.diff(e[resolved]) <= 0)
            bound = np.array([truncation_error_bound(r, 1 / r, M) for r in rho])
            assert np.all(e <= bound + _roundoff(green_exact(X, Y)))
        if case == "a":
            assert np.all(errs[10] <= errs[5] + floor) and np.all(errs[20] <= errs[10] + floor)
        else:
            # off-axis angles can make a longer expansion worse very close to rho_x = 1
            far = rho > 2
            assert np.all(errs[10][far] <= errs[5][far] + floor) and np.all(errs[20][far] <= errs[10][far] + floor)
        assert errs[5][0] > 1e3 * errs[5][-1]


@settings(max_examples=300, deadline=None)
@given(
    st.floats(0.25, 0.9), st.floats(0.1, 10), st.sampled_from([5, 10, 20]),
    st.floats(0, np.pi), st.floats(0, 2 * np.pi), st.floats(0, np.pi), st.floats(0, 2 * np.pi),
)
def test_truncation_bound_holds(r, rho_x, M, th_x, om_x, th_y, om_y):
    X = to_cartesian((rho_x, th_x, om_x))
    Y = to_cartesian((r * rho_x, th_y, om_y))
    rx, ry = np.linalg.norm(X), np.linalg.norm(Y)
    G = green_exact(X, Y)
    err = abs(G - green_truncated(X, Y, M))
    assert err <= truncation_error_bound(rx, ry / rx, M) + _roundoff(G)


def test_bound_values():
    assert truncation_error_bound(1.0, 0.5, 10) == pytest.approx(9.765625e-4, rel=1e-15)
    vals = [truncation_error_bound(1.0, 0.7, M) for M in range(0, 60, 5)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    r, rho = np.sqrt(2 / 73), np.sqrt(73) / 8
    assert truncation_error_bound(rho, r, 10) == pytest.approx(2.86e-9, rel=3e-3)
    assert truncation_error_bound(rho, r, 20) == pytest.approx(4.41e-17, rel=4e-3)
    assert truncation_error_bound(2.0, 0.0, 3) == 0.0
    with pytest.raises(ValueError):
        truncation_error_bound(1.0, 1.0, 3)
    with pytest.raises(ValueError):
        truncation_error_bound(0.0, 0.5, 3)


def test_factor_pair():
    Xr = np.array([0.3, -0.2, 1.0])
    h, j = factor_pair(0, 0, Xr, np.array([0.1, 0.1, 0.0]))
    assert h == pytest.approx(1 / np.linalg.norm(Xr), rel=1e-15) and j == 1.0
    assert factor_pair(2, 1, Xr, np.zeros(3)).j == 0.0
    assert factor_pair(0, 0, Xr, np.zeros(3)).j == 1.0
    Yr = np.array([0.2, -0.1, 0.0])
    for n in range(8):
        for m in range(n + 1):
            j = factor_pair(n, m, Xr, Yr).j
            if (n - m) % 2:
                assert j == 0.0
            else:
                ry = np.linalg.norm(Yr)
                assert j == pytest.approx(assoc_legendre(n, m, 0.0) * ry**n, rel=1e-14)
    with pytest.raises(ValueError):
        factor_pair(1, 0, np.zeros(3), Yr)


def test_translated_source_at_center():
    x, z, t = np.array([0.9, 0.8]), np.array([0.125, 0.125]), 1.0
    for M in (0, 3, 10):
        approx = translated_kernel_approx(x, z, z, t, M)
        assert approx == pytest.approx(phi_imq(x, z, t), rel=1e-15)


def test_translated_forms_agree(rng):
    t = 0.8
    z = np.array([0.0, 0.0])
    y = rng.uniform(-0.1, 0.1, size=(200, 2))
    x = rng.uniform(0.5, 2.0, size=(200, 2)) * rng.choice([-1, 1], size=(200, 2))
    a = translated_kernel_approx(x, y, z, t, 12, form="split")
    b = translated_kernel_approx(x, y, z, t, 12, form="difference")
    np.testing.assert_allclose(a, b, rtol=1e-13)


def test_translated_matches_lifted_expansion(rng):
    t = 1.0
    z = np.array([0.125, 0.375])
    for _ in range(20):
        y = z + rng.uniform(-0.125, 0.125, 2)
        x = rng.uniform(0.5, 1.0, 2)
        X, Y = lift_pair(x, y, t)
        Z = lift_center(z, t)
        assert translated_kernel_approx(x, y, z, t, 10) == pytest.approx(green_truncated(X - Z, Y - Z, 10), rel=1e-13)
        assert abs(translated_kernel_approx(x, y, z, t, 10) - phi_imq(x, y, t)) < 2.87e-9


def test_translated_rejects_bad_geometry():
    with pytest.raises(ValueError):
        translated_kernel_approx((0.1, 0.0), (2.0, 0.0), (0.0, 0.0), 1.0, 5)
    with pytest.raises(ValueError):
        translated_kernel_approx((0.1, 0.0), (0.1, 0.0), (0.0, 0.0), 1.0, 5, form="other")
