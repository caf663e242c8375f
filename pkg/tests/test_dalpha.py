import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from quasisect.dalpha import (
    DAlphaDomain,
    GAlphaSubdomain,
    asymptotic_limits,
    dalpha_boundary,
    dalpha_contains,
    dalpha_distance,
    im_sup_bound_fn,
    phi_of_t,
    scaled_limit_extrema,
    segment_power_extrema,
    sup_im_f2,
    t_of_phi,
    verify_power_containment,
    zeta,
)
from quasisect.errors import OutOfRange

PI = math.pi
alphas = st.floats(0.0, PI / 2 - 1e-3)
points = st.complex_numbers(max_magnitude=3.0, allow_nan=False, allow_infinity=False)


@pytest.mark.parametrize(
    "alpha,z,expected",
    [
        (PI / 4, 0.0, True),
        (PI / 4, 1.0, True),
        (PI / 4, 1.01, False),
        (PI / 4, 0.5 + 0.5j, True),
        (PI / 4, 0.5 + 0.51j, False),
        (PI / 4, -0.7, True),
        (PI / 4, -0.71, False),
        (0.0, 0.3, True),
        (0.0, 0.3 + 1e-6j, False),
        (PI / 6, 0.9 + 0.05j, True),
        (PI / 6, 0.9 + 0.06j, False),
    ],
)
def test_contains_examples(alpha, z, expected):
    assert dalpha_contains(alpha, z) is expected


def test_contains_tolerance():
    assert dalpha_contains(PI / 4, 1.01, 0.02)
    with pytest.raises(ValueError):
        dalpha_contains(PI / 4, 0.0, -1.0)
    with pytest.raises(ValueError):
        DAlphaDomain(PI / 2)


def test_distance_examples():
    D = DAlphaDomain(PI / 4)
    assert D.distance(2.0) == pytest.approx(1.0)
    assert D.distance(-1.0) == pytest.approx(1 - math.sqrt(0.5))
    assert D.distance(0.5j) == 0.0
    # nearest point lies on the upper tangent segment
    assert D.distance(0.8 + 0.3j) == pytest.approx(0.1 / math.sqrt(2))
    # nearest point is the tangency corner, closer via the disc
    assert D.distance(0.5 + 0.6j) == pytest.approx(abs(0.5 + 0.6j) - math.sqrt(0.5))


def test_boundary_small_examples():
    b = dalpha_boundary(PI / 4, 4)
    assert len(b) == 4
    assert b[0] == 1.0
    assert np.any(np.abs(b - (0.5 + 0.5j)) < 1e-15)
    assert np.any(np.abs(b - (0.5 - 0.5j)) < 1e-15)
    assert np.all(dalpha_distance(PI / 4, b) <= 1e-15)
    with pytest.raises(ValueError):
        dalpha_boundary(PI / 4, 2)


def test_boundary_alpha_zero_is_unit_interval():
    b = dalpha_boundary(0.0, 50)
    assert np.all(np.abs(b.imag) <= 1e-15)
    assert np.all((b.real >= -1e-15) & (b.real <= 1 + 1e-15))


@pytest.mark.parametrize("alpha", [PI / 12, PI / 6, PI / 4, 1.2])
def test_boundary_dense(alpha):
    D = DAlphaDomain(alpha)
    b = D.boundary(10_000)
    assert len(b) == 10_000
    assert np.max(D.distance(b)) <= 1e-14
    # counterclockwise: positive signed area equal to the closed form
    area = 0.5 * np.sum((np.conj(b) * np.roll(b, -1)).imag)
    exact = 0.5 * (PI + 2 * alpha) * D.sin**2 + D.sin * D.cos
    assert area == pytest.approx(exact, rel=1e-6)
    # pushing outward along the polygon normal leaves the domain
    nxt, prv = np.roll(b, -1), np.roll(b, 1)
    tangent = nxt - prv
    normal = -1j * tangent / np.abs(tangent)
    assert np.all(D.distance(b + 1e-6 * normal) > 0)


def test_zeta_and_angle_maps():
    a = PI / 4
    assert zeta(0.0, "+", a) == 1.0
    assert zeta(math.cos(a), "+", a) == pytest.approx(0.5 + 0.5j)
    assert zeta(math.cos(a), -1, a) == pytest.approx(0.5 - 0.5j)
    assert phi_of_t(0.0, a) == 0.0
    assert phi_of_t(math.cos(a), a) == pytest.approx(PI / 4)
    for bad in (-0.1, math.cos(a) + 0.01):
        with pytest.raises(OutOfRange):
            zeta(bad, "+", a)
        with pytest.raises(OutOfRange):
            phi_of_t(bad, a)
    with pytest.raises(OutOfRange):
        t_of_phi(PI / 2 - a + 0.01, a)


@given(alpha=st.floats(1e-3, PI / 2 - 1e-3), s=st.floats(0.0, 1.0))
def test_phi_t_round_trip(alpha, s):
    t = s * math.cos(alpha)
    phi = phi_of_t(t, alpha)
    assert phi == pytest.approx(np.angle(zeta(t, "+", alpha)), abs=1e-12)
    assert t_of_phi(phi, alpha) == pytest.approx(t, abs=1e-12)


@pytest.mark.parametrize("alpha", [PI / 12, PI / 6, PI / 5, PI / 4])
def test_sup_im_f2_closed_form(alpha):
    r = sup_im_f2(alpha)
    assert r.value == pytest.approx(0.5 * math.tan(alpha), rel=1e-15)
    assert r.t_star == pytest.approx(1 / (2 * math.cos(alpha)), rel=1e-15)
    t = np.linspace(0, math.cos(alpha), 200_001)
    grid = np.max((zeta(t, "+", alpha) ** 2).imag)
    assert abs(grid - r.value) <= 1e-8


def test_sup_im_f2_examples():
    assert sup_im_f2(PI / 4).value == pytest.approx(0.5)
    assert sup_im_f2(PI / 6).value == pytest.approx(0.2886751346)
    clamped = sup_im_f2(1.2)
    assert clamped.t_star == pytest.approx(math.cos(1.2))
    with pytest.raises(ValueError):
        sup_im_f2(0.0)


def test_im_sup_bound_value():
    # independent route: t from cot(alpha + phi) = (cos alpha - t)/sin alpha
    a, n = PI / 4, 100
    phi = PI / (2 * n)
    t = math.cos(a) - math.sin(a) / math.tan(a + phi)
    oracle = abs(complex(1 - t * math.cos(a), t * math.sin(a))) ** n
    assert im_sup_bound_fn(a, n) == pytest.approx(oracle, rel=1e-12)
    assert im_sup_bound_fn(a, n) == pytest.approx(0.2130184, abs=1e-7)


@pytest.mark.parametrize("alpha", [PI / 12, PI / 6, PI / 4])
def test_im_sup_bound_tends_to_limit(alpha):
    lim = asymptotic_limits(alpha).im_limit
    gaps = [abs(im_sup_bound_fn(alpha, n) - lim) for n in (64, 256, 1024, 4096)]
    assert all(b < a for a, b in zip(gaps, gaps[1:]))
    # first-order convergence: n * gap settles to a constant
    scaled = [n * g for n, g in zip((64, 256, 1024, 4096), gaps)]
    assert abs(scaled[-1] - scaled[-2]) <= 1e-2 * scaled[-1]


def test_asymptotic_limit_values():
    L = asymptotic_limits(PI / 4)
    assert L.im_limit == pytest.approx(0.2078796, abs=1e-7)
    assert L.re_limit == pytest.approx(-0.0432139, abs=1e-7)
    L6 = asymptotic_limits(PI / 6)
    assert L6.im_limit == pytest.approx(0.0658, abs=1e-4)
    assert L6.im_limit < sup_im_f2(PI / 6).value


@pytest.mark.parametrize("alpha", [PI / 12, PI / 6, PI / 4])
def test_scaled_limit_extrema_match_grid(alpha):
    lim = scaled_limit_extrema(alpha)
    grid = segment_power_extrema(alpha, 4096, points=400_001)
    assert grid.sup_im == pytest.approx(lim.sup_im, rel=2e-3)
    assert grid.min_re == pytest.approx(lim.min_re, rel=2e-2, abs=1e-6)


@pytest.mark.parametrize("alpha", [PI / 12, PI / 6, PI / 5, PI / 4])
def test_re_f2_lower_bound(alpha):
    t = np.linspace(0, math.cos(alpha), 100_001)
    assert np.min((zeta(t, "+", alpha) ** 2).real) >= -math.sin(alpha) - 1e-15


@pytest.mark.parametrize("alpha", [0.0, PI / 12, PI / 6, PI / 4])
def test_power_containment(alpha):
    r = verify_power_containment(alpha, 32, 2000)
    assert r.ok and r.worst_violation <= 1e-9


def test_smaller_angle_boundary_not_contained():
    z = DAlphaDomain(PI / 4).boundary(100)
    assert np.max(DAlphaDomain(PI / 12).distance(z)) > 0


@given(alpha=alphas, beta=alphas, z=points)
def test_nesting(alpha, beta, z):
    lo, hi = sorted((alpha, beta))
    if dalpha_contains(lo, z):
        assert dalpha_contains(hi, z, 1e-12)


@given(alpha=alphas, z1=points, z2=points, s=st.floats(0.0, 1.0))
def test_convexity(alpha, z1, z2, s):
    if dalpha_contains(alpha, z1) and dalpha_contains(alpha, z2):
        assert dalpha_contains(alpha, s * z1 + (1 - s) * z2, 1e-12)


@given(alpha=alphas, z=points)
def test_inside_closed_unit_disc(alpha, z):
    if dalpha_contains(alpha, z):
        assert abs(z) <= 1 + 1e-12


@given(alpha=alphas, z=points)
def test_kite_inside_domain(alpha, z):
    if GAlphaSubdomain(alpha).contains(z):
        assert dalpha_contains(alpha, z, 1e-12)


def test_kite_examples():
    G = GAlphaSubdomain(PI / 4)
    assert G.contains(0.5 + 0.1j)
    assert not G.contains(0.0)
    assert not G.contains(0.5 + 0.5j)
    assert not G.contains(-0.1)


@given(alpha=alphas, z=points)
def test_distance_zero_iff_member(alpha, z):
    d = dalpha_distance(alpha, z)
    assert d >= 0
    assert (d == 0) == dalpha_contains(alpha, z)
