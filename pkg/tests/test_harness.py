import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import complex_gaussian, random_hermitian
from quasisect.claims import diag_grid_with_maximizers
from quasisect.dalpha import dalpha_distance
from quasisect.errors import DegenerateFit
from quasisect.generators import MatrixGenSpec, euler_resolvent, gen_msectorial, semigroup_value
from quasisect.harness import (
    bound_ok,
    chernoff_error_curve,
    chernoff_exp,
    chernoff_family_check,
    chernoff_vector_bound,
    cn_one_minus_c,
    euler_error_curve,
    euler_power,
    fit_rate,
    power_of_two_grid,
)
from quasisect.matcore import op_norm
from quasisect.numrange import nr_boundary

PI = math.pi
GRID = power_of_two_grid(8, 1024)


def test_bound_ok_rule():
    assert bound_ok(1.0, 1.0)
    assert bound_ok(1.0 + 5e-9, 1.0)
    assert not bound_ok(1.0 + 1e-7, 1.0)
    assert bound_ok(1e-13, 0.0)
    assert not bound_ok(1e-11, 0.0)


def test_power_of_two_grid():
    assert GRID == [8, 16, 32, 64, 128, 256, 512, 1024]
    with pytest.raises(ValueError):
        power_of_two_grid(0, 4)


def test_euler_power_examples():
    assert np.array_equal(euler_power(np.zeros((3, 3)), 2.0, 7), np.eye(3))
    E = euler_power(np.array([[1.0]]), 1.0, 1)
    assert E[0, 0] == pytest.approx(0.5)
    assert abs(E[0, 0] - math.exp(-1)) == pytest.approx(0.1321206, abs=1e-7)
    with pytest.raises(ValueError):
        euler_power(np.eye(2), 1.0, 0)


def test_euler_power_scalar_monotone():
    ns = [2**k for k in range(11)]
    errs = [abs(euler_power(np.array([[1.0]]), 1.0, n)[0, 0] - math.exp(-1)) for n in ns]
    oracle = [abs((1 + 1 / n) ** (-n) - math.exp(-1)) for n in ns]
    assert np.allclose(errs, oracle, rtol=1e-9)
    assert all(b < a for a, b in zip(errs, errs[1:]))


def test_chernoff_exp_examples():
    assert np.allclose(chernoff_exp(np.eye(3), 5), np.eye(3), atol=1e-15)
    assert chernoff_exp(np.zeros((1, 1)), 2)[0, 0] == pytest.approx(0.1353353, abs=1e-7)
    x = np.linspace(0, 1, 33)
    assert np.allclose(np.diag(chernoff_exp(np.diag(x), 16)), np.exp(16 * (x - 1)), atol=1e-12, rtol=0)


def test_vector_bound_examples():
    r = chernoff_vector_bound(np.eye(2), [1.0, 0.0], 3)
    assert r.lhs == pytest.approx(0.0, abs=1e-15) and r.rhs == 0.0 and r.ok
    r = chernoff_vector_bound(np.diag([0.0, 1.0]), [1.0, 0.0], 4)
    assert r.lhs == pytest.approx(0.0183156, abs=1e-7)
    assert r.rhs == pytest.approx(2.0)
    assert r.ok


@given(seed=st.integers(0, 2**32), n=st.integers(1, 64), t=st.floats(0.05, 5.0))
def test_vector_bound_property(seed, n, t):
    A = gen_msectorial(MatrixGenSpec(6, PI / 4, seed))
    C = euler_resolvent(A, t)
    rng = np.random.default_rng(seed)
    u = complex_gaussian(rng, 6)
    assert chernoff_vector_bound(C, u / np.linalg.norm(u), n).ok


def test_cn_one_minus_c_diag_grid():
    n_max = 64
    x = diag_grid_with_maximizers(200, n_max)
    r = cn_one_minus_c(np.diag(x), n_max)
    oracle = np.array([(n / (n + 1)) ** n for n in range(1, n_max + 1)])
    assert r.scaled[0] == pytest.approx(0.5, abs=1e-15)
    assert np.allclose(r.scaled, oracle, rtol=1e-12)
    assert r.bounded and all(c.ok for c in r.checks)
    # tends to 1/e
    assert cn_one_minus_c(np.diag([512 / 513]), 512).scaled[-1] == pytest.approx(math.exp(-1), abs=1e-3)


def test_cn_one_minus_c_identity():
    r = cn_one_minus_c(np.eye(4), 8)
    assert all(c.lhs == 0.0 and c.ok for c in r.checks)
    assert r.k_emp == 0.0 and r.bounded


def test_cn_one_minus_c_semigroup(sectorial_pi4):
    r = cn_one_minus_c(semigroup_value(sectorial_pi4, 0.5), 64)
    assert math.isfinite(r.k_emp) and r.bounded


def test_fit_rate_examples():
    n = np.array(GRID, dtype=float)
    assert fit_rate(n, 3.0 / n).slope == pytest.approx(-1.0, abs=1e-10)
    assert fit_rate(n, 3.0 / n).logc == pytest.approx(math.log(3.0), abs=1e-10)
    assert fit_rate(n, 2.0 / np.sqrt(n)).slope == pytest.approx(-0.5, abs=1e-10)
    s = fit_rate(n, (1 + 0.1 / n) / n).slope
    assert -1.02 <= s <= -0.98


def test_fit_rate_noise_floor():
    n = np.array(GRID, dtype=float)
    e = 1.0 / n**4
    e[-3:] = 1e-13
    assert fit_rate(n, e).slope == pytest.approx(-4.0, abs=1e-10)
    with pytest.raises(DegenerateFit):
        fit_rate(n, np.full(len(n), 1e-13))
    with pytest.raises(DegenerateFit):
        fit_rate([1, 2, 3], [1.0, 0.5, 0.3])


@given(c=st.floats(1e-3, 1e3), p=st.floats(-3.0, 3.0))
def test_fit_rate_recovers_power_law(c, p):
    n = np.array(GRID, dtype=float)
    e = c * n**p
    if np.all(e > 1e-12):
        r = fit_rate(n, e)
        assert r.slope == pytest.approx(p, abs=1e-9)
        assert r.residual <= 1e-9


def test_euler_curve_scalar():
    r = euler_error_curve(np.array([[1.0]]), 1.0, GRID)
    assert -1.1 <= r.fitted_slope <= -0.9
    assert r.converged


def test_euler_curve_hermitian_oracle(rng):
    H = random_hermitian(rng, 12)
    A = H @ H
    r = euler_error_curve(A, 1.0, GRID)
    w = np.linalg.eigvalsh(A)
    oracle = [np.max(np.abs((1 + w / n) ** (-n) - np.exp(-w))) for n in GRID]
    assert np.allclose(r.errors, oracle, rtol=1e-8, atol=1e-13)
    assert -1.15 <= r.fitted_slope <= -0.85


@pytest.mark.parametrize("t", [0.1, 1.0, 10.0])
def test_euler_curve_sectorial(sectorial_pi4, t):
    r = euler_error_curve(sectorial_pi4, t, GRID)
    assert r.fitted_slope <= -0.8
    assert r.converged
    assert all(b <= a + 1e-12 for a, b in zip(r.errors, r.errors[1:]))


def test_euler_curve_degenerate():
    with pytest.raises(DegenerateFit):
        euler_error_curve(np.zeros((2, 2)), 1.0, GRID)
    r = euler_error_curve(np.zeros((2, 2)), 1.0, GRID, strict=False)
    assert math.isnan(r.fitted_slope) and max(r.errors) == 0.0


def test_bad_grid():
    with pytest.raises(ValueError):
        euler_error_curve(np.eye(2), 1.0, [8, 4, 16, 32])


def test_chernoff_curve_identity():
    r = chernoff_error_curve(np.eye(3), 1.0, GRID, strict=False)
    assert max(r.errors) <= 1e-15
    with pytest.raises(DegenerateFit):
        chernoff_error_curve(np.eye(3), 1.0, GRID)


def test_chernoff_curve_diag():
    x = np.linspace(0, 1, 200)
    r = chernoff_error_curve(np.diag(x), 1.0, GRID)
    assert r.fitted_slope <= -1 / 3
    assert r.extras["envelope_ok"]


def test_chernoff_curve_resolvent(sectorial_pi6):
    r = chernoff_error_curve(lambda t: euler_resolvent(sectorial_pi6, t), 0.3, GRID)
    assert r.extras["envelope_ok"] and r.extras["stable"]
    assert r.constant == pytest.approx(r.extras["M_emp"])
    d = r.as_dict()
    assert d["M_emp"] == r.constant and d["errors"] == list(r.errors)


def test_family_resolvent_matches_euler(sectorial_pi4):
    a = chernoff_family_check(lambda s: euler_resolvent(sectorial_pi4, s), sectorial_pi4, 1.0, GRID)
    b = euler_error_curve(sectorial_pi4, 1.0, GRID)
    assert np.max(np.abs(np.array(a.errors) - np.array(b.errors))) <= 1e-14


def test_family_semigroup_zero(sectorial_pi4):
    r = chernoff_family_check(lambda s: semigroup_value(sectorial_pi4, s), sectorial_pi4, 1.0, GRID, strict=False)
    assert max(r.errors) <= 1e-12


def test_family_half_steps(sectorial_pi4):
    def phi(s):
        F = euler_resolvent(sectorial_pi4, s / 2)
        return F @ F

    r = chernoff_family_check(phi, sectorial_pi4, 1.0, GRID)
    assert r.converged


@pytest.mark.parametrize("seed", range(5))
def test_contraction_preservation(seed):
    A = gen_msectorial(MatrixGenSpec(12, PI / 4, seed, scale=10.0))
    for t in (0.1, 1.0, 10.0):
        assert op_norm(semigroup_value(A, t)) <= 1 + 1e-9
        for n in (1, 7, 64):
            assert op_norm(euler_power(A, t, n)) <= 1 + 1e-9


@pytest.mark.parametrize("alpha", [PI / 12, PI / 6, PI / 4])
@pytest.mark.parametrize("t", [0.5, 2.0])
def test_euler_powers_quasi_sectorial(alpha, t):
    A = gen_msectorial(MatrixGenSpec(10, alpha, 77))
    for k in range(7):
        B = nr_boundary(euler_power(A, t, 2**k), 256)
        assert np.max(dalpha_distance(alpha, B.points)) <= 1e-8


@pytest.mark.parametrize("alpha", [PI / 12, PI / 6, PI / 4])
@pytest.mark.parametrize("seed", range(4))
def test_square_of_quasi_sectorial(alpha, seed):
    C = euler_resolvent(gen_msectorial(MatrixGenSpec(10, alpha, seed)), 0.5 + seed)
    assert np.max(dalpha_distance(alpha, nr_boundary(C, 256).points)) <= 1e-8
    assert np.max(dalpha_distance(alpha, nr_boundary(C @ C, 256).points)) <= 1e-8
