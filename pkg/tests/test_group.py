import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from liesys import (DomainError, QuadratureError, Trajectory,
                    constant_frequency, integrate, milne_pinney,
                    oscillator_1d, two_plus_sin)
from liesys.group import (A1, A2, A3, IDENTITY, SL2Matrix, Sl2Vector, adjoint,
                          generator_by_finite_difference, linear_action,
                          particular_solution_curve, pinney_action,
                          reduce_oscillator, reduce_pinney_from_oscillator,
                          reduce_pinney_from_pinney, reduction_parameters,
                          sl2_exp, solve_group_equation, tau_grid,
                          tau_reparametrization)


def cos_trajectory(t_end=1.2, n=121):
    grid = np.linspace(0.0, t_end, n)
    return Trajectory.from_function(
        lambda t: np.array([math.cos(t), -math.sin(t)]), grid,
        lambda t: np.array([-math.sin(t), -math.cos(t)]))


def ones_trajectory(t_end=5.0, n=101):
    grid = np.linspace(0.0, t_end, n)
    return Trajectory.from_function(lambda t: np.array([1.0, 0.0]), grid,
                                    lambda t: np.array([0.0, 0.0]))


# --- algebra / group types ---------------------------------------------------

def test_basis_matrices():
    assert_allclose(A1, [[0, 0], [-1, 0]])
    assert_allclose(A2, [[0, -1], [0, 0]])
    assert_allclose(A3, [[-0.5, 0], [0, 0.5]])


def test_sl2vector_matrix_traceless_and_round_trip():
    v = Sl2Vector(0.3, -1.2, 0.7)
    m = v.matrix
    assert np.trace(m) == 0.0
    w = Sl2Vector.from_matrix(m)
    assert_allclose((w.c1, w.c2, w.c3), (v.c1, v.c2, v.c3), atol=1e-14)


def test_sl2matrix_rejects_bad_determinant():
    with pytest.raises(ValueError):
        SL2Matrix(np.array([[2.0, 0.0], [0.0, 1.0]]))


def test_sl2matrix_inverse():
    g = sl2_exp(Sl2Vector(0.4, -0.9, 0.2), 1.1)
    assert_allclose((g @ g.inverse()).array, np.eye(2), atol=1e-12)


# --- exponential -------------------------------------------------------------

def test_exp_elliptic_rotation():
    # k a1 - a2 with k = 1 generates the rotation one-parameter group
    v = Sl2Vector(1.0, -1.0, 0.0)
    for tau in (0.3, 1.0, 2.5):
        g = sl2_exp(v, tau)
        assert_allclose(g.array, [[math.cos(tau), math.sin(tau)],
                                  [-math.sin(tau), math.cos(tau)]], atol=1e-12)


def test_exp_parabolic_unipotent():
    g = sl2_exp(Sl2Vector(0.0, -1.0, 0.0), 1.7)
    assert_allclose(g.array, [[1.0, 1.7], [0.0, 1.0]], atol=1e-15)


def test_exp_at_zero_is_identity():
    assert_allclose(sl2_exp(Sl2Vector(0.6, 0.2, -0.4), 0.0).array, np.eye(2))


def test_exp_matches_ode_solve():
    rng = np.random.default_rng(0)
    for _ in range(20):
        v = Sl2Vector(*rng.uniform(-1.0, 1.0, size=3))
        s = rng.uniform(-2.0, 2.0)
        m = v.matrix

        def rhs(t, y):
            return (m @ y.reshape(2, 2)).ravel()

        traj = integrate(rhs, np.eye(2).ravel(), (0.0, s) if s > 0 else (0.0, s),
                         1e-12, 1e-12)
        ode = traj.dense(s).reshape(2, 2)
        assert_allclose(sl2_exp(v, s).array, ode, atol=1e-9)


def test_exp_continuous_across_parabolic_threshold():
    # tiny positive and negative determinants agree with the parabolic branch
    base = Sl2Vector(0.0, -1.0, 0.0)
    for eps in (1e-7, -1e-7):
        v = Sl2Vector(eps, -1.0, 0.0)  # det = eps
        assert_allclose(sl2_exp(v, 1.3).array, sl2_exp(base, 1.3).array,
                        atol=1e-6)


# --- adjoint -----------------------------------------------------------------

def test_adjoint_identity():
    v = Sl2Vector(0.5, -0.3, 0.8)
    w = adjoint(IDENTITY, v)
    assert_allclose((w.c1, w.c2, w.c3), (v.c1, v.c2, v.c3), atol=1e-15)


def test_adjoint_group_property():
    rng = np.random.default_rng(1)
    for _ in range(5):
        g = sl2_exp(Sl2Vector(*rng.uniform(-1, 1, size=3)), 0.8)
        v = Sl2Vector(*rng.uniform(-1, 1, size=3))
        w = adjoint(g, adjoint(g.inverse(), v))
        assert_allclose((w.c1, w.c2, w.c3), (v.c1, v.c2, v.c3), atol=1e-12)


def test_adjoint_stabilizes_own_generator():
    v = Sl2Vector(0.7, 0.2, -0.5)
    w = adjoint(sl2_exp(v, 1.4), v)
    assert_allclose((w.c1, w.c2, w.c3), (v.c1, v.c2, v.c3), atol=1e-10)


# --- group equation ----------------------------------------------------------

def test_group_solve_autonomous_equals_exp():
    v = Sl2Vector(0.6, -0.8, 0.3)
    sol = solve_group_equation(lambda t: v, (0.0, 2.0))
    for t in (0.5, 1.0, 2.0):
        assert_allclose(sol(t).array, sl2_exp(v, t).array, atol=1e-9)


def test_group_solve_reproduces_oscillator():
    for w in (constant_frequency(1.0), two_plus_sin()):
        sol = solve_group_equation(
            lambda t, w=w: Sl2Vector(w(t), -1.0, 0.0), (0.0, 10.0))
        osc = oscillator_1d(w)
        p0 = np.array([1.0, 0.0])
        ref = osc.integrate(p0, (0.0, 10.0))
        for t in np.linspace(0.0, 10.0, 26):
            assert_allclose(linear_action(sol(t), p0), ref.dense(t), atol=1e-6)
        assert sol.max_det_drift < 1e-9


# --- actions -----------------------------------------------------------------

def test_linear_action_rotation():
    g = SL2Matrix(np.array([[0.0, -1.0], [1.0, 0.0]]))
    assert_allclose(linear_action(g, (1.0, 0.0)), [0.0, 1.0])


def test_pinney_action_identity():
    res = pinney_action(IDENTITY, (2.0, 3.0), 1.0)
    assert res.x == pytest.approx(2.0, abs=1e-12)
    assert res.v_abs == pytest.approx(3.0, abs=1e-12)


def test_pinney_action_preserves_sign():
    rng = np.random.default_rng(2)
    for _ in range(200):
        g = sl2_exp(Sl2Vector(*rng.uniform(-1, 1, size=3)),
                    rng.uniform(-1.5, 1.5))
        x = rng.uniform(0.2, 2.0) * rng.choice([-1.0, 1.0])
        v = rng.uniform(-2.0, 2.0)
        try:
            res = pinney_action(g, (x, v), 1.0)
        except DomainError:
            continue
        assert math.copysign(1.0, res.x) == math.copysign(1.0, x)


def test_fundamental_fields_match_generators():
    osc = oscillator_1d(constant_frequency(1.0))
    mp = milne_pinney(constant_frequency(1.0), 1.0)
    basis = [Sl2Vector(1, 0, 0), Sl2Vector(0, 1, 0), Sl2Vector(0, 0, 1)]
    rng = np.random.default_rng(3)

    def apply_pinney(g, q):
        r = pinney_action(g, q, 1.0)
        return np.array([r.x, r.v_abs])

    for _ in range(20):
        p = rng.uniform(0.3, 2.0, size=2)  # x > 0, v > 0 chart
        for v, Xi, Li in zip(basis, osc.generators, mp.generators):
            fd = generator_by_finite_difference(linear_action, v, p)
            assert np.max(np.abs(fd - Xi(p))) < 1e-5
            fd = generator_by_finite_difference(apply_pinney, v, p)
            assert np.max(np.abs(fd - Li(p))) < 1e-5


# --- tau ---------------------------------------------------------------------

def test_tau_of_unit_solution():
    x1 = ones_trajectory()
    for t in (0.5, 2.0, 5.0):
        assert tau_reparametrization(x1, t) == pytest.approx(t, abs=1e-10)


def test_tau_of_cosine():
    x1 = cos_trajectory(1.3, 140)
    assert tau_reparametrization(x1, 1.2) == pytest.approx(math.tan(1.2),
                                                           abs=1e-8)


def test_tau_strictly_increasing():
    x1 = cos_trajectory()
    taus = tau_grid(x1)
    assert np.all(np.diff(taus) > 0)


def test_tau_rejects_vanishing_solution():
    grid = np.linspace(0.0, 3.0, 100)
    x1 = Trajectory.from_function(
        lambda t: np.array([math.cos(t), -math.sin(t)]), grid,
        lambda t: np.array([-math.sin(t), -math.cos(t)]))
    with pytest.raises(QuadratureError):
        tau_reparametrization(x1, 3.0)  # cos vanishes at pi/2


# --- particular solution curve -----------------------------------------------

def test_particular_curve_of_unit_solution():
    g1 = particular_solution_curve(ones_trajectory())
    assert_allclose(g1(2.0).array, np.eye(2), atol=1e-12)


def test_particular_curve_maps_unit_point_onto_solution():
    x1 = cos_trajectory()
    g1 = particular_solution_curve(x1)
    for t in (0.0, 0.4, 1.0):
        assert_allclose(linear_action(g1(t), (1.0, 0.0)), x1.dense(t),
                        atol=1e-12)
        assert g1(t).det == pytest.approx(1.0, abs=1e-14)


# --- reductions --------------------------------------------------------------

def test_reduce_oscillator_cos_to_sin():
    red = reduce_oscillator(cos_trajectory(), 0.0, 1.0)
    for t in np.linspace(0.0, 1.2, 13):
        assert float(red.position(t)) == pytest.approx(math.sin(t), abs=1e-8)


def test_reduce_oscillator_k_zero():
    red = reduce_oscillator(cos_trajectory(), 0.7, 0.0)
    for t in (0.2, 0.8):
        assert float(red.position(t)) == pytest.approx(0.7 * math.cos(t),
                                                       abs=1e-10)


def test_reduce_oscillator_vs_integration():
    osc = oscillator_1d(two_plus_sin())
    x1 = osc.integrate([1.0, 0.3], (0.0, 0.9))
    red = reduce_oscillator(x1, 0.4, 0.7)
    ref = osc.integrate(red.initial_state, (0.0, 0.9))
    for t in np.linspace(0.0, 0.9, 19):
        assert_allclose(red.dense(t), ref.dense(t), atol=1e-6)


def test_reduction_parameters_equilibrium():
    params = reduction_parameters(ones_trajectory(), 1.0, 0.0, 1.0)
    assert params.A == pytest.approx(1.0, abs=1e-12)
    assert params.B == pytest.approx(0.0, abs=1e-12)


def test_reduce_pinney_from_pinney_equilibrium():
    red = reduce_pinney_from_pinney(ones_trajectory(), 1.0, 0.0, 1.0)
    assert np.max(np.abs(red.states[:, 0] - 1.0)) < 1e-8


def test_reduce_pinney_from_pinney_vs_integration():
    mp = milne_pinney(constant_frequency(1.0), 1.0)
    x1 = mp.integrate([1.3, 0.2], (0.0, 5.0))
    for x0, v0 in [(1.0, 0.0), (0.8, 0.5)]:
        red = reduce_pinney_from_pinney(x1, x0, v0, 1.0)
        ref = mp.integrate([x0, v0], (0.0, 5.0))
        errs = [abs(float(red.position(t)) - float(ref.position(t)))
                / max(1.0, abs(float(ref.position(t))))
                for t in np.linspace(0, 5, 101)]
        assert max(errs) < 1e-5


def test_reduce_pinney_from_pinney_ode_residual():
    mp = milne_pinney(constant_frequency(1.0), 1.0)
    x1 = mp.integrate([1.3, 0.2], (0.0, 5.0))
    red = reduce_pinney_from_pinney(x1, 0.8, 0.5, 1.0)
    h = 1e-3
    for t in np.linspace(0.5, 4.5, 9):
        xm, x0, xp = (float(red.position(t + d)) for d in (-h, 0.0, h))
        second = (xp - 2 * x0 + xm) / h ** 2
        assert abs(second + x0 - 1.0 / x0 ** 3) < 1e-4


def test_reduce_pinney_from_pinney_needs_positive_k():
    with pytest.raises(DomainError):
        reduce_pinney_from_pinney(ones_trajectory(), 1.0, 0.0, -1.0)


def test_reduce_pinney_from_oscillator_equilibrium():
    # x1 = cos t with (x0, v0) = (1, 0) gives (A, B) = (1, 0) and
    # x = cos t * sqrt(1 + tan^2 t) = 1
    red = reduce_pinney_from_oscillator(cos_trajectory(), 1.0, 0.0, 1.0)
    assert np.max(np.abs(red.states[:, 0] - 1.0)) < 1e-8


def test_reduce_pinney_from_oscillator_initial_point():
    # at tau = 0 the closed form collapses to x(0) = A * x1(0)
    osc = oscillator_1d(constant_frequency(1.0))
    x1 = osc.integrate([1.0, 0.3], (0.0, 1.2))
    x0, v0 = 0.9, -0.2
    params = reduction_parameters(x1, x0, v0, 1.0)
    red = reduce_pinney_from_oscillator(x1, x0, v0, 1.0)
    assert float(red.position(0.0)) == pytest.approx(
        params.A * float(x1.position(0.0)), abs=1e-12)
    assert float(red.position(0.0)) == pytest.approx(x0, abs=1e-10)


def test_reduce_pinney_from_oscillator_vs_integration():
    osc = oscillator_1d(constant_frequency(1.0))
    mp = milne_pinney(constant_frequency(1.0), 1.0)
    x1 = osc.integrate([1.0, 0.3], (0.0, 1.2))
    for x0, v0 in [(0.9, -0.2), (1.5, 0.4)]:
        red = reduce_pinney_from_oscillator(x1, x0, v0, 1.0)
        ref = mp.integrate([x0, v0], (0.0, 1.2))
        errs = [abs(float(red.position(t)) - float(ref.position(t)))
                / max(1.0, abs(float(ref.position(t))))
                for t in np.linspace(0, 1.2, 49)]
        assert max(errs) < 1e-5
