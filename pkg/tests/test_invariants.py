import io
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from liesys import (SingularityError, Trajectory, angular_momentum,
                    constant_frequency, drift, ermakov,
                    ermakov_pair_invariants, generalized_ermakov,
                    generalized_invariant, lewis_ermakov, milne_pinney,
                    oscillator_1d, oscillator_2d, pinney_triple,
                    quadratic_shapes, two_plus_sin, zero_one_shapes)


# --- pointwise formulas ------------------------------------------------------

def test_angular_momentum_values():
    assert angular_momentum(1.0, 0.0, 0.0, 1.0) == 1.0
    assert angular_momentum(0.7, -0.3, 0.7, -0.3) == 0.0


def test_lewis_ermakov_values():
    assert lewis_ermakov(0.0, 1.0, 1.0, 0.0) == 1.0
    assert lewis_ermakov(1.0, 1.0, 0.0, 0.0) == 1.0


def test_lewis_ermakov_singular_at_y_zero():
    with pytest.raises(SingularityError):
        lewis_ermakov(1.0, 0.0, 0.0, 0.0)


def test_pair_invariants_at_t_zero():
    # x = 1, y = sin t, z = cos t at t = 0, layout (x, y, z, vx, vy, vz)
    i1, i2, w = ermakov_pair_invariants((1.0, 0.0, 1.0, 0.0, 1.0, 0.0), 1.0)
    assert i1 == pytest.approx(0.5)
    assert i2 == pytest.approx(0.5)
    assert w == pytest.approx(-1.0)


def test_pair_invariants_k_zero_degeneration():
    state = (1.3, 0.4, -0.8, 0.2, 0.9, -0.5)
    i1, _, _ = ermakov_pair_invariants(state, 0.0)
    x, y, _, vx, vy, _ = state
    assert i1 == pytest.approx(0.5 * (y * vx - x * vy) ** 2)


def test_pair_invariants_singular_at_x_zero():
    with pytest.raises(SingularityError):
        ermakov_pair_invariants((0.0, 1.0, 1.0, 0.0, 0.0, 0.0), 1.0)


def test_generalized_invariant_at_reference():
    # u = x/y = 1 and zero angular part: empty integral
    val = generalized_invariant(1.0, 1.0, 0.0, 0.0, quadratic_shapes())
    assert val == pytest.approx(0.0, abs=1e-14)


def test_generalized_reduces_to_lewis():
    rng = np.random.default_rng(0)
    shapes = zero_one_shapes()
    for _ in range(20):
        x, y = rng.uniform(0.3, 2.0, size=2)
        vx, vy = rng.uniform(-1.5, 1.5, size=2)
        gi = generalized_invariant(x, y, vx, vy, shapes)
        assert gi == pytest.approx(0.5 * lewis_ermakov(x, y, vx, vy) - 0.5,
                                   abs=1e-10)


# --- constancy along flows ---------------------------------------------------

def test_lewis_constant_on_analytic_pair():
    # oscillator x = sin t paired with the Pinney equilibrium y = 1
    osc = oscillator_1d(constant_frequency(1.0))
    mp = milne_pinney(constant_frequency(1.0), 1.0)
    tx = osc.integrate([0.0, 1.0], (0.0, 10.0))
    ty = mp.integrate([1.0, 0.0], (0.0, 10.0))
    series = drift([tx, ty], lambda s: lewis_ermakov(s[0], s[2], s[1], s[3]),
                   "psi")
    assert_allclose(series.values, 1.0, atol=1e-8)
    assert series.drift_rel < 1e-8


def test_angular_momentum_drift():
    sysd = oscillator_2d(two_plus_sin())
    traj = sysd.integrate([1.0, 0.0, 0.0, 1.0], (0.0, 10.0))
    series = drift(traj, lambda s: angular_momentum(s[0], s[1], s[2], s[3]),
                   "xi")
    assert series.drift_rel < 1e-8


def test_pair_invariants_drift():
    sysd = pinney_triple(two_plus_sin(), 1.0)
    traj = sysd.integrate([0.7, 1.0, 0.0, 0.4, 0.0, 1.0], (0.0, 20.0))
    for idx in range(3):
        series = drift(traj, lambda s, i=idx: ermakov_pair_invariants(s, 1.0)[i],
                       f"inv{idx}")
        assert series.drift_rel < 1e-6


def test_generalized_invariant_drift():
    shapes = quadratic_shapes()
    sysd = generalized_ermakov(two_plus_sin(), shapes)
    traj = sysd.integrate([1.1, 0.2, 0.9, -0.1], (0.0, 20.0))
    series = drift(traj, lambda s: generalized_invariant(s[0], s[2], s[1], s[3],
                                                         shapes), "gen")
    assert series.drift_rel < 1e-6


def test_drift_constant_function():
    traj = oscillator_1d(two_plus_sin()).integrate([1.0, 0.0], (0.0, 5.0))
    series = drift(traj, lambda s: 3.25, "const")
    assert series.drift_abs == 0.0


def test_drift_partial_on_singularity():
    # y = 1 - t hits zero exactly at the t = 1 sample: the series truncates
    times = np.linspace(0.0, 2.0, 81)
    traj = Trajectory.from_function(
        lambda t: np.array([math.sin(t), math.cos(t), 1.0 - t, -1.0]), times)
    series = drift(traj, lambda s: lewis_ermakov(s[0], s[2], s[1], s[3]), "psi")
    assert series.partial
    assert series.times[-1] < 2.0


def test_directional_derivative_vanishes():
    """The defining property: each invariant is annihilated by every
    generator of its system (checked as a finite-difference directional
    derivative of the invariant along the field)."""
    h = 1e-5
    rng = np.random.default_rng(7)
    cases = [
        (ermakov(constant_frequency(1.0)),
         lambda s: lewis_ermakov(s[0], s[2], s[1], s[3])),
        (pinney_triple(constant_frequency(1.0), 1.0),
         lambda s: ermakov_pair_invariants(s, 1.0)[0]),
        (pinney_triple(constant_frequency(1.0), 1.0),
         lambda s: ermakov_pair_invariants(s, 1.0)[2]),
        (oscillator_2d(constant_frequency(1.0)),
         lambda s: angular_momentum(s[0], s[1], s[2], s[3])),
        (generalized_ermakov(constant_frequency(1.0), quadratic_shapes()),
         lambda s: generalized_invariant(s[0], s[2], s[1], s[3],
                                         quadratic_shapes())),
    ]
    for sysd, inv in cases:
        for p in sysd.sample_domain(rng, 20, low=-1.5, high=1.5, guard=0.3):
            for X in sysd.generators:
                v = X(p)
                # fourth-order stencil keeps the truncation error well below
                # the tolerance even near the domain guard
                deriv = (-inv(p + 2 * h * v) + 8 * inv(p + h * v)
                         - 8 * inv(p - h * v) + inv(p - 2 * h * v)) / (12 * h)
                assert abs(deriv) < 1e-6, (sysd.name, X.name, p)


# --- series export -----------------------------------------------------------

def test_invariant_series_csv():
    traj = oscillator_1d(constant_frequency(1.0)).integrate([1.0, 0.0],
                                                            (0.0, 2.0))
    series = drift(traj, lambda s: s[0] ** 2 + s[1] ** 2, "energy")
    buf = io.StringIO()
    series.write_csv(buf)
    lines = buf.getvalue().strip().splitlines()
    assert lines[0] == "time,value,running_drift"
    assert len(lines) == len(series.times) + 1
    first = lines[1].split(",")
    assert float(first[0]) == series.times[0]
