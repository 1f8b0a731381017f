"""Error-controlled integration of non-autonomous systems, plus quadrature.

Every closed-form claim in the other modules is cross-validated against the
trajectories produced here, so the default tolerances are deliberately tight.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.integrate import quad, solve_ivp
from scipy.interpolate import CubicHermiteSpline, CubicSpline

from .errors import IntegrationError, QuadratureError

DEFAULT_ABS_TOL = 1e-10
DEFAULT_REL_TOL = 1e-10

# Pinney-type systems have a genuine singularity at x = 0; integration aborts
# (rather than clamps) once a guarded coordinate comes this close to it.
SINGULARITY_RADIUS = 1e-6


@dataclass(frozen=True)
class FrequencyProfile:
    """A time-dependent squared frequency omega^2(t) with a display label."""

    omega_squared: Callable[[float], float]
    description: str = "custom"

    def __call__(self, t):
        return float(self.omega_squared(t))


class Trajectory:
    """A sampled solution curve with dense-output interpolation.

    ``states`` has one row per sample time.  Dense evaluation snaps to the
    stored states at sample times and otherwise uses the attached interpolant
    (the solver's own dense output, or a cubic Hermite spline built from the
    stored derivatives).
    """

    def __init__(self, times, states, derivatives=None, interpolant=None):
        times = np.asarray(times, dtype=float)
        states = np.atleast_2d(np.asarray(states, dtype=float))
        if times.ndim != 1 or len(times) != len(states):
            raise ValueError("times and states must have matching lengths")
        if len(times) > 1 and not np.all(np.diff(times) > 0):
            raise ValueError("times must be strictly increasing")
        self.times = times
        self.states = states
        self.derivatives = (
            None if derivatives is None else np.atleast_2d(np.asarray(derivatives, float))
        )
        if interpolant is not None:
            self._interp = interpolant
        elif self.derivatives is not None:
            self._interp = CubicHermiteSpline(times, states, self.derivatives, axis=0)
        elif len(times) >= 4:
            self._interp = CubicSpline(times, states, axis=0)
        else:
            self._interp = None

    @property
    def dimension(self):
        return self.states.shape[1]

    @property
    def t0(self):
        return float(self.times[0])

    @property
    def t1(self):
        return float(self.times[-1])

    def dense(self, t):
        """State at time t; exact at sample times."""
        t_arr = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.empty((len(t_arr), self.dimension))
        idx = np.searchsorted(self.times, t_arr)
        for i, ti in enumerate(t_arr):
            j = idx[i]
            if j < len(self.times) and self.times[j] == ti:
                out[i] = self.states[j]
            elif self._interp is not None:
                out[i] = np.atleast_1d(self._interp(ti))
            else:
                raise ValueError("trajectory has no interpolant and t is off-sample")
        return out[0] if np.isscalar(t) or np.asarray(t).ndim == 0 else out

    def __call__(self, t):
        return self.dense(t)

    def component(self, i, t):
        return np.asarray(self.dense(t))[..., i]

    def position(self, t):
        return self.component(0, t)

    def velocity(self, t):
        return self.component(1, t)

    @property
    def initial_state(self):
        return self.states[0].copy()

    @property
    def final_state(self):
        return self.states[-1].copy()

    @classmethod
    def from_function(cls, f, times, derivative=None):
        """Sample a closed-form state map t -> R^n onto a grid."""
        times = np.asarray(times, dtype=float)
        states = np.array([np.atleast_1d(f(t)) for t in times], dtype=float)
        derivs = None
        if derivative is not None:
            derivs = np.array([np.atleast_1d(derivative(t)) for t in times], dtype=float)
        return cls(times, states, derivatives=derivs)


def integrate(rhs, y0, t_span, abs_tol=DEFAULT_ABS_TOL, rel_tol=DEFAULT_REL_TOL,
              singular_coords=(), singular_radius=SINGULARITY_RADIUS):
    """Adaptive embedded Runge-Kutta solve of y' = rhs(t, y) with dense output.

    ``singular_coords`` lists state indices whose approach within
    ``singular_radius`` of zero aborts the solve (Pinney-type 1/x^3 terms).
    Raises IntegrationError carrying the last good time on abort or failure.
    """
    y0 = np.atleast_1d(np.asarray(y0, dtype=float))
    t0, t1 = float(t_span[0]), float(t_span[1])
    if t0 == t1:
        raise ValueError("t_span must be nondegenerate")

    # Signed event pair per guarded coordinate: |y| - radius would be
    # positive on both sides of a fast zero crossing and the root finder
    # could step straight over it.
    events = []
    for i in list(singular_coords):
        def hit_above(t, y, _i=i):
            return y[_i] - singular_radius
        def hit_below(t, y, _i=i):
            return y[_i] + singular_radius
        hit_above.terminal = True
        hit_below.terminal = True
        events.extend([hit_above, hit_below])

    sol = solve_ivp(
        rhs, (t0, t1), y0, method="DOP853", dense_output=True,
        rtol=rel_tol, atol=abs_tol, events=events or None,
    )
    if sol.status == 1:
        raise IntegrationError(
            f"integration aborted near a singularity at t = {sol.t[-1]:.6g}",
            last_time=float(sol.t[-1]),
        )
    if not sol.success:
        last = float(sol.t[-1]) if len(sol.t) else t0
        raise IntegrationError(
            f"integration failed: {sol.message} (last good time {last:.6g})",
            last_time=last,
        )

    times, states = sol.t, sol.y.T
    if t1 < t0:  # keep Trajectory times increasing for reverse-time solves
        times, states = times[::-1], states[::-1]
    derivs = np.array([rhs(t, y) for t, y in zip(times, states)], dtype=float)

    def interp(t, _sol=sol):
        return _sol.sol(t)

    return Trajectory(times, states, derivatives=derivs, interpolant=interp)


def quadrature(f, t_span, tol=1e-12):
    """Error-controlled integral of f over t_span (estimated error <= tol)."""
    a, b = float(t_span[0]), float(t_span[1])

    def checked(t):
        try:
            v = float(f(t))
        except ArithmeticError:
            raise QuadratureError(
                f"integrand not evaluable at t = {t:.12g}", abscissa=t
            ) from None
        if not np.isfinite(v):
            raise QuadratureError(
                f"non-finite integrand sample at t = {t:.12g}", abscissa=t
            )
        return v

    if a == b:
        return 0.0
    value, err = quad(checked, a, b, epsabs=tol, epsrel=tol, limit=500)
    if err > max(tol, tol * abs(value)) * 10.0:
        raise QuadratureError(
            f"quadrature error estimate {err:.3e} exceeds tolerance {tol:.1e}"
        )
    return value


# --- frequency-profile library ------------------------------------------------

def constant_frequency(omega_squared=1.0):
    w2 = float(omega_squared)
    return FrequencyProfile(lambda t: w2, f"constant omega^2 = {w2:g}")


def two_plus_sin():
    """The smooth rough-test profile omega^2(t) = 2 + sin t."""
    return FrequencyProfile(lambda t: 2.0 + np.sin(t), "omega^2(t) = 2 + sin t")


def step_frequency(t_switch=5.0, before=1.0, after=4.0):
    b, a, ts = float(before), float(after), float(t_switch)
    return FrequencyProfile(
        lambda t: b if t < ts else a,
        f"step omega^2: {b:g} -> {a:g} at t = {ts:g}",
    )


FREQUENCY_PROFILES = {
    "constant": constant_frequency,
    "two_plus_sin": two_plus_sin,
    "step": step_frequency,
}
