"""Planar point-mass flight dynamics and the fixed-step integrator.

State conventions (SI units, radians):

    x      ground range, m
    y      altitude, m
    z      lateral offset, m (positive left of the x axis)
    v      airspeed, m/s
    theta  flight-path angle, rad (positive climbing)
    w      heading angle, rad (0 along +x; z grows when w < 0)
    n      realized normal load factor, g units

The load factor follows its command through a first-order lag; gravity and
drag act on speed; lift (n) acts only on the flight-path angle.  Scenarios
here are planar (w = 0, no lateral load), but the heading and lateral
equations are kept so the interceptor reachability tables generalize.

Equations of motion, vehicle:

    dv/dt     = -cx(M) rho(y) v^2 S / (2 m) - g sin(theta)
    dtheta/dt = (g / v) (n - cos(theta))
    dx/dt     = v cos(theta) cos(w)
    dz/dt     = -v cos(theta) sin(w)
    dy/dt     = v sin(theta)
    dn/dt     = (u - n) / lag_time
    dw/dt     = g n_lat / (v cos(theta))

The interceptor adds thrust along the velocity vector and a mass equation:

    dv/dt    = (thrust(t) - cx(M) rho(y) v^2 S / 2) / mass - g sin(theta)
    dmass/dt = -mass_flow(t)

Integration is classical fixed-step RK4 with the command held constant
across a step (zero-order hold).  ``integrate_until`` terminates on ground
impact (touchdown state linearly interpolated inside the final step), on a
caller-supplied stop event, or on timeout; timeout is a result, not an
error.  A non-finite state or a speed below ``SPEED_GUARD`` aborts the run
with :class:`~reentrysim.errors.IntegrationAbort`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import cos, exp, sin
from typing import Callable, NamedTuple, Sequence

from .aero import DragModel, vehicle_drag_model
from .atmosphere import DEFAULT_ATMOSPHERE, AtmosphereModel
from .errors import ConfigError, IntegrationAbort

G0 = 9.80665      # m/s^2
SPEED_GUARD = 1.0  # m/s; below this 1/v terms are treated as singular


@dataclass(frozen=True)
class VehicleState:
    t: float
    x: float
    y: float
    z: float
    v: float
    theta: float
    w: float = 0.0
    n: float = 0.0

    def as_vector(self) -> tuple:
        return (self.x, self.y, self.z, self.v, self.theta, self.w, self.n)

    @classmethod
    def from_vector(cls, t: float, vec: Sequence[float]) -> "VehicleState":
        return cls(t, *vec)


@dataclass(frozen=True)
class InterceptorState:
    t: float
    x: float
    y: float
    z: float
    v: float
    theta: float
    w: float
    n: float
    mass: float

    def as_vector(self) -> tuple:
        return (self.x, self.y, self.z, self.v, self.theta, self.w, self.n, self.mass)

    @classmethod
    def from_vector(cls, t: float, vec: Sequence[float]) -> "InterceptorState":
        return cls(t, *vec)


@dataclass(frozen=True)
class VehicleSpec:
    """Mass and aerodynamic description of the reentry vehicle.

    lift_to_drag is the quoted lifting quality of the airframe; the
    point-mass equations above do not consume it (load factor is commanded
    directly), it is recorded for reporting.
    """

    mass: float = 1500.0       # kg
    wing_area: float = 2.0     # m^2
    drag: DragModel = field(default_factory=vehicle_drag_model)
    lift_to_drag: float = 2.0
    lag_time: float = 1.0      # s, load-factor lag constant

    def __post_init__(self):
        if not self.mass > 0.0:
            raise ConfigError(f"mass must be > 0, got {self.mass}")
        if not self.wing_area > 0.0:
            raise ConfigError(f"wing_area must be > 0, got {self.wing_area}")
        if not self.lag_time > 0.0:
            raise ConfigError(f"lag_time must be > 0, got {self.lag_time}")


@dataclass(frozen=True)
class IntegratorConfig:
    dt: float = 0.02            # s
    t_max: float = 600.0        # s
    g: float = G0
    sample_interval: float = 10.0  # s between recorded trajectory rows

    def __post_init__(self):
        if not 0.0 < self.dt <= 1.0:
            raise ConfigError(f"dt must be in (0, 1] s, got {self.dt}")
        if not self.t_max > 0.0:
            raise ConfigError(f"t_max must be > 0, got {self.t_max}")
        if not self.g > 0.0:
            raise ConfigError(f"g must be > 0, got {self.g}")
        if not self.sample_interval >= self.dt:
            raise ConfigError("sample_interval must be >= dt")


class VehicleRates(NamedTuple):
    x: float
    y: float
    z: float
    v: float
    theta: float
    w: float
    n: float


class InterceptorRates(NamedTuple):
    x: float
    y: float
    z: float
    v: float
    theta: float
    w: float
    n: float
    mass: float


def vehicle_derivatives(
    state: VehicleState,
    u: float,
    spec: VehicleSpec,
    env: AtmosphereModel = DEFAULT_ATMOSPHERE,
    g: float = G0,
    n_lateral: float = 0.0,
) -> VehicleRates:
    """Time derivative of the vehicle state under commanded load factor u."""
    v = state.v
    if not v >= SPEED_GUARD:
        raise IntegrationAbort("speed below guard (1/v singular)", state.t, state.as_vector())
    rho = env.density(state.y)
    cx = spec.drag.cx(env.mach(v, state.y))
    drag_acc = cx * rho * v * v * spec.wing_area / (2.0 * spec.mass)
    st, ct = sin(state.theta), cos(state.theta)
    cw = cos(state.w)
    if n_lateral != 0.0:
        if abs(ct) < 1e-6:
            raise IntegrationAbort(
                "cos(theta) ~ 0 in heading equation", state.t, state.as_vector()
            )
        dw = g * n_lateral / (v * ct)
    else:
        dw = 0.0
    return VehicleRates(
        x=v * ct * cw,
        y=v * st,
        z=-v * ct * sin(state.w),
        v=-drag_acc - g * st,
        theta=(g / v) * (state.n - ct),
        w=dw,
        n=(u - state.n) / spec.lag_time,
    )


def make_vehicle_rhs(
    spec: VehicleSpec,
    env: AtmosphereModel = DEFAULT_ATMOSPHERE,
    g: float = G0,
) -> Callable:
    """Fast planar twin of :func:`vehicle_derivatives` for the step loop.

    Atmosphere and drag lookups are inlined over plain tuples; tests pin
    this closure against the readable implementation.
    """
    rho0 = env.rho0
    k_decay = env.k_decay
    branches = env.vs_branches
    segments = spec.drag.segments
    cx_floor = spec.drag.cx_floor
    mach_cap = spec.drag.mach_cap
    area_over_2m = spec.wing_area / (2.0 * spec.mass)
    inv_lag = 1.0 / spec.lag_time

    def rhs(t, y, u):
        x, h, z, v, theta, w, n = y
        if not v >= SPEED_GUARD:
            raise IntegrationAbort("speed below guard (1/v singular)", t, y)
        hc = h if h > 0.0 else 0.0
        rho = rho0 * exp(-k_decay * hc)
        h_km = hc * 0.001
        for lo, hi, base, slope, ref in branches:
            if lo <= h_km < hi:
                vs = base + slope * (h_km - ref)
                break
        m = v / vs
        if m > mach_cap:
            m = mach_cap
        for m_low, m_high, c2, c1, c0 in segments:
            if m_low <= m < m_high:
                cx = (c2 * m + c1) * m + c0
                if cx < cx_floor:
                    cx = cx_floor
                break
        st = sin(theta)
        ct = cos(theta)
        return (
            v * ct,
            v * st,
            0.0,
            -cx * rho * v * v * area_over_2m - g * st,
            (g / v) * (n - ct),
            0.0,
            (u - n) * inv_lag,
        )

    return rhs


def interceptor_derivatives(
    state: InterceptorState,
    u: float,
    spec,  # InterceptorSpec
    env: AtmosphereModel = DEFAULT_ATMOSPHERE,
    g: float = G0,
) -> InterceptorRates:
    """Time derivative of the interceptor state under commanded load factor u.

    ``t`` in the state is time since launch; the thrust schedule is indexed
    by it.  Thrust and flow are forced to zero once mass reaches burnout.
    """
    v = state.v
    if not v >= SPEED_GUARD:
        raise IntegrationAbort("speed below guard (1/v singular)", state.t, state.as_vector())
    thrust, flow = spec.thrust_and_flow(state.t)
    if state.mass <= spec.burnout_mass:
        thrust, flow = 0.0, 0.0
    rho = env.density(state.y)
    cx = spec.drag.cx(env.mach(v, state.y))
    drag = cx * rho * v * v * spec.wing_area / 2.0
    st, ct = sin(state.theta), cos(state.theta)
    return InterceptorRates(
        x=v * ct * cos(state.w),
        y=v * st,
        z=-v * ct * sin(state.w),
        v=(thrust - drag) / state.mass - g * st,
        theta=(g / v) * (state.n - ct),
        w=0.0,
        n=(u - state.n) / spec.lag_time,
        mass=-flow,
    )


def make_interceptor_rhs(spec, env: AtmosphereModel = DEFAULT_ATMOSPHERE, g: float = G0) -> Callable:
    """Fast planar twin of :func:`interceptor_derivatives`."""
    rho0 = env.rho0
    k_decay = env.k_decay
    branches = env.vs_branches
    segments = spec.drag.segments
    cx_floor = spec.drag.cx_floor
    mach_cap = spec.drag.mach_cap
    half_area = spec.wing_area / 2.0
    inv_lag = 1.0 / spec.lag_time
    stages = spec.stages
    burnout_mass = spec.burnout_mass

    def rhs(t, y, u):
        x, h, z, v, theta, w, n, mass = y
        if not v >= SPEED_GUARD:
            raise IntegrationAbort("speed below guard (1/v singular)", t, y)
        thrust = 0.0
        flow = 0.0
        if mass > burnout_mass:
            for t_start, t_end, stage_thrust, stage_flow in stages:
                if t_start <= t < t_end:
                    thrust = stage_thrust
                    flow = stage_flow
                    break
        hc = h if h > 0.0 else 0.0
        rho = rho0 * exp(-k_decay * hc)
        h_km = hc * 0.001
        for lo, hi, base, slope, ref in branches:
            if lo <= h_km < hi:
                vs = base + slope * (h_km - ref)
                break
        m = v / vs
        if m > mach_cap:
            m = mach_cap
        for m_low, m_high, c2, c1, c0 in segments:
            if m_low <= m < m_high:
                cx = (c2 * m + c1) * m + c0
                if cx < cx_floor:
                    cx = cx_floor
                break
        st = sin(theta)
        ct = cos(theta)
        return (
            v * ct,
            v * st,
            0.0,
            (thrust - cx * rho * v * v * half_area) / mass - g * st,
            (g / v) * (n - ct),
            0.0,
            (u - n) * inv_lag,
            -flow,
        )

    return rhs


def rk4_step(rhs: Callable, t: float, y: tuple, u: float, dt: float) -> tuple:
    """One classical RK4 step with the command u held constant."""
    h2 = 0.5 * dt
    k1 = rhs(t, y, u)
    k2 = rhs(t + h2, tuple(a + h2 * b for a, b in zip(y, k1)), u)
    k3 = rhs(t + h2, tuple(a + h2 * b for a, b in zip(y, k2)), u)
    k4 = rhs(t + dt, tuple(a + dt * b for a, b in zip(y, k3)), u)
    sixth = dt / 6.0
    out = tuple(
        a + sixth * (b + 2.0 * (c + d) + e) for a, b, c, d, e in zip(y, k1, k2, k3, k4)
    )
    total = 0.0
    for value in out:
        total += value
    if not math.isfinite(total):
        for stage, vec in (("k1", k1), ("k2", k2), ("k3", k3), ("k4", k4), ("y", out)):
            if not all(math.isfinite(value) for value in vec):
                raise IntegrationAbort(f"non-finite derivative ({stage})", t, vec)
        raise IntegrationAbort("non-finite state", t, out)  # pragma: no cover
    return out


class TrajectoryPoint(NamedTuple):
    t: float
    y: tuple
    u: float


@dataclass(frozen=True)
class Trajectory:
    samples: tuple          # TrajectoryPoint rows at the sample cadence plus terminal
    event: str              # "ground", "timeout" or a stop-event name
    event_t: float
    event_y: tuple
    steps: int


def integrate_until(
    rhs: Callable,
    control_fn: Callable,
    t0: float,
    y0: Sequence[float],
    config: IntegratorConfig,
    stop_events: Sequence = (),
    sample_interval: float | None = None,
) -> Trajectory:
    """Step from (t0, y0) until ground impact, a stop event, or timeout.

    control_fn(t, y) -> u is evaluated once per step and held across it.
    Ground impact (altitude component crossing 0 from above) interpolates
    the touchdown state linearly inside the final step; custom stop events
    are predicates (name, fn(t, y) -> bool) checked on each post-step
    state without interpolation.
    """
    dt = config.dt
    interval = config.sample_interval if sample_interval is None else sample_interval
    stride = max(1, round(interval / dt))
    n_max = max(1, math.ceil((config.t_max - t0) / dt - 1e-9))

    y = tuple(y0)
    samples = []
    step = 0
    while True:
        t = t0 + step * dt
        u = control_fn(t, y)
        if step % stride == 0:
            samples.append(TrajectoryPoint(t, y, u))
        y_next = rk4_step(rhs, t, y, u, dt)
        t_next = t0 + (step + 1) * dt
        if y_next[1] <= 0.0 and y[1] > 0.0:
            frac = y[1] / (y[1] - y_next[1])
            y_td = tuple(a + frac * (b - a) for a, b in zip(y, y_next))
            t_td = t + frac * dt
            samples.append(TrajectoryPoint(t_td, y_td, u))
            return Trajectory(tuple(samples), "ground", t_td, y_td, step + 1)
        for name, predicate in stop_events:
            if predicate(t_next, y_next):
                samples.append(TrajectoryPoint(t_next, y_next, u))
                return Trajectory(tuple(samples), name, t_next, y_next, step + 1)
        step += 1
        y = y_next
        if step >= n_max:
            samples.append(TrajectoryPoint(t_next, y_next, u))
            return Trajectory(tuple(samples), "timeout", t_next, y_next, step)


def specific_energy(y: float, v: float, g: float = G0) -> float:
    """Mechanical energy per unit mass: v^2 / 2 + g y."""
    return 0.5 * v * v + g * y
