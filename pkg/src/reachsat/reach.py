"""Friction-coupled reaching driven by motor-unit forces.

A point mass starts at rest under Coulomb friction: it moves only once the
summed motor-unit force exceeds the static threshold, decelerates against
the kinetic magnitude while moving, and sticks again when velocity returns
to zero with insufficient force. Sweeping contraction durations over a grid
traces the achievable (distance, time) frontier for a muscle configuration.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .muscle import (
    FORCE_EXPONENT,
    MuscleSpec,
    muscle,
    rise_rate_of,
    steady_activation,
    unit_force,
)

DEFAULT_DT = 1e-3
STOP_TIME_TOL = 1e-6
# Durations used throughout: 0.75 to 14.75 in steps of 0.5.
DEFAULT_GRID = tuple(0.75 + 0.5 * k for k in range(29))


@dataclass(frozen=True)
class FrictionSpec:
    """Static threshold and kinetic magnitude, with h_k <= h_s."""

    static: float
    kinetic: float

    def __post_init__(self):
        if self.static <= 0 or self.kinetic <= 0:
            raise ValueError("friction magnitudes must be positive")
        if self.kinetic > self.static:
            raise ValueError("kinetic friction must not exceed the static threshold")


@dataclass(frozen=True)
class ReachPlan:
    """Per-unit contraction durations; all units recruit at t = 0."""

    durations: tuple[float, ...]

    def __post_init__(self):
        if any(d < 0 for d in self.durations):
            raise ValueError("durations must be non-negative")


@dataclass(frozen=True)
class FrontierPoint:
    """One achievable (distance, stop time) pair and the plan producing it."""

    distance: float
    stop_time: float | None
    plan: ReachPlan

    @property
    def moved(self) -> bool:
        return self.stop_time is not None


def _plan_force(strengths, durations, t: float, q: float = FORCE_EXPONENT) -> float:
    return sum(unit_force(s, tau, t, q) for s, tau in zip(strengths, durations))


def _force_grid(strengths: np.ndarray, releases: np.ndarray, t: float, q: float) -> np.ndarray:
    """Force of each (unit, release duration) pair at time t; shape of releases."""
    rates = np.array([rise_rate_of(s, q) for s in strengths])[:, None]
    a_inf = np.array([steady_activation(s, q) for s in strengths])[:, None]
    rel = releases[None, :]
    if t <= 0:
        return np.zeros((len(strengths), releases.size))
    t_rise = np.minimum(t, rel)
    a = a_inf * (1.0 - np.exp(-rates * t_rise))
    decay = np.exp(-np.maximum(t - rel, 0.0))
    return (a * decay) ** q


def _rk4_step(x, v, a0, a_half, a1, h):
    """One RK4 step of (x' = v, v' = a(t)); acceleration depends on time only."""
    k1v = a0
    k2v = a_half
    k3v = a_half
    k4v = a1
    k1x = v
    k2x = v + h / 2 * k1v
    k3x = v + h / 2 * k2v
    k4x = v + h * k3v
    v_new = v + h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v)
    x_new = x + h / 6 * (k1x + 2 * k2x + 2 * k3x + k4x)
    return x_new, v_new


def _locate_stop(force_at, x, v, t, dt, kinetic):
    """Bisect the sub-step length at which velocity crosses zero.

    Returns (x, t) at the located stop; the bracket is [0, dt] with v(0) >= 0
    and v(dt) <= 0, refined to STOP_TIME_TOL time units.
    """
    lo, hi = 0.0, dt

    def v_at(h):
        if h == 0.0:
            return x, v
        a0 = force_at(t) - kinetic
        ah = force_at(t + h / 2) - kinetic
        a1 = force_at(t + h) - kinetic
        return _rk4_step(x, v, a0, ah, a1, h)

    while hi - lo > STOP_TIME_TOL:
        mid = (lo + hi) / 2
        _, vm = v_at(mid)
        if vm > 0:
            lo = mid
        else:
            hi = mid
    x_stop, _ = v_at(hi)
    return x_stop, t + hi


def simulate_reach(
    spec: MuscleSpec,
    plan: ReachPlan,
    friction: FrictionSpec,
    dt: float = DEFAULT_DT,
    horizon: float = 30.0,
) -> FrontierPoint:
    """Integrate one plan to its final stop.

    Returns the stop position and time; a plan whose force never breaks the
    static threshold reports distance 0 with no stop time.
    """
    if len(plan.durations) != len(spec.units):
        raise ValueError("plan must give one duration per unit")
    strengths = [u.strength for u in spec.units]
    q = spec.q

    def force_at(t):
        return _plan_force(strengths, plan.durations, t, q)

    release_max = max(plan.durations) if plan.durations else 0.0
    t_end = release_max + horizon
    t, x, v = 0.0, 0.0, 0.0
    moving = False
    stop_time = None

    while t < t_end:
        f = force_at(t)
        if not moving:
            if f > friction.static:
                moving = True
            elif t >= release_max:
                break  # all units released and force below threshold: final
            else:
                t += dt
                continue
        a0 = f - friction.kinetic
        ah = force_at(t + dt / 2) - friction.kinetic
        a1 = force_at(t + dt) - friction.kinetic
        x_new, v_new = _rk4_step(x, v, a0, ah, a1, dt)
        if v_new <= 0 and v >= 0 and not (v == 0 and v_new == 0):
            x, stop_time = _locate_stop(force_at, x, v, t, dt, friction.kinetic)
            v = 0.0
            moving = False
            t = stop_time
            # Re-align to the step grid to keep scalar and batch runs close.
            t = math.ceil(t / dt - 1e-12) * dt
        else:
            x, v = x_new, v_new
            t += dt

    return FrontierPoint(distance=x, stop_time=stop_time, plan=plan)


def _simulate_batch(strengths, idx, grid, friction, dt, q, horizon=30.0):
    """Integrate every plan in lockstep on a shared time grid.

    idx has shape (n_plans, m): per-plan indices into the duration grid.
    Returns (distance, stop_time) arrays; stop_time is NaN for plans that
    never move. Semantics mirror simulate_reach step for step.
    """
    strengths = np.asarray(strengths, dtype=float)
    grid = np.asarray(grid, dtype=float)
    idx = np.asarray(idx, dtype=np.int64)
    n, m = idx.shape
    releases = grid[idx]  # (n, m)
    release_max = releases.max(axis=1)
    cols = np.arange(m)

    def gather(t):
        c = _force_grid(strengths, grid, t, q)  # (m, n_grid)
        return c[cols[None, :], idx].sum(axis=1)

    x = np.zeros(n)
    v = np.zeros(n)
    moving = np.zeros(n, dtype=bool)
    done = np.zeros(n, dtype=bool)
    stop_time = np.full(n, np.nan)

    t = 0.0
    t_end = release_max.max() + horizon
    h_s, h_k = friction.static, friction.kinetic

    while t < t_end and not done.all():
        f0 = gather(t)
        resting = ~moving & ~done
        done |= resting & (t >= release_max) & (f0 <= h_s)
        moving |= resting & ~done & (f0 > h_s)
        if moving.any():
            fh = gather(t + dt / 2)
            f1 = gather(t + dt)
            x_new, v_new = _rk4_step(x, v, f0 - h_k, fh - h_k, f1 - h_k, dt)
            crossed = moving & (v_new <= 0) & (v >= 0) & ~((v == 0) & (v_new == 0))
            advance = moving & ~crossed
            x = np.where(advance, x_new, x)
            v = np.where(advance, v_new, v)
            for i in np.flatnonzero(crossed):
                rel_i = releases[i]

                def force_at(tt, rel=rel_i):
                    return _plan_force(strengths, rel, tt, q)

                x[i], stop_time[i] = _locate_stop(
                    force_at, x[i], v[i], t, dt, h_k
                )
                v[i] = 0.0
            moving &= ~crossed
        t += dt

    return x, stop_time


def frontier(
    spec: MuscleSpec,
    grid=DEFAULT_GRID,
    friction: FrictionSpec = FrictionSpec(0.6, 0.54),
    dt: float = DEFAULT_DT,
) -> list[FrontierPoint]:
    """All achievable (distance, time) pairs over the duration grid.

    Enumerates every combination of per-unit durations (len(grid)**m plans)
    in deterministic product order.
    """
    m = len(spec.units)
    strengths = [u.strength for u in spec.units]
    grid = tuple(grid)
    combos = list(itertools.product(range(len(grid)), repeat=m))
    idx = np.array(combos, dtype=np.int64).reshape(len(combos), m)
    dist, stop = _simulate_batch(strengths, idx, grid, friction, dt, spec.q)
    points = []
    for k, combo in enumerate(combos):
        plan = ReachPlan(tuple(grid[j] for j in combo))
        st = None if math.isnan(stop[k]) else float(stop[k])
        points.append(FrontierPoint(distance=float(dist[k]), stop_time=st, plan=plan))
    return points


def two_muscle_frontier(
    strengths,
    grid=DEFAULT_GRID,
    friction: FrictionSpec = FrictionSpec(0.6, 0.54),
    dt: float = DEFAULT_DT,
) -> list[FrontierPoint]:
    """Frontier where the actuators are whole muscles recruited independently.

    Under this plan model (everything recruits at t=0, releases are free per
    actuator) the dynamics coincide with the motor-unit frontier for the
    same strengths.
    """
    return frontier(muscle(*strengths), grid=grid, friction=friction, dt=dt)


def min_time_for(points: list[FrontierPoint], D: float, W: float) -> float | None:
    """Fastest stop time among points landing within W/2 of distance D."""
    times = [
        p.stop_time
        for p in points
        if p.moved and abs(p.distance - D) <= W / 2
    ]
    return min(times) if times else None


def sat_curve(
    spec: MuscleSpec,
    grid,
    friction: FrictionSpec,
    D_list,
    W_list,
    dt: float = DEFAULT_DT,
) -> list[tuple[float, float, float, float | None]]:
    """Speed-accuracy curve rows (D, W, W/D, min reach time or None).

    Evaluated over the cartesian product of D_list and W_list against the
    muscle's frontier; None marks unreachable geometry.
    """
    points = frontier(spec, grid=grid, friction=friction, dt=dt)
    rows = []
    for D in D_list:
        for W in W_list:
            rows.append((D, W, W / D, min_time_for(points, D, W)))
    return rows
