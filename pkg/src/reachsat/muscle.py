"""Motor-unit activation dynamics and size-ordered recruitment.

Each motor unit has a steady-state strength F in (0, 1) and first-order
activation dynamics

    da/dt = rise_rate * drive**p * (1 - a) - decay_rate * a,    force = a**q

with defaults rise_rate = decay_rate = p = 1, q = 3. The drive constant
f = 1 / ((1/F)**(1/q) - 1) is chosen so a held step drive converges to
force F. Units within a muscle are recruited in ascending order of
strength, so at steady state the muscle produces one of m+1 discrete
force levels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

RISE_RATE = 1.0
DECAY_RATE = 1.0
DRIVE_EXPONENT = 1.0  # p
FORCE_EXPONENT = 3.0  # q


def drive_constant(strength: float, q: float = FORCE_EXPONENT) -> float:
    """f = 1 / ((1/F)^(1/q) - 1); the step drive that saturates force at F."""
    if not 0 < strength < 1:
        raise ValueError("strength must lie in (0, 1)")
    return 1.0 / ((1.0 / strength) ** (1.0 / q) - 1.0)


def rise_rate_of(strength: float, q: float = FORCE_EXPONENT) -> float:
    """Activation rate constant f + 1 under step drive; increasing in strength."""
    return drive_constant(strength, q) + 1.0


@dataclass(frozen=True)
class MotorUnit:
    """One motor unit: strength, current activation, and recruitment flag."""

    strength: float
    activation: float = 0.0
    recruited: bool = False

    def __post_init__(self):
        if not 0 < self.strength < 1:
            raise ValueError("strength must lie in (0, 1)")
        if not 0 <= self.activation < 1:
            raise ValueError("activation must lie in [0, 1)")

    @property
    def drive(self) -> float:
        """Current drive: the unit's drive constant while recruited, else 0."""
        return drive_constant(self.strength) if self.recruited else 0.0

    def force(self, q: float = FORCE_EXPONENT) -> float:
        return self.activation**q


@dataclass(frozen=True)
class MuscleSpec:
    """A muscle: motor units in ascending strength order plus ODE constants."""

    units: tuple[MotorUnit, ...]
    rise_rate: float = RISE_RATE
    decay_rate: float = DECAY_RATE
    p: float = DRIVE_EXPONENT
    q: float = FORCE_EXPONENT

    def __post_init__(self):
        strengths = [u.strength for u in self.units]
        if strengths != sorted(strengths):
            raise ValueError("units must be ordered by ascending strength")

    @property
    def max_strength(self) -> float:
        """Maximum steady force: the sum of unit strengths."""
        return sum(u.strength for u in self.units)

    def total_force(self) -> float:
        return sum(u.force(self.q) for u in self.units)


def muscle(*strengths: float) -> MuscleSpec:
    """Build a muscle from unit strengths (any order; sorted ascending)."""
    return MuscleSpec(tuple(MotorUnit(s) for s in sorted(strengths)))


def _activation_rhs(a: float, drive: float, rise: float, decay: float, p: float) -> float:
    return rise * drive**p * (1.0 - a) - decay * a


def integrate_activation(
    unit: MotorUnit,
    dt: float,
    drive: float,
    rise_rate: float = RISE_RATE,
    decay_rate: float = DECAY_RATE,
    p: float = DRIVE_EXPONENT,
) -> MotorUnit:
    """Advance one fixed RK4 step of the activation ODE.

    The dynamics are linear in a, so RK4 at dt = 1e-3 tracks the analytic
    solution to well below 1e-8.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if drive < 0:
        raise ValueError("drive must be non-negative")
    a = unit.activation
    k1 = _activation_rhs(a, drive, rise_rate, decay_rate, p)
    k2 = _activation_rhs(a + dt / 2 * k1, drive, rise_rate, decay_rate, p)
    k3 = _activation_rhs(a + dt / 2 * k2, drive, rise_rate, decay_rate, p)
    k4 = _activation_rhs(a + dt * k3, drive, rise_rate, decay_rate, p)
    a_new = a + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    # The continuous dynamics keep a in [0, 1) for bounded drive; clamp only
    # the integrator's last-ulp excursions.
    a_new = min(max(a_new, 0.0), math.nextafter(1.0, 0.0))
    return replace(unit, activation=a_new)


def recruit(spec: MuscleSpec, n: int) -> MuscleSpec:
    """Drive the n weakest units and release the rest (size principle)."""
    if not 0 <= n <= len(spec.units):
        raise ValueError(f"recruit count must be in [0, {len(spec.units)}]")
    units = tuple(
        replace(u, recruited=(i < n)) for i, u in enumerate(spec.units)
    )
    return replace(spec, units=units)


def advance(spec: MuscleSpec, dt: float, steps: int = 1) -> MuscleSpec:
    """Integrate every unit's activation forward by steps * dt."""
    units = list(spec.units)
    for _ in range(steps):
        units = [
            integrate_activation(
                u, dt, u.drive, spec.rise_rate, spec.decay_rate, spec.p
            )
            for u in units
        ]
    return replace(spec, units=tuple(units))


def steady_activation(strength: float, q: float = FORCE_EXPONENT) -> float:
    """Fixed point of the activation ODE under the unit's step drive: F^(1/q)."""
    return strength ** (1.0 / q)


def step_activation(strength: float, t: float, q: float = FORCE_EXPONENT) -> float:
    """Closed-form activation under step drive from rest: a_inf*(1 - e^(-(f+1)t))."""
    if t <= 0:
        return 0.0
    rate = rise_rate_of(strength, q)
    return steady_activation(strength, q) * (1.0 - math.exp(-rate * t))


def unit_force(strength: float, release_time: float, t: float, q: float = FORCE_EXPONENT) -> float:
    """Closed-form force of a unit recruited at t=0 and released at release_time.

    Rise follows the step-drive solution; after release the activation decays
    as e^(-(t - release_time)), so force decays as its q-th power.
    """
    if t <= 0 or release_time <= 0:
        return 0.0
    if t <= release_time:
        a = step_activation(strength, t, q)
    else:
        a = step_activation(strength, release_time, q) * math.exp(-(t - release_time))
    return a**q
