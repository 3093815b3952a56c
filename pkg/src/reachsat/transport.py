"""Diversity sweet spots in transportation: piecewise travel-time model.

A mode of speed s can end a leg anywhere within its resolution e of the
intended waypoint; a task with tolerance E is met by a mode iff e <= E.
Combining a fast coarse mode with finer slow ones keeps travel time scaling
with the fastest speed while the finest mode supplies the accuracy.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class TransportMode:
    """One means of transport: speed and terminal resolution."""

    speed: float
    resolution: float

    def __post_init__(self):
        if self.speed <= 0 or self.resolution <= 0:
            raise ValueError("speed and resolution must be positive")


@dataclass(frozen=True)
class TravelPlan:
    """Modes used fastest-first, with switch count and time bounds."""

    modes: tuple[TransportMode, ...]
    distance: float
    switch_loss: float

    @property
    def switches(self) -> int:
        return len(self.modes) - 1

    @property
    def lower(self) -> float:
        """Best case: every handoff leaves zero residual."""
        return self.distance / self.modes[0].speed + self.switches * self.switch_loss

    @property
    def upper(self) -> float:
        """Worst case: each leg leaves the full resolution of its mode."""
        t = self.distance / self.modes[0].speed + self.switches * self.switch_loss
        for prev, mode in zip(self.modes, self.modes[1:]):
            t += prev.resolution / mode.speed
        return t


def uniform_time(mode: TransportMode, distance: float, tolerance: float) -> float | None:
    """Travel time D/s with a single mode, or None if it cannot meet E."""
    if distance <= 0:
        raise ValueError("distance must be positive")
    if mode.resolution > tolerance:
        return None
    return distance / mode.speed


def plan_diverse(
    modes, distance: float, tolerance: float, switch_loss: float = 0.0
) -> TravelPlan | None:
    """Greedy coarse-to-fine plan: fastest mode first, refine until e <= E.

    Returns None when no mode meets the tolerance.
    """
    if distance <= 0:
        raise ValueError("distance must be positive")
    ordered = sorted(modes, key=lambda m: -m.speed)
    used = []
    for mode in ordered:
        used.append(mode)
        if mode.resolution <= tolerance:
            return TravelPlan(tuple(used), distance, switch_loss)
    return None


def diverse_time(
    modes, distance: float, tolerance: float, switch_loss: float = 0.0
) -> tuple[float, float] | None:
    """(lower, upper) travel-time bounds for the diverse plan, or None."""
    plan = plan_diverse(modes, distance, tolerance, switch_loss)
    if plan is None:
        return None
    return plan.lower, plan.upper
