"""Discrete-time error dynamics of the reaching loop.

The plant is the one-step integrator x(t+1) = x(t) + w(t) + u(t), driven by
a one-shot disturbance of size d (the signed target distance) and a control
stream. Reaching time is measured reach-and-stay: the earliest tick after
which the error never leaves the half-width band again within the recorded
horizon.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class ErrorState:
    """Error-loop state: tick index and signed error in screen units."""

    t: int
    x: float

    def __post_init__(self):
        if self.t < 0:
            raise ValueError(f"tick must be non-negative, got {self.t}")


@dataclass(frozen=True)
class ReachTask:
    """A reaching task: target of width W at signed distance d, |d| <= D.

    The index of difficulty F = log2(2D/W) is the number of bits needed to
    single out the target interval among the disjoint W-wide intervals
    tiling [-D, D].
    """

    D: float
    W: float
    d: float | None = None  # None: the extreme target d = D

    def __post_init__(self):
        if self.D <= 0:
            raise ValueError("D must be positive")
        if not (0 < self.W <= 2 * self.D):
            raise ValueError("W must satisfy 0 < W <= 2D")
        if self.d is None:
            object.__setattr__(self, "d", self.D)
        if abs(self.d) > self.D:
            raise ValueError("|d| must not exceed D")

    @property
    def difficulty(self) -> float:
        """Index of difficulty in bits: log2(2D/W)."""
        return math.log2(2 * self.D / self.W)

    @property
    def band(self) -> tuple[float, float]:
        """Target interval [d - W/2, d + W/2] in origin-relative coordinates."""
        return (self.d - self.W / 2, self.d + self.W / 2)

    def in_band(self, x: float) -> bool:
        """Whether an error value lies inside the target half-width band."""
        return abs(x) <= self.W / 2


@dataclass
class Trajectory:
    """An ordered error trajectory with its task and tick duration."""

    states: list[ErrorState] = field(default_factory=list)
    task: ReachTask | None = None
    interval: float = 1.0  # seconds per tick

    def __post_init__(self):
        for a, b in zip(self.states, self.states[1:]):
            if b.t != a.t + 1:
                raise ValueError("consecutive states must differ by one tick")

    def __len__(self) -> int:
        return len(self.states)

    @property
    def errors(self) -> list[float]:
        return [s.x for s in self.states]

    def append(self, state: ErrorState) -> None:
        if self.states and state.t != self.states[-1].t + 1:
            raise ValueError("consecutive states must differ by one tick")
        self.states.append(state)


def step(state: ErrorState, w: float = 0.0, u: float = 0.0) -> ErrorState:
    """Advance the error dynamics one tick: x' = x + w + u."""
    return ErrorState(t=state.t + 1, x=state.x + w + u)


def disturbance_trajectory(d: float, n_ticks: int) -> Trajectory:
    """Iterate the plant with w = d at t=0 and no control: x(t) = d for t >= 1."""
    traj = Trajectory([ErrorState(0, 0.0)])
    s = step(traj.states[0], w=d)
    traj.append(s)
    for _ in range(n_ticks - 1):
        s = step(s)
        traj.append(s)
    return traj


def reaching_time(traj: Trajectory, task: ReachTask) -> int | None:
    """Reach-and-stay time in ticks.

    Returns the earliest tick tau such that |x(t)| <= W/2 for every recorded
    t >= tau, or None if the final state is outside the band (the band is
    never terminally held). A transient entry that is later exited does not
    count.
    """
    if not traj.states:
        raise ValueError("trajectory is empty")
    half = task.W / 2
    tau = None
    for s in reversed(traj.states):
        if abs(s.x) <= half:
            tau = s.t
        else:
            break
    return tau
