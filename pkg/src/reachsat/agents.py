"""Scripted agents: deterministic stand-ins for human subjects.

The bisection agent tracks the displayed gray zone's centre (optimal for
delay/quantization conditions); the speed planner searches the reachable
position lattice for the shortest hold-able path under a speed map.
"""

from __future__ import annotations

from collections import deque

from .engine import Condition, DisplayFrame, SpeedMap


def bisection_agent():
    """Agent commanding the centre of the displayed zone each tick."""

    def agent(frame: DisplayFrame) -> float:
        lo, hi = frame.zone
        return (lo + hi) / 2

    return agent


def plan_speed_moves(
    speed_map: SpeedMap,
    d: float,
    W: float,
    max_ticks: int = 400,
) -> list[float] | None:
    """Shortest per-tick speed sequence from 0 into the target band, or None.

    Breadth-first search over the positions reachable with the map's speeds;
    a position inside [d - W/2, d + W/2] is a goal since speed 0 (wheel
    released) holds it indefinitely. None means the band is unreachable on
    the speed lattice (e.g. every magnitude overshoots the band).
    """
    speeds = sorted({s for s in speed_map.speeds}, key=abs)
    half = W / 2
    limit = abs(d) + max(abs(s) for s in speeds) + half

    def key(pos: float) -> int:
        return round(pos * 1e6)

    start = 0.0
    if abs(start - d) <= half:
        return []
    seen = {key(start)}
    queue = deque([(start, [])])
    while queue:
        pos, moves = queue.popleft()
        if len(moves) >= max_ticks:
            continue
        for s in speeds:
            if s == 0.0:
                continue
            nxt = pos + s
            if abs(nxt) > limit:
                continue
            k = key(nxt)
            if k in seen:
                continue
            seen.add(k)
            path = moves + [s]
            if abs(nxt - d) <= half:
                return path
            queue.append((nxt, path))
    return None


def speed_agent(cond: Condition, d: float | None = None):
    """Optimal scripted agent for a speed condition.

    Replays the planned move sequence as wheel angles, then releases the
    wheel to hold. If no plan exists the agent steps toward the target at
    the smallest magnitude forever, so the trial times out (censored).
    """
    if cond.variant != "speed":
        raise ValueError("speed_agent only drives speed conditions")
    target = cond.D if d is None else d
    smap = cond.speed_map
    plan = plan_speed_moves(smap, target, cond.W)
    state = {"i": 0, "pos": 0.0}

    def agent(frame: DisplayFrame) -> float | None:
        if plan is not None:
            i = state["i"]
            if i < len(plan):
                state["i"] = i + 1
                return smap.angle_for(plan[i])
            return None
        # No feasible hold: keep nudging toward the target centre.
        err = target - state["pos"]
        if err == 0:
            return None
        mags = smap.magnitudes
        speed = mags[0] if err > 0 else -mags[0]
        state["pos"] += speed
        return smap.angle_for(speed)

    return agent


def plan_feasible(cond: Condition, d: float | None = None) -> bool:
    """Whether the condition's speed map can reach and hold the band at all."""
    target = cond.D if d is None else d
    return plan_speed_moves(cond.speed_map, target, cond.W) is not None
