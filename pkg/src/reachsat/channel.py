"""Delay lines and rate-limited quantized feedback.

The quantizer refines an uncertainty interval by R bits per sampling
interval; the bisection controller recentres the cursor on the interval
as the refinements arrive, delayed by the loop's total delay. Its
worst-case reach-and-stay time meets the lower bound T + F/R within one
tick (T + ceil(F/R) exactly).
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, replace

import numpy as np

from .dynamics import ErrorState, ReachTask, Trajectory, reaching_time

# Ticks the oracle keeps simulating after the target is pinned, so the
# recorded trajectory demonstrates reach-and-stay rather than reach-and-end.
_HOLD_TICKS = 3


@dataclass(frozen=True)
class ChannelSpec:
    """Feedback-loop constraints: delays, data rate, and tick duration.

    Delays are in ticks and R in bits per sampling interval. The delayed
    simulation requires integer delays and integer R >= 1; the continuous
    bound accepts any positive R.
    """

    signal_delay: float = 0.0  # T_s
    internal_delay: float = 0.0  # T_i
    rate: float = 1.0  # R
    interval: float = 1.0  # seconds per tick

    def __post_init__(self):
        if self.signal_delay < 0 or self.internal_delay < 0:
            raise ValueError("delays must be non-negative")
        if self.rate <= 0:
            raise ValueError("rate must be positive")
        if self.interval <= 0:
            raise ValueError("interval must be positive")

    @property
    def total_delay(self) -> float:
        """T = T_s + T_i."""
        return self.signal_delay + self.internal_delay

    def _integer_loop(self) -> tuple[int, int]:
        """Validated (total delay, rate) for tick-level simulation."""
        T = self.total_delay
        if T != int(T):
            raise ValueError("simulation requires an integer total delay in ticks")
        if self.rate != int(self.rate) or self.rate < 1:
            raise ValueError("simulation requires an integer rate >= 1")
        return int(T), int(self.rate)


class DelayLine:
    """FIFO delay of a fixed number of ticks, emitting a fill value early.

    Output at tick t equals the input at tick t - delay; the first `delay`
    outputs are the fill value.
    """

    def __init__(self, delay: int, fill=0.0):
        if delay < 0 or delay != int(delay):
            raise ValueError("delay must be a non-negative integer")
        self.delay = int(delay)
        self._queue = deque([fill] * self.delay)

    def push(self, value):
        """Insert this tick's input and return the delayed output."""
        self._queue.append(value)
        return self._queue.popleft()


@dataclass(frozen=True)
class QuantizerState:
    """Uncertainty interval [lo, hi] after n refinements of rate bits each.

    The interval width is full_scale * 2**(-n*rate) by construction, and the
    true target stays inside it.
    """

    lo: float
    hi: float
    full_scale: float
    rate: int
    n: int = 0

    def __post_init__(self):
        if self.full_scale <= 0:
            raise ValueError("full_scale must be positive")
        if self.rate < 1 or self.rate != int(self.rate):
            raise ValueError("rate must be a positive integer")
        if self.hi <= self.lo:
            raise ValueError("empty uncertainty interval")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def center(self) -> float:
        return (self.lo + self.hi) / 2


def make_quantizer(full_scale: float, rate: int, lo: float | None = None) -> QuantizerState:
    """Fresh quantizer over [lo, lo + full_scale] (default centred on 0)."""
    if lo is None:
        lo = -full_scale / 2
    return QuantizerState(lo=lo, hi=lo + full_scale, full_scale=full_scale, rate=int(rate))


def quantize_step(q: QuantizerState, target: float) -> QuantizerState:
    """Refine the interval by one sampling interval (rate bits).

    Splits [lo, hi] into 2**rate equal cells and returns the cell containing
    the target. Cells are half-open [lo, lo+w) except the last, which is
    closed, so boundary ties resolve deterministically.
    """
    if not (q.lo <= target <= q.hi):
        raise ValueError(
            f"target {target} outside uncertainty interval [{q.lo}, {q.hi}]"
        )
    cells = 2 ** q.rate
    w = q.width / cells
    idx = min(int((target - q.lo) / w), cells - 1)
    lo = q.lo + idx * w
    return replace(q, lo=lo, hi=lo + w, n=q.n + 1)


def bound(task: ReachTask, chan: ChannelSpec) -> float:
    """Continuous lower bound on worst-case reaching time: T + F/R."""
    return chan.total_delay + task.difficulty / chan.rate


def refinement_steps(task: ReachTask, chan: ChannelSpec) -> int:
    """Sampling intervals needed to pin the target: ceil(F/R)."""
    _, rate = chan._integer_loop()
    # Guard against float fuzz when F is an exact multiple of R.
    return max(0, math.ceil(task.difficulty / rate - 1e-9))


def oracle_controller(task: ReachTask, chan: ChannelSpec) -> Trajectory:
    """Simulate the bisection controller on the task's actual disturbance.

    Each sampling interval the sensor side refines the uncertainty interval
    by R bits; the control recentres the cursor on the refinement made T
    ticks earlier. The recorded error is x(t) = d - center(t - T).
    """
    T, rate = chan._integer_loop()
    n_star = refinement_steps(task, chan)
    q = make_quantizer(full_scale=2 * task.D, rate=rate)
    centers = [q.center]
    for _ in range(n_star):
        q = quantize_step(q, task.d)
        centers.append(q.center)

    horizon = T + n_star + _HOLD_TICKS
    states = []
    for t in range(horizon + 1):
        n = min(max(0, t - T), n_star)
        states.append(ErrorState(t, task.d - centers[n]))
    return Trajectory(states, task=task, interval=chan.interval)


def oracle_reach_time(task: ReachTask, chan: ChannelSpec) -> int:
    """Ticks until the oracle's command stream has pinned the target: T + ceil(F/R).

    This counts decision time plus loop delay; a lucky disturbance may enter
    the band earlier on the simulated trajectory (see worst_case_reach_time).
    """
    T, _ = chan._integer_loop()
    return T + refinement_steps(task, chan)


def sweep_targets(D: float, W: float, chan: ChannelSpec) -> np.ndarray:
    """Adversarial target positions: off-centre points of every finest cell.

    Sweeps all cells at the final refinement depth, sampled at 1/4 and 3/4 of
    the cell width so some target sits more than W/2 from the coarser cell
    centres while all remain within W/2 of their own cell centre.
    """
    _, rate = chan._integer_loop()
    n_star = refinement_steps(ReachTask(D=D, W=W, d=0.0), chan)
    cells = 2 ** (n_star * rate)
    w = 2 * D / cells
    edges = -D + w * np.arange(cells)
    return np.concatenate([edges + 0.25 * w, edges + 0.75 * w])


def worst_case_reach_time(D: float, W: float, chan: ChannelSpec) -> int:
    """Max reach-and-stay time of the bisection controller over swept targets.

    For F >= 1 this equals T + ceil(F/R) exactly. For the degenerate F = 0
    task no target can leave the band, so the loop delay T is returned: the
    time until the first (trivial) control decision lands.
    """
    T, rate = chan._integer_loop()
    task0 = ReachTask(D=D, W=W, d=0.0)
    n_star = refinement_steps(task0, chan)
    if n_star == 0:
        return T

    ds = sweep_targets(D, W, chan)
    half = W / 2
    # Vectorised interval refinement over all targets at once.
    lo = np.full_like(ds, -D)
    width = 2.0 * D
    cells = 2 ** rate
    last_violation = 0 if np.any(np.abs(ds) > half) else -1
    for k in range(1, n_star + 1):
        w = width / cells
        idx = np.clip(((ds - lo) / w).astype(np.int64), 0, cells - 1)
        lo = lo + idx * w
        width = w
        centres = lo + w / 2
        if np.any(np.abs(ds - centres) > half):
            last_violation = k
    if last_violation < 0:
        return 0
    # Violations at refinement k are displayed at tick T + k; ticks 0..T
    # show the unrefined error. Reach-and-stay starts one tick later.
    return T + last_violation + 1
