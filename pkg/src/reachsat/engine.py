"""Trial engine: condition generation, the tick loop, and Fitts-law fitting.

Conditions inject external speed-accuracy constraints into a cursor-reaching
loop: added display delay, rate-limited quantized target display, their
combination along T = (R-1)/8, or restricted angle-to-speed maps. The loop
is server-authoritative and deterministic: replaying a recorded input stream
reproduces the trial exactly.
"""

from __future__ import annotations

import bisect
import math
import time as _time
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Iterator, Literal, Sequence

import numpy as np

from .channel import DelayLine, QuantizerState, make_quantizer, quantize_step

SPEED_TICK = 0.01  # seconds per tick in speed-set conditions
BASE_TICK = 0.005  # seconds per tick in delay/quantization conditions
QUANT_INTERVAL = 0.35  # seconds between quantizer refinements
DEFAULT_HOLD = 0.5  # seconds the band must be held to end a trial
SCREEN_UNITS = 1000.0  # logical track width of the display

DELAY_LEVELS = tuple(k / 8 for k in range(6))
RATE_LEVELS = (1, 2, 3, 4, 5, 6)


@dataclass(frozen=True)
class SpeedMap:
    """Piecewise-constant angle (degrees) to speed (units/tick) map.

    Segment i covers thresholds[i-1] < angle <= thresholds[i]; angles above
    the last threshold take the last speed. A None angle means the wheel is
    released and maps to speed 0.
    """

    thresholds: tuple[float, ...]
    speeds: tuple[float, ...]

    def __post_init__(self):
        if len(self.speeds) != len(self.thresholds) + 1:
            raise ValueError("need exactly one more speed than thresholds")
        if any(b <= a for a, b in zip(self.thresholds, self.thresholds[1:])):
            raise ValueError("thresholds must be strictly increasing")

    def speed_for(self, angle: float | None) -> float:
        if angle is None:
            return 0.0
        return self.speeds[bisect.bisect_left(self.thresholds, angle)]

    def angle_for(self, speed: float) -> float | None:
        """A representative angle producing the requested speed (None for 0)."""
        if speed == 0.0:
            return None
        for i, s in enumerate(self.speeds):
            if s == speed:
                if i == 0:
                    return self.thresholds[0] - 15.0
                return self.thresholds[i - 1] + (
                    (self.thresholds[i] - self.thresholds[i - 1]) / 2
                    if i < len(self.thresholds)
                    else 15.0
                )
        raise ValueError(f"speed {speed} not produced by this map")

    @property
    def magnitudes(self) -> tuple[float, ...]:
        return tuple(sorted({abs(s) for s in self.speeds}))


SLOW_ONLY = SpeedMap((0.0,), (-2.5, 2.5))
FAST_ONLY = SpeedMap((0.0,), (-10.0, 10.0))
BOTH_SPEEDS = SpeedMap((-30.0, 0.0, 30.0), (-10.0, -2.5, 2.5, 10.0))
TWO_LEVEL = SpeedMap((-30.0, 0.0, 30.0), (-5.0, -2.5, 2.5, 5.0))

SPEED_MAPS = {
    "slow": SLOW_ONLY,
    "fast": FAST_ONLY,
    "both": BOTH_SPEEDS,
    "uniform": SLOW_ONLY,
    "two-level": TWO_LEVEL,
}

Variant = Literal["delay", "quantization", "combined", "speed"]


@dataclass(frozen=True)
class Condition:
    """One experimental condition: variant, injected constraint, geometry."""

    variant: Variant
    D: float
    W: float
    delay_s: float = 0.0
    rate: int | None = None
    speed_label: str = ""
    full_scale: float | None = None  # quantizer range; defaults to 2D

    def __post_init__(self):
        if self.D <= 0 or not (0 < self.W <= 2 * self.D):
            raise ValueError("geometry must satisfy D > 0, 0 < W <= 2D")
        if self.delay_s < 0:
            raise ValueError("delay must be non-negative")
        if self.variant in ("quantization", "combined"):
            if self.rate is None or self.rate < 1 or self.rate != int(self.rate):
                raise ValueError("quantized variants need an integer rate >= 1")
        if self.variant == "combined":
            if abs(self.delay_s - (self.rate - 1) / 8) > 1e-12:
                raise ValueError("combined variant requires delay = (rate-1)/8")
        if self.variant == "speed" and self.speed_label not in SPEED_MAPS:
            raise ValueError(f"unknown speed label {self.speed_label!r}")
        ticks = self.delay_s / self.tick
        if abs(ticks - round(ticks)) > 1e-9:
            raise ValueError("delay must be a whole number of ticks")

    @property
    def tick(self) -> float:
        return SPEED_TICK if self.variant == "speed" else BASE_TICK

    @property
    def delay_ticks(self) -> int:
        return round(self.delay_s / self.tick)

    @property
    def interval_ticks(self) -> int:
        """Ticks per quantizer refinement interval."""
        return round(QUANT_INTERVAL / self.tick)

    @property
    def quantized(self) -> bool:
        return self.variant in ("quantization", "combined")

    @property
    def speed_map(self) -> SpeedMap | None:
        return SPEED_MAPS[self.speed_label] if self.variant == "speed" else None

    @property
    def difficulty(self) -> float:
        return math.log2(2 * self.D / self.W)

    @property
    def label(self) -> str:
        if self.variant == "delay":
            return f"delay:{self.delay_s:g}s"
        if self.variant == "quantization":
            return f"quant:R{self.rate}"
        if self.variant == "combined":
            return f"combined:R{self.rate}"
        return f"speed:{self.speed_label}"

    def to_dict(self) -> dict:
        return {
            "variant": self.variant,
            "D": self.D,
            "W": self.W,
            "delay_s": self.delay_s,
            "rate": self.rate,
            "speed_label": self.speed_label,
            "full_scale": self.full_scale,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Condition":
        return cls(**data)


@dataclass(frozen=True)
class DisplayFrame:
    """What the subject sees at one tick: cursor position and gray zone."""

    tick: int
    cursor: float
    zone: tuple[float, float]


@dataclass(frozen=True)
class TickSample:
    """Recorded loop state after one tick's input was applied."""

    tick: int
    value: float | None  # raw input: angle (speed variant) or position command
    pos: float
    shown_cursor: float
    zone: tuple[float, float]


@dataclass
class TrialRecord:
    """Full log of one trial plus its reach-and-stay outcome."""

    condition: Condition
    d: float
    hold_s: float
    max_time: float = 60.0
    samples: list[TickSample] = field(default_factory=list)
    t_r: float | None = None  # seconds; band-entry time of the final hold
    t_r_ticks: int | None = None
    censored: bool = False
    status: str = "ok"
    started_at: float = 0.0

    @property
    def difficulty(self) -> float:
        return self.condition.difficulty


def worst_case_target(D: float, W: float, rate: int) -> float:
    """A target the quantizer cannot resolve faster than ceil(F/R) intervals.

    Sits at 3/4 of the last finest cell: outside W/2 of every coarser cell
    centre but within W/2 of its own.
    """
    n_star = max(1, math.ceil(math.log2(2 * D / W) / rate - 1e-9))
    width = 2 * D * 2 ** (-n_star * rate)
    return D - 0.25 * width


class TrialLoop:
    """Incremental, server-authoritative tick loop for one trial.

    Call display() for the current frame, then advance(input) exactly once
    per tick. The display path carries the condition's injected delay and
    quantization; the plant itself is never altered by them.
    """

    def __init__(
        self,
        cond: Condition,
        d: float | None = None,
        hold_s: float = DEFAULT_HOLD,
        max_time: float = 60.0,
    ):
        self.cond = cond
        if d is None:
            if cond.quantized:
                d = worst_case_target(cond.D, cond.W, cond.rate)
            else:
                d = cond.D
        if abs(d) > cond.D:
            raise ValueError("|d| must not exceed D")
        self.d = d
        self.hold_s = hold_s
        self.hold_ticks = max(1, round(hold_s / cond.tick))
        self.max_ticks = round(max_time / cond.tick)

        self.t = 0
        self.pos = 0.0
        self._entry: int | None = None
        self.record = TrialRecord(
            condition=cond, d=d, hold_s=hold_s, max_time=max_time,
            started_at=_time.time(),
        )
        self.done = False

        if cond.quantized:
            scale = cond.full_scale or 2 * cond.D
            self._quant: QuantizerState | None = make_quantizer(scale, cond.rate)
            self._zone = (self._quant.lo, self._quant.hi)
        else:
            self._quant = None
            self._zone = (d - cond.W / 2, d + cond.W / 2)
        self._delay = DelayLine(cond.delay_ticks, fill=(0.0, self._zone))
        self._frame = self._push_frame()

    def _push_frame(self) -> DisplayFrame:
        cursor, zone = self._delay.push((self.pos, self._zone))
        return DisplayFrame(tick=self.t, cursor=cursor, zone=zone)

    def display(self) -> DisplayFrame:
        return self._frame

    def _in_band(self) -> bool:
        return abs(self.pos - self.d) <= self.cond.W / 2

    def advance(self, value: float | None) -> TickSample:
        """Apply one tick of input and advance the loop."""
        if self.done:
            raise RuntimeError("trial already finished")
        cond = self.cond
        if cond.variant == "speed":
            self.pos += cond.speed_map.speed_for(value)
        else:
            if value is not None:
                self.pos = float(value)
        sample = TickSample(
            tick=self.t,
            value=value,
            pos=self.pos,
            shown_cursor=self._frame.cursor,
            zone=self._frame.zone,
        )
        self.record.samples.append(sample)

        if self._in_band():
            if self._entry is None:
                self._entry = self.t
            if self.t - self._entry + 1 >= self.hold_ticks:
                self._finish(entry=self._entry)
        else:
            self._entry = None

        if not self.done:
            self.t += 1
            if self.t > self.max_ticks:
                self._timeout()
            else:
                if (
                    self._quant is not None
                    and self.t % cond.interval_ticks == 0
                ):
                    self._quant = quantize_step(self._quant, self.d)
                    self._zone = (self._quant.lo, self._quant.hi)
                self._frame = self._push_frame()
        return sample

    def _finish(self, entry: int) -> None:
        self.record.t_r_ticks = entry
        self.record.t_r = entry * self.cond.tick
        self.record.status = "ok"
        self.done = True

    def _timeout(self) -> None:
        self.record.censored = True
        self.record.status = "timeout"
        self.done = True

    def invalidate(self) -> None:
        self.record.status = "invalid"
        self.record.censored = True
        self.done = True


Agent = Callable[[DisplayFrame], float | None]


def run_trial(
    cond: Condition,
    inputs: Agent | Iterable[float | None],
    d: float | None = None,
    hold_s: float = DEFAULT_HOLD,
    max_time: float = 60.0,
) -> TrialRecord:
    """Run one trial to completion with a reactive agent or an input stream.

    An agent is called with each display frame; a stream yields one value per
    tick. A stream that ends before the trial does invalidates the trial
    (missing ticks), matching the live loop's treatment of a dead client.
    """
    loop = TrialLoop(cond, d=d, hold_s=hold_s, max_time=max_time)
    if callable(inputs):
        while not loop.done:
            loop.advance(inputs(loop.display()))
    else:
        it: Iterator = iter(inputs)
        while not loop.done:
            try:
                value = next(it)
            except StopIteration:
                loop.invalidate()
                break
            loop.advance(value)
    return loop.record


@dataclass(frozen=True)
class FittsFit:
    """Least-squares line T_r = intercept + slope * F over per-F mean times."""

    intercept: float
    slope: float
    r_squared: float

    def predict(self, difficulty: float) -> float:
        return self.intercept + self.slope * difficulty


def fit_fitts(records: Sequence[TrialRecord]) -> FittsFit:
    """Fit mean reach time against index of difficulty.

    Censored/invalid trials are excluded; at least two distinct difficulty
    values are required.
    """
    by_f: dict[float, list[float]] = {}
    for r in records:
        if r.t_r is None:
            continue
        by_f.setdefault(round(r.difficulty, 12), []).append(r.t_r)
    if len(by_f) < 2:
        raise ValueError("need trials at two or more distinct difficulties")
    fs = np.array(sorted(by_f))
    means = np.array([np.mean(by_f[f]) for f in fs])
    slope, intercept = np.polyfit(fs, means, 1)
    pred = intercept + slope * fs
    ss_res = float(np.sum((means - pred) ** 2))
    ss_tot = float(np.sum((means - means.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return FittsFit(intercept=float(intercept), slope=float(slope), r_squared=r2)


def estimate_internal_delay(records: Sequence[TrialRecord]) -> float:
    """Baseline internal delay: minimum reach time over baseline trials."""
    times = [r.t_r for r in records if r.t_r is not None]
    if not times:
        raise ValueError("no completed baseline trials")
    return min(times)


DIVERSITY1_GEOMETRY = ((4.0, 1.0), (8.0, 2.0), (12.0, 3.0), (16.0, 4.0))
DIVERSITY2_WIDTHS = (1.0, 2.0, 3.0, 4.0)

FAMILIES = ("delay", "quantization", "combined", "diversity1", "diversity2")


def condition_schedule(settings: dict) -> list[Condition]:
    """Expand an experiment family into an ordered per-trial condition list.

    settings: family (required), trials per condition (default 50), geometry
    (D, W) for the injected-constraint families (default (4, 1)), optional
    shuffle with a seed.
    """
    family = settings.get("family")
    trials = int(settings.get("trials", 50))
    D, W = settings.get("geometry", (4.0, 1.0))
    if trials < 1:
        raise ValueError("trials must be >= 1")

    conds: list[Condition] = []
    if family == "delay":
        conds = [
            Condition("delay", D=D, W=W, delay_s=t) for t in DELAY_LEVELS
        ]
    elif family == "quantization":
        conds = [
            Condition("quantization", D=D, W=W, rate=r) for r in RATE_LEVELS
        ]
    elif family == "combined":
        conds = [
            Condition("combined", D=D, W=W, rate=r, delay_s=(r - 1) / 8)
            for r in RATE_LEVELS
        ]
    elif family == "diversity1":
        conds = [
            Condition("speed", D=d_, W=w_, speed_label=lbl)
            for lbl in ("slow", "fast", "both")
            for d_, w_ in DIVERSITY1_GEOMETRY
        ]
    elif family == "diversity2":
        conds = [
            Condition("speed", D=12.0, W=w_, speed_label=lbl)
            for lbl in ("uniform", "two-level")
            for w_ in DIVERSITY2_WIDTHS
        ]
    else:
        raise ValueError(f"unknown experiment family {family!r}")

    schedule = [c for c in conds for _ in range(trials)]
    if settings.get("shuffle"):
        rng = np.random.default_rng(settings.get("seed"))
        schedule = [schedule[i] for i in rng.permutation(len(schedule))]
    return schedule
