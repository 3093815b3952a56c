"""Session persistence: append-only line-delimited trial logs and replay.

Layout of a session directory:

    config.json     session settings used to build the schedule
    schedule.json   expanded per-trial conditions
    trials.jsonl    tick batches and one summary object per trial

trials.jsonl objects (one JSON object per line):

    {"type": "ticks", "trial": i, "samples": [[tick, value, pos,
        shown_cursor, zone_lo, zone_hi], ...]}          # batches of <=200
    {"type": "summary", "trial": i, "condition": {...}, "d": ..., "W": ...,
        "D": ..., "hold_s": ..., "max_time": ..., "t_r": ..., "t_r_ticks":
        ..., "censored": ..., "status": ..., "ticks": n}

Summaries are flushed and fsynced per trial, so a crash loses at most the
in-flight trial. Replaying the recorded inputs through the engine must
reproduce the stored summaries byte for byte.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

from .engine import Condition, TrialRecord, run_trial

TICK_BATCH = 200


def summary_dict(index: int, record: TrialRecord) -> dict:
    return {
        "type": "summary",
        "trial": index,
        "condition": record.condition.to_dict(),
        "d": record.d,
        "D": record.condition.D,
        "W": record.condition.W,
        "hold_s": record.hold_s,
        "max_time": record.max_time,
        "t_r": record.t_r,
        "t_r_ticks": record.t_r_ticks,
        "censored": record.censored,
        "status": record.status,
        "ticks": len(record.samples),
    }


def encode_line(obj: dict) -> str:
    """Canonical one-line encoding used for both storage and comparison."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


class SessionLog:
    """Writer for one session directory."""

    def __init__(self, root: Path, config: dict, schedule: list[Condition]):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        (self.root / "config.json").write_text(json.dumps(config, indent=2))
        (self.root / "schedule.json").write_text(
            json.dumps([c.to_dict() for c in schedule], indent=2)
        )
        self._trials_path = self.root / "trials.jsonl"
        self._trials_path.touch()

    def append_trial(self, index: int, record: TrialRecord) -> None:
        """Persist one finished trial: tick batches then the summary."""
        lines = []
        samples = [
            [s.tick, s.value, s.pos, s.shown_cursor, s.zone[0], s.zone[1]]
            for s in record.samples
        ]
        for i in range(0, len(samples), TICK_BATCH):
            lines.append(
                encode_line(
                    {
                        "type": "ticks",
                        "trial": index,
                        "samples": samples[i : i + TICK_BATCH],
                    }
                )
            )
        lines.append(encode_line(summary_dict(index, record)))
        with open(self._trials_path, "a") as fh:
            fh.write("\n".join(lines) + "\n")
            fh.flush()
            os.fsync(fh.fileno())


def read_session(root: Path) -> tuple[dict, list[Condition], dict[int, dict], dict[int, list]]:
    """Load (config, schedule, summaries by trial, input samples by trial)."""
    root = Path(root)
    config = json.loads((root / "config.json").read_text())
    schedule = [
        Condition.from_dict(c)
        for c in json.loads((root / "schedule.json").read_text())
    ]
    summaries: dict[int, dict] = {}
    inputs: dict[int, list] = {}
    with open(root / "trials.jsonl") as fh:
        for line in fh:
            if not line.strip():
                continue
            obj = json.loads(line)
            if obj["type"] == "ticks":
                inputs.setdefault(obj["trial"], []).extend(
                    s[1] for s in obj["samples"]
                )
            elif obj["type"] == "summary":
                summaries[obj["trial"]] = obj
    return config, schedule, summaries, inputs


def replay_session(root: Path) -> tuple[list[str], list[str], bool]:
    """Re-run every stored trial from its recorded inputs.

    Returns (stored summary lines, replayed summary lines, identical) with
    both sides in canonical encoding.
    """
    config, schedule, summaries, inputs = read_session(root)
    stored, replayed = [], []
    for idx in sorted(summaries):
        s = summaries[idx]
        cond = Condition.from_dict(s["condition"])
        record = run_trial(
            cond, inputs.get(idx, []), d=s["d"], hold_s=s["hold_s"],
            max_time=s["max_time"],
        )
        stored.append(encode_line(s))
        replayed.append(encode_line(summary_dict(idx, record)))
    return stored, replayed, stored == replayed
