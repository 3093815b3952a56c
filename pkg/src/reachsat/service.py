"""Session server: exposes the trial engine over a WebSocket protocol.

The server owns the clock. In lockstep mode (deterministic; used by scripted
clients and tests) every Input message advances exactly one tick and is
answered with the next Display. In realtime mode a background task advances
ticks at the condition's tick rate, reusing the latest received input when
none arrived that tick. Either way the client never computes dynamics:
replaying the persisted inputs through the engine reproduces every trial.
"""

from __future__ import annotations

import asyncio
import csv
import io
import json
import math
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect
from fastapi.responses import PlainTextResponse

from . import protocol as wire
from .engine import Condition, TrialLoop, condition_schedule, fit_fitts, TrialRecord
from .logs import SessionLog, read_session


@dataclass
class SessionState:
    """One subject session: schedule, live trial, and its log sink."""

    session_id: str
    config: dict
    schedule: list[Condition]
    log: SessionLog
    trial_index: int = 0
    loop: TrialLoop | None = None
    latest_input: float | None = None
    device: str = "unknown"
    finished: bool = False

    @property
    def realtime(self) -> bool:
        return bool(self.config.get("realtime", True))

    def start_trial(self) -> tuple[wire.TrialStart, wire.Display]:
        if self.loop is not None:
            raise RuntimeError("a trial is already active")
        if self.trial_index >= len(self.schedule):
            raise IndexError("schedule exhausted")
        cond = self.schedule[self.trial_index]
        self.loop = TrialLoop(
            cond,
            hold_s=self.config.get("hold_s", 0.5),
            max_time=self.config.get("max_time", 60.0),
        )
        self.latest_input = None
        start = wire.TrialStart(
            trial=self.trial_index,
            D=cond.D,
            W=cond.W,
            variant=cond.variant,
            tick_seconds=cond.tick,
            hold_s=self.loop.hold_s,
        )
        return start, self._display()

    def _display(self) -> wire.Display:
        frame = self.loop.display()
        return wire.Display(
            tick=frame.tick,
            cursor=frame.cursor,
            zone_lo=frame.zone[0],
            zone_hi=frame.zone[1],
        )

    def drive_tick(self, value: float | None):
        """Advance one tick; returns the next Display or the TrialEnd."""
        if self.loop is None:
            raise RuntimeError("no active trial")
        self.loop.advance(value)
        if self.loop.done:
            return self._finish_trial()
        return self._display()

    def abort_trial(self) -> wire.TrialEnd:
        if self.loop is None:
            raise RuntimeError("no active trial")
        self.loop.invalidate()
        return self._finish_trial()

    def _finish_trial(self) -> wire.TrialEnd:
        record = self.loop.record
        self.log.append_trial(self.trial_index, record)
        msg = wire.TrialEnd(
            trial=self.trial_index,
            t_r=record.t_r,
            censored=record.censored,
            status=record.status,
        )
        self.trial_index += 1
        self.loop = None
        if self.trial_index >= len(self.schedule):
            self.finished = True
        return msg


def open_session(data_root: Path, config: dict) -> SessionState:
    """Create a session: expand the schedule and persist the configuration."""
    schedule = condition_schedule(config)
    session_id = config.get("session_id") or uuid.uuid4().hex[:12]
    log = SessionLog(Path(data_root) / session_id, config, schedule)
    return SessionState(
        session_id=session_id, config=dict(config), schedule=schedule, log=log
    )


def export_results(session_dir: Path) -> str:
    """CSV of per-condition aggregates: condition, F, mean T_r, SE, counts."""
    _, _, summaries, _ = read_session(session_dir)
    groups: dict[tuple, list] = {}
    for s in summaries.values():
        cond = Condition.from_dict(s["condition"])
        groups.setdefault((cond.label, round(cond.difficulty, 9)), []).append(s)
    out = io.StringIO()
    w = csv.writer(out)
    w.writerow(["condition", "F", "mean_t_r", "se", "n", "censored"])
    for (label, f_val), rows in sorted(groups.items()):
        times = [r["t_r"] for r in rows if r["t_r"] is not None]
        censored = sum(1 for r in rows if r["censored"])
        if times:
            mean = sum(times) / len(times)
            if len(times) > 1:
                var = sum((t - mean) ** 2 for t in times) / (len(times) - 1)
                se = math.sqrt(var / len(times))
            else:
                se = 0.0
            w.writerow([label, f_val, f"{mean:.6f}", f"{se:.6f}", len(times), censored])
        else:
            w.writerow([label, f_val, "", "", 0, censored])
    return out.getvalue()


def create_app(data_root: Path | str = "sessions") -> FastAPI:
    data_root = Path(data_root)
    data_root.mkdir(parents=True, exist_ok=True)
    app = FastAPI(title="reachsat session service")
    sessions: dict[str, SessionState] = {}

    @app.post("/sessions")
    def create_session(config: dict):
        try:
            state = open_session(data_root, config)
        except (ValueError, KeyError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        sessions[state.session_id] = state
        return {"session_id": state.session_id, "trials": len(state.schedule)}

    @app.get("/sessions/{sid}")
    def session_status(sid: str):
        state = sessions.get(sid)
        if state is None:
            raise HTTPException(status_code=404, detail="unknown session")
        return {
            "session_id": sid,
            "trial_index": state.trial_index,
            "trials": len(state.schedule),
            "finished": state.finished,
        }

    @app.get("/sessions/{sid}/export.csv", response_class=PlainTextResponse)
    def export(sid: str):
        path = data_root / sid
        if not (path / "trials.jsonl").exists():
            raise HTTPException(status_code=404, detail="unknown session")
        return export_results(path)

    @app.get("/sessions/{sid}/fit")
    def fit(sid: str):
        path = data_root / sid
        if not (path / "trials.jsonl").exists():
            raise HTTPException(status_code=404, detail="unknown session")
        _, _, summaries, _ = read_session(path)
        records = []
        for s in summaries.values():
            rec = TrialRecord(
                condition=Condition.from_dict(s["condition"]),
                d=s["d"],
                hold_s=s["hold_s"],
                t_r=s["t_r"],
                censored=s["censored"],
                status=s["status"],
            )
            records.append(rec)
        try:
            f = fit_fitts(records)
        except ValueError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        return {"intercept": f.intercept, "slope": f.slope, "r_squared": f.r_squared}

    @app.websocket("/sessions/{sid}/ws")
    async def ws_endpoint(socket: WebSocket, sid: str):
        state = sessions.get(sid)
        await socket.accept()
        if state is None:
            await socket.send_text(wire.encode(wire.Error(reason="unknown session")))
            await socket.close()
            return
        await socket.send_text(
            wire.encode(
                wire.Config(session_id=sid, trials=len(state.schedule))
            )
        )
        ticker: asyncio.Task | None = None

        async def send(msg):
            await socket.send_text(wire.encode(msg))

        async def run_ticker():
            # Realtime drive: advance at the condition's tick rate with the
            # latest input (hold-last-sample), until the trial ends.
            try:
                while state.loop is not None and not state.loop.done:
                    await asyncio.sleep(state.loop.cond.tick)
                    if state.loop is None:
                        break
                    msg = state.drive_tick(state.latest_input)
                    await send(msg)
                    if isinstance(msg, wire.TrialEnd) and state.finished:
                        await send(wire.ScheduleDone())
            except (WebSocketDisconnect, RuntimeError):
                pass

        try:
            while True:
                text = await socket.receive_text()
                try:
                    msg = wire.decode(text)
                except wire.ProtocolError as exc:
                    await send(wire.Error(reason=str(exc)))
                    continue
                if isinstance(msg, wire.Hello):
                    state.device = msg.device
                elif isinstance(msg, wire.StartTrial):
                    if state.finished:
                        await send(wire.ScheduleDone())
                        continue
                    if state.loop is not None:
                        await send(wire.Error(reason="trial already active"))
                        continue
                    start, display = state.start_trial()
                    await send(start)
                    await send(display)
                    if state.realtime:
                        ticker = asyncio.create_task(run_ticker())
                elif isinstance(msg, wire.Input):
                    if state.loop is None:
                        await send(wire.Error(reason="no active trial"))
                        continue
                    state.latest_input = msg.angle
                    if not state.realtime:
                        out = state.drive_tick(msg.angle)
                        await send(out)
                        if isinstance(out, wire.TrialEnd) and state.finished:
                            await send(wire.ScheduleDone())
                elif isinstance(msg, wire.Abort):
                    if state.loop is None:
                        await send(wire.Error(reason="no active trial"))
                        continue
                    if ticker is not None:
                        ticker.cancel()
                        ticker = None
                    await send(state.abort_trial())
        except WebSocketDisconnect:
            pass
        finally:
            if ticker is not None:
                ticker.cancel()

    return app
