"""Wire protocol between the session service and trial clients.

Small framed JSON text messages over a persistent full-duplex connection.
Every message is a tagged object {"type": ..., ...}; unknown types and
missing fields are rejected. The schema is documented field by field in
docs/protocol.md and versioned via PROTOCOL_VERSION.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, fields

PROTOCOL_VERSION = 1


class ProtocolError(ValueError):
    pass


# client -> server -----------------------------------------------------------


@dataclass(frozen=True)
class Hello:
    device: str = "unknown"
    client_info: str = ""


@dataclass(frozen=True)
class Input:
    angle: float | None
    client_tick: int


@dataclass(frozen=True)
class StartTrial:
    pass


@dataclass(frozen=True)
class Abort:
    pass


# server -> client -----------------------------------------------------------


@dataclass(frozen=True)
class Config:
    session_id: str
    trials: int
    protocol_version: int = PROTOCOL_VERSION
    screen_units: float = 1000.0


@dataclass(frozen=True)
class Display:
    tick: int
    cursor: float
    zone_lo: float
    zone_hi: float


@dataclass(frozen=True)
class TrialStart:
    trial: int
    D: float
    W: float
    variant: str
    tick_seconds: float
    hold_s: float
    d_hidden: bool = True


@dataclass(frozen=True)
class TrialEnd:
    trial: int
    t_r: float | None
    censored: bool
    status: str


@dataclass(frozen=True)
class ScheduleDone:
    pass


@dataclass(frozen=True)
class Error:
    reason: str


_TYPES = {
    "hello": Hello,
    "input": Input,
    "start_trial": StartTrial,
    "abort": Abort,
    "config": Config,
    "display": Display,
    "trial_start": TrialStart,
    "trial_end": TrialEnd,
    "schedule_done": ScheduleDone,
    "error": Error,
}
_TAGS = {cls: tag for tag, cls in _TYPES.items()}

CLIENT_TYPES = (Hello, Input, StartTrial, Abort)
SERVER_TYPES = (Config, Display, TrialStart, TrialEnd, ScheduleDone, Error)


def encode(msg) -> str:
    tag = _TAGS.get(type(msg))
    if tag is None:
        raise ProtocolError(f"not a wire message: {type(msg).__name__}")
    body = {"type": tag}
    for f in fields(msg):
        body[f.name] = getattr(msg, f.name)
    return json.dumps(body, sort_keys=True, separators=(",", ":"))


def decode(text: str):
    try:
        body = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProtocolError(f"invalid JSON: {exc}") from exc
    if not isinstance(body, dict) or "type" not in body:
        raise ProtocolError("message must be an object with a 'type' tag")
    cls = _TYPES.get(body["type"])
    if cls is None:
        raise ProtocolError(f"unknown message type {body['type']!r}")
    kwargs = {k: v for k, v in body.items() if k != "type"}
    names = {f.name for f in fields(cls)}
    unknown = set(kwargs) - names
    if unknown:
        raise ProtocolError(f"unknown fields for {body['type']}: {sorted(unknown)}")
    try:
        return cls(**kwargs)
    except TypeError as exc:
        raise ProtocolError(f"bad fields for {body['type']}: {exc}") from exc
