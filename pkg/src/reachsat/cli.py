"""Batch command-line entry points: simulations, analyses, and the server.

Every data-producing subcommand is deterministic given its flags/config and
writes plain CSV files plus a ``manifest.json`` describing each file's
columns and the figure-style plot it regenerates.
"""

from __future__ import annotations

import csv
import json
import sys
from pathlib import Path

import click
import yaml

from .channel import ChannelSpec, bound, worst_case_reach_time
from .dynamics import ReachTask
from .engine import Condition, TrialRecord, fit_fitts
from .logs import read_session, replay_session
from .muscle import muscle, unit_force
from .nerve import combined_constraint, cost_sweep, sweet_spot
from .reach import DEFAULT_GRID, FrictionSpec, frontier
from .service import create_app, export_results
from .transport import TransportMode, diverse_time, uniform_time


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    with open(path) as fh:
        data = yaml.safe_load(fh) or {}
    if not isinstance(data, dict):
        raise click.ClickException("config file must contain a mapping")
    return data


def _setting(config: dict, key: str, flag_value, default):
    """Flag wins over config file wins over default."""
    if flag_value is not None:
        return flag_value
    return config.get(key, default)


def _write_csv(out_dir: Path, name: str, header: list[str], rows) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / name
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)
    return path


def _write_manifest(out_dir: Path, entries: list[dict]) -> None:
    path = out_dir / "manifest.json"
    existing = []
    if path.exists():
        existing = json.loads(path.read_text())
    names = {e["file"] for e in entries}
    merged = [e for e in existing if e["file"] not in names] + entries
    path.write_text(json.dumps(merged, indent=2) + "\n")


@click.group()
def main():
    """Speed-accuracy tradeoff simulations for sensorimotor control."""


@main.command("fitts-bound")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--out", type=click.Path(), default="out")
@click.option("--delay", type=int, default=None, help="Signaling delay T in ticks.")
@click.option("--rate", type=int, default=None, help="Channel rate R in bits/tick.")
@click.option("--d-max", type=float, default=None, help="Largest half-range D.")
def fitts_bound(config_path, out, delay, rate, d_max):
    """Reaching-time lower bound T + F/R versus the bisection oracle."""
    cfg = _load_config(config_path)
    delay = int(_setting(cfg, "delay", delay, 2))
    rate = int(_setting(cfg, "rate", rate, 1))
    d_max = float(_setting(cfg, "d_max", d_max, 16.0))
    chan = ChannelSpec(signal_delay=delay, internal_delay=0, rate=rate)
    rows = []
    d_val = 1.0
    while d_val <= d_max:
        w_val = 0.25
        while w_val <= 2 * d_val:
            task = ReachTask(D=d_val, W=w_val)
            rows.append(
                (
                    d_val,
                    w_val,
                    f"{task.difficulty:.6f}",
                    f"{bound(task, chan):.6f}",
                    worst_case_reach_time(d_val, w_val, chan),
                )
            )
            w_val *= 2
        d_val *= 2
    out_dir = Path(out)
    _write_csv(out_dir, "fitts_bound.csv", ["D", "W", "F", "bound", "oracle_ticks"], rows)
    _write_manifest(
        out_dir,
        [
            {
                "file": "fitts_bound.csv",
                "columns": "D, W, difficulty F=log2(2D/W), lower bound T+F/R, worst-case oracle reach time in ticks",
                "figure": "reaching-time bound vs. achievability (Eq. 5-style sweep)",
            }
        ],
    )
    click.echo(f"wrote {out_dir / 'fitts_bound.csv'} ({len(rows)} rows)")


@main.command("sweet-spot")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--out", type=click.Path(), default="out")
@click.option("--budget", type=float, default=None, help="Bundle budget lambda.")
@click.option("--difficulty", type=float, default=None, help="Task difficulty F.")
def sweet_spot_cmd(config_path, out, budget, difficulty):
    """Nerve SAT cost sweep and its delay/rate sweet spot (Fig. 3A data)."""
    cfg = _load_config(config_path)
    budget = float(_setting(cfg, "budget", budget, 1.0))
    difficulty = float(_setting(cfg, "difficulty", difficulty, 24.0))
    rate_grid = [0.1 * k for k in range(1, 201)]
    rows = []
    for c in cost_sweep(difficulty, lambda r: r / budget, rate_grid):
        rows.append(
            (
                f"{c.rate:.3f}",
                f"{c.delay_cost:.6f}",
                f"{c.delay_cost:.6f}",
                f"{c.rate_cost:.6f}",
                f"{c.total:.6f}",
            )
        )
    t_star, r_star, total = sweet_spot(difficulty, budget)
    out_dir = Path(out)
    _write_csv(out_dir, "cost_sweep.csv", ["R", "T", "delay_cost", "rate_cost", "total"], rows)
    _write_csv(
        out_dir,
        "sweet_spot.csv",
        ["difficulty", "budget", "T", "R", "total"],
        [(difficulty, budget, f"{t_star:.6f}", f"{r_star:.6f}", f"{total:.6f}")],
    )
    _write_manifest(
        out_dir,
        [
            {
                "file": "cost_sweep.csv",
                "columns": "rate R, delay T=R/lambda, delay cost, rate cost F/R, total reach-time cost",
                "figure": "total cost vs. rate with sweet spot (Fig. 3A-style)",
            },
            {
                "file": "sweet_spot.csv",
                "columns": "difficulty F, budget lambda, optimal T, optimal R, minimal total cost",
                "figure": "sweet-spot marker for Fig. 3A-style plot",
            },
        ],
    )
    click.echo(f"sweet spot: T={t_star:.6g} R={r_star:.6g} total={total:.6g}")


@main.command("muscle-trace")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--out", type=click.Path(), default="out")
@click.option("--strengths", default=None, help="Comma-separated unit strengths.")
@click.option("--durations", default=None, help="Comma-separated drive durations.")
@click.option("--horizon", type=float, default=None)
@click.option("--dt", type=float, default=None)
def muscle_trace(config_path, out, strengths, durations, horizon, dt):
    """Per-unit and total force traces for a timed recruitment plan."""
    cfg = _load_config(config_path)
    strengths = _setting(cfg, "strengths", strengths, "0.85,0.15")
    durations = _setting(cfg, "durations", durations, "2.75,2.75")
    horizon = float(_setting(cfg, "horizon", horizon, 10.0))
    dt = float(_setting(cfg, "dt", dt, 0.01))
    if isinstance(strengths, str):
        strengths = [float(v) for v in strengths.split(",")]
    if isinstance(durations, str):
        durations = [float(v) for v in durations.split(",")]
    spec = muscle(*strengths)
    if len(durations) != len(spec.units):
        raise click.ClickException("need one duration per unit")
    rows = []
    n = int(round(horizon / dt))
    for k in range(n + 1):
        t = k * dt
        forces = [
            unit_force(u.strength, tau, t, spec.q)
            for u, tau in zip(spec.units, durations)
        ]
        rows.append(
            [f"{t:.6f}"] + [f"{f:.9f}" for f in forces] + [f"{sum(forces):.9f}"]
        )
    header = ["time"] + [f"c_{i}" for i in range(len(spec.units))] + ["total"]
    out_dir = Path(out)
    _write_csv(out_dir, "muscle_trace.csv", header, rows)
    _write_manifest(
        out_dir,
        [
            {
                "file": "muscle_trace.csv",
                "columns": "time, per-unit force c_i = a_i^q, total force",
                "figure": "motor-unit force traces (Fig. S2-style)",
            }
        ],
    )
    click.echo(f"wrote {out_dir / 'muscle_trace.csv'} ({len(rows)} rows)")


@main.command("frontier")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--out", type=click.Path(), default="out")
@click.option("--dt", type=float, default=None)
def frontier_cmd(config_path, out, dt):
    """Reach frontiers for uniform vs. diverse motor-unit pools."""
    cfg = _load_config(config_path)
    dt = float(_setting(cfg, "dt", dt, 1e-3))
    friction = FrictionSpec(
        float(cfg.get("static", 0.6)), float(cfg.get("kinetic", 0.54))
    )
    pools = {
        "uniform": [float(v) for v in cfg.get("uniform", (0.5, 0.5))],
        "diverse": [float(v) for v in cfg.get("diverse", (0.85, 0.15))],
    }
    out_dir = Path(out)
    entries = []
    for name, strengths in pools.items():
        points = frontier(muscle(*strengths), grid=DEFAULT_GRID, friction=friction, dt=dt)
        rows = [
            (
                "|".join(f"{d:g}" for d in p.plan.durations),
                f"{p.distance:.9f}",
                "" if p.stop_time is None else f"{p.stop_time:.9f}",
            )
            for p in points
        ]
        fname = f"frontier_{name}.csv"
        _write_csv(out_dir, fname, ["plan", "distance", "time"], rows)
        entries.append(
            {
                "file": fname,
                "columns": "plan (per-unit durations joined by |), stop distance, stop time (empty = never moved)",
                "figure": f"reach frontier, {name} pool {strengths} (Fig. 3B/S3/S4-style)",
            }
        )
        click.echo(f"wrote {out_dir / fname} ({len(rows)} rows)")
    _write_manifest(out_dir, entries)


@main.command("transport")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--out", type=click.Path(), default="out")
@click.option("--distance", type=float, default=None)
@click.option("--loss", type=float, default=None, help="Per-switch time loss.")
def transport_cmd(config_path, out, distance, loss):
    """Uniform vs. diverse mode-set travel times over target tolerances."""
    cfg = _load_config(config_path)
    distance = float(_setting(cfg, "distance", distance, 12.0))
    loss = float(_setting(cfg, "loss", loss, 1.0))
    modes = [
        TransportMode(float(s), float(e))
        for s, e in cfg.get("modes", [(2.5, 1.0), (5.0, 1.5)])
    ]
    tolerances = [float(v) for v in cfg.get("tolerances", (1.0, 2.0, 3.0, 4.0))]
    slow = min(modes, key=lambda m: m.speed)
    rows = []
    for tol in tolerances:
        uni = uniform_time(slow, distance, tol)
        div = diverse_time(modes, distance, tol, loss)
        rows.append(
            (
                tol,
                "" if uni is None else f"{uni:.6f}",
                "" if div is None else f"{div[0]:.6f}",
                "" if div is None else f"{div[1]:.6f}",
            )
        )
    out_dir = Path(out)
    _write_csv(out_dir, "transport.csv", ["E", "uniform", "diverse_lower", "diverse_upper"], rows)
    _write_manifest(
        out_dir,
        [
            {
                "file": "transport.csv",
                "columns": "tolerance E, single slow-mode time, diverse plan lower/upper bounds (empty = infeasible)",
                "figure": "travel time vs. tolerance, uniform vs. diverse modes (Fig. S8A-style)",
            }
        ],
    )
    click.echo(f"wrote {out_dir / 'transport.csv'} ({len(rows)} rows)")


@main.command("serve")
@click.option("--out", type=click.Path(), default="sessions", help="Session data root.")
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8000)
def serve(out, host, port):
    """Run the trial service (WebSocket protocol + result export)."""
    import uvicorn

    uvicorn.run(create_app(out), host=host, port=port)


@main.command("analyze")
@click.argument("session_dir", type=click.Path(exists=True))
@click.option("--out", type=click.Path(), default=None)
def analyze(session_dir, out):
    """Per-condition summaries and a least-squares reach-time fit."""
    session_dir = Path(session_dir)
    table = export_results(session_dir)
    _, _, summaries, _ = read_session(session_dir)
    records = [
        TrialRecord(
            condition=Condition.from_dict(s["condition"]),
            d=s["d"],
            hold_s=s["hold_s"],
            t_r=s["t_r"],
            censored=s["censored"],
            status=s["status"],
        )
        for s in summaries.values()
    ]
    try:
        f = fit_fitts(records)
        fit_info = {"intercept": f.intercept, "slope": f.slope, "r_squared": f.r_squared}
    except ValueError as exc:
        fit_info = {"error": str(exc)}
    if out is not None:
        out_dir = Path(out)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "summary.csv").write_text(table)
        (out_dir / "fit.json").write_text(json.dumps(fit_info, indent=2) + "\n")
        _write_manifest(
            out_dir,
            [
                {
                    "file": "summary.csv",
                    "columns": "condition label, difficulty F, mean reach-and-stay time, standard error, trial count, censored count",
                    "figure": "reach time vs. difficulty per condition (Fig. 3C/3D-style)",
                },
                {
                    "file": "fit.json",
                    "columns": "least-squares fit t_r = intercept + slope * F with R^2",
                    "figure": "linear fit overlay for Fig. 3C/3D-style plots",
                },
            ],
        )
    click.echo(table, nl=False)
    click.echo(json.dumps(fit_info))


@main.command("replay")
@click.argument("session_dir", type=click.Path(exists=True))
def replay(session_dir):
    """Re-run a session's logged inputs and verify byte-identical summaries."""
    recorded, replayed, ok = replay_session(Path(session_dir))
    click.echo(f"trials={len(recorded)} match={'yes' if ok else 'NO'}")
    if not ok:
        for i, (a, b) in enumerate(zip(recorded, replayed)):
            if a != b:
                click.echo(f"first mismatch at trial {i}", err=True)
                click.echo(f"  recorded: {a}", err=True)
                click.echo(f"  replayed: {b}", err=True)
                break
        sys.exit(1)


if __name__ == "__main__":
    main()
