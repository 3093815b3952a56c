import json

from reachsat.agents import bisection_agent, speed_agent
from reachsat.engine import Condition, run_trial
from reachsat.logs import (
    SessionLog,
    encode_line,
    read_session,
    replay_session,
    summary_dict,
)


def _write_session(tmp_path, conds, agents, hold_s=0.5, max_time=60.0):
    config = {"family": "manual", "hold_s": hold_s, "max_time": max_time}
    log = SessionLog(tmp_path / "s1", config, conds)
    for i, (cond, agent) in enumerate(zip(conds, agents)):
        rec = run_trial(cond, agent, hold_s=hold_s, max_time=max_time)
        log.append_trial(i, rec)
    return tmp_path / "s1"


class TestPersistence:
    def test_layout_and_round_trip(self, tmp_path):
        conds = [Condition("combined", D=4, W=1, rate=2, delay_s=1 / 8)]
        root = _write_session(tmp_path, conds, [bisection_agent()])
        assert (root / "config.json").exists()
        assert (root / "schedule.json").exists()
        config, schedule, summaries, inputs = read_session(root)
        assert schedule == conds
        assert set(summaries) == {0}
        assert summaries[0]["status"] == "ok"
        assert len(inputs[0]) == summaries[0]["ticks"]

    def test_summary_lines_are_canonical_json(self, tmp_path):
        conds = [Condition("delay", D=4, W=1, delay_s=0.0)]
        root = _write_session(tmp_path, conds, [lambda f: 4.0])
        lines = (root / "trials.jsonl").read_text().splitlines()
        summary = [l for l in lines if json.loads(l)["type"] == "summary"][0]
        assert summary == encode_line(json.loads(summary))

    def test_tick_batches_bounded(self, tmp_path):
        conds = [Condition("delay", D=4, W=1, delay_s=0.0)]
        root = _write_session(tmp_path, conds, [lambda f: 4.0])
        for line in (root / "trials.jsonl").read_text().splitlines():
            obj = json.loads(line)
            if obj["type"] == "ticks":
                assert len(obj["samples"]) <= 200


class TestReplay:
    def test_ok_trials_replay_byte_identically(self, tmp_path):
        conds = [
            Condition("combined", D=4, W=1, rate=r, delay_s=(r - 1) / 8)
            for r in (1, 2, 3)
        ]
        root = _write_session(tmp_path, conds, [bisection_agent()] * 3)
        stored, replayed, ok = replay_session(root)
        assert ok
        assert stored == replayed
        assert len(stored) == 3

    def test_censored_trial_replays_identically(self, tmp_path):
        cond = Condition("speed", D=4, W=1, speed_label="fast")
        root = _write_session(
            tmp_path, [cond], [speed_agent(cond)], max_time=2.0
        )
        _, _, ok = replay_session(root)
        assert ok

    def test_tampered_summary_detected(self, tmp_path):
        conds = [Condition("delay", D=4, W=1, delay_s=0.0)]
        root = _write_session(tmp_path, conds, [lambda f: 4.0])
        path = root / "trials.jsonl"
        lines = path.read_text().splitlines()
        out = []
        for line in lines:
            obj = json.loads(line)
            if obj["type"] == "summary":
                obj["t_r"] = 99.0
            out.append(encode_line(obj))
        path.write_text("\n".join(out) + "\n")
        _, _, ok = replay_session(root)
        assert not ok


class TestSummaryDict:
    def test_contains_documented_fields(self):
        cond = Condition("delay", D=4, W=1, delay_s=0.0)
        rec = run_trial(cond, lambda f: 4.0)
        s = summary_dict(3, rec)
        assert s["trial"] == 3
        for key in (
            "condition", "d", "D", "W", "hold_s", "max_time", "t_r",
            "t_r_ticks", "censored", "status", "ticks",
        ):
            assert key in s
