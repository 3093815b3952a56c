import pytest
from fastapi.testclient import TestClient

from reachsat import protocol as wire
from reachsat.logs import replay_session
from reachsat.service import create_app


@pytest.fixture
def client(tmp_path):
    app = create_app(tmp_path)
    with TestClient(app) as c:
        c.data_root = tmp_path
        yield c


def _open(client, **config):
    config.setdefault("realtime", False)
    r = client.post("/sessions", json=config)
    assert r.status_code == 200
    return r.json()["session_id"]


def _run_schedule(client, sid, agent):
    """Drive every trial in lockstep; returns the TrialEnd messages."""
    ends = []
    with client.websocket_connect(f"/sessions/{sid}/ws") as ws:
        cfg = wire.decode(ws.receive_text())
        assert isinstance(cfg, wire.Config)
        ws.send_text(wire.encode(wire.Hello(device="script")))
        for _ in range(cfg.trials):
            ws.send_text(wire.encode(wire.StartTrial()))
            start = wire.decode(ws.receive_text())
            assert isinstance(start, wire.TrialStart)
            msg = wire.decode(ws.receive_text())
            while isinstance(msg, wire.Display):
                ws.send_text(
                    wire.encode(wire.Input(angle=agent(msg), client_tick=msg.tick))
                )
                msg = wire.decode(ws.receive_text())
            assert isinstance(msg, wire.TrialEnd)
            ends.append(msg)
        done = wire.decode(ws.receive_text())
        assert isinstance(done, wire.ScheduleDone)
    return ends


def _bisect(display: wire.Display) -> float:
    return (display.zone_lo + display.zone_hi) / 2


class TestRest:
    def test_create_session_expands_schedule(self, client):
        r = client.post(
            "/sessions", json={"family": "combined", "trials": 2, "realtime": False}
        )
        assert r.status_code == 200
        assert r.json()["trials"] == 12

    def test_bad_config_rejected(self, client):
        r = client.post("/sessions", json={"family": "nope"})
        assert r.status_code == 422

    def test_unknown_session_status(self, client):
        assert client.get("/sessions/missing").status_code == 404
        assert client.get("/sessions/missing/export.csv").status_code == 404
        assert client.get("/sessions/missing/fit").status_code == 404


class TestLockstepFlow:
    def test_full_schedule_and_export(self, client):
        sid = _open(client, family="combined", trials=1, geometry=[4, 1])
        ends = _run_schedule(client, sid, _bisect)
        assert len(ends) == 6
        assert all(e.status == "ok" for e in ends)
        # R=1: no added delay, three halvings of 2D/W = 8
        assert ends[0].t_r == pytest.approx(3 * 0.35)

        r = client.get(f"/sessions/{sid}/export.csv")
        assert r.status_code == 200
        lines = r.text.strip().splitlines()
        assert lines[0] == "condition,F,mean_t_r,se,n,censored"
        assert len(lines) == 7

        status = client.get(f"/sessions/{sid}").json()
        assert status["finished"] is True

    def test_fit_over_varied_difficulty(self, client):
        # two geometries give two distinct F values under the delay family
        sid1 = _open(client, family="delay", trials=1, geometry=[4, 1])
        _run_schedule(client, sid1, _bisect)
        r = client.get(f"/sessions/{sid1}/fit")
        assert r.status_code == 409  # single F in one session

    def test_persisted_session_replays(self, client):
        sid = _open(client, family="combined", trials=1, geometry=[4, 1])
        _run_schedule(client, sid, _bisect)
        _, _, ok = replay_session(client.data_root / sid)
        assert ok

    def test_abort_ends_trial_invalid(self, client):
        sid = _open(client, family="combined", trials=1, geometry=[4, 1])
        with client.websocket_connect(f"/sessions/{sid}/ws") as ws:
            wire.decode(ws.receive_text())
            ws.send_text(wire.encode(wire.StartTrial()))
            wire.decode(ws.receive_text())  # TrialStart
            wire.decode(ws.receive_text())  # Display
            ws.send_text(wire.encode(wire.Abort()))
            end = wire.decode(ws.receive_text())
            assert isinstance(end, wire.TrialEnd)
            assert end.status == "invalid" and end.censored

    def test_input_without_trial_is_error(self, client):
        sid = _open(client, family="combined", trials=1)
        with client.websocket_connect(f"/sessions/{sid}/ws") as ws:
            wire.decode(ws.receive_text())
            ws.send_text(wire.encode(wire.Input(angle=0.0, client_tick=0)))
            msg = wire.decode(ws.receive_text())
            assert isinstance(msg, wire.Error)

    def test_malformed_message_is_error_not_disconnect(self, client):
        sid = _open(client, family="combined", trials=1)
        with client.websocket_connect(f"/sessions/{sid}/ws") as ws:
            wire.decode(ws.receive_text())
            ws.send_text('{"type": "warp"}')
            msg = wire.decode(ws.receive_text())
            assert isinstance(msg, wire.Error)
            # connection still usable
            ws.send_text(wire.encode(wire.Hello()))

    def test_unknown_session_socket_closes_with_error(self, client):
        with client.websocket_connect("/sessions/nope/ws") as ws:
            msg = wire.decode(ws.receive_text())
            assert isinstance(msg, wire.Error)


class TestServerAuthority:
    def test_identical_inputs_give_identical_records(self, client):
        # two sessions, same scripted inputs: byte-identical summaries modulo
        # the trial timestamps (which are not part of the summary)
        sids = [
            _open(client, family="combined", trials=1, geometry=[4, 1])
            for _ in range(2)
        ]
        results = [
            [(e.t_r, e.censored, e.status) for e in _run_schedule(client, s, _bisect)]
            for s in sids
        ]
        assert results[0] == results[1]
