"""HTTP control plane: lifecycle, streaming, steering, what-if forks."""

import json
import time

import pytest
from fastapi.testclient import TestClient

from releasefront.metrics import brute_force_front
from releasefront.model import NrpInstance, instance_to_dict
from releasefront.service import apply_whatif, create_app


@pytest.fixture
def client(toy):
    app = create_app()
    with TestClient(app) as client:
        client.toy_id = client.post("/instances", json=instance_to_dict(toy)).json()["id"]
        yield client


def _wait_terminal(client, run_id, timeout=30.0):
    deadline = time.monotonic() + timeout
    while time.monotonic() < deadline:
        handle = client.get(f"/runs/{run_id}").json()
        if handle["status"] in ("done", "cancelled"):
            return handle
        time.sleep(0.01)
    raise AssertionError(f"run {run_id} did not finish: {handle}")


def _sse_events(client, run_id):
    events = []
    with client.stream("GET", f"/runs/{run_id}/events") as response:
        assert response.headers["content-type"].startswith("text/event-stream")
        for line in response.iter_lines():
            if line.startswith("data: "):
                events.append(json.loads(line[len("data: "):]))
    return events


def _start(client, instance_id, algorithm="any-hybrid", **extra):
    body = {"instance_id": instance_id, "algorithm": algorithm, **extra}
    response = client.post("/runs", json=body)
    assert response.status_code == 200, response.text
    return response.json()


class TestInstances:
    def test_upload_and_list(self, client, toy):
        listing = client.get("/instances").json()
        assert any(item["name"] == "toy" for item in listing)
        doc = client.get(f"/instances/{client.toy_id}").json()
        assert doc["costs"] == list(toy.costs)

    def test_invalid_instance_rejected(self, client):
        response = client.post("/instances", json={"name": "bad", "costs": [1]})
        assert response.status_code == 422

    def test_unknown_instance_run(self, client):
        response = client.post(
            "/runs", json={"instance_id": "nope", "algorithm": "any-hybrid"}
        )
        assert response.status_code == 404


class TestRunLifecycle:
    def test_run_completes_with_full_archive(self, client):
        handle = _start(client, client.toy_id)
        # tiny runs may finish before the creation response is assembled
        assert handle["status"] in ("queued", "running", "done")
        final = _wait_terminal(client, handle["id"])
        assert final["status"] == "done"
        assert final["termination"] == "exhausted"
        archive = client.get(f"/runs/{handle['id']}/archive").json()
        assert [(p["f1"], p["f2"]) for p in archive["points"]] == [
            (-9, 9),
            (-5, 5),
            (-4, 4),
            (0, 0),
        ]
        assert archive["hypervolume"] == 24
        assert archive["total_hypervolume"] == 24
        assert archive["nadir"] == [0, 9]

    def test_unknown_run(self, client):
        assert client.get("/runs/missing").status_code == 404
        assert client.get("/runs/missing/archive").status_code == 404

    def test_invalid_config(self, client):
        response = client.post(
            "/runs", json={"instance_id": client.toy_id, "algorithm": "bogus"}
        )
        assert response.status_code == 422


class TestEventStream:
    def test_replay_matches_archive(self, client):
        handle = _start(client, client.toy_id)
        _wait_terminal(client, handle["id"])
        events = _sse_events(client, handle["id"])
        assert events[-1]["kind"] == "status"
        points = [e for e in events if e["kind"] == "point"]
        # mirror the archive client-side using only the event deltas
        mirror: set[tuple[int, int]] = set()
        for event in points:
            for pair in event["removed"]:
                mirror.discard(tuple(pair))
            if event["inserted"]:
                mirror.add((event["point"]["f1"], event["point"]["f2"]))
        archive = client.get(f"/runs/{handle['id']}/archive").json()
        assert mirror == {(p["f1"], p["f2"]) for p in archive["points"]}
        assert points[-1]["hv_fraction"] == "1.000000"
        seqs = [e["seq"] for e in events]
        assert seqs == sorted(seqs)

    def test_replay_twice_identical(self, client):
        handle = _start(client, client.toy_id)
        _wait_terminal(client, handle["id"])
        first = _sse_events(client, handle["id"])
        second = _sse_events(client, handle["id"])
        assert first == second


class TestControl:
    def test_pause_resume_equivalence(self, client):
        baseline = _start(client, client.toy_id)
        _wait_terminal(client, baseline["id"])
        base_events = [
            e for e in _sse_events(client, baseline["id"]) if e["kind"] == "point"
        ]

        paused = _start(client, client.toy_id)
        client.post(f"/runs/{paused['id']}/control", json={"action": "pause"})
        status = client.get(f"/runs/{paused['id']}").json()["status"]
        assert status in ("paused", "running", "queued", "done")
        time.sleep(0.05)
        client.post(f"/runs/{paused['id']}/control", json={"action": "resume"})
        _wait_terminal(client, paused["id"])
        paused_events = [
            e for e in _sse_events(client, paused["id"]) if e["kind"] == "point"
        ]
        assert [e["point"] for e in paused_events] == [e["point"] for e in base_events]
        assert [e["oracle_calls"] for e in paused_events] == [
            e["oracle_calls"] for e in base_events
        ]

    def test_stop_is_idempotent_on_done(self, client):
        handle = _start(client, client.toy_id)
        _wait_terminal(client, handle["id"])
        response = client.post(f"/runs/{handle['id']}/control", json={"action": "stop"})
        assert response.json()["status"] == "done"

    def test_stop_cancels_running(self, client, toy):
        # a generous deadline keeps the run alive long enough to stop it
        big = instance_to_dict(
            NrpInstance(
                "bigger",
                tuple([3] * 14),
                tuple([2] * 8),
                tuple(frozenset({i % 14 + 1, (i + 3) % 14 + 1}) for i in range(8)),
                frozenset(),
            )
        )
        iid = client.post("/instances", json=big).json()["id"]
        handle = _start(client, iid, algorithm="econst1-1")
        response = client.post(f"/runs/{handle['id']}/control", json={"action": "stop"})
        assert response.json()["status"] in ("cancelled", "done")
        final = _wait_terminal(client, handle["id"])
        assert final["status"] in ("cancelled", "done")

    def test_unknown_action(self, client):
        handle = _start(client, client.toy_id)
        response = client.post(f"/runs/{handle['id']}/control", json={"action": "x"})
        assert response.status_code == 422

    def test_pause_on_queued_applies_at_start(self, client):
        handle = _start(client, client.toy_id)
        client.post(f"/runs/{handle['id']}/control", json={"action": "pause"})
        client.post(f"/runs/{handle['id']}/control", json={"action": "resume"})
        final = _wait_terminal(client, handle["id"])
        assert final["archive_size"] == 4


class TestWhatIf:
    def test_cost_edit_matches_brute_force(self, client, toy):
        parent = _start(client, client.toy_id)
        _wait_terminal(client, parent["id"])
        child = client.post(
            f"/runs/{parent['id']}/whatif", json={"costs": {"3": 7}}
        ).json()
        assert child["parent_id"] == parent["id"]
        _wait_terminal(client, child["id"])
        archive = client.get(f"/runs/{child['id']}/archive").json()
        edited = NrpInstance(
            "edited", (2, 3, 7), toy.weights, toy.requests, toy.precedence
        )
        expected = [p.as_pair() for p in brute_force_front(edited)]
        assert [(p["f1"], p["f2"]) for p in archive["points"]] == expected
        assert expected == [(-9, 12), (-5, 5), (0, 0)]

    def test_identity_edit_same_front(self, client):
        parent = _start(client, client.toy_id)
        _wait_terminal(client, parent["id"])
        child = client.post(f"/runs/{parent['id']}/whatif", json={}).json()
        _wait_terminal(client, child["id"])
        parent_archive = client.get(f"/runs/{parent['id']}/archive").json()
        child_archive = client.get(f"/runs/{child['id']}/archive").json()
        assert [(p["f1"], p["f2"]) for p in parent_archive["points"]] == [
            (p["f1"], p["f2"]) for p in child_archive["points"]
        ]

    def test_parent_not_mutated(self, client, toy):
        parent = _start(client, client.toy_id)
        _wait_terminal(client, parent["id"])
        client.post(f"/runs/{parent['id']}/whatif", json={"costs": {"1": 9}})
        doc = client.get(f"/instances/{client.toy_id}").json()
        assert doc["costs"] == list(toy.costs)

    def test_invalid_edit(self, client):
        parent = _start(client, client.toy_id)
        response = client.post(
            f"/runs/{parent['id']}/whatif", json={"costs": {"99": 1}}
        )
        assert response.status_code == 422
        response = client.post(
            f"/runs/{parent['id']}/whatif", json={"weights": {"1": 0}}
        )
        assert response.status_code == 422

    def test_apply_whatif_pure(self, toy):
        edited = apply_whatif(toy, {"costs": {3: 7}, "weights": {2: 6}})
        assert edited.costs == (2, 3, 7)
        assert edited.weights == (5, 6)
        assert toy.costs == (2, 3, 4)  # untouched


class TestPersistence:
    def test_event_log_written(self, toy, tmp_path):
        app = create_app(persist_dir=str(tmp_path))
        with TestClient(app) as client:
            iid = client.post("/instances", json=instance_to_dict(toy)).json()["id"]
            handle = _start(client, iid)
            _wait_terminal(client, handle["id"])
            log = tmp_path / f"{handle['id']}.jsonl"
            assert log.exists()
            lines = [json.loads(l) for l in log.read_text().splitlines()]
            assert lines[0]["kind"] == "status"
            assert any(l["kind"] == "point" for l in lines)
