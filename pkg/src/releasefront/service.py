"""HTTP control plane exposing runs as steerable, observable resources.

Runs execute on their own worker threads.  Every discovered point becomes
one server-sent event enriched with the archive delta it caused (points it
evicted), the running hypervolume and the current box count, so a client
can mirror the archive without recomputing dominance.  Event streams
replay the full history before going live and close on terminal status.

What-if forks materialize an edited copy of the instance and start a
linked child run; the parent is never mutated.
"""

from __future__ import annotations

import json
import threading
import uuid
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.responses import StreamingResponse

from .anytime import RunConfig, RunControl, run
from .metrics import ParetoArchive, brute_force_front, hypervolume
from .model import (
    InvalidInstanceError,
    NrpInstance,
    Point,
    build_bi_objective,
    instance_from_dict,
    instance_to_dict,
)
from .oracle import solve

VALID_TRANSITIONS = {
    "queued": {"running", "cancelled"},
    "running": {"paused", "done", "cancelled"},
    "paused": {"running", "done", "cancelled"},
    "done": set(),
    "cancelled": set(),
}


def _new_id() -> str:
    return uuid.uuid4().hex[:12]


@dataclass
class ManagedRun:
    id: str
    instance_id: str
    instance: NrpInstance
    config: RunConfig
    parent_id: str | None = None
    status: str = "queued"
    control: RunControl = field(default_factory=RunControl)
    events: list[dict] = field(default_factory=list)
    archive: ParetoArchive = field(default_factory=ParetoArchive)
    report: object | None = None
    nadir: Point | None = None
    total_hv: int | None = None
    lock: threading.Lock = field(default_factory=threading.Lock)
    changed: threading.Condition = field(default_factory=threading.Condition)
    thread: threading.Thread | None = None
    persist_path: Path | None = None

    def append_event(self, payload: dict) -> None:
        with self.changed:
            payload["seq"] = len(self.events)
            self.events.append(payload)
            if self.persist_path is not None:
                try:
                    with open(self.persist_path, "a") as fh:
                        fh.write(json.dumps(payload) + "\n")
                except OSError:
                    self.persist_path = None
            self.changed.notify_all()

    def set_status(self, status: str) -> None:
        with self.lock:
            if status == self.status:
                return
            if status not in VALID_TRANSITIONS[self.status]:
                return
            self.status = status
        self.append_event({"kind": "status", "status": status})

    @property
    def terminal(self) -> bool:
        return self.status in ("done", "cancelled")


class Registry:
    def __init__(self) -> None:
        self._lock = threading.Lock()
        self.instances: dict[str, NrpInstance] = {}
        self.runs: dict[str, ManagedRun] = {}

    def add_instance(self, instance: NrpInstance) -> str:
        with self._lock:
            iid = _new_id()
            self.instances[iid] = instance
            return iid

    def get_instance(self, iid: str) -> NrpInstance:
        try:
            return self.instances[iid]
        except KeyError:
            raise HTTPException(status_code=404, detail=f"unknown instance {iid}")

    def add_run(self, managed: ManagedRun) -> None:
        with self._lock:
            self.runs[managed.id] = managed

    def get_run(self, rid: str) -> ManagedRun:
        try:
            return self.runs[rid]
        except KeyError:
            raise HTTPException(status_code=404, detail=f"unknown run {rid}")


def _fraction_str(value: Fraction | None) -> str | None:
    if value is None:
        return None
    return f"{float(value):.6f}"


def _run_worker(managed: ManagedRun, oracle) -> None:
    problem = build_bi_objective(managed.instance)

    def sink(event) -> None:
        result = managed.archive.insert(event.point, event.solution)
        if managed.nadir is None:
            # the extremes define the reference corner once both are known
            pts = managed.archive.points
            if len(pts) >= 2:
                managed.nadir = Point(pts[-1].f1, pts[0].f2)
        hv = (
            hypervolume(managed.archive.points, managed.nadir)
            if managed.nadir is not None
            else 0
        )
        fraction = None
        if managed.total_hv is not None and managed.nadir is not None:
            fraction = (
                Fraction(1)
                if managed.total_hv == 0
                else Fraction(hv, managed.total_hv)
            )
        managed.append_event(
            {
                "kind": "point",
                "elapsed": event.elapsed,
                "point": {"f1": event.point.f1, "f2": event.point.f2},
                "satisfaction": -event.point.f1,
                "cost": event.point.f2,
                "solution": {"r": list(event.solution.r), "s": list(event.solution.s)},
                "inserted": result.added,
                "removed": [p.as_pair() for p in result.removed],
                "hv": hv,
                "hv_fraction": _fraction_str(fraction),
                "boxes": event.boxes_in_queue,
                "oracle_calls": event.oracle_calls,
            }
        )

    managed.set_status("running")
    if managed.control.pause_requested:
        managed.set_status("paused")  # a pause requested while queued applies at start
    try:
        if managed.instance.n + managed.instance.m <= 24:
            front = brute_force_front(managed.instance)
            pts = front.points
            if pts:
                nadir = Point(pts[-1].f1, pts[0].f2)
                managed.total_hv = hypervolume(pts, nadir)
        report = run(
            problem,
            managed.config,
            sink=sink,
            control=managed.control,
            oracle=oracle,
        )
        managed.report = report
        managed.set_status(
            "cancelled" if report.termination == "cancelled" else "done"
        )
    except Exception as exc:  # surface crashes as terminal events
        managed.append_event({"kind": "error", "message": str(exc)})
        managed.set_status("cancelled")


def _archive_payload(managed: ManagedRun) -> dict:
    points = []
    for p in managed.archive.points:
        sol = managed.archive.solution_for(p)
        points.append(
            {
                "f1": p.f1,
                "f2": p.f2,
                "satisfaction": -p.f1,
                "cost": p.f2,
                "solution": None
                if sol is None
                else {"r": list(sol.r), "s": list(sol.s)},
            }
        )
    hv = (
        hypervolume(managed.archive.points, managed.nadir)
        if managed.nadir is not None
        else 0
    )
    return {
        "run_id": managed.id,
        "points": points,
        "hypervolume": hv,
        "total_hypervolume": managed.total_hv,
        "nadir": None if managed.nadir is None else managed.nadir.as_pair(),
    }


def _handle_payload(managed: ManagedRun) -> dict:
    report = managed.report
    return {
        "id": managed.id,
        "instance_id": managed.instance_id,
        "parent_id": managed.parent_id,
        "algorithm": managed.config.algorithm,
        "status": managed.status,
        "deadline": managed.config.deadline,
        "archive_size": len(managed.archive),
        "events": len(managed.events),
        "termination": None if report is None else report.termination,
        "oracle_calls": None if report is None else report.stats.oracle_calls,
    }


def _parse_config(body: dict) -> RunConfig:
    try:
        lam = body.get("lambda")
        return RunConfig(
            algorithm=body["algorithm"],
            deadline=body.get("deadline"),
            lam=None if lam is None else Fraction(str(lam)),
            node_budget=int(body.get("node_budget", 10**7)),
            max_oracle_calls=body.get("max_oracle_calls"),
        )
    except KeyError as exc:
        raise HTTPException(status_code=422, detail=f"missing field {exc}")
    except (ValueError, ZeroDivisionError) as exc:
        raise HTTPException(status_code=422, detail=f"invalid config: {exc}")


def apply_whatif(instance: NrpInstance, edit: dict) -> NrpInstance:
    """Materialize cost/weight overrides into a new instance.

    Overrides must reference existing ids and respect the model bounds;
    anything else is an invalid edit.
    """
    costs = list(instance.costs)
    weights = list(instance.weights)
    try:
        for rid, cost in dict(edit.get("costs", {})).items():
            rid, cost = int(rid), int(cost)
            if not 1 <= rid <= instance.n:
                raise ValueError(f"unknown requirement id {rid}")
            if cost < 0:
                raise ValueError(f"cost of requirement {rid} must be >= 0")
            costs[rid - 1] = cost
        for sid, weight in dict(edit.get("weights", {})).items():
            sid, weight = int(sid), int(weight)
            if not 1 <= sid <= instance.m:
                raise ValueError(f"unknown stakeholder id {sid}")
            if weight < 1:
                raise ValueError(f"weight of stakeholder {sid} must be >= 1")
            weights[sid - 1] = weight
    except (TypeError, ValueError) as exc:
        raise HTTPException(status_code=422, detail=f"invalid edit: {exc}")
    return NrpInstance(
        name=f"{instance.name}-whatif",
        costs=tuple(costs),
        weights=tuple(weights),
        requests=instance.requests,
        precedence=instance.precedence,
    )


def create_app(oracle=solve, persist_dir: str | None = None, frontend_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="releasefront", version="0.1.0")
    registry = Registry()
    app.state.registry = registry
    persist_base = Path(persist_dir) if persist_dir else None
    if persist_base:
        persist_base.mkdir(parents=True, exist_ok=True)

    def start_run(
        instance_id: str,
        instance: NrpInstance,
        config: RunConfig,
        parent_id: str | None = None,
    ) -> ManagedRun:
        managed = ManagedRun(
            id=_new_id(),
            instance_id=instance_id,
            instance=instance,
            config=config,
            parent_id=parent_id,
        )
        if persist_base:
            managed.persist_path = persist_base / f"{managed.id}.jsonl"
        registry.add_run(managed)
        managed.thread = threading.Thread(
            target=_run_worker, args=(managed, oracle), daemon=True
        )
        managed.thread.start()
        return managed

    @app.post("/instances")
    def post_instance(body: dict):
        try:
            instance = instance_from_dict(body)
        except InvalidInstanceError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        iid = registry.add_instance(instance)
        return {"id": iid, "name": instance.name, "n": instance.n, "m": instance.m}

    @app.get("/instances")
    def list_instances():
        return [
            {"id": iid, "name": inst.name, "n": inst.n, "m": inst.m}
            for iid, inst in registry.instances.items()
        ]

    @app.get("/instances/{iid}")
    def get_instance(iid: str):
        instance = registry.get_instance(iid)
        doc = instance_to_dict(instance)
        doc["id"] = iid
        return doc

    @app.post("/runs")
    def post_run(body: dict):
        iid = body.get("instance_id")
        if iid is None:
            raise HTTPException(status_code=422, detail="missing field 'instance_id'")
        instance = registry.get_instance(iid)
        config = _parse_config(body)
        managed = start_run(iid, instance, config)
        return _handle_payload(managed)

    @app.get("/runs")
    def list_runs():
        return [_handle_payload(m) for m in registry.runs.values()]

    @app.get("/runs/{rid}")
    def get_run(rid: str):
        return _handle_payload(registry.get_run(rid))

    @app.get("/runs/{rid}/archive")
    def get_archive(rid: str):
        return _archive_payload(registry.get_run(rid))

    @app.post("/runs/{rid}/control")
    def post_control(rid: str, body: dict):
        managed = registry.get_run(rid)
        action = body.get("action")
        if action not in ("pause", "resume", "stop"):
            raise HTTPException(status_code=422, detail=f"unknown action {action!r}")
        if managed.terminal:
            return {"status": managed.status}  # idempotent on finished runs
        if action == "pause":
            managed.control.request_pause()
            managed.set_status("paused")
        elif action == "resume":
            managed.control.request_resume()
            managed.set_status("running")
        else:
            managed.control.request_resume()  # a paused run must observe the stop
            managed.control.request_cancel()
            if managed.thread is not None:
                managed.thread.join(timeout=10.0)
            managed.set_status("cancelled")
        return {"status": managed.status}

    @app.post("/runs/{rid}/whatif")
    def post_whatif(rid: str, body: dict):
        parent = registry.get_run(rid)
        edited = apply_whatif(parent.instance, body)
        config = parent.config
        if "algorithm" in body or "deadline" in body:
            config = _parse_config(
                {
                    "algorithm": body.get("algorithm", parent.config.algorithm),
                    "deadline": body.get("deadline", parent.config.deadline),
                }
            )
        iid = registry.add_instance(edited)
        managed = start_run(iid, edited, config, parent_id=parent.id)
        return _handle_payload(managed)

    @app.get("/runs/{rid}/events")
    def get_events(rid: str):
        managed = registry.get_run(rid)

        def stream():
            cursor = 0
            while True:
                with managed.changed:
                    while cursor >= len(managed.events):
                        if managed.terminal:
                            return
                        managed.changed.wait(timeout=0.5)
                    batch = managed.events[cursor:]
                    cursor = len(managed.events)
                for event in batch:
                    yield (
                        f"id: {event['seq']}\n"
                        f"event: {event['kind']}\n"
                        f"data: {json.dumps(event)}\n\n"
                    )

        return StreamingResponse(stream(), media_type="text/event-stream")

    if frontend_dir and Path(frontend_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=frontend_dir, html=True), name="ui")

    return app
