"""Drive the HTTP control plane: stream a run, steer it, fork a what-if.

Uses the in-process test client so the demo needs no open port; the same
requests work against ``releasefront serve --port 8000``.
"""

import json

from fastapi.testclient import TestClient

from releasefront import NrpInstance, instance_to_dict
from releasefront.service import create_app

instance = NrpInstance(
    name="whatif-demo",
    costs=(2, 3, 4),
    weights=(5, 4),
    requests=(frozenset({2}), frozenset({3})),
    precedence=frozenset({(1, 2)}),
)

app = create_app()
with TestClient(app) as client:
    iid = client.post("/instances", json=instance_to_dict(instance)).json()["id"]
    print("uploaded instance:", iid)

    handle = client.post(
        "/runs", json={"instance_id": iid, "algorithm": "any-hybrid"}
    ).json()
    rid = handle["id"]
    print("started run:", rid, handle["status"])

    print("\nevent stream (replayed):")
    with client.stream("GET", f"/runs/{rid}/events") as response:
        for line in response.iter_lines():
            if line.startswith("data: "):
                event = json.loads(line[6:])
                if event["kind"] == "point":
                    print(
                        f"  point satisfaction {event['satisfaction']:3d}"
                        f" cost {event['cost']:3d}"
                        f"  hv {event['hv']:3d}"
                        f"  fraction {event['hv_fraction']}"
                    )
                else:
                    print(f"  status -> {event.get('status', event['kind'])}")

    archive = client.get(f"/runs/{rid}/archive").json()
    print("\nfinal archive:", [(p["satisfaction"], p["cost"]) for p in archive["points"]])

    print("\nwhat if requirement 3 became more expensive (4 -> 7)?")
    child = client.post(f"/runs/{rid}/whatif", json={"costs": {"3": 7}}).json()
    print("forked child run:", child["id"], "parent:", child["parent_id"])
    import time

    while client.get(f"/runs/{child['id']}").json()["status"] not in ("done", "cancelled"):
        time.sleep(0.01)
    edited = client.get(f"/runs/{child['id']}/archive").json()
    print("edited front: ", [(p["satisfaction"], p["cost"]) for p in edited["points"]])
    print("parent front kept:", [(p["satisfaction"], p["cost"]) for p in archive["points"]])
