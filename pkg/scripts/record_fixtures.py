"""Record real API responses as JSON fixtures for the frontend tests.

Runs the service in-process against a small planted-duplicate corpus,
drives the same call sequence the UI makes, and snapshots every response
body under frontend/tests/fixtures/. Re-run after changing any payload
shape; the frontend contract tests consume these files verbatim.
"""
from __future__ import annotations

import json
import time
from pathlib import Path

from fastapi.testclient import TestClient

from labelaudit.corpus import query_by_label
from labelaudit.server import create_app
from labelaudit.synth import duplicate_pair_corpus

FIXTURES = Path(__file__).resolve().parent.parent / "frontend" / "tests" / "fixtures"

PROJECTION_CONFIG = {
    "layout": "confidence-vector",
    "color": "confidence",
    "perplexity": 12.0,
    "iterations": 260,
    "seed": 0,
}


def save(name: str, payload: dict) -> None:
    path = FIXTURES / f"{name}.json"
    path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {path.relative_to(Path.cwd())}")


def wait_job(client: TestClient, job_id: str, timeout: float = 120.0) -> dict:
    deadline = time.monotonic() + timeout
    while time.monotonic() < deadline:
        status = client.get(f"/jobs/{job_id}").json()
        if status["status"] in ("done", "error"):
            assert status["status"] == "done", status
            return status
        time.sleep(0.05)
    raise TimeoutError(f"job {job_id} did not finish")


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    snapshot = duplicate_pair_corpus(n=80, seed=0)
    client = TestClient(create_app(snapshot))

    save("health", client.get("/health").json())

    submit = client.post(
        "/train",
        json={"vectorizer_config": {"k": 32}, "training_config": {"seed": 0}},
    ).json()
    save("train_submit", submit)
    save("jobs_train_done", wait_job(client, submit["job_id"]))

    save("snapshot", client.get("/snapshot").json())
    save("labels_tree", client.get("/labels/tree").json())
    save(
        "cooccurrence_problem",
        client.get("/labels/cooccurrence", params={"category": "problem"}).json(),
    )
    save("records_all", client.get("/records").json())
    save(
        "records_label_too_hot",
        client.get("/records", params={"label": "too_hot"}).json(),
    )
    some_ids = [r.id for r in snapshot.records[:3]]
    save(
        "records_ids",
        client.get("/records", params={"ids": ",".join(some_ids)}).json(),
    )
    save("metrics", client.get("/metrics").json())
    save("confidence", client.get("/confidence").json())
    save("density", client.get("/density").json())

    submit = client.post("/projection", json={"config": PROJECTION_CONFIG}).json()
    save("projection_submit", submit)
    job = wait_job(client, submit["job_id"])
    save("jobs_projection_done", job)
    projection = job["result"]

    # Rectangle around the planted heat cluster, with margin.
    heat_ids = set(query_by_label(snapshot, "too_hot"))
    xs = [p["x"] for p in projection["points"] if p["id"] in heat_ids]
    ys = [p["y"] for p in projection["points"] if p["id"] in heat_ids]
    margin = 0.5
    polygon = [
        [min(xs) - margin, min(ys) - margin],
        [max(xs) + margin, min(ys) - margin],
        [max(xs) + margin, max(ys) + margin],
        [min(xs) - margin, max(ys) + margin],
    ]
    save(
        "projection_select",
        client.post(
            "/projection/select",
            json={"cache_key": projection["cache_key"], "polygon": polygon},
        ).json(),
    )

    target = sorted(heat_ids)[0]
    save(
        "explain",
        client.post(
            "/explain",
            json={
                "record_id": target,
                "category": "problem",
                "config": {"n_samples": 200, "seed": 0},
            },
        ).json(),
    )

    # Relabel walkthrough: two proposals, revert the second, apply the first.
    save(
        "propose_1",
        client.post(
            "/relabel/propose",
            json={
                "op": {
                    "kind": "modify",
                    "scope": {"kind": "corpus"},
                    "label": "room_hot",
                    "new_label": "too_hot",
                    "note": "duplicate of too_hot",
                }
            },
        ).json(),
    )
    save(
        "propose_2",
        client.post(
            "/relabel/propose",
            json={
                "op": {
                    "kind": "remove",
                    "scope": {"kind": "subgroup", "record_ids": some_ids[:2]},
                    "label": "too_cold",
                }
            },
        ).json(),
    )
    save("history_pending", client.get("/relabel/history").json())
    save("revert_2", client.post("/relabel/revert", json={"op_id": 2}).json())
    save("history_reverted", client.get("/relabel/history").json())
    save(
        "apply",
        client.post(
            "/relabel/apply", json={"base_version": snapshot.version}
        ).json(),
    )
    save("history_applied", client.get("/relabel/history").json())
    save("snapshot_v1", client.get("/snapshot").json())
    save("labels_tree_v1", client.get("/labels/tree").json())
    save(
        "records_all_v1",
        client.get("/records").json(),
    )


if __name__ == "__main__":
    main()
