"""Record API responses as fixtures for the frontend contract tests.

Run from the repository root after changing anything that affects the
wire formats:

    python scripts/record_fixtures.py
"""

import json
import os

from fastapi.testclient import TestClient

from hysim.acc import make_acc_program
from hysim.server import create_app

OUT = os.path.join(os.path.dirname(__file__), os.pardir,
                   "frontend", "tests", "fixtures")

PARSE_ERROR_SOURCE = """\
x := 0;
v := 2;
x' = v, v' 2 for 3;
"""

ALL_FAILED_SOURCE = "a := [1, 2];\nx := sqrt(0 - 1);\n"


def record(client: TestClient, name: str, payload: dict) -> None:
    os.makedirs(OUT, exist_ok=True)
    with open(os.path.join(OUT, name), "w") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")
    print(f"wrote {name}")


def main() -> None:
    with TestClient(create_app()) as client:
        acc = make_acc_program()

        trace = client.post("/api/simulate", json={
            "source": acc, "maxTime": 30, "sampleEvery": 0.5,
            "odeStep": 0.01})
        assert trace.status_code == 200
        record(client, "acc_trace.json",
               {"request": {"source": acc, "maxTime": 30,
                            "sampleEvery": 0.5, "odeStep": 0.01},
                "response": trace.json()})

        hist = client.post("/api/histogram", json={
            "source": acc, "query": "histogram: ct <= 0 @ every 0.5",
            "maxTime": 30, "sampleEvery": 0.5, "odeStep": 0.01})
        assert hist.status_code == 200
        record(client, "acc_hist.json",
               {"request": {"source": acc,
                            "query": "histogram: ct <= 0 @ every 0.5",
                            "maxTime": 30, "sampleEvery": 0.5,
                            "odeStep": 0.01},
                "response": hist.json()})

        bad = client.post("/api/parse", json={"source": PARSE_ERROR_SOURCE})
        assert bad.status_code == 200 and not bad.json()["ok"]
        record(client, "parse_error.json",
               {"source": PARSE_ERROR_SOURCE, "response": bad.json()})

        failed = client.post("/api/simulate", json={
            "source": ALL_FAILED_SOURCE, "maxTime": 5})
        assert failed.status_code == 200
        assert all(r["status"] == "failed"
                   for r in failed.json()["runs"])
        record(client, "all_failed_trace.json",
               {"request": {"source": ALL_FAILED_SOURCE, "maxTime": 5},
                "response": failed.json()})


if __name__ == "__main__":
    main()
