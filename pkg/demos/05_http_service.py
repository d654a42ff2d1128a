"""
Driving the engine over HTTP
============================

Exercises the web API in-process with a test client: request an
explanation, send a verdict, and watch the policy panel and event feed
reflect the new ledger state. `planexplain serve` exposes the same
surface on a real port.
"""

from fastapi.testclient import TestClient

from planexplain.api import create_app
from planexplain.engine import Engine
from planexplain.fixtures import load_engine_config

client = TestClient(create_app(Engine(load_engine_config())))

print("profiles:", [p["name"] for p in client.get("/profiles").json()])

# Request an explanation for the AI expert at predicted levels (3, 3).
record = client.post(
    "/explanations", json={"profile": 1, "observation": [3, 3]}
).json()
print("explanation:", record["id"], "choices:", record["choices"])

# Accept it; the ledger sequence advances and the policy is re-synthesized
# lazily on the next read.
resp = client.post(f"/explanations/{record['id']}/feedback", json={"verdict": "accepted"})
print("feedback recorded at sequence", resp.json()["sequence"])

panel = client.get("/policies/1").json()
print("policy panel ledger sequence:", panel["provenance"]["ledger_sequence"])

# Belief inspection: posterior over true levels given the prediction.
beliefs = client.get("/beliefs/1", params={"obs": "3,3"}).json()
for entry in beliefs["beliefs"]:
    rounded = [round(v, 3) for v in entry["posterior"]]
    print(f"  {entry['skill']}: {rounded}")

# The event feed is the console's polling surface.
for event in client.get("/events").json():
    print("event", event["sequence"], event["kind"])
