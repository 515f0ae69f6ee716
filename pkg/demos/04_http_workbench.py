"""Drive every workbench endpoint against an in-process service instance.

The browser UI consumes exactly these endpoints; this script is the same
conversation a UI session would have: upload CSV, create a session, place a
cross, drag a component, refine a component, read the merged assignment.

Run:  python3 demos/04_http_workbench.py
"""

import tempfile
from pathlib import Path

import numpy as np
from fastapi.testclient import TestClient

from treecut import generate_gaussian_mixture
from treecut.service import create_app

data_dir = Path(tempfile.mkdtemp(prefix="treecut-demo-"))
client = TestClient(create_app(data_dir))
print("health:", client.get("/health").json())

# -- upload a labeled CSV ------------------------------------------------------

blobs = generate_gaussian_mixture(n_per_cluster=12, d=2, m=3, separation=25.0, seed=5)
csv_text = "\n".join(
    ",".join(repr(float(v)) for v in row) + f",{int(lab)}"
    for row, lab in zip(blobs.points, blobs.labels)
)
resp = client.post("/datasets", params={"attr_kind": "numeric", "label_column": 2, "name": "three-blobs"}, content=csv_text)
dataset_id = resp.json()["dataset"]
print("dataset:", resp.json())

# -- create a session and inspect the layout -----------------------------------

resp = client.post("/sessions", json={"dataset": dataset_id, "sigma": "auto", "dim": 1, "method": "classical"})
session_id = resp.json()["session"]
layout = resp.json()["layout"]
print(f"session {session_id}: {layout['n']} nodes, {len(layout['edges'])} edges, k={layout['components']['k']}")

# -- one cross gesture ----------------------------------------------------------

coords = np.array(layout["coords"])
axis = np.array(layout["potential_axis"])
child, par, _ = max(layout["edges"], key=lambda e: e[2])
mid = [float((coords[child][0] + coords[par][0]) / 2), float((axis[child] + axis[par]) / 2)]
resp = client.post(f"/sessions/{session_id}/crosses", json={"point": mid})
print("cross resolved edge", resp.json()["edge"], "-> k =", resp.json()["components"]["k"])

# -- drag a component, then refine the other ------------------------------------

client.post(f"/sessions/{session_id}/offset", json={"component": 1, "delta": [15.0]})
resp = client.post(f"/sessions/{session_id}/divide", json={"component": 0})
print("divide child:", resp.json()["session"], "n =", resp.json()["layout"]["n"])
resp = client.post(f"/sessions/{session_id}/conquer", json={"component": 1, "sigma": 2.0})
print("conquer child:", resp.json()["session"])

# -- constraints and the merged assignment --------------------------------------

client.put(f"/sessions/{session_id}/constraints", json={"must_link": [[0, 1]], "cannot_link": [[0, 35]], "labels": []})
print("violations:", client.get(f"/sessions/{session_id}/violations").json())
assignment = client.get(f"/sessions/{session_id}/assignment").text
print("assignment head:", assignment.splitlines()[:4])
print("persisted under:", data_dir)
