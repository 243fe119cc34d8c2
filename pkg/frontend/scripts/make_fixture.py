"""Record real service responses for the workbench test fixture.

Run from the repository root after installing the Python package:
    python3 frontend/scripts/make_fixture.py
"""

import json
import pathlib

import numpy as np
from fastapi.testclient import TestClient

from ssakit.service import create_app


def main():
    rng = np.random.default_rng(2718)
    n = np.arange(1, 121, dtype=float)
    values = (np.exp(0.01 * n) + 1.5 * np.sin(2 * np.pi * n / 12)
              + 0.05 * rng.standard_normal(120)).tolist()

    client = TestClient(create_app())
    body = {"values": values, "window_length": 48, "n_components": 8}
    created = client.post("/sessions", json=body).json()
    sid = created["id"]

    components = {}
    for m in range(1, created["d"] + 1 if created["d"] <= 8 else 9):
        components[str(m)] = client.get(f"/sessions/{sid}/components/{m}").json()

    grouping_body = {"trend": [1], "seasonality": [2, 3, 4, 5]}
    grouping_response = client.put(f"/sessions/{sid}/grouping", json=grouping_body).json()
    session_after_put = client.get(f"/sessions/{sid}").json()
    wcor = client.get(f"/sessions/{sid}/wcor").json()
    forecast = client.post(
        f"/sessions/{sid}/forecast", json={"group": "seasonality", "horizon": 24}
    ).json()
    forecast_bands = client.post(
        f"/sessions/{sid}/forecast",
        json={"group": "seasonality", "horizon": 12,
              "intervals": {"level": 0.9, "n_surrogates": 100, "seed": 5}},
    ).json()

    fixture = {
        "request": body,
        "session": created,
        "components": components,
        "groupingBody": grouping_body,
        "groupingResponse": grouping_response,
        "sessionAfterPut": session_after_put,
        "wcor": wcor,
        "forecast": forecast,
        "forecastWithBands": forecast_bands,
    }
    out = pathlib.Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "session.json"
    out.write_text(json.dumps(fixture))
    print(f"wrote {out} ({out.stat().st_size} bytes)")


if __name__ == "__main__":
    main()
