#!/usr/bin/env python3
"""
HTTP front end: health, command listing and scenario runs
"""
import json
import sys
from pathlib import Path

from fastapi.testclient import TestClient

sys.path.insert(0, '.')
from api.main import app

client = TestClient(app)
SCENARIOS = Path(__file__).parent / "scenarios"


def load(name):
    return json.loads((SCENARIOS / f"{name}.json").read_text(encoding="utf-8"))


def test_health():
    for path in ("/", "/health"):
        response = client.get(path)
        assert response.status_code == 200
        assert response.json()["status"] == "healthy"
    print("✓ Health check endpoint")


def test_commands_info():
    response = client.get("/api/v1/commands")
    assert response.status_code == 200
    info = response.json()
    assert set(info["commands"]) == {"order", "sing", "diff", "nash", "persist", "compare",
                                     "zariski", "selftest"}
    assert info["exit_status"]["3"].startswith("inconclusive")
    print("✓ Commands info endpoint")


def test_persist_cusp():
    response = client.post("/api/v1/run", json={"command": "persist", "scenario": load("cusp"),
                                                "oracle": True})
    assert response.status_code == 200
    result = response.json()
    assert result["status"] == 0
    values = {(c["item"], c["quantity"], c["provenance"]): c["value"] for c in result["cells"]}
    assert values[("phi", "rho", "formula")] == 3
    assert values[("phi", "rho", "oracle")] == 3
    assert values[("phi", "r_bar", "formula")] == "3/2"
    print(f"✓ Persistence on the cusp: {len(result['cells'])} cells")


def test_compare_mismatch_is_a_status_not_an_error():
    response = client.post("/api/v1/run", json={"command": "compare",
                                                "scenario": load("morphism_cusp_line")})
    assert response.status_code == 200
    assert response.json()["status"] == 1
    print("✓ Mismatch reported through the status field")


def test_max_steps_override():
    response = client.post("/api/v1/run", json={"command": "nash", "scenario": load("cusp"),
                                                "max_steps": 2})
    assert response.status_code == 200
    result = response.json()
    assert result["status"] == 3
    assert result["flags"]["max_steps"] == 2


def test_error_handling():
    response = client.post("/api/v1/run", json={"command": "frobnicate", "scenario": load("cusp")})
    assert response.status_code == 400
    response = client.post("/api/v1/run", json={"command": "persist",
                                                "scenario": {"name": "t", "bogus": 1}})
    assert response.status_code == 400
    response = client.post("/api/v1/run", json={"command": "persist"})
    assert response.status_code == 400
    response = client.post("/api/v1/run", json={"command": "persist", "scenario": load("cusp"),
                                                "precision": 0})
    assert response.status_code == 422
    print("✓ Invalid requests rejected")
