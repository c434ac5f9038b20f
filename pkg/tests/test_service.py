"""HTTP service endpoints via the in-process ASGI test client."""

import pytest
from fastapi.testclient import TestClient

from qsat.sat import instance_to_json
from qsat.service.app import app

client = TestClient(app)


def _generate(n=6, k=3, density=4.0, seed=17):
    resp = client.post(
        "/instances/generate",
        json={"n": n, "k": k, "density": density, "seed": seed},
    )
    assert resp.status_code == 200
    return resp.json()


def test_health():
    resp = client.get("/health")
    assert resp.status_code == 200
    body = resp.json()
    assert body["name"] == "qsat" and body["version"]


def test_generate_deterministic_and_sized():
    a = _generate()
    b = _generate()
    assert a == b
    assert a["m"] == 24
    assert a["dimacs"].startswith("p cnf 6 24")
    assert len(a["instance"]["clauses"]) == 24


def test_generate_rejects_n_below_k():
    resp = client.post(
        "/instances/generate", json={"n": 2, "k": 3, "density": 4, "seed": 0}
    )
    assert resp.status_code == 422
    assert "n=2 < k=3" in resp.json()["detail"]


def test_solve_worked_example(worked_example):
    resp = client.post("/instances/solve", json=instance_to_json(worked_example))
    assert resp.status_code == 200
    body = resp.json()
    assert body["c_opt"] == 4
    assert sorted(body["optima"]) == ["001", "010", "011", "101"]
    assert body["optima_count"] == 4


def test_optimize_build_simulate_bench_roundtrip(worked_example):
    inst = instance_to_json(worked_example)
    resp = client.post(
        "/angles/optimize",
        json={"instance": inst, "p_min": 1, "p_max": 2, "hops": 1, "seed": 5},
    )
    assert resp.status_code == 200
    schedules = resp.json()["schedules"]
    assert [s["p"] for s in schedules] == [1, 2]
    assert schedules[1]["expectation"] >= schedules[0]["expectation"]

    build = client.post(
        "/circuits/build",
        json={
            "instance": inst,
            "gammas": schedules[0]["gammas"],
            "betas": schedules[0]["betas"],
            "gateset": "raw",
            "fmt": "qasm2",
        },
    )
    assert build.status_code == 200
    body = build.json()
    assert body["census"]["two_qubit"] == 20  # 4 clauses x 5
    assert body["text"].startswith("OPENQASM 2.0;")

    sim = client.post(
        "/simulate",
        json={
            "instance": inst,
            "gammas": schedules[1]["gammas"],
            "betas": schedules[1]["betas"],
            "shots": 25,
            "seed": 3,
        },
    )
    assert sim.status_code == 200
    shots = sim.json()["shots"]
    assert len(shots) == 25
    assert all(len(s["bitstring"]) == 3 and s["p"] == 2 for s in shots)

    ben = client.post(
        "/bench",
        json={
            "instance": inst,
            "schedules": schedules,
            "shots": 0,
            "baseline_samples": 20_000,
            "baseline_seed": 1,
        },
    )
    assert ben.status_code == 200
    body = ben.json()
    assert body["c_opt"] == 4
    means = [pt["mean_ratio"] for pt in body["curve"]]
    assert means == sorted(means)
    assert body["qaoa_volume"] == 3 * body["p_max"]
    assert body["csv"].startswith("p,mean_ratio,")


def test_bench_ideal_curve_stays_above_envelope():
    """On a non-degenerate instance the warm-started ideal curve never falls
    back to the random band, so p_noise is reported as null."""
    gen = _generate()  # n=6 seed 17
    resp = client.post(
        "/angles/optimize",
        json={"instance": gen["instance"], "p_min": 1, "p_max": 2,
              "hops": 2, "seed": 1},
    )
    schedules = resp.json()["schedules"]
    ben = client.post(
        "/bench",
        json={
            "instance": gen["instance"],
            "schedules": schedules,
            "baseline_samples": 50_000,
            "baseline_seed": 1,
        },
    )
    assert ben.status_code == 200
    body = ben.json()
    assert body["p_noise"] is None
    assert body["p_max"] == 2


def test_build_rejects_qasm2_for_k4():
    gen = _generate(n=4, k=4, density=1.0, seed=2)
    resp = client.post(
        "/circuits/build",
        json={
            "instance": gen["instance"],
            "gammas": [0.4],
            "betas": [0.2],
            "fmt": "qasm2",
        },
    )
    assert resp.status_code == 422
    assert "QASM3" in resp.json()["detail"]


def test_build_qasm3_for_k4_has_conditionals():
    gen = _generate(n=4, k=4, density=1.0, seed=2)
    resp = client.post(
        "/circuits/build",
        json={
            "instance": gen["instance"],
            "gammas": [0.4],
            "betas": [0.2],
            "fmt": "qasm3",
            "gateset": "rzz",
        },
    )
    assert resp.status_code == 200
    text = resp.json()["text"]
    assert "if (c[" in text and "reset q[" in text


def test_bench_with_external_shots(worked_example):
    inst = instance_to_json(worked_example)
    records = [
        {"p": 1, "bitstring": "010", "ancilla_outcomes": [], "seed": 0},
        {"p": 1, "bitstring": "100", "ancilla_outcomes": [], "seed": 0},
        {"p": 2, "bitstring": "010", "ancilla_outcomes": [], "seed": 0},
    ]
    resp = client.post(
        "/bench",
        json={
            "instance": inst,
            "shot_records": records,
            "baseline_samples": 5000,
        },
    )
    assert resp.status_code == 200
    body = resp.json()
    assert [pt["p"] for pt in body["curve"]] == [1, 2]
    assert body["curve"][0]["mean_ratio"] == pytest.approx((1.0 + 0.75) / 2)
    assert body["curve"][0]["source"] == "external"


def test_bench_requires_input(worked_example):
    resp = client.post(
        "/bench", json={"instance": instance_to_json(worked_example)}
    )
    assert resp.status_code == 422
