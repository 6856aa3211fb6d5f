import math

import numpy as np
import pytest
from fastapi.testclient import TestClient

from conftest import trivial_problem
from multipoint import api
from multipoint.model import OUTER_RIGHT, grid_to_doc, problem_to_dict, sampled
from multipoint.service.app import app

TWO_PI = 2.0 * math.pi


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


@pytest.fixture()
def problem_doc():
    return problem_to_dict(trivial_problem())


def test_health(client):
    r = client.get("/health")
    assert r.status_code == 200 and r.json() == {"status": "ok"}


def test_spectrum_endpoint_matches_inprocess_api(client, problem_doc):
    r = client.post("/spectrum", json={"problem": problem_doc,
                                       "window": [-7, 7], "norm_probe": [1.0]})
    assert r.status_code == 200
    served = r.json()
    local = api.spectrum_report(problem_doc, (-7.0, 7.0), [1.0])
    assert [e["lambda"] for e in served["entries"]] == [e["lambda"] for e in local["entries"]]
    assert served["probes"] == local["probes"]
    assert served["classification"] == local["classification"]


def test_resolvent_endpoint(client, problem_doc):
    p = trivial_problem()
    f3 = sampled(p, OUTER_RIGHT, lambda t: np.exp(-(t - p.intervals.a3)))
    r = client.post("/resolvent", json={"problem": problem_doc,
                                        "lam": [0.0, 1.0],
                                        "f": [grid_to_doc(f3)]})
    assert r.status_code == 200
    doc = r.json()
    assert doc["f1star"][0][1] == pytest.approx(0.5, abs=1e-5)
    assert doc["residual_bc"] <= 1e-9


def test_verify_endpoint(client, problem_doc):
    r = client.post("/verify", json={"problem": problem_doc, "pairs": 20, "seed": 5})
    assert r.status_code == 200
    assert r.json()["pass"] is True


def test_oracle_compare_endpoint(client, problem_doc):
    r = client.post("/oracle-compare", json={
        "problem": problem_doc, "window": [-7, 7],
        "samples": 1001, "rk4_steps": 256})
    assert r.status_code == 200
    assert r.json()["pass"] is True


def test_example_pde_endpoint(client):
    r = client.post("/example-pde", json={"modes": 1, "psi": 0.0, "window": [-7, 7]})
    assert r.status_code == 200
    lams = [e["lambda"] for e in r.json()["entries"]]
    assert lams == pytest.approx([-TWO_PI, 0.0, TWO_PI], abs=1e-12)


def test_validation_error_maps_to_400(client, problem_doc):
    bad = dict(problem_doc)
    bad["W2"] = [[[2.0, 0.0]]]
    r = client.post("/spectrum", json={"problem": bad, "window": [-7, 7]})
    assert r.status_code == 400
    assert "W2" in r.json()["detail"]


def test_unknown_fields_rejected_by_schema(client, problem_doc):
    r = client.post("/spectrum", json={"problem": problem_doc,
                                       "window": [-7, 7], "bogus": 1})
    assert r.status_code == 422
    extra = dict(problem_doc)
    extra["unexpected"] = 3
    r = client.post("/spectrum", json={"problem": extra, "window": [-7, 7]})
    assert r.status_code == 422


def test_bad_window_shape_rejected(client, problem_doc):
    r = client.post("/spectrum", json={"problem": problem_doc, "window": [1.0]})
    assert r.status_code == 422


def test_cli_url_mode_against_live_server(tmp_path, problem_doc):
    import json
    import socket
    import subprocess
    import sys
    import time as _time

    from multipoint.cli import main
    from multipoint.reporting import json_dumps

    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        port = s.getsockname()[1]
    proc = subprocess.Popen(
        [sys.executable, "-m", "multipoint.service", "--host", "127.0.0.1",
         "--port", str(port)],
        stdout=subprocess.DEVNULL, stderr=subprocess.DEVNULL)
    url = f"http://127.0.0.1:{port}"
    try:
        import httpx
        for _ in range(100):
            try:
                if httpx.get(url + "/health", timeout=1.0).status_code == 200:
                    break
            except httpx.HTTPError:
                _time.sleep(0.1)
        else:
            pytest.skip("service did not come up")
        ppath = tmp_path / "problem.json"
        ppath.write_text(json_dumps(problem_doc))
        out = tmp_path / "remote.json"
        rc = main(["spectrum", "--problem", str(ppath), "--window", "-7", "7",
                   "--out", str(out), "--url", url])
        assert rc == 0
        doc = json.loads(out.read_text())
        assert len(doc["entries"]) == 3
    finally:
        proc.terminate()
        proc.wait(timeout=10)
