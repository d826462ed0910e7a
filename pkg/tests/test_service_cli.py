import json
import subprocess
import sys

import pytest
from fastapi.testclient import TestClient

from qtoda.cartan import build_root_system
from qtoda.qdiff import DifferenceOperator
from qtoda.service import app
from qtoda.triples import pair_to_dict, random_pair, standard_pair
from qtoda.verify import base_field

from conftest import field_for

client = TestClient(app)


def _pair_payload(tag, rng=None, numeric=True):
    rs, F = field_for(tag)
    import random
    pair = random_pair(rs, F, rng or random.Random(1), numeric_c=numeric)
    return rs, F, pair_to_dict(pair)


def test_health():
    assert client.get("/health").json() == {"status": "ok"}


def test_hamiltonian_roundtrip_and_modes():
    rs, F, payload = _pair_payload("C2")
    resp = client.post("/hamiltonian", json={"type": "C2", "mode": "closed",
                                             "pair": payload})
    assert resp.status_code == 200
    body = resp.json()
    op = DifferenceOperator.from_json_obj(rs, base_field(rs, ("kappa",)),
                                          body["operator"])
    resp2 = client.post("/hamiltonian", json={"type": "C2", "mode": "generic",
                                              "pair": payload})
    assert resp2.json()["operator"] == body["operator"]
    latex = client.post("/hamiltonian",
                        json={"type": "G2", "mode": "standard",
                              "format": "latex"}).json()["latex"]
    assert "T_{" in latex
    assert client.post("/hamiltonian",
                       json={"type": "A2", "mode": "closed"}).status_code == 422
    assert client.post("/hamiltonian",
                       json={"type": "Q9", "mode": "standard"}).status_code == 422


def test_lax_endpoint():
    resp = client.post("/lax", json={"family": "A", "rank": 2, "k": [1, 0],
                                     "checks": ["rtt", "commute"]})
    body = resp.json()
    assert body["rtt"] is True and body["commute"] is True
    assert body["h2_matches_formula"] is True
    resp = client.post("/lax", json={"family": "C", "rank": 1, "k": [0],
                                     "checks": ["rtt"]})
    assert resp.json()["rtt"] is False  # documented defect of the double
    assert client.post("/lax", json={"family": "A", "rank": 2,
                                     "k": [5, 0]}).status_code == 422


def test_whittaker_endpoints():
    rs, F, payload = _pair_payload("A1")
    for route in ("recursive", "closed", "oracle"):
        resp = client.post("/whittaker", json={"type": "A1", "pair": payload,
                                               "degree": 2, "route": route})
        assert resp.status_code == 200
        coeffs = resp.json()["coefficients"]
        assert coeffs[0] == {"beta": [0], "coeff": "1"}
    resp = client.post("/whittaker/eigencheck",
                       json={"type": "A1", "pair": payload, "degree": 2})
    assert resp.json()["ok"] is True


def test_conjugate_endpoint(rng):
    rs, F = field_for("A2")
    from qtoda.triples import epsilon_invariant
    pa = random_pair(rs, F, rng, numeric_c=True)
    while True:
        pb = random_pair(rs, F, rng, numeric_c=True)
        if epsilon_invariant(pb) == epsilon_invariant(pa):
            break
    resp = client.post("/conjugate", json={"type": "A2",
                                           "pairA": pair_to_dict(pa),
                                           "pairB": pair_to_dict(pb)})
    assert resp.status_code == 200
    assert resp.json()["verified"] is True
    while True:
        pc = random_pair(rs, F, rng, numeric_c=True)
        if epsilon_invariant(pc) != epsilon_invariant(pa):
            break
    resp = client.post("/conjugate", json={"type": "A2",
                                           "pairA": pair_to_dict(pa),
                                           "pairB": pair_to_dict(pc)})
    assert resp.status_code == 409


def test_laumon_endpoint():
    resp = client.post("/laumon", json={"rank": 2, "degree": 2,
                                        "checks": ["relations", "dj"]})
    body = resp.json()
    assert body["ok"] is True
    assert len(body["checks"]) == 2


def test_verify_endpoint():
    resp = client.post("/verify", json={"suite": "hamiltonian", "type": "D4",
                                        "trials": 2})
    assert resp.json()["ok"] is True
    assert client.post("/verify", json={"suite": "nope"}).status_code == 422


def _cli(*args):
    return subprocess.run([sys.executable, "-m", "qtoda.cli", *args],
                          capture_output=True, text=True)


def test_cli_round_trips(tmp_path):
    rs, F, payload = _pair_payload("A2")
    pair_file = tmp_path / "pair.json"
    pair_file.write_text(json.dumps(payload))
    out_file = tmp_path / "d1.json"
    res = _cli("hamiltonian", "--type", "A2", "--pair", str(pair_file),
               "--out", str(out_file))
    assert res.returncode == 0
    data = json.loads(out_file.read_text())
    assert data["operator"]
    res = _cli("verify", "--suite", "lax", "--rank", "2")
    assert res.returncode == 0
    assert "[ok]" in res.stderr
    res = _cli("hamiltonian", "--type", "A2", "--pair", "/missing.json")
    assert res.returncode == 2
    res = _cli("lax", "--type", "A", "--rank", "2", "--k", "0,0",
               "--check", "rtt")
    assert res.returncode == 0
    res = _cli("whittaker", "eigencheck", "--type", "A1", "--pair",
               str(tmp_path / "pair1.json"))
    assert res.returncode == 2  # missing file


def test_cli_whittaker_and_eigencheck(tmp_path):
    rs, F, payload = _pair_payload("A1")
    pair_file = tmp_path / "pair.json"
    pair_file.write_text(json.dumps(payload))
    res = _cli("whittaker", "--type", "A1", "--pair", str(pair_file),
               "--degree", "2", "--route", "closed")
    assert res.returncode == 0
    res = _cli("whittaker", "eigencheck", "--type", "A1", "--pair",
               str(pair_file), "--degree", "2")
    assert res.returncode == 0


def test_cli_deterministic_output(tmp_path):
    rs, F, payload = _pair_payload("A1")
    pair_file = tmp_path / "pair.json"
    pair_file.write_text(json.dumps(payload))
    r1 = _cli("whittaker", "--type", "A1", "--pair", str(pair_file))
    r2 = _cli("whittaker", "--type", "A1", "--pair", str(pair_file))
    assert r1.stdout == r2.stdout
