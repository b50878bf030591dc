"""HTTP service endpoints: payloads, outcomes, and error kinds."""

from fastapi.testclient import TestClient

from conftest import data_text
from trichrome.service import app

client = TestClient(app)

FUSE_L = (
    "diagram rg { inputs a; outputs b; node x: green 1; node y: green 2;"
    " wire a -> x; wire x -> y; wire y -> b; }"
)
FUSE_R = "diagram rg { inputs a; outputs b; node x: green 3; wire a -> x; wire x -> b; }"


def kind_of(resp) -> str:
    assert resp.status_code == 422
    return resp.json()["detail"]["kind"]


def test_health():
    resp = client.get("/health")
    assert resp.status_code == 200
    assert resp.json()["status"] == "ok"


def test_eval_exact_and_float():
    resp = client.post("/eval", json={"source": FUSE_R})
    body = resp.json()
    assert resp.status_code == 200
    assert (body["rows"], body["cols"], body["exact"]) == (2, 2, True)
    assert body["entries"][0][0].startswith("((1)")
    resp = client.post("/eval", json={"source": FUSE_R, "float_mode": True})
    body = resp.json()
    assert body["exact"] is False
    assert body["entries"][0][0] == "1.0+0.0j"


def test_eval_error_kinds():
    assert kind_of(client.post("/eval", json={"source": "diagram zz {}"})) == "parse"
    undecorated = "diagram rg { inputs a; }"
    assert kind_of(client.post("/eval", json={"source": undecorated})) == "validation"
    u1 = "diagram rgplus { outputs o; node n: green rad 0.5; wire n -> o; }"
    assert kind_of(client.post("/eval", json={"source": u1})) == "validation"
    assert client.post("/eval", json={"source": u1, "float_mode": True}).status_code == 200


def test_equal():
    resp = client.post("/equal", json={"left": FUSE_L, "right": FUSE_R})
    assert resp.json() == {"equal": True}
    other = "diagram rg { inputs a; outputs b; node x: green 1; wire a -> x; wire x -> b; }"
    resp = client.post("/equal", json={"left": FUSE_L, "right": other})
    assert resp.json() == {"equal": False}
    resp = client.post(
        "/equal", json={"left": FUSE_L, "right": FUSE_R, "float_mode": True, "tol": 1e-6}
    )
    assert resp.json() == {"equal": True}


def test_rewrite_applies_script():
    resp = client.post(
        "/rewrite", json={"source": FUSE_L, "script": "apply spider-fusion at node=1, node=2"}
    )
    body = resp.json()
    assert resp.status_code == 200
    assert body["steps"] == ["apply spider-fusion at node=1,node=2"]
    assert "green 3" in body["result"]


def test_rewrite_error_kinds():
    bad_script = client.post("/rewrite", json={"source": FUSE_L, "script": "quux"})
    assert kind_of(bad_script) == "parse"
    no_match = client.post(
        "/rewrite", json={"source": FUSE_L, "script": "apply copy at node=1"}
    )
    assert kind_of(no_match) == "script"


def test_translate():
    resp = client.post("/translate", json={"source": FUSE_R, "to": "rgb"})
    assert resp.status_code == 200
    assert resp.json()["result"].startswith("diagram rgb {")
    resp = client.post("/translate", json={"source": FUSE_R, "to": "rgplus"})
    assert resp.json()["result"].startswith("diagram rgplus {")
    rgb = client.post("/translate", json={"source": FUSE_R, "to": "rgb"}).json()["result"]
    assert client.post("/translate", json={"source": rgb, "to": "rgplus"}).status_code == 200
    assert kind_of(client.post("/translate", json={"source": rgb, "to": "rgb"})) == "validation"
    assert kind_of(client.post("/translate", json={"source": FUSE_R, "to": "rg"})) == "usage"
    assert kind_of(client.post("/translate", json={"source": FUSE_R, "to": "teal"})) == "usage"


def test_search():
    resp = client.post("/search", json={"left": FUSE_L, "right": FUSE_R, "depth": 2})
    body = resp.json()
    assert body["found"] is True
    assert body["script"].startswith("apply spider-fusion")
    resp = client.post(
        "/search",
        json={"left": FUSE_L, "right": FUSE_R, "depth": 2, "flavour": "rgb"},
    )
    assert kind_of(resp) == "validation"
    lhs = data_text("corpus", "rg-supp-lhs.rgd")
    rhs = data_text("corpus", "rg-supp-rhs.rgd")
    resp = client.post("/search", json={"left": lhs, "right": rhs, "depth": 1})
    assert resp.json() == {"found": False, "script": None}


def test_search_flavour_mismatch():
    rgb = client.post("/translate", json={"source": FUSE_R, "to": "rgb"}).json()["result"]
    resp = client.post("/search", json={"left": FUSE_L, "right": rgb})
    assert kind_of(resp) == "validation"


def test_verify_endpoint():
    resp = client.post("/verify", json={"suite": "euler"})
    body = resp.json()
    assert body["ok"] is True and body["passed"] == body["total"] == 2
    assert "suite euler" in body["report"]
    assert all(c["ok"] for c in body["checks"])
    assert kind_of(client.post("/verify", json={"suite": "bogus"})) == "usage"
    assert (
        kind_of(client.post("/verify", json={"suite": "axioms", "flavours": ["teal"]}))
        == "usage"
    )


def test_malformed_request_body():
    resp = client.post("/eval", json={})
    assert resp.status_code == 422
    assert isinstance(resp.json()["detail"], list)  # model validation, no kind
