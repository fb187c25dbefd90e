import json

import pytest
from fastapi.testclient import TestClient

from presslens.graph import GraphScope, build_graph, export_graph
from presslens.service import AnalysisBundle, BundleError, create_app

# Demo paragraphs mentioning Nemci, worked out by reading the demo corpus,
# in the API's (issue_date, paragraph_id) order.
NEMCI_PARAGRAPHS = [
    "jutranjik-1895-03-12-p001",
    "vecernik-1895-03-12-p001",
    "jutranjik-1896-01-15-p006",
    "jutranjik-1896-02-10-p008",
    "vecernik-1897-02-14-p007",
    "jutranjik-1898-03-03-p011",
    "jutranjik-1898-03-03-p012",
    "vecernik-1900-12-24-p012",
    "vecernik-1903-03-03-p015",
]

NEMCI_NEGATIVE_PARAGRAPHS = [
    "jutranjik-1895-03-12-p001",
    "vecernik-1895-03-12-p001",
    "jutranjik-1896-01-15-p006",
    "vecernik-1897-02-14-p007",
    "jutranjik-1898-03-03-p011",
    "vecernik-1900-12-24-p012",
]


@pytest.fixture(scope="module")
def bundle(demo_bundle_dir):
    return AnalysisBundle.load(demo_bundle_dir)


@pytest.fixture(scope="module")
def client(bundle):
    return TestClient(create_app(bundle))


def test_bundle_requires_all_files(tmp_path):
    with pytest.raises(BundleError, match="corpus.jsonl"):
        AnalysisBundle.load(tmp_path)


def test_newspapers(client):
    response = client.get("/api/newspapers")
    assert response.status_code == 200
    assert response.json() == ["jutranjik", "vecernik"]


def test_themes_with_counts(client):
    response = client.get("/api/themes", params={"newspaper": "jutranjik"})
    counts = {row["theme"]: row["paragraphs"] for row in response.json()}
    assert counts == {
        "Political life": 4,
        "Trade and markets": 3,
        "Health": 3,
        "Culture": 2,
        "Travel": 2,
    }


def test_graph_byte_equals_offline_export(client, bundle):
    scopes = [
        ({}, GraphScope()),
        ({"newspaper": "jutranjik"}, GraphScope(newspaper="jutranjik")),
        (
            {"newspaper": "vecernik", "themes": "Political life"},
            GraphScope(newspaper="vecernik", themes=frozenset({"Political life"})),
        ),
        ({"min_weight": "2"}, GraphScope(min_weight=2)),
        (
            {"from": "1896-01-01", "to": "1900-12-31"},
            GraphScope(date_from=__import__("datetime").date(1896, 1, 1), date_to=__import__("datetime").date(1900, 12, 31)),
        ),
    ]
    for params, scope in scopes:
        response = client.get("/api/graph", params=params)
        assert response.status_code == 200
        offline = export_graph(build_graph(bundle.paragraphs, bundle.mentions, bundle.predictions, scope))
        assert response.content == offline, params


def test_graph_min_weight_above_everything(client):
    response = client.get("/api/graph", params={"min_weight": "999"})
    assert json.loads(response.content)["edges"] == []


def test_graph_invalid_params_are_400(client):
    assert client.get("/api/graph", params={"min_weight": "0"}).status_code == 400
    assert client.get("/api/graph", params={"min_weight": "abc"}).status_code == 400
    assert client.get("/api/graph", params={"from": "18960101"}).status_code == 400


def test_node_paragraphs_for_identity(client):
    response = client.get("/api/nodes/identity:Nemci/paragraphs", params={"limit": 50})
    assert response.status_code == 200
    body = response.json()
    assert body["total"] == len(NEMCI_PARAGRAPHS)
    assert [r["paragraph_id"] for r in body["results"]] == NEMCI_PARAGRAPHS
    first = body["results"][0]
    assert first["mentions"], "mention highlights expected"
    mention = first["mentions"][0]
    assert mention["identity"] == "Nemci"
    sentence_tokens = first["sentences"][mention["sentence"]]
    span_forms = [t["form"] for t in sentence_tokens[mention["start"] : mention["end"]]]
    assert span_forms == ["Nemci"]
    assert mention["label"] in ("+", "-", "0", None)


def test_node_paragraphs_sentiment_filter(client):
    response = client.get(
        "/api/nodes/identity:Nemci/paragraphs", params={"limit": 50, "sentiment": "-"}
    )
    body = response.json()
    assert [r["paragraph_id"] for r in body["results"]] == NEMCI_NEGATIVE_PARAGRAPHS


def test_node_paragraphs_theme_node(client):
    response = client.get("/api/nodes/theme:Travel/paragraphs", params={"limit": 50})
    body = response.json()
    assert body["total"] == 4
    assert all(r["theme"] == "Travel" for r in body["results"])


def test_node_paragraphs_location_node(client):
    response = client.get("/api/nodes/location:Praga/paragraphs", params={"limit": 50})
    body = response.json()
    assert body["total"] == 1
    assert body["results"][0]["paragraph_id"] == "vecernik-1898-10-10-p009"


def test_pagination_stable_pages_union_to_full(client):
    full = client.get("/api/nodes/identity:Nemci/paragraphs", params={"limit": 50}).json()
    paged = []
    offset = 0
    while True:
        page = client.get(
            "/api/nodes/identity:Nemci/paragraphs", params={"limit": 2, "offset": offset}
        ).json()
        if not page["results"]:
            break
        paged.extend(r["paragraph_id"] for r in page["results"])
        offset += 2
    assert paged == [r["paragraph_id"] for r in full["results"]]


def test_unknown_node_404_with_error_body(client):
    response = client.get("/api/nodes/identity:Marsovci/paragraphs")
    assert response.status_code == 404
    body = response.json()
    assert body["error"]["status"] == 404
    assert "Marsovci" in body["error"]["message"]


def test_malformed_node_id_400(client):
    assert client.get("/api/nodes/nonsense/paragraphs").status_code == 400
    assert client.get("/api/nodes/banana:X/paragraphs").status_code == 400


def test_invalid_pagination_400(client):
    assert client.get("/api/nodes/identity:Nemci/paragraphs", params={"limit": "0"}).status_code == 400
    assert client.get("/api/nodes/identity:Nemci/paragraphs", params={"offset": "-1"}).status_code == 400
    assert (
        client.get("/api/nodes/identity:Nemci/paragraphs", params={"sentiment": "?"}).status_code
        == 400
    )


def test_profile_endpoint_per_newspaper(client):
    response = client.get("/api/identities/Nemci/profile", params={"newspaper": "jutranjik"})
    body = response.json()
    assert body["counts"] == {"pos": 1, "neg": 3, "neu": 1}
    assert body["total"] == 5
    response = client.get("/api/identities/Nemci/profile", params={"newspaper": "vecernik"})
    assert response.json()["counts"] == {"pos": 1, "neg": 3, "neu": 0}


def test_profile_endpoint_combined(client):
    body = client.get("/api/identities/Nemci/profile").json()
    assert body["counts"] == {"pos": 2, "neg": 6, "neu": 1}
    assert {p["newspaper"] for p in body["per_newspaper"]} == {"jutranjik", "vecernik"}


def test_profile_unknown_identity_404(client):
    assert client.get("/api/identities/Marsovci/profile").status_code == 404


def test_paragraph_endpoint(client):
    response = client.get("/api/paragraphs/jutranjik-1895-03-12-p001")
    body = response.json()
    assert body["newspaper"] == "jutranjik"
    assert body["theme"] == "Political life"
    assert body["locations"] == [{"sentence": 0, "start": 5, "end": 6, "text": "Ljubljana"}]
    assert len(body["mentions"]) == 1


def test_paragraph_unknown_404(client):
    response = client.get("/api/paragraphs/unknown-id")
    assert response.status_code == 404
    assert response.json()["error"]["status"] == 404


def test_bundle_hash_header_everywhere(client, bundle):
    for path in ("/api/newspapers", "/api/graph", "/api/paragraphs/nope"):
        response = client.get(path)
        assert response.headers["X-Bundle-Hash"] == bundle.content_hash


def test_identical_queries_byte_identical(client):
    a = client.get("/api/graph", params={"newspaper": "jutranjik"})
    b = client.get("/api/graph", params={"newspaper": "jutranjik"})
    assert a.content == b.content


def test_scope_cache_single_flight_and_lru():
    import threading

    from presslens.service import _ScopeCache

    cache = _ScopeCache(max_entries=2)
    computed = []
    gate = threading.Event()

    def compute():
        gate.wait(timeout=5)
        computed.append(1)
        return b"payload"

    results = []
    threads = [threading.Thread(target=lambda: results.append(cache.get("k", compute))) for _ in range(8)]
    for t in threads:
        t.start()
    gate.set()
    for t in threads:
        t.join(timeout=5)
    assert results == [b"payload"] * 8
    assert len(computed) == 1  # single-flight: one computation for 8 callers

    cache.get("k2", lambda: b"two")
    cache.get("k3", lambda: b"three")  # evicts the least recently used entry
    assert len(cache._cache) == 2
    recomputed = []
    cache.get("k", lambda: (recomputed.append(1), b"again")[1])
    assert recomputed == [1]
