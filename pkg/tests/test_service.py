import time

import pytest
from fastapi.testclient import TestClient

from turkpos.config import ServiceConfig
from turkpos.corpus import read_corpus, sample_corpus_path
from turkpos.service import create_app
from turkpos.store import ModelDir
from turkpos.trainer import TrainConfig, train


RETRAIN_CONFIG = TrainConfig(epochs=150, batch_size=8, embed_dim=16, hidden_dim=16, seed=7)


def make_config(tmp_path, train_config=RETRAIN_CONFIG, max_text_bytes=500):
    return ServiceConfig(
        model_dir=str(tmp_path / "models"),
        store_dir=str(tmp_path / "store"),
        corpus_path=str(sample_corpus_path()),
        max_text_bytes=max_text_bytes,
        train=train_config,
    )


@pytest.fixture(scope="module")
def base_model(sample_corpus):
    model, _ = train(sample_corpus, RETRAIN_CONFIG)
    return model


@pytest.fixture
def client(tmp_path, base_model):
    config = make_config(tmp_path)
    ModelDir(config.model_dir).save_version(base_model, 1)
    app = create_app(config)
    return TestClient(app), config


def wait_for_retrain(http, timeout=120.0):
    deadline = time.time() + timeout
    while time.time() < deadline:
        status = http.get("/api/admin/retrain").json()
        if status["status"] in ("completed", "failed"):
            return status
        time.sleep(0.05)
    raise TimeoutError("retrain did not finish")


class TestAnalyses:
    def test_analyze_text(self, client):
        http, _ = client
        r = http.post("/api/analyses", json={"text": "Küçük kedi dün uyudu."})
        assert r.status_code == 201
        body = r.json()
        assert body["model_version"] == "v0001"
        assert body["source"] == "text"
        for s in body["result"]["sentences"]:
            assert len(s["tokens"]) == len(s["tags"])

    def test_repeat_gives_new_id_same_content(self, client):
        http, _ = client
        a = http.post("/api/analyses", json={"text": "kedi süt içti."}).json()
        b = http.post("/api/analyses", json={"text": "kedi süt içti."}).json()
        assert a["id"] != b["id"]
        assert a["result"] == b["result"]

    def test_empty_body_rejected(self, client):
        http, _ = client
        assert http.post("/api/analyses", json={"text": "   "}).status_code == 400

    def test_punctuation_only_rejected(self, client):
        http, _ = client
        assert http.post("/api/analyses", json={"text": "!!! 123"}).status_code == 400

    def test_oversized_rejected(self, client):
        http, _ = client
        r = http.post("/api/analyses", json={"text": "kedi " * 200})
        assert r.status_code == 400

    def test_get_analysis(self, client):
        http, _ = client
        created = http.post("/api/analyses", json={"text": "kedi uyudu."}).json()
        fetched = http.get(f"/api/analyses/{created['id']}")
        assert fetched.status_code == 200
        assert fetched.json() == created

    def test_get_unknown_analysis(self, client):
        http, _ = client
        assert http.get("/api/analyses/nope").status_code == 404

    def test_api_version_header(self, client):
        http, _ = client
        r = http.get("/api/tagset")
        assert r.headers["X-API-Version"] == "1"

    def test_no_model_gives_503(self, tmp_path):
        config = make_config(tmp_path / "empty")
        http = TestClient(create_app(config))
        assert http.post("/api/analyses", json={"text": "kedi"}).status_code == 503


class TestDocuments:
    def test_upload(self, client):
        http, _ = client
        r = http.post(
            "/api/documents?filename=not.txt",
            content="Kedi süt içti. Köpek havladı!".encode("utf-8"),
        )
        assert r.status_code == 201
        body = r.json()
        assert body["source"] == "document"
        assert body["result"]["filename"] == "not.txt"

    def test_non_utf8_rejected(self, client):
        http, _ = client
        r = http.post("/api/documents", content=b"\xff\xfe\x00\x01")
        assert r.status_code == 415

    def test_empty_rejected(self, client):
        http, _ = client
        assert http.post("/api/documents", content=b"").status_code == 400


class TestTagset:
    def test_matches_model_order(self, client, base_model):
        http, _ = client
        body = http.get("/api/tagset").json()
        assert body["tags"] == base_model.vocab.real_tags
        assert "-PAD-" not in body["tags"]


class TestCorrections:
    def analyze(self, http, text="kedi süt içti."):
        return http.post("/api/analyses", json={"text": text}).json()

    def test_valid_correction(self, client):
        http, _ = client
        analysis = self.analyze(http)
        current = analysis["result"]["sentences"][0]["tags"][0]
        other = next(t for t in http.get("/api/tagset").json()["tags"] if t != current)
        r = http.post(
            "/api/corrections",
            json={
                "analysis_id": analysis["id"],
                "sentence_index": 0,
                "token_index": 0,
                "corrected_tag": other,
            },
        )
        assert r.status_code == 201
        body = r.json()
        assert body["original_tag"] == current
        assert body["corrected_tag"] == other
        assert body["id"]

    def test_unknown_analysis(self, client):
        http, _ = client
        r = http.post(
            "/api/corrections",
            json={"analysis_id": "nope", "sentence_index": 0, "token_index": 0,
                  "corrected_tag": "NOUN"},
        )
        assert r.status_code == 404

    def test_index_out_of_range(self, client):
        http, _ = client
        analysis = self.analyze(http)
        r = http.post(
            "/api/corrections",
            json={"analysis_id": analysis["id"], "sentence_index": 0,
                  "token_index": 99, "corrected_tag": "NOUN"},
        )
        assert r.status_code == 422

    def test_unknown_tag(self, client):
        http, _ = client
        analysis = self.analyze(http)
        r = http.post(
            "/api/corrections",
            json={"analysis_id": analysis["id"], "sentence_index": 0,
                  "token_index": 0, "corrected_tag": "XYZ"},
        )
        assert r.status_code == 422

    def test_same_tag_conflict(self, client):
        http, _ = client
        analysis = self.analyze(http)
        current = analysis["result"]["sentences"][0]["tags"][0]
        r = http.post(
            "/api/corrections",
            json={"analysis_id": analysis["id"], "sentence_index": 0,
                  "token_index": 0, "corrected_tag": current},
        )
        assert r.status_code == 409


class TestRetrain:
    def test_retrain_without_corrections(self, client):
        http, _ = client
        assert http.post("/api/admin/retrain").status_code == 422

    def test_full_correction_loop(self, client):
        http, config = client
        # "zebra" is out of vocabulary: after merging the corrected sentence
        # it appears exactly once, tagged NOUN, so the retrained model has
        # unambiguous evidence for it.
        analysis = http.post("/api/analyses", json={"text": "kedi zebra gördü."}).json()
        sentence = analysis["result"]["sentences"][0]
        zebra = sentence["tokens"].index("zebra")
        assert sentence["oov"][zebra] is True
        corrected_tag = "NOUN" if sentence["tags"][zebra] != "NOUN" else "VERB"
        r = http.post(
            "/api/corrections",
            json={"analysis_id": analysis["id"], "sentence_index": 0,
                  "token_index": zebra, "corrected_tag": corrected_tag},
        )
        assert r.status_code == 201

        r = http.post("/api/admin/retrain")
        assert r.status_code == 202
        # Analyses keep working while the retrain runs.
        during = http.post("/api/analyses", json={"text": "köpek koştu."})
        assert during.status_code == 201
        status = wait_for_retrain(http)
        assert status["status"] == "completed"
        assert status["model_version"] == "v0002"

        merged = read_corpus(ModelDir(config.model_dir).corpus_path(2))
        base = read_corpus(config.corpus_path)
        assert len(merged) == len(base) + 1
        assert merged[-1][zebra] == ("zebra", corrected_tag)

        after = http.post("/api/analyses", json={"text": "kedi zebra gördü."}).json()
        assert after["model_version"] == "v0002"
        assert after["result"]["sentences"][0]["tags"][zebra] == corrected_tag
        # zebra is in vocabulary now
        assert after["result"]["sentences"][0]["oov"][zebra] is False

        # corrections were consumed: nothing left to merge
        assert http.post("/api/admin/retrain").status_code == 422

    def test_concurrent_retrain_conflicts(self, client):
        http, _ = client
        analysis = http.post("/api/analyses", json={"text": "kedi süt içti."}).json()
        tags = analysis["result"]["sentences"][0]["tags"]
        other = next(t for t in http.get("/api/tagset").json()["tags"] if t != tags[0])
        http.post(
            "/api/corrections",
            json={"analysis_id": analysis["id"], "sentence_index": 0,
                  "token_index": 0, "corrected_tag": other},
        )
        first = http.post("/api/admin/retrain")
        assert first.status_code == 202
        second = http.post("/api/admin/retrain")
        assert second.status_code == 409
        wait_for_retrain(http)


class TestDurability:
    def test_state_survives_restart(self, tmp_path, base_model):
        config = make_config(tmp_path)
        ModelDir(config.model_dir).save_version(base_model, 1)
        http = TestClient(create_app(config))
        analysis = http.post("/api/analyses", json={"text": "kedi süt içti."}).json()
        tags = analysis["result"]["sentences"][0]["tags"]
        other = next(t for t in http.get("/api/tagset").json()["tags"] if t != tags[0])
        correction = http.post(
            "/api/corrections",
            json={"analysis_id": analysis["id"], "sentence_index": 0,
                  "token_index": 0, "corrected_tag": other},
        ).json()

        reborn = TestClient(create_app(config))
        fetched = reborn.get(f"/api/analyses/{analysis['id']}")
        assert fetched.status_code == 200
        assert fetched.json() == analysis
        pending = reborn.app.state.corrections.pending()
        assert [c.id for c in pending] == [correction["id"]]
