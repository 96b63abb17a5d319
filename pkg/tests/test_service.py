import random
import threading
import time
from concurrent.futures import ThreadPoolExecutor

import httpx
import pytest
from conftest import ES_BACK, ES_MACHINE, SOURCE
from fastapi.testclient import TestClient
from geo_fixtures import build_fixture, language_csv, overlaps_csv
from hypothesis import given
from hypothesis import strategies as st

from wxtrans.errors import ConflictError, InvalidArgument, NonRepresentableError, NotFoundError
from wxtrans.pipeline import DictionaryEngine, IdentityEngine
from wxtrans.service import (
    FeedbackEvent,
    FeedbackService,
    MemoryStore,
    ReviewReason,
    ReviewState,
    ServiceCore,
    ServiceSettings,
    SqliteStore,
    ascii_safe,
)
from wxtrans.service.api import create_app

TOKEN = "s3cret"
AUTH = {"Authorization": f"Bearer {TOKEN}"}


# ascii_safe

def test_ascii_diacritics_not_lossy():
    r = ascii_safe("marejada ciclónica")
    assert (r.text, r.lossy, r.dropped) == ("marejada ciclonica", False, [])


def test_ascii_overrides():
    assert ascii_safe("Año Güera Straße").text == "Ano Guera Strasse"
    assert ascii_safe("¿Lluvia? ¡Sí!").text == "Lluvia? Si!"


def test_ascii_identity():
    r = ascii_safe("HURRICANE WARNING 10 AM EDT")
    assert (r.text, r.lossy, r.dropped) == ("HURRICANE WARNING 10 AM EDT", False, [])


def test_ascii_reject_han():
    with pytest.raises(NonRepresentableError) as info:
        ascii_safe("天气", "reject_non_latin")
    assert info.value.chars == ["天", "气"]
    assert ascii_safe("ciclónica", "reject_non_latin").text == "ciclonica"


def test_ascii_strip_han_is_lossy():
    r = ascii_safe("Lluvia 天气", "strip_diacritics")
    assert (r.text, r.lossy, r.dropped) == ("Lluvia ??", True, ["天", "气"])


def test_ascii_bad_policy():
    with pytest.raises(InvalidArgument):
        ascii_safe("x", "transliterate")


@given(st.text())
def test_ascii_always_ascii_and_idempotent(text):
    r = ascii_safe(text)
    assert all(b < 128 for b in r.text.encode("utf-8"))
    again = ascii_safe(r.text)
    assert again.text == r.text and not again.lossy


# store

@pytest.mark.parametrize("make", [MemoryStore, lambda: None])
def test_store_roundtrip_and_rollback(make, tmp_path):
    store = make() or SqliteStore(tmp_path / "kv.db")
    store.put("a", "k", {"x": [1, "ñ"]})
    assert store.get("a", "k") == {"x": [1, "ñ"]}
    with pytest.raises(RuntimeError):
        with store.transaction():
            store.put("a", "k", {"x": 2})
            store.put("a", "j", 1)
            raise RuntimeError
    assert store.get("a", "k") == {"x": [1, "ñ"]} and store.get("a", "j") is None
    store.delete("a", "k")
    assert store.items("a") == []


# feedback

def event(nonce, rating="down", file_name="TWO.es.txt", ts="2024-08-01T12:00:00Z"):
    return FeedbackEvent(file_name, "TWO", "es", ts, rating, nonce)


def test_down_rating_opens_item():
    fb = FeedbackService(MemoryStore())
    fb.register_product("TWO.es.txt")
    res = fb.ingest(event("n1"))
    assert not res.orphan and res.tally == {"up": 0, "down": 1}
    item = res.review_item
    assert (item.reason, item.state, item.feedback_nonces) == (ReviewReason.NEGATIVE_FEEDBACK, ReviewState.OPEN, ("n1",))
    # a second down-rating joins the open item instead of opening another
    res2 = fb.ingest(event("n2"))
    assert res2.review_item.item_id == item.item_id
    assert len(fb.items()) == 1 and fb.get_item(item.item_id).feedback_nonces == ("n1", "n2")


def test_up_rating_counts_only():
    fb = FeedbackService(MemoryStore())
    fb.register_product("TWO.es.txt")
    res = fb.ingest(event("u1", "up"))
    assert res.tally == {"up": 1, "down": 0} and res.review_item is None and fb.items() == []


def test_duplicate_nonce_ignored():
    fb = FeedbackService(MemoryStore())
    fb.ingest(event("n1"))
    res = fb.ingest(event("n1", ts="2024-07-01T00:00:00Z"))
    assert res.duplicate and res.tally == {"up": 0, "down": 1}
    assert any("earlier timestamp" in w for w in res.warnings)


def test_orphan_flagged():
    fb = FeedbackService(MemoryStore())
    res = fb.ingest(event("n1", file_name="missing.txt"))
    assert res.orphan and res.review_item.orphan


def test_review_lifecycle():
    fb = FeedbackService(MemoryStore())
    item = fb.ingest(event("n1")).review_item
    assert fb.next_review().item_id == item.item_id
    done = fb.resolve(item.item_id, "corrected", "fixed wording")
    assert done.state is ReviewState.CORRECTED and fb.next_review() is None
    with pytest.raises(ConflictError):
        fb.resolve(item.item_id, "dismissed")
    with pytest.raises(NotFoundError):
        fb.resolve("nope", "dismissed")
    with pytest.raises(InvalidArgument):
        fb.resolve(item.item_id, "open")
    # once resolved, a new down-rating opens a fresh item
    again = fb.ingest(event("n2")).review_item
    assert again.item_id != item.item_id


def test_feedback_event_validation():
    with pytest.raises(InvalidArgument):
        event("n", rating="meh")
    with pytest.raises(InvalidArgument):
        FeedbackEvent.from_dict({"file_name": "x"})
    with pytest.raises(InvalidArgument):
        event("", rating="up")


def test_concurrent_feedback_tallies(tmp_path):
    store = SqliteStore(tmp_path / "fb.db")
    fb = FeedbackService(store)
    fb.register_product("TWO.es.txt")
    rng = random.Random(3)
    ratings = {f"n{i}": rng.choice(["up", "down"]) for i in range(40)}
    posts = [n for n in ratings] + [rng.choice(list(ratings)) for _ in range(60)]
    rng.shuffle(posts)
    with ThreadPoolExecutor(16) as pool:
        list(pool.map(lambda n: fb.ingest(event(n, ratings[n])), posts))
    downs = sum(r == "down" for r in ratings.values())
    assert fb.tally("TWO.es.txt", "es") == {"up": 40 - downs, "down": downs}
    linked = [n for item in fb.items() for n in item.feedback_nonces]
    assert sorted(linked) == sorted(n for n, r in ratings.items() if r == "down")


# service core and HTTP

def worked_core(store):
    fwd = DictionaryEngine("fwd-es", "en-es", sentences={SOURCE: ES_MACHINE})
    rev = DictionaryEngine("rev-es", "es-en", sentences={ES_MACHINE: ES_BACK})
    return ServiceCore(store, fwd, rev)


def two_product(body=SOURCE, file_name="TWOAT.txt"):
    return {"product_type": "TWO", "office": "KNHC", "language": "en",
            "issued_at": "2024-08-01T12:00:00+00:00", "body": body, "file_name": file_name}


def client_for(core, token=TOKEN):
    return TestClient(create_app(core, token))


def test_job_submit_and_report_card():
    client = client_for(worked_core(MemoryStore()))
    r = client.post("/v1/jobs", json={"product": two_product(), "target_lang": "es"}, headers=AUTH)
    assert r.status_code == 202
    job_id = r.json()["job_id"]
    rec = client.get(f"/v1/jobs/{job_id}").json()
    assert rec["status"] == "completed"
    assert rec["job"]["sentences"][0]["target"] == ES_MACHINE
    assert rec["translated_product"]["file_name"] == "TWOAT.es.txt"
    card = client.get("/v1/reportcard", params={"type": "TWO", "lang": "es"}).json()
    assert card["count"] == 1
    assert card["metrics"]["chrf_pp"]["mean"] == pytest.approx(29.626, abs=0.001)
    assert card["metrics"]["bleu"]["mean"] == pytest.approx(6.567, abs=0.001)
    assert client.get("/v1/reportcard", params={"type": "TCP", "lang": "es"}).json()["count"] == 0


def test_bad_scores_open_review():
    core = worked_core(MemoryStore())
    client = client_for(core)
    client.post("/v1/jobs", json={"product": two_product()}, headers=AUTH)
    # chrF++ 29.6 is rated bad, so the job lands in the review queue
    item = client.get("/v1/review/next").json()["item"]
    assert item["reason"] == "bad_rating" and item["product_ref"] == "TWOAT.es.txt"


def test_http_errors():
    core = worked_core(MemoryStore())
    client = client_for(core)
    assert client.post("/v1/jobs", json={"product": two_product()}).status_code == 401
    assert client.post("/v1/jobs", json={"product": two_product()},
                       headers={"Authorization": "Bearer wrong"}).status_code == 401
    assert client.post("/v1/jobs", json={"product": {"body": "x"}}, headers=AUTH).status_code == 400
    assert client.post("/v1/jobs", content=b"not json", headers={**AUTH, "content-type": "application/json"}).status_code == 400
    assert client.post("/v1/jobs", json={"product": two_product(), "target_lang": "fr"}, headers=AUTH).status_code == 400
    assert client.get("/v1/jobs/unknown").status_code == 404
    assert client.post("/v1/review/unknown", json={"state": "dismissed"}, headers=AUTH).status_code == 404
    assert client.post("/v1/feedback", json={"rating": "up"}, headers=AUTH).status_code == 400
    no_engine = client_for(ServiceCore(MemoryStore()))
    assert no_engine.post("/v1/jobs", json={"product": two_product()}, headers=AUTH).status_code == 503
    readonly = client_for(core, token=None)
    assert readonly.post("/v1/feedback", json={}, headers=AUTH).status_code == 401


def test_review_conflict_over_http():
    client = client_for(worked_core(MemoryStore()))
    body = event("n1").to_dict()
    item = client.post("/v1/feedback", json=body, headers=AUTH).json()["review_item"]
    path = f"/v1/review/{item['item_id']}"
    assert client.post(path, json={"state": "dismissed"}, headers=AUTH).status_code == 200
    assert client.post(path, json={"state": "corrected"}, headers=AUTH).status_code == 409


def test_feedback_duplicate_over_http():
    client = client_for(worked_core(MemoryStore()))
    body = event("n1", "up").to_dict()
    first = client.post("/v1/feedback", json=body, headers=AUTH)
    second = client.post("/v1/feedback", json=body, headers=AUTH)
    assert first.status_code == second.status_code == 200
    assert second.json()["duplicate"] and second.json()["tally"] == first.json()["tally"] == {"up": 1, "down": 0}
    tally = client.get("/v1/feedback/tally", params={"file_name": "TWO.es.txt", "language": "es"}).json()
    assert (tally["up"], tally["down"]) == (1, 0)


def test_ascii_endpoint():
    client = client_for(ServiceCore(MemoryStore()))
    assert client.post("/v1/ascii", json={"text": "ciclónica"}).json()["text"] == "ciclonica"
    assert client.post("/v1/ascii", json={"text": "天气", "policy": "reject_non_latin"}).status_code == 400


def test_lep_endpoints():
    counties, tracts, overlaps = build_fixture(1)
    client = client_for(ServiceCore(MemoryStore()))
    r = client.post("/v1/lep/import", headers=AUTH, json={
        "county_csv": language_csv(counties), "overlaps_csv": overlaps_csv(overlaps), "tract_csv": language_csv(tracts),
    })
    assert r.status_code == 200, r.text
    assert client.get("/v1/lep/cwa").json()["cwas"] == ["KEY", "MFL", "TBW"]
    cwas = [client.get(f"/v1/lep/cwa/{c}").json() for c in ("KEY", "MFL", "TBW")]
    for lang in ("Spanish", "Haitian"):
        national = sum(r.lep_speakers for r in counties if r.language == lang)
        assert sum(c["languages"][lang][1] for c in cwas) == national
    assert client.get("/v1/lep/cwa/XYZ").status_code == 404
    pri = client.get("/v1/lep/priority", params={"ratio": 0.0, "min_lep": 0}).json()["languages"]
    assert [p["lep_total"] for p in pri] == sorted((p["lep_total"] for p in pri), reverse=True)


def test_restart_recovers_everything(tmp_path):
    path = tmp_path / "svc.db"
    core = worked_core(SqliteStore(path))
    client = client_for(core)
    job_id = client.post("/v1/jobs", json={"product": two_product()}, headers=AUTH).json()["job_id"]
    client.post("/v1/feedback", json=event("n1", file_name="TWOAT.es.txt").to_dict(), headers=AUTH)
    client.post("/v1/feedback", json=event("n2", "up", file_name="TWOAT.es.txt").to_dict(), headers=AUTH)
    before = {
        "job": client.get(f"/v1/jobs/{job_id}").json(),
        "card": client.get("/v1/reportcard", params={"type": "TWO", "lang": "es"}).json(),
        "tally": core.feedback.tallies(),
        "items": [i.to_dict() for i in core.feedback.items()],
        "tm": sorted(s.id for s in core.tm),
    }
    core.close()

    core2 = worked_core(SqliteStore(path))
    client2 = client_for(core2)
    after = {
        "job": client2.get(f"/v1/jobs/{job_id}").json(),
        "card": client2.get("/v1/reportcard", params={"type": "TWO", "lang": "es"}).json(),
        "tally": core2.feedback.tallies(),
        "items": [i.to_dict() for i in core2.feedback.items()],
        "tm": sorted(s.id for s in core2.tm),
    }
    assert after == before
    assert len(before["items"]) == 2  # bad_rating from scoring, negative_feedback from the down-rating
    # a repeated nonce after restart is still a duplicate
    again = client2.post("/v1/feedback", json=event("n1", file_name="TWOAT.es.txt").to_dict(), headers=AUTH)
    assert again.json()["duplicate"]
    core2.close()


def test_restart_marks_unfinished_jobs_failed(tmp_path):
    path = tmp_path / "svc.db"
    core = ServiceCore(SqliteStore(path), IdentityEngine("fwd"))
    job_id = core.submit_job({"product": two_product()})
    core.close()
    core2 = ServiceCore(SqliteStore(path), IdentityEngine("fwd"))
    rec = core2.get_job(job_id)
    assert rec["status"] == "failed" and "restart" in rec["error"]


def test_settings_from_env():
    s = ServiceSettings.from_env({"WXTRANS_STORE": "x.db", "WXTRANS_BIND": "0.0.0.0:9000", "WXTRANS_TOKEN": "t"})
    assert (s.store, s.host_port(), s.token, s.engine) == ("x.db", ("0.0.0.0", 9000), "t", None)


def test_concurrent_posts_over_real_server(tmp_path):
    import uvicorn

    core = worked_core(SqliteStore(tmp_path / "live.db"))
    config = uvicorn.Config(create_app(core, TOKEN), host="127.0.0.1", port=0, log_level="warning")
    server = uvicorn.Server(config)
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    deadline = time.time() + 10
    while not server.started and time.time() < deadline:
        time.sleep(0.05)
    port = server.servers[0].sockets[0].getsockname()[1]
    try:
        rng = random.Random(11)
        ratings = {f"n{i}": rng.choice(["up", "down"]) for i in range(40)}
        posts = list(ratings) + [rng.choice(list(ratings)) for _ in range(60)]
        rng.shuffle(posts)
        with httpx.Client(base_url=f"http://127.0.0.1:{port}", headers=AUTH, timeout=30) as http:
            def post(n):
                return http.post("/v1/feedback", json=event(n, ratings[n]).to_dict()).status_code

            with ThreadPoolExecutor(20) as pool:
                codes = list(pool.map(post, posts))
        assert codes == [200] * 100
        tally = core.feedback.tally("TWO.es.txt", "es")
        assert tally["up"] + tally["down"] == 40
        assert tally["down"] == sum(r == "down" for r in ratings.values())
    finally:
        server.should_exit = True
        thread.join(10)
