import json

import pytest
import requests

from spanchor.annotation import (
    AnnotationStore,
    BadChoiceError,
    DuplicateVoteError,
    UnknownAnnotatorError,
    UnknownItemError,
    initialize_store,
)
from spanchor.service import AnnotationService

TASKS = {
    "session_seed": 11,
    "annotators": ["ann1", "ann2", "ann3"],
    "items": [
        {
            "item_id": f"item{i}",
            "source_text": f"Source sentence {i}.",
            "system_a_text": f"ترجمہ A {i}",
            "system_b_text": f"ترجمہ B {i}",
        }
        for i in range(5)
    ],
}


@pytest.fixture
def store(tmp_path):
    tasks_path = tmp_path / "tasks.json"
    tasks_path.write_text(json.dumps(TASKS, ensure_ascii=False), encoding="utf-8")
    store_dir = tmp_path / "store"
    initialize_store(store_dir, tasks_path)
    store = AnnotationStore(store_dir)
    yield store
    store.close()


@pytest.fixture
def service(store):
    service = AnnotationService(store)
    service.start()
    yield f"http://127.0.0.1:{service.port}", store
    service.stop()


# -- store ------------------------------------------------------------------


def test_assignment_deterministic_and_blinded(store):
    first = store.assignment("item0", "ann1")
    assert first == store.assignment("item0", "ann1")
    assert {first["left"], first["right"]} == {"SYSTEM_A", "SYSTEM_B"}


def test_assignment_varies_per_annotator(store):
    # with 5 items x 3 annotators at least one pair must differ
    assignments = {
        (item["item_id"], ann): store.assignment(item["item_id"], ann)["left"]
        for item in TASKS["items"]
        for ann in TASKS["annotators"]
    }
    assert len(set(assignments.values())) == 2


def test_next_task_view_has_no_system_identity(store):
    task = store.next_task("ann1")
    assert set(task) == {"item_id", "source_text", "left_text", "right_text", "progress"}
    blob = json.dumps(task)
    assert "SYSTEM_A" not in blob and "SYSTEM_B" not in blob and "system_a" not in blob


def test_next_task_repeats_until_voted(store):
    first = store.next_task("ann1")
    again = store.next_task("ann1")
    assert first == again
    store.submit_vote("ann1", first["item_id"], "LEFT")
    nxt = store.next_task("ann1")
    assert nxt["item_id"] != first["item_id"]
    assert nxt["progress"] == {"done": 1, "total": 5}


def test_left_vote_is_deblinded(store):
    task = store.next_task("ann2")
    sides = store.assignment(task["item_id"], "ann2")
    store.submit_vote("ann2", task["item_id"], "LEFT")
    (vote,) = store.votes()
    assert vote.choice == sides["left"]


def test_duplicate_vote_conflicts(store):
    store.submit_vote("ann1", "item0", "SAME")
    with pytest.raises(DuplicateVoteError):
        store.submit_vote("ann1", "item0", "LEFT")


def test_unknown_annotator_and_item(store):
    with pytest.raises(UnknownAnnotatorError):
        store.next_task("intruder")
    with pytest.raises(UnknownItemError):
        store.submit_vote("ann1", "nope", "SAME")
    with pytest.raises(BadChoiceError):
        store.submit_vote("ann1", "item0", "MAYBE")


def test_votes_survive_restart(tmp_path):
    tasks_path = tmp_path / "tasks.json"
    tasks_path.write_text(json.dumps(TASKS), encoding="utf-8")
    store_dir = tmp_path / "store"
    initialize_store(store_dir, tasks_path)
    store = AnnotationStore(store_dir)
    store.submit_vote("ann1", "item0", "SAME")
    store.submit_vote("ann1", "item1", "LEFT")
    store.close()

    reopened = AnnotationStore(store_dir)
    assert len(reopened.votes()) == 2
    with pytest.raises(DuplicateVoteError):
        reopened.submit_vote("ann1", "item0", "RIGHT")
    reopened.close()


def test_summary_empty_and_single_same(store):
    assert store.summary()["votes"] == 0
    store.submit_vote("ann1", "item0", "SAME")
    summary = store.summary()
    assert summary["percentages"] == {"SYSTEM_A": 0.0, "SYSTEM_B": 0.0, "SAME": 100.0}
    assert summary["alpha"] is None  # one rating: no pairable items
    assert summary["alpha_degenerate"] is True


# -- HTTP layer ---------------------------------------------------------------


def test_http_task_vote_summary_flow(service):
    base, store = service
    task = requests.get(f"{base}/api/task/next", params={"annotator": "ann1"}).json()
    assert "left_text" in task and "SYSTEM_A" not in json.dumps(task)

    resp = requests.post(
        f"{base}/api/vote",
        json={"annotator": "ann1", "item_id": task["item_id"], "choice": "RIGHT"},
    )
    assert resp.status_code == 200 and resp.json() == {"status": "accepted"}

    dup = requests.post(
        f"{base}/api/vote",
        json={"annotator": "ann1", "item_id": task["item_id"], "choice": "LEFT"},
    )
    assert dup.status_code == 409

    summary = requests.get(f"{base}/api/summary").json()
    assert summary["votes"] == 1
    assert summary["progress"]["ann1"]["done"] == 1


def test_http_no_content_when_done(service):
    base, store = service
    for item in TASKS["items"]:
        store.submit_vote("ann3", item["item_id"], "SAME")
    resp = requests.get(f"{base}/api/task/next", params={"annotator": "ann3"})
    assert resp.status_code == 204


def test_http_unknown_annotator_403(service):
    base, _ = service
    resp = requests.get(f"{base}/api/task/next", params={"annotator": "intruder"})
    assert resp.status_code == 403
    resp = requests.post(
        f"{base}/api/vote",
        json={"annotator": "intruder", "item_id": "item0", "choice": "LEFT"},
    )
    assert resp.status_code == 403


def test_http_unknown_item_404_and_bad_choice_400(service):
    base, _ = service
    resp = requests.post(
        f"{base}/api/vote",
        json={"annotator": "ann1", "item_id": "ghost", "choice": "LEFT"},
    )
    assert resp.status_code == 404
    resp = requests.post(
        f"{base}/api/vote",
        json={"annotator": "ann1", "item_id": "item0", "choice": "MAYBE"},
    )
    assert resp.status_code == 400


def test_http_serves_placeholder_without_static_dir(service):
    base, _ = service
    resp = requests.get(f"{base}/")
    assert resp.status_code == 200
    assert "text/html" in resp.headers["Content-Type"]


def test_http_serves_static_dir(tmp_path):
    tasks_path = tmp_path / "tasks.json"
    tasks_path.write_text(json.dumps(TASKS), encoding="utf-8")
    store_dir = tmp_path / "store"
    initialize_store(store_dir, tasks_path)
    store = AnnotationStore(store_dir)
    static = tmp_path / "dist"
    static.mkdir()
    (static / "index.html").write_text("<h1>console</h1>", encoding="utf-8")
    (static / "app.js").write_text("export {}", encoding="utf-8")
    service = AnnotationService(store, static_dir=static)
    service.start()
    base = f"http://127.0.0.1:{service.port}"
    try:
        assert "<h1>console</h1>" in requests.get(f"{base}/").text
        assert requests.get(f"{base}/app.js").status_code == 200
        assert requests.get(f"{base}/../secret").status_code == 404
        assert requests.get(f"{base}/missing.js").status_code == 404
    finally:
        service.stop()
        store.close()
