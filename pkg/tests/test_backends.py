import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest

from spanchor.backends import (
    BackendConfig,
    BackendError,
    DirectoryCache,
    FaultInjectionBackend,
    MemoryCache,
    cached,
    load_backend_config,
    make_backend,
    translate_batch,
)

URDU_FIXTURE = {
    "When did the Normans attack Dyrrachium?": "نارمنوں نے ڈیراچیم پر کب حملہ کیا؟"
}


class _StubTranslator(BaseHTTPRequestHandler):
    """Stub MT endpoint: reverses each text; can fail the first N requests."""

    def log_message(self, fmt, *args):
        pass

    def do_POST(self):
        server = self.server
        server.calls += 1
        if server.failures_left > 0:
            server.failures_left -= 1
            body = json.dumps({"error": "temporarily down"}).encode()
            self.send_response(503)
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)
            return
        length = int(self.headers["Content-Length"])
        payload = json.loads(self.rfile.read(length))
        server.last_payload = payload
        server.last_auth = self.headers.get("Authorization")
        out = {"translations": [t[::-1] for t in payload["texts"]]}
        body = json.dumps(out, ensure_ascii=False).encode("utf-8")
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)


@pytest.fixture
def stub_server():
    server = ThreadingHTTPServer(("127.0.0.1", 0), _StubTranslator)
    server.calls = 0
    server.failures_left = 0
    server.last_payload = None
    server.last_auth = None
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield server
    server.shutdown()
    server.server_close()


def _remote_config(server, **kw):
    return BackendConfig(
        kind="remote_http",
        endpoint=f"http://127.0.0.1:{server.server_address[1]}/translate",
        **kw,
    )


def test_identity_backend():
    assert translate_batch(BackendConfig(kind="identity"), ["abc"]) == ["abc"]


def test_fixture_map_known_and_unknown_keys():
    config = BackendConfig(kind="fixture_map", mapping=URDU_FIXTURE)
    known = "When did the Normans attack Dyrrachium?"
    out = translate_batch(config, [known, "unknown text"])
    assert out == [URDU_FIXTURE[known], "unknown text"]


def test_empty_batch_rejected():
    with pytest.raises(ValueError):
        translate_batch(BackendConfig(kind="identity"), [])


def test_alignment_property():
    import random

    rng = random.Random(1)
    for kind in ("identity", "fixture_map", "fault_injection"):
        config = BackendConfig(kind=kind, fault_probability=0.5, seed=9)
        backend = make_backend(config)
        texts = [f"text {i} •x•" for i in range(rng.randint(1, 20))]
        assert len(backend.translate_batch(texts)) == len(texts)


def test_fault_injection_certain_fault_removes_one_quote():
    backend = FaultInjectionBackend(
        BackendConfig(kind="fault_injection", fault_probability=1.0, seed=4)
    )
    (out,) = backend.translate_batch(['"x"'])
    assert out in ('x"', '"x')
    assert out.count('"') == 1


def test_fault_injection_never_fires_at_zero():
    backend = FaultInjectionBackend(
        BackendConfig(kind="fault_injection", fault_probability=0.0, seed=4)
    )
    assert backend.translate_batch(['"x"', "plain"]) == ['"x"', "plain"]


def test_fault_injection_deterministic_across_batching():
    config = BackendConfig(kind="fault_injection", fault_probability=0.5, seed=21)
    backend = make_backend(config)
    texts = [f'"anchor {i}"' for i in range(50)]
    whole = backend.translate_batch(texts)
    singles = [backend.translate_batch([t])[0] for t in texts]
    assert whole == singles
    assert whole != texts  # p=0.5 over 50 anchored texts: some must fire


def test_fault_injection_leaves_anchorless_text_alone():
    backend = FaultInjectionBackend(
        BackendConfig(kind="fault_injection", fault_probability=1.0, seed=4)
    )
    assert backend.translate_batch(["no anchors here"]) == ["no anchors here"]


def test_fault_rate_roughly_matches_probability():
    config = BackendConfig(kind="fault_injection", fault_probability=0.3, seed=77)
    backend = make_backend(config)
    texts = [f'"t{i}"' for i in range(4000)]
    out = backend.translate_batch(texts)
    fired = sum(1 for a, b in zip(texts, out) if a != b)
    assert 0.25 < fired / len(texts) < 0.35


def test_remote_backend_round_trip(stub_server):
    backend = make_backend(_remote_config(stub_server))
    assert backend.translate_batch(["abc", "xyz"]) == ["cba", "zyx"]
    assert stub_server.last_payload["source_lang"] == "en"
    assert stub_server.last_payload["target_lang"] == "ur"


def test_remote_backend_batches_by_batch_size(stub_server):
    backend = make_backend(_remote_config(stub_server, batch_size=2))
    out = backend.translate_batch(["a", "b", "c", "d", "e"])
    assert out == ["a", "b", "c", "d", "e"]
    assert stub_server.calls == 3


def test_remote_backend_retries_then_succeeds(stub_server):
    stub_server.failures_left = 2
    backend = make_backend(_remote_config(stub_server, max_retries=3))
    assert backend.translate_batch(["ab"]) == ["ba"]
    assert stub_server.calls == 3


def test_remote_backend_fails_after_max_retries(stub_server):
    stub_server.failures_left = 99
    backend = make_backend(_remote_config(stub_server, max_retries=2))
    with pytest.raises(BackendError, match="2 attempts"):
        backend.translate_batch(["ab"])


def test_remote_backend_oversize_guard(stub_server):
    backend = make_backend(_remote_config(stub_server))
    with pytest.raises(BackendError, match="1000"):
        backend.translate_batch(["x" * 1001])
    assert stub_server.calls == 0


def test_cached_backend_hits_after_first_call(stub_server, tmp_path):
    backend = cached(make_backend(_remote_config(stub_server)), DirectoryCache(tmp_path))
    assert backend.translate_batch(["abc"]) == ["cba"]
    assert backend.translate_batch(["abc"]) == ["cba"]
    assert stub_server.calls == 1


def test_cached_backend_distinct_texts_miss(stub_server, tmp_path):
    backend = cached(make_backend(_remote_config(stub_server)), DirectoryCache(tmp_path))
    backend.translate_batch(["abc"])
    backend.translate_batch(["def"])
    assert stub_server.calls == 2


def test_cached_backend_cleared_cache_refetches(stub_server, tmp_path):
    cache = DirectoryCache(tmp_path)
    backend = cached(make_backend(_remote_config(stub_server)), cache)
    backend.translate_batch(["abc"])
    for path in tmp_path.iterdir():
        path.unlink()
    backend.translate_batch(["abc"])
    assert stub_server.calls == 2


def test_cached_backend_io_failure_degrades(stub_server):
    class BrokenCache:
        def get(self, key):
            raise OSError("disk gone")

        def put(self, key, value):
            raise OSError("disk gone")

    backend = cached(make_backend(_remote_config(stub_server)), BrokenCache())
    assert backend.translate_batch(["abc"]) == ["cba"]


def test_cache_key_separates_backends(tmp_path):
    cache = MemoryCache()
    first = cached(make_backend(BackendConfig(kind="identity", seed=1)), cache)
    second = cached(
        make_backend(
            BackendConfig(kind="fault_injection", fault_probability=1.0, seed=2)
        ),
        cache,
    )
    assert first.translate_batch(['"x"']) == ['"x"']
    assert second.translate_batch(['"x"'])[0].count('"') == 1


def test_load_backend_config_env_overrides(tmp_path, monkeypatch):
    path = tmp_path / "backend.json"
    path.write_text(
        json.dumps({"kind": "remote_http", "endpoint": "http://configured/"}),
        encoding="utf-8",
    )
    monkeypatch.setenv("ENDPOINT", "http://override/")
    monkeypatch.setenv("API_KEY", "secret")
    config = load_backend_config(path)
    assert config.endpoint == "http://override/"
    assert config.api_key == "secret"


def test_config_rejects_unknown_kind():
    with pytest.raises(ValueError):
        BackendConfig(kind="mystery")


def test_remote_backend_with_rate_limit_and_concurrency(stub_server):
    backend = make_backend(
        _remote_config(
            stub_server, requests_per_second=500.0, max_concurrency=2, batch_size=1
        )
    )
    assert backend.translate_batch(["a", "b", "c"]) == ["a", "b", "c"]
    assert stub_server.calls == 3


def test_remote_backend_sends_api_key(stub_server):
    backend = make_backend(_remote_config(stub_server, api_key="sekrit"))
    backend.translate_batch(["ab"])
    assert stub_server.last_auth == "Bearer sekrit"
