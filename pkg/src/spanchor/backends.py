"""Translation backends behind one batch interface.

Four kinds: a remote HTTP MT service, plus three deterministic local
backends used for testing (identity, fixture lookup, anchor-targeted fault
injection). All backends are pure per input text, so results are stable
under batching, caching, and concurrent use.

Remote wire protocol: POST JSON {"source_lang", "target_lang", "texts":
[...]} -> {"translations": [...]}; errors are an HTTP status plus a JSON
body {"error": "..."}.
"""

from __future__ import annotations

import json
import logging
import os
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

import requests

from ._util import stable_digest, stable_int, stable_unit
from .anchoring import BULLET, QUOTE

log = logging.getLogger(__name__)

REMOTE_TEXT_LIMIT = 1000
BACKEND_KINDS = ("remote_http", "identity", "fixture_map", "fault_injection")


class BackendError(Exception):
    """Translation failed and the caller should treat the item as lost."""


@dataclass
class BackendConfig:
    kind: str = "identity"
    endpoint: str = ""
    source_lang: str = "en"
    target_lang: str = "ur"
    batch_size: int = 32
    max_retries: int = 3
    fault_probability: float = 0.0
    seed: int = 0
    mapping: dict[str, str] = field(default_factory=dict)
    api_key: str = ""
    max_concurrency: int = 8
    requests_per_second: float = 0.0

    def __post_init__(self):
        if self.kind not in BACKEND_KINDS:
            raise ValueError(f"unknown backend kind {self.kind!r}")
        if not 0.0 <= self.fault_probability <= 1.0:
            raise ValueError("fault_probability must be in [0, 1]")


def load_backend_config(path) -> BackendConfig:
    """Read a backend config JSON file; ENDPOINT and API_KEY env vars override."""
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    known = {f for f in BackendConfig.__dataclass_fields__}
    config = BackendConfig(**{k: v for k, v in raw.items() if k in known})
    if os.environ.get("ENDPOINT"):
        config.endpoint = os.environ["ENDPOINT"]
    if os.environ.get("API_KEY"):
        config.api_key = os.environ["API_KEY"]
    return config


class Backend:
    """Base translation handle; subclasses implement _translate."""

    def __init__(self, config: BackendConfig):
        self.config = config

    def identity_key(self) -> str:
        c = self.config
        return f"{c.kind}|{c.endpoint}|{c.source_lang}>{c.target_lang}|{c.seed}|{c.fault_probability}"

    def translate_batch(self, texts: list[str]) -> list[str]:
        if not texts:
            raise ValueError("texts must be non-empty")
        out = self._translate(list(texts))
        if len(out) != len(texts):
            raise BackendError(
                f"backend returned {len(out)} texts for {len(texts)} inputs"
            )
        return out

    def _translate(self, texts: list[str]) -> list[str]:
        raise NotImplementedError


class IdentityBackend(Backend):
    def _translate(self, texts):
        return texts


class FixtureMapBackend(Backend):
    """Returns the mapped value for known texts, the input text otherwise."""

    def _translate(self, texts):
        return [self.config.mapping.get(t, t) for t in texts]


class FaultInjectionBackend(Backend):
    """Identity backend that loses anchor characters with a fixed probability.

    With probability fault_probability a text loses one anchor character
    (a quote or bullet); which text fails and which character is removed
    are both derived from (seed, text), so runs are reproducible under any
    batching or concurrency. Texts without anchor characters pass through.
    """

    def _translate(self, texts):
        out = []
        for text in texts:
            out.append(self._maybe_drop_anchor(text))
        return out

    def _maybe_drop_anchor(self, text: str) -> str:
        seed = self.config.seed
        if stable_unit(seed, "fault", text) >= self.config.fault_probability:
            return text
        anchors = [i for i, ch in enumerate(text) if ch == QUOTE or ch == BULLET]
        if not anchors:
            return text
        victim = anchors[stable_int(seed, "pick", text) % len(anchors)]
        return text[:victim] + text[victim + 1 :]


class _TokenBucket:
    def __init__(self, rate: float, burst: float = 1.0):
        self.rate = rate
        self.burst = burst
        self.tokens = burst
        self.stamp = time.monotonic()
        self.lock = threading.Lock()

    def take(self):
        with self.lock:
            now = time.monotonic()
            self.tokens = min(self.burst, self.tokens + (now - self.stamp) * self.rate)
            self.stamp = now
            if self.tokens < 1.0:
                wait = (1.0 - self.tokens) / self.rate
                time.sleep(wait)
                self.stamp = time.monotonic()
                self.tokens = 1.0
            self.tokens -= 1.0


class RemoteHttpBackend(Backend):
    """HTTP MT service client with batching, retries, and rate limiting."""

    def __init__(self, config: BackendConfig, session=None):
        super().__init__(config)
        if not config.endpoint:
            raise ValueError("remote_http backend requires an endpoint")
        self.session = session or requests.Session()
        self._semaphore = threading.BoundedSemaphore(max(1, config.max_concurrency))
        self._bucket = (
            _TokenBucket(config.requests_per_second)
            if config.requests_per_second > 0
            else None
        )

    def _translate(self, texts):
        for text in texts:
            if len(text) > REMOTE_TEXT_LIMIT:
                raise BackendError(
                    f"text of {len(text)} code points exceeds the "
                    f"{REMOTE_TEXT_LIMIT}-code-point per-request limit; longer "
                    "inputs risk truncation by the translation service"
                )
        out: list[str] = []
        size = max(1, self.config.batch_size)
        for i in range(0, len(texts), size):
            out.extend(self._post(texts[i : i + size]))
        return out

    def _post(self, chunk: list[str]) -> list[str]:
        body = {
            "source_lang": self.config.source_lang,
            "target_lang": self.config.target_lang,
            "texts": chunk,
        }
        headers = {}
        if self.config.api_key:
            headers["Authorization"] = f"Bearer {self.config.api_key}"
        last_error = "no attempt made"
        for attempt in range(max(1, self.config.max_retries)):
            if attempt:
                time.sleep(min(0.25 * 2 ** (attempt - 1), 2.0))
            if self._bucket is not None:
                self._bucket.take()
            try:
                with self._semaphore:
                    resp = self.session.post(
                        self.config.endpoint, json=body, headers=headers, timeout=30
                    )
            except requests.RequestException as exc:
                last_error = str(exc)
                continue
            if 200 <= resp.status_code < 300:
                payload = resp.json()
                translations = payload.get("translations")
                if not isinstance(translations, list) or len(translations) != len(chunk):
                    raise BackendError("malformed response: bad translations field")
                return [str(t) for t in translations]
            try:
                last_error = f"HTTP {resp.status_code}: {resp.json().get('error', '')}"
            except ValueError:
                last_error = f"HTTP {resp.status_code}"
        raise BackendError(
            f"remote translation failed after {self.config.max_retries} attempts: {last_error}"
        )


def make_backend(config: BackendConfig, session=None) -> Backend:
    if config.kind == "identity":
        return IdentityBackend(config)
    if config.kind == "fixture_map":
        return FixtureMapBackend(config)
    if config.kind == "fault_injection":
        return FaultInjectionBackend(config)
    return RemoteHttpBackend(config, session=session)


def translate_batch(config: BackendConfig, texts: list[str]) -> list[str]:
    """One-shot convenience wrapper around make_backend."""
    return make_backend(config).translate_batch(texts)


class MemoryCache:
    """Thread-safe in-process cache, also used to share translations per run."""

    def __init__(self):
        self._data: dict[str, str] = {}
        self._lock = threading.Lock()

    def get(self, key: str) -> str | None:
        with self._lock:
            return self._data.get(key)

    def put(self, key: str, value: str) -> None:
        with self._lock:
            self._data[key] = value


class DirectoryCache:
    """On-disk key-value cache: one UTF-8 text file per hashed key."""

    def __init__(self, directory):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)

    def _path(self, key: str) -> Path:
        return self.directory / (key + ".txt")

    def get(self, key: str) -> str | None:
        path = self._path(key)
        if not path.exists():
            return None
        return path.read_text(encoding="utf-8")

    def put(self, key: str, value: str) -> None:
        tmp = self._path(key).with_suffix(".tmp")
        tmp.write_text(value, encoding="utf-8")
        tmp.replace(self._path(key))


class CachedBackend(Backend):
    """Wraps a backend with a key-value cache keyed by (backend, text).

    Cache I/O failures degrade to uncached operation with a warning.
    """

    def __init__(self, inner: Backend, cache):
        super().__init__(inner.config)
        self.inner = inner
        self.cache = cache

    def identity_key(self) -> str:
        return self.inner.identity_key()

    def _key(self, text: str) -> str:
        return stable_digest(self.inner.identity_key(), text).hex()

    def _translate(self, texts):
        results: list[str | None] = [None] * len(texts)
        misses: list[int] = []
        for i, text in enumerate(texts):
            try:
                hit = self.cache.get(self._key(text))
            except OSError as exc:
                log.warning("translation cache read failed (%s); translating", exc)
                hit = None
            if hit is None:
                misses.append(i)
            else:
                results[i] = hit
        if misses:
            translated = self.inner.translate_batch([texts[i] for i in misses])
            for i, value in zip(misses, translated):
                results[i] = value
                try:
                    self.cache.put(self._key(texts[i]), value)
                except OSError as exc:
                    log.warning("translation cache write failed (%s); continuing", exc)
        return results


def cached(backend: Backend, cache) -> CachedBackend:
    """Wrap a backend handle with a cache (MemoryCache or DirectoryCache)."""
    return CachedBackend(backend, cache)
