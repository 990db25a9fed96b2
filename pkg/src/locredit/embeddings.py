"""Pass 2: sentence embeddings via pluggable providers and the semantic grid.

The transformer model itself stays outside the package: a remote provider
speaks JSON over HTTP ({"texts": [...]} in, {"vectors": [[...]]} out), a
cached-file provider serves a frozen on-disk store, and a deterministic
test provider hashes tokens into a bag-of-features vector so pipelines
stay reproducible without any model download.
"""

from __future__ import annotations

import hashlib
import json
import math
import re
import threading
import zlib
from dataclasses import dataclass
from pathlib import Path

import requests

from .bloom import LearningOutcome
from .errors import (CacheCorruptError, CacheMissError, ConfigError,
                     ContractError, ProviderError, TransportError)
from .grids import SimilarityGrid

_CACHE_FORMAT = "locredit-embedding-cache-v1"

_TOKEN_RE = re.compile(r"[a-z0-9']+")


@dataclass(frozen=True)
class EmbeddingVector:
    values: tuple[float, ...]
    norm: float

    @classmethod
    def of(cls, values) -> "EmbeddingVector":
        values = tuple(float(v) for v in values)
        if not values:
            raise ContractError("empty embedding vector")
        norm = math.sqrt(sum(v * v for v in values))
        if norm == 0.0:
            raise ContractError("zero embedding vector rejected")
        return cls(values, norm)

    @property
    def dimension(self) -> int:
        return len(self.values)


def cosine(a: EmbeddingVector, b: EmbeddingVector) -> float:
    """Dot product over the product of norms, clamped into [−1, 1]."""
    if a.dimension != b.dimension:
        raise ContractError(
            f"dimension mismatch: {a.dimension} vs {b.dimension}")
    dot = sum(x * y for x, y in zip(a.values, b.values))
    return max(-1.0, min(1.0, dot / (a.norm * b.norm)))


def normalize_text(text: str) -> str:
    """Whitespace collapse; the only normalization applied to cache keys."""
    return " ".join(text.split())


def _cache_key(provider_name: str, text: str) -> str:
    payload = f"{provider_name}\x00{normalize_text(text)}".encode("utf-8")
    return hashlib.sha256(payload).hexdigest()


class EmbeddingCache:
    """Append-only embedding store: one checksummed JSON record per line.

    Records are keyed by sha256(provider name, whitespace-collapsed text);
    a file holds vectors for exactly one provider.  Writes are serialized,
    reads are lock-free on the in-memory table.  A None path keeps the
    cache purely in memory (used to wrap remote providers when no cache
    file is configured).
    """

    def __init__(self, path: str | Path | None):
        self.path = Path(path) if path is not None else None
        self.provider_name: str | None = None
        self.dimension: int | None = None
        self._entries: dict[str, tuple[float, ...]] = {}
        self._lock = threading.Lock()
        if self.path is not None and self.path.exists():
            self._load()

    def _load(self) -> None:
        for lineno, line in enumerate(
                self.path.read_text(encoding="utf-8").splitlines(), start=1):
            if not line.strip():
                continue
            try:
                crc, payload = json.loads(line)
            except (ValueError, TypeError) as exc:
                raise CacheCorruptError(
                    f"{self.path} line {lineno}: unreadable record") from exc
            if zlib.crc32(_payload_bytes(payload)) != crc:
                raise CacheCorruptError(
                    f"{self.path} line {lineno}: checksum mismatch")
            if "format" in payload:
                if payload["format"] != _CACHE_FORMAT:
                    raise CacheCorruptError(
                        f"{self.path}: unsupported format {payload['format']!r}")
                self.provider_name = payload["provider"]
                self.dimension = int(payload["dim"])
            else:
                values = tuple(float(v) for v in payload["values"])
                if self.dimension is not None and len(values) != self.dimension:
                    raise CacheCorruptError(
                        f"{self.path} line {lineno}: vector has {len(values)} "
                        f"components, header says {self.dimension}")
                self._entries[payload["key"]] = values

    def __len__(self) -> int:
        return len(self._entries)

    def lookup(self, provider_name: str, text: str) -> tuple[float, ...] | None:
        if self.provider_name is not None and provider_name != self.provider_name:
            raise ProviderError(
                f"cache {self.path} was built for provider "
                f"{self.provider_name!r}, not {provider_name!r}")
        return self._entries.get(_cache_key(provider_name, text))

    def store(self, provider_name: str, items: list[tuple[str, tuple[float, ...]]]) -> None:
        if not items:
            return
        with self._lock:
            lines = []
            if self.provider_name is None:
                self.provider_name = provider_name
                self.dimension = len(items[0][1])
                lines.append(_record_line({"dim": self.dimension,
                                           "format": _CACHE_FORMAT,
                                           "provider": provider_name}))
            elif provider_name != self.provider_name:
                raise ProviderError(
                    f"cache {self.path} was built for provider "
                    f"{self.provider_name!r}, not {provider_name!r}")
            for text, values in items:
                if len(values) != self.dimension:
                    raise ProviderError(
                        f"vector dimension {len(values)} does not match cache "
                        f"dimension {self.dimension}")
                key = _cache_key(provider_name, text)
                if key in self._entries:
                    continue
                self._entries[key] = tuple(values)
                lines.append(_record_line({"key": key, "values": list(values)}))
            if lines and self.path is not None:
                with self.path.open("a", encoding="utf-8") as fh:
                    fh.write("".join(lines))


def _payload_bytes(payload: dict) -> bytes:
    return json.dumps(payload, sort_keys=True, separators=(",", ":")).encode("utf-8")


def _record_line(payload: dict) -> str:
    body = _payload_bytes(payload)
    return json.dumps([zlib.crc32(body), payload],
                      sort_keys=True, separators=(",", ":")) + "\n"


class DeterministicProvider:
    """Token-hash bag-of-features vectors (dimension 64).

    Not semantically meaningful; exists so pipelines and oracle tests are
    reproducible across runs and platforms.  Vectors depend only on the
    text bytes.
    """

    name = "test"
    kind = "deterministic-test"
    dimension = 64

    def embed_batch(self, texts: list[str]) -> list[EmbeddingVector]:
        return [self._embed_one(text) for text in texts]

    def _embed_one(self, text: str) -> EmbeddingVector:
        if not text or not text.strip():
            raise ContractError("cannot embed empty text")
        counts = [0.0] * self.dimension
        tokens = _TOKEN_RE.findall(text.lower())
        if not tokens:
            raise ContractError(f"text has no embeddable tokens: {text!r}")
        for token in tokens:
            digest = hashlib.sha256(token.encode("utf-8")).digest()
            counts[int.from_bytes(digest[:4], "big") % self.dimension] += 1.0
        return EmbeddingVector.of(counts)


class CachedFileProvider:
    """Serves embeddings from a frozen cache file; misses are errors."""

    kind = "cached-file"

    def __init__(self, cache: EmbeddingCache):
        if cache.provider_name is None:
            raise ConfigError(f"embedding cache {cache.path} is empty")
        self.cache = cache
        self.name = cache.provider_name
        self.dimension = cache.dimension

    def embed_batch(self, texts: list[str]) -> list[EmbeddingVector]:
        vectors = []
        missing = []
        for text in texts:
            values = self.cache.lookup(self.name, text)
            if values is None:
                missing.append(text)
            else:
                vectors.append(EmbeddingVector.of(values))
        if missing:
            raise CacheMissError(missing)
        return vectors


class RemoteProvider:
    """JSON-over-HTTP embedding endpoint.

    POSTs {"texts": [...]} and expects {"vectors": [[...], ...]}.  The
    vector dimension is discovered from the first response and pinned.
    """

    kind = "remote-service"

    def __init__(self, url: str, name: str | None = None, timeout: float = 30.0):
        self.url = url
        self.name = name or f"remote:{url}"
        self.timeout = timeout
        self.dimension: int | None = None

    def embed_batch(self, texts: list[str]) -> list[EmbeddingVector]:
        try:
            response = requests.post(self.url, json={"texts": list(texts)},
                                     timeout=self.timeout)
        except requests.RequestException as exc:
            raise TransportError(f"embedding request failed: {exc}",
                                 url=self.url, retryable=True) from exc
        if response.status_code >= 500:
            raise TransportError(f"provider returned {response.status_code}",
                                 url=self.url, retryable=True)
        if response.status_code != 200:
            raise TransportError(f"provider returned {response.status_code}",
                                 url=self.url, retryable=False)
        try:
            vectors = response.json()["vectors"]
            embedded = [EmbeddingVector.of(v) for v in vectors]
        except (ValueError, KeyError, TypeError, ContractError) as exc:
            raise TransportError(f"malformed provider response: {exc}",
                                 url=self.url, retryable=False) from exc
        if len(embedded) != len(texts):
            raise TransportError(
                f"provider returned {len(embedded)} vectors for {len(texts)} texts",
                url=self.url, retryable=False)
        for vector in embedded:
            if self.dimension is None:
                self.dimension = vector.dimension
            elif vector.dimension != self.dimension:
                raise TransportError(
                    f"provider changed dimension from {self.dimension} "
                    f"to {vector.dimension}", url=self.url, retryable=False)
        return embedded


class CachingProvider:
    """Wraps a provider with a write-through on-disk cache."""

    def __init__(self, inner, cache: EmbeddingCache):
        self.inner = inner
        self.cache = cache
        self.name = inner.name
        self.kind = inner.kind

    @property
    def dimension(self) -> int | None:
        return self.inner.dimension or self.cache.dimension

    def embed_batch(self, texts: list[str]) -> list[EmbeddingVector]:
        resolved: dict[int, EmbeddingVector] = {}
        misses: list[tuple[int, str]] = []
        for i, text in enumerate(texts):
            values = self.cache.lookup(self.name, text)
            if values is None:
                misses.append((i, text))
            else:
                resolved[i] = EmbeddingVector.of(values)
        if misses:
            fresh = self.inner.embed_batch([text for _, text in misses])
            self.cache.store(self.name,
                             [(text, vec.values)
                              for (_, text), vec in zip(misses, fresh)])
            for (i, _), vec in zip(misses, fresh):
                resolved[i] = vec
        return [resolved[i] for i in range(len(texts))]


def semantic_grid(receiving: list[LearningOutcome], sending: list[LearningOutcome],
                  provider) -> SimilarityGrid:
    """Cosine grid over receiving (rows) × sending (columns) outcomes.

    Exactly one embed_batch call per side.  Negative cosines pass through
    unclamped so downstream thresholds can see provider pathologies.
    """
    if not receiving or not sending:
        raise ContractError("both courses need at least one learning outcome")
    row_vectors = provider.embed_batch([lo.text for lo in receiving])
    col_vectors = provider.embed_batch([lo.text for lo in sending])
    cells = tuple(tuple(cosine(r, c) for c in col_vectors) for r in row_vectors)
    return SimilarityGrid("semantic",
                          tuple(lo.id for lo in receiving),
                          tuple(lo.id for lo in sending),
                          cells)
