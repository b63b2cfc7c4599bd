"""HTTP model client with retries and a write-through JSONL response cache.

The wire protocol is a POST of {"prompt": "..."} answered by
{"text": "..."}. Responses are cached keyed by (doc_id, segment_index,
prompt_type) so evaluation runs are resumable; offline mode serves cached
rows only and fails loudly on a miss.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import IO

import requests

from .util import read_jsonl, write_jsonl_line

CacheKey = tuple[str, int | None, str]


class EndpointError(RuntimeError):
    pass


@dataclass
class ModelEndpoint:
    url: str
    timeout: float = 30.0
    max_retries: int = 2
    retry_wait: float = 0.5

    def query(self, prompt: str) -> str:
        last: Exception | None = None
        for attempt in range(self.max_retries + 1):
            try:
                resp = requests.post(self.url, json={"prompt": prompt}, timeout=self.timeout)
                resp.raise_for_status()
                text = resp.json().get("text")
                if not isinstance(text, str):
                    raise EndpointError("response lacks a string 'text' field")
                return text
            except (requests.RequestException, ValueError, EndpointError) as exc:
                last = exc
                if attempt < self.max_retries:
                    time.sleep(self.retry_wait * (attempt + 1))
        raise EndpointError(f"endpoint failed after {self.max_retries + 1} attempts: {last}")


class ModelClient:
    """Cached access to a model endpoint.

    Cache rows: {"doc_id", "segment_index" (null for article prompts),
    "prompt_type", "text"}, appended as they arrive so an interrupted run
    loses nothing."""

    def __init__(
        self,
        endpoint: ModelEndpoint | None = None,
        cache_path: str | Path | None = None,
        offline: bool = False,
    ):
        if offline and cache_path is None:
            raise ValueError("offline mode requires a cache file")
        self._endpoint = endpoint
        self._offline = offline
        self._cache: dict[CacheKey, str] = {}
        self._fh: IO[str] | None = None
        self._lock = threading.Lock()
        if cache_path is not None:
            cache_path = Path(cache_path)
            if cache_path.exists():
                for _, row in read_jsonl(cache_path):
                    key = (row["doc_id"], row.get("segment_index"), row["prompt_type"])
                    self._cache[key] = row["text"]
            if not offline:
                self._fh = open(cache_path, "a", encoding="utf-8")

    def get_text(self, doc_id: str, segment_index: int | None, prompt_type: str, prompt: str) -> str:
        key = (doc_id, segment_index, prompt_type)
        with self._lock:
            if key in self._cache:
                return self._cache[key]
        if self._offline or self._endpoint is None:
            raise EndpointError(f"no cached output for {key} and no endpoint available")
        text = self._endpoint.query(prompt)
        with self._lock:
            self._cache[key] = text
            if self._fh is not None:
                write_jsonl_line(
                    self._fh,
                    {
                        "doc_id": doc_id,
                        "segment_index": segment_index,
                        "prompt_type": prompt_type,
                        "text": text,
                    },
                )
                self._fh.flush()
        return text

    def close(self) -> None:
        if self._fh is not None:
            self._fh.close()
            self._fh = None

    def __enter__(self) -> "ModelClient":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()
