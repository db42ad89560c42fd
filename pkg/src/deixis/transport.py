"""Chat-completion transports.

The service contract is one HTTPS POST of ``{model, messages[], temperature}``
returning the assistant text. A file-backed replay transport keyed by
request hash makes CI and reruns deterministic; a fail-on-contact transport
asserts offline isolation.
"""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Protocol

import requests

from .jsonutil import request_hash
from .model import DeixisError

ENV_URL = "DEIXIS_LLM_URL"
ENV_KEY = "DEIXIS_LLM_KEY"


class TransportError(DeixisError):
    """Network failure, HTTP error status, or unusable reply envelope."""


class ChatTransport(Protocol):
    def send(self, body: dict) -> str: ...


class HttpChatTransport:
    def __init__(self, url: str, api_key: str | None = None, timeout_s: float = 60.0):
        self.url = url
        self.api_key = api_key
        self.timeout_s = timeout_s

    def send(self, body: dict) -> str:
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        try:
            resp = requests.post(self.url, json=body, headers=headers, timeout=self.timeout_s)
        except requests.RequestException as e:
            raise TransportError(f"chat request failed: {e}") from e
        if resp.status_code != 200:
            raise TransportError(f"chat endpoint returned HTTP {resp.status_code}")
        try:
            payload = resp.json()
        except ValueError as e:
            raise TransportError("chat endpoint returned non-JSON body") from e
        try:
            return payload["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError):
            pass
        if isinstance(payload.get("content"), str):
            return payload["content"]
        raise TransportError("chat reply carries no message content")


class ReplayTransport:
    """Maps request hash to recorded reply; optionally records through an
    inner transport when a request is missing."""

    def __init__(self, path: str | Path, record_with: ChatTransport | None = None):
        self.path = Path(path)
        self.record_with = record_with
        self.entries: dict[str, str] = {}
        if self.path.exists():
            self.entries = json.loads(self.path.read_text("utf-8"))

    def send(self, body: dict) -> str:
        key = request_hash(body)
        if key in self.entries:
            return self.entries[key]
        if self.record_with is None:
            raise TransportError(f"no recorded reply for request {key[:12]} in {self.path}")
        reply = self.record_with.send(body)
        self.record(body, reply)
        return reply

    def record(self, body: dict, reply: str) -> None:
        self.entries[request_hash(body)] = reply
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self.path.write_text(json.dumps(self.entries, indent=2, sort_keys=True), "utf-8")


class FailOnContactTransport:
    """Any send is a bug; offline mode must never reach a transport."""

    def __init__(self):
        self.calls = 0

    def send(self, body: dict) -> str:
        self.calls += 1
        raise AssertionError("transport contacted in offline mode")


def transport_from_env(
    url: str | None = None, api_key: str | None = None
) -> ChatTransport:
    """Build a transport from DEIXIS_LLM_URL / DEIXIS_LLM_KEY (or overrides).

    ``replay:<path>`` selects the file-backed replay transport; anything
    else is treated as an HTTP endpoint.
    """
    url = url if url is not None else os.environ.get(ENV_URL)
    api_key = api_key if api_key is not None else os.environ.get(ENV_KEY)
    if not url:
        raise TransportError(f"no chat endpoint configured (set {ENV_URL})")
    if url.startswith("replay:"):
        return ReplayTransport(url[len("replay:"):])
    return HttpChatTransport(url, api_key)
