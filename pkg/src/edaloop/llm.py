"""Provider-abstracted LLM completion with accounting.

A provider is anything with a ``send(messages, config)`` method returning a
``ProviderReply``. Two providers ship here: an HTTPS chat-completion client
(key read from an environment variable, never persisted) and a scripted
provider that replays a transcript file by turn index for deterministic,
offline runs.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Protocol, Sequence

import httpx

ROLES = ("system", "user", "assistant")


class TransportError(Exception):
    """Network-level failure talking to a provider; retriable."""

    def __init__(self, message: str, attempts: int = 1):
        super().__init__(message)
        self.attempts = attempts


class EmptyResponseError(Exception):
    """Provider returned no text; not retriable."""


@dataclass(frozen=True)
class Message:
    role: str
    content: str

    def __post_init__(self) -> None:
        if self.role not in ROLES:
            raise ValueError(f"bad role {self.role!r}")
        if not self.content:
            raise ValueError("message content must be non-empty")


@dataclass(frozen=True)
class LlmConfig:
    """Sampling configuration; absent fields mean provider defaults."""

    model_id: str
    max_tokens: Optional[int] = None
    temperature: Optional[float] = None
    top_p: Optional[float] = None

    def __post_init__(self) -> None:
        if self.max_tokens is not None and self.max_tokens <= 0:
            raise ValueError("max_tokens must be positive")
        if self.temperature is not None and self.temperature < 0:
            raise ValueError("temperature must be non-negative")
        if self.top_p is not None and not (0 < self.top_p <= 1):
            raise ValueError("top_p must be in (0, 1]")


@dataclass(frozen=True)
class LlmExchange:
    """One request/response pair with token and latency accounting."""

    request: tuple[Message, ...]
    response: str
    prompt_tokens: int
    completion_tokens: int
    latency_s: float
    model_id: str
    token_source: str  # provider_metadata | estimated

    def __post_init__(self) -> None:
        if self.prompt_tokens < 0 or self.completion_tokens < 0:
            raise ValueError("token counts must be non-negative")
        if self.latency_s < 0:
            raise ValueError("latency must be non-negative")
        if self.token_source not in ("provider_metadata", "estimated"):
            raise ValueError(f"bad token_source {self.token_source!r}")


@dataclass(frozen=True)
class ProviderReply:
    text: str
    prompt_tokens: Optional[int] = None
    completion_tokens: Optional[int] = None


class Provider(Protocol):
    def send(self, messages: Sequence[Message], config: LlmConfig) -> ProviderReply: ...


def estimate_tokens(text: str) -> int:
    """Coarse token estimate: ceil(utf-8 byte length / 4).

    Used only when provider metadata is missing; deterministic and monotone
    non-decreasing in text length.
    """
    return (len(text.encode("utf-8")) + 3) // 4


class ScriptedProvider:
    """Replays canned responses keyed by turn index.

    The turn index is the number of user messages seen so far minus one, so
    the provider is referentially transparent: the same history always maps
    to the same response. Transcripts are UTF-8 JSONL, one record per turn
    with a ``response`` field.
    """

    def __init__(self, responses: Sequence[str]):
        if not responses:
            raise ValueError("scripted provider needs at least one response")
        self.responses = list(responses)

    @classmethod
    def from_transcript(cls, path: str | Path) -> "ScriptedProvider":
        responses = []
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            responses.append(json.loads(line)["response"])
        return cls(responses)

    def send(self, messages: Sequence[Message], config: LlmConfig) -> ProviderReply:
        turn = sum(1 for m in messages if m.role == "user") - 1
        if turn < 0:
            raise TransportError("history contains no user message")
        if turn >= len(self.responses):
            raise TransportError(f"transcript exhausted at turn {turn}")
        return ProviderReply(self.responses[turn])


class HttpProvider:
    """Chat-completion client for an OpenAI-style HTTPS endpoint.

    The API key is read from ``key_env`` at call time and never stored on
    any record that gets persisted.
    """

    def __init__(self, endpoint: str, key_env: str = "EDALOOP_API_KEY", timeout_s: float = 120.0):
        self.endpoint = endpoint
        self.key_env = key_env
        self.timeout_s = timeout_s

    def send(self, messages: Sequence[Message], config: LlmConfig) -> ProviderReply:
        key = os.environ.get(self.key_env, "")
        payload: dict = {
            "model": config.model_id,
            "messages": [{"role": m.role, "content": m.content} for m in messages],
        }
        if config.max_tokens is not None:
            payload["max_tokens"] = config.max_tokens
        if config.temperature is not None:
            payload["temperature"] = config.temperature
        if config.top_p is not None:
            payload["top_p"] = config.top_p
        headers = {"Authorization": f"Bearer {key}"} if key else {}
        try:
            resp = httpx.post(self.endpoint, json=payload, headers=headers, timeout=self.timeout_s)
            resp.raise_for_status()
        except httpx.HTTPError as exc:
            raise TransportError(str(exc)) from exc
        body = resp.json()
        text = body["choices"][0]["message"]["content"] or ""
        usage = body.get("usage", {})
        return ProviderReply(text, usage.get("prompt_tokens"), usage.get("completion_tokens"))


def complete(
    history: Sequence[Message],
    config: LlmConfig,
    provider: Provider,
    max_attempts: int = 3,
    backoff_s: float = 0.5,
) -> LlmExchange:
    """Run one completion over the full conversation history.

    The history must start with exactly one system message. Transport
    failures are retried with exponential backoff; an empty response is a
    hard error (malformed content must flow to validation, not be retried).
    Token counts come from provider metadata when available, otherwise from
    the byte-length estimator.
    """
    history = tuple(history)
    if not history or history[0].role != "system":
        raise ValueError("history must start with a system message")
    if sum(1 for m in history if m.role == "system") != 1:
        raise ValueError("history must contain exactly one system message")

    reply: Optional[ProviderReply] = None
    start = time.monotonic()
    for attempt in range(1, max_attempts + 1):
        try:
            start = time.monotonic()
            reply = provider.send(history, config)
            break
        except TransportError as exc:
            if attempt == max_attempts:
                raise TransportError(f"{exc} (after {attempt} attempts)", attempts=attempt) from exc
            time.sleep(backoff_s * (2 ** (attempt - 1)))
    latency = time.monotonic() - start

    assert reply is not None
    if not reply.text.strip():
        raise EmptyResponseError(f"model {config.model_id} returned empty response text")

    if reply.prompt_tokens is not None and reply.completion_tokens is not None:
        prompt_tokens, completion_tokens = reply.prompt_tokens, reply.completion_tokens
        token_source = "provider_metadata"
    else:
        prompt_tokens = sum(estimate_tokens(m.content) for m in history)
        completion_tokens = estimate_tokens(reply.text)
        token_source = "estimated"

    return LlmExchange(
        request=history,
        response=reply.text,
        prompt_tokens=prompt_tokens,
        completion_tokens=completion_tokens,
        latency_s=latency,
        model_id=config.model_id,
        token_source=token_source,
    )


def append_turn(
    history: Sequence[Message], user_text: str, exchange: LlmExchange
) -> tuple[Message, ...]:
    """Extend a conversation by one user/assistant pair."""
    if not user_text.strip():
        raise ValueError("user turn must be non-empty")
    return tuple(history) + (Message("user", user_text), Message("assistant", exchange.response))


def message_to_dict(m: Message) -> dict:
    return {"role": m.role, "content": m.content}


def message_from_dict(d: dict) -> Message:
    return Message(d["role"], d["content"])


def exchange_to_dict(e: LlmExchange) -> dict:
    return {
        "request": [message_to_dict(m) for m in e.request],
        "response": e.response,
        "prompt_tokens": e.prompt_tokens,
        "completion_tokens": e.completion_tokens,
        "latency_s": e.latency_s,
        "model_id": e.model_id,
        "token_source": e.token_source,
    }


def exchange_from_dict(d: dict) -> LlmExchange:
    return LlmExchange(
        request=tuple(message_from_dict(m) for m in d["request"]),
        response=d["response"],
        prompt_tokens=d["prompt_tokens"],
        completion_tokens=d["completion_tokens"],
        latency_s=d["latency_s"],
        model_id=d["model_id"],
        token_source=d["token_source"],
    )
