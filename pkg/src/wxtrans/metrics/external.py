"""Adapter for scorers and engines living outside this process.

Wire protocol: one JSON object per line on a child's stdin/stdout, or a
single JSON object per HTTP POST. The scorer request is ``{src, hyp, ref}``
and the reply ``{score}``.
"""

from __future__ import annotations

import json
import shlex
import subprocess
from dataclasses import dataclass
from typing import Sequence

import httpx

from wxtrans.errors import ScorerFailure, ScorerUnavailable

DEFAULT_TIMEOUT = 10.0


class TransportError(Exception):
    def __init__(self, message: str, diagnostics: str = ""):
        super().__init__(message)
        self.diagnostics = diagnostics


@dataclass(frozen=True)
class JsonTransport:
    """Send JSON requests to a command (line-delimited stdio) or a URL (POST)."""

    command: tuple[str, ...] | None = None
    url: str | None = None
    timeout: float = DEFAULT_TIMEOUT

    @classmethod
    def from_spec(cls, spec: str | Sequence[str], timeout: float = DEFAULT_TIMEOUT) -> JsonTransport:
        if isinstance(spec, str) and spec.startswith(("http://", "https://")):
            return cls(url=spec, timeout=timeout)
        cmd = shlex.split(spec) if isinstance(spec, str) else list(spec)
        return cls(command=tuple(cmd), timeout=timeout)

    @property
    def identity(self) -> str:
        if self.url:
            return self.url
        return shlex.join(self.command or ())

    def request_many(self, payloads: list[dict]) -> list[dict]:
        if not payloads:
            return []
        if self.url:
            return [self._post(p) for p in payloads]
        return self._run(payloads)

    def _post(self, payload: dict) -> dict:
        try:
            resp = httpx.post(self.url, json=payload, timeout=self.timeout)
        except httpx.HTTPError as exc:
            raise TransportError(f"request to {self.url} failed", repr(exc)) from exc
        if resp.status_code != 200:
            raise TransportError(f"{self.url} replied HTTP {resp.status_code}", resp.text[:2000])
        try:
            return resp.json()
        except ValueError as exc:
            raise TransportError("reply is not JSON", resp.text[:2000]) from exc

    def _run(self, payloads: list[dict]) -> list[dict]:
        stdin = "".join(json.dumps(p, ensure_ascii=False) + "\n" for p in payloads)
        try:
            proc = subprocess.run(
                list(self.command),
                input=stdin,
                capture_output=True,
                text=True,
                encoding="utf-8",
                timeout=self.timeout,
            )
        except (OSError, subprocess.TimeoutExpired) as exc:
            raise TransportError(f"could not run {self.identity}", repr(exc)) from exc
        if proc.returncode != 0:
            raise TransportError(f"{self.identity} exited with {proc.returncode}", proc.stderr[-2000:])
        lines = [ln for ln in proc.stdout.splitlines() if ln.strip()]
        if len(lines) != len(payloads):
            raise TransportError(
                f"expected {len(payloads)} reply lines, got {len(lines)}",
                proc.stdout[-2000:] + proc.stderr[-2000:],
            )
        try:
            return [json.loads(ln) for ln in lines]
        except ValueError as exc:
            raise TransportError("reply line is not JSON", proc.stdout[-2000:]) from exc


@dataclass(frozen=True)
class ExternalScore:
    score: float
    scorer: str


class ExternalScorer:
    """A neural (or any) scorer reached over :class:`JsonTransport`."""

    def __init__(self, transport: JsonTransport | None, name: str | None = None):
        self.transport = transport
        self.name = name or (transport.identity if transport else "unconfigured")

    @classmethod
    def from_spec(cls, spec: str | None, timeout: float = DEFAULT_TIMEOUT) -> ExternalScorer:
        return cls(JsonTransport.from_spec(spec, timeout) if spec else None)

    @property
    def configured(self) -> bool:
        return self.transport is not None

    def score_many(self, triples: Sequence[tuple[str, str, str]]) -> list[ExternalScore]:
        if self.transport is None:
            raise ScorerUnavailable("no external scorer configured")
        payloads = [{"src": s, "hyp": h, "ref": r} for s, h, r in triples]
        try:
            replies = self.transport.request_many(payloads)
        except TransportError as exc:
            raise ScorerFailure(str(exc), exc.diagnostics) from exc
        out = []
        for reply in replies:
            value = reply.get("score") if isinstance(reply, dict) else None
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ScorerFailure("malformed scorer reply", json.dumps(reply)[:2000])
            out.append(ExternalScore(float(value), self.name))
        return out


def external_score(src: str, hyp: str, ref: str, scorer: ExternalScorer | None) -> ExternalScore:
    """Score one triple with ``scorer``; the value is passed through unchanged."""
    if scorer is None:
        raise ScorerUnavailable("no external scorer configured")
    return scorer.score_many([(src, hyp, ref)])[0]
