"""Translation engines behind one small interface.

Shipped: an identity stub, a dictionary pseudo-translator for deterministic
end-to-end runs, and an adapter for an external process or HTTP endpoint
speaking the same JSON-lines protocol as the external scorer.
"""

from __future__ import annotations

import re
import threading
from abc import ABC, abstractmethod
from typing import Iterable, Mapping

from wxtrans.errors import EngineError, EngineUnavailable, InvalidArgument
from wxtrans.metrics.external import JsonTransport, TransportError
from wxtrans.tmem.memory import format_lang_pair, normalize_source, parse_lang_pair


class Engine(ABC):
    engine_id: str

    def __init__(self, engine_id: str, pairs: Iterable | None = None):
        if not engine_id:
            raise InvalidArgument("engine_id must be nonempty")
        self.engine_id = engine_id
        self.pairs = None if pairs is None else frozenset(parse_lang_pair(p) for p in pairs)
        self._calls = 0
        self._lock = threading.Lock()

    @property
    def calls(self) -> int:
        return self._calls

    def supports(self, lang_pair) -> bool:
        return self.pairs is None or parse_lang_pair(lang_pair) in self.pairs

    def translate(self, text: str, lang_pair) -> str:
        pair = parse_lang_pair(lang_pair)
        if not self.supports(pair):
            raise InvalidArgument(f"engine {self.engine_id} does not support {format_lang_pair(pair)}")
        with self._lock:
            self._calls += 1
        return self._translate(text, pair)

    @abstractmethod
    def _translate(self, text: str, pair: tuple[str, str]) -> str: ...

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.engine_id!r})"


class IdentityEngine(Engine):
    def __init__(self, engine_id: str = "identity", pairs: Iterable | None = None):
        super().__init__(engine_id, pairs)

    def _translate(self, text: str, pair) -> str:
        return text


class DictionaryEngine(Engine):
    """Whole-sentence lookup, falling back to longest-first term substitution.

    ``sentences`` maps normalized source sentences to targets; ``terms`` maps
    source phrases to target phrases (matched case-insensitively on word
    boundaries). Unknown words pass through unchanged.
    """

    def __init__(
        self,
        engine_id: str,
        lang_pair,
        sentences: Mapping[str, str] | None = None,
        terms: Mapping[str, str] | None = None,
    ):
        super().__init__(engine_id, [lang_pair])
        self.sentences = {normalize_source(k): v for k, v in (sentences or {}).items()}
        self.terms = dict(terms or {})
        if self.terms:
            alts = sorted(self.terms, key=len, reverse=True)
            self._term_re = re.compile(
                r"(?<!\w)(" + "|".join(re.escape(t) for t in alts) + r")(?!\w)", re.IGNORECASE
            )
            self._folded = {k.casefold(): v for k, v in self.terms.items()}
        else:
            self._term_re = None

    @classmethod
    def from_termbase(cls, engine_id: str, lang_pair, entries, sentences=None) -> DictionaryEngine:
        pair = parse_lang_pair(lang_pair)
        terms = {e.source_term: e.approved for e in entries if e.lang_pair == pair}
        return cls(engine_id, pair, sentences, terms)

    def _translate(self, text: str, pair) -> str:
        hit = self.sentences.get(normalize_source(text))
        if hit is not None:
            return hit
        if self._term_re is None:
            return text
        return self._term_re.sub(lambda m: self._folded[m.group(0).casefold()], text)


class ExternalEngine(Engine):
    """Request ``{text, source_lang, target_lang}``; reply ``{translation}``."""

    def __init__(self, engine_id: str, transport: JsonTransport, pairs: Iterable | None = None):
        super().__init__(engine_id, pairs)
        self.transport = transport

    @classmethod
    def from_spec(cls, engine_id: str, spec, pairs=None, timeout: float = 30.0) -> ExternalEngine:
        return cls(engine_id, JsonTransport.from_spec(spec, timeout=timeout), pairs)

    def translate_many(self, texts: list[str], lang_pair) -> list[str]:
        pair = parse_lang_pair(lang_pair)
        if not self.supports(pair):
            raise InvalidArgument(f"engine {self.engine_id} does not support {format_lang_pair(pair)}")
        with self._lock:
            self._calls += len(texts)
        return self._request(texts, pair)

    def _request(self, texts: list[str], pair) -> list[str]:
        reqs = [{"text": t, "source_lang": pair[0], "target_lang": pair[1]} for t in texts]
        try:
            replies = self.transport.request_many(reqs)
        except TransportError as exc:
            raise EngineUnavailable(f"engine {self.engine_id} unavailable: {exc}", {"engine": self.engine_id}) from exc
        out = []
        for i, rep in enumerate(replies):
            tr = rep.get("translation") if isinstance(rep, dict) else None
            if not isinstance(tr, str):
                raise EngineError(
                    f"engine {self.engine_id} returned a malformed reply", {"index": i, "reply": rep}
                )
            out.append(tr)
        return out

    def _translate(self, text: str, pair) -> str:
        return self._request([text], pair)[0]


class EngineRegistry:
    def __init__(self, engines: Iterable[Engine] = ()):
        self._engines: dict[str, Engine] = {}
        for e in engines:
            self.register(e)

    def register(self, engine: Engine) -> None:
        if engine.engine_id in self._engines:
            raise InvalidArgument(f"engine {engine.engine_id!r} already registered")
        self._engines[engine.engine_id] = engine

    def get(self, engine_id: str) -> Engine:
        try:
            return self._engines[engine_id]
        except KeyError:
            raise InvalidArgument(f"no engine registered as {engine_id!r}") from None

    def __contains__(self, engine_id: str) -> bool:
        return engine_id in self._engines

    def ids(self) -> list[str]:
        return sorted(self._engines)
