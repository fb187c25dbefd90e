"""Read-only HTTP API over pipeline outputs, serving the explorer UI and scripts."""

from __future__ import annotations

import hashlib
import json
import threading
from collections import OrderedDict, defaultdict
from dataclasses import dataclass
from datetime import date
from pathlib import Path
from typing import Callable

from fastapi import FastAPI, HTTPException, Query, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .aggregation import IdentitySentimentProfile, build_profiles
from .corpus import Paragraph, load_corpus, serialize_paragraph
from .graph import GraphError, GraphScope, NodeKind, build_graph, export_graph, split_node_id
from .mentions import IdentityMention, read_mentions_file
from .sentiment import SentimentPrediction, read_predictions_file

CORPUS_FILE = "corpus.jsonl"
MENTIONS_FILE = "mentions.jsonl"
PREDICTIONS_FILE = "predictions.jsonl"

DEFAULT_PAGE_LIMIT = 20
MAX_PAGE_LIMIT = 200
DEFAULT_CACHE_SCOPES = 32


class BundleError(ValueError):
    pass


@dataclass
class AnalysisBundle:
    """Immutable pipeline outputs plus the inverted indexes the API serves from."""

    paragraphs: list[Paragraph]
    mentions: list[IdentityMention]
    predictions: list[SentimentPrediction]
    content_hash: str

    def __post_init__(self) -> None:
        self.by_id = {p.paragraph_id: p for p in self.paragraphs}
        self.mentions_by_paragraph: dict[str, list[IdentityMention]] = defaultdict(list)
        self.identity_index: dict[str, list[str]] = defaultdict(list)
        self.theme_index: dict[str, list[str]] = defaultdict(list)
        self.location_index: dict[str, list[str]] = defaultdict(list)
        self.label_by_mention = {
            p.mention_id: p.label.value for p in self.predictions if p.label is not None
        }
        for m in self.mentions:
            self.mentions_by_paragraph[m.paragraph_id].append(m)
            if not self.identity_index[m.identity] or self.identity_index[m.identity][-1] != m.paragraph_id:
                self.identity_index[m.identity].append(m.paragraph_id)
        for p in self.paragraphs:
            if p.theme is not None:
                self.theme_index[p.theme].append(p.paragraph_id)
            for loc in p.locations:
                if not self.location_index[loc.text] or self.location_index[loc.text][-1] != p.paragraph_id:
                    self.location_index[loc.text].append(p.paragraph_id)
        self.profiles, _ = build_profiles(self.mentions, self.predictions)

    @classmethod
    def load(cls, directory) -> "AnalysisBundle":
        base = Path(directory)
        digest = hashlib.sha256()
        for name in (CORPUS_FILE, MENTIONS_FILE, PREDICTIONS_FILE):
            path = base / name
            if not path.exists():
                raise BundleError(f"bundle is missing {name}")
            digest.update(name.encode())
            digest.update(path.read_bytes())
        return cls(
            paragraphs=load_corpus(base / CORPUS_FILE),
            mentions=[m for m, _ in read_mentions_file(base / MENTIONS_FILE)],
            predictions=read_predictions_file(base / PREDICTIONS_FILE),
            content_hash=digest.hexdigest(),
        )

    def newspapers(self) -> list[str]:
        return sorted({p.newspaper for p in self.paragraphs})


class _ScopeCache:
    """Bounded LRU with single-flight computation per key."""

    def __init__(self, max_entries: int):
        self.max_entries = max_entries
        self._lock = threading.Lock()
        self._cache: OrderedDict = OrderedDict()
        self._inflight: dict = {}

    def get(self, key, compute: Callable[[], bytes]) -> bytes:
        while True:
            with self._lock:
                if key in self._cache:
                    self._cache.move_to_end(key)
                    return self._cache[key]
                event = self._inflight.get(key)
                if event is None:
                    event = threading.Event()
                    self._inflight[key] = event
                    break
            event.wait()
        try:
            value = compute()
        except BaseException:
            with self._lock:
                del self._inflight[key]
            event.set()
            raise
        with self._lock:
            self._cache[key] = value
            self._cache.move_to_end(key)
            while len(self._cache) > self.max_entries:
                self._cache.popitem(last=False)
            del self._inflight[key]
        event.set()
        return value


def _bad_request(message: str) -> HTTPException:
    return HTTPException(status_code=400, detail=message)


def _not_found(message: str) -> HTTPException:
    return HTTPException(status_code=404, detail=message)


def _parse_date(raw: str | None, name: str) -> date | None:
    if raw is None:
        return None
    try:
        return date.fromisoformat(raw)
    except ValueError:
        raise _bad_request(f"invalid {name} date {raw!r}") from None


def _parse_sentiment(raw: str | None) -> str | None:
    if raw is None:
        return None
    # "+" arrives as a space when a client forgets to percent-encode it.
    value = "+" if raw in (" ", "+") else raw
    if value not in ("+", "-", "0"):
        raise _bad_request(f"invalid sentiment filter {raw!r}")
    return value


def _paragraph_payload(
    bundle: AnalysisBundle, paragraph: Paragraph, mentions: list[IdentityMention]
) -> dict:
    record = json.loads(serialize_paragraph(paragraph))
    record["mentions"] = [
        {
            "mention_id": m.mention_id,
            "sentence": m.sentence,
            "start": m.start,
            "end": m.end,
            "identity": m.identity,
            "category": m.category.value,
            "label": bundle.label_by_mention.get(m.mention_id),
        }
        for m in mentions
    ]
    return record


def create_app(
    bundle: AnalysisBundle,
    cors_origins: tuple[str, ...] = ("*",),
    ui_dir: str | None = None,
    cache_scopes: int = DEFAULT_CACHE_SCOPES,
) -> FastAPI:
    app = FastAPI(title="presslens", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware, allow_origins=list(cors_origins), allow_methods=["GET"], allow_headers=["*"]
    )
    cache = _ScopeCache(cache_scopes)

    @app.exception_handler(HTTPException)
    async def _http_error(request: Request, exc: HTTPException):
        return JSONResponse(
            status_code=exc.status_code,
            content={"error": {"status": exc.status_code, "message": str(exc.detail)}},
            headers={"X-Bundle-Hash": bundle.content_hash},
        )

    @app.exception_handler(RequestValidationError)
    async def _validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={"error": {"status": 400, "message": "invalid query parameters"}},
            headers={"X-Bundle-Hash": bundle.content_hash},
        )

    @app.middleware("http")
    async def _stamp_bundle_hash(request: Request, call_next):
        response = await call_next(request)
        response.headers.setdefault("X-Bundle-Hash", bundle.content_hash)
        return response

    @app.get("/api/newspapers")
    def newspapers():
        return bundle.newspapers()

    @app.get("/api/themes")
    def themes(newspaper: str | None = None):
        counts: dict[str, int] = defaultdict(int)
        for p in bundle.paragraphs:
            if p.theme is None:
                continue
            if newspaper is not None and p.newspaper != newspaper:
                continue
            counts[p.theme] += 1
        return [{"theme": theme, "paragraphs": counts[theme]} for theme in sorted(counts)]

    @app.get("/api/graph")
    def graph_endpoint(
        newspaper: str | None = None,
        themes: str | None = None,
        min_weight: int = Query(default=1),
        date_from: str | None = Query(default=None, alias="from"),
        date_to: str | None = Query(default=None, alias="to"),
    ):
        if min_weight < 1:
            raise _bad_request("min_weight must be >= 1")
        theme_set = frozenset(t for t in themes.split(",") if t) if themes else None
        scope = GraphScope(
            newspaper=newspaper,
            themes=theme_set,
            min_weight=min_weight,
            date_from=_parse_date(date_from, "from"),
            date_to=_parse_date(date_to, "to"),
        )
        key = (scope.newspaper, scope.themes, scope.min_weight, scope.date_from, scope.date_to)
        payload = cache.get(
            key,
            lambda: export_graph(
                build_graph(bundle.paragraphs, bundle.mentions, bundle.predictions, scope)
            ),
        )
        return Response(content=payload, media_type="application/json")

    @app.get("/api/nodes/{node_id}/paragraphs")
    def node_paragraphs(
        node_id: str,
        limit: int = Query(default=DEFAULT_PAGE_LIMIT, ge=1, le=MAX_PAGE_LIMIT),
        offset: int = Query(default=0, ge=0),
        sentiment: str | None = None,
    ):
        try:
            kind, label = split_node_id(node_id)
        except GraphError as exc:
            raise _bad_request(str(exc)) from None
        wanted = _parse_sentiment(sentiment)

        if kind is NodeKind.IDENTITY:
            paragraph_ids = bundle.identity_index.get(label)
        elif kind is NodeKind.THEME:
            paragraph_ids = bundle.theme_index.get(label)
        elif kind is NodeKind.LOCATION:
            paragraph_ids = bundle.location_index.get(label)
        else:
            if label not in ("+", "-", "0"):
                paragraph_ids = None
            else:
                paragraph_ids = sorted(
                    {
                        m.paragraph_id
                        for m in bundle.mentions
                        if bundle.label_by_mention.get(m.mention_id) == label
                    }
                )
        if not paragraph_ids:
            raise _not_found(f"unknown node id {node_id!r}")

        results = []
        for pid in paragraph_ids:
            paragraph = bundle.by_id.get(pid)
            if paragraph is None:
                continue
            para_mentions = bundle.mentions_by_paragraph.get(pid, [])
            if kind is NodeKind.IDENTITY:
                relevant = [m for m in para_mentions if m.identity == label]
            elif kind is NodeKind.SENTIMENT:
                relevant = [
                    m for m in para_mentions if bundle.label_by_mention.get(m.mention_id) == label
                ]
            else:
                relevant = para_mentions
            if wanted is not None:
                if not any(bundle.label_by_mention.get(m.mention_id) == wanted for m in relevant):
                    continue
            results.append((paragraph, relevant))

        results.sort(key=lambda item: (item[0].issue_date, item[0].paragraph_id))
        page = results[offset : offset + limit]
        return {
            "node": node_id,
            "total": len(results),
            "limit": limit,
            "offset": offset,
            "results": [_paragraph_payload(bundle, p, ms) for p, ms in page],
        }

    @app.get("/api/identities/{label}/profile")
    def identity_profile(label: str, newspaper: str | None = None):
        matching = [p for p in bundle.profiles if p.identity == label]
        if newspaper is not None:
            matching = [p for p in matching if p.newspaper == newspaper]
        if not matching:
            raise _not_found(f"no profile for identity {label!r}")
        if newspaper is not None:
            return matching[0].to_dict()
        if len(matching) == 1:
            return matching[0].to_dict()
        combined = IdentitySentimentProfile(
            identity=label,
            newspaper="*",
            positive=sum(p.positive for p in matching),
            negative=sum(p.negative for p in matching),
            neutral=sum(p.neutral for p in matching),
        )
        payload = combined.to_dict()
        payload["per_newspaper"] = [p.to_dict() for p in matching]
        return payload

    @app.get("/api/paragraphs/{paragraph_id}")
    def paragraph(paragraph_id: str):
        record = bundle.by_id.get(paragraph_id)
        if record is None:
            raise _not_found(f"unknown paragraph id {paragraph_id!r}")
        return _paragraph_payload(bundle, record, bundle.mentions_by_paragraph.get(paragraph_id, []))

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


def serve(bundle: AnalysisBundle, bind: str = "127.0.0.1:8420", **app_kwargs) -> None:
    import uvicorn

    host, _, port = bind.partition(":")
    app = create_app(bundle, **app_kwargs)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8420), log_level="info")
