"""HTTP boundary: ranked search with sentiment partitioning, event intake,
and report delivery.

Endpoints:
    GET  /search?q=&pos_min=&pos_max=&neg_min=&neg_max=&limit=
    POST /events            (one SessionEvent per request)
    GET  /report/treatment
    GET  /report/taxonomy
    GET  /corpus/stats

The whole server state is the immutable corpus/index plus the append-only
event log, so searches run concurrently without locks and never block on
event writes.
"""

import json
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlsplit

from . import analytics
from .corpus import Corpus
from .facets import (
    FULL_RECT,
    SentimentRect,
    distribution_summary,
    partition_by_rect,
)
from .index import (
    DEFAULT_B,
    DEFAULT_K1,
    DEFAULT_LIMIT,
    EmptyQueryError,
    InvertedIndex,
    search_with_total,
)
from .session import (
    ReplayResult,
    SequencingError,
    SessionLog,
    UnknownKindError,
    EventValidationError,
    metrics_from_streams,
    parse_event,
)

MAX_LIMIT = 200
DEFAULT_BIN_COUNT = 20


class NoDataError(Exception):
    """The log holds no complete stream to report on."""


def build_report_document(replay: ReplayResult, kind: str, alpha: float = 0.05) -> dict:
    """The canonical report document for a replayed log; shared between the
    HTTP endpoint and the CLI so both emit identical bytes."""
    if kind not in ("treatment", "taxonomy"):
        raise ValueError(f"unknown report kind {kind!r}")
    if not replay.metrics:
        raise NoDataError("no complete streams in log")
    if kind == "treatment":
        doc = analytics.build_treatment_report(replay.metrics, alpha=alpha)
    else:
        classifications, excluded = analytics.classification_from_metrics(replay.metrics)
        classified = {c.user_id for c in classifications}
        usable = [m for m in replay.metrics if m.user_id in classified]
        doc = analytics.build_taxonomy_report(usable, classifications, alpha=alpha)
        doc["exploration_scores"] = {
            c.user_id: c.exploration_score for c in classifications
        }
        doc["excluded_users"] = excluded
    doc["incomplete_streams"] = replay.incomplete
    return doc


def report_to_text(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


class SearchService:
    """Transport-independent core behind the HTTP handler."""

    def __init__(
        self,
        corpus: Corpus,
        index: InvertedIndex,
        log: SessionLog,
        k1: float = DEFAULT_K1,
        b: float = DEFAULT_B,
        bin_count: int = DEFAULT_BIN_COUNT,
    ):
        self.corpus = corpus
        self.index = index
        self.log = log
        self.k1 = k1
        self.b = b
        self.bin_count = bin_count

    def search(
        self,
        query: str,
        rect: SentimentRect | None = None,
        limit: int | None = None,
    ) -> dict:
        rect = rect if rect is not None else FULL_RECT
        limit = DEFAULT_LIMIT if limit is None else min(limit, MAX_LIMIT)
        ranked, total = search_with_total(
            query, self.index, limit=limit, k1=self.k1, b=self.b
        )
        hits = []
        for hit in ranked:
            doc = self.corpus.get(hit.doc_id)
            hits.append(
                {
                    "doc_id": doc.doc_id,
                    "title": doc.title,
                    "abstract": doc.abstract,
                    "positivity": doc.positivity,
                    "negativity": doc.negativity,
                    "display_category": self.corpus.display_category(doc),
                    "bm25_score": hit.bm25_score,
                }
            )
        parts = partition_by_rect(
            hits, rect, key=lambda h: (h["positivity"], h["negativity"])
        )
        for item in parts.in_focus:
            item["in_focus"] = True
        for item in parts.out_of_focus:
            item["in_focus"] = False
        distributions = None
        if hits:
            distributions = distribution_summary(
                hits,
                self.bin_count,
                key=lambda h: (h["positivity"], h["negativity"]),
            ).to_dict()
        return {
            "total_matches": total,
            "hits": hits,
            "active_rect": rect.to_dict(),
            "distributions": distributions,
        }

    def submit_event(self, payload: dict) -> dict:
        event = parse_event(payload)
        self.log.record_event(event)  # durable before the ack below
        return {"acknowledged": True}

    def report(self, kind: str) -> dict:
        replay = metrics_from_streams(self.log.streams)
        return build_report_document(replay, kind)

    def corpus_stats(self) -> dict:
        stats = distribution_summary(self.corpus.documents, self.bin_count)
        return {"document_count": len(self.corpus), **stats.to_dict()}


def _parse_rect(params) -> SentimentRect:
    values = {}
    for key, default in (
        ("pos_min", 1.0),
        ("pos_max", 5.0),
        ("neg_min", 1.0),
        ("neg_max", 5.0),
    ):
        raw = params.get(key)
        if raw is None:
            values[key] = default
        else:
            values[key] = float(raw[-1])
    return SentimentRect(**values)


class _ServiceHandler(BaseHTTPRequestHandler):
    service: SearchService = None  # bound by make_server

    protocol_version = "HTTP/1.1"

    def log_message(self, format, *args):  # keep request noise out of test output
        pass

    def _send_json(self, status: int, body: str) -> None:
        data = body.encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(data)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(data)

    def _send_doc(self, status: int, doc: dict) -> None:
        self._send_json(status, json.dumps(doc, ensure_ascii=False))

    def _send_error(self, status: int, code: str, detail: str = "") -> None:
        doc = {"error": code}
        if detail:
            doc["detail"] = detail
        self._send_doc(status, doc)

    def do_OPTIONS(self):
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Content-Length", "0")
        self.end_headers()

    def do_GET(self):
        url = urlsplit(self.path)
        params = parse_qs(url.query)
        if url.path == "/search":
            self._handle_search(params)
        elif url.path == "/corpus/stats":
            self._send_doc(200, self.service.corpus_stats())
        elif url.path in ("/report/treatment", "/report/taxonomy"):
            self._handle_report(url.path.rsplit("/", 1)[1])
        else:
            self._send_error(404, "not_found", self.path)

    def _handle_search(self, params):
        query = params.get("q", [""])[-1]
        try:
            rect = _parse_rect(params)
        except ValueError as exc:
            self._send_error(400, "invalid_rect", str(exc))
            return
        limit = None
        if "limit" in params:
            try:
                limit = int(params["limit"][-1])
            except ValueError:
                self._send_error(400, "invalid_limit", params["limit"][-1])
                return
            if limit < 1:
                self._send_error(400, "invalid_limit", f"limit must be >= 1, got {limit}")
                return
        try:
            doc = self.service.search(query, rect=rect, limit=limit)
        except EmptyQueryError:
            self._send_error(400, "empty_query")
            return
        self._send_doc(200, doc)

    def _handle_report(self, kind: str):
        try:
            doc = self.service.report(kind)
        except NoDataError as exc:
            self._send_error(409, "no_data", str(exc))
            return
        except analytics.InsufficientDataError as exc:
            self._send_error(409, "insufficient_data", str(exc))
            return
        self._send_json(200, report_to_text(doc))

    def do_POST(self):
        url = urlsplit(self.path)
        if url.path != "/events":
            self._send_error(404, "not_found", self.path)
            return
        try:
            length = int(self.headers.get("Content-Length", "0"))
            payload = json.loads(self.rfile.read(length).decode("utf-8"))
        except (ValueError, UnicodeDecodeError) as exc:
            self._send_error(400, "malformed_json", str(exc))
            return
        try:
            ack = self.service.submit_event(payload)
        except UnknownKindError as exc:
            self._send_error(400, "unknown_kind", str(exc))
            return
        except EventValidationError as exc:
            self._send_error(400, "invalid_event", str(exc))
            return
        except SequencingError as exc:
            self._send_error(409, "sequencing_error", str(exc))
            return
        self._send_doc(200, ack)


def make_server(service: SearchService, host: str = "127.0.0.1", port: int = 8080):
    """ThreadingHTTPServer bound to `service`; caller runs serve_forever()."""
    handler = type("BoundServiceHandler", (_ServiceHandler,), {"service": service})
    server = ThreadingHTTPServer((host, port), handler)
    server.daemon_threads = True
    return server
