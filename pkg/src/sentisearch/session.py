"""Append-only session event log and per-(user, treatment) metrics.

One JSON record per line with the keys ts_ms, user_id, treatment, task_id,
kind, payload. Writes go through a single owner and are fsynced before
record_event returns, so an acknowledged event survives a hard kill.
"""

import json
import os
import threading
from dataclasses import dataclass, field

from .facets import SentimentRect

TREATMENTS = ("BA", "SC", "PC")
EVENT_KINDS = (
    "task_start",
    "query",
    "filter_change",
    "result_select",
    "questionnaire",
    "task_end",
)
EVENT_FIELDS = ("ts_ms", "user_id", "treatment", "task_id", "kind", "payload")

AESTHETICS_QUESTIONS = 5


class SessionError(Exception):
    pass


class EventValidationError(SessionError):
    pass


class UnknownKindError(EventValidationError):
    pass


class SequencingError(SessionError):
    pass


class IncompleteTaskError(SessionError):
    pass


class ReplayError(SessionError):
    pass


@dataclass(frozen=True)
class SessionEvent:
    ts_ms: int
    user_id: str
    treatment: str
    task_id: str
    kind: str
    payload: dict = field(default_factory=dict)

    @property
    def stream_key(self) -> tuple:
        return (self.user_id, self.treatment, self.task_id)

    def to_dict(self) -> dict:
        return {
            "ts_ms": self.ts_ms,
            "user_id": self.user_id,
            "treatment": self.treatment,
            "task_id": self.task_id,
            "kind": self.kind,
            "payload": self.payload,
        }


def _payload_problems(kind: str, payload) -> list:
    problems: list[str] = []
    if not isinstance(payload, dict):
        return ["payload is not an object"]
    if kind in ("task_start", "task_end"):
        if payload:
            problems.append(f"{kind} payload must be empty")
    elif kind == "query":
        if set(payload) != {"text"} or not isinstance(payload.get("text"), str):
            problems.append("query payload must be {text: string}")
    elif kind == "result_select":
        if set(payload) != {"doc_id"} or not isinstance(payload.get("doc_id"), str):
            problems.append("result_select payload must be {doc_id: string}")
    elif kind == "filter_change":
        rect = payload.get("rect")
        if set(payload) != {"rect"} or not isinstance(rect, dict):
            problems.append("filter_change payload must be {rect: object}")
        else:
            expected = {"pos_min", "pos_max", "neg_min", "neg_max"}
            if set(rect) != expected or not all(
                isinstance(rect[k], (int, float)) and not isinstance(rect[k], bool)
                for k in expected
            ):
                problems.append("rect must carry numeric pos_min/pos_max/neg_min/neg_max")
            else:
                try:
                    SentimentRect(**{k: float(rect[k]) for k in expected})
                except ValueError as exc:
                    problems.append(f"invalid rect: {exc}")
    elif kind == "questionnaire":
        if set(payload) != {"aesthetics", "perceived_time_s", "summary"}:
            problems.append(
                "questionnaire payload must carry aesthetics, perceived_time_s, summary"
            )
            return problems
        answers = payload["aesthetics"]
        if (
            not isinstance(answers, list)
            or len(answers) != AESTHETICS_QUESTIONS
            or not all(
                isinstance(a, int) and not isinstance(a, bool) and 1 <= a <= 5
                for a in answers
            )
        ):
            problems.append("aesthetics must be exactly 5 integers in [1, 5]")
        perceived = payload["perceived_time_s"]
        if (
            not isinstance(perceived, (int, float))
            or isinstance(perceived, bool)
            or not perceived > 0
        ):
            problems.append("perceived_time_s must be a positive number")
        if not isinstance(payload["summary"], str):
            problems.append("summary must be text")
    return problems


def parse_event(raw: dict) -> SessionEvent:
    """Validate a decoded record and return the event; raises
    EventValidationError naming every problem."""
    if not isinstance(raw, dict):
        raise EventValidationError("event is not an object")
    problems: list[str] = []
    for key in EVENT_FIELDS:
        if key not in raw:
            problems.append(f"missing field {key}")
    for key in raw:
        if key not in EVENT_FIELDS:
            problems.append(f"unexpected field {key}")
    if problems:
        raise EventValidationError("; ".join(problems))

    if not isinstance(raw["ts_ms"], int) or isinstance(raw["ts_ms"], bool):
        problems.append("ts_ms must be an integer")
    for key in ("user_id", "task_id"):
        if not isinstance(raw[key], str) or not raw[key]:
            problems.append(f"{key} must be a non-empty string")
    if raw["treatment"] not in TREATMENTS:
        problems.append(f"treatment must be one of {'/'.join(TREATMENTS)}")
    kind = raw["kind"]
    if kind not in EVENT_KINDS:
        raise UnknownKindError(f"unknown kind {kind!r}")
    problems.extend(_payload_problems(kind, raw["payload"]))
    if problems:
        raise EventValidationError("; ".join(problems))
    return SessionEvent(
        ts_ms=raw["ts_ms"],
        user_id=raw["user_id"],
        treatment=raw["treatment"],
        task_id=raw["task_id"],
        kind=kind,
        payload=raw["payload"],
    )


@dataclass
class _Stream:
    events: list = field(default_factory=list)
    ended: bool = False
    last_ts: int = 0


def _check_sequencing(streams: dict, event: SessionEvent) -> None:
    stream = streams.get(event.stream_key)
    key = f"(user={event.user_id}, treatment={event.treatment}, task={event.task_id})"
    if event.kind == "task_start":
        if stream is not None:
            raise SequencingError(f"second task_start for stream {key}")
        return
    if stream is None:
        raise SequencingError(f"{event.kind} before task_start in stream {key}")
    if stream.ended:
        raise SequencingError(f"{event.kind} after task_end in stream {key}")
    if event.ts_ms < stream.last_ts:
        raise SequencingError(
            f"timestamp decreases ({event.ts_ms} < {stream.last_ts}) in stream {key}"
        )


def _apply_event(streams: dict, event: SessionEvent) -> None:
    stream = streams.setdefault(event.stream_key, _Stream())
    stream.events.append(event)
    stream.last_ts = event.ts_ms
    if event.kind == "task_end":
        stream.ended = True


class SessionLog:
    """Single-writer append-only log; every append is fsynced before returning."""

    def __init__(self, path):
        self.path = str(path)
        self._streams: dict[tuple, _Stream] = {}
        self._write_lock = threading.Lock()
        if os.path.exists(self.path):
            for event in _read_log_events(self.path):
                _check_sequencing(self._streams, event)
                _apply_event(self._streams, event)
        self._fd = os.open(self.path, os.O_WRONLY | os.O_APPEND | os.O_CREAT, 0o644)

    def close(self) -> None:
        if self._fd is not None:
            os.close(self._fd)
            self._fd = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    @property
    def streams(self) -> dict:
        return self._streams

    def record_event(self, event: SessionEvent) -> None:
        """Validate sequencing, durably append, then apply to in-memory state."""
        with self._write_lock:
            if self._fd is None:
                raise SessionError("log is closed")
            _check_sequencing(self._streams, event)
            line = json.dumps(event.to_dict(), ensure_ascii=False) + "\n"
            os.write(self._fd, line.encode("utf-8"))
            os.fsync(self._fd)
            _apply_event(self._streams, event)


@dataclass
class SessionMetrics:
    user_id: str
    treatment: str
    query_count: int
    task_time_s: float
    perceived_time_s: float | None = None
    aesthetics_total: int | None = None


@dataclass
class ReplayResult:
    metrics: list
    incomplete: list  # dicts with user_id, treatment, task_id, reason


def _metrics_for_pair(streams: dict, user_id: str, treatment: str) -> SessionMetrics:
    matching = {
        key: stream
        for key, stream in streams.items()
        if key[0] == user_id and key[1] == treatment
    }
    if not matching:
        raise IncompleteTaskError(
            f"no task stream for (user={user_id}, treatment={treatment})"
        )
    complete = {k: s for k, s in matching.items() if s.ended}
    if not complete:
        raise IncompleteTaskError(
            f"incomplete task: missing task_end for (user={user_id}, treatment={treatment})"
        )
    query_count = 0
    task_time_s = 0.0
    questionnaire = None
    for key in sorted(complete):
        stream = complete[key]
        start = stream.events[0]
        end = stream.events[-1]
        task_time_s += (end.ts_ms - start.ts_ms) / 1000.0
        for event in stream.events:
            if event.kind == "query":
                query_count += 1
            elif event.kind == "questionnaire":
                questionnaire = event
    perceived = aesthetics = None
    if questionnaire is not None:
        perceived = float(questionnaire.payload["perceived_time_s"])
        aesthetics = int(sum(questionnaire.payload["aesthetics"]))
    return SessionMetrics(
        user_id=user_id,
        treatment=treatment,
        query_count=query_count,
        task_time_s=task_time_s,
        perceived_time_s=perceived,
        aesthetics_total=aesthetics,
    )


def compute_session_metrics(log: SessionLog, user_id: str, treatment: str) -> SessionMetrics:
    """Aggregates over the complete task streams of one (user, treatment) pair."""
    return _metrics_for_pair(log.streams, user_id, treatment)


def metrics_from_streams(streams: dict) -> ReplayResult:
    """One SessionMetrics per (user, treatment) pair with a complete stream;
    incomplete streams are reported, never fabricated."""
    pairs: dict[tuple, None] = {}
    for user_id, treatment, _ in streams:
        pairs.setdefault((user_id, treatment), None)
    metrics = []
    for user_id, treatment in sorted(pairs):
        try:
            metrics.append(_metrics_for_pair(streams, user_id, treatment))
        except IncompleteTaskError:
            pass
    incomplete = [
        {
            "user_id": key[0],
            "treatment": key[1],
            "task_id": key[2],
            "reason": "missing task_end",
        }
        for key in sorted(streams)
        if not streams[key].ended
    ]
    return ReplayResult(metrics=metrics, incomplete=incomplete)


def _read_log_events(path):
    events = []
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise ReplayError(f"cannot read log {path}: {exc}") from exc
    with fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                raw = json.loads(line)
                events.append(parse_event(raw))
            except (json.JSONDecodeError, EventValidationError) as exc:
                raise ReplayError(f"{path}: line {line_no}: {exc}") from exc
    return events


def replay_log(path) -> ReplayResult:
    """Rebuild metrics from a log file written by SessionLog.record_event."""
    if not os.path.exists(path):
        raise ReplayError(f"log file not found: {path}")
    streams: dict[tuple, _Stream] = {}
    for position, event in enumerate(_read_log_events(path), start=1):
        try:
            _check_sequencing(streams, event)
        except SequencingError as exc:
            raise ReplayError(f"{path}: event {position}: {exc}") from exc
        _apply_event(streams, event)
    return metrics_from_streams(streams)
