"""Loading and validation of sentiment-annotated document collections.

The corpus file is UTF-8, one JSON record per line, with exactly the keys
doc_id, title, abstract, positivity, negativity, category. Malformed lines are
rejected individually and reported; duplicate doc_ids reject the whole load.
"""

import json
import math
from dataclasses import dataclass, field

RECORD_KEYS = ("doc_id", "title", "abstract", "positivity", "negativity", "category")

OTHER_CATEGORY = "other"
MAX_DISPLAY_CATEGORIES = 24


class CorpusError(Exception):
    pass


class CorpusLoadError(CorpusError):
    pass


@dataclass(frozen=True)
class Document:
    doc_id: str
    title: str
    abstract: str
    positivity: float
    negativity: float
    category: str = ""


def _check_score(value, name: str, violations: list):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        violations.append(f"{name} not a number")
        return
    if math.isnan(value) or math.isinf(value):
        violations.append(f"{name} not finite")
        return
    if value < 1.0:
        violations.append(f"{name} below 1.0")
    elif value > 5.0:
        violations.append(f"{name} above 5.0")


def validate_document(raw: dict) -> tuple[Document | None, list]:
    """Check a parsed record against every field invariant.

    Returns (Document, []) when all invariants hold, otherwise (None, violations)
    with one entry naming each violated invariant.
    """
    violations: list[str] = []
    if not isinstance(raw, dict):
        return None, ["record is not an object"]
    for key in RECORD_KEYS:
        if key not in raw:
            violations.append(f"missing field {key}")
    for key in raw:
        if key not in RECORD_KEYS:
            violations.append(f"unexpected field {key}")
    if violations:
        return None, violations

    if not isinstance(raw["doc_id"], str) or not raw["doc_id"]:
        violations.append("doc_id empty")
    if not isinstance(raw["title"], str):
        violations.append("title not text")
    elif not raw["title"]:
        violations.append("title empty")
    if not isinstance(raw["abstract"], str):
        violations.append("abstract not text")
    _check_score(raw["positivity"], "positivity", violations)
    _check_score(raw["negativity"], "negativity", violations)
    if not isinstance(raw["category"], str):
        violations.append("category not text")

    if violations:
        return None, violations
    return (
        Document(
            doc_id=raw["doc_id"],
            title=raw["title"],
            abstract=raw["abstract"],
            positivity=float(raw["positivity"]),
            negativity=float(raw["negativity"]),
            category=raw["category"],
        ),
        [],
    )


def map_category(raw_label: str, category_map: dict) -> str:
    """Display category for a raw label; anything unmapped becomes "other"."""
    return category_map.get(raw_label, OTHER_CATEGORY)


@dataclass
class LoadReport:
    total_lines: int = 0
    loaded: int = 0
    rejected: list = field(default_factory=list)  # (line_number, reason)


@dataclass
class Corpus:
    """Immutable after load; safe for unrestricted concurrent reads."""

    documents: list
    category_map: dict  # raw label -> display label, at most 24 + "other"
    report: LoadReport | None = None

    def __post_init__(self):
        self._by_id = {doc.doc_id: doc for doc in self.documents}

    def __len__(self) -> int:
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Corpus):
            return NotImplemented
        return (
            self.documents == other.documents and self.category_map == other.category_map
        )

    def get(self, doc_id: str) -> Document | None:
        return self._by_id.get(doc_id)

    def display_category(self, doc: Document) -> str:
        return map_category(doc.category, self.category_map)


def load_category_map(path) -> dict:
    """Parse a raw_label<TAB>display_label file into a mapping."""
    mapping: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0] or not parts[1]:
                raise CorpusLoadError(
                    f"{path}: line {line_no}: expected raw_label<TAB>display_label"
                )
            raw, display = parts
            if raw in mapping and mapping[raw] != display:
                raise CorpusLoadError(
                    f"{path}: line {line_no}: conflicting mapping for {raw!r}"
                )
            mapping[raw] = display
    return mapping


def _bounded_category_map(documents, user_map: dict) -> dict:
    """Resolve raw -> display for every label seen, keeping at most 24 display
    categories; later overflow labels collapse into "other".

    Resolution order follows document order, so the result is deterministic
    for a given corpus.
    """
    effective: dict[str, str] = {}
    palette: dict[str, None] = {}
    for doc in documents:
        raw = doc.category
        if raw in effective:
            continue
        display = user_map.get(raw, OTHER_CATEGORY)
        if display != OTHER_CATEGORY:
            if display not in palette:
                if len(palette) < MAX_DISPLAY_CATEGORIES:
                    palette[display] = None
                else:
                    display = OTHER_CATEGORY
        effective[raw] = display
    return effective


def load_corpus(path, category_map: dict | None = None) -> Corpus:
    """Load a line-delimited corpus file, rejecting invalid lines individually.

    Raises CorpusLoadError on duplicate doc_ids or when no valid document
    survives. The per-line rejections are returned on Corpus.report.
    """
    documents: list[Document] = []
    report = LoadReport()
    seen: dict[str, int] = {}
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise CorpusLoadError(f"cannot read corpus file {path}: {exc}") from exc
    with fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            report.total_lines += 1
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                report.rejected.append((line_no, f"invalid record syntax: {exc.msg}"))
                continue
            doc, violations = validate_document(raw)
            if doc is None:
                report.rejected.append((line_no, "; ".join(violations)))
                continue
            if doc.doc_id in seen:
                raise CorpusLoadError(
                    f'duplicate doc_id "{doc.doc_id}" at lines '
                    f"{seen[doc.doc_id]} and {line_no}"
                )
            seen[doc.doc_id] = line_no
            documents.append(doc)
            report.loaded += 1
    if not documents:
        raise CorpusLoadError(f"no valid documents in {path}")
    effective = _bounded_category_map(documents, category_map or {})
    return Corpus(documents=documents, category_map=effective, report=report)


def write_corpus(corpus: Corpus, path) -> None:
    """Serialize back to the line-delimited format (inverse of load_corpus)."""
    with open(path, "w", encoding="utf-8") as fh:
        for doc in corpus.documents:
            record = {
                "doc_id": doc.doc_id,
                "title": doc.title,
                "abstract": doc.abstract,
                "positivity": doc.positivity,
                "negativity": doc.negativity,
                "category": doc.category,
            }
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")
