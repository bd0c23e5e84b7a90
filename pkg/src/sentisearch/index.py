"""Tokenization, inverted index construction, and BM25-ranked search.

The hot scoring loop runs through a compiled extension when available
(sentisearch._scorekernel, built from Cython) and otherwise through a
pure-Python kernel with identical arithmetic. `kernel_backend()` reports
which one is active; benchmarks/bench_bm25.py compares the two.
"""

import math
import os
import pickle
import re
from dataclasses import dataclass

import numpy as np

from .corpus import Corpus

try:
    from . import _scorekernel as _kernel_ext
except ImportError:  # extension not built; fall back to pure Python
    _kernel_ext = None
from . import _scorekernel_py as _kernel_py

DEFAULT_K1 = 1.2
DEFAULT_B = 0.75
DEFAULT_LIMIT = 200

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

_INDEX_CACHE_MAGIC = "sentisearch-index"
_INDEX_CACHE_VERSION = 1

_force_python = os.environ.get("SENTISEARCH_PURE_PYTHON", "") not in ("", "0")


class IndexBuildError(Exception):
    pass


class EmptyQueryError(Exception):
    pass


class IndexCacheError(Exception):
    pass


def use_python_kernel(flag: bool) -> None:
    """Force the pure-Python scoring kernel (used by tests and benchmarks)."""
    global _force_python
    _force_python = flag


def kernel_backend() -> str:
    """Name of the scoring backend that search() will use: cython or python."""
    if _kernel_ext is None or _force_python:
        return "python"
    return "cython"


def tokenize(text: str) -> list:
    """Lowercase terms split on every non-alphanumeric character.

    No stemming, no stopword removal; empty terms are dropped.
    """
    return _TOKEN_RE.findall(text.lower())


def _dedup(terms) -> list:
    """Distinct terms in first-occurrence order (repeated query terms do not
    multiply contributions)."""
    return list(dict.fromkeys(terms))


@dataclass
class RankedHit:
    doc_id: str
    bm25_score: float
    rank: int


class InvertedIndex:
    """Immutable after build; concurrent searches need no synchronization.

    Postings lists are stored as parallel int64 arrays (doc ordinal, term
    frequency), sorted ascending by ordinal.
    """

    def __init__(self, doc_ids, term_arrays, doc_lengths, avg_doc_length, doc_count):
        self.doc_ids = doc_ids
        self._term_arrays = term_arrays  # term -> (ordinals array, tfs array)
        self.doc_lengths = doc_lengths  # ordinal -> token count
        self.avg_doc_length = avg_doc_length
        self.doc_count = doc_count
        self._dl_array = np.asarray(doc_lengths, dtype=np.float64)
        self._doc_ids_array = None
        self._postings_view = None

    @property
    def doc_ids_array(self) -> np.ndarray:
        """doc_ids as a numpy unicode array (for C-speed tie-break sorting)."""
        if self._doc_ids_array is None:
            self._doc_ids_array = np.asarray(self.doc_ids, dtype=np.str_)
        return self._doc_ids_array

    @property
    def postings(self) -> dict:
        """term -> list of (doc ordinal, term frequency), materialized lazily."""
        if self._postings_view is None:
            self._postings_view = {
                term: list(zip(ords.tolist(), tfs.tolist()))
                for term, (ords, tfs) in self._term_arrays.items()
            }
        return self._postings_view

    def document_frequency(self, term: str) -> int:
        arrays = self._term_arrays.get(term)
        return 0 if arrays is None else len(arrays[0])

    def term_frequency(self, term: str, ordinal: int) -> int:
        arrays = self._term_arrays.get(term)
        if arrays is None:
            return 0
        ords, tfs = arrays
        pos = int(np.searchsorted(ords, ordinal))
        if pos < len(ords) and ords[pos] == ordinal:
            return int(tfs[pos])
        return 0

    def vocabulary_size(self) -> int:
        return len(self._term_arrays)


def build_index(corpus: Corpus) -> InvertedIndex:
    """Index title + abstract of every document in corpus order."""
    if len(corpus) == 0:
        raise IndexBuildError("cannot index an empty corpus")
    doc_ids = []
    doc_lengths = []
    raw_postings: dict[str, list] = {}
    for ordinal, doc in enumerate(corpus.documents):
        tokens = tokenize(doc.title + " " + doc.abstract)
        doc_ids.append(doc.doc_id)
        doc_lengths.append(len(tokens))
        counts: dict[str, int] = {}
        for token in tokens:
            counts[token] = counts.get(token, 0) + 1
        for term, tf in counts.items():
            raw_postings.setdefault(term, []).append((ordinal, tf))
    total_tokens = sum(doc_lengths)
    if total_tokens == 0:
        raise IndexBuildError("corpus tokenizes to zero terms")
    term_arrays = {}
    for term, pairs in raw_postings.items():
        # built in ascending ordinal order already
        ords = np.array([p[0] for p in pairs], dtype=np.int64)
        tfs = np.array([p[1] for p in pairs], dtype=np.int64)
        term_arrays[term] = (ords, tfs)
    return InvertedIndex(
        doc_ids=doc_ids,
        term_arrays=term_arrays,
        doc_lengths=doc_lengths,
        avg_doc_length=total_tokens / len(doc_lengths),
        doc_count=len(doc_lengths),
    )


def idf(term: str, index: InvertedIndex) -> float:
    """Non-negative IDF: ln(1 + (N - n_t + 0.5) / (n_t + 0.5))."""
    n_t = index.document_frequency(term)
    n = index.doc_count
    return math.log(1.0 + (n - n_t + 0.5) / (n_t + 0.5))


def score_bm25(
    query_terms,
    ordinal: int,
    index: InvertedIndex,
    k1: float = DEFAULT_K1,
    b: float = DEFAULT_B,
) -> float:
    """BM25 score of one document for the given query terms.

    Terms are deduplicated before scoring; a document containing none of the
    terms scores exactly 0.
    """
    if k1 < 0:
        raise ValueError(f"k1 must be >= 0, got {k1}")
    if not (0.0 <= b <= 1.0):
        raise ValueError(f"b must be in [0, 1], got {b}")
    dl = index.doc_lengths[ordinal]
    avgdl = index.avg_doc_length
    score = 0.0
    for term in _dedup(query_terms):
        f = index.term_frequency(term, ordinal)
        if f == 0:
            continue
        norm = k1 * (1.0 - b + b * dl / avgdl)
        score += idf(term, index) * (f * (k1 + 1.0)) / (f + norm)
    return score


def _ranked_compiled(index: InvertedIndex, terms, limit, k1, b):
    """Dense accumulation through the compiled kernel plus a numpy sort.

    lexsort orders by score descending then doc_id ascending, the same total
    order the pure-Python path produces.
    """
    scores = np.zeros(index.doc_count, dtype=np.float64)
    for term in terms:
        arrays = index._term_arrays.get(term)
        if arrays is None:
            continue
        ords, tfs = arrays
        _kernel_ext.accumulate_term(
            scores, ords, tfs, index._dl_array, idf(term, index), k1, b,
            index.avg_doc_length,
        )
    candidates = np.flatnonzero(scores)
    order = np.lexsort((index.doc_ids_array[candidates], -scores[candidates]))
    top = candidates[order[:limit]]
    return [(int(d), float(scores[d])) for d in top], len(candidates)


def _ranked_python(index: InvertedIndex, terms, limit, k1, b):
    """Sparse accumulation in pure Python; same arithmetic, same ordering."""
    acc: dict[int, float] = {}
    for term in terms:
        arrays = index._term_arrays.get(term)
        if arrays is None:
            continue
        ords, tfs = arrays
        _kernel_py.accumulate_term(
            acc, ords.tolist(), tfs.tolist(), index.doc_lengths,
            idf(term, index), k1, b, index.avg_doc_length,
        )
    scored = sorted(acc.items(), key=lambda pair: (-pair[1], index.doc_ids[pair[0]]))
    return scored[:limit], len(scored)


def search_with_total(
    query: str,
    index: InvertedIndex,
    limit: int = DEFAULT_LIMIT,
    k1: float = DEFAULT_K1,
    b: float = DEFAULT_B,
) -> tuple:
    """(top-`limit` RankedHits, total number of matching documents)."""
    if limit < 1:
        raise ValueError(f"limit must be >= 1, got {limit}")
    terms = _dedup(tokenize(query))
    if not terms:
        raise EmptyQueryError("query tokenizes to no terms")
    if kernel_backend() == "cython":
        top, total = _ranked_compiled(index, terms, limit, k1, b)
    else:
        top, total = _ranked_python(index, terms, limit, k1, b)
    hits = [
        RankedHit(doc_id=index.doc_ids[ordinal], bm25_score=score, rank=rank)
        for rank, (ordinal, score) in enumerate(top, start=1)
    ]
    return hits, total


def search(
    query: str,
    index: InvertedIndex,
    limit: int = DEFAULT_LIMIT,
    k1: float = DEFAULT_K1,
    b: float = DEFAULT_B,
) -> list:
    """Top-`limit` documents by BM25 score, ties broken by doc_id ascending."""
    return search_with_total(query, index, limit, k1, b)[0]


def save_index(index: InvertedIndex, path) -> None:
    """Persist the index as an opaque cache file."""
    payload = {
        "doc_ids": index.doc_ids,
        "term_arrays": index._term_arrays,
        "doc_lengths": index.doc_lengths,
        "avg_doc_length": index.avg_doc_length,
        "doc_count": index.doc_count,
    }
    with open(path, "wb") as fh:
        pickle.dump((_INDEX_CACHE_MAGIC, _INDEX_CACHE_VERSION, payload), fh)


def load_index(path) -> InvertedIndex:
    """Load a cache written by save_index; raises IndexCacheError when the
    file is unusable (callers rebuild on that)."""
    try:
        with open(path, "rb") as fh:
            blob = pickle.load(fh)
    except (OSError, pickle.UnpicklingError, EOFError) as exc:
        raise IndexCacheError(f"cannot load index cache {path}: {exc}") from exc
    if (
        not isinstance(blob, tuple)
        or len(blob) != 3
        or blob[0] != _INDEX_CACHE_MAGIC
        or blob[1] != _INDEX_CACHE_VERSION
    ):
        raise IndexCacheError(f"unrecognized index cache format in {path}")
    payload = blob[2]
    return InvertedIndex(
        doc_ids=payload["doc_ids"],
        term_arrays=payload["term_arrays"],
        doc_lengths=payload["doc_lengths"],
        avg_doc_length=payload["avg_doc_length"],
        doc_count=payload["doc_count"],
    )
