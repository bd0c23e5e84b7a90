"""Sentiment-faceted exploratory search: BM25 ranking over bivariate
sentiment-annotated documents, rectangular sentiment filtering, session
logging, and nonparametric study analytics."""

__version__ = "0.1.0"

from .corpus import Corpus, Document, load_corpus, write_corpus
from .facets import FULL_RECT, SentimentRect
from .index import build_index, search
from .session import SessionEvent, SessionLog, replay_log

__all__ = [
    "Corpus",
    "Document",
    "FULL_RECT",
    "SentimentRect",
    "SessionEvent",
    "SessionLog",
    "__version__",
    "build_index",
    "load_corpus",
    "replay_log",
    "search",
    "write_corpus",
]
