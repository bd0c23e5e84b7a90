import json
import random

import pytest

from sentisearch.corpus import Corpus, Document


def make_document(doc_id, text="", title=None, positivity=3.0, negativity=3.0, category=""):
    return Document(
        doc_id=doc_id,
        title=title if title is not None else "",
        abstract=text,
        positivity=positivity,
        negativity=negativity,
        category=category,
    )


def make_corpus(docs) -> Corpus:
    return Corpus(documents=list(docs), category_map={})


@pytest.fixture
def war_corpus() -> Corpus:
    """Three documents with known BM25 behaviour for the query "war"."""
    return make_corpus(
        [
            make_document("d0", "war peace"),
            make_document("d1", "war war war"),
            make_document("d2", "peace"),
        ]
    )


def random_corpus(rng: random.Random, max_docs=50, vocab_size=30) -> Corpus:
    vocab = [f"w{i}" for i in range(vocab_size)]
    n = rng.randint(1, max_docs)
    docs = []
    for i in range(n):
        length = rng.randint(1, 25)
        text = " ".join(rng.choice(vocab) for _ in range(length))
        docs.append(
            make_document(
                f"doc{i:03d}",
                text,
                title=rng.choice(vocab),
                positivity=1.0 + 4.0 * rng.random(),
                negativity=1.0 + 4.0 * rng.random(),
            )
        )
    return make_corpus(docs)


def write_corpus_file(path, records) -> str:
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record) + "\n")
    return str(path)


def corpus_record(doc_id, title="Title", abstract="some text", positivity=2.0,
                  negativity=2.0, category=""):
    return {
        "doc_id": doc_id,
        "title": title,
        "abstract": abstract,
        "positivity": positivity,
        "negativity": negativity,
        "category": category,
    }


@pytest.fixture
def corpus_file(tmp_path):
    return write_corpus_file(
        tmp_path / "corpus.jsonl",
        [
            corpus_record("d0", title="War and Peace", abstract="war peace",
                          positivity=2.1, negativity=4.8, category="Event"),
            corpus_record("d1", title="The War", abstract="war war war",
                          positivity=1.5, negativity=3.5, category="Event"),
            corpus_record("d2", title="Peace", abstract="peace",
                          positivity=4.5, negativity=1.2, category="Concept"),
        ],
    )
