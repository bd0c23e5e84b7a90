"""Compare the compiled BM25 scoring kernel against the pure-Python fallback.

Builds a synthetic corpus with a Zipf-ish vocabulary, runs a batch of queries
through search() with each backend, and reports per-query latency. Usage:

    python benchmarks/bench_bm25.py [--docs 20000] [--queries 200]
"""

import argparse
import random
import time

from sentisearch import index as ix
from sentisearch.corpus import Corpus, Document


def synthetic_corpus(n_docs: int, vocab_size: int, seed: int) -> Corpus:
    rng = random.Random(seed)
    vocab = [f"term{i}" for i in range(vocab_size)]
    # Zipf-ish sampling: low ranks picked far more often
    weights = [1.0 / (rank + 1) for rank in range(vocab_size)]
    docs = []
    for i in range(n_docs):
        length = rng.randint(20, 120)
        words = rng.choices(vocab, weights=weights, k=length)
        docs.append(
            Document(
                doc_id=f"d{i:06d}",
                title=words[0],
                abstract=" ".join(words[1:]),
                positivity=1.0 + 4.0 * rng.random(),
                negativity=1.0 + 4.0 * rng.random(),
                category="",
            )
        )
    return Corpus(documents=docs, category_map={})


def run_queries(index, queries):
    start = time.perf_counter()
    total_hits = 0
    for query in queries:
        total_hits += len(ix.search(query, index, limit=200))
    elapsed = time.perf_counter() - start
    return elapsed, total_hits


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--docs", type=int, default=20000)
    parser.add_argument("--vocab", type=int, default=5000)
    parser.add_argument("--queries", type=int, default=200)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    print(f"building corpus: {args.docs} docs, vocab {args.vocab}")
    corpus = synthetic_corpus(args.docs, args.vocab, args.seed)
    build_start = time.perf_counter()
    index = ix.build_index(corpus)
    print(f"index built in {time.perf_counter() - build_start:.2f}s "
          f"({index.vocabulary_size()} terms)")

    rng = random.Random(args.seed + 1)
    weights = [1.0 / (rank + 1) for rank in range(args.vocab)]
    vocab = [f"term{i}" for i in range(args.vocab)]
    queries = [
        " ".join(rng.choices(vocab, weights=weights, k=rng.randint(1, 4)))
        for _ in range(args.queries)
    ]

    results = {}
    for backend, force_python in (("cython", False), ("python", True)):
        ix.use_python_kernel(force_python)
        if ix.kernel_backend() != backend:
            print(f"{backend} backend unavailable, skipping")
            continue
        elapsed, hits = run_queries(index, queries)
        results[backend] = elapsed
        print(
            f"{backend:>7}: {elapsed:.3f}s total, "
            f"{1000 * elapsed / len(queries):.3f} ms/query ({hits} hits)"
        )
    ix.use_python_kernel(False)

    if len(results) == 2:
        print(f"speedup: {results['python'] / results['cython']:.1f}x")


if __name__ == "__main__":
    main()
