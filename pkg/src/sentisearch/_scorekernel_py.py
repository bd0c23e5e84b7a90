"""Pure-Python BM25 accumulation kernel, the fallback when the compiled
extension is unavailable.

The arithmetic expression and its evaluation order mirror _scorekernel.pyx
exactly; both are plain IEEE doubles, so rankings agree bit for bit.
"""


def accumulate_term(scores, ordinals, tfs, doc_lengths, idf, k1, b, avgdl):
    """Add one query term's contribution to every document on its postings list.

    `scores` is a dict mapping doc ordinal -> accumulated score; `ordinals`
    and `tfs` are parallel sequences; `doc_lengths` maps ordinal -> token count.
    """
    get = scores.get
    for d, f in zip(ordinals, tfs):
        norm = k1 * (1.0 - b + b * doc_lengths[d] / avgdl)
        scores[d] = get(d, 0.0) + idf * (f * (k1 + 1.0)) / (f + norm)
