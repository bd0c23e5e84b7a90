# cython: boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled BM25 accumulation kernel (term-at-a-time).

Must stay arithmetically identical to _scorekernel_py: same expression, same
operation order, no fused multiply-add (see setup.py flags), so that both
backends rank identically bit for bit.
"""


def accumulate_term(
    double[::1] scores,
    long long[::1] ordinals,
    long long[::1] tfs,
    double[::1] doc_lengths,
    double idf,
    double k1,
    double b,
    double avgdl,
):
    """Add one query term's contribution to every document on its postings list."""
    cdef Py_ssize_t i, n = ordinals.shape[0]
    cdef Py_ssize_t d
    cdef double f, norm
    for i in range(n):
        d = <Py_ssize_t> ordinals[i]
        f = <double> tfs[i]
        norm = k1 * (1.0 - b + b * doc_lengths[d] / avgdl)
        scores[d] += idf * (f * (k1 + 1.0)) / (f + norm)
