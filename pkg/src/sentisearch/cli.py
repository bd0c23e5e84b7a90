"""Operator command line: index, query, serve, report.

Exit codes: 0 ok, 1 usage, 2 data error. Diagnostics go to stderr, data to
stdout. Flags win over the optional JSON config file.
"""

import argparse
import json
import os
import sys
from dataclasses import dataclass

from . import analytics
from .corpus import CorpusLoadError, load_category_map, load_corpus
from .facets import SentimentRect, distribution_summary
from .index import (
    DEFAULT_B,
    DEFAULT_K1,
    DEFAULT_LIMIT,
    EmptyQueryError,
    IndexBuildError,
    IndexCacheError,
    build_index,
    load_index,
    save_index,
)
from .service import (
    DEFAULT_BIN_COUNT,
    NoDataError,
    SearchService,
    build_report_document,
    make_server,
    report_to_text,
)
from .session import SessionError, SessionLog, replay_log

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2

_CONFIG_KEYS = (
    "corpus",
    "category_map",
    "index_cache",
    "log",
    "k1",
    "b",
    "bins",
    "listen",
    "limit",
)


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors by default; remap to 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class CliConfig:
    corpus_path: str | None = None
    category_map_path: str | None = None
    index_cache_path: str | None = None
    log_path: str | None = None
    k1: float = DEFAULT_K1
    b: float = DEFAULT_B
    bin_count: int = DEFAULT_BIN_COUNT
    listen_address: str = "127.0.0.1:8080"
    limit: int = DEFAULT_LIMIT

    def validate(self):
        if self.k1 < 0:
            raise ValueError(f"--k1 must be >= 0, got {self.k1}")
        if not (0.0 <= self.b <= 1.0):
            raise ValueError(f"--b must be in [0, 1], got {self.b}")
        if self.bin_count < 1:
            raise ValueError(f"--bins must be >= 1, got {self.bin_count}")
        if self.limit < 1:
            raise ValueError(f"--limit must be >= 1, got {self.limit}")


def _load_config_file(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict):
        raise ValueError("config file must hold a JSON object")
    unknown = set(raw) - set(_CONFIG_KEYS)
    if unknown:
        raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
    return raw


def _resolve_config(args) -> CliConfig:
    file_values = {}
    if getattr(args, "config", None):
        file_values = _load_config_file(args.config)

    def pick(flag_value, key, default):
        if flag_value is not None:
            return flag_value
        if key in file_values:
            return file_values[key]
        return default

    config = CliConfig(
        corpus_path=pick(getattr(args, "corpus", None), "corpus", None),
        category_map_path=pick(getattr(args, "category_map", None), "category_map", None),
        index_cache_path=pick(getattr(args, "index_cache", None), "index_cache", None),
        log_path=pick(getattr(args, "log", None), "log", None),
        k1=float(pick(getattr(args, "k1", None), "k1", DEFAULT_K1)),
        b=float(pick(getattr(args, "b", None), "b", DEFAULT_B)),
        bin_count=int(pick(getattr(args, "bins", None), "bins", DEFAULT_BIN_COUNT)),
        listen_address=pick(getattr(args, "listen", None), "listen", "127.0.0.1:8080"),
        limit=int(pick(getattr(args, "limit", None), "limit", DEFAULT_LIMIT)),
    )
    config.validate()
    return config


def _load_corpus(config: CliConfig):
    if not config.corpus_path:
        raise ValueError("--corpus is required")
    category_map = None
    if config.category_map_path:
        category_map = load_category_map(config.category_map_path)
    return load_corpus(config.corpus_path, category_map)


def _default_cache_path(config: CliConfig) -> str:
    return config.index_cache_path or config.corpus_path + ".idx"


def _load_or_build_index(config: CliConfig, corpus):
    """Use the cache when it matches the corpus; absence or staleness rebuilds."""
    cache_path = _default_cache_path(config)
    if os.path.exists(cache_path):
        try:
            cached = load_index(cache_path)
            if cached.doc_ids == [doc.doc_id for doc in corpus.documents]:
                return cached
        except IndexCacheError:
            pass
    return build_index(corpus)


def _print_stats(corpus, bin_count, out):
    stats = distribution_summary(corpus.documents, bin_count)
    for name, summary in (("positivity", stats.positivity), ("negativity", stats.negativity)):
        print(f"{name}: {summary.mean:.2f} ± {summary.stddev:.2f}", file=out)
        print(f"  histogram: {' '.join(str(c) for c in summary.counts)}", file=out)


def cmd_index(args) -> int:
    config = _resolve_config(args)
    corpus = _load_corpus(config)
    index = build_index(corpus)
    cache_path = _default_cache_path(config)
    save_index(index, cache_path)
    print(f"{len(corpus)} documents", file=sys.stdout)
    _print_stats(corpus, config.bin_count, sys.stdout)
    if corpus.report and corpus.report.rejected:
        for line_no, reason in corpus.report.rejected:
            print(f"rejected line {line_no}: {reason}", file=sys.stderr)
    print(f"index cache written to {cache_path}", file=sys.stdout)
    return EXIT_OK


def _rect_from_args(args) -> SentimentRect:
    return SentimentRect(
        pos_min=args.pos_min if args.pos_min is not None else 1.0,
        pos_max=args.pos_max if args.pos_max is not None else 5.0,
        neg_min=args.neg_min if args.neg_min is not None else 1.0,
        neg_max=args.neg_max if args.neg_max is not None else 5.0,
    )


def cmd_query(args) -> int:
    config = _resolve_config(args)
    try:
        rect = _rect_from_args(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    corpus = _load_corpus(config)
    index = _load_or_build_index(config, corpus)
    service = SearchService(
        corpus, index, log=None, k1=config.k1, b=config.b, bin_count=config.bin_count
    )
    try:
        response = service.search(args.text, rect=rect, limit=config.limit)
    except EmptyQueryError:
        print("error: empty query", file=sys.stderr)
        return EXIT_USAGE
    hits = response["hits"]
    if not hits:
        print("0 results", file=sys.stdout)
        return EXIT_OK
    print(f"{response['total_matches']} matches, showing {len(hits)}", file=sys.stdout)
    print(f"{'rank':>4}  {'doc_id':<24} {'score':>10}  {'pos':>4}  {'neg':>4}  focus", file=sys.stdout)
    for rank, hit in enumerate(hits, start=1):
        focus = "in" if hit["in_focus"] else "out"
        print(
            f"{rank:>4}  {hit['doc_id']:<24} {hit['bm25_score']:>10.4f}"
            f"  {hit['positivity']:>4.2f}  {hit['negativity']:>4.2f}  {focus}",
            file=sys.stdout,
        )
    return EXIT_OK


def cmd_serve(args) -> int:
    config = _resolve_config(args)
    if not config.log_path:
        raise ValueError("--log is required for serve")
    corpus = _load_corpus(config)
    index = _load_or_build_index(config, corpus)
    log = SessionLog(config.log_path)
    service = SearchService(
        corpus, index, log, k1=config.k1, b=config.b, bin_count=config.bin_count
    )
    host, _, port = config.listen_address.rpartition(":")
    if not host or not port.isdigit():
        raise ValueError(f"--listen must be HOST:PORT, got {config.listen_address!r}")
    server = make_server(service, host, int(port))
    actual_host, actual_port = server.server_address[:2]
    print(f"serving on http://{actual_host}:{actual_port}", file=sys.stdout, flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
        log.close()
    return EXIT_OK


def cmd_report(args) -> int:
    config = _resolve_config(args)
    if not config.log_path:
        raise ValueError("--log is required for report")
    replay = replay_log(config.log_path)
    doc = build_report_document(replay, args.kind)
    sys.stdout.write(report_to_text(doc))
    return EXIT_OK


def _add_common_flags(parser):
    parser.add_argument("--config", help="JSON config file; flags win over it")
    parser.add_argument("--corpus", help="line-delimited corpus file")
    parser.add_argument("--category-map", dest="category_map",
                        help="raw_label<TAB>display_label file")
    parser.add_argument("--index-cache", dest="index_cache",
                        help="index cache path (default: <corpus>.idx)")
    parser.add_argument("--k1", type=float, help="BM25 k1 (default 1.2)")
    parser.add_argument("--b", type=float, help="BM25 b (default 0.75)")
    parser.add_argument("--bins", type=int, help="histogram bin count (default 20)")


def build_parser() -> _Parser:
    parser = _Parser(prog="sentisearch", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_index = sub.add_parser("index", help="build the index cache and print corpus stats")
    _add_common_flags(p_index)
    p_index.set_defaults(func=cmd_index)

    p_query = sub.add_parser("query", help="run one ranked query")
    _add_common_flags(p_query)
    p_query.add_argument("text", help="query text")
    p_query.add_argument("--limit", type=int, help="maximum hits (default 200)")
    p_query.add_argument("--pos-min", dest="pos_min", type=float)
    p_query.add_argument("--pos-max", dest="pos_max", type=float)
    p_query.add_argument("--neg-min", dest="neg_min", type=float)
    p_query.add_argument("--neg-max", dest="neg_max", type=float)
    p_query.set_defaults(func=cmd_query)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    _add_common_flags(p_serve)
    p_serve.add_argument("--log", help="session event log path")
    p_serve.add_argument("--listen", help="HOST:PORT (default 127.0.0.1:8080)")
    p_serve.set_defaults(func=cmd_serve)

    p_report = sub.add_parser("report", help="emit a study report from a log")
    p_report.add_argument("kind", choices=("treatment", "taxonomy"))
    p_report.add_argument("--config", help="JSON config file; flags win over it")
    p_report.add_argument("--log", help="session event log path")
    p_report.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (
        CorpusLoadError,
        IndexBuildError,
        SessionError,
        NoDataError,
        analytics.InsufficientDataError,
        analytics.DegenerateDataError,
        OSError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
