"""Command line: ``codegree analyze | realizable | verify``.

Exit codes: 0 success, 1 verdict failure, 2 usage or parse error, 3 resource limit.
Every flag can also be set through an environment variable ``CODEGREE_<FLAG>``
(for example ``CODEGREE_CACHE_DIR``); explicit flags win.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .cache import TableCache, canonical_dumps, write_atomic
from .checks import analysis_document, analyze, corpus_specs, default_corpus_dir, report_text, run_corpus
from .constructors import load, resolve
from .errors import CodegreeError, LimitExceeded, SpecError
from .graphs import (
    LabeledGraph,
    is_minimal_codegree_graph,
    is_realizable_codegree,
    load_graph,
    parse_edge_list,
    to_dot,
)
from .groups import DEFAULT_HALL_RETRIES, DEFAULT_LIMIT

EXIT_OK, EXIT_VERDICT, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3
ENV_PREFIX = "CODEGREE_"


def _env(name: str, default, cast=str):
    raw = os.environ.get(ENV_PREFIX + name)
    if raw is None or raw == "":
        return default
    try:
        return cast(raw)
    except ValueError:
        raise SystemExit("%s%s: invalid value %r" % (ENV_PREFIX, name, raw)) from None


def _positive(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cache-dir", default=_env("CACHE_DIR", None),
                        help="character-table cache directory (default: no cache)")
    common.add_argument("--limit", type=_positive, default=_env("LIMIT", DEFAULT_LIMIT, _positive),
                        help="element enumeration limit")
    common.add_argument("--hall-retries", type=_positive,
                        default=_env("HALL_RETRIES", DEFAULT_HALL_RETRIES, _positive),
                        help="conjugators tried per Hall subgroup search")
    common.add_argument("--format", choices=("json", "dot", "text"), default=_env("FORMAT", None),
                        help="output format")
    common.add_argument("--out", default=_env("OUT", None), help="write output here (atomically) instead of stdout")

    parser = argparse.ArgumentParser(prog="codegree", description="Codegree graphs of finite groups and their Frobenius digraphs.")
    parser.add_argument("--version", action="version", version="%(prog)s " + __version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="analyze one group spec or alias")
    p.add_argument("spec", help="spec JSON path or alias (s3, s4, a4, a5, s5, d8, q8, z6, f21, f42, qian:q,r, five-cycle)")

    p = sub.add_parser("realizable", parents=[common], help="decide whether a graph is a codegree graph")
    p.add_argument("graph", help="graph JSON path or inline edge list such as 2-3,3-5,5-7")
    p.add_argument("--expect-realizable", action="store_true", help="exit 1 when the graph is not realizable")

    p = sub.add_parser("verify", parents=[common], help="run every check over a corpus directory")
    p.add_argument("corpus", nargs="?", default=_env("CORPUS_DIR", None),
                   help="directory of spec JSON files (default: the bundled corpus)")
    return parser


def _emit(text: str, out: str | None) -> None:
    if out:
        write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _fmt_graph(g: LabeledGraph) -> str:
    edges = ", ".join("%d-%d" % e for e in g.sorted_edges()) or "none"
    return "vertices {%s}; edges %s" % (",".join(map(str, g.vertices)), edges)


def _load_spec(text: str):
    path = Path(text)
    if path.suffix == ".json" or path.exists():
        if not path.exists():
            raise SpecError("$", "no such spec file: %s" % text)
        return load(str(path)), path.stem
    return resolve(text), text


def cmd_analyze(args) -> int:
    spec, name = _load_spec(args.spec)
    cache = TableCache(args.cache_dir)
    an = analyze(spec, name, cache, args.limit, args.hall_retries)
    doc = analysis_document(an)
    doc["codegree_graph_realizable"] = is_realizable_codegree(an.gamma).to_dict()
    doc["stats"] = {"table_cache_hits": cache.stats["table_cache_hits"],
                    "table_computations": cache.stats["table_computations"]}
    fmt = args.format or "text"
    if fmt == "json":
        text = canonical_dumps(doc)
    elif fmt == "dot":
        text = to_dot(an.gamma, an.digraph.digraph, name=name)
    else:
        arcs = ", ".join("%d->%d" % a for a in sorted(an.digraph.digraph.arcs)) or "none"
        lines = [
            "group: %s" % name,
            "digest: %s" % an.digest,
            "order: %d" % an.group.order,
            "classes: %d" % an.table.k,
            "solvable: %s" % ("yes" if an.solvable else "no"),
            "degrees: %s" % " ".join(map(str, an.table.degrees)),
            "cod = {%s}" % ",".join(map(str, an.codegrees)),
            "prime graph: %s" % _fmt_graph(an.gamma_e),
            "codegree graph: %s" % _fmt_graph(an.gamma),
            "Γ = Γe" if an.gamma == an.gamma_e else "Γe ⊊ Γ",
            "digraph: %s" % arcs,
        ]
        if an.digraph.hall_skips:
            lines.append("hall subgroup not found: %s" % ", ".join("{%d,%d}" % p for p in an.digraph.hall_skips))
        lines.append("stats: table_computations=%d table_cache_hits=%d"
                     % (cache.stats["table_computations"], cache.stats["table_cache_hits"]))
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return EXIT_OK


def _load_graph(text: str) -> LabeledGraph:
    path = Path(text)
    if path.exists():
        try:
            return load_graph(str(path))
        except (OSError, KeyError, TypeError, ValueError) as exc:
            raise SpecError(str(path), "invalid graph JSON: %s" % exc) from None
    try:
        return parse_edge_list(text)
    except ValueError as exc:
        raise SpecError("graph", str(exc)) from None


def cmd_realizable(args) -> int:
    g = _load_graph(args.graph)
    real = is_realizable_codegree(g)
    doc = {"graph": g.to_dict(), "realizability": real.to_dict()}
    if real.realizable:
        doc["minimality"] = is_minimal_codegree_graph(g).to_dict()
    fmt = args.format or "text"
    if fmt == "json":
        text = canonical_dumps(doc)
    elif fmt == "dot":
        text = to_dot(g, name="graph")
    else:
        lines = ["graph: %s" % _fmt_graph(g), "realizable: %s" % ("yes" if real.realizable else "no")]
        if real.complement_triangle:
            lines.append("complement triangle: %s" % " ".join(map(str, real.complement_triangle)))
        if real.coloring_exhausted:
            lines.append("complement is not 3-colorable (search exhausted)")
        if real.coloring is not None:
            lines.append("complement 3-coloring: %s" % " ".join("%d:%d" % kv for kv in sorted(real.coloring.items())))
        if "minimality" in doc:
            m = doc["minimality"]
            lines.append("minimal: %s (%s)" % ("yes" if m["minimal"] else "no", m["reason"]))
            if m["reading_differs"]:
                lines.append("note: vertex-pair deletion readings give %s" % json.dumps(m["readings"], sort_keys=True))
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    if args.expect_realizable and not real.realizable:
        return EXIT_VERDICT
    return EXIT_OK


def cmd_verify(args) -> int:
    directory = Path(args.corpus) if args.corpus else default_corpus_dir()
    if not directory.is_dir():
        print("codegree: corpus directory not found: %s" % directory, file=sys.stderr)
        return EXIT_USAGE
    cache = TableCache(args.cache_dir)
    report = run_corpus(corpus_specs(directory), cache, args.limit, args.hall_retries)
    if args.format == "text":
        lines = ["%s %s %s" % (e["status"], e["name"], ",".join(e.get("failed_checks", [])) or
                               e.get("error", {}).get("type", "")) for e in report["entries"]]
        lines.append("summary: %s" % json.dumps(report["summary"], sort_keys=True))
        text = "\n".join(lines) + "\n"
    else:
        text = report_text(report)
    _emit(text, args.out)
    return EXIT_OK if report["summary"]["clean"] else EXIT_VERDICT


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {"analyze": cmd_analyze, "realizable": cmd_realizable, "verify": cmd_verify}[args.command]
    try:
        return handler(args)
    except LimitExceeded as exc:
        print("codegree: %s" % exc, file=sys.stderr)
        return EXIT_LIMIT
    except SpecError as exc:
        print("codegree: invalid input at %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    except CodegreeError as exc:
        print("codegree: %s: %s" % (type(exc).__name__, exc), file=sys.stderr)
        return EXIT_VERDICT
    except OSError as exc:
        print("codegree: %s" % exc, file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
