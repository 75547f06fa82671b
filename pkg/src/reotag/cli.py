"""reo-tag: command-line entry point orchestrating the pipeline.

Subcommands map one-to-one onto the library operations; `run` executes a
whole pipeline from a TOML config.  Exit codes: 0 success, 1 usage error,
2 data error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib  # type: ignore[no-redef]

import reotag
from reotag import analytics
from reotag.annotation import (
    DecisionStore,
    StoreError,
    apply_decisions,
    corpus_lock,
    extract_trigram_tasks,
    foreign_decisions,
)
from reotag.corpus import (
    CorpusFormatError,
    final_corpus,
    load_tsv,
    save_tsv,
    write_jsonl,
)
from reotag.ingest import DEFAULT_ABBREVIATIONS, IngestError, ingest_directory
from reotag.labeler import label_corpus
from reotag.lexicon import LexiconError, LexiconSet
from reotag.resolver import resolve_corpus, resolve_to_fixpoint

DATA_ERRORS = (CorpusFormatError, IngestError, LexiconError, StoreError, OSError)

LEXICON_DIR_ENV = "REOTAG_LEXICON_DIR"


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; the contract here is 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def _lexicon_dir(args) -> Path:
    value = getattr(args, "lexicon_dir", None) or os.environ.get(LEXICON_DIR_ENV)
    if not value:
        raise SystemExit(
            f"error: no lexicon directory (use --lexicon-dir or ${LEXICON_DIR_ENV})"
        )
    return Path(value)


def _print_stage_table(deltas, out=None) -> None:
    out = out if out is not None else sys.stdout
    rows = analytics.stage_table(deltas)
    if not rows:
        return
    headers = list(rows[0].keys())
    out.write("\t".join(headers) + "\n")
    for row in rows:
        out.write("\t".join(str(row[h]) for h in headers) + "\n")


def cmd_ingest(args) -> int:
    abbreviations = (
        tuple(a.strip() for a in args.abbreviations.split(",") if a.strip())
        if args.abbreviations
        else DEFAULT_ABBREVIATIONS
    )
    corpus = ingest_directory(args.input, abbreviations)
    save_tsv(corpus, args.output)
    print(f"ingested {len(corpus)} sentences / {corpus.token_count} tokens -> {args.output}")
    return 0


def cmd_label(args) -> int:
    lexicons = LexiconSet.from_dir(_lexicon_dir(args))
    corpus = label_corpus(load_tsv(args.input), lexicons)
    save_tsv(corpus, args.output)
    counts = corpus.counts()
    print("labelled: " + " ".join(f"{code}={counts[code]}" for code in analytics.LABEL_ORDER))
    return 0


def cmd_resolve(args) -> int:
    corpus = load_tsv(args.input)
    if args.fixpoint:
        corpus, deltas = resolve_to_fixpoint(
            corpus,
            max_passes=args.max_passes,
            final_rule=not args.no_final_rule,
            transparency=not args.no_transparency,
        )
    else:
        corpus, _ = resolve_corpus(
            corpus,
            passes=args.passes,
            final_rule=not args.no_final_rule,
            transparency=not args.no_transparency,
        )
    save_tsv(corpus, args.output)
    _print_stage_table(list(corpus.provenance.stages))
    return 0


def cmd_trigrams(args) -> int:
    corpus = load_tsv(args.input)
    tasks = extract_trigram_tasks(corpus, mode=args.mode, k=args.top_k, min_count=args.min_count)
    payload = [
        {
            "task_id": t.task_id,
            "words": list(t.words),
            "count": t.count,
            "ambiguous_positions": sorted(t.ambiguous_positions),
            "samples": list(t.samples),
        }
        for t in tasks
    ]
    text = json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True)
    if args.output:
        Path(args.output).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    return 0


def cmd_apply(args) -> int:
    corpus = load_tsv(args.input)
    with corpus_lock(args.input):
        corpus, delta = apply_decisions(corpus, DecisionStore(args.store))
    save_tsv(corpus, args.output)
    _print_stage_table([delta])
    return 0


def cmd_analyze(args) -> int:
    corpus = load_tsv(args.input)
    stopwords = None
    if getattr(args, "lexicon_dir", None) or os.environ.get(LEXICON_DIR_ENV):
        stopwords = frozenset(LexiconSet.from_dir(_lexicon_dir(args)).stopwords.entries)
    rows: list[dict[str, object]]
    if args.report == "years":
        rows = [vars(y).copy() for y in analytics.year_stats(corpus)]
    elif args.report == "freq":
        table = analytics.word_frequency(corpus, args.filter, stopwords)
        rows = [{"word": w, "count": c} for w, c in table.rows[: args.top_k or None]]
    elif args.report == "ngrams":
        ranked = analytics.ngram_counts(
            corpus, args.n, top_k=args.top_k, content_only=args.content_only, stopwords=stopwords
        )
        rows = [{"ngram": " ".join(g), "count": c} for g, c in ranked]
    elif args.report == "lengths":
        rows = []
        for cls, stats in analytics.sentence_length_stats(corpus).items():
            rows.append(
                {
                    "class": cls.value,
                    "count": stats.count,
                    "min": stats.minimum,
                    "q1": stats.q1,
                    "median": stats.median,
                    "q3": stats.q3,
                    "max": stats.maximum,
                    "outliers": " ".join(str(x) for x in stats.outliers),
                }
            )
    elif args.report == "foreign":
        rows = [{"word": w, "count": c, "status": st} for w, c, st in analytics.foreign_report(corpus)]
    elif args.report == "stages":
        rows = analytics.stage_table(analytics.stage_report(corpus))
    else:  # pragma: no cover - argparse restricts choices
        raise SystemExit(1)

    if args.format == "json":
        print(json.dumps(rows, ensure_ascii=False, indent=2, sort_keys=True))
    else:
        if rows:
            headers = list(rows[0].keys())
            print("\t".join(headers))
            for row in rows:
                print("\t".join(str(row[h]) for h in headers))
    return 0


def cmd_export(args) -> int:
    corpus = load_tsv(args.input)
    if args.final:
        corpus = final_corpus(corpus)
    if args.format == "jsonl":
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            write_jsonl(corpus, fh)
    else:
        save_tsv(corpus, args.output)
    print(f"exported {len(corpus)} sentences -> {args.output}")
    return 0


def cmd_serve(args) -> int:
    from reotag.service import serve

    serve(args.corpus, args.store, bind_addr=args.bind, lexicon_dir=getattr(args, "lexicon_dir", None))
    return 0


def run_pipeline(config_path: str | Path) -> Path:
    """Execute the configured stage sequence; returns the output directory.

    Stage outputs land in the output directory as ingested/labelled/
    resolved(/applied)/final TSVs plus the stage-delta table, so a repeat
    run is byte-for-byte comparable.
    """
    config_path = Path(config_path)
    with open(config_path, "rb") as fh:
        config = tomllib.load(fh)
    pipe = config.get("pipeline", {})
    base = config_path.parent

    def _path(key: str, default=None):
        value = pipe.get(key, default)
        return (base / value) if value else None

    input_dir = _path("input_dir")
    lexicon_dir = _path("lexicon_dir")
    out_dir = _path("output_dir", "out")
    if not input_dir or not lexicon_dir:
        raise CorpusFormatError("pipeline config needs input_dir and lexicon_dir", str(config_path))
    out_dir.mkdir(parents=True, exist_ok=True)

    abbreviations = tuple(pipe.get("abbreviations", DEFAULT_ABBREVIATIONS))
    corpus = ingest_directory(input_dir, abbreviations)
    save_tsv(corpus, out_dir / "ingested.tsv")

    lexicons = LexiconSet.from_dir(lexicon_dir)
    corpus = label_corpus(corpus, lexicons)
    save_tsv(corpus, out_dir / "labelled.tsv")

    corpus, _ = resolve_corpus(
        corpus,
        passes=int(pipe.get("resolve_passes", 2)),
        final_rule=bool(pipe.get("final_rule", True)),
        transparency=bool(pipe.get("transparency", True)),
    )
    save_tsv(corpus, out_dir / "resolved.tsv")

    decisions = _path("decisions")
    store: list = foreign_decisions(lexicons) if pipe.get("apply_foreign", True) else []
    if decisions and decisions.exists():
        store.extend(DecisionStore(decisions).load())
    if store:
        corpus, _ = apply_decisions(corpus, store)
        save_tsv(corpus, out_dir / "applied.tsv")

    save_tsv(final_corpus(corpus), out_dir / "final.tsv")
    with open(out_dir / "stages.tsv", "w", encoding="utf-8", newline="\n") as fh:
        _print_stage_table(list(corpus.provenance.stages), out=fh)
    return out_dir


def cmd_run(args) -> int:
    out_dir = run_pipeline(args.config)
    print(f"pipeline complete -> {out_dir}")
    return 0


def _version_lines(lexicon_dir: str | None) -> list[str]:
    lines = [f"reo-tag {reotag.__version__}"]
    if lexicon_dir:
        lexicons = LexiconSet.from_dir(lexicon_dir)
        for kind, digest in lexicons.checksums().items():
            lines.append(f"lexicon {kind} sha256={digest}")
    return lines


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="reo-tag", description=__doc__)
    parser.add_argument("--version", action="store_true", help="print version and lexicon checksums")
    parser.add_argument("--lexicon-dir", help=f"word-list directory (default ${LEXICON_DIR_ENV})")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("ingest", help="tokenize raw .html/.txt files into interchange TSV")
    p.add_argument("--in", dest="input", required=True, help="directory of source documents")
    p.add_argument("--out", dest="output", required=True)
    p.add_argument("--abbreviations", help="comma-separated abbreviation list for the splitter")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("label", help="rule-based labelling pass")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", dest="output", required=True)
    p.add_argument("--lexicon-dir")
    p.set_defaults(func=cmd_label)

    p = sub.add_parser("resolve", help="conditional context marking of ambiguous words")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", dest="output", required=True)
    p.add_argument("--passes", type=int, default=2)
    p.add_argument("--fixpoint", action="store_true", help="repeat until no token changes")
    p.add_argument("--max-passes", type=int, default=100)
    p.add_argument("--no-final-rule", action="store_true", help="disable the sentence-final rule")
    p.add_argument("--no-transparency", action="store_true", help="neighbours are strictly adjacent tokens")
    p.set_defaults(func=cmd_resolve)

    p = sub.add_parser("trigrams", help="mine ranked trigram annotation tasks")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--mode", choices=("top_k", "min_count"), default="top_k")
    p.add_argument("--top-k", type=int, default=20)
    p.add_argument("--min-count", type=int, default=10)
    p.add_argument("--out", dest="output")
    p.set_defaults(func=cmd_trigrams)

    p = sub.add_parser("apply", help="apply the decision store to a corpus")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--store", required=True)
    p.add_argument("--out", dest="output", required=True)
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("analyze", help="corpus reports")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--report", required=True, choices=("years", "freq", "ngrams", "lengths", "foreign", "stages"))
    p.add_argument("--format", choices=("tsv", "json"), default="tsv")
    p.add_argument("--filter", choices=analytics.FREQUENCY_FILTERS, default="all")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--top-k", type=int)
    p.add_argument("--content-only", action="store_true")
    p.add_argument("--lexicon-dir")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("export", help="export a corpus, optionally the gold-standard view")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", dest="output", required=True)
    p.add_argument("--final", action="store_true", help="drop sentences still containing A/U/F words")
    p.add_argument("--format", choices=("tsv", "jsonl"), default="tsv")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("serve", help="run the annotation HTTP service")
    p.add_argument("--corpus", required=True)
    p.add_argument("--store", required=True)
    p.add_argument("--bind", default="127.0.0.1:8765")
    p.add_argument("--lexicon-dir")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("run", help="run the configured pipeline end to end")
    p.add_argument("--config", required=True, help="pipeline TOML config")
    p.set_defaults(func=cmd_run)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.version:
        try:
            print("\n".join(_version_lines(args.lexicon_dir or os.environ.get(LEXICON_DIR_ENV))))
        except DATA_ERRORS as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        return 0
    if not getattr(args, "command", None):
        parser.print_help()
        return 1
    try:
        return args.func(args)
    except DATA_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
