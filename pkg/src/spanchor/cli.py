"""Command-line interface.

Subcommands cover the whole workflow: corpus statistics and validation,
context splitting, translation-ready preparation, the full translation
pipeline, sample drawing, agreement analysis, prediction scoring, and the
annotation HTTP service. All output is UTF-8; --json switches printed
reports to machine-readable JSON.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import backends, corpus as corpus_mod, metrics, pipeline, sampling
from .annotation import AnnotationStore, initialize_store
from .segmenter import load_abbreviations, segment_paragraph
from .service import AnnotationService

USAGE_ERROR = 2
VALIDATION_ERROR = 1


def _read_corpus(path) -> corpus_mod.Corpus:
    with open(path, "rb") as fh:
        return corpus_mod.parse_corpus(fh.read())


def cmd_stats(args) -> int:
    stats = corpus_mod.summarize(_read_corpus(args.corpus))
    if args.json:
        print(json.dumps(corpus_mod.stats_to_dict(stats), ensure_ascii=False))
    else:
        print(f"questions:       {stats.total_questions}")
        print(f"answerable:      {stats.answerable}")
        print(f"unanswerable:    {stats.unanswerable}")
        print(f"paragraphs:      {stats.paragraphs}")
        print(f"long paragraphs: {stats.long_paragraphs}")
    return 0


def cmd_validate(args) -> int:
    report = corpus_mod.check_spans(_read_corpus(args.corpus))
    if args.json:
        print(
            json.dumps(
                {
                    "checked": report.checked,
                    "mismatches": [
                        {"qa_id": q, "expected": e, "found": f}
                        for q, e, f in report.mismatches
                    ],
                },
                ensure_ascii=False,
            )
        )
    else:
        print(f"checked {report.checked} spans, {len(report.mismatches)} mismatch(es)")
        for qa_id, expected, found in report.mismatches[:20]:
            print(f"  {qa_id}: expected {expected!r}, found {found!r}")
    return 0 if report.ok else VALIDATION_ERROR


def cmd_split(args) -> int:
    corpus = _read_corpus(args.input)
    abbreviations = load_abbreviations(args.abbreviations) if args.abbreviations else None
    long_count = 0
    total = 0
    splits = []
    for article in corpus.articles:
        for pi, paragraph in enumerate(article.paragraphs):
            total += 1
            if len(paragraph.context) < args.limit:
                continue
            long_count += 1
            segments = segment_paragraph(
                paragraph.context, args.limit, None, abbreviations
            )
            splits.append(
                {
                    "article": article.title,
                    "paragraph": pi,
                    "length": len(paragraph.context),
                    "segments": [s.text for s in segments],
                }
            )
    payload = {"paragraphs": total, "long_paragraphs": long_count, "splits": splits}
    Path(args.output).write_text(
        json.dumps(payload, ensure_ascii=False, indent=1), encoding="utf-8"
    )
    if args.json:
        print(json.dumps({"paragraphs": total, "long_paragraphs": long_count}))
    else:
        print(f"paragraphs: {total}")
        print(f"long paragraphs (>= {args.limit}): {long_count}")
    return 0


def cmd_prepare(args) -> int:
    from .anchoring import clean_text, finalize_markers

    corpus = _read_corpus(args.input)
    report = corpus_mod.check_spans(corpus)
    if not report.ok:
        print(f"corpus has {len(report.mismatches)} span mismatch(es)", file=sys.stderr)
        return VALIDATION_ERROR
    count = 0
    with open(args.output, "w", encoding="utf-8") as out:
        for article in corpus.articles:
            for paragraph in article.paragraphs:
                shared = None
                for qa in paragraph.qas:
                    item = pipeline.build_item(
                        qa, paragraph.context, args.limit, shared_segments=shared
                    )
                    if item.is_impossible:
                        shared = item.segments
                    anchor_index = None
                    texts = []
                    for i, seg in enumerate(item.segments):
                        if seg.contains_anchor:
                            anchor_index = i
                            texts.append(finalize_markers(seg.text))
                        else:
                            texts.append(seg.text)
                    record = {
                        "qa_id": item.qa_id,
                        "question": item.question,
                        "answer": None
                        if item.answer is None
                        else clean_text(item.answer.text),
                        "segments": texts,
                        "anchor_index": anchor_index,
                        "is_impossible": item.is_impossible,
                    }
                    out.write(json.dumps(record, ensure_ascii=False) + "\n")
                    count += 1
    print(f"prepared {count} items -> {args.output}")
    return 0


def cmd_translate(args) -> int:
    corpus = _read_corpus(args.input)
    config = backends.load_backend_config(args.backend)
    backend = backends.make_backend(config)
    if args.cache:
        backend = backends.cached(backend, backends.DirectoryCache(args.cache))
    run_config = pipeline.PipelineConfig(limit=args.limit, parallelism=args.parallel)
    corpus_t, report, discards = pipeline.run_pipeline(corpus, backend, run_config)

    Path(args.output).write_bytes(corpus_mod.write_corpus(corpus_t))
    report_path = args.report or args.output + ".report.json"
    Path(report_path).write_text(
        json.dumps(report.to_dict(), ensure_ascii=False, indent=1), encoding="utf-8"
    )
    discard_path = args.discards or args.output + ".discards.jsonl"
    with open(discard_path, "w", encoding="utf-8") as fh:
        for record in discards:
            fh.write(json.dumps(record.to_dict(), ensure_ascii=False) + "\n")
    if args.json:
        print(json.dumps(report.to_dict(), ensure_ascii=False))
    else:
        print(
            f"attempted {report.attempted}, produced {report.produced}, "
            f"discarded {report.discarded}"
        )
        print(f"corpus  -> {args.output}")
        print(f"report  -> {report_path}")
        print(f"discards-> {discard_path}")
    return 0


def cmd_sample(args) -> int:
    ids = [
        line.strip()
        for line in Path(args.ids).read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]
    population = args.population or len(ids)
    spec = sampling.SampleSpec(
        population=population, confidence=args.confidence, margin=args.margin
    )
    n = sampling.required_sample_size(spec)
    if n > len(ids):
        print(
            f"required sample {n} exceeds the {len(ids)} ids provided",
            file=sys.stderr,
        )
        return VALIDATION_ERROR
    sample = sampling.draw_sample(ids, n, args.seed)
    if args.json:
        print(json.dumps({"required": n, "sample": sample}, ensure_ascii=False))
    else:
        print(f"required sample size: {n}")
        for item_id in sample:
            print(item_id)
    return 0


def cmd_agreement(args) -> int:
    votes = sampling.read_votes_jsonl(args.votes)
    summary = sampling.preference_summary(votes)
    try:
        agreement = sampling.krippendorff_nominal(sampling.RatingMatrix.from_votes(votes))
        agreement_payload = agreement.to_dict()
    except ValueError as exc:
        agreement_payload = {"alpha": None, "error": str(exc)}
    if args.json:
        print(
            json.dumps(
                {"percentages": summary, "agreement": agreement_payload},
                ensure_ascii=False,
            )
        )
    else:
        for choice in sorted(summary):
            print(f"{choice}: {summary[choice]:.2f}%")
        if agreement_payload.get("alpha") is None:
            print(f"alpha: undefined ({agreement_payload.get('error')})")
        else:
            print(f"alpha: {agreement_payload['alpha']:.6f}")
    return 0


def cmd_evaluate(args) -> int:
    with open(args.predictions, encoding="utf-8") as fh:
        predictions = {str(k): str(v) for k, v in json.load(fh).items()}
    corpus = _read_corpus(args.corpus)
    profile = metrics.PROFILES[args.profile]
    report = metrics.evaluate_predictions(predictions, corpus, profile)
    if args.json:
        print(json.dumps(report.to_dict(), ensure_ascii=False))
    else:
        print(f"exact_match: {report.em:.2f}")
        print(f"f1:          {report.f1:.2f}")
        print(f"n:           {report.n_evaluated}")
    return 0


def cmd_serve_annotate(args) -> int:
    initialize_store(args.store, args.tasks)
    store = AnnotationStore(args.store)
    service = AnnotationService(
        store, host=args.host, port=args.port, static_dir=args.static
    )
    print(f"annotation service on http://{args.host}:{service.port}/")
    try:
        service.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        service.stop()
        store.close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spanchor",
        description="Span-preserving QA corpus translation toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", help="corpus question/paragraph counts")
    p.add_argument("corpus")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("validate", help="check every answer span against its context")
    p.add_argument("corpus")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("split", help="segment long contexts, report the long count")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--limit", type=int, default=1000)
    p.add_argument("--abbreviations", help="custom abbreviation lexicon file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("prepare", help="emit cleaned, anchored, segmented work items")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--limit", type=int, default=1000)
    p.set_defaults(func=cmd_prepare)

    p = sub.add_parser("translate", help="run the full translation pipeline")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--backend", required=True, help="backend config JSON file")
    p.add_argument("--limit", type=int, default=1000)
    p.add_argument("--parallel", type=int, default=8)
    p.add_argument("--cache", help="directory for the on-disk translation cache")
    p.add_argument("--report", help="pipeline report path")
    p.add_argument("--discards", help="discard log path (JSON Lines)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("sample", help="compute sample size and draw item ids")
    p.add_argument("ids", help="file with one item id per line")
    p.add_argument("--population", type=int, default=0)
    p.add_argument("--confidence", type=float, default=0.99)
    p.add_argument("--margin", type=float, default=0.03)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("agreement", help="preference tally and Krippendorff's alpha")
    p.add_argument("votes", help="JSON Lines votes file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_agreement)

    p = sub.add_parser("evaluate", help="EM/F1 over a predictions file")
    p.add_argument("predictions")
    p.add_argument("corpus")
    p.add_argument("--profile", choices=sorted(metrics.PROFILES), default="english")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("serve-annotate", help="run the annotation HTTP service")
    p.add_argument("tasks", help="tasks.json with items and annotator allowlist")
    p.add_argument("--store", required=True, help="store directory")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--static", help="built frontend directory to serve at /")
    p.set_defaults(func=cmd_serve_annotate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (corpus_mod.CorpusParseError, corpus_mod.CorpusSchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return VALIDATION_ERROR
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return VALIDATION_ERROR


if __name__ == "__main__":
    sys.exit(main())
