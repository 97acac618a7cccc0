"""Command-line interface.

    mcse extract  --input report.txt
    mcse score    --ref-text "..." --cand-text "..."
    mcse score    --pairs pairs.jsonl --format csv --parallel 4
    mcse validate entities --annotations ann.jsonl --reports reports.jsonl
    mcse validate labels   --labels labels.csv --reports reports.jsonl --threshold 0.7
    mcse reproduce table2

Exit status: 0 on success, 1 on an internal failure, 2 on a usage or input error.
"""
import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

from mcse.corpus import BleuOptions, score_pairs, summarize
from mcse.embeddings import read_embeddings
from mcse.exceptions import InputFormatError, MCSEError
from mcse.extraction import extract
from mcse.harness.bleu import DEFAULT_EPSILON
from mcse.harness.recall import entity_recall, load_annotations
from mcse.harness.separation import DEFAULT_THRESHOLD, evaluate_separation, load_labels, select_pairs
from mcse.lexicon import compile_matcher, read_lexicon
from mcse.scorer import SimilarityMatrix, column_score, mcse_from_matrix
from mcse.validation import check_n_jobs, check_threshold

logger = logging.getLogger("mcse")

WORKED_MATRIX_PATH = Path(__file__).parent / "assets" / "worked_matrix.json"


class UsageError(MCSEError):
    pass


def _read_jsonl(path, required, what):
    records = []
    with _open_in(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise InputFormatError(f"invalid JSON: {exc.msg}", line=lineno, source=str(path)) from None
            if not isinstance(obj, dict) or any(k not in obj for k in required):
                raise InputFormatError(
                    f"{what} record needs fields {', '.join(required)}", line=lineno, source=str(path)
                )
            records.append(obj)
    return records


def _open_in(path):
    if str(path) == "-":
        return io.TextIOWrapper(sys.stdin.buffer, encoding="utf-8")
    return open(path, encoding="utf-8")


def _read_reports(path):
    """``id -> text`` from a JSON-lines report file."""
    return {str(r["id"]): str(r["text"]) for r in _read_jsonl(path, ("id", "text"), "report")}


def _dumps(obj):
    return json.dumps(obj, ensure_ascii=False, sort_keys=False)


def _csv_text(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _lexicon(args):
    return read_lexicon(args.lexicon)


def _embeddings(args):
    return read_embeddings(args.embeddings)


def cmd_extract(args):
    lexicon = _lexicon(args)
    matcher = compile_matcher(lexicon)
    fmt = args.format or "json"
    is_jsonl = args.jsonl or str(args.input).endswith(".jsonl")
    if is_jsonl:
        docs = [(str(r["id"]), str(r["text"])) for r in _read_jsonl(args.input, ("id", "text"), "report")]
    else:
        with _open_in(args.input) as fh:
            docs = [(None, fh.read())]
    results = [(rid, extract(text, lexicon, matcher)) for rid, text in docs]

    if fmt == "json":
        if is_jsonl:
            return "".join(
                _dumps({"id": rid, "entities": [e.to_dict() for e in ents]}) + "\n" for rid, ents in results
            )
        return _dumps([e.to_dict() for e in results[0][1]]) + "\n"
    if fmt == "csv":
        rows = [
            [rid or "", e.phrase, e.head, e.category, str(e.negated).lower()]
            for rid, ents in results
            for e in ents
        ]
        return _csv_text(["id", "phrase", "head", "category", "negated"], rows)
    lines = []
    for rid, ents in results:
        if rid is not None:
            lines.append(f"[{rid}]")
        lines.extend(e.phrase for e in ents)
    return "\n".join(lines) + "\n"


def cmd_score(args):
    if args.pairs is None and (args.ref_text is None or args.cand_text is None):
        raise UsageError("score needs --ref-text and --cand-text, or --pairs")
    if args.pairs is not None and (args.ref_text is not None or args.cand_text is not None):
        raise UsageError("--pairs cannot be combined with --ref-text/--cand-text")
    if args.bleu_order < 1:
        raise UsageError("--bleu-order must be at least 1")
    lexicon = _lexicon(args)
    store = _embeddings(args)
    options = BleuOptions(args.bleu_order, args.bleu_smooth, args.bleu_epsilon)
    fmt = args.format or "json"

    if args.pairs is not None:
        records = _read_jsonl(args.pairs, ("reference", "candidate"), "pair")
        if not records:
            raise InputFormatError("pair file has no records", source=str(args.pairs))
        items = [
            (str(r.get("id", i)), str(r["reference"]), str(r["candidate"]))
            for i, r in enumerate(records, start=1)
        ]
    else:
        items = [(None, args.ref_text, args.cand_text)]
    results = score_pairs(items, lexicon, store, bleu_options=options, n_jobs=check_n_jobs(args.parallel))

    if fmt == "json":
        if args.pairs is None:
            out = results[0].to_dict()
            out["bleu_variant"] = options.variant()
            return _dumps(out) + "\n"
        return _dumps(
            {
                "pairs": [r.to_dict() for r in results],
                "summary": summarize(results),
                "bleu_variant": options.variant(),
            }
        ) + "\n"
    if fmt == "csv":
        rows = [
            [r.pair_id or "", repr(r.report.mcse), repr(r.bleu), r.report.matched, r.report.m, r.report.n]
            for r in results
        ]
        return _csv_text(["id", "mcse", "bleu", "matched", "m", "n"], rows)
    lines = []
    for r in results:
        prefix = f"{r.pair_id}: " if r.pair_id is not None else ""
        lines.append(
            f"{prefix}MCSE {r.report.mcse:.3f}  BLEU-{options.max_n} {r.bleu:.3f}  "
            f"(matched {r.report.matched}, M={r.report.m}, N={r.report.n})"
        )
    if args.pairs is not None:
        s = summarize(results)
        lines.append(f"mean MCSE {s['mean_mcse']:.3f}  mean BLEU {s['mean_bleu']:.3f}  over {s['n_pairs']} pairs")
    return "\n".join(lines) + "\n"


def cmd_validate_entities(args):
    lexicon = _lexicon(args)
    matcher = compile_matcher(lexicon)
    with _open_in(args.annotations) as fh:
        annotations = load_annotations(fh, name=str(args.annotations))
    reports = _read_reports(args.reports)
    extracted = {rid: extract(text, lexicon, matcher) for rid, text in reports.items()}
    try:
        result = entity_recall(extracted, annotations)
    except KeyError as exc:
        raise InputFormatError(str(exc.args[0])) from None
    fmt = args.format or "json"
    if fmt == "text":
        def show(v):
            return "n/a" if v is None else f"{v:.3f}"

        return f"present recall {show(result.present_recall)}\nabsent recall  {show(result.absent_recall)}\n"
    if fmt == "csv":
        rows = [
            [rid, k, a, r] for rid, c in sorted(result.counts.items()) for k, (a, r) in c.items()
        ]
        return _csv_text(["id", "presence", "annotated", "recognized"], rows)
    return _dumps(result.to_dict()) + "\n"


def cmd_validate_labels(args):
    threshold = check_threshold(args.threshold)
    lexicon = _lexicon(args)
    store = _embeddings(args)
    with _open_in(args.labels) as fh:
        records = load_labels(fh, name=str(args.labels))
    if len(records) < 2:
        raise InputFormatError("label file needs at least two records", source=str(args.labels))
    reports = _read_reports(args.reports)
    try:
        result = evaluate_separation(
            reports, select_pairs(records), lexicon, compile_matcher(lexicon), store, threshold
        )
    except KeyError as exc:
        raise InputFormatError(str(exc.args[0])) from None
    summary = result.summary()
    fmt = args.format or "csv"
    if fmt == "json":
        points = [
            {"point_id": p.point_id, "class": p.kind, "mean_mcse": p.mean_mcse, "n_pairs": p.n_pairs}
            for p in result.points
        ]
        return _dumps({"summary": summary, "points": points}) + "\n"
    if args.summary is not None:
        Path(args.summary).write_text(_dumps(summary) + "\n", encoding="utf-8")
    else:
        sys.stderr.write(_dumps(summary) + "\n")
    if fmt == "text":
        lines = [f"threshold {threshold:.2f}"]
        for kind in ("same", "opposite"):
            s = summary[kind]
            mean = "n/a" if s["mean"] is None else f"{s['mean']:.3f}"
            lines.append(f"{kind:9s} points {s['points']:4d}  mean {mean}  above {s['above']}  below {s['below']}")
        return "\n".join(lines) + "\n"
    return result.to_csv()


def load_worked_matrix(path=WORKED_MATRIX_PATH):
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    matrix = SimilarityMatrix.from_values(data["values"], data["rows"], data["cols"])
    return matrix, int(data.get("matched_count", 0))


def cmd_reproduce(args):
    matrix, matched = load_worked_matrix(args.matrix or WORKED_MATRIX_PATH)
    scores = [column_score(matrix, j) for j in range(len(matrix.cols))]
    value = mcse_from_matrix(matrix, matched, matched + len(matrix.cols))
    fmt = args.format or "text"
    if fmt == "json":
        return _dumps(
            {
                "columns": [{"candidate": c, "s": s} for c, s in zip(matrix.cols, scores)],
                "matched": matched,
                "m": matched + len(matrix.cols),
                "mcse": value,
            }
        ) + "\n"
    if fmt == "csv":
        return _csv_text(["candidate", "s"], [[c, f"{s:.3f}"] for c, s in zip(matrix.cols, scores)]) + (
            f"MCSE,{value:.3f}\n"
        )
    width = max(len(r) for r in matrix.rows)
    lines = [" " * width + "  " + "  ".join(f"{c:>18s}" for c in matrix.cols)]
    for r, row in zip(matrix.rows, matrix.values):
        lines.append(f"{r:>{width}s}  " + "  ".join(f"{v:18.2f}" for v in row))
    lines.append(f"{'S':>{width}s}  " + "  ".join(f"{s:18.3f}" for s in scores))
    lines.append(f"MCSE {value:.3f}")
    return "\n".join(lines) + "\n"


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--lexicon", type=Path, help="lexicon TSV (default: bundled demo lexicon)")
    common.add_argument("--embeddings", type=Path, help="embedding table (default: bundled demo table)")
    common.add_argument("--format", choices=("json", "csv", "text"), help="output format")
    common.add_argument("--out", type=Path, help="write output here instead of stdout")
    common.add_argument("--parallel", type=int, default=1, metavar="N", help="worker processes")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="mcse", description="Medical corpus similarity evaluation.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", parents=[common], help="extract clinical entities")
    p.add_argument("--input", required=True, help="plain-text report, JSON-lines records, or - for stdin")
    p.add_argument("--jsonl", action="store_true", help="treat input as JSON-lines {id, text}")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("score", parents=[common], help="score candidate against reference reports")
    p.add_argument("--ref-text", help="reference report text")
    p.add_argument("--cand-text", help="candidate report text")
    p.add_argument("--pairs", help="JSON-lines {id, reference, candidate}")
    p.add_argument("--bleu-order", type=int, default=2, help="maximum n-gram order (default 2)")
    p.add_argument("--bleu-smooth", action="store_true", help="epsilon-smooth zero n-gram counts")
    p.add_argument("--bleu-epsilon", type=float, default=DEFAULT_EPSILON)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("validate", help="validation protocols")
    vsub = p.add_subparsers(dest="protocol", required=True)
    v = vsub.add_parser("entities", parents=[common], help="entity recall against annotations")
    v.add_argument("--annotations", required=True)
    v.add_argument("--reports", required=True)
    v.set_defaults(func=cmd_validate_entities)
    v = vsub.add_parser("labels", parents=[common], help="same/opposite label separation")
    v.add_argument("--labels", required=True)
    v.add_argument("--reports", required=True)
    v.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
    v.add_argument("--summary", type=Path, help="write the JSON summary here (default: stderr)")
    v.set_defaults(func=cmd_validate_labels)

    p = sub.add_parser("reproduce", help="replay bundled fixtures")
    rsub = p.add_subparsers(dest="target", required=True)
    r = rsub.add_parser("table2", parents=[common], help="column scores and MCSE of the bundled matrix")
    r.add_argument("--matrix", type=Path, help="matrix JSON (default: bundled table)")
    r.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        text = args.func(args)
        if args.out is not None:
            args.out.write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
    except (MCSEError, OSError, ValueError) as exc:
        print(f"mcse: error: {exc}", file=sys.stderr)
        return 2
    except Exception:
        logger.exception("internal error")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
