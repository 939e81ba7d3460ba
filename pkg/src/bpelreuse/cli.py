"""Command-line front end: analyze, batch, oracle, and correlate workflows.

Exit codes: 0 on success, 1 on analysis errors (diagnostics on stderr),
2 on usage errors. Reports go to --out when given, stdout otherwise.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from .corpus import (
    analyze_corpus,
    correlate_rows,
    load_ratings,
    metric_rows,
    metric_rows_from_report_dict,
    write_corpus_outputs,
)
from .engine import DETERMINISTIC_TIMESTAMP, MetricsReport, analyze, render_text
from .errors import AnalyzerError
from .bpel import load_bpel
from .logic import flow_factor, pick_factor, sequence_factor, switch_factor
from .oracle import (
    MAX_FACTORIAL_N,
    MAX_POWERSET_N,
    enumerate_flow,
    enumerate_pick,
    enumerate_sequence,
    enumerate_switch,
)
from .typemodel import load_table
from .wsdl import load_wsdl


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bpelreuse",
        description="Design-time reusability analysis for BPEL processes and their WSDL interfaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_analyze = sub.add_parser("analyze", help="score one process bundle")
    p_analyze.add_argument("bpel", help="BPEL process document")
    p_analyze.add_argument("--wsdl", help="WSDL interface (default: linked or same-stem file)")
    p_analyze.add_argument("--rc", type=_non_negative_int, default=1, help="current reuse count (default 1)")
    p_analyze.add_argument("--format", choices=("json", "csv", "text"), default=None)
    p_analyze.add_argument("--out", help="write the report here instead of stdout")
    p_analyze.add_argument("--coverage-table", help="override the built-in coverage weight table")
    p_analyze.add_argument("--deterministic", action="store_true", help="pin the report timestamp")

    p_batch = sub.add_parser("batch", help="analyze a corpus directory")
    p_batch.add_argument("directory", help="corpus directory (manifest.tsv or .bpel/.wsdl pairs)")
    p_batch.add_argument("--rc", type=_non_negative_int, default=1, help="default reuse count (default 1)")
    p_batch.add_argument("--out", help="directory for corpus_report.json/.csv and histogram.tsv")
    p_batch.add_argument("--coverage-table", help="override the built-in coverage weight table")
    p_batch.add_argument("--deterministic", action="store_true", help="pin report timestamps")

    p_oracle = sub.add_parser("oracle", help="compare brute-force counts with the closed forms")
    p_oracle.add_argument("--construct", choices=("sequence", "switch", "pick", "flow"), default=None)
    p_oracle.add_argument("--n", type=int, default=None, help="branch count (default: sweep the range)")
    p_oracle.add_argument("--links", action="store_true", help="flow only: count the dependency behavior")

    p_corr = sub.add_parser("correlate", help="rank-correlate corpus scores against ratings")
    p_corr.add_argument("input", help="corpus directory or corpus_report.json from `batch`")
    p_corr.add_argument("--ratings", required=True, help="CSV with header process_id,rating[,flip]")
    p_corr.add_argument("--alpha", type=float, default=0.01, help="significance level (default 0.01)")
    p_corr.add_argument("--rc", type=_non_negative_int, default=1, help="default reuse count for directory input")
    p_corr.add_argument("--out", help="write the correlation report here instead of stdout")
    p_corr.add_argument("--coverage-table", help="override the built-in coverage weight table")

    return parser


def _non_negative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return value


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _cmd_analyze(args) -> int:
    table = load_table(args.coverage_table)
    process = load_bpel(args.bpel)

    wsdl_path = args.wsdl
    if wsdl_path is None and process.linked_wsdl:
        candidate = Path(args.bpel).parent / process.linked_wsdl
        if candidate.is_file():
            wsdl_path = str(candidate)
    if wsdl_path is None:
        candidate = Path(args.bpel).with_suffix(".wsdl")
        if candidate.is_file():
            wsdl_path = str(candidate)
    if wsdl_path is None:
        raise AnalyzerError(f"no WSDL found for {args.bpel}; pass --wsdl")

    description = load_wsdl(wsdl_path, table=table)
    timestamp = DETERMINISTIC_TIMESTAMP if args.deterministic else None
    report = analyze(process, description, args.rc, table=table, timestamp=timestamp)

    fmt = args.format or ("text" if sys.stdout.isatty() else "json")
    if fmt == "json":
        _emit(report.to_json(), args.out)
    elif fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer)
        writer.writerow(MetricsReport.csv_header())
        writer.writerow(report.csv_row())
        _emit(buffer.getvalue(), args.out)
    else:
        _emit(render_text(report), args.out)
    return 0


def _cmd_batch(args) -> int:
    table = load_table(args.coverage_table)
    timestamp = DETERMINISTIC_TIMESTAMP if args.deterministic else None
    result = analyze_corpus(args.directory, default_rc=args.rc, table=table, timestamp=timestamp)
    if args.out:
        write_corpus_outputs(result, args.out)
    else:
        sys.stdout.write(json.dumps(result.to_dict(), indent=2, sort_keys=True) + "\n")
    for failure in result.failures:
        print(f"bpelreuse: {failure.process_id}: {failure.error}", file=sys.stderr)
    return 1 if result.failures else 0


_ORACLE_RANGES = {
    "sequence": range(1, MAX_FACTORIAL_N + 1),
    "flow": range(1, MAX_FACTORIAL_N + 1),
    "switch": range(1, MAX_POWERSET_N + 1),
    "pick": range(1, MAX_POWERSET_N + 1),
}


def _oracle_row(construct: str, n: int, links: bool) -> tuple[str, bool]:
    if construct == "sequence":
        res, closed = enumerate_sequence(n), sequence_factor(n)
        label = construct
    elif construct == "switch":
        res, closed = enumerate_switch(n), switch_factor(n)
        label = construct
    elif construct == "pick":
        res, closed = enumerate_pick(n), pick_factor(n)
        label = construct
    else:
        res, closed = enumerate_flow(n, links), flow_factor(n, links)
        label = "flow+links" if links else "flow"
    equal = res.ratio == closed
    status = "OK" if equal else "MISMATCH"
    row = (
        f"{label} {n} {res.match_count} {res.total_count} "
        f"{float(res.ratio):.4f} {float(closed):.4f} {status}"
    )
    return row, equal


def _cmd_oracle(args) -> int:
    constructs = [args.construct] if args.construct else ["sequence", "switch", "pick", "flow"]
    print("# construct n match total ratio closed_form status")
    all_equal = True
    for construct in constructs:
        ns = [args.n] if args.n is not None else list(_ORACLE_RANGES[construct])
        for n in ns:
            row, equal = _oracle_row(construct, n, args.links)
            print(row)
            all_equal = all_equal and equal
    return 0 if all_equal else 1


def _cmd_correlate(args) -> int:
    ratings = load_ratings(args.ratings)
    input_path = Path(args.input)
    if input_path.is_dir():
        table = load_table(args.coverage_table)
        result = analyze_corpus(input_path, default_rc=args.rc, table=table)
        rows = metric_rows(result)
    else:
        payload = json.loads(input_path.read_text(encoding="utf-8"))
        rows = metric_rows_from_report_dict(payload)
    report = correlate_rows(rows, ratings, alpha=args.alpha)
    _emit(json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n", args.out)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "analyze": _cmd_analyze,
        "batch": _cmd_batch,
        "oracle": _cmd_oracle,
        "correlate": _cmd_correlate,
    }
    try:
        return handlers[args.command](args)
    except (AnalyzerError, OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"bpelreuse: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
