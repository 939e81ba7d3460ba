"""Batch analysis over a corpus of process bundles, with rank correlation.

A corpus directory either carries a `manifest.tsv` (process_id, bpel path,
wsdl path, r_c per line, paths relative to the manifest) or is scanned for
same-stem `.bpel`/`.wsdl` pairs. Bundles are analyzed independently: one
broken document quarantines that bundle into the failure list and the rest
of the run proceeds.

Spearman rank correlation is computed as Pearson over midranks. Ranks are
exact fractions, so tie-free inputs (where both rank variances coincide)
produce an exact rational coefficient; tied inputs fall back to float
arithmetic for the square root. The p-value uses the usual t approximation
with n - 2 degrees of freedom.
"""

from __future__ import annotations

import csv
import json
import math
import statistics
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .bpel import load_bpel
from .engine import MetricsReport, analyze
from .errors import AnalyzerError, CorpusError, CorrelationError
from .typemodel import BuiltinTypeTable, load_table
from .wsdl import load_wsdl

HISTOGRAM_BINS = 10


# ---------------------------------------------------------------------------
# Spearman rank correlation


@dataclass(frozen=True)
class SpearmanResult:
    r_s: float
    p_value: float
    n: int
    alpha: float

    @property
    def significant(self) -> bool:
        return self.p_value < self.alpha


def _midranks(values) -> list[Fraction]:
    """1-based ranks; tied runs share the average of their positions."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks: list[Fraction] = [Fraction(0)] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        shared = Fraction(i + j + 2, 2)  # average of positions i+1 .. j+1
        for k in range(i, j + 1):
            ranks[order[k]] = shared
        i = j + 1
    return ranks


def spearman_correlation(x, y, alpha: float = 0.01) -> SpearmanResult:
    """Rank correlation of two equal-length value lists (n >= 3).

    Ties get average ranks. Constant input has no defined rank order, so it
    raises CorrelationError instead of returning NaN.
    """
    if len(x) != len(y):
        raise CorrelationError(f"length mismatch: {len(x)} vs {len(y)}")
    n = len(x)
    if n < 3:
        raise CorrelationError(f"need at least 3 pairs, got {n}")
    rx = _midranks(x)
    ry = _midranks(y)
    mean_x = sum(rx) / n
    mean_y = sum(ry) / n
    sxx = sum((a - mean_x) ** 2 for a in rx)
    syy = sum((b - mean_y) ** 2 for b in ry)
    if sxx == 0:
        raise CorrelationError("first input is constant; correlation undefined")
    if syy == 0:
        raise CorrelationError("second input is constant; correlation undefined")
    sxy = sum((a - mean_x) * (b - mean_y) for a, b in zip(rx, ry))
    if sxx == syy:
        r = float(sxy / sxx)  # exact rational path (always taken without ties)
    else:
        r = float(sxy) / math.sqrt(float(sxx) * float(syy))
        r = max(-1.0, min(1.0, r))
    return SpearmanResult(r_s=r, p_value=_two_sided_p(r, n), n=n, alpha=alpha)


def _two_sided_p(r: float, n: int) -> float:
    if abs(r) >= 1.0:
        return 0.0
    from scipy import stats  # deferred: keeps plain analysis runs light

    t = r * math.sqrt((n - 2) / (1.0 - r * r))
    return float(2.0 * stats.t.sf(abs(t), n - 2))


# ---------------------------------------------------------------------------
# corpus analysis


@dataclass(frozen=True)
class Bundle:
    process_id: str
    bpel_path: Path
    wsdl_path: Path | None
    r_c: int


@dataclass(frozen=True)
class CorpusEntry:
    process_id: str
    report: MetricsReport


@dataclass(frozen=True)
class CorpusFailure:
    process_id: str
    error: str


@dataclass(frozen=True)
class HistogramBin:
    lower: Fraction
    upper: Fraction
    count: int


@dataclass(frozen=True)
class CorpusResult:
    entries: tuple[CorpusEntry, ...]
    failures: tuple[CorpusFailure, ...]
    summary: dict
    histogram: tuple[HistogramBin, ...]

    @property
    def n(self) -> int:
        return len(self.entries)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "summary": self.summary,
            "histogram": [
                {"lower": float(b.lower), "upper": float(b.upper), "count": b.count} for b in self.histogram
            ],
            "processes": [dict(process_id=e.process_id, **e.report.to_dict()) for e in self.entries],
            "failures": [{"process_id": f.process_id, "error": f.error} for f in self.failures],
        }


def discover_bundles(directory, default_rc: int = 1) -> list[Bundle]:
    """Find process bundles: manifest.tsv when present, stem pairing otherwise."""
    root = Path(directory)
    if not root.is_dir():
        raise CorpusError(f"not a readable directory: {root}")
    manifest = root / "manifest.tsv"
    if manifest.is_file():
        return _read_manifest(manifest)

    bundles = []
    for bpel_path in sorted(root.glob("*.bpel")):
        wsdl_path = bpel_path.with_suffix(".wsdl")
        bundles.append(
            Bundle(
                process_id=bpel_path.stem,
                bpel_path=bpel_path,
                wsdl_path=wsdl_path if wsdl_path.is_file() else None,
                r_c=default_rc,
            )
        )
    if not bundles:
        raise CorpusError(f"no process bundles found in {root}")
    return bundles


def _read_manifest(manifest: Path) -> list[Bundle]:
    bundles = []
    base = manifest.parent
    with open(manifest, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != 4:
                raise CorpusError(f"{manifest}:{lineno}: expected 4 tab-separated fields")
            process_id, bpel_rel, wsdl_rel, rc_text = (f.strip() for f in fields)
            try:
                r_c = int(rc_text)
            except ValueError:
                if lineno == 1:  # header row
                    continue
                raise CorpusError(f"{manifest}:{lineno}: r_c is not an integer: {rc_text!r}") from None
            bundles.append(
                Bundle(
                    process_id=process_id,
                    bpel_path=base / bpel_rel,
                    wsdl_path=base / wsdl_rel,
                    r_c=r_c,
                )
            )
    if not bundles:
        raise CorpusError(f"{manifest}: no bundles listed")
    return bundles


def analyze_corpus(
    directory,
    default_rc: int = 1,
    *,
    table: BuiltinTypeTable | None = None,
    timestamp: str | None = None,
) -> CorpusResult:
    """Analyze every bundle under `directory`; failures never abort the run."""
    if table is None:
        table = load_table()
    entries: list[CorpusEntry] = []
    failures: list[CorpusFailure] = []
    for bundle in sorted(discover_bundles(directory, default_rc), key=lambda b: b.process_id):
        try:
            if bundle.wsdl_path is None:
                raise CorpusError(f"no matching .wsdl for {bundle.bpel_path.name}")
            process = load_bpel(bundle.bpel_path)
            description = load_wsdl(bundle.wsdl_path, table=table)
            report = analyze(process, description, bundle.r_c, table=table, timestamp=timestamp)
            entries.append(CorpusEntry(process_id=bundle.process_id, report=report))
        except (AnalyzerError, OSError) as exc:
            failures.append(CorpusFailure(process_id=bundle.process_id, error=str(exc)))

    summary = {
        name: _summary_stats([float(getter(e.report)) for e in entries])
        for name, getter in (
            ("r_p", lambda r: r.r_p),
            ("mp_sd", lambda r: r.mp_sd),
            ("mp_sl", lambda r: r.mp_sl),
            ("mmp_s", lambda r: r.mmp_s),
        )
    }
    histogram = _histogram([e.report.r_p for e in entries])
    return CorpusResult(
        entries=tuple(entries), failures=tuple(failures), summary=summary, histogram=histogram
    )


def _summary_stats(values: list[float]) -> dict:
    if not values:
        return {"n": 0, "mean": None, "stdev": None, "variance": None}
    if len(values) == 1:
        return {"n": 1, "mean": values[0], "stdev": 0.0, "variance": 0.0}
    return {
        "n": len(values),
        "mean": statistics.mean(values),
        "stdev": statistics.stdev(values),
        "variance": statistics.variance(values),
    }


def _histogram(values: list[Fraction]) -> tuple[HistogramBin, ...]:
    """Ten equal bins over [0, 1]; the last bin is right-closed.

    Values above 1 (possible when r_c > 1) are clamped into the top bin so
    that every analyzed process lands in exactly one bin.
    """
    counts = [0] * HISTOGRAM_BINS
    for v in values:
        idx = min(int(v * HISTOGRAM_BINS), HISTOGRAM_BINS - 1)
        counts[idx] += 1
    return tuple(
        HistogramBin(lower=Fraction(i, HISTOGRAM_BINS), upper=Fraction(i + 1, HISTOGRAM_BINS), count=c)
        for i, c in enumerate(counts)
    )


# ---------------------------------------------------------------------------
# ratings and correlation


@dataclass(frozen=True)
class RatingsTable:
    rows: dict[str, float]


def load_ratings(path) -> RatingsTable:
    """Read a ratings CSV: header `process_id,rating` or `process_id,rating,flip`.

    A truthy flip cell negates that row's rating, inverting its rank order;
    rating files whose questions score the target property inversely declare
    a constant flip column.
    """
    rows: dict[str, float] = {}
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header[:2]] != ["process_id", "rating"]:
            raise CorpusError(f"{path}: header must start with 'process_id,rating'")
        has_flip = len(header) >= 3 and header[2].strip() == "flip"
        for lineno, row in enumerate(reader, start=2):
            if not row or not "".join(row).strip():
                continue
            if len(row) < 2:
                raise CorpusError(f"{path}:{lineno}: expected at least 2 columns")
            process_id = row[0].strip()
            if process_id in rows:
                raise CorpusError(f"{path}:{lineno}: duplicate process_id {process_id!r}")
            try:
                rating = float(row[1])
            except ValueError:
                raise CorpusError(f"{path}:{lineno}: rating is not a number: {row[1]!r}") from None
            if has_flip and len(row) >= 3 and row[2].strip().lower() in ("1", "true", "yes"):
                rating = -rating
            rows[process_id] = rating
    if not rows:
        raise CorpusError(f"{path}: no ratings found")
    return RatingsTable(rows=rows)


@dataclass(frozen=True)
class CorrelationReport:
    n_joined: int
    alpha: float
    rating_vs_r_p: SpearmanResult
    r_p_vs_mp_sd: SpearmanResult | None
    r_p_vs_mp_sl: SpearmanResult | None
    unmatched_corpus: tuple[str, ...]
    unmatched_ratings: tuple[str, ...]
    notes: tuple[str, ...]

    def to_dict(self) -> dict:
        def payload(res: SpearmanResult | None):
            if res is None:
                return None
            return {
                "r_s": res.r_s,
                "p_value": res.p_value,
                "n": res.n,
                "significant": res.significant,
            }

        return {
            "n_joined": self.n_joined,
            "alpha": self.alpha,
            "rating_vs_r_p": payload(self.rating_vs_r_p),
            "r_p_vs_mp_sd": payload(self.r_p_vs_mp_sd),
            "r_p_vs_mp_sl": payload(self.r_p_vs_mp_sl),
            "unmatched_corpus": list(self.unmatched_corpus),
            "unmatched_ratings": list(self.unmatched_ratings),
            "notes": list(self.notes),
        }


@dataclass(frozen=True)
class MetricRow:
    """The per-process values correlation needs, independent of full reports."""

    process_id: str
    r_p: Fraction
    mp_sd: Fraction
    mp_sl: Fraction


def metric_rows(corpus: CorpusResult) -> list[MetricRow]:
    return [
        MetricRow(e.process_id, e.report.r_p, e.report.mp_sd, e.report.mp_sl)
        for e in corpus.entries
    ]


def metric_rows_from_report_dict(report: dict) -> list[MetricRow]:
    """Rebuild correlation rows from a serialized corpus_report.json payload."""
    rows = []
    for proc in report.get("processes", []):
        metrics = proc["metrics"]
        rows.append(
            MetricRow(
                process_id=proc["process_id"],
                r_p=Fraction(metrics["r_p"]["exact"]),
                mp_sd=Fraction(metrics["mp_sd"]["exact"]),
                mp_sl=Fraction(metrics["mp_sl"]["exact"]),
            )
        )
    return rows


def correlate_rows(rows: list[MetricRow], ratings: RatingsTable, alpha: float = 0.01) -> CorrelationReport:
    """Rank-correlate per-process reusability values against external ratings.

    The headline figure correlates ratings with R_p over the joined rows;
    the component correlations (R_p against each match probability) use all
    rows and are omitted with a note when undefined.
    """
    by_id = {row.process_id: row for row in rows}
    joined_ids = sorted(set(by_id) & set(ratings.rows))
    if len(joined_ids) < 3:
        raise CorrelationError(f"need at least 3 joinable rows, found {len(joined_ids)}")
    rating_values = [ratings.rows[i] for i in joined_ids]
    r_p_values = [by_id[i].r_p for i in joined_ids]
    headline = spearman_correlation(rating_values, r_p_values, alpha=alpha)

    notes: list[str] = []
    ordered = sorted(rows, key=lambda r: r.process_id)
    r_p_all = [r.r_p for r in ordered]
    components: dict[str, SpearmanResult | None] = {}
    for name, values in (
        ("r_p_vs_mp_sd", [r.mp_sd for r in ordered]),
        ("r_p_vs_mp_sl", [r.mp_sl for r in ordered]),
    ):
        try:
            components[name] = spearman_correlation(r_p_all, values, alpha=alpha)
        except CorrelationError as exc:
            components[name] = None
            notes.append(f"{name}: {exc}")

    return CorrelationReport(
        n_joined=len(joined_ids),
        alpha=alpha,
        rating_vs_r_p=headline,
        r_p_vs_mp_sd=components["r_p_vs_mp_sd"],
        r_p_vs_mp_sl=components["r_p_vs_mp_sl"],
        unmatched_corpus=tuple(sorted(set(by_id) - set(ratings.rows))),
        unmatched_ratings=tuple(sorted(set(ratings.rows) - set(by_id))),
        notes=tuple(notes),
    )


def correlate_with_ratings(corpus: CorpusResult, ratings: RatingsTable, alpha: float = 0.01) -> CorrelationReport:
    """Rank-correlate an analyzed corpus against external ratings."""
    return correlate_rows(metric_rows(corpus), ratings, alpha=alpha)


# ---------------------------------------------------------------------------
# file outputs


def write_corpus_outputs(result: CorpusResult, out_dir) -> list[Path]:
    """Write corpus_report.json, corpus_report.csv, and histogram.tsv."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    json_path = out / "corpus_report.json"
    json_path.write_text(json.dumps(result.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")

    csv_path = out / "corpus_report.csv"
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["process_id"] + MetricsReport.csv_header())
        for entry in result.entries:
            writer.writerow([entry.process_id] + entry.report.csv_row())

    tsv_path = out / "histogram.tsv"
    lines = [f"{float(b.lower)}\t{float(b.upper)}\t{b.count}" for b in result.histogram]
    tsv_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return [json_path, csv_path, tsv_path]
