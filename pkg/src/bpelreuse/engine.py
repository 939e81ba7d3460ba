"""Combined reusability scoring and the metrics report value object.

The description and logic match probabilities multiply into a total match
probability; its complement is the total mismatch probability MMP_s, and the
potential reusability is the current reuse count scaled by the surviving
match probability:

    mmp_s = 1 - mp_sd * mp_sl
    r_p   = r_c * (1 - mmp_s) = r_c * mp_sd * mp_sl

All values are kept as exact fractions inside the report; decimal renderings
(4 places) appear only in the serialized forms.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime, timezone
from fractions import Fraction
from numbers import Rational

from .bpel import Activity, BpelProcess
from .errors import DomainError
from .logic import ConstructFactor, construct_factors, logic_match_probability
from .typemodel import BuiltinTypeTable, load_table
from .version import ANALYZER_VERSION
from .wsdl import (
    Operation,
    ServiceDescription,
    description_match_probability,
    parameters_match_probability,
)

# Timestamp written under --deterministic so reports compare byte-for-byte.
DETERMINISTIC_TIMESTAMP = "1970-01-01T00:00:00+00:00"


def total_mismatch_probability(mp_sd, mp_sl):
    """Total mismatch probability from the two match probabilities.

    Both inputs must lie in (0, 1]; arithmetic preserves the input types, so
    fractions stay exact and floats stay floats.
    """
    for label, value in (("mp_sd", mp_sd), ("mp_sl", mp_sl)):
        if not 0 < value <= 1:
            raise DomainError(f"{label} must be in (0, 1], got {value!r}")
    return 1 - mp_sd * mp_sl


def potential_reusability(r_c, mmp_s):
    """Potential reusability: current reuse count scaled by surviving match."""
    if isinstance(r_c, bool) or not isinstance(r_c, Rational):
        raise DomainError(f"r_c must be a non-negative integer, got {r_c!r}")
    if r_c < 0:
        raise DomainError(f"r_c must be non-negative, got {r_c}")
    if not 0 <= mmp_s <= 1:
        raise DomainError(f"mmp_s must be in [0, 1], got {mmp_s!r}")
    return r_c * (1 - mmp_s)


@dataclass(frozen=True)
class ParameterBreakdown:
    name: str
    direction: str
    type_name: str
    kind: str
    factor: Fraction
    declared_type: str = ""


@dataclass(frozen=True)
class OperationBreakdown:
    name: str
    parameter_count: int
    factor: Fraction  # (1 / parameter_count) * product of parameter factors
    parameters: tuple[ParameterBreakdown, ...]


@dataclass(frozen=True)
class MetricsReport:
    """Everything one analysis produced, including the audit trail."""

    process_name: str
    service_name: str
    bpel_source: str
    wsdl_source: str
    r_c: int
    r_c_defaulted: bool
    mp_sd: Fraction
    mmp_sd: Fraction
    mp_sl: Fraction
    mmp_sl: Fraction
    mmp_s: Fraction
    r_p: Fraction
    operations: tuple[OperationBreakdown, ...]
    factors: tuple[ConstructFactor, ...]
    exclusions: tuple[str, ...]
    notes: tuple[str, ...]
    analyzer_version: str
    timestamp: str

    def to_dict(self) -> dict:
        return {
            "analyzer_version": self.analyzer_version,
            "timestamp": self.timestamp,
            "process": {"name": self.process_name, "source": self.bpel_source},
            "description": {
                "service": self.service_name,
                "source": self.wsdl_source,
                "operations": [
                    {
                        "name": op.name,
                        "parameter_count": op.parameter_count,
                        "factor": _value_payload(op.factor),
                        "parameters": [
                            {
                                "name": p.name,
                                "direction": p.direction,
                                "type": p.type_name,
                                "declared_type": p.declared_type,
                                "kind": p.kind,
                                "factor": _value_payload(p.factor),
                            }
                            for p in op.parameters
                        ],
                    }
                    for op in self.operations
                ],
            },
            "logic": {
                "factors": [
                    {
                        "kind": cf.kind,
                        "n": cf.n,
                        "path": cf.path,
                        "formula": cf.formula,
                        "excluded": cf.excluded,
                        "factor": _value_payload(cf.factor),
                    }
                    for cf in self.factors
                ],
            },
            "metrics": {
                "mp_sd": _value_payload(self.mp_sd),
                "mmp_sd": _value_payload(self.mmp_sd),
                "mp_sl": _value_payload(self.mp_sl),
                "mmp_sl": _value_payload(self.mmp_sl),
                "mmp_s": _value_payload(self.mmp_s),
                "r_p": _value_payload(self.r_p),
            },
            "r_c": self.r_c,
            "r_c_defaulted": self.r_c_defaulted,
            "exclusions": list(self.exclusions),
            "notes": list(self.notes),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @staticmethod
    def csv_header() -> list[str]:
        return [
            "process", "service", "bpel_source", "wsdl_source", "r_c",
            "mp_sd", "mmp_sd", "mp_sl", "mmp_sl", "mmp_s", "r_p",
        ]

    def csv_row(self) -> list[str]:
        return [
            self.process_name,
            self.service_name,
            self.bpel_source,
            self.wsdl_source,
            str(self.r_c),
            *(f"{float(v):.4f}" for v in (self.mp_sd, self.mmp_sd, self.mp_sl, self.mmp_sl, self.mmp_s, self.r_p)),
        ]


def _value_payload(value: Fraction) -> dict:
    return {"exact": str(value), "decimal": round(float(value), 4)}


def _operation_breakdown(op: Operation, table: BuiltinTypeTable) -> OperationBreakdown:
    params = []
    for p in op.parameters:
        factor = table.match_probability(p.type)
        params.append(
            ParameterBreakdown(
                name=p.name,
                direction=p.direction,
                type_name=p.type.name,
                kind=p.type.kind,
                factor=factor,
                declared_type=p.declared_type,
            )
        )
    factor = Fraction(1, op.parameter_count) * parameters_match_probability(op, table)
    return OperationBreakdown(
        name=op.name, parameter_count=op.parameter_count, factor=factor, parameters=tuple(params)
    )


def analyze(
    process: BpelProcess,
    description: ServiceDescription,
    r_c: int | None = 1,
    *,
    table: BuiltinTypeTable | None = None,
    timestamp: str | None = None,
) -> MetricsReport:
    """Score one process/description bundle into a MetricsReport.

    A missing r_c (None) defaults to 1 and is annotated in the notes; the
    caller is expected to supply the real consumer count when it has one.
    """
    if table is None:
        table = load_table()

    notes = list(process.notes)
    r_c_defaulted = r_c is None
    if r_c_defaulted:
        r_c = 1
        notes.append("r_c not supplied; defaulted to 1")
    if not isinstance(r_c, int) or isinstance(r_c, bool) or r_c < 0:
        raise DomainError(f"r_c must be a non-negative integer, got {r_c!r}")

    mp_sd = description_match_probability(description, table)
    mp_sl = logic_match_probability(process)
    mmp_s = total_mismatch_probability(mp_sd, mp_sl)
    r_p = potential_reusability(r_c, mmp_s)

    factors = construct_factors(process)
    exclusions = tuple(f"{cf.path}: {cf.reason}" for cf in factors if cf.excluded)

    return MetricsReport(
        process_name=process.process_name,
        service_name=description.service_name,
        bpel_source=process.source,
        wsdl_source=description.source,
        r_c=r_c,
        r_c_defaulted=r_c_defaulted,
        mp_sd=mp_sd,
        mmp_sd=1 - mp_sd,
        mp_sl=mp_sl,
        mmp_sl=1 - mp_sl,
        mmp_s=mmp_s,
        r_p=r_p,
        operations=tuple(_operation_breakdown(op, table) for op in description.operations),
        factors=factors,
        exclusions=exclusions,
        notes=tuple(notes),
        analyzer_version=ANALYZER_VERSION,
        timestamp=timestamp if timestamp is not None else datetime.now(timezone.utc).isoformat(),
    )


def merge_processes(a: BpelProcess, b: BpelProcess) -> BpelProcess:
    """Merge two processes: the merged root runs a's activity, then b's."""
    merged_root = Activity(kind="sequence", children=(a.root, b.root))
    return BpelProcess(
        process_name=f"{a.process_name}+{b.process_name}",
        root=merged_root,
        source=f"merge({a.source},{b.source})",
        notes=tuple(dict.fromkeys(a.notes + b.notes)),
    )


def merge_descriptions(a: ServiceDescription, b: ServiceDescription) -> ServiceDescription:
    """Union of the two operation sets, keyed by operation name."""
    merged: dict[str, Operation] = {op.name: op for op in a.operations}
    for op in b.operations:
        merged.setdefault(op.name, op)
    return ServiceDescription(
        service_name=f"{a.service_name}+{b.service_name}",
        operations=tuple(merged.values()),
        source=f"merge({a.source},{b.source})",
    )


def render_text(report: MetricsReport) -> str:
    """Human-readable factor breakdown, the explainability view."""
    lines = [
        f"process   {report.process_name}  ({report.bpel_source})",
        f"service   {report.service_name}  ({report.wsdl_source})",
        "",
        "description factors",
    ]
    for op in report.operations:
        lines.append(f"  operation {op.name}  parameters={op.parameter_count}  factor={_fmt(op.factor)}")
        for p in op.parameters:
            lines.append(f"    {p.direction:<6} {p.name}: {p.type_name} -> {_fmt(p.factor)}")
    lines.append(f"  MP_SD  = {_fmt(report.mp_sd)}")
    lines.append(f"  MMP_SD = {_fmt(report.mmp_sd)}")
    lines.append("")
    lines.append("logic factors")
    if not report.factors:
        lines.append("  (no structured constructs)")
    for cf in report.factors:
        status = "  [excluded]" if cf.excluded else ""
        lines.append(f"  {cf.path}  n={cf.n}  {cf.formula} -> {_fmt(cf.factor)}{status}")
    lines.append(f"  MP_SL  = {_fmt(report.mp_sl)}")
    lines.append(f"  MMP_SL = {_fmt(report.mmp_sl)}")
    lines.append("")
    lines.append(f"MMP_s = {_fmt(report.mmp_s)}")
    lines.append(f"R_p   = {_fmt(report.r_p)}  (r_c = {report.r_c})")
    for note in report.notes:
        lines.append(f"note: {note}")
    for exc in report.exclusions:
        lines.append(f"excluded: {exc}")
    return "\n".join(lines) + "\n"


def _fmt(value: Fraction) -> str:
    return f"{value} = {float(value):.4f}" if value.denominator != 1 else f"{value}"
