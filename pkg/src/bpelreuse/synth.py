"""Synthetic process/description generation for tests, demos, and benchmarks.

Two layers: model-level random generators (fast, no XML) for property
checks, and bundle writers that render parameterized processes to real
BPEL/WSDL documents so the full parse-and-score pipeline can be exercised
on a corpus of known shape.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path

from .bpel import BpelProcess, Activity
from .typemodel import BuiltinTypeTable, TypeRef, structural_name
from .wsdl import Operation, Parameter, ServiceDescription

BPEL11_NS = "http://schemas.xmlsoap.org/ws/2003/03/business-process/"

_BASIC_KINDS = ("receive", "reply", "assign", "invoke", "empty", "wait")
_STRUCTURED_KINDS = ("sequence", "flow", "switch", "pick", "while")


# ---------------------------------------------------------------------------
# model-level generators


def random_type_ref(rng: random.Random, table: BuiltinTypeTable, max_depth: int = 2) -> TypeRef:
    names = sorted(table.entries)
    if max_depth <= 0 or rng.random() < 0.6:
        return TypeRef.simple(rng.choice(names))
    compositor = rng.choice(("sequence", "choice", "all"))
    children = tuple(random_type_ref(rng, table, max_depth - 1) for _ in range(rng.randint(1, 3)))
    return TypeRef.complex(structural_name(compositor, children), compositor, children)


def random_operation(rng: random.Random, table: BuiltinTypeTable, name: str) -> Operation:
    params = []
    for i in range(rng.randint(1, 4)):
        direction = "input" if i == 0 or rng.random() < 0.5 else "output"
        params.append(
            Parameter(name=f"p{i}", type=random_type_ref(rng, table), direction=direction)
        )
    return Operation(name=name, parameters=tuple(params))


def random_description(rng: random.Random, table: BuiltinTypeTable, name_pool: int = 8) -> ServiceDescription:
    count = rng.randint(1, 4)
    names = rng.sample([f"op{i}" for i in range(name_pool)], count)
    return ServiceDescription(
        service_name="synthetic",
        operations=tuple(random_operation(rng, table, n) for n in sorted(names)),
        source="<synthetic>",
    )


def random_basic(rng: random.Random) -> Activity:
    kind = rng.choice(_BASIC_KINDS)
    if kind == "invoke":
        return Activity(kind="invoke", synchronous=rng.random() < 0.5, operation="call")
    if kind in ("receive", "reply"):
        return Activity(kind=kind, operation=rng.choice(("main", "aux")))
    return Activity(kind=kind)


def random_activity(rng: random.Random, max_depth: int = 3) -> Activity:
    if max_depth <= 0 or rng.random() < 0.4:
        return random_basic(rng)
    kind = rng.choice(_STRUCTURED_KINDS)
    if kind == "while":
        children = (random_activity(rng, max_depth - 1),)
        return Activity(kind="while", children=children)
    children = tuple(random_activity(rng, max_depth - 1) for _ in range(rng.randint(1, 3)))
    if kind == "switch":
        return Activity(
            kind="switch",
            children=children,
            case_count=rng.randint(1, 3),
            has_otherwise=rng.random() < 0.3,
        )
    if kind == "pick":
        return Activity(kind="pick", children=children, event_count=rng.randint(1, 3))
    if kind == "flow":
        return Activity(kind="flow", children=children, has_links=rng.random() < 0.5)
    return Activity(kind="sequence", children=children)


def random_process(rng: random.Random, name: str = "synthetic") -> BpelProcess:
    return BpelProcess(process_name=name, root=random_activity(rng), source="<synthetic>")


# ---------------------------------------------------------------------------
# XML rendering


def render_wsdl(sd: ServiceDescription) -> str:
    """Render a ServiceDescription as a WSDL 1.1 document.

    Complex parameter types become named complexTypes; their complex
    children are emitted as inline anonymous types.
    """
    ns = f"urn:bpelreuse:{sd.service_name}"
    type_defs: list[str] = []
    messages: list[str] = []
    operations: list[str] = []

    for op in sd.operations:
        inputs = [p for p in op.parameters if p.direction == "input"]
        outputs = [p for p in op.parameters if p.direction == "output"]
        io_lines = []
        for label, params in (("Request", inputs), ("Response", outputs)):
            if not params:
                continue
            parts = []
            for p in params:
                if p.type.kind == "builtin-simple":
                    parts.append(f'    <part name="{p.name}" type="xsd:{p.type.name}"/>')
                else:
                    ct_name = f"CT_{op.name}_{p.name}"
                    type_defs.append(_render_complex_type(p.type, ct_name))
                    parts.append(f'    <part name="{p.name}" type="tns:{ct_name}"/>')
            messages.append(f'  <message name="{op.name}{label}">\n' + "\n".join(parts) + "\n  </message>")
            tag = "input" if label == "Request" else "output"
            io_lines.append(f'      <{tag} message="tns:{op.name}{label}"/>')
        operations.append(f'    <operation name="{op.name}">\n' + "\n".join(io_lines) + "\n    </operation>")

    schema = ""
    if type_defs:
        schema = (
            f'    <xsd:schema targetNamespace="{ns}">\n'
            + "\n".join(type_defs)
            + "\n    </xsd:schema>\n"
        )
    return (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<definitions name="{sd.service_name}"\n'
        f'    targetNamespace="{ns}"\n'
        '    xmlns="http://schemas.xmlsoap.org/wsdl/"\n'
        f'    xmlns:tns="{ns}"\n'
        '    xmlns:xsd="http://www.w3.org/2001/XMLSchema">\n'
        "  <types>\n" + schema + "  </types>\n"
        + "\n".join(messages)
        + f'\n  <portType name="{sd.service_name}PT">\n'
        + "\n".join(operations)
        + "\n  </portType>\n</definitions>\n"
    )


def _render_complex_type(t: TypeRef, name: str, indent: str = "      ") -> str:
    body = _render_compositor(t, indent + "  ")
    return f'{indent}<xsd:complexType name="{name}">\n{body}\n{indent}</xsd:complexType>'


def _render_compositor(t: TypeRef, indent: str) -> str:
    lines = [f"{indent}<xsd:{t.compositor}>"]
    for i, child in enumerate(t.children):
        if child.kind == "builtin-simple":
            lines.append(f'{indent}  <xsd:element name="f{i}" type="xsd:{child.name}"/>')
        else:
            lines.append(f'{indent}  <xsd:element name="f{i}">')
            lines.append(f"{indent}    <xsd:complexType>")
            lines.append(_render_compositor(child, indent + "      "))
            lines.append(f"{indent}    </xsd:complexType>")
            lines.append(f"{indent}  </xsd:element>")
    lines.append(f"{indent}</xsd:{t.compositor}>")
    return "\n".join(lines)


def render_bpel(process: BpelProcess) -> str:
    """Render an activity tree as a BPEL 1.1 document.

    Switch and pick nodes must have exactly one child per branch (case,
    otherwise, or event); generator output satisfies this by construction.
    """
    body = _render_activity(process.root, "  ")
    return (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<process name="{process.process_name}" xmlns="{BPEL11_NS}">\n'
        f"{body}\n</process>\n"
    )


def _render_activity(a: Activity, indent: str) -> str:
    if a.kind == "invoke":
        attrs = ' inputVariable="req"' + (' outputVariable="resp"' if a.synchronous else "")
        op = f' operation="{a.operation}"' if a.operation else ""
        return f"{indent}<invoke{op}{attrs}/>"
    if a.kind in ("receive", "reply"):
        op = f' operation="{a.operation}"' if a.operation else ""
        return f"{indent}<{a.kind}{op}/>"
    if a.kind == "opaque":
        return f"{indent}<{a.element_name or 'undocumented'} xmlns=\"urn:opaque\"/>"
    if a.kind in ("assign", "wait", "empty", "throw", "terminate"):
        return f"{indent}<{a.kind}/>"

    if a.kind in ("sequence", "flow"):
        inner = "\n".join(_render_activity(c, indent + "  ") for c in a.children)
        links = ""
        if a.kind == "flow" and a.has_links:
            links = f'{indent}  <links>\n{indent}    <link name="l1"/>\n{indent}  </links>\n'
        return f"{indent}<{a.kind}>\n{links}{inner}\n{indent}</{a.kind}>"
    if a.kind == "switch":
        expected = a.case_count + (1 if a.has_otherwise else 0)
        if len(a.children) != expected:
            raise ValueError("switch rendering needs one child per branch")
        parts = []
        for i, child in enumerate(a.children):
            if i < a.case_count:
                parts.append(
                    f'{indent}  <case condition="cond{i}()">\n'
                    + _render_activity(child, indent + "    ")
                    + f"\n{indent}  </case>"
                )
            else:
                parts.append(
                    f"{indent}  <otherwise>\n"
                    + _render_activity(child, indent + "    ")
                    + f"\n{indent}  </otherwise>"
                )
        return f"{indent}<switch>\n" + "\n".join(parts) + f"\n{indent}</switch>"
    if a.kind == "pick":
        if len(a.children) != a.event_count:
            raise ValueError("pick rendering needs one child per event")
        parts = []
        for i, child in enumerate(a.children):
            tag = "onMessage" if i == 0 else "onAlarm"
            attr = f' operation="ev{i}"' if tag == "onMessage" else ' for="PT1H"'
            parts.append(
                f"{indent}  <{tag}{attr}>\n" + _render_activity(child, indent + "    ") + f"\n{indent}  </{tag}>"
            )
        return f"{indent}<pick>\n" + "\n".join(parts) + f"\n{indent}</pick>"
    if a.kind == "while":
        inner = "\n".join(_render_activity(c, indent + "  ") for c in a.children)
        return f'{indent}<while condition="loop()">\n{inner}\n{indent}</while>'
    raise ValueError(f"cannot render activity kind {a.kind!r}")


# ---------------------------------------------------------------------------
# corpus generation


@dataclass(frozen=True)
class BundleShape:
    """What one generated bundle contains, enough to recompute its metrics."""

    process_id: str
    shape: str  # trivial | mid | low
    switch_count: int = 0  # low shape only; each switch has two cases


def _trivial_bundle(process_id: str) -> tuple[BpelProcess, ServiceDescription]:
    process = BpelProcess(
        process_name=process_id,
        root=Activity(kind="receive", operation="run"),
        source="<generated>",
    )
    sd = ServiceDescription(
        service_name=process_id,
        operations=(Operation(name="run", parameters=(Parameter("payload", TypeRef.simple("string"), "input"),)),),
        source="<generated>",
    )
    return process, sd


def _mid_bundle(process_id: str) -> tuple[BpelProcess, ServiceDescription]:
    root = Activity(
        kind="sequence",
        children=(Activity(kind="receive", operation="run"), Activity(kind="assign")),
    )
    process = BpelProcess(process_name=process_id, root=root, source="<generated>")
    sd = ServiceDescription(
        service_name=process_id,
        operations=(Operation(name="run", parameters=(Parameter("payload", TypeRef.simple("string"), "input"),)),),
        source="<generated>",
    )
    return process, sd


def _low_bundle(process_id: str, switch_count: int) -> tuple[BpelProcess, ServiceDescription]:
    switches = tuple(
        Activity(
            kind="switch",
            case_count=2,
            children=(
                Activity(kind="invoke", operation="stepA", synchronous=False),
                Activity(kind="invoke", operation="stepB", synchronous=False),
            ),
        )
        for _ in range(switch_count)
    )
    root = Activity(
        kind="sequence",
        children=(
            Activity(kind="receive", operation="run"),
            *switches,
            Activity(kind="assign"),
            Activity(kind="reply", operation="run"),
        ),
    )
    process = BpelProcess(process_name=process_id, root=root, source="<generated>")

    note_type = TypeRef.complex(
        "NoteType",
        "sequence",
        (TypeRef.simple("string"), TypeRef.simple("string"), TypeRef.simple("string")),
    )
    sd = ServiceDescription(
        service_name=process_id,
        operations=(
            Operation(
                name="run",
                parameters=(
                    Parameter("request", TypeRef.simple("string"), "input"),
                    Parameter("note", note_type, "output"),
                ),
            ),
        ),
        source="<generated>",
    )
    return process, sd


def write_corpus(
    directory,
    *,
    trivial: int = 30,
    mid: int = 5,
    low: int = 35,
    seed: int = 11,
) -> list[BundleShape]:
    """Write a synthetic corpus of BPEL/WSDL bundles plus a manifest.

    Shapes are interleaved pseudo-randomly but reproducibly for the given
    seed; the returned shape list is everything needed to recompute each
    bundle's expected metrics without parsing the files.
    """
    rng = random.Random(seed)
    shapes = ["trivial"] * trivial + ["mid"] * mid + ["low"] * low
    rng.shuffle(shapes)

    root = Path(directory)
    root.mkdir(parents=True, exist_ok=True)
    manifest_lines = ["process_id\tbpel\twsdl\tr_c"]
    out: list[BundleShape] = []
    for i, shape in enumerate(shapes):
        process_id = f"proc{i:03d}"
        if shape == "trivial":
            process, sd = _trivial_bundle(process_id)
            switch_count = 0
        elif shape == "mid":
            process, sd = _mid_bundle(process_id)
            switch_count = 0
        else:
            switch_count = rng.randint(2, 4)
            process, sd = _low_bundle(process_id, switch_count)
        (root / f"{process_id}.bpel").write_text(render_bpel(process), encoding="utf-8")
        (root / f"{process_id}.wsdl").write_text(render_wsdl(sd), encoding="utf-8")
        manifest_lines.append(f"{process_id}\t{process_id}.bpel\t{process_id}.wsdl\t1")
        out.append(BundleShape(process_id=process_id, shape=shape, switch_count=switch_count))
    (root / "manifest.tsv").write_text("\n".join(manifest_lines) + "\n", encoding="utf-8")
    return out
