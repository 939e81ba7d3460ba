"""BPEL process parsing into a recursive activity tree.

Both the 1.1 (BPEL4WS 2003/03) and the 2.0 executable dialects are read.
Dialect differences are normalized at parse time: <if>/<elseif>/<else>
becomes a switch whose case count is 1 + the number of elseif branches,
<repeatUntil> becomes a while, <exit> becomes terminate, and <scope> is
transparent (its wrapped activity takes its place in the tree). Activities
inside fault, compensation, termination, and event handlers are not part of
the scored control flow; their omission is recorded in the process notes.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass

from ._xml import local_name, namespace_of, parse_document
from .errors import BpelError

BPEL11_NS = "http://schemas.xmlsoap.org/ws/2003/03/business-process/"
BPEL20_NS = "http://docs.oasis-open.org/wsbpel/2.0/process/executable"

BASIC_KINDS = frozenset(
    {"invoke", "receive", "reply", "assign", "wait", "empty", "throw", "terminate", "opaque"}
)
STRUCTURED_KINDS = frozenset({"sequence", "flow", "switch", "pick", "while"})

# Infrastructure elements that may appear where activities do; never scored.
_SILENT_SKIP = frozenset(
    {
        "documentation", "targets", "sources", "correlations", "correlationSets",
        "variables", "containers", "partnerLinks", "partners", "import",
        "extensions", "messageExchanges", "links", "condition", "joinCondition",
    }
)
# Handler containers: skipped wholesale, but the report should say so.
_HANDLER_SKIP = frozenset(
    {
        "faultHandlers", "compensationHandlers", "compensationHandler",
        "eventHandlers", "terminationHandler", "catch", "catchAll",
    }
)

_BASIC_ALIASES = {"exit": "terminate"}


@dataclass(frozen=True)
class Activity:
    """One node of the activity tree.

    Basic activities have no children. Structured activities carry the
    attributes their match formulas need: case/event counts for switch and
    pick, the link flag for flow, and the synchronous flag for invoke (set
    when the call has both an input and an output variable).
    """

    kind: str
    children: tuple["Activity", ...] = ()
    case_count: int = 0
    has_otherwise: bool = False
    event_count: int = 0
    has_links: bool = False
    synchronous: bool = False
    operation: str = ""
    element_name: str = ""

    def __post_init__(self):
        if self.kind in BASIC_KINDS and self.children:
            raise ValueError(f"basic activity {self.kind!r} cannot have children")
        if self.kind in STRUCTURED_KINDS and not self.children:
            raise ValueError(f"structured activity {self.kind!r} needs at least one child")
        if self.kind not in BASIC_KINDS and self.kind not in STRUCTURED_KINDS:
            raise ValueError(f"unknown activity kind: {self.kind!r}")

    def summary(self) -> str:
        """Canonical one-line rendering of the subtree, stable per document."""
        if self.kind in BASIC_KINDS:
            return self.element_name or self.kind
        details = []
        if self.kind == "switch":
            details.append(f"cases={self.case_count}")
            if self.has_otherwise:
                details.append("otherwise")
        elif self.kind == "pick":
            details.append(f"events={self.event_count}")
        elif self.kind == "flow" and self.has_links:
            details.append("links")
        inner = ", ".join(c.summary() for c in self.children)
        detail_text = f"[{','.join(details)}]" if details else ""
        return f"{self.kind}{detail_text}({inner})"


@dataclass(frozen=True)
class BpelProcess:
    process_name: str
    root: Activity
    source: str = "<bpel>"
    linked_wsdl: str = ""
    notes: tuple[str, ...] = ()

    def summary(self) -> str:
        return self.root.summary()


@dataclass(frozen=True)
class ConstructInfo:
    """A structured construct found by the depth-first enumeration."""

    kind: str
    n: int
    path: str
    has_links: bool = False
    excluded: bool = False
    reason: str = ""


# ---------------------------------------------------------------------------
# parsing


class _Parser:
    def __init__(self, process_ns: str, source: str):
        self.ns = process_ns
        self.source = source
        self.notes: list[str] = []

    def note(self, text: str) -> None:
        if text not in self.notes:
            self.notes.append(text)

    def activities(self, parent: ET.Element) -> list[Activity]:
        """Parse every activity child of `parent`, flattening scopes."""
        out: list[Activity] = []
        for child in parent:
            tag = local_name(child.tag)
            if tag in _SILENT_SKIP:
                continue
            if tag in _HANDLER_SKIP:
                self.note(f"<{tag}> content is not part of the scored control flow")
                continue
            if namespace_of(child.tag) != self.ns:
                self.note(f"unknown element <{tag}> treated as an opaque basic activity")
                out.append(Activity(kind="opaque", element_name=tag))
                continue
            out.extend(self.activity(child))
        return out

    def activity(self, elem: ET.Element) -> list[Activity]:
        tag = local_name(elem.tag)
        tag = _BASIC_ALIASES.get(tag, tag)

        if tag == "invoke":
            has_input = bool(elem.get("inputVariable") or elem.get("inputContainer"))
            has_output = bool(elem.get("outputVariable") or elem.get("outputContainer"))
            return [Activity(kind="invoke", synchronous=has_input and has_output,
                             operation=elem.get("operation", ""))]
        if tag in ("receive", "reply"):
            return [Activity(kind=tag, operation=elem.get("operation", ""))]
        if tag in BASIC_KINDS:
            return [Activity(kind=tag)]

        if tag == "sequence":
            children = self.activities(elem)
            if not children:
                raise BpelError(f"{self.source}: <sequence> with no activities")
            return [Activity(kind="sequence", children=tuple(children))]

        if tag == "flow":
            links = [c for c in elem if local_name(c.tag) == "links"]
            has_links = any(local_name(l.tag) == "link" for lks in links for l in lks)
            children = self.activities(elem)
            if not children:
                raise BpelError(f"{self.source}: <flow> with no activities")
            return [Activity(kind="flow", children=tuple(children), has_links=has_links)]

        if tag == "switch":
            return [self._switch(elem)]
        if tag == "if":
            return [self._if(elem)]
        if tag == "pick":
            return [self._pick(elem)]
        if tag in ("while", "repeatUntil"):
            children = self.activities(elem)
            if not children:
                raise BpelError(f"{self.source}: <{tag}> with no body activity")
            return [Activity(kind="while", children=tuple(children))]

        if tag == "scope":
            # Transparent: the wrapped activity stands in for the scope.
            children = self.activities(elem)
            if not children:
                raise BpelError(f"{self.source}: <scope> with no activity")
            return children

        self.note(f"unknown element <{tag}> treated as an opaque basic activity")
        return [Activity(kind="opaque", element_name=tag)]

    def _switch(self, elem: ET.Element) -> Activity:
        cases = 0
        has_otherwise = False
        children: list[Activity] = []
        for branch in elem:
            tag = local_name(branch.tag)
            if tag == "case":
                cases += 1
                children.extend(self.activities(branch))
            elif tag == "otherwise":
                has_otherwise = True
                children.extend(self.activities(branch))
        if cases < 1:
            raise BpelError(f"{self.source}: <switch> with no <case> branch")
        if not children:
            raise BpelError(f"{self.source}: <switch> branches contain no activities")
        return Activity(kind="switch", children=tuple(children), case_count=cases, has_otherwise=has_otherwise)

    def _if(self, elem: ET.Element) -> Activity:
        # 2.0 conditional: the if body plus each elseif is one condition.
        cases = 1
        has_otherwise = False
        children: list[Activity] = list(self.activities(elem))
        for branch in elem:
            tag = local_name(branch.tag)
            if tag == "elseif":
                cases += 1
                children.extend(self.activities(branch))
            elif tag == "else":
                has_otherwise = True
                children.extend(self.activities(branch))
        if not children:
            raise BpelError(f"{self.source}: <if> with no activity")
        return Activity(kind="switch", children=tuple(children), case_count=cases, has_otherwise=has_otherwise)

    def _pick(self, elem: ET.Element) -> Activity:
        events = 0
        children: list[Activity] = []
        for branch in elem:
            tag = local_name(branch.tag)
            if tag in ("onMessage", "onAlarm"):
                events += 1
                children.extend(self.activities(branch))
        if events < 1:
            raise BpelError(f"{self.source}: <pick> with no onMessage/onAlarm branch")
        if not children:
            raise BpelError(f"{self.source}: <pick> branches contain no activities")
        return Activity(kind="pick", children=tuple(children), event_count=events)


def parse_bpel(xml_text: str, *, source: str = "<bpel>") -> BpelProcess:
    """Parse a BPEL document into a BpelProcess.

    Unknown elements in activity position become opaque basic activities and
    are recorded in the notes rather than failing the parse; structural
    defects (a structured construct with nothing inside it, a non-process
    root) do fail.
    """
    root, _ = parse_document(xml_text, source)
    if local_name(root.tag) != "process":
        raise BpelError(f"{source}: root element is <{local_name(root.tag)}>, expected <process>")
    ns = namespace_of(root.tag)
    parser = _Parser(ns, source)
    if ns not in (BPEL11_NS, BPEL20_NS):
        parser.note(f"unrecognized process namespace {ns!r}; elements interpreted by local name")

    linked_wsdl = ""
    for child in root.iter():
        if local_name(child.tag) == "import":
            location = child.get("location", "")
            if location.endswith(".wsdl") or "wsdl" in child.get("importType", ""):
                linked_wsdl = location
                break

    activities = parser.activities(root)
    if not activities:
        raise BpelError(f"{source}: process has no activity")
    if len(activities) == 1:
        root_activity = activities[0]
    else:
        parser.note("multiple top-level activities wrapped in an implicit sequence")
        root_activity = Activity(kind="sequence", children=tuple(activities))

    return BpelProcess(
        process_name=root.get("name") or "process",
        root=root_activity,
        source=source,
        linked_wsdl=linked_wsdl,
        notes=tuple(parser.notes),
    )


def load_bpel(path) -> BpelProcess:
    """Read and parse a BPEL file."""
    with open(path, encoding="utf-8") as fh:
        return parse_bpel(fh.read(), source=str(path))


# ---------------------------------------------------------------------------
# construct enumeration


def _is_invocation_scaffold(activity: Activity) -> bool:
    """A sequence that exists only to perform one call of the process's own
    operation: all children basic, with exactly one synchronous invoke or
    exactly one receive/reply pair for the same operation."""
    if any(c.kind in STRUCTURED_KINDS for c in activity.children):
        return False
    sync_invokes = [c for c in activity.children if c.kind == "invoke" and c.synchronous]
    if len(sync_invokes) == 1:
        return True
    receives = [c for c in activity.children if c.kind == "receive"]
    replies = [c for c in activity.children if c.kind == "reply"]
    return len(receives) == 1 and len(replies) == 1 and receives[0].operation == replies[0].operation


def _effective_n(activity: Activity) -> int:
    if activity.kind == "switch":
        return activity.case_count
    if activity.kind == "pick":
        return activity.event_count
    if activity.kind == "while":
        return 1
    return len(activity.children)


def structured_constructs(process: BpelProcess) -> tuple[ConstructInfo, ...]:
    """Depth-first (pre-order) enumeration of every structured construct.

    Each construct reports its effective branching count n: immediate child
    count for sequence and flow, case count for switch, event count for pick,
    and 1 for while. Invocation-scaffold sequences are returned flagged
    excluded so callers can audit them; they never enter the logic product.
    """
    out: list[ConstructInfo] = []

    def walk(activity: Activity, path: str) -> None:
        if activity.kind in STRUCTURED_KINDS:
            excluded = False
            reason = ""
            if activity.kind == "sequence" and _is_invocation_scaffold(activity):
                excluded = True
                reason = "invocation scaffold: wraps a single synchronous operation call"
            out.append(
                ConstructInfo(
                    kind=activity.kind,
                    n=_effective_n(activity),
                    path=path,
                    has_links=activity.has_links,
                    excluded=excluded,
                    reason=reason,
                )
            )
        for i, child in enumerate(activity.children, start=1):
            walk(child, f"{path}/{child.kind}[{i}]")

    walk(process.root, f"/{process.root.kind}[1]")
    return tuple(out)


__all__ = [
    "Activity",
    "BpelProcess",
    "ConstructInfo",
    "BASIC_KINDS",
    "STRUCTURED_KINDS",
    "parse_bpel",
    "load_bpel",
    "structured_constructs",
]
