"""WSDL 1.1 parsing and interface match/mismatch probabilities.

A service description is scored per operation: with l_k typed parameters
(inputs plus outputs) whose individual match probabilities multiply to
MP_params, the operation contributes (1 / l_k) * MP_params, and the service
description match probability is the product over all m operations. The
mismatch probability is its complement.

Only the process's exposed interface is read: <types>, <message>, and
<portType>. Bindings, services/ports, and partner WSDLs are out of scope.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass
from fractions import Fraction

from ._xml import local_name, namespace_of, parse_document, split_qname
from .errors import TypeCycleError, UnknownTypeError, UnresolvedMessageError, UnresolvedTypeError, WsdlError
from .typemodel import (
    BUILTIN_SIMPLE,
    COMPOSITORS,
    BuiltinTypeTable,
    TypeRef,
    load_table,
    structural_name,
)

WSDL_NS = "http://schemas.xmlsoap.org/wsdl/"
XSD_NS = "http://www.w3.org/2001/XMLSchema"

# Castable-to-anything placeholders; scored as string (weight 44).
_ANY_TYPES = frozenset({"anyType", "anySimpleType"})

INPUT = "input"
OUTPUT = "output"


@dataclass(frozen=True)
class Parameter:
    name: str
    type: TypeRef
    direction: str  # input | output
    declared_type: str = ""  # QName text as written in the document


@dataclass(frozen=True)
class Operation:
    name: str
    parameters: tuple[Parameter, ...]

    @property
    def parameter_count(self) -> int:
        return len(self.parameters)


@dataclass(frozen=True)
class ServiceDescription:
    service_name: str
    operations: tuple[Operation, ...]
    source: str = "<wsdl>"

    @property
    def operation_count(self) -> int:
        return len(self.operations)


# ---------------------------------------------------------------------------
# parsing


class _SchemaIndex:
    """Named schema components collected from the inline <types> schemas."""

    def __init__(self) -> None:
        self.complex_types: dict[str, ET.Element] = {}
        self.simple_types: dict[str, ET.Element] = {}
        self.elements: dict[str, ET.Element] = {}

    def add_schema(self, schema: ET.Element) -> None:
        for child in schema:
            name = child.get("name")
            if not name:
                continue
            tag = local_name(child.tag)
            if tag == "complexType":
                self.complex_types[name] = child
            elif tag == "simpleType":
                self.simple_types[name] = child
            elif tag == "element":
                self.elements[name] = child


class _TypeResolver:
    """Resolves QNames and schema fragments to TypeRefs, detecting cycles."""

    def __init__(self, index: _SchemaIndex, prefixes: dict[str, str], table: BuiltinTypeTable):
        self.index = index
        self.prefixes = prefixes
        self.table = table
        self._stack: list[str] = []

    def resolve_qname(self, qname: str, context: str) -> TypeRef:
        prefix, local = split_qname(qname)
        uri = self.prefixes.get(prefix)
        if uri == XSD_NS:
            return self._builtin(local, context)
        if local in self.index.complex_types:
            return self._named_complex(local)
        if local in self.index.simple_types:
            return self._user_simple(local, context)
        if local in self.table or local in _ANY_TYPES:
            # Undeclared prefix but a recognizable built-in name.
            return self._builtin(local, context)
        raise UnresolvedTypeError(f"{context}: type {qname!r} is not declared in <types> and is not a built-in")

    def _builtin(self, name: str, context: str) -> TypeRef:
        if name in _ANY_TYPES:
            return TypeRef.simple("string")
        if name not in self.table:
            raise UnknownTypeError(name, context)
        return TypeRef.simple(name)

    def _named_complex(self, name: str) -> TypeRef:
        if name in self._stack:
            chain = " -> ".join(self._stack + [name])
            raise TypeCycleError(f"recursive type definition: {chain}")
        self._stack.append(name)
        try:
            node = self.index.complex_types[name]
            compositor, children = self._walk_complex(node, f"complexType {name!r}")
            return TypeRef.complex(name, compositor, children)
        finally:
            self._stack.pop()

    def _user_simple(self, name: str, context: str) -> TypeRef:
        """A user simpleType inherits the weight of the built-in it restricts."""
        if name in self._stack:
            chain = " -> ".join(self._stack + [name])
            raise TypeCycleError(f"recursive type definition: {chain}")
        self._stack.append(name)
        try:
            node = self.index.simple_types[name]
            return self._simple_content(node, f"simpleType {name!r}")
        finally:
            self._stack.pop()

    def _simple_content(self, node: ET.Element, context: str) -> TypeRef:
        for child in node:
            tag = local_name(child.tag)
            if tag == "restriction":
                base = child.get("base")
                if not base:
                    raise UnresolvedTypeError(f"{context}: restriction without a base type")
                return self.resolve_qname(base, context)
            if tag == "list":
                item = child.get("itemType")
                if not item:
                    raise UnresolvedTypeError(f"{context}: list without an itemType")
                return self.resolve_qname(item, context)
            if tag == "union":
                members = (child.get("memberTypes") or "").split()
                if not members:
                    raise UnresolvedTypeError(f"{context}: union without memberTypes")
                resolved = [self.resolve_qname(m, context) for m in members]
                # A union value may come from any member; score with the most
                # broadly castable one.
                return max(
                    resolved,
                    key=lambda t: self.table.coverage_weight(t.name) if t.kind == BUILTIN_SIMPLE else -1,
                )
        raise UnresolvedTypeError(f"{context}: simpleType without restriction/list/union content")

    def _walk_complex(self, node: ET.Element, context: str) -> tuple[str, tuple[TypeRef, ...]]:
        for child in node:
            tag = local_name(child.tag)
            if tag in COMPOSITORS:
                children = self._compositor_children(child, context)
                if not children:
                    raise WsdlError(f"{context}: empty <{tag}> compositor cannot be scored")
                return tag, children
        raise UnresolvedTypeError(f"{context}: complex type without a sequence/choice/all compositor")

    def _compositor_children(self, compositor: ET.Element, context: str) -> tuple[TypeRef, ...]:
        out: list[TypeRef] = []
        for child in compositor:
            tag = local_name(child.tag)
            if tag == "element":
                out.append(self._element_type(child, context))
            elif tag in COMPOSITORS:
                nested_children = self._compositor_children(child, context)
                if not nested_children:
                    raise WsdlError(f"{context}: empty nested <{tag}> compositor")
                out.append(TypeRef.complex(structural_name(tag, nested_children), tag, nested_children))
            # annotations and attribute declarations do not contribute parameters
        return tuple(out)

    def _element_type(self, element: ET.Element, context: str) -> TypeRef:
        declared = element.get("type")
        if declared:
            return self.resolve_qname(declared, context)
        ref = element.get("ref")
        if ref:
            _, local = split_qname(ref)
            target = self.index.elements.get(local)
            if target is None:
                raise UnresolvedTypeError(f"{context}: element ref {ref!r} has no global declaration")
            return self._element_type(target, f"element {local!r}")
        for child in element:
            tag = local_name(child.tag)
            if tag == "complexType":
                compositor, children = self._walk_complex(child, context)
                return TypeRef.complex(structural_name(compositor, children), compositor, children)
            if tag == "simpleType":
                return self._simple_content(child, context)
        # untyped element: maximally castable, score as string
        return TypeRef.simple("string")

    def resolve_part(self, part: ET.Element, context: str) -> TypeRef:
        declared = part.get("type")
        if declared:
            return self.resolve_qname(declared, context)
        element = part.get("element")
        if element:
            _, local = split_qname(element)
            target = self.index.elements.get(local)
            if target is None:
                raise UnresolvedTypeError(f"{context}: element {element!r} is not declared in <types>")
            return self._element_type(target, f"element {local!r}")
        # untyped part: maximally castable, score as string
        return TypeRef.simple("string")


def parse_wsdl(xml_text: str, *, source: str = "<wsdl>", table: BuiltinTypeTable | None = None) -> ServiceDescription:
    """Parse a WSDL 1.1 document into a resolved ServiceDescription.

    Every portType operation becomes one Operation; its input message parts
    become input parameters and its output message parts output parameters.
    Fault messages are ignored. All part types are resolved eagerly so that
    type problems surface here, not at scoring time.
    """
    if table is None:
        table = load_table()
    root, prefixes = parse_document(xml_text, source)
    if local_name(root.tag) != "definitions":
        raise WsdlError(f"{source}: root element is <{local_name(root.tag)}>, expected <definitions>")
    if namespace_of(root.tag) != WSDL_NS:
        raise WsdlError(f"{source}: not a WSDL 1.1 document (namespace {namespace_of(root.tag)!r})")

    index = _SchemaIndex()
    messages: dict[str, ET.Element] = {}
    port_types: list[ET.Element] = []
    for child in root:
        tag = local_name(child.tag)
        if tag == "types":
            for schema in child:
                if local_name(schema.tag) == "schema":
                    index.add_schema(schema)
        elif tag == "message":
            name = child.get("name")
            if name:
                messages[name] = child
        elif tag == "portType":
            port_types.append(child)

    resolver = _TypeResolver(index, prefixes, table)
    operations: list[Operation] = []
    seen_names: set[str] = set()
    for port_type in port_types:
        pt_name = port_type.get("name", "portType")
        for op_elem in port_type:
            if local_name(op_elem.tag) != "operation":
                continue
            op_name = op_elem.get("name", "operation")
            if op_name in seen_names:
                op_name = f"{pt_name}/{op_name}"
            seen_names.add(op_name)
            params: list[Parameter] = []
            for io_elem in op_elem:
                tag = local_name(io_elem.tag)
                if tag == INPUT:
                    params.extend(_message_parameters(io_elem, messages, resolver, op_name, INPUT))
                elif tag == OUTPUT:
                    params.extend(_message_parameters(io_elem, messages, resolver, op_name, OUTPUT))
                # faults carry no reusable payload contract; skipped
            if not params:
                raise WsdlError(f"{source}: operation {op_name!r} has no typed parameters to score")
            operations.append(Operation(name=op_name, parameters=tuple(params)))

    if not operations:
        raise WsdlError(f"{source}: no portType operations found")

    service_name = root.get("name") or (port_types[0].get("name") if port_types else None) or "service"
    return ServiceDescription(service_name=service_name, operations=tuple(operations), source=source)


def _message_parameters(io_elem, messages, resolver, op_name, direction):
    qname = io_elem.get("message")
    if not qname:
        raise UnresolvedMessageError(f"operation {op_name!r}: <{direction}> without a message attribute")
    _, local = split_qname(qname)
    message = messages.get(local)
    if message is None:
        raise UnresolvedMessageError(f"operation {op_name!r}: message {qname!r} is not defined")
    params = []
    for part in message:
        if local_name(part.tag) != "part":
            continue
        part_name = part.get("name", "part")
        context = f"operation {op_name!r} part {part_name!r}"
        type_ref = resolver.resolve_part(part, context)
        declared = part.get("type") or part.get("element") or ""
        params.append(Parameter(name=part_name, type=type_ref, direction=direction, declared_type=declared))
    return params


def load_wsdl(path, *, table: BuiltinTypeTable | None = None) -> ServiceDescription:
    """Read and parse a WSDL file."""
    with open(path, encoding="utf-8") as fh:
        return parse_wsdl(fh.read(), source=str(path), table=table)


# ---------------------------------------------------------------------------
# metrics


def parameters_match_probability(op: Operation, table: BuiltinTypeTable) -> Fraction:
    """Product of the per-parameter type match probabilities of one operation."""
    product = Fraction(1)
    for param in op.parameters:
        product *= table.match_probability(param.type)
    return product


def description_match_probability(sd: ServiceDescription, table: BuiltinTypeTable) -> Fraction:
    """Product over operations of (1 / parameter_count) * parameter factors."""
    product = Fraction(1)
    for op in sd.operations:
        product *= Fraction(1, op.parameter_count) * parameters_match_probability(op, table)
    return product


def description_mismatch_probability(sd: ServiceDescription, table: BuiltinTypeTable) -> Fraction:
    """Complement of the description match probability."""
    return 1 - description_match_probability(sd, table)
