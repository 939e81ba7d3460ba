"""Internal XML helpers shared by the WSDL and BPEL parsers."""

from __future__ import annotations

import io
import xml.etree.ElementTree as ET

from .errors import MalformedXmlError


def parse_document(text: str, source: str = "<xml>") -> tuple[ET.Element, dict[str, str]]:
    """Parse XML text, returning the root element and the prefix -> URI map.

    ElementTree drops namespace declarations from the tree, but QName-valued
    attributes (type="xsd:string") need them, so they are collected from
    iterparse events. The first declaration of a prefix wins.
    """
    prefixes: dict[str, str] = {}
    root: ET.Element | None = None
    try:
        for event, payload in ET.iterparse(io.StringIO(text), events=("start-ns", "start")):
            if event == "start-ns":
                prefix, uri = payload
                prefixes.setdefault(prefix, uri)
            elif root is None:
                root = payload
    except ET.ParseError as exc:
        raise MalformedXmlError(f"{source}: {exc}") from exc
    if root is None:
        raise MalformedXmlError(f"{source}: document has no root element")
    return root, prefixes


def local_name(tag: str) -> str:
    """Strip the {namespace} prefix ElementTree embeds in tags."""
    return tag.rsplit("}", 1)[-1]


def namespace_of(tag: str) -> str:
    """Namespace URI of an ElementTree tag, or '' when unqualified."""
    if tag.startswith("{"):
        return tag[1:].split("}", 1)[0]
    return ""


def split_qname(value: str) -> tuple[str, str]:
    """Split a QName attribute value into (prefix, local part)."""
    prefix, _, local = value.rpartition(":")
    return prefix, local
