"""Exception hierarchy shared across the analyzer.

Everything the analyzer can refuse derives from AnalyzerError, so callers
(CLI, batch runner) can quarantine one document without crashing a run.
"""


class AnalyzerError(Exception):
    """Base class for all analysis failures."""


class CoverageTableError(AnalyzerError):
    """The coverage-weight table file is missing, malformed, or violates its invariants."""


class UnknownTypeError(AnalyzerError):
    """A type name does not resolve against the built-in type table."""

    def __init__(self, type_name: str, context: str = ""):
        self.type_name = type_name
        suffix = f" ({context})" if context else ""
        super().__init__(f"unknown built-in type: {type_name!r}{suffix}")


class TypeCycleError(AnalyzerError):
    """A complex type contains itself, directly or transitively."""


class MalformedXmlError(AnalyzerError):
    """The input document is not well-formed XML."""


class WsdlError(AnalyzerError):
    """A structural problem in a WSDL document (beyond raw XML syntax)."""


class UnresolvedMessageError(WsdlError):
    """An operation references a message that the document does not define."""


class UnresolvedTypeError(WsdlError):
    """A message part references a type that cannot be resolved."""


class BpelError(AnalyzerError):
    """A structural problem in a BPEL document (beyond raw XML syntax)."""


class DomainError(AnalyzerError):
    """A metric operation received a value outside its admissible range."""


class CorrelationError(AnalyzerError):
    """Correlation input is unusable (length mismatch, constant vector, too few rows)."""


class CorpusError(AnalyzerError):
    """The corpus directory or its manifest cannot be read."""
