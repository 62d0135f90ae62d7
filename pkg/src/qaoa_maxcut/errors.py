"""Exception hierarchy.

Every error carries a short machine-readable ``code`` that the command line
reports alongside the message.
"""

from __future__ import annotations


class QAOAError(ValueError):
    code = "domain_error"


class GraphError(QAOAError):
    code = "invalid_graph"


class GraphParseError(GraphError):
    """Raised for a bad line in a graph document; ``line`` is 1-based."""

    code = "graph_parse"

    def __init__(self, message: str, line: int | None = None, kind: str = "malformed"):
        self.line = line
        self.kind = kind
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EdgeNotFoundError(GraphError):
    code = "edge_not_found"


class QubitCapError(QAOAError):
    code = "qubit_cap"


class ScheduleError(QAOAError):
    code = "invalid_schedule"


class ConventionError(ScheduleError):
    code = "wrong_convention"


class RingSizeError(QAOAError):
    code = "ring_size"


class ManifoldError(QAOAError):
    code = "manifold"
