"""Error types shared across the package.

Every error carries a stable machine-readable ``code`` so the CLI and the
HTTP service can surface diagnostics uniformly.
"""

from __future__ import annotations


class NetresError(Exception):
    """Base class for all domain errors."""

    code = "error"

    def payload(self) -> dict:
        return {"code": self.code, "message": str(self)}


class NodeAbsent(NetresError):
    code = "node_absent"


class EdgeAbsent(NetresError):
    code = "edge_absent"


class EmptyGraph(NetresError):
    code = "empty_graph"


class TooLarge(NetresError):
    code = "too_large"


class TooSmall(NetresError):
    code = "too_small"


class DirectedUnsupported(NetresError):
    code = "directed_unsupported"


class MalformedIntervention(NetresError):
    code = "malformed_intervention"


class ShockOutsideGraph(NetresError):
    code = "shock_outside_graph"


class NoClosedForm(NetresError):
    code = "no_closed_form"


class BadConfig(NetresError):
    code = "bad_config"


class GraphFileError(NetresError):
    """Parse error with source position; line/col are 1-based, col may be 0."""

    code = "malformed"

    def __init__(self, message: str, line: int = 0, col: int = 0):
        super().__init__(message)
        self.line = line
        self.col = col

    def payload(self) -> dict:
        out = super().payload()
        out["line"] = self.line
        out["col"] = self.col
        return out


class Malformed(GraphFileError):
    code = "malformed"


class SelfLoop(GraphFileError):
    code = "self_loop"


class DanglingEdge(GraphFileError):
    code = "dangling_edge"


class DuplicateEdgeWarning(UserWarning):
    """Duplicate edge lines are tolerated but reported."""
