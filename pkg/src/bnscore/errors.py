"""Exception types raised across the toolkit.

Everything derives from :class:`GraphScoreError` so callers (the CLI in
particular) can separate input/validation failures from internal bugs.
"""


class GraphScoreError(Exception):
    """Base class for input and validation errors."""


class InvalidLabel(GraphScoreError):
    pass


class DuplicateNode(GraphScoreError):
    pass


class EmptyNodeSet(GraphScoreError):
    pass


class UnknownNode(GraphScoreError):
    pass


class SelfLoop(GraphScoreError):
    pass


class NodeSetMismatch(GraphScoreError):
    def __init__(self, difference):
        self.difference = frozenset(difference)
        listed = ", ".join(sorted(self.difference))
        super().__init__(f"node sets differ: {{{listed}}}")


class NotADag(GraphScoreError):
    pass


class NotAPdag(GraphScoreError):
    pass


class NoSuchArc(GraphScoreError):
    pass


class DegenerateTruth(GraphScoreError):
    pass


class InvalidTrueMark(GraphScoreError):
    pass


class GraphSyntaxError(GraphScoreError):
    """Malformed graph or manifest text. ``line`` and ``column`` are 1-based."""

    def __init__(self, line, column, message):
        self.line = line
        self.column = column
        self.message = message
        super().__init__(f"line {line}, column {column}: {message}")


class MissingNodesHeader(GraphSyntaxError):
    pass


class UnknownNodeInEdge(GraphSyntaxError):
    pass


class DuplicatePair(GraphSyntaxError):
    pass


class DuplicateGroupId(GraphScoreError):
    pass


class EmptyGroup(GraphScoreError):
    pass


class OutOfRange(GraphScoreError):
    pass


class DegenerateGroupWarning(UserWarning):
    """A normalization group whose formula degenerates (all-perfect SHD, positive DDM)."""


class UnknownMetric(GraphScoreError):
    pass


class InfeasiblePlan(GraphScoreError):
    pass
