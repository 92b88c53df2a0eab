"""Exception types shared across the package."""


class KnowmapError(Exception):
    """Base class for all errors raised by this package."""


class DuplicateNodeError(KnowmapError):
    """A node id was inserted twice into the same graph."""


class EmptyLabelsError(KnowmapError):
    """A node was added without any type label."""


class MissingEndpointError(KnowmapError):
    """An edge referenced a node id that is not in the graph."""


class DuplicateEdgeError(KnowmapError):
    """The exact (source, relation, target) triple already exists."""


class UnknownNodeError(KnowmapError):
    """A lookup referenced a node id that is not in the graph."""


class InvalidSizeError(KnowmapError):
    """A topology builder was asked for too few nodes."""


class MagnitudeOutOfRangeError(KnowmapError):
    """Fluctuation magnitude outside the supported [0, 0.1) range."""


class EmptyInputError(KnowmapError):
    """An aggregation was called with no vectors."""


class DimensionMismatchError(KnowmapError):
    """Vectors or matrices with incompatible dimensions were combined."""


class ZeroVectorError(KnowmapError):
    """Normalization hit an exactly-zero vector (degenerate layer output)."""


class NodeSetMismatchError(KnowmapError):
    """Two knowledge maps cover different node sets."""


class DegenerateInputError(KnowmapError):
    """All input rows are identical; no principal directions exist."""


class TooFewRowsError(KnowmapError):
    """Not enough data rows to fit a projection model."""


class TooFewStepsError(KnowmapError):
    """Not enough sweep steps to compute trajectory metrics."""


class MalformedCsvError(KnowmapError):
    """A CSV input file is empty or does not match the expected schema."""
