"""Exception types shared across the library, CLI, and HTTP service."""


class TreecutError(Exception):
    """Base class for all library errors."""


class DatasetFormatError(TreecutError):
    """Malformed dataset input (ragged rows, bad tokens, empty file)."""


class MetricMismatchError(TreecutError):
    """Metric incompatible with the dataset's attribute kind."""


class InvalidParameterError(TreecutError):
    """Out-of-range or inconsistent numeric parameter."""


class InvalidTreeError(TreecutError):
    """Edge set does not form a connected acyclic tree."""


class NodeRangeError(TreecutError):
    """Node id outside the valid range."""


class UnknownEdgeError(TreecutError):
    """Edge id does not name an existing tree edge."""


class EdgeAlreadyCutError(TreecutError):
    """Attempt to cut an edge that is already cut."""


class EdgeNotCutError(TreecutError):
    """Attempt to restore an edge that is not cut."""


class NoUncutEdgesError(TreecutError):
    """No uncut edge remains to resolve a cross against."""


class UnknownComponentError(TreecutError):
    """Component id does not name a current component."""


class SingletonComponentError(TreecutError):
    """Divide/conquer requires a component with at least two nodes."""


class ConstraintError(TreecutError):
    """Constraint set references invalid nodes or contradicts itself."""


class OverlappingChildrenError(TreecutError):
    """Two finalized children target the same parent component."""


class MissingLabelsError(TreecutError):
    """Ground-truth labels required but absent."""


class DocumentError(TreecutError):
    """Session document malformed or of an unsupported version."""
