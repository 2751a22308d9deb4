"""Exception types shared across the package."""


class SbmdpError(Exception):
    """Base class for all errors raised by this package."""


class IndexOutOfRange(SbmdpError):
    """Vertex index outside [0, n) or equal pair endpoints."""


class AlphabetViolation(SbmdpError):
    """Entry value not in the graph's declared alphabet."""


class ShapeMismatch(SbmdpError):
    """Operands have incompatible sizes or alphabets."""


class NotSymmetric(SbmdpError):
    """Matrix asymmetry exceeds the construction tolerance."""


class NonFinite(SbmdpError):
    """Matrix contains NaN or infinite entries."""


class ParseError(SbmdpError):
    """Malformed edge-list text; carries the offending line number."""

    def __init__(self, message, line=None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


class DuplicateEdge(ParseError):
    """The same vertex pair appears twice in an edge list."""


class InvalidParams(SbmdpError):
    """Model or mechanism parameters violate their invariants."""


class InfeasibleProblem(SbmdpError):
    """SDP constraint set is inconsistent."""


class DegenerateSpectrum(SbmdpError):
    """Top eigenvalue multiplicity prevents unambiguous rounding."""


class InconsistentRelation(SbmdpError):
    """Thresholded same-cluster relation is not a partition of the stated sizes."""


class TooLarge(SbmdpError):
    """Instance exceeds the brute-force enumeration guard."""


class InvalidShift(SbmdpError):
    """Shifted or tightened constants violate positivity or lemma-side restrictions."""


class InfeasibleRegime(SbmdpError):
    """No constants tuple satisfies the recovery-threshold conditions.

    The message names the violated inequality.
    """


class DegenerateEstimate(SbmdpError):
    """Degree-split estimator hit a (near-)singular denominator."""


class DomainError(SbmdpError):
    """Argument outside the mathematical domain of a rate function."""


class BudgetExceeded(SbmdpError):
    """A bounded search ran out of its configured budget."""
