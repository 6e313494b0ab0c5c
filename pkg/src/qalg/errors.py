"""Exception hierarchy shared across the package.

Everything raised on purpose derives from QalgError so the CLI can map
failures onto its exit-code contract (2 = input problem, 3 = undetermined).
"""


class QalgError(Exception):
    """Base class for all qalg errors."""


class BadModulus(QalgError):
    def __init__(self, p):
        super().__init__(f"modulus {p} is not a prime")
        self.p = p


class DimensionMismatch(QalgError):
    pass


class UnknownArrow(QalgError):
    pass


class NonParallelRelation(QalgError):
    pass


class NotAdmissible(QalgError):
    def __init__(self, max_length):
        super().__init__(
            f"no nilpotency index found up to length {max_length}; "
            "the relation ideal is not admissible within the cap"
        )
        self.max_length = max_length


class TooManyPaths(QalgError):
    def __init__(self, count, cap):
        super().__init__(
            f"path enumeration exceeded {cap} paths ({count} seen); "
            "refusing to continue rather than truncate"
        )
        self.count = count
        self.cap = cap


class QdslError(QalgError):
    """Any diagnostic from the .qalg front end. Always carries a position."""

    def __init__(self, message, line, col):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


class QdslSyntaxError(QdslError):
    def __init__(self, message, line, col, expected=None):
        if expected:
            message = f"{message} (expected {expected})"
        super().__init__(message, line, col)
        self.expected = expected


class DuplicateArrow(QdslError):
    pass


class UnknownVertex(QdslError):
    pass


class BadModulusAt(QdslError):
    """Non-prime field declaration, with source position."""


class UnknownForm(QalgError):
    pass


class VertexOutOfRange(QalgError):
    pass


class VNotInFiniteProjDim(QalgError):
    pass


class UndeterminedPd(QalgError):
    def __init__(self, what, cutoff):
        super().__init__(f"projective dimension of {what} undetermined at cutoff {cutoff}")
        self.cutoff = cutoff


class UndeterminedClassification(UndeterminedPd):
    pass


class HypothesisFailed(QalgError):
    def __init__(self, ll_value):
        super().__init__(
            f"torsion layer length of the regular module is {ll_value} > 2; "
            "the syzygy-finiteness certificate does not apply"
        )
        self.ll_value = ll_value


class SearchSpaceTooLarge(QalgError):
    def __init__(self, size, cap):
        super().__init__(
            f"exhaustive search over {size} finite-pd simples exceeds cap {cap}; "
            "use the greedy strategy or raise the cap"
        )
        self.size = size
        self.cap = cap
