"""Exception types shared across the package."""


class LatticeError(Exception):
    pass


class NotALattice(LatticeError):
    def __init__(self, x, y, kind="lub"):
        self.pair = (x, y)
        self.kind = kind
        super().__init__(f"elements {x} and {y} have no unique {kind}")


class CyclicCovers(LatticeError):
    pass


class SizeLimitExceeded(LatticeError):
    pass


class TrivialLattice(LatticeError):
    pass


class NotJoinIrreducible(LatticeError):
    pass


class UnboundVariable(LatticeError):
    pass


class TermSyntaxError(LatticeError, SyntaxError):
    def __init__(self, message, text="", position=0):
        self.position = position
        super().__init__(f"{message} at position {position}: {text!r}")


class HypothesisFails(LatticeError):
    pass


class InternalCaseExhaustion(LatticeError):
    """A case analysis that should be exhaustive was not. Always a bug."""


class TheoremViolated(LatticeError):
    """A computation contradicted a proven statement. Always a bug."""

    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message)


class DepthExhausted(LatticeError):
    pass


class NonCanonicalIntersection(LatticeError):
    pass


class BoundExceeded(LatticeError):
    pass


class NotHModular(LatticeError):
    pass


class ZeroArgument(LatticeError):
    pass


class TruncationTooSmall(LatticeError):
    pass


class FiberUnstable(LatticeError):
    pass


class MismatchWithOracle(LatticeError):
    pass
