"""Exception types shared across the package."""


class FreefactorError(Exception):
    """Base class for all library-specific errors."""


class UnknownLetter(FreefactorError):
    pass


class NotSurjective(FreefactorError):
    """Folded image graph is not the full rose; by Hopficity, not an automorphism."""


class TrivialSubgroup(FreefactorError):
    pass


class InvalidMarking(FreefactorError):
    pass


class AmbientTooLarge(FreefactorError):
    """Whitehead search bound exceeded (ambient rank > 6)."""


class TooLong(FreefactorError):
    """Syllable length exceeds the desk-scale bound."""


class TooLarge(FreefactorError):
    """Graph exceeds the desk-scale vertex bound."""


class OrbitBudgetExceeded(FreefactorError):
    """Move-(3) orbit enumeration exceeded its explicit budget."""


class NonPrimitiveImage(FreefactorError):
    """Abelianized generator is not a primitive integer pair."""


class NotHyperbolic(FreefactorError):
    pass


class UndefinedProjection(FreefactorError):
    pass


class NotInOmega(FreefactorError):
    pass


class NotOverlapping(FreefactorError):
    pass


class ThresholdViolated(FreefactorError):
    pass


class NotAdmissible(FreefactorError):
    def __init__(self, pair, detail=""):
        self.pair = pair
        super().__init__(f"pair {pair} is neither disjoint nor overlapping: {detail}")


class SupportViolation(FreefactorError):
    pass


class CommutationViolation(FreefactorError):
    pass


class NotHyperbolicSeed(FreefactorError):
    pass


class SchemaError(FreefactorError):
    """Fixture/serialization schema violation; message names the offending path."""
