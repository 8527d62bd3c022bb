"""Exception taxonomy shared by all quasinv modules."""


class QuasinvError(Exception):
    """Base class for all errors raised by this package."""


class InvalidDomain(QuasinvError):
    """Coefficient domain parameters are inconsistent (e.g. composite p for a prime field)."""


class BadCharacteristic(QuasinvError):
    """The operation needs the group order (or a coordinate change) invertible in the domain."""


class DenominatorVanishes(QuasinvError):
    """Specialization q -> root of unity hit a vanishing denominator."""


class TheoremViolation(QuasinvError):
    """A proved bound failed; this always indicates an implementation bug."""


class NotProportional(QuasinvError):
    """An exact quotient expected to be a scalar turned out not to be."""


class DegenerateLift(QuasinvError):
    """Both candidate reductions vanish while lifting the generator chain."""


class NormalizationFailure(QuasinvError):
    """Could not rescale to coprime (content-free) coefficients."""


class DenominatorResidue(QuasinvError):
    """A rational-function term of the shift operator did not cancel to a polynomial."""


class ZeroInput(QuasinvError):
    """Valuation of zero requested."""


class RangeViolation(QuasinvError):
    """(m, p) fall outside the admissible deformation window."""


class MembershipFailure(QuasinvError):
    """A constructed element failed its quasi-invariance check."""


class MinimalityFailure(QuasinvError):
    """A lower-degree element exists where minimality is guaranteed."""


class CheckpointError(QuasinvError):
    """Sweep checkpoint file is missing required fields or fails to parse."""
