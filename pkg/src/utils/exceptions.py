"""Error hierarchy shared by the algebra, series and flow layers."""


class KellerDynamicsError(ValueError):
    """Base class for every domain error raised by the package."""


# ============================================================================
# Polynomial layer
# ============================================================================


class ArityMismatch(KellerDynamicsError):
    pass


class IndexOutOfRange(KellerDynamicsError):
    pass


class NotSquare(KellerDynamicsError):
    pass


class TooLarge(KellerDynamicsError):
    pass


# ============================================================================
# Series layer
# ============================================================================


class ParamArityMismatch(KellerDynamicsError):
    pass


class InnerNotPositiveValuation(KellerDynamicsError):
    pass


class NotRevertible(KellerDynamicsError):
    pass


class ReversionCheckFailed(KellerDynamicsError):
    """Back-substitution of a computed reversion did not give the identity."""


class NotUnit(KellerDynamicsError):
    pass


class ValuationNotDivisible(KellerDynamicsError):
    pass


class LeadingNotPerfectPower(KellerDynamicsError):
    pass


class DivisionByZeroValuation(KellerDynamicsError):
    """A chart coordinate has a pole at the centre, so its limit diverges."""


class TruncationInsufficient(KellerDynamicsError):
    """The requested result needs more known coefficients than the input carries."""


# ============================================================================
# u-gamma representation layer
# ============================================================================


class NonConvergent(KellerDynamicsError):
    """Positive powers of u survive in f composed with the curve."""


class AllHigherOrdersZero(KellerDynamicsError):
    pass


class ZeroU(KellerDynamicsError):
    pass


class ZeroPsi(KellerDynamicsError):
    pass


class ZeroLeadCoordinate(KellerDynamicsError):
    pass


class UnsupportedOrder(KellerDynamicsError):
    """No exact cyclotomic arithmetic is available for this root-of-unity order."""


class BranchAmbiguous(KellerDynamicsError):
    """Two m-th roots are equally close to the previous branch value."""


class UnknownName(KellerDynamicsError):
    """A registry name that is neither built in nor a readable file."""
