"""Exception hierarchy shared by every module of the package."""


class HyperinvError(Exception):
    """Base class for all library errors."""


class ModeMismatch(HyperinvError, TypeError):
    """Values from different numeric fields were combined."""


class PoleError(HyperinvError, ValueError):
    """A function was evaluated at one of its poles."""


class DenominatorPole(HyperinvError, ZeroDivisionError):
    """A Pochhammer symbol in a denominator vanished before truncation."""


class DomainError(HyperinvError, ValueError):
    """An argument lies outside the domain where a formula is valid."""


class BetaPole(DomainError):
    """beta + k == 0 for some column index k in use."""


class GammaPole(DomainError):
    """gamma is a negative integer within the index range in use."""


class OrderExceeded(HyperinvError, IndexError):
    """Requested a coefficient beyond the truncation order of a series."""


class ConstantTermNotOne(HyperinvError, ValueError):
    pass


class NonzeroInnerConstant(HyperinvError, ValueError):
    pass


class NotInvertible(HyperinvError, ValueError):
    pass


class SizeMismatch(HyperinvError, ValueError):
    pass


class LengthMismatch(HyperinvError, ValueError):
    pass


class SingularDiagonal(HyperinvError, ZeroDivisionError):
    pass


class OutsideRadius(DomainError):
    """A scalar evaluation point lies outside the guarded disc of convergence."""


class XZero(DomainError):
    pass


class BranchLost(HyperinvError, ArithmeticError):
    """Continuation of an implicit root from its base point failed."""


class NoConvergence(HyperinvError, ArithmeticError):
    pass
