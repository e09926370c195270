"""Exception hierarchy shared by every module.

All errors derive from :class:`SolenoidError` (a ``ValueError``) so the CLI can
map any of them to exit code 2 with the class name in the message.
"""


class SolenoidError(ValueError):
    pass


# exact arithmetic
class NotInZ1p(SolenoidError):
    """A rational whose denominator is not a power of the active prime."""


class NonInvertible(SolenoidError):
    pass


class WindowBelowValuation(SolenoidError):
    pass


class WindowAboveValuation(SolenoidError):
    """Digit window starts above v_p(r), so nonzero low digits would be lost."""


class ModulusOverflow(SolenoidError):
    pass


class LiteralError(SolenoidError):
    pass


# solenoid
class LevelMismatch(SolenoidError):
    pass


class IncoherentPoint(SolenoidError):
    pass


# groupoids
class NotComposable(SolenoidError):
    pass


# moebius
class SingularAt(SolenoidError):
    def __init__(self, component, message=None):
        self.component = component
        super().__init__(message or f"a - c*alpha vanishes in the {component} component")


class NotInGL(SolenoidError):
    pass


class NotAUnit(SolenoidError):
    pass


# bibundles
class SingularMoment(SolenoidError):
    pass


class ZeroC(SolenoidError):
    pass


class NotAdmissible(SolenoidError):
    pass


class NotInReducedSet(SolenoidError):
    pass


class NotStrict(SolenoidError):
    pass


# algebra
class AlphaMismatch(SolenoidError):
    pass


class LevelTooShallow(SolenoidError):
    pass


# bimodule
class NonStrictSpec(SolenoidError):
    pass


class InfiniteSupport(SolenoidError):
    pass
