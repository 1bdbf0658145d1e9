"""Exception types raised by the trilaser package."""


class Error(Exception):
    """Base class for all trilaser errors."""


class InvalidParameter(Error):
    """A physical parameter lies outside its supported domain."""


class NoStationaryState(Error):
    """The moment equations admit no stationary solution (kappa + A*eta <= 0)."""


class MalformedCovariance(Error):
    """A covariance triple does not describe a real symplectic spectrum."""


class DegenerateBlock(Error):
    """The steering party's covariance block is singular and cannot be inverted."""


class UnphysicalState(Error):
    """The covariance matrix violates the bona fide (uncertainty) condition."""


class OutsideFormulaDomain(Error):
    """The state lies outside the squeezed-thermal family the closed-form
    entanglement expression is valid for."""


class StepTooLarge(Error):
    """Requested integrator step exceeds the stability guard."""


class Diverged(Error):
    """A trajectory left the physically meaningful region (overflow or
    negative occupation)."""


class SingularSystem(Error):
    """The stationary linear system is singular to working precision."""


class InvalidSpec(Error):
    """A sweep or grid specification is self-inconsistent."""
