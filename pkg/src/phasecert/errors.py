"""Exception hierarchy.

All package errors derive from :class:`PhaseCertError` so callers can catch
one base type; subclasses distinguish numerical failures (singular solves,
ill-posed loops) from modelling errors (bad data, violated assumptions).
"""


class PhaseCertError(Exception):
    """Base class for all phasecert errors."""


class SingularResolventError(PhaseCertError):
    """Evaluation point coincides (numerically) with a pole of the model."""


class IllPosedLoopError(PhaseCertError):
    """Feedback interconnection has a singular direct-feedthrough loop."""


class NotSectorialError(PhaseCertError):
    """Matrix phases requested for a matrix that is not semi-sectorial."""


class DegenerateBranchError(PhaseCertError):
    """Branch with neither resistance nor inductance."""


class DisconnectedGraphError(PhaseCertError):
    """Network graph does not connect all listed buses."""


class SingularInteriorError(PhaseCertError):
    """Interior sub-block of the nodal matrix is singular at an evaluation point."""


class AssemblyError(PhaseCertError):
    """Scenario or network cannot be assembled into a model."""


class PowerFlowError(PhaseCertError):
    """Power flow failed to converge or has no solution."""


class AssumptionError(PhaseCertError):
    """A documented structural precondition does not hold for the given data."""


class UnstableInverseError(PhaseCertError):
    """An operation requires a stably invertible system and the inverse is unstable."""


class OpenLoopUnstableError(PhaseCertError):
    """Certification requested for a loop whose open-loop systems are unstable."""


class ConfigError(PhaseCertError):
    """Scenario configuration file is malformed or inconsistent."""
