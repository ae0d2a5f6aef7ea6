"""Exception hierarchy. CLI exit codes are attached to the classes."""


class DiskEITError(Exception):
    exit_code = 1


class ConfigurationError(DiskEITError, ValueError):
    exit_code = 2


class SingularEvaluationError(DiskEITError, ValueError):
    """Green's function evaluated at coincident points."""


class DomainError(DiskEITError, ValueError):
    pass


class EvaluationError(DiskEITError, ArithmeticError):
    pass


class FluxError(DiskEITError, ValueError):
    """Boundary current (or Neumann data) with nonzero net flux."""

    exit_code = 4


class SolverError(DiskEITError, RuntimeError):
    exit_code = 3


class DataError(DiskEITError, ValueError):
    exit_code = 4


class ReconstructionError(DiskEITError, RuntimeError):
    """No interior information: every characteristic vanished at its seed."""

    exit_code = 5


class SweepError(DiskEITError, RuntimeError):
    exit_code = 6
