"""Integral-equation conductivity imaging on the unit disk.

The conductivity enters through ``Y = ∇ln σ·∇Φ``. Boundary data determine
``K[Y]`` with ``K = G_D - G_N``; a Tikhonov-regularized ``Y`` close to a prior
model is then turned into ``σ`` by integrating along the current lines.
"""

from .errors import (ConfigurationError, DataError, DiskEITError, DomainError, EvaluationError,
                     FluxError, ReconstructionError, SingularEvaluationError, SolverError,
                     SweepError)
from .fields import BumpSpec, ConductivityModel, sigma_exact, sigma_mod
from .forward import CauchyData, CurrentPattern, add_noise, fd_oracle, solve_forward
from .inversion import (InversionConfig, build_chi, choose_lambda, reconstruct,
                        tikhonov_solve)
from .notch import sweep
from .nullspace import NullModeSpec, invisible_potential, jacobi_G, null_source
from .quadrature import BoundaryFunction, DiskQuadrature, build_disk_rule

__version__ = "0.1.0"

__all__ = [
    "BoundaryFunction", "BumpSpec", "CauchyData", "ConductivityModel", "ConfigurationError",
    "CurrentPattern", "DataError", "DiskEITError", "DiskQuadrature", "DomainError",
    "EvaluationError", "FluxError", "InversionConfig", "NullModeSpec", "ReconstructionError",
    "SingularEvaluationError", "SolverError", "SweepError", "add_noise", "build_chi",
    "build_disk_rule", "choose_lambda", "fd_oracle", "invisible_potential", "jacobi_G",
    "null_source", "reconstruct", "sigma_exact", "sigma_mod", "solve_forward", "sweep",
    "tikhonov_solve",
]
