"""Eigenvalue spectra and stationary energy flows of two coupled dissipative
two-level systems under local, dressed-secular, and partial-secular master
equations, with closed-form and full-generator cross-checks."""

from .bath import (ReservoirSpec, correlation_fourier, coupling_rate,
                   mean_occupation, relaxation_rate)
from .errors import (ConfigError, DomainError, DressedFrameError,
                     SteadyStateError, TlsflowError)
from .flows import (FlowReport, ThermoVerdict, global_flow_closed,
                    local_flow_closed, omega_max_local_closed,
                    omega_max_numeric, optimal_line, stationary_flows,
                    thermo_check)
from .liouville import (Liouvillian, build_liouvillian, density_flows,
                        evolve_density, steady_density)
from .moments import (MomentSystem, build_moment_system, check_moment_vector,
                      evolve_moments, h_vector, steady_moments)
from .spectra import (ep_coupling, local_spectrum_closed, pair_structure,
                      relaxation_eigenvalues, splitting_scan)
from .system import (DressedFrame, TlsPair, dressed_frame,
                     dressed_operator_matrices, hamiltonian_matrix,
                     validity_check)
from .validation import CriterionResult, run_criteria

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "ReservoirSpec", "mean_occupation", "coupling_rate", "correlation_fourier",
    "relaxation_rate",
    "TlsflowError", "DomainError", "DressedFrameError", "SteadyStateError",
    "ConfigError",
    "TlsPair", "DressedFrame", "dressed_frame", "hamiltonian_matrix",
    "dressed_operator_matrices", "validity_check",
    "MomentSystem", "build_moment_system", "steady_moments", "evolve_moments",
    "check_moment_vector", "h_vector",
    "relaxation_eigenvalues", "local_spectrum_closed", "ep_coupling",
    "pair_structure", "splitting_scan",
    "FlowReport", "ThermoVerdict", "stationary_flows", "thermo_check",
    "local_flow_closed", "global_flow_closed", "omega_max_local_closed",
    "omega_max_numeric", "optimal_line",
    "Liouvillian", "build_liouvillian", "steady_density", "density_flows",
    "evolve_density",
    "CriterionResult", "run_criteria",
]
