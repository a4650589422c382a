"""Steady-state fluid and solute transport through tissue during peritoneal dialysis."""

__version__ = "0.1.0"

from .bessel import (
    BesselDomainError,
    BesselOverflowError,
    BesselRequest,
    bessel_i,
    bessel_k,
    bessel_table,
    i0,
    i0e,
    i1,
    i1e,
    k0,
    k0e,
    k1,
    k1e,
    modified_bessel,
)
from .bvp import (
    BvpProblem,
    BvpSolveError,
    ConvergenceStudy,
    GridFunction,
    estimate_convergence_order,
    residual_norm,
    solve_linear_bvp,
)
from .config import ConfigError, load_config, paper_parameters
from .flux import (
    ConstantNuFlux,
    LinearNuFlux,
    SteadyStateConstants,
    boundary_flux_density,
    constant_steady_state,
    flux_profile,
    flux_profile_constant_nu,
    flux_profile_linear_nu,
)
from .params import (
    ConstantNu,
    DimensionlessGroups,
    LinearNu,
    NondimensionalizationError,
    ParameterError,
    ParameterSet,
    RestrictionError,
    nondimensionalize,
    redimensionalize,
    validate_parameters,
)
from .profiles import (
    NegativeAlbuminWarning,
    SteadyStateSolution,
    assemble_albumin_ode,
    assemble_glucose_ode,
    penetration_depth,
    solve_profiles,
    steady_residual_check,
    summarize,
    total_cavity_outflow,
)
