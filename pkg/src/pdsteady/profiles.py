"""Steady glucose/albumin/pressure profiles built on the closed-form fluid flux.

Both solute equations share the shape

    D nu(x) y'' + [D nu'(x) - (S/L) j_U(x)] y' + [(S F - S)(q_U - q_l) - kappa] y - source = 0

where y is the shifted concentration (u for glucose, w - w0 for albumin).
For the linear void volume this is assembled from the divergence form
``(S / sqrt(delta*)) d/dx(g(x) y)`` with ``g`` the Bessel-function
coefficient of the tissue fluid flux.

``linear_nu_form="printed"`` flips the sign of that divergence term, which
reproduces the equations as they were originally published. That variant is
inconsistent with the constant-void-volume equations and with the dimensional
transport laws; it exists only to reproduce published curves.
"""

from __future__ import annotations

import dataclasses
import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .bvp import BvpProblem, residual_norm, solve_linear_bvp
from .flux import (
    ConstantNuFlux,
    FluxProfile,
    LinearNuFlux,
    albumin_source,
    capillary_fluid_flux,
    flux_profile,
    glucose_source,
    tissue_fluid_flux,
)
from .params import (
    DimensionlessGroups,
    ParameterSet,
    nondimensionalize,
    redimensionalize,
    require_restriction,
    validate_parameters,
)

CASES = ("constant-nu", "linear-nu")
LINEAR_NU_FORMS = ("derived", "printed")
DEFAULT_N = 2001
PENETRATION_THRESHOLD = 0.02


class NegativeAlbuminWarning(UserWarning):
    pass


@dataclass(frozen=True)
class SteadyStateSolution:
    case: str
    x: np.ndarray
    u: np.ndarray
    w: np.ndarray
    p: np.ndarray
    q_U: np.ndarray
    j_U: np.ndarray
    params: ParameterSet
    groups: DimensionlessGroups
    flux: FluxProfile
    N: int
    linear_nu_form: str = "derived"
    X: Optional[np.ndarray] = None
    C_G: Optional[np.ndarray] = None
    C_A: Optional[np.ndarray] = None
    P: Optional[np.ndarray] = None
    diagnostics: dict = field(default_factory=dict)
    warnings: tuple = ()

    def nu(self):
        return self.flux.nu(self.x)


def _solute_problem(D, S, F, kappa, source, flux, form, dirichlet, shift, description):
    """BvpProblem for ``shift + y`` where y solves the shifted solute equation."""
    if isinstance(flux, ConstantNuFlux):
        lam = flux.lam

        def b(x):
            return S / lam * (flux.C1 * np.exp(-lam * x) - flux.C2 * np.exp(lam * x))

        def c(x):
            return (S * F - S) * flux.excess(x) - kappa

        a_const = D * flux.nu_m

        def a(x):
            return np.full_like(x, a_const)

    else:
        sign = 1.0 if form == "derived" else -1.0
        root = math.sqrt(flux.delta_star)

        def a(x):
            return D * flux.nu(x)

        def b(x):
            return D * flux.dnu(x) + sign * S / root * flux.divergence_coefficient(x)

        def c(x):
            return sign * S / root * flux.divergence_coefficient_derivative(x) + S * F * flux.excess(x) - kappa

    def d(x):
        return -source - c(x) * shift

    return BvpProblem(a=a, b=b, c=c, d=d, dirichlet_value=dirichlet, neumann_value=0.0, description=description)


def _check_form(form):
    if form not in LINEAR_NU_FORMS:
        raise ValueError(f"linear_nu_form must be one of {LINEAR_NU_FORMS}, got {form!r}")


def assemble_glucose_ode(params: ParameterSet, flux: FluxProfile, linear_nu_form: str = "derived") -> BvpProblem:
    """Glucose problem for u with u(0) = 1, u'(1) = 0."""
    _check_form(linear_nu_form)
    require_restriction(params)
    g = nondimensionalize(params)
    return _solute_problem(
        g.d1, params.S_G, params.F_G, g.kappa1, g.u01, flux, linear_nu_form,
        dirichlet=1.0, shift=0.0, description=f"glucose, {flux.case}",
    )


def assemble_albumin_ode(params: ParameterSet, flux: FluxProfile, linear_nu_form: str = "derived") -> BvpProblem:
    """Albumin problem in w (not w - w0); the shift enters the forcing term."""
    _check_form(linear_nu_form)
    require_restriction(params)
    g = nondimensionalize(params)
    return _solute_problem(
        g.d2, params.S_A, params.F_A, g.kappa2, g.w01, flux, linear_nu_form,
        dirichlet=g.w_boundary, shift=g.w0, description=f"albumin, {flux.case}",
    )


def recover_pressure(x, u, w, flux: FluxProfile, groups: DimensionlessGroups, params: ParameterSet):
    """Pressure from inverting the capillary flux law for p at each node."""
    g = groups
    factor = g.t0 * params.K / (params.Lp_a * params.L**2)
    return g.p0 + g.t0 * g.sigma1 * u + g.t0 * g.sigma2 * (w - g.w0) - factor * flux.q_U(x)


def solve_profiles(
    params: ParameterSet,
    case: str = "constant-nu",
    N: int = DEFAULT_N,
    nu_m: Optional[float] = None,
    linear_nu_form: str = "derived",
) -> SteadyStateSolution:
    """Flux, glucose, albumin and pressure profiles for one void-volume case.

    Parameters
    ----------
    params : ParameterSet
        Must satisfy ``sigma_TG == sigma_G`` and ``sigma_TA == sigma_A``.
    case : {"constant-nu", "linear-nu"}
    N : int
        Number of grid intervals.
    nu_m : float, optional
        Constant void volume; defaults to the midpoint of ``nu_min``, ``nu_max``.
    linear_nu_form : {"derived", "printed"}
        Sign of the divergence term in the linear-void-volume solute equations.

    Warns
    -----
    NegativeAlbuminWarning
        If the albumin profile dips below zero. Values are never clamped.
    """
    if case not in CASES:
        raise ValueError(f"unknown case {case!r}; expected one of {CASES}")
    _check_form(linear_nu_form)
    validate_parameters(params)
    require_restriction(params)
    groups = nondimensionalize(params)
    flux = flux_profile(params, case, nu_m)

    glucose = assemble_glucose_ode(params, flux, linear_nu_form)
    albumin = assemble_albumin_ode(params, flux, linear_nu_form)
    u_sol = solve_linear_bvp(glucose, N)
    w_sol = solve_linear_bvp(albumin, N)
    x, u, w = u_sol.x, u_sol.y, w_sol.y
    p = recover_pressure(x, u, w, flux, groups, params)

    diagnostics = {
        "condition_u": u_sol.condition,
        "condition_w": w_sol.condition,
        "system_residual_u": u_sol.system_residual,
        "system_residual_w": w_sol.system_residual,
        "stencil_residual_u": residual_norm(u_sol, glucose),
        "stencil_residual_w": residual_norm(w_sol, albumin),
        "neumann_residual_u": u_sol.neumann_residual(),
        "neumann_residual_w": w_sol.neumann_residual(),
    }
    notes = []
    w_min = float(np.min(w))
    if w_min < 0:
        i = int(np.argmin(w))
        msg = f"negative albumin concentration: min w = {w_min:.3e} at x = {x[i]:.4f}"
        notes.append(msg)
        warnings.warn(msg, NegativeAlbuminWarning, stacklevel=2)

    solution = SteadyStateSolution(
        case=case,
        x=x,
        u=u,
        w=w,
        p=p,
        q_U=flux.q_U(x),
        j_U=flux.j_U(x),
        params=params,
        groups=groups,
        flux=flux,
        N=N,
        linear_nu_form=linear_nu_form,
        diagnostics=diagnostics,
        warnings=tuple(notes),
    )
    return redimensionalize(solution, params)


@dataclass(frozen=True)
class ResidualReport:
    """Max interior residuals of the dimensional balance laws.

    ``fluid`` is d(j_U)/dX - (q_U - q_l), ``glucose`` is d(j_G)/dX - q_G,
    ``albumin`` is d(j_A)/dX - q_A. The ``*_relative`` values divide by the
    largest magnitude among the terms entering each balance.
    """

    fluid: float
    glucose: float
    albumin: float
    fluid_relative: float
    glucose_relative: float
    albumin_relative: float
    N: int

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


def _central(f, h):
    return (f[2:] - f[:-2]) / (2.0 * h)


def _relative(residual, *terms):
    scale = max(float(np.max(np.abs(t))) for t in terms)
    return residual / scale if scale > 0 else residual


def steady_residuals(x, P, C_G, C_A, nu, params: ParameterSet) -> ResidualReport:
    """Residuals of the dimensional steady balances for sampled profiles on a uniform grid."""
    p = params
    x = np.asarray(x, dtype=float)
    N = len(x) - 1
    hX = p.L * (x[1] - x[0])
    nu = np.broadcast_to(np.asarray(nu, dtype=float), x.shape)
    # fluxes at nodes 1..N-1, their derivatives at nodes 2..N-2
    dP, dCG, dCA = _central(P, hX), _central(C_G, hX), _central(C_A, hX)
    inner = slice(1, -1)
    jU = tissue_fluid_flux(p, nu[inner], dP, dCG, dCA)
    jG = -nu[inner] * p.D_G * dCG + p.S_TG * C_G[inner] * jU
    jA = -p.alpha * nu[inner] * p.D_A * dCA + p.S_TA * C_A[inner] * jU

    core = slice(2, -2)
    qU = capillary_fluid_flux(p, P[core], C_G[core], C_A[core])
    qG = glucose_source(p, C_G[core], qU)
    qA = albumin_source(p, C_A[core], qU)
    djU, djG, djA = _central(jU, hX), _central(jG, hX), _central(jA, hX)

    r_fluid = float(np.max(np.abs(djU - (qU - p.q_l))))
    r_glucose = float(np.max(np.abs(djG - qG)))
    r_albumin = float(np.max(np.abs(djA - qA)))
    CG, CA = C_G[core], C_A[core]
    return ResidualReport(
        fluid=r_fluid,
        glucose=r_glucose,
        albumin=r_albumin,
        fluid_relative=_relative(r_fluid, djU, qU, np.array([p.q_l])),
        glucose_relative=_relative(
            r_glucose, djG, p.pG_a * (p.C_GB - CG), p.S_G * qU * ((1 - p.F_G) * p.C_GB + p.F_G * CG), p.q_l * CG
        ),
        albumin_relative=_relative(
            r_albumin, djA, p.pA_a * (p.C_AB - CA), p.S_A * qU * ((1 - p.F_A) * p.C_AB + p.F_A * CA), p.q_l * CA
        ),
        N=N,
    )


def steady_residual_check(solution: SteadyStateSolution, params: Optional[ParameterSet] = None) -> ResidualReport:
    """Check a solved profile against the original dimensional flux laws.

    ``params`` defaults to the solution's own parameters; passing a set with
    different tissue reflection coefficients tests what the restriction buys.
    """
    params = solution.params if params is None else params
    return steady_residuals(solution.x, solution.P, solution.C_G, solution.C_A, solution.nu(), params)


@dataclass(frozen=True)
class CavityOutflow:
    signed: float  # mL/min, negative toward the cavity
    magnitude: float


def total_cavity_outflow(solution: SteadyStateSolution, contact_area: Optional[float] = None) -> CavityOutflow:
    area = solution.params.contact_area if contact_area is None else contact_area
    signed = float(solution.j_U[0]) * area
    return CavityOutflow(signed=signed, magnitude=abs(signed))


def penetration_depth(solution: SteadyStateSolution, threshold: float = PENETRATION_THRESHOLD) -> Optional[float]:
    """Smallest grid x with u(x) <= threshold, or None if u never gets there."""
    hits = np.nonzero(solution.u <= threshold)[0]
    return float(solution.x[hits[0]]) if hits.size else None


def summarize(solution: SteadyStateSolution, residuals: Optional[ResidualReport] = None) -> dict:
    """Scalar summary used for ``summary.json`` and sweep rows."""
    outflow = total_cavity_outflow(solution)
    out = {
        "case": solution.case,
        "N": solution.N,
        "linear_nu_form": solution.linear_nu_form,
        "flux": solution.flux.summary(),
        "outflow_signed": outflow.signed,
        "outflow_magnitude": outflow.magnitude,
        "min_w": float(np.min(solution.w)),
        "penetration_depth": penetration_depth(solution),
        "diagnostics": dict(solution.diagnostics),
        "warnings": list(solution.warnings),
    }
    if residuals is not None:
        out["residuals"] = residuals.as_dict()
    return out
