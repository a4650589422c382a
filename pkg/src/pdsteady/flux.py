"""Closed-form fluid fluxes at steady state.

Sign convention: ``j_U < 0`` is flow toward the peritoneal cavity (x = 0).
``q_U`` is the density of fluid flux from blood into tissue.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Union

import numpy as np

from .bessel import i0e, i1e, k0e, k1e
from .params import (
    ConstantNu,
    LinearNu,
    ParameterError,
    ParameterSet,
    default_nu_m,
    nondimensionalize,
    require_restriction,
)


# -- dimensional transport laws -------------------------------------------

def tissue_fluid_flux(params: ParameterSet, nu, dP, dC_G, dC_A):
    """Fluid flux across tissue from dimensional gradients (per cm of X)."""
    p = params
    return nu * p.K * (-dP + p.tissue_sigma_G * p.RT * dC_G + p.tissue_sigma_A * p.gamma * p.RT * dC_A)


def capillary_fluid_flux(params: ParameterSet, P, C_G, C_A):
    """Density of fluid flux from blood to tissue at local state (P, C_G, C_A)."""
    p = params
    return (
        p.Lp_a * (p.P_B - P)
        - p.Lp_a * p.sigma_G * p.RT * (p.C_GB - C_G)
        - p.gamma * p.Lp_a * p.sigma_A * p.RT * (p.C_AB - C_A)
    )


def glucose_source(params: ParameterSet, C_G, q_U):
    p = params
    return (
        p.pG_a * (p.C_GB - C_G)
        + p.S_G * q_U * ((1.0 - p.F_G) * p.C_GB + p.F_G * C_G)
        - p.q_l * C_G
    )


def albumin_source(params: ParameterSet, C_A, q_U):
    p = params
    return (
        p.pA_a * (p.C_AB - C_A)
        + p.S_A * q_U * ((1.0 - p.F_A) * p.C_AB + p.F_A * C_A)
        - p.q_l * C_A
    )


# -- spatially constant steady state --------------------------------------

@dataclass(frozen=True)
class SteadyStateConstants:
    C_G_star: float
    C_A_star: float
    P_star: float


def constant_steady_state(params: ParameterSet) -> SteadyStateConstants:
    """Spatially uniform state with q_U = q_l and zero capillary solute exchange.

    The pressure includes the blood concentrations ``C_GB``, ``C_AB`` in the
    osmotic terms; without them the expression is not dimensionally
    consistent and does not satisfy the balance equations.
    """
    p = params
    den_G = p.pG_a + p.q_l * (1.0 - p.S_G * p.F_G)
    den_A = p.pA_a + p.q_l * (1.0 - p.S_A * p.F_A)
    C_G = (p.pG_a + p.q_l * p.S_G * (1.0 - p.F_G)) / den_G * p.C_GB
    C_A = (p.pA_a + p.q_l * p.S_A * (1.0 - p.F_A)) / den_A * p.C_AB
    osmotic = p.sigma_G**2 * p.C_GB / den_G + p.gamma * p.sigma_A**2 * p.C_AB / den_A
    P = p.P_B - p.q_l * (1.0 / p.Lp_a + p.RT * osmotic)
    return SteadyStateConstants(C_G, C_A, P)


# -- boundary flux ---------------------------------------------------------

def boundary_flux_density(params: ParameterSet) -> float:
    """q_U at x = 0 where (p, u, w) take their dialysate boundary values."""
    require_restriction(params)
    g = nondimensionalize(params)
    p = params
    factor = p.Lp_a * p.L**2 / p.K
    w_star = (p.C_AD - p.C_AB) / (p.C_GD - p.C_GB)
    return factor * ((g.p0 - 1.0) / g.t0 + g.sigma1 + g.sigma2 * w_star)


# -- flux profiles ---------------------------------------------------------

@dataclass(frozen=True)
class ConstantNuFlux:
    C1: float
    C2: float
    lam: float
    q_l: float
    q0: float
    L: float
    nu_m: float

    case = "constant-nu"

    @property
    def void_volume(self) -> ConstantNu:
        return ConstantNu(self.nu_m)

    def excess(self, x):
        """q_U - q_l."""
        x = np.asarray(x, dtype=float)
        return self.C1 * np.exp(-self.lam * x) + self.C2 * np.exp(self.lam * x)

    def q_U(self, x):
        return self.excess(x) + self.q_l

    def j_U(self, x):
        x = np.asarray(x, dtype=float)
        return self.L / self.lam * (-self.C1 * np.exp(-self.lam * x) + self.C2 * np.exp(self.lam * x))

    def nu(self, x):
        return self.void_volume.nu(x)

    def dnu(self, x):
        return self.void_volume.dnu(x)

    def summary(self) -> dict:
        return {"q0": self.q0, "lambda": self.lam, "C1": self.C1, "C2": self.C2, "nu_m": self.nu_m}


@dataclass(frozen=True)
class LinearNuFlux:
    """Bessel-function flux for the linearly decreasing void volume.

    ``C1`` and ``C2`` are reported for reference; evaluation goes through
    exponentially scaled Bessel functions so that large arguments
    (nearly constant void volume) neither overflow nor lose accuracy.
    """

    C1: float
    C2: float
    delta_star: float
    nu_star: float
    q_l: float
    q0: float
    L: float
    nu_max: float
    nu_min: float

    case = "linear-nu"

    @property
    def void_volume(self) -> LinearNu:
        return LinearNu(self.nu_max, self.nu_min)

    @cached_property
    def _ends(self):
        y0 = 2.0 * math.sqrt(self.delta_star * self.nu_star)
        y1 = 2.0 * math.sqrt(self.delta_star * (self.nu_star - 1.0))
        norm = i0e(y0) * k1e(y1) + math.exp(2.0 * (y1 - y0)) * k0e(y0) * i1e(y1)
        return y0, y1, norm

    def argument(self, x):
        return 2.0 * np.sqrt(self.delta_star * (self.nu_star - np.asarray(x, dtype=float)))

    def _terms(self, x):
        """(C1 I0, C1 I1, C2 K0, C2 K1) at the Bessel argument of x, and y."""
        y0, y1, norm = self._ends
        y = self.argument(x)
        drive = self.q0 - self.q_l
        a = drive * k1e(y1) * np.exp(y - y0) / norm
        b = drive * i1e(y1) * np.exp(2.0 * y1 - y - y0) / norm
        return a * i0e(y), a * i1e(y), b * k0e(y), b * k1e(y), y

    def excess(self, x):
        a0, _, b0, _, _ = self._terms(x)
        return a0 + b0

    def q_U(self, x):
        return self.excess(x) + self.q_l

    def divergence_coefficient(self, x):
        """g(x) = sqrt(nu* - x) (C1 I1(y) - C2 K1(y)); j_U = -L g / sqrt(delta*)."""
        _, a1, _, b1, _ = self._terms(x)
        s = np.sqrt(self.nu_star - np.asarray(x, dtype=float))
        return s * (a1 - b1)

    def divergence_coefficient_derivative(self, x):
        """dg/dx from dI1/dy = I0 - I1/y, dK1/dy = -K0 - K1/y and dy/dx = -sqrt(delta*)/s."""
        a0, a1, b0, b1, y = self._terms(x)
        s = np.sqrt(self.nu_star - np.asarray(x, dtype=float))
        dy_dx = -math.sqrt(self.delta_star) / s
        return -(a1 - b1) / (2.0 * s) + s * dy_dx * ((a0 - a1 / y) + (b0 + b1 / y))

    def j_U(self, x):
        return -self.L * self.divergence_coefficient(x) / math.sqrt(self.delta_star)

    def nu(self, x):
        return self.void_volume.nu(x)

    def dnu(self, x):
        return self.void_volume.dnu(x)

    def summary(self) -> dict:
        y0, y1, _ = self._ends
        out = {
            "q0": self.q0,
            "delta_star": self.delta_star,
            "nu_star": self.nu_star,
            "argument_x0": y0,
            "argument_x1": y1,
        }
        # the unscaled constants over/underflow for a nearly constant void volume
        for name in ("C1", "C2"):
            value = getattr(self, name)
            if math.isfinite(value) and value != 0.0:
                out[name] = value
        return out


FluxProfile = Union[ConstantNuFlux, LinearNuFlux]


def flux_profile_constant_nu(params: ParameterSet, nu_m: Optional[float] = None) -> ConstantNuFlux:
    if nu_m is None:
        nu_m = default_nu_m(params)
    if not params.nu_min <= nu_m <= params.nu_max:
        raise ParameterError([("nu_m", nu_m, f"nu_min <= nu_m <= nu_max ({params.nu_min}, {params.nu_max})")])
    q0 = boundary_flux_density(params)
    lam = math.sqrt(params.Lp_a * params.L**2 / (params.K * nu_m))
    e2 = math.exp(-2.0 * lam)
    # C1 = (q0-ql) e^{2λ}/(1+e^{2λ}), C2 = (q0-ql)/(1+e^{2λ}), written to avoid overflow
    C1 = (q0 - params.q_l) / (1.0 + e2)
    C2 = (q0 - params.q_l) * e2 / (1.0 + e2)
    return ConstantNuFlux(C1=C1, C2=C2, lam=lam, q_l=params.q_l, q0=q0, L=params.L, nu_m=nu_m)


def flux_profile_linear_nu(params: ParameterSet) -> LinearNuFlux:
    spread = params.nu_max - params.nu_min
    if spread <= 0:
        raise ParameterError([("nu_max", params.nu_max, "nu_max > nu_min")])
    q0 = boundary_flux_density(params)
    delta_star = params.Lp_a * params.L**2 / (params.K * spread)
    nu_star = params.nu_max / spread
    y0 = 2.0 * math.sqrt(delta_star * nu_star)
    y1 = 2.0 * math.sqrt(delta_star * (nu_star - 1.0))
    norm = i0e(y0) * k1e(y1) + math.exp(2.0 * (y1 - y0)) * k0e(y0) * i1e(y1)
    drive = q0 - params.q_l
    with np.errstate(over="ignore", under="ignore"):
        C1 = float(drive * k1e(y1) * np.exp(-y0) / norm)
        C2 = float(drive * i1e(y1) * np.exp(2.0 * y1 - y0) / norm)
    return LinearNuFlux(
        C1=C1,
        C2=C2,
        delta_star=delta_star,
        nu_star=nu_star,
        q_l=params.q_l,
        q0=q0,
        L=params.L,
        nu_max=params.nu_max,
        nu_min=params.nu_min,
    )


def flux_profile(params: ParameterSet, case: str, nu_m: Optional[float] = None) -> FluxProfile:
    if case == "constant-nu":
        return flux_profile_constant_nu(params, nu_m)
    if case == "linear-nu":
        return flux_profile_linear_nu(params)
    raise ValueError(f"unknown case {case!r}; expected 'constant-nu' or 'linear-nu'")
