"""Dimensional parameters, validation, and nondimensional scaling.

All quantities use the clinical unit system (cm, min, mmHg, mmol/mL).
No unit conversion is performed anywhere in the package.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np


class ParameterError(ValueError):
    """Raised when a parameter set violates one or more constraints.

    ``violations`` holds ``(field, value, bound)`` triples.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        lines = [f"{name}={value!r} violates {bound}" for name, value, bound in self.violations]
        super().__init__("invalid parameters: " + "; ".join(lines))


class NondimensionalizationError(ParameterError):
    """C_GD equals C_GB, so the concentration scale is zero."""

    def __init__(self, value):
        super().__init__([("C_GD", value, "C_GD != C_GB (nondimensionalization undefined)")])


class RestrictionError(ValueError):
    """Tissue and capillary reflection coefficients differ."""


# field name -> (unit, description); order defines the config/CSV schema
FIELDS = {
    "K": ("cm^2 min^-1 mmHg^-1", "hydraulic permeability of tissue"),
    "RT": ("mmHg mmol^-1 mL", "gas constant times temperature"),
    "L": ("cm", "tissue width"),
    "Lp_a": ("mL min^-1 mmHg^-1 g^-1", "capillary hydraulic permeability times area density"),
    "q_l": ("mL min^-1 cm^-3", "lymphatic volumetric flux density"),
    "D_G": ("cm^2 min^-1", "glucose diffusivity in tissue"),
    "D_A": ("cm^2 min^-1", "albumin diffusivity in tissue"),
    "pG_a": ("mL min^-1 g^-1", "capillary diffusive permeability for glucose"),
    "pA_a": ("mL min^-1 g^-1", "capillary diffusive permeability for albumin"),
    "sigma_G": ("-", "glucose reflection coefficient, capillary wall"),
    "sigma_A": ("-", "albumin reflection coefficient, capillary wall"),
    "sigma_TG": ("-", "glucose reflection coefficient, tissue (defaults to sigma_G)"),
    "sigma_TA": ("-", "albumin reflection coefficient, tissue (defaults to sigma_A)"),
    "F_G": ("-", "glucose weighing factor"),
    "F_A": ("-", "albumin weighing factor"),
    "C_GB": ("mmol mL^-1", "blood glucose concentration"),
    "C_AB": ("mmol mL^-1", "blood albumin concentration"),
    "C_GD": ("mmol mL^-1", "dialysate glucose concentration"),
    "C_AD": ("mmol mL^-1", "dialysate albumin concentration"),
    "P_B": ("mmHg", "blood hydrostatic pressure"),
    "P_D": ("mmHg", "intraperitoneal hydrostatic pressure"),
    "P_0": ("mmHg", "initial interstitial hydrostatic pressure"),
    "nu_min": ("-", "minimal fractional void volume"),
    "nu_max": ("-", "maximal fractional void volume"),
    "nu_0": ("-", "reference fractional void volume (stored, unused)"),
    "alpha": ("-", "albumin-accessible fraction of void volume"),
    "gamma": ("-", "oncotic rescaling coefficient"),
    "contact_area": ("cm^2", "peritoneal contact surface"),
}

OPTIONAL_FIELDS = {"sigma_TG": None, "sigma_TA": None, "contact_area": 5000.0}


@dataclass(frozen=True)
class ParameterSet:
    """Dimensional model constants.

    ``sigma_TG``/``sigma_TA`` default to ``None``, meaning "equal to the
    capillary coefficient". Sieving coefficients are derived properties.
    """

    K: float
    RT: float
    L: float
    Lp_a: float
    q_l: float
    D_G: float
    D_A: float
    pG_a: float
    pA_a: float
    sigma_G: float
    sigma_A: float
    F_G: float
    F_A: float
    C_GB: float
    C_AB: float
    C_GD: float
    C_AD: float
    P_B: float
    P_D: float
    P_0: float
    nu_min: float
    nu_max: float
    nu_0: float
    alpha: float
    gamma: float
    sigma_TG: Optional[float] = None
    sigma_TA: Optional[float] = None
    contact_area: float = 5000.0

    @property
    def tissue_sigma_G(self) -> float:
        return self.sigma_G if self.sigma_TG is None else self.sigma_TG

    @property
    def tissue_sigma_A(self) -> float:
        return self.sigma_A if self.sigma_TA is None else self.sigma_TA

    @property
    def S_G(self) -> float:
        return 1.0 - self.sigma_G

    @property
    def S_A(self) -> float:
        return 1.0 - self.sigma_A

    @property
    def S_TG(self) -> float:
        return 1.0 - self.tissue_sigma_G

    @property
    def S_TA(self) -> float:
        return 1.0 - self.tissue_sigma_A

    @property
    def restricted(self) -> bool:
        """True when tissue and capillary reflection coefficients coincide."""
        return self.tissue_sigma_G == self.sigma_G and self.tissue_sigma_A == self.sigma_A

    def replace(self, **changes) -> "ParameterSet":
        return dataclasses.replace(self, **changes)

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in FIELDS}


def validate_parameters(raw: ParameterSet) -> ParameterSet:
    """Check every range constraint and return ``raw`` unchanged.

    Raises
    ------
    NondimensionalizationError
        If ``C_GD == C_GB``.
    ParameterError
        Listing every other violated bound.
    """
    bad = []

    def need(name, ok, bound):
        value = getattr(raw, name)
        if not ok:
            bad.append((name, value, bound))

    for name in FIELDS:
        value = getattr(raw, name)
        if value is None and name in OPTIONAL_FIELDS:
            continue
        if not isinstance(value, (int, float)) or not math.isfinite(value):
            bad.append((name, value, "finite real number"))
    if bad:
        raise ParameterError(bad)

    for name in ("K", "RT", "L", "Lp_a", "D_G", "D_A", "pG_a", "pA_a", "contact_area"):
        need(name, getattr(raw, name) > 0, "> 0")
    need("q_l", raw.q_l >= 0, ">= 0")
    for name in ("sigma_G", "sigma_A", "sigma_TG", "sigma_TA"):
        value = getattr(raw, name)
        if value is not None:
            need(name, 0 <= value <= 1, "0 <= sigma <= 1")
    need("F_G", 0 < raw.F_G <= 1, "0 < F_G <= 1")
    need("F_A", 0 < raw.F_A <= 1, "0 < F_A <= 1")
    need("alpha", 0 < raw.alpha < 1, "0 < alpha < 1")
    need("gamma", 0 < raw.gamma <= 1, "0 < gamma <= 1")
    need("nu_min", 0 < raw.nu_min < 1, "0 < nu_min < 1")
    need("nu_max", 0 < raw.nu_max < 1, "0 < nu_max < 1")
    need("nu_0", 0 < raw.nu_0 < 1, "0 < nu_0 < 1")
    if raw.nu_min >= raw.nu_max:
        bad.append(("nu_min", raw.nu_min, f"nu_min < nu_max (nu_max={raw.nu_max!r})"))
        bad.append(("nu_max", raw.nu_max, f"nu_max > nu_min (nu_min={raw.nu_min!r})"))
    for name in ("C_GB", "C_AB", "C_GD", "C_AD"):
        need(name, getattr(raw, name) >= 0, ">= 0")
    if raw.P_D == raw.P_0:
        bad.append(("P_D", raw.P_D, f"P_D != P_0 (P_0={raw.P_0!r}; time scale undefined)"))
    if bad:
        raise ParameterError(bad)
    if raw.C_GD == raw.C_GB:
        raise NondimensionalizationError(raw.C_GD)
    return raw


def require_restriction(params: ParameterSet) -> None:
    """Reject parameter sets whose tissue reflection coefficients differ from the capillary ones.

    All closed-form flux results assume ``sigma_TG == sigma_G`` and
    ``sigma_TA == sigma_A``.
    """
    if not params.restricted:
        raise RestrictionError(
            "steady-state solver requires sigma_TG == sigma_G and sigma_TA == sigma_A "
            f"(got sigma_TG={params.tissue_sigma_G!r}, sigma_G={params.sigma_G!r}, "
            f"sigma_TA={params.tissue_sigma_A!r}, sigma_A={params.sigma_A!r}); "
            "omit sigma_TG/sigma_TA or set them equal"
        )


@dataclass(frozen=True)
class DimensionlessGroups:
    sigma1: float
    sigma2: float
    d1: float
    d2: float
    b1: float
    b2: float
    u0: float
    w0: float
    p0: float
    t0: float
    f1: float
    f2: float
    kappa1: float
    kappa2: float
    u01: float
    w01: float
    w_boundary: float  # w at x = 0, C_AD / (C_GD - C_GB)


def nondimensionalize(params: ParameterSet) -> DimensionlessGroups:
    p = params
    dC = p.C_GD - p.C_GB
    L2 = p.L * p.L
    S_G, S_A = p.S_G, p.S_A
    u0 = p.C_GB / dC
    w0 = p.C_AB / dC
    return DimensionlessGroups(
        sigma1=p.tissue_sigma_G * p.K * p.RT * dC / L2,
        sigma2=p.tissue_sigma_A * p.K * p.RT * p.gamma * dC / L2,
        d1=p.D_G / L2,
        d2=p.alpha * p.D_A / L2,
        b1=p.pG_a + p.q_l,
        b2=p.pA_a + p.q_l,
        u0=u0,
        w0=w0,
        p0=(p.P_B - p.P_0) / (p.P_D - p.P_0),
        t0=L2 / (p.K * (p.P_D - p.P_0)),
        f1=S_G * p.F_G - S_G,
        f2=S_A * p.F_A - S_A,
        kappa1=p.pG_a + (1.0 - S_G * p.F_G) * p.q_l,
        kappa2=p.pA_a + (1.0 - S_A * p.F_A) * p.q_l,
        u01=p.sigma_G * u0 * p.q_l,
        w01=p.sigma_A * w0 * p.q_l,
        w_boundary=p.C_AD / dC,
    )


def scale_state(P, C_G, C_A, params: ParameterSet):
    """Forward scaling of dimensional ``(P, C_G, C_A)`` to ``(p, u, w)``."""
    dC = params.C_GD - params.C_GB
    p = (np.asarray(P, dtype=float) - params.P_0) / (params.P_D - params.P_0)
    u = (np.asarray(C_G, dtype=float) - params.C_GB) / dC
    w = np.asarray(C_A, dtype=float) / dC
    return p, u, w


def unscale_state(p, u, w, params: ParameterSet):
    """Inverse of :func:`scale_state`."""
    dC = params.C_GD - params.C_GB
    P = params.P_0 + np.asarray(p, dtype=float) * (params.P_D - params.P_0)
    C_G = params.C_GB + np.asarray(u, dtype=float) * dC
    C_A = np.asarray(w, dtype=float) * dC
    return P, C_G, C_A


def redimensionalize(solution, params: ParameterSet):
    """Attach dimensional ``C_G``, ``C_A``, ``P`` and position ``X`` to a solution.

    ``solution`` is any dataclass with ``x``, ``u``, ``w``, ``p`` fields and
    ``X``, ``C_G``, ``C_A``, ``P`` slots; a modified copy is returned.
    """
    P, C_G, C_A = unscale_state(solution.p, solution.u, solution.w, params)
    return dataclasses.replace(
        solution, X=np.asarray(solution.x) * params.L, C_G=C_G, C_A=C_A, P=P
    )


@dataclass(frozen=True)
class ConstantNu:
    nu_m: float

    def nu(self, x):
        return np.full_like(np.asarray(x, dtype=float), self.nu_m)

    def dnu(self, x):
        return np.zeros_like(np.asarray(x, dtype=float))


@dataclass(frozen=True)
class LinearNu:
    nu_max: float
    nu_min: float

    @property
    def slope(self) -> float:
        return -(self.nu_max - self.nu_min)

    def nu(self, x):
        return self.nu_max - (self.nu_max - self.nu_min) * np.asarray(x, dtype=float)

    def dnu(self, x):
        return np.full_like(np.asarray(x, dtype=float), self.slope)


def default_nu_m(params: ParameterSet) -> float:
    return 0.5 * (params.nu_max + params.nu_min)
