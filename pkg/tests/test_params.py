import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pdsteady.params import (
    FIELDS,
    ConstantNu,
    LinearNu,
    NondimensionalizationError,
    ParameterError,
    ParameterSet,
    RestrictionError,
    default_nu_m,
    nondimensionalize,
    redimensionalize,
    require_restriction,
    scale_state,
    unscale_state,
    validate_parameters,
)

REFERENCE = dict(
    K=5.14e-5, RT=1.8e4, L=1.0, Lp_a=7.3e-5, q_l=0.26e-4, D_G=12.11e-5, D_A=0.2e-5,
    pG_a=3.4e-2, pA_a=3e-4, sigma_G=0.001, sigma_A=0.25, F_G=0.5, F_A=0.5,
    C_GB=6e-3, C_AB=0.6e-3, C_GD=180e-3, C_AD=0.0, P_B=15.0, P_D=12.0, P_0=0.0,
    nu_min=0.17, nu_max=0.35, nu_0=0.17, alpha=0.8, gamma=1.0,
)


def test_reference_set_accepted():
    params = ParameterSet(**REFERENCE)
    assert validate_parameters(params) is params
    assert params.contact_area == 5000.0


def test_bundled_set_matches_reference(paper):
    assert paper == ParameterSet(**REFERENCE)


def test_equal_glucose_concentrations_rejected(paper):
    with pytest.raises(NondimensionalizationError, match="nondimensionalization undefined"):
        validate_parameters(paper.replace(C_GD=paper.C_GB))


def test_void_volume_ordering_violation_names_both_bounds(paper):
    with pytest.raises(ParameterError) as info:
        validate_parameters(paper.replace(nu_min=0.4))
    names = {v[0] for v in info.value.violations}
    assert {"nu_min", "nu_max"} <= names
    assert "0.4" in str(info.value)


def test_all_violations_collected(paper):
    bad = paper.replace(K=-1.0, alpha=1.0, sigma_A=1.5, q_l=-1e-6)
    with pytest.raises(ParameterError) as info:
        validate_parameters(bad)
    assert {v[0] for v in info.value.violations} == {"K", "alpha", "sigma_A", "q_l"}


def test_equal_cavity_and_initial_pressure_rejected(paper):
    with pytest.raises(ParameterError, match="P_D"):
        validate_parameters(paper.replace(P_D=paper.P_0))


def test_non_finite_rejected(paper):
    with pytest.raises(ParameterError, match="finite"):
        validate_parameters(paper.replace(L=math.nan))


@pytest.mark.parametrize("name", ["F_G", "gamma"])
def test_upper_bound_one_inclusive(paper, name):
    validate_parameters(paper.replace(**{name: 1.0}))
    with pytest.raises(ParameterError):
        validate_parameters(paper.replace(**{name: 1.0 + 1e-12}))


def test_sieving_coefficients_derived(paper):
    assert paper.S_G == 1.0 - paper.sigma_G
    assert paper.S_A == 1.0 - paper.sigma_A
    assert "S_G" not in FIELDS
    with pytest.raises(TypeError):
        ParameterSet(**REFERENCE, S_G=0.5)


def test_groups_reference_values(paper):
    g = nondimensionalize(paper)
    assert g.t0 == pytest.approx(1621.3, abs=0.05)
    assert g.u0 == pytest.approx(0.034483, rel=1e-5)
    assert g.w0 == pytest.approx(0.0034483, rel=1e-5)
    assert g.p0 == 1.25
    assert g.sigma1 == pytest.approx(0.001 * 5.14e-5 * 1.8e4 * 0.174, rel=1e-14)
    assert g.sigma1 == pytest.approx(1.610e-4, rel=1e-3)
    assert g.f1 == pytest.approx(-0.4995, rel=1e-12)
    assert g.f1 <= 0 and g.f2 <= 0
    assert g.kappa1 > 0 and g.kappa2 > 0


def test_groups_match_defining_ratios(paper):
    g = nondimensionalize(paper)
    dC = paper.C_GD - paper.C_GB
    assert g.t0 == paper.L**2 / (paper.K * (paper.P_D - paper.P_0))
    assert g.u0 == paper.C_GB / dC
    assert g.w0 == paper.C_AB / dC
    assert g.p0 == (paper.P_B - paper.P_0) / (paper.P_D - paper.P_0)


def test_groups_deterministic(paper):
    assert nondimensionalize(paper) == nondimensionalize(paper)


def test_no_lymph_means_no_lymph_forcing(paper):
    g = nondimensionalize(paper.replace(q_l=0.0))
    assert g.u01 == 0.0 and g.w01 == 0.0


def test_restriction_zeroes_coupling(paper):
    g = nondimensionalize(paper)
    assert g.u0 * (paper.S_G - paper.S_TG) == 0.0
    assert g.w0 * (paper.S_A - paper.S_TA) == 0.0
    require_restriction(paper.replace(sigma_TG=paper.sigma_G, sigma_TA=paper.sigma_A))


def test_broken_restriction_rejected(paper):
    with pytest.raises(RestrictionError, match="sigma_TG"):
        require_restriction(paper.replace(sigma_TG=0.01))


@dataclasses.dataclass(frozen=True)
class _Profiles:
    x: np.ndarray
    u: np.ndarray
    w: np.ndarray
    p: np.ndarray
    X: object = None
    C_G: object = None
    C_A: object = None
    P: object = None


def test_redimensionalize_boundary_values(paper):
    g = nondimensionalize(paper)
    x = np.linspace(0, 1, 5)
    one = np.ones_like(x)
    out = redimensionalize(_Profiles(x, one, g.w0 * one, g.p0 * one), paper)
    np.testing.assert_allclose(out.C_G, paper.C_GD, rtol=1e-15)
    np.testing.assert_allclose(out.C_A, paper.C_AB, rtol=1e-15)
    np.testing.assert_allclose(out.P, paper.P_B, rtol=1e-15)
    np.testing.assert_array_equal(out.X, x * paper.L)
    assert out.u is one  # nondimensional fields preserved


finite = dict(allow_nan=False, allow_infinity=False)


@settings(max_examples=200, deadline=None)
@given(
    P=st.floats(-50, 50, **finite),
    C_G=st.floats(0, 1, **finite),
    C_A=st.floats(0, 1e-2, **finite),
)
def test_scaling_round_trip(paper, P, C_G, C_A):
    back = unscale_state(*scale_state(P, C_G, C_A, paper), paper)
    # cancellation against the offsets P_0 and C_GB sets the absolute floor
    for original, recovered, offset in zip((P, C_G, C_A), back, (paper.P_D, paper.C_GB, 0.0)):
        assert abs(recovered - original) <= 1e-14 * max(abs(original), abs(offset))


def test_void_volume_models(paper):
    assert default_nu_m(paper) == pytest.approx(0.26)
    x = np.linspace(0, 1, 11)
    lin = LinearNu(paper.nu_max, paper.nu_min)
    assert lin.nu(0.0) == paper.nu_max
    assert lin.nu(1.0) == pytest.approx(paper.nu_min, abs=1e-16)
    assert np.all((lin.nu(x) >= paper.nu_min - 1e-16) & (lin.nu(x) <= paper.nu_max))
    np.testing.assert_array_equal(lin.dnu(x), -(paper.nu_max - paper.nu_min))
    np.testing.assert_array_equal(ConstantNu(0.26).nu(x), 0.26)
