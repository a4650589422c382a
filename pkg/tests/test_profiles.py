import warnings

import numpy as np
import pytest

from pdsteady.flux import constant_steady_state, flux_profile
from pdsteady.params import RestrictionError, nondimensionalize
from pdsteady.profiles import (
    NegativeAlbuminWarning,
    assemble_albumin_ode,
    assemble_glucose_ode,
    penetration_depth,
    recover_pressure,
    solve_profiles,
    steady_residual_check,
    steady_residuals,
    summarize,
    total_cavity_outflow,
)


def no_flux_params(paper):
    """No lymph and no driving difference at the boundary, so q_U = 0 everywhere."""
    return paper.replace(q_l=0.0, sigma_G=0.0, P_D=paper.P_B, C_AD=paper.C_AB)


# -- assembly ------------------------------------------------------------------

def test_flux_free_glucose_equation_reduces(paper):
    params = no_flux_params(paper)
    flux = flux_profile(params, "constant-nu")
    assert flux.C1 == 0.0 and flux.C2 == 0.0
    problem = assemble_glucose_ode(params, flux)
    x = np.linspace(0, 1, 7)
    g = nondimensionalize(params)
    np.testing.assert_array_equal(problem.b(x), 0.0)
    np.testing.assert_array_equal(problem.c(x), -params.pG_a)
    np.testing.assert_array_equal(problem.d(x), 0.0)
    np.testing.assert_array_equal(problem.a(x), g.d1 * flux.nu_m)


def test_glucose_reaction_coefficient_at_boundary(paper):
    flux = flux_profile(paper, "constant-nu")
    g = nondimensionalize(paper)
    assert g.f1 == pytest.approx(-0.4995, rel=1e-12)
    c0 = assemble_glucose_ode(paper, flux).c(np.array([0.0]))[0]
    assert c0 == pytest.approx(g.f1 * (flux.C1 + flux.C2) - g.kappa1, rel=1e-14)


@pytest.mark.parametrize("case", ["constant-nu", "linear-nu"])
@pytest.mark.parametrize("solute", ["glucose", "albumin"])
def test_coefficients_match_direct_expansion(paper, case, solute):
    """a = D nu, b = D nu' - S j_U / L, c = (S F - S)(q_U - q_l) - kappa at random x."""
    flux = flux_profile(paper, case)
    if solute == "glucose":
        problem = assemble_glucose_ode(paper, flux)
        D, S, F, kappa = paper.D_G / paper.L**2, paper.S_G, paper.F_G, paper.pG_a + (1 - paper.S_G * paper.F_G) * paper.q_l
    else:
        problem = assemble_albumin_ode(paper, flux)
        D, S, F = paper.alpha * paper.D_A / paper.L**2, paper.S_A, paper.F_A
        kappa = paper.pA_a + (1 - paper.S_A * paper.F_A) * paper.q_l
    x = np.random.default_rng(7).random(20)
    q_U, j_U = flux.q_U(x), flux.j_U(x)
    np.testing.assert_allclose(problem.a(x), D * flux.nu(x), rtol=1e-14)
    np.testing.assert_allclose(problem.b(x), D * flux.dnu(x) - S * j_U / paper.L, rtol=1e-12, atol=1e-20)
    np.testing.assert_allclose(problem.c(x), (S * F - S) * (q_U - paper.q_l) - kappa, rtol=1e-12)
    # the glucose form written with b1 = pG_a + q_l
    if solute == "glucose":
        b1 = paper.pG_a + paper.q_l
        np.testing.assert_allclose(problem.c(x), (S * F - S) * q_U + S * paper.q_l - b1, rtol=1e-12)


def test_printed_form_flips_divergence_sign(paper):
    flux = flux_profile(paper, "linear-nu")
    derived = assemble_glucose_ode(paper, flux, "derived")
    printed = assemble_glucose_ode(paper, flux, "printed")
    x = np.linspace(0, 1, 9)
    dnu_term = paper.D_G * flux.dnu(x)
    np.testing.assert_allclose(printed.b(x) - dnu_term, -(derived.b(x) - dnu_term), rtol=1e-12)
    with pytest.raises(ValueError, match="linear_nu_form"):
        assemble_glucose_ode(paper, flux, "other")


def test_albumin_equilibrium(paper):
    params = no_flux_params(paper)
    sol = solve_profiles(params, "constant-nu", N=200)
    g = nondimensionalize(params)
    np.testing.assert_allclose(sol.w, g.w0, rtol=1e-12)
    np.testing.assert_allclose(sol.p, g.p0, rtol=1e-12)
    np.testing.assert_allclose(sol.P, params.P_B, rtol=1e-12)


def test_solver_requires_restriction(paper):
    with pytest.raises(RestrictionError):
        solve_profiles(paper.replace(sigma_TG=0.01))


def test_unknown_case(paper):
    with pytest.raises(ValueError, match="case"):
        solve_profiles(paper, "quadratic-nu")


# -- reference solutions ------------------------------------------------------------

@pytest.mark.parametrize("case", ["constant-nu", "linear-nu"])
def test_boundary_conditions(case, constant_solution, linear_solution):
    sol = constant_solution if case == "constant-nu" else linear_solution
    assert sol.u[0] == 1.0
    assert sol.w[0] == 0.0  # C_AD = 0
    assert sol.p[0] == pytest.approx(1.0, abs=1e-10)
    h = 1.0 / sol.N
    for y in (sol.u, sol.w, sol.p):
        slope = (3 * y[-1] - 4 * y[-2] + y[-3]) / (2 * h)
        assert abs(slope) <= 10 * h**2 * np.max(np.abs(y))


def test_pressure_is_defined_by_recovery_formula(constant_solution):
    s = constant_solution
    np.testing.assert_array_equal(recover_pressure(s.x, s.u, s.w, s.flux, s.groups, s.params), s.p)


def test_glucose_penetration(constant_solution):
    s = constant_solution
    assert np.all(np.diff(s.u) <= 1e-8)
    assert np.interp(0.15, s.x, s.u) <= 0.02
    depth = penetration_depth(s)
    assert depth is not None and depth < 0.15
    assert penetration_depth(s, threshold=-1.0) is None


def test_albumin_plateau(constant_solution):
    s = constant_solution
    assert np.all(np.abs(s.w[s.x > 0.05] - 0.0034) <= 5e-4)
    g = s.groups
    assert np.all(np.abs(s.w[s.x > 0.5] - g.w0) <= 0.05 * g.w0)


def test_pressure_bracket(constant_solution, linear_solution):
    for s in (constant_solution, linear_solution):
        assert np.all((s.P >= 0.0) & (s.P <= 15.0))


def test_dimensional_companions(constant_solution):
    s = constant_solution
    dC = s.params.C_GD - s.params.C_GB
    np.testing.assert_allclose(s.C_G, s.params.C_GB + s.u * dC, rtol=1e-15)
    np.testing.assert_allclose(s.C_A, s.w * dC, rtol=1e-15)
    np.testing.assert_allclose(s.P, s.params.P_0 + s.p * (s.params.P_D - s.params.P_0), rtol=1e-15)


def test_diagnostics(constant_solution):
    d = constant_solution.diagnostics
    assert d["system_residual_u"] <= 1e-10 and d["system_residual_w"] <= 1e-10
    assert 1 < d["condition_u"] < 1e8 and 1 < d["condition_w"] < 1e8
    assert constant_solution.warnings == ()


# -- negative albumin ---------------------------------------------------------------

def test_printed_linear_form_goes_negative_with_warning(paper):
    with pytest.warns(NegativeAlbuminWarning, match="negative albumin"):
        s = solve_profiles(paper.replace(pA_a=2e-4), "linear-nu", linear_nu_form="printed")
    assert s.w.min() < 0  # reported, never clamped
    assert 0 < s.x[np.argmin(s.w)] < 0.2
    assert len(s.warnings) == 1


@pytest.mark.parametrize("pA_a", [5e-4, 3e-4, 2e-4])
def test_derived_linear_form_keeps_albumin_nonnegative(paper, pA_a):
    with warnings.catch_warnings():
        warnings.simplefilter("error", NegativeAlbuminWarning)
        s = solve_profiles(paper.replace(pA_a=pA_a), "linear-nu")
    assert s.w.min() == 0.0 == s.w[0]


# -- residual checks ----------------------------------------------------------------

def test_flat_steady_state_has_no_residual(paper):
    s = constant_steady_state(paper)
    x = np.linspace(0, 1, 101)
    flat = [np.full_like(x, v) for v in (s.P_star, s.C_G_star, s.C_A_star)]
    r = steady_residuals(x, *flat, 0.26, paper)
    assert max(r.fluid_relative, r.glucose_relative, r.albumin_relative) <= 1e-10


@pytest.mark.parametrize("case", ["constant-nu", "linear-nu"])
def test_residuals_shrink_under_refinement(paper, case):
    coarse = steady_residual_check(solve_profiles(paper, case, N=1000))
    fine = steady_residual_check(solve_profiles(paper, case, N=2000))
    assert coarse.fluid / fine.fluid == pytest.approx(4.0, rel=0.05)
    assert coarse.glucose / fine.glucose == pytest.approx(4.0, rel=0.1)
    assert coarse.albumin / fine.albumin > 2.5
    assert fine.glucose_relative < 1e-3 and fine.fluid_relative < 1e-5


def test_broken_restriction_leaves_residual(paper, constant_solution):
    good = steady_residual_check(constant_solution)
    broken = steady_residual_check(constant_solution, paper.replace(sigma_TG=0.01))
    assert broken.glucose_relative > 100 * good.glucose_relative
    assert broken.fluid_relative > 0.1


# -- outflow -------------------------------------------------------------------------

def test_outflow_values(constant_solution, linear_solution):
    c, l = total_cavity_outflow(constant_solution), total_cavity_outflow(linear_solution)
    assert c.signed < 0 and l.signed < 0
    assert c.magnitude == pytest.approx(0.4715, abs=1e-4)
    assert l.magnitude == pytest.approx(0.5124, abs=1e-4)
    assert total_cavity_outflow(constant_solution, contact_area=1.0).magnitude == pytest.approx(c.magnitude / 5000)


def test_outflow_without_drive_is_zero(paper):
    s = solve_profiles(no_flux_params(paper), N=100)
    assert total_cavity_outflow(s).signed == 0.0


def test_summary_contents(constant_solution):
    out = summarize(constant_solution, steady_residual_check(constant_solution))
    assert out["case"] == "constant-nu" and out["N"] == 2001
    assert out["flux"]["lambda"] == constant_solution.flux.lam
    assert out["outflow_magnitude"] == -out["outflow_signed"]
    assert out["residuals"]["N"] == 2001
    assert out["warnings"] == []
