"""Contraction solver, direct oracle, and the subspace (Galerkin) path."""

import math

import numpy as np
import pytest

from coercive import (
    BilinearForm,
    FormConstants,
    InconsistentConstants,
    LinearForm,
    NotCoercive,
    RhoOutOfRange,
    SingularSystem,
    VariationalProblem,
    contraction_factor,
    estimate_lipschitz,
    euclidean,
    galerkin_solve,
    make_space,
    make_subspace,
    project,
    rho_policy,
    solve,
    solve_direct,
)
from coercive.checks import random_coercive_problem, random_subspace
from coercive.fixpoint import ContractionMap
from coercive.solver import iteration_map


class TestRhoPolicy:
    def test_equal_constants(self):
        interval, rho_star, k_star = rho_policy(1.0, 1.0)
        assert interval == (0.0, 2.0)
        assert rho_star == 1.0
        assert k_star == 0.0

    def test_hand_values(self):
        interval, rho_star, k_star = rho_policy(1.0, 2.0)
        assert interval == (0.0, 0.5)
        assert rho_star == 0.25
        assert k_star == pytest.approx(math.sqrt(3.0) / 2.0, rel=1e-15)

    def test_every_admissible_rho_contracts(self):
        alpha, c = 0.7, 2.3
        interval, _, _ = rho_policy(alpha, c)
        for frac in (1e-6, 0.25, 0.5, 0.75, 1.0 - 1e-6):
            rho = interval[1] * frac
            assert contraction_factor(rho, alpha, c) < 1.0

    def test_rejects_nonpositive_alpha(self):
        with pytest.raises(NotCoercive):
            rho_policy(0.0, 1.0)
        with pytest.raises(NotCoercive):
            rho_policy(-1.0, 1.0)

    def test_rejects_alpha_above_continuity(self):
        with pytest.raises(InconsistentConstants):
            rho_policy(2.0, 1.0)


class TestContractionFactor:
    def test_small_rho_taylor_limit(self):
        # 1 - 2 rho alpha + rho^2 C^2 at rho = 1e-9, alpha = C = 1
        value = contraction_factor(1e-9, 1.0, 1.0)
        assert value == pytest.approx(1.0 - 1e-9, abs=1e-12)

    def test_optimal_rho_kills_the_factor(self):
        assert contraction_factor(1.0, 1.0, 1.0) == 0.0

    def test_boundary_rho_excluded(self):
        alpha, c = 0.8, 1.5
        boundary = 2.0 * alpha / c**2
        # at the endpoint the radical evaluates to exactly one
        assert 1.0 - 2.0 * boundary * alpha + boundary**2 * c**2 == pytest.approx(1.0)
        with pytest.raises(RhoOutOfRange):
            contraction_factor(boundary, alpha, c)
        with pytest.raises(RhoOutOfRange):
            contraction_factor(0.0, alpha, c)

    def test_empirical_lipschitz_below_formula(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            problem = random_coercive_problem(rng, 4)
            from coercive.forms import coercivity_constant, continuity_constant

            alpha = coercivity_constant(problem.space, problem.a)
            c = continuity_constant(problem.space, problem.a)
            rho = float(rng.uniform(0.1, 1.9)) * alpha / c**2
            k = contraction_factor(rho, alpha, c)
            cmap = ContractionMap(problem.space, iteration_map(problem, rho), k)
            assert estimate_lipschitz(cmap, 30, rng_seed=1) <= k + 1e-10


class TestSolve:
    def test_identity_problem_single_iteration(self):
        problem = VariationalProblem(
            euclidean(2), BilinearForm(np.eye(2)), LinearForm([1.0, 0.0])
        )
        report = solve(problem, tol=1e-12)
        np.testing.assert_allclose(report.solution, [1.0, 0.0], atol=1e-14)
        assert report.iterations == 1
        assert report.rho == 1.0
        assert report.contraction_k == 0.0

    def test_triangular_system(self):
        """Testing the equation on basis vectors gives M^T c = f: c = (1/2, 1/4)."""
        problem = VariationalProblem(
            euclidean(2),
            BilinearForm([[2.0, 1.0], [0.0, 2.0]]),
            LinearForm([1.0, 1.0]),
        )
        direct = solve_direct(problem)
        np.testing.assert_allclose(direct, [0.5, 0.25], atol=1e-15)
        report = solve(problem, tol=1e-10)
        assert problem.space.distance(report.solution, direct) <= 1e-9

    def test_solution_estimate_and_residual(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            problem = random_coercive_problem(rng, 50)
            report = solve(problem, tol=1e-10)
            assert report.estimate_lhs <= report.estimate_rhs * (1.0 + 1e-10)
            f_dual = report.estimate_rhs  # ||f||'/alpha >= ||f||'
            assert report.residual <= 1e-9 * max(1.0, f_dual)

    def test_supplied_constants_are_clamped(self):
        problem = VariationalProblem(
            euclidean(2),
            BilinearForm(np.eye(2)),
            LinearForm([1.0, 0.0]),
            constants=FormConstants(continuity_C=1.0, coercivity_alpha=1.0 + 1e-13),
        )
        report = solve(problem, tol=1e-12)
        np.testing.assert_allclose(report.solution, [1.0, 0.0], atol=1e-12)

    def test_inconsistent_constants_rejected(self):
        problem = VariationalProblem(
            euclidean(2),
            BilinearForm(np.eye(2)),
            LinearForm([1.0, 0.0]),
            constants=FormConstants(continuity_C=1.0, coercivity_alpha=2.0),
        )
        with pytest.raises(InconsistentConstants):
            solve(problem)

    def test_noncoercive_rejected(self):
        problem = VariationalProblem(
            euclidean(2), BilinearForm([[0.0, 1.0], [-1.0, 0.0]]), LinearForm([1.0, 0.0])
        )
        with pytest.raises(NotCoercive):
            solve(problem)

    def test_rho_out_of_range_rejected(self):
        problem = VariationalProblem(
            euclidean(2), BilinearForm(np.eye(2)), LinearForm([1.0, 0.0])
        )
        with pytest.raises(RhoOutOfRange):
            solve(problem, rho=3.0)

    def test_uniqueness_across_rho(self):
        rng = np.random.default_rng(2)
        tol = 1e-11
        for _ in range(10):
            problem = random_coercive_problem(rng, 5)
            from coercive.forms import coercivity_constant, continuity_constant

            alpha = coercivity_constant(problem.space, problem.a)
            c = continuity_constant(problem.space, problem.a)
            u1 = solve(problem, tol=tol).solution
            u2 = solve(problem, rho=0.4 * alpha / c**2, tol=tol).solution
            assert problem.space.distance(u1, u2) <= 20.0 * tol

    def test_report_serialization(self):
        problem = VariationalProblem(
            euclidean(2), BilinearForm(np.eye(2)), LinearForm([1.0, 0.0])
        )
        d = solve(problem, tol=1e-12).to_dict()
        assert set(d) == {
            "solution",
            "rho",
            "contraction_k",
            "iterations",
            "estimate_lhs",
            "estimate_rhs",
            "residual",
            "step_norms",
        }


class TestSolveDirect:
    def test_identity(self):
        problem = VariationalProblem(
            euclidean(2), BilinearForm(np.eye(2)), LinearForm([0.3, -0.7])
        )
        np.testing.assert_array_equal(solve_direct(problem), [0.3, -0.7])

    def test_singular_matrix(self):
        problem = VariationalProblem(
            euclidean(2), BilinearForm([[1.0, 1.0], [1.0, 1.0]]), LinearForm([1.0, 0.0])
        )
        with pytest.raises(SingularSystem):
            solve_direct(problem)

    def test_agreement_with_iterative_path(self):
        rng = np.random.default_rng(3)
        tol = 1e-10
        for _ in range(20):
            problem = random_coercive_problem(rng, int(rng.choice([2, 5, 20])))
            u_iter = solve(problem, tol=tol).solution
            assert problem.space.distance(u_iter, solve_direct(problem)) <= 10.0 * tol


class TestGalerkin:
    def test_full_space_subspace_recovers_solution(self):
        rng = np.random.default_rng(4)
        problem = random_coercive_problem(rng, 4)
        sub = make_subspace(problem.space, np.eye(4))
        report = galerkin_solve(problem, sub, tol=1e-13)
        u = solve(problem, tol=1e-13).solution
        assert problem.space.distance(report.u_h, u) <= 1e-10
        scale = max(1.0, problem.space.norm(u))
        for _, lhs, _ in report.cea_checks:
            assert lhs <= 1e-10 * scale

    def test_axis_subspace_hand_case(self):
        problem = VariationalProblem(
            euclidean(2), BilinearForm(np.eye(2)), LinearForm([1.0, 1.0])
        )
        sub = make_subspace(problem.space, [[1.0], [0.0]])
        report = galerkin_solve(problem, sub, tol=1e-13)
        np.testing.assert_allclose(report.u_h, [1.0, 0.0], atol=1e-11)
        # exact solution is (1, 1); error norm 1 is minimal over the axis
        for _, lhs, rhs in report.cea_checks:
            assert lhs == pytest.approx(1.0, abs=1e-11)
            assert lhs <= rhs * (1.0 + 1e-10)

    def test_orthogonality_and_cea_random_instances(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            problem = random_coercive_problem(rng, 6)
            sub = random_subspace(rng, problem.space, int(rng.integers(1, 6)))
            report = galerkin_solve(problem, sub, cea_candidates=15, tol=1e-13)
            assert report.orthogonality_residual <= 1e-10
            for _, lhs, rhs in report.cea_checks:
                assert lhs <= rhs * (1.0 + 1e-10)

    def test_symmetric_form_gives_energy_projection(self):
        """For symmetric coercive forms u_h is the projection of u in the
        geometry the form itself induces; a candidate sweep in that norm
        cannot beat it."""
        rng = np.random.default_rng(6)
        space = euclidean(4)
        raw = rng.standard_normal((4, 4))
        m = raw @ raw.T + 4.0 * np.eye(4)
        problem = VariationalProblem(space, BilinearForm(m), LinearForm(rng.standard_normal(4)))
        sub = random_subspace(rng, space, 2)
        report = galerkin_solve(problem, sub, tol=1e-13)
        u = solve_direct(problem)

        energy = make_space((m + m.T) / 2.0)
        u_proj = project(make_subspace(energy, sub.basis), u)
        assert energy.distance(report.u_h, u_proj) <= 1e-9 * max(1.0, energy.norm(u))
        best = energy.distance(u, report.u_h)
        for _ in range(200):
            v_h = sub.basis @ rng.standard_normal(2)
            assert best <= energy.distance(u, v_h) + 1e-10

    def test_noncoercive_rejected(self):
        problem = VariationalProblem(
            euclidean(2), BilinearForm([[0.0, 1.0], [-1.0, 0.0]]), LinearForm([1.0, 0.0])
        )
        sub = make_subspace(problem.space, [[1.0], [0.0]])
        with pytest.raises(NotCoercive):
            galerkin_solve(problem, sub)

    def test_foreign_subspace_rejected(self):
        from coercive import DimensionMismatch

        problem = VariationalProblem(
            euclidean(2), BilinearForm(np.eye(2)), LinearForm([1.0, 1.0])
        )
        other = make_space([[2.0, 0.0], [0.0, 2.0]])
        sub = make_subspace(other, [[1.0], [0.0]])
        with pytest.raises(DimensionMismatch):
            galerkin_solve(problem, sub)

    def test_report_serialization(self):
        problem = VariationalProblem(
            euclidean(2), BilinearForm(np.eye(2)), LinearForm([1.0, 1.0])
        )
        sub = make_subspace(problem.space, [[1.0], [0.0]])
        d = galerkin_solve(problem, sub, tol=1e-12).to_dict()
        assert set(d) == {"u_h", "basis", "orthogonality_residual", "cea_checks"}
        assert all(set(c) == {"v_h", "lhs", "rhs"} for c in d["cea_checks"])


class TestFixedPointEquivalence:
    def test_solution_is_fixed_point_and_vice_versa(self):
        rng = np.random.default_rng(7)
        problem = random_coercive_problem(rng, 5)
        from coercive.forms import coercivity_constant, continuity_constant

        alpha = coercivity_constant(problem.space, problem.a)
        c = continuity_constant(problem.space, problem.a)
        g = iteration_map(problem, alpha / c**2)
        u = solve(problem, tol=1e-12).solution
        scale = max(1.0, problem.space.norm(u))
        assert problem.space.distance(g(u), u) <= 1e-10 * scale
        assert np.max(np.abs(problem.a.matrix.T @ u - problem.f.covector)) <= 1e-9 * scale
        v = u + rng.standard_normal(5)
        assert problem.space.distance(g(v), v) > 1e-6 * scale
        assert np.max(np.abs(problem.a.matrix.T @ v - problem.f.covector)) > 1e-6 * scale
