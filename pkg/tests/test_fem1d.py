"""P1 assembly on [0, 1], manufactured solutions, and convergence behavior."""

import math

import numpy as np
import pytest

from coercive import MeshInvalid, UnknownCase, solve, solve_direct
from coercive.fem1d import (
    CSV_HEADER,
    Mesh1D,
    assemble,
    convergence_study,
    full_nodal,
    h1_seminorm_error,
    manufactured,
    rows_to_csv,
)
from coercive.forms import coercivity_constant, continuity_constant


class TestMesh:
    def test_uniform(self):
        mesh = Mesh1D.uniform(4)
        np.testing.assert_allclose(mesh.nodes, [0.0, 0.25, 0.5, 0.75, 1.0])
        assert mesh.n_cells == 4
        assert mesh.h_max == 0.25

    def test_nonuniform_accepted(self):
        mesh = Mesh1D(np.array([0.0, 0.1, 0.5, 1.0]))
        assert mesh.n_cells == 3

    def test_bad_endpoints(self):
        with pytest.raises(MeshInvalid):
            Mesh1D(np.array([0.0, 0.5, 0.9]))

    def test_not_increasing(self):
        with pytest.raises(MeshInvalid):
            Mesh1D(np.array([0.0, 0.6, 0.4, 1.0]))


class TestAssemble:
    def test_single_interior_node(self):
        # h = 1/2 on both cells: stiffness entry 1/h + 1/h = 4
        case = manufactured("poisson-parabola")
        problem = assemble(case.pde, Mesh1D.uniform(2))
        np.testing.assert_array_equal(problem.space.gram, [[4.0]])
        np.testing.assert_array_equal(problem.a.matrix, [[4.0]])

    def test_pure_diffusion_constants_are_unit(self):
        case = manufactured("poisson-parabola")
        problem = assemble(case.pde, Mesh1D.uniform(8))
        assert problem.constants.continuity_C == 1.0
        assert problem.constants.coercivity_alpha == 1.0
        # the numerically computed constants agree
        assert continuity_constant(problem.space, problem.a) == pytest.approx(1.0, abs=1e-12)
        assert coercivity_constant(problem.space, problem.a) == pytest.approx(1.0, abs=1e-12)

    def test_constant_load_entries(self):
        # int of a hat function is h = 1/3
        case = manufactured("poisson-parabola")
        problem = assemble(case.pde, Mesh1D.uniform(3))
        np.testing.assert_allclose(problem.f.covector, [1.0 / 3.0, 1.0 / 3.0], atol=1e-15)

    def test_advection_reaction_change_matrix_not_gram(self):
        mesh = Mesh1D.uniform(8)
        base = assemble(manufactured("poisson-sine").pde, mesh)
        adr = assemble(manufactured("poisson-sine", beta=0.5, c=1.0).pde, mesh)
        np.testing.assert_array_equal(base.space.gram, adr.space.gram)
        assert not np.array_equal(base.a.matrix, adr.a.matrix)
        assert adr.constants is None

    def test_mesh_without_interior_rejected(self):
        case = manufactured("poisson-parabola")
        with pytest.raises(MeshInvalid):
            assemble(case.pde, Mesh1D(np.array([0.0, 1.0])))


class TestManufactured:
    def test_parabola_midpoint(self):
        case = manufactured("poisson-parabola")
        assert case.exact(np.array([0.5]))[0] == pytest.approx(0.125)

    def test_parabola_seminorm(self):
        # int_0^1 (1/2 - x)^2 dx = 1/12
        case = manufactured("poisson-parabola")
        assert case.h1_seminorm**2 == pytest.approx(1.0 / 12.0)

    def test_sine_seminorm(self):
        # int_0^1 pi^2 cos^2(pi x) dx = pi^2 / 2
        case = manufactured("poisson-sine")
        assert case.h1_seminorm**2 == pytest.approx(math.pi**2 / 2.0)

    def test_boundary_values_vanish(self):
        ends = np.array([0.0, 1.0])
        for name in ("poisson-parabola", "poisson-sine"):
            case = manufactured(name)
            np.testing.assert_allclose(case.exact(ends), [0.0, 0.0], atol=1e-15)

    def test_seminorm_matches_quadrature(self):
        """The closed-form seminorm agrees with the error-norm quadrature."""
        for name in ("poisson-parabola", "poisson-sine"):
            case = manufactured(name)
            mesh = Mesh1D.uniform(64)
            zero = np.zeros(mesh.n_cells - 1)
            assert h1_seminorm_error(mesh, zero, case.exact_grad) == pytest.approx(
                case.h1_seminorm, rel=1e-6
            )

    def test_unknown_case(self):
        with pytest.raises(UnknownCase):
            manufactured("poisson-unknown")


class TestPoissonSolves:
    def test_one_step_convergence(self):
        case = manufactured("poisson-parabola")
        problem = assemble(case.pde, Mesh1D.uniform(16))
        report = solve(problem, tol=1e-12)
        assert report.contraction_k == 0.0
        assert report.iterations == 1
        direct = solve_direct(problem)
        assert problem.space.distance(report.solution, direct) <= 1e-12

    def test_parabola_nodal_exactness(self):
        for n_cells in (4, 8, 32):
            case = manufactured("poisson-parabola")
            mesh = Mesh1D.uniform(n_cells)
            report = solve(assemble(case.pde, mesh), tol=1e-13)
            exact = case.exact(mesh.nodes[1:-1])
            assert np.max(np.abs(report.solution - exact)) <= 1e-12

    def test_nested_galerkin_orthogonality(self):
        """The defect against a 4x-finer nested solve is orthogonal to every
        coarse hat (constant forcing keeps the loads quadrature-exact)."""
        case = manufactured("poisson-parabola")
        for n_coarse in (4, 8):
            coarse = Mesh1D.uniform(n_coarse)
            fine = Mesh1D.uniform(4 * n_coarse)
            u_h = solve(assemble(case.pde, coarse), tol=1e-13).solution
            fine_problem = assemble(case.pde, fine)
            u_ref = solve(fine_problem, tol=1e-13).solution

            def embed(interior):
                nodal = full_nodal(coarse, interior)
                return np.interp(fine.nodes, coarse.nodes, nodal)[1:-1]

            err = u_ref - embed(u_h)
            space = fine_problem.space
            scale = max(1.0, space.norm(u_ref))
            for i in range(n_coarse - 1):
                hat = np.zeros(n_coarse - 1)
                hat[i] = 1.0
                hat_fine = embed(hat)
                value = abs(fine_problem.a(err, hat_fine))
                assert value <= 1e-9 * scale * space.norm(hat_fine)


class TestConvergence:
    def test_sine_first_order_rates(self):
        rows = convergence_study("poisson-sine", [8, 16, 32, 64])
        assert [r.n_cells for r in rows] == [8, 16, 32, 64]
        assert rows[0].rate is None
        for row in rows[1:]:
            assert 0.9 <= row.rate <= 1.1

    def test_levels_must_increase(self):
        with pytest.raises(ValueError):
            convergence_study("poisson-sine", [16, 8])

    def test_adr_cea_vs_interpolant(self):
        """With advection and reaction, the discrete constants bound the
        ratio of the solve error to the interpolant error."""
        beta, c = 0.5, 1.0
        case = manufactured("poisson-sine", beta=beta, c=c)
        for n_cells in (8, 16, 32):
            mesh = Mesh1D.uniform(n_cells)
            problem = assemble(case.pde, mesh)
            alpha = coercivity_constant(problem.space, problem.a)
            c_const = continuity_constant(problem.space, problem.a)
            assert 0.0 < alpha <= c_const * (1.0 + 1e-12)
            report = solve(problem, tol=1e-12)
            err = h1_seminorm_error(mesh, report.solution, case.exact_grad)
            interp = h1_seminorm_error(mesh, case.exact(mesh.nodes[1:-1]), case.exact_grad)
            assert err <= (c_const / alpha) * interp * (1.0 + 1e-9)

    def test_quadrature_refinement_shrinks_load_defect(self):
        case = manufactured("poisson-sine")
        diffs = []
        for n_cells in (8, 16, 32):
            mesh = Mesh1D.uniform(n_cells)
            f2 = assemble(case.pde, mesh, rhs_quadrature=2).f.covector
            f4 = assemble(case.pde, mesh, rhs_quadrature=4).f.covector
            diffs.append(np.max(np.abs(f2 - f4)))
        for coarse, fine in zip(diffs, diffs[1:]):
            assert fine <= coarse * (0.5**4) * 1.25

    def test_csv_rendering(self):
        rows = convergence_study("poisson-sine", [8, 16])
        text = rows_to_csv(rows)
        lines = text.strip().split("\n")
        assert lines[0] == CSV_HEADER
        assert len(lines) == 3
        assert lines[1].endswith(",")  # blank rate on the first level
        n_cells, h, err, rate = lines[2].split(",")
        assert n_cells == "16"
        assert float(h) == 0.0625
        assert 0.9 <= float(rate) <= 1.1
