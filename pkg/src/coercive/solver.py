"""Coercive variational problems solved by contraction iteration.

Given a Hilbert space with Gram matrix ``G``, a bilinear form ``M`` with
coercivity ``alpha > 0`` and continuity ``C``, and a linear form ``f``, the
problem *find u with a(u, v) = f(v) for all v* is equivalent to the fixed
point of the affine map

    g(c) = c - rho * G^{-1} M^T c + rho * G^{-1} f,

which is a contraction with factor ``sqrt(1 - 2 rho alpha + rho^2 C^2) < 1``
for any ``rho`` in ``(0, 2 alpha / C^2)``.  :func:`solve` runs that
iteration; :func:`solve_direct` is the independent dense-factorization
oracle for the same linear system ``M^T c = f``.

:func:`galerkin_solve` restricts the problem to a subspace (the restricted
triple ``B^T G B``, ``B^T M B``, ``B^T f`` is again a coercive problem and
is handed to the same solver), then measures the orthogonality of the error
against the subspace and evaluates the quasi-optimality bound
``||u - u_h|| <= (C / alpha) ||u - v_h||`` on a set of candidate members.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_solve

from . import fixpoint
from .errors import (
    DimensionMismatch,
    InconsistentConstants,
    NotCoercive,
    RhoOutOfRange,
    SingularSystem,
)
from .forms import BilinearForm, FormConstants, LinearForm, dual_norm, form_constants
from .projection import Subspace, project
from .spaces import HilbertSpace, make_space

__all__ = [
    "VariationalProblem",
    "SolveReport",
    "GalerkinReport",
    "rho_policy",
    "contraction_factor",
    "solve",
    "solve_direct",
    "galerkin_solve",
]

# Relative tolerance band within which a user-supplied alpha slightly above C
# is clamped to C rather than rejected.
CONSTANT_SLACK = 1e-12


@dataclass(frozen=True)
class VariationalProblem:
    """Problem data: find ``u`` with ``a(u, v) = f(v)`` for all ``v``.

    ``constants`` may be supplied by the caller (e.g. when known analytically);
    otherwise they are computed from the matrices at solve time.
    """

    space: HilbertSpace
    a: BilinearForm
    f: LinearForm
    constants: FormConstants | None = None


@dataclass(frozen=True)
class SolveReport:
    """Solver outcome with the quantitative estimates it must satisfy.

    ``estimate_lhs = ||u||`` and ``estimate_rhs = ||f||' / alpha`` realize the
    solution bound; ``residual`` is the largest defect ``|a(u, e_i) - f(e_i)|``
    over the basis vectors.
    """

    solution: np.ndarray
    rho: float
    contraction_k: float
    iterations: int
    estimate_lhs: float
    estimate_rhs: float
    residual: float
    step_norms: list[float] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "solution": np.asarray(self.solution).tolist(),
            "rho": self.rho,
            "contraction_k": self.contraction_k,
            "iterations": self.iterations,
            "estimate_lhs": self.estimate_lhs,
            "estimate_rhs": self.estimate_rhs,
            "residual": self.residual,
            "step_norms": list(self.step_norms),
        }


@dataclass(frozen=True)
class GalerkinReport:
    """Subspace solution with orthogonality and quasi-optimality evidence.

    ``cea_checks`` holds ``(v_h, lhs, rhs)`` triples with
    ``lhs = ||u - u_h||`` and ``rhs = (C / alpha) ||u - v_h||``.
    """

    u_h: np.ndarray
    subspace: Subspace
    orthogonality_residual: float
    cea_checks: list[tuple[np.ndarray, float, float]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "u_h": np.asarray(self.u_h).tolist(),
            "basis": np.asarray(self.subspace.basis).tolist(),
            "orthogonality_residual": self.orthogonality_residual,
            "cea_checks": [
                {"v_h": np.asarray(v).tolist(), "lhs": lhs, "rhs": rhs}
                for v, lhs, rhs in self.cea_checks
            ],
        }


def _validated_constants(problem: VariationalProblem) -> FormConstants:
    """Constants of the problem, computed if absent, clamped into alpha <= C."""
    constants = problem.constants
    if constants is None:
        constants = form_constants(problem.space, problem.a)
    alpha, c_const = constants.coercivity_alpha, constants.continuity_C
    if alpha > 0.0 and alpha > c_const * (1.0 + CONSTANT_SLACK):
        raise InconsistentConstants(f"alpha = {alpha} exceeds C = {c_const}")
    return FormConstants(continuity_C=c_const, coercivity_alpha=min(alpha, c_const))


def rho_policy(alpha: float, C: float) -> tuple[tuple[float, float], float, float]:
    """Admissible relaxation interval and its optimum.

    Returns ``((0, 2 alpha / C^2), rho_star, k_star)`` where
    ``rho_star = alpha / C^2`` minimizes the contraction factor and
    ``k_star = sqrt(1 - alpha^2 / C^2)`` is that minimum.  Every ``rho`` in
    the open interval yields a factor strictly below one.

    Raises
    ------
    NotCoercive
        If ``alpha <= 0``.
    InconsistentConstants
        If ``alpha > C * (1 + 1e-12)``.
    """
    if alpha <= 0.0:
        raise NotCoercive(f"coercivity constant must be positive, got alpha = {alpha}")
    if alpha > C * (1.0 + CONSTANT_SLACK):
        raise InconsistentConstants(f"alpha = {alpha} exceeds C = {C}")
    alpha = min(alpha, C)
    interval = (0.0, 2.0 * alpha / C**2)
    rho_star = alpha / C**2
    k_star = math.sqrt(max(0.0, 1.0 - (alpha / C) ** 2))
    return interval, rho_star, k_star


def contraction_factor(rho: float, alpha: float, C: float) -> float:
    """Contraction factor ``sqrt(1 - 2 rho alpha + rho^2 C^2)`` of the iteration map.

    Raises :class:`RhoOutOfRange` unless ``0 < rho < 2 alpha / C^2``.
    """
    interval, _, _ = rho_policy(alpha, C)
    if not interval[0] < rho < interval[1]:
        raise RhoOutOfRange(
            f"rho = {rho} outside the admissible interval (0, {interval[1]})"
        )
    return math.sqrt(max(0.0, 1.0 - 2.0 * rho * alpha + rho**2 * C**2))


def iteration_map(problem: VariationalProblem, rho: float):
    """The affine contraction ``c -> c - rho G^{-1} M^T c + rho G^{-1} f``."""
    space = problem.space
    p_mat = cho_solve((space.chol, True), problem.a.matrix.T)
    q_vec = rho * cho_solve((space.chol, True), problem.f.covector)

    def apply(c: np.ndarray) -> np.ndarray:
        return c - rho * (p_mat @ c) + q_vec

    return apply


def solve(
    problem: VariationalProblem,
    rho: float | None = None,
    tol: float = 1e-10,
    max_iter: int | None = None,
) -> SolveReport:
    """Solve the variational problem by contraction iteration.

    ``rho`` defaults to the optimal ``alpha / C^2``.  The returned solution
    lies within ``tol`` of the exact one in the space norm, and the report
    satisfies ``||u|| <= ||f||' / alpha`` up to a relative 1e-10.

    Raises
    ------
    NotCoercive
        If the (computed or supplied) coercivity constant is not positive.
    RhoOutOfRange
        If an explicit ``rho`` falls outside ``(0, 2 alpha / C^2)``.
    MaxIterationsExceeded
        Propagated from the iteration when the budget is exhausted.
    """
    constants = _validated_constants(problem)
    alpha, c_const = constants.coercivity_alpha, constants.continuity_C
    if alpha <= 0.0:
        raise NotCoercive(f"problem is not coercive (alpha = {alpha})")
    _, rho_star, _ = rho_policy(alpha, c_const)
    if rho is None:
        rho = rho_star
    k = contraction_factor(rho, alpha, c_const)

    cmap = fixpoint.ContractionMap(
        space=problem.space, apply=iteration_map(problem, rho), k=k
    )
    report = fixpoint.iterate(cmap, problem.space.zero(), tol=tol, max_iter=max_iter)
    u = report.fixed_point

    defect = problem.a.matrix.T @ u - problem.f.covector
    return SolveReport(
        solution=u,
        rho=rho,
        contraction_k=k,
        iterations=report.iterations,
        estimate_lhs=problem.space.norm(u),
        estimate_rhs=dual_norm(problem.space, problem.f) / alpha,
        residual=float(np.max(np.abs(defect))),
        step_norms=report.step_norms,
    )


def solve_direct(problem: VariationalProblem) -> np.ndarray:
    """Oracle solve: the linear system ``M^T c = f`` by dense factorization.

    Testing the variational equation on the basis vectors reduces it to this
    system, so the result must agree with :func:`solve` to solver tolerance.

    Raises :class:`SingularSystem` if the matrix is singular.
    """
    try:
        return np.linalg.solve(problem.a.matrix.T, problem.f.covector)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(f"direct solve failed: {exc}") from exc


def restricted_problem(problem: VariationalProblem, sub: Subspace) -> VariationalProblem:
    """The problem restricted to the subspace: triple ``B^T G B, B^T M B, B^T f``."""
    b = sub.basis
    gram_h = b.T @ problem.space.gram @ b
    gram_h = (gram_h + gram_h.T) / 2.0
    return VariationalProblem(
        space=make_space(gram_h),
        a=BilinearForm(b.T @ problem.a.matrix @ b),
        f=LinearForm(b.T @ problem.f.covector),
    )


def galerkin_solve(
    problem: VariationalProblem,
    sub: Subspace,
    cea_candidates: int = 20,
    tol: float = 1e-12,
    rng_seed: int = 0,
) -> GalerkinReport:
    """Solve on a subspace and verify orthogonality and quasi-optimality.

    The restriction of a coercive problem to a subspace is again coercive,
    so the same contraction solver runs on the restricted triple; the
    subspace solution is lifted back as ``u_h = B c_h``.

    ``orthogonality_residual`` is the largest normalized defect
    ``|a(u - u_h, b)| / ((||u - u_h|| + ||u||) ||b||)`` over basis columns
    ``b``; the denominator keeps the measure finite and meaningful when the
    subspace captures ``u`` exactly.  ``cea_checks`` evaluates the bound
    ``||u - u_h|| <= (C / alpha) ||u - v_h||`` for ``cea_candidates`` random
    subspace members plus the orthogonal projection of ``u`` (the minimizer,
    hence the tightest candidate).
    """
    constants = _validated_constants(problem)
    if constants.coercivity_alpha <= 0.0:
        raise NotCoercive(f"problem is not coercive (alpha = {constants.coercivity_alpha})")
    space = problem.space
    if sub.ambient is not space and not np.array_equal(sub.ambient.gram, space.gram):
        raise DimensionMismatch("subspace was built on a different ambient space")

    reduced = restricted_problem(problem, sub)
    c_h = solve(reduced, tol=tol).solution
    u_h = sub.basis @ c_h
    u = solve(problem, tol=tol).solution

    err = u - u_h
    err_norm = space.norm(err)
    u_norm = space.norm(u)
    residual = 0.0
    for col in range(sub.n_columns):
        b = sub.basis[:, col]
        b_norm = space.norm(b)
        denom = (err_norm + u_norm) * b_norm
        if denom == 0.0:
            continue
        residual = max(residual, abs(problem.a(err, b)) / denom)

    ratio = constants.continuity_C / constants.coercivity_alpha
    rng = np.random.default_rng(rng_seed)
    candidates = [sub.basis @ rng.standard_normal(sub.n_columns) for _ in range(cea_candidates)]
    candidates.append(project(sub, u))
    cea_checks = [
        (v_h, err_norm, ratio * space.distance(u, v_h)) for v_h in candidates
    ]

    return GalerkinReport(
        u_h=u_h,
        subspace=sub,
        orthogonality_residual=residual,
        cea_checks=cea_checks,
    )
