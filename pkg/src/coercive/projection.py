"""Subspaces, orthogonal projection, and direct-sum decomposition.

Two independent routes compute the projection of ``u`` onto a subspace
``F = span(columns of B)``:

* :func:`project` solves the normal equations ``(B^T G B) c = B^T G u`` in
  the Gram geometry — the characterization ``<v, w> = <u, w>`` for all
  ``w`` in ``F``.
* :func:`project_minseq` runs fixed-step gradient descent on the convex
  quadratic ``w -> ||u - w||^2`` over ``F``, producing a concrete minimizing
  sequence whose distances decrease monotonically to the infimum.

The second route exists to cross-check the first; they must agree to the
requested tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_solve

from .errors import BudgetExceeded, DimensionMismatch, RankDeficientBasis
from .spaces import HilbertSpace

__all__ = ["Subspace", "MinSeqReport", "make_subspace", "project", "project_minseq", "decompose"]

# Reduced-Gram Cholesky pivots below this multiple of the largest diagonal
# entry mean the columns are numerically dependent.
PIVOT_RTOL = 1e-12


@dataclass(frozen=True)
class Subspace:
    """Subspace of ``ambient`` spanned by the (independent) columns of ``basis``.

    ``reduced_gram`` is ``B^T G B`` and ``reduced_chol`` its Cholesky factor,
    both cached at construction; the factorization succeeding is the rank
    certificate.
    """

    ambient: HilbertSpace
    basis: np.ndarray
    reduced_gram: np.ndarray
    reduced_chol: np.ndarray

    @property
    def n_columns(self) -> int:
        return self.basis.shape[1]


def make_subspace(ambient: HilbertSpace, basis) -> Subspace:
    """Build a :class:`Subspace` from spanning columns.

    Parameters
    ----------
    basis : array_like, shape (dim, m)
        Columns are coefficient vectors of the spanning elements, 1 <= m <= dim.

    Raises
    ------
    RankDeficientBasis
        If the columns are dependent (Cholesky of ``B^T G B`` fails or a
        pivot falls below ``1e-12`` times the largest diagonal entry).
    """
    b = np.array(basis, dtype=float)
    if b.ndim == 1:
        b = b.reshape(-1, 1)
    if b.shape[0] != ambient.dim:
        raise DimensionMismatch(
            f"basis columns must have length {ambient.dim}, got shape {b.shape}"
        )
    if not 1 <= b.shape[1] <= ambient.dim:
        raise RankDeficientBasis(
            f"need between 1 and {ambient.dim} columns, got {b.shape[1]}"
        )
    reduced = b.T @ ambient.gram @ b
    reduced = (reduced + reduced.T) / 2.0
    try:
        chol = np.linalg.cholesky(reduced)
    except np.linalg.LinAlgError as exc:
        raise RankDeficientBasis(f"basis columns are dependent: {exc}") from exc
    pivots = np.diag(chol) ** 2
    floor = PIVOT_RTOL * float(np.max(np.diag(reduced)))
    if np.any(pivots < floor):
        raise RankDeficientBasis(
            f"reduced Gram pivot {pivots.min():.3e} below threshold {floor:.3e}"
        )
    b.setflags(write=False)
    reduced.setflags(write=False)
    chol.setflags(write=False)
    return Subspace(ambient=ambient, basis=b, reduced_gram=reduced, reduced_chol=chol)


def coordinates(sub: Subspace, u) -> np.ndarray:
    """Coefficients of the projection of ``u`` in the subspace basis."""
    cu = sub.ambient.coeffs(u)
    rhs = sub.basis.T @ (sub.ambient.gram @ cu)
    return cho_solve((sub.reduced_chol, True), rhs)


def project(sub: Subspace, u) -> np.ndarray:
    """Orthogonal projection of ``u`` onto the subspace, in ambient coordinates.

    The result ``v`` satisfies ``<u - v, w> = 0`` for every basis column ``w``.
    """
    return sub.basis @ coordinates(sub, u)


@dataclass(frozen=True)
class MinSeqReport:
    """Record of a minimizing sequence for ``w -> ||u - w||`` over a subspace.

    ``distances[n] = ||u - w_n||`` is nonincreasing; ``limit`` is the final
    iterate and ``delta`` the final (smallest) distance.
    """

    iterates: list[np.ndarray] = field(default_factory=list)
    distances: list[float] = field(default_factory=list)
    limit: np.ndarray = None
    delta: float = float("inf")


def project_minseq(sub: Subspace, u, tol: float, step_budget: int = 200_000) -> MinSeqReport:
    """Minimizing-sequence route to the orthogonal projection.

    Gradient descent on ``c -> ||u - B c||^2`` in subspace coordinates with
    the fixed step ``1 / lambda_max(B^T G B)``.  Stops once the ambient-norm
    distance to the true minimizer, ``sqrt(r^T A^{-1} r)`` with residual
    ``r = A c - b``, drops below ``tol``; the limit then lies within ``tol``
    of :func:`project` in the ambient norm.

    Raises :class:`BudgetExceeded` (with partial report) when the step budget
    runs out.
    """
    if tol <= 0.0:
        raise ValueError(f"tol must be positive, got {tol}")
    if step_budget < 1:
        raise ValueError(f"step_budget must be >= 1, got {step_budget}")
    space = sub.ambient
    cu = space.coeffs(u)
    a_mat = sub.reduced_gram
    rhs = sub.basis.T @ (space.gram @ cu)
    lam_max = float(np.linalg.eigvalsh(a_mat)[-1])
    step = 1.0 / lam_max

    c = np.zeros(sub.n_columns)
    iterates: list[np.ndarray] = []
    distances: list[float] = []
    for _ in range(step_budget):
        w = sub.basis @ c
        iterates.append(w)
        distances.append(space.distance(cu, w))
        residual = a_mat @ c - rhs
        err = float(np.sqrt(max(residual @ cho_solve((sub.reduced_chol, True), residual), 0.0)))
        if err <= tol:
            return MinSeqReport(
                iterates=iterates, distances=distances, limit=w, delta=distances[-1]
            )
        c = c - step * residual
    partial = MinSeqReport(
        iterates=iterates, distances=distances, limit=iterates[-1], delta=distances[-1]
    )
    raise BudgetExceeded(
        f"minimizing sequence did not reach tol {tol:.3e} in {step_budget} steps",
        report=partial,
    )


def decompose(sub: Subspace, u) -> tuple[np.ndarray, np.ndarray]:
    """Split ``u = v + w`` with ``v`` in the subspace and ``w`` orthogonal to it.

    ``v`` is the orthogonal projection; ``w = u - v`` satisfies
    ``<w, b> = 0`` for every basis column ``b`` up to roundoff.
    """
    cu = sub.ambient.coeffs(u)
    v = project(sub, cu)
    return v, cu - v
