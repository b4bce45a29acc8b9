"""1D advection-diffusion-reaction problems on [0, 1] with P1 elements.

The weak form of ``-u'' + beta u' + c u = f`` with homogeneous Dirichlet
conditions is assembled over continuous piecewise-linear hat functions on a
mesh of (0, 1).  Boundary nodes are eliminated, so the unknowns are the
interior nodal values and the space's Gram matrix is the stiffness matrix
``int u' v'`` — the seminorm is a genuine norm there, and for the pure
diffusion case the bilinear form *is* the inner product, which makes
``alpha = C = 1`` exact and the contraction iteration converge in a single
step.

Stiffness, mass, and advection element integrals are closed-form for P1;
only the load vector and error norms use Gauss quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import MeshInvalid, UnknownCase
from .forms import BilinearForm, FormConstants, LinearForm
from .solver import SolveReport, VariationalProblem, solve
from .spaces import make_space

__all__ = [
    "Mesh1D",
    "Pde1D",
    "ManufacturedCase",
    "ConvergenceRow",
    "assemble",
    "manufactured",
    "convergence_study",
    "h1_seminorm_error",
    "rows_to_csv",
]

CSV_HEADER = "n_cells,h,h1_error,rate"


@dataclass(frozen=True)
class Mesh1D:
    """Partition of [0, 1] into cells by strictly increasing nodes."""

    nodes: np.ndarray

    def __post_init__(self):
        arr = np.array(self.nodes, dtype=float)
        if arr.ndim != 1 or arr.shape[0] < 2:
            raise MeshInvalid(f"need at least two nodes, got shape {arr.shape}")
        if arr[0] != 0.0 or arr[-1] != 1.0:
            raise MeshInvalid(f"endpoints must be 0 and 1, got {arr[0]} and {arr[-1]}")
        if not np.all(np.diff(arr) > 0.0):
            raise MeshInvalid("nodes must be strictly increasing")
        arr.setflags(write=False)
        object.__setattr__(self, "nodes", arr)

    @classmethod
    def uniform(cls, n_cells: int) -> "Mesh1D":
        if n_cells < 2:
            raise MeshInvalid(f"need at least two cells for an interior node, got {n_cells}")
        return cls(np.linspace(0.0, 1.0, n_cells + 1))

    @property
    def n_cells(self) -> int:
        return self.nodes.shape[0] - 1

    @property
    def spacings(self) -> np.ndarray:
        return np.diff(self.nodes)

    @property
    def h_max(self) -> float:
        return float(np.max(self.spacings))


@dataclass(frozen=True)
class Pde1D:
    """Coefficients of ``-u'' + beta u' + c u = rhs`` (unit diffusion)."""

    beta: float
    c: float
    rhs: Callable[[np.ndarray], np.ndarray]

    def __post_init__(self):
        if self.c < 0.0:
            raise ValueError(f"reaction coefficient must be >= 0, got {self.c}")


def _gauss_rule(order: int, a: np.ndarray, b: np.ndarray):
    """Gauss-Legendre points and weights on each cell [a_k, b_k]."""
    nodes, weights = np.polynomial.legendre.leggauss(order)
    half = (b - a) / 2.0
    mid = (a + b) / 2.0
    points = mid[:, None] + half[:, None] * nodes[None, :]
    return points, half[:, None] * weights[None, :]


def assemble(pde: Pde1D, mesh: Mesh1D, rhs_quadrature: int = 2) -> VariationalProblem:
    """Assemble the interior-node variational problem.

    The Gram matrix is the stiffness matrix (exact element integrals), the
    bilinear form adds the advection and reaction terms, and the load vector
    integrates ``rhs`` against the hats with ``rhs_quadrature``-point Gauss
    per cell.  For ``beta = c = 0`` the form equals the inner product, so the
    exact constants ``alpha = C = 1`` are attached to the problem.
    """
    n_nodes = mesh.nodes.shape[0]
    if n_nodes < 3:
        raise MeshInvalid("mesh has no interior node")
    h = mesh.spacings

    stiffness = np.zeros((n_nodes, n_nodes))
    mass = np.zeros((n_nodes, n_nodes))
    advection = np.zeros((n_nodes, n_nodes))
    for k in range(mesh.n_cells):
        left, right = k, k + 1
        w = 1.0 / h[k]
        stiffness[left, left] += w
        stiffness[right, right] += w
        stiffness[left, right] += -w
        stiffness[right, left] += -w
        m_diag, m_off = h[k] / 3.0, h[k] / 6.0
        mass[left, left] += m_diag
        mass[right, right] += m_diag
        mass[left, right] += m_off
        mass[right, left] += m_off
        # int phi_i' phi_j over the cell; independent of h
        advection[left, left] += -0.5
        advection[left, right] += -0.5
        advection[right, left] += 0.5
        advection[right, right] += 0.5

    points, weights = _gauss_rule(rhs_quadrature, mesh.nodes[:-1], mesh.nodes[1:])
    fvals = pde.rhs(points) * weights
    load = np.zeros(n_nodes)
    # hat values at the quadrature points of cell k: rising on the left node's
    # support, falling on the right node's
    rising = (points - mesh.nodes[:-1, None]) / h[:, None]
    for k in range(mesh.n_cells):
        load[k] += float(np.sum(fvals[k] * (1.0 - rising[k])))
        load[k + 1] += float(np.sum(fvals[k] * rising[k]))

    interior = slice(1, n_nodes - 1)
    gram = stiffness[interior, interior]
    matrix = (
        stiffness[interior, interior]
        + pde.beta * advection[interior, interior]
        + pde.c * mass[interior, interior]
    )
    constants = FormConstants(1.0, 1.0) if pde.beta == 0.0 and pde.c == 0.0 else None
    return VariationalProblem(
        space=make_space(gram),
        a=BilinearForm(matrix),
        f=LinearForm(load[interior]),
        constants=constants,
    )


@dataclass(frozen=True)
class ManufacturedCase:
    """Exact solution, its derivative, and the matching right-hand side."""

    name: str
    pde: Pde1D
    exact: Callable[[np.ndarray], np.ndarray]
    exact_grad: Callable[[np.ndarray], np.ndarray]
    h1_seminorm: float


def manufactured(case_id: str, beta: float = 0.0, c: float = 0.0) -> ManufacturedCase:
    """Manufactured solutions with the forcing recomputed for beta and c.

    ``poisson-parabola``: ``u = x (1 - x) / 2`` (forcing 1 in the pure
    Poisson case), squared seminorm 1/12.  ``poisson-sine``:
    ``u = sin(pi x)``, squared seminorm ``pi^2 / 2``.
    """
    if case_id == "poisson-parabola":
        exact = lambda x: x * (1.0 - x) / 2.0
        grad = lambda x: 0.5 - x
        rhs = lambda x: 1.0 + beta * grad(x) + c * exact(x)
        seminorm = math.sqrt(1.0 / 12.0)
    elif case_id == "poisson-sine":
        exact = lambda x: np.sin(np.pi * x)
        grad = lambda x: np.pi * np.cos(np.pi * x)
        rhs = lambda x: np.pi**2 * exact(x) + beta * grad(x) + c * exact(x)
        seminorm = math.sqrt(math.pi**2 / 2.0)
    else:
        raise UnknownCase(f"unknown manufactured case {case_id!r}")
    return ManufacturedCase(
        name=case_id,
        pde=Pde1D(beta=beta, c=c, rhs=rhs),
        exact=exact,
        exact_grad=grad,
        h1_seminorm=seminorm,
    )


def full_nodal(mesh: Mesh1D, interior_coeffs: np.ndarray) -> np.ndarray:
    """Interior coefficients padded with the zero Dirichlet boundary values."""
    return np.concatenate(([0.0], np.asarray(interior_coeffs, dtype=float), [0.0]))


def h1_seminorm_error(mesh: Mesh1D, interior_coeffs, exact_grad) -> float:
    """H1 seminorm of the error, by 3-point Gauss on each cell.

    The discrete derivative is constant per cell; the integrand
    ``(u'(x) - slope_k)^2`` is smooth, so the rule is effectively exact for
    the manufactured cases.
    """
    nodal = full_nodal(mesh, interior_coeffs)
    slopes = np.diff(nodal) / mesh.spacings
    points, weights = _gauss_rule(3, mesh.nodes[:-1], mesh.nodes[1:])
    sq = (exact_grad(points) - slopes[:, None]) ** 2
    return float(np.sqrt(np.sum(sq * weights)))


@dataclass(frozen=True)
class ConvergenceRow:
    n_cells: int
    h: float
    h1_error: float
    rate: float | None


def convergence_study(
    case_id: str,
    levels,
    beta: float = 0.0,
    c: float = 0.0,
    tol: float = 1e-12,
) -> list[ConvergenceRow]:
    """Solve a manufactured case on uniform meshes and tabulate error rates.

    One row per level ``(n_cells, h, h1_error, rate)``; the rate compares
    consecutive levels, so the first row has none.  The solves go through the
    contraction iteration, not the direct oracle.
    """
    levels = [int(n) for n in levels]
    if any(b <= a for a, b in zip(levels, levels[1:])):
        raise ValueError(f"levels must be increasing, got {levels}")
    case = manufactured(case_id, beta=beta, c=c)
    rows: list[ConvergenceRow] = []
    for n_cells in levels:
        mesh = Mesh1D.uniform(n_cells)
        problem = assemble(case.pde, mesh)
        report: SolveReport = solve(problem, tol=tol)
        err = h1_seminorm_error(mesh, report.solution, case.exact_grad)
        h = mesh.h_max
        if rows:
            rate = math.log(rows[-1].h1_error / err) / math.log(rows[-1].h / h)
        else:
            rate = None
        rows.append(ConvergenceRow(n_cells=n_cells, h=h, h1_error=err, rate=rate))
    return rows


def rows_to_csv(rows: list[ConvergenceRow]) -> str:
    """Render the study as CSV; the rate column is blank on the first row."""
    lines = [CSV_HEADER]
    for row in rows:
        rate = "" if row.rate is None else format(row.rate, ".17g")
        lines.append(
            f"{row.n_cells},{format(row.h, '.17g')},{format(row.h1_error, '.17g')},{rate}"
        )
    return "\n".join(lines) + "\n"
