"""Coercive variational problems on finite-dimensional real Hilbert spaces.

The package solves ``a(u, v) = f(v)`` by contraction iteration and ships the
full chain of machinery the solution bound rests on — fixed-point iteration
with geometric tail estimates, orthogonal projection by normal equations and
by minimizing sequence, dual norms and representatives of linear forms — each
piece paired with an independent oracle and quantitative checks.
"""

from .errors import (
    BudgetExceeded,
    CoerciveError,
    DegenerateSample,
    DimensionMismatch,
    InconsistentConstants,
    InvalidContraction,
    MaxIterationsExceeded,
    MeshInvalid,
    NotAContraction,
    NotCoercive,
    NotPositiveDefinite,
    NotSymmetric,
    RankDeficientBasis,
    RhoOutOfRange,
    SingularSystem,
    UnknownCase,
)
from .fixpoint import (
    ContractionMap,
    FixedPointReport,
    a_priori_tail_bound,
    estimate_lipschitz,
    iterate,
)
from .forms import (
    BilinearForm,
    FormConstants,
    LinearForm,
    coercivity_constant,
    continuity_constant,
    dual_norm,
    form_constants,
    representation,
    riesz,
    riesz_constructive,
    riesz_isometry_gap,
    sampled_sup_ratio,
)
from .projection import (
    MinSeqReport,
    Subspace,
    decompose,
    make_subspace,
    project,
    project_minseq,
)
from .solver import (
    GalerkinReport,
    SolveReport,
    VariationalProblem,
    contraction_factor,
    galerkin_solve,
    rho_policy,
    solve,
    solve_direct,
)
from .spaces import HilbertSpace, euclidean, make_space

__version__ = "0.1.0"
