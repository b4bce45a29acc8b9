"""Linear forms, bounded bilinear forms, and their tight constants.

In Gram coordinates a linear form is a covector ``f`` acting as
``phi(v) = f . coeffs(v)`` and a bilinear form is a matrix ``M`` with
``a(u, v) = coeffs(u)^T M coeffs(v)``.  Whitening by the Cholesky factor
``L`` of the Gram matrix (``N = L^{-1} M L^{-T}``) turns the space norm into
the Euclidean one, so

* the dual norm of ``phi`` is ``||L^{-1} f||_2 = sqrt(f^T G^{-1} f)``,
* the least continuity constant of ``a`` is the largest singular value of ``N``,
* the best coercivity constant is the smallest eigenvalue of ``sym(N)``.

Two routes compute the representative of a form in the space: the direct
solve :func:`riesz` (``G^{-1} f``) and the constructive path
:func:`riesz_constructive`, which builds the kernel of the form, projects a
vector with nonzero action onto it, normalizes the orthogonal remainder, and
scales it — each step mirroring the existence argument it implements.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_solve, solve_triangular

from .errors import DimensionMismatch
from .projection import make_subspace, project
from .spaces import HilbertSpace

__all__ = [
    "LinearForm",
    "BilinearForm",
    "FormConstants",
    "dual_norm",
    "sampled_sup_ratio",
    "continuity_constant",
    "coercivity_constant",
    "representation",
    "riesz",
    "riesz_constructive",
    "riesz_isometry_gap",
]


@dataclass(frozen=True)
class LinearForm:
    """Covector acting on coefficient vectors by the dot product."""

    covector: np.ndarray

    def __post_init__(self):
        arr = np.array(self.covector, dtype=float)
        if arr.ndim != 1:
            raise DimensionMismatch(f"covector must be 1-D, got shape {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "covector", arr)

    @property
    def dim(self) -> int:
        return self.covector.shape[0]

    def __call__(self, v) -> float:
        return float(self.covector @ np.asarray(v, dtype=float))

    def __add__(self, other: "LinearForm") -> "LinearForm":
        return LinearForm(self.covector + other.covector)

    def __rmul__(self, scalar: float) -> "LinearForm":
        return LinearForm(float(scalar) * self.covector)

    def to_dict(self) -> dict:
        return {"covector": self.covector.tolist()}


@dataclass(frozen=True)
class BilinearForm:
    """Matrix form ``a(u, v) = u^T matrix v``; need not be symmetric."""

    matrix: np.ndarray

    def __post_init__(self):
        arr = np.array(self.matrix, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DimensionMismatch(f"matrix must be square, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise DimensionMismatch("matrix has non-finite entries")
        arr.setflags(write=False)
        object.__setattr__(self, "matrix", arr)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __call__(self, u, v) -> float:
        return float(np.asarray(u, dtype=float) @ self.matrix @ np.asarray(v, dtype=float))

    def to_dict(self) -> dict:
        return {"matrix": self.matrix.tolist()}


@dataclass(frozen=True)
class FormConstants:
    """Continuity constant ``C`` and coercivity constant ``alpha`` of a form.

    ``coercivity_alpha`` may be nonpositive (the form is then not coercive);
    whenever it is positive it cannot exceed ``continuity_C``.
    """

    continuity_C: float
    coercivity_alpha: float


def _check_dim(space: HilbertSpace, n: int):
    if n != space.dim:
        raise DimensionMismatch(f"form of dimension {n} on space of dimension {space.dim}")


def dual_norm(space: HilbertSpace, form: LinearForm) -> float:
    """Operator norm of the form: ``sup |phi(u)| / ||u||`` over nonzero ``u``.

    Equals ``sqrt(f^T G^{-1} f)``, computed by one triangular solve with the
    cached Cholesky factor.
    """
    _check_dim(space, form.dim)
    y = solve_triangular(space.chol, form.covector, lower=True)
    return float(np.linalg.norm(y))


def sampled_sup_ratio(space: HilbertSpace, form: LinearForm, n_samples: int, rng_seed: int = 0) -> float:
    """Statistical lower bound on the dual norm.

    Maximum of ``|phi(xi)|`` over ``n_samples`` random unit vectors.  With a
    fixed seed the sample stream is a prefix of any longer run, so the value
    is monotone in ``n_samples``.
    """
    _check_dim(space, form.dim)
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    rng = np.random.default_rng(rng_seed)
    samples = rng.standard_normal((n_samples, space.dim))
    norms = np.linalg.norm(samples @ space.chol, axis=1)
    keep = norms > 0.0
    if not np.any(keep):
        return 0.0
    vals = np.abs(samples[keep] @ form.covector) / norms[keep]
    return float(np.max(vals))


def whiten(space: HilbertSpace, matrix: np.ndarray) -> np.ndarray:
    """Similarity transform ``N = L^{-1} M L^{-T}`` into Euclidean geometry."""
    x = solve_triangular(space.chol, matrix, lower=True)
    return solve_triangular(space.chol, x.T, lower=True).T


def continuity_constant(space: HilbertSpace, bform: BilinearForm) -> float:
    """Least ``C`` with ``|a(u, v)| <= C ||u|| ||v||``: spectral norm of the whitened matrix."""
    _check_dim(space, bform.dim)
    n = whiten(space, bform.matrix)
    return float(np.linalg.svd(n, compute_uv=False)[0])


def coercivity_constant(space: HilbertSpace, bform: BilinearForm) -> float:
    """Largest ``alpha`` with ``a(u, u) >= alpha ||u||^2``.

    Smallest eigenvalue of the symmetric part of the whitened matrix; may be
    nonpositive, which simply means the form is not coercive.
    """
    _check_dim(space, bform.dim)
    n = whiten(space, bform.matrix)
    sym = (n + n.T) / 2.0
    return float(np.linalg.eigvalsh(sym)[0])


def form_constants(space: HilbertSpace, bform: BilinearForm) -> FormConstants:
    """Both tight constants of the form in one call."""
    return FormConstants(
        continuity_C=continuity_constant(space, bform),
        coercivity_alpha=coercivity_constant(space, bform),
    )


def representation(space: HilbertSpace, bform: BilinearForm, u) -> LinearForm:
    """The linear form ``v -> a(u, v)``, i.e. the covector ``M^T u``."""
    _check_dim(space, bform.dim)
    cu = space.coeffs(u)
    return LinearForm(bform.matrix.T @ cu)


def riesz(space: HilbertSpace, form: LinearForm) -> np.ndarray:
    """Representative ``u`` with ``phi(v) = <u, v>`` for all ``v``: ``G^{-1} f``."""
    _check_dim(space, form.dim)
    return cho_solve((space.chol, True), form.covector)


def riesz_constructive(space: HilbertSpace, form: LinearForm) -> np.ndarray:
    """Representative of the form by the kernel-projection construction.

    For the zero form, returns the zero vector.  Otherwise: build a basis of
    ``ker(phi)`` from the vectors ``e_i - (f_i / f_j) e_j`` (``j`` the index
    of the largest ``|f_i|``, a stable pivot), take ``u0 = e_j`` so that
    ``phi(u0) != 0``, remove its kernel component by orthogonal projection,
    normalize the remainder ``xi0``, and return ``phi(xi0) * xi0``.

    Agrees with :func:`riesz` up to roundoff.
    """
    _check_dim(space, form.dim)
    f = form.covector
    if not np.any(f):
        return space.zero()
    j = int(np.argmax(np.abs(f)))
    u0 = space.basis_vector(j)
    if space.dim == 1:
        v0 = u0  # the kernel is trivial; nothing to project away
    else:
        kernel = np.zeros((space.dim, space.dim - 1))
        col = 0
        for i in range(space.dim):
            if i == j:
                continue
            kernel[i, col] = 1.0
            kernel[j, col] = -f[i] / f[j]
            col += 1
        v0 = u0 - project(make_subspace(space, kernel), u0)
    xi0 = v0 / space.norm(v0)
    return form(xi0) * xi0


def riesz_isometry_gap(space: HilbertSpace, form: LinearForm) -> float:
    """Absolute difference between ``||riesz(form)||`` and the dual norm.

    The representation map is an isometry, so this gap is pure roundoff:
    at most ``1e-11 * max(1, dual_norm)`` on well-conditioned spaces.
    """
    return abs(space.norm(riesz(space, form)) - dual_norm(space, form))
