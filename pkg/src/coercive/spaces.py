"""Finite-dimensional real Hilbert spaces with a Gram-encoded inner product.

A space of dimension ``n`` is determined by a symmetric positive definite
``n x n`` Gram matrix ``G``; vectors are coefficient arrays of length ``n``
in the fixed basis and ``<u, v> = u^T G v``.  The Cholesky factor of ``G``
is computed once at construction and cached: it certifies positive
definiteness and backs the norm, dual-norm and whitening computations
elsewhere in the package.

All objects are immutable after construction (arrays are marked read-only),
so spaces and vectors can be shared freely between threads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotPositiveDefinite, NotSymmetric

__all__ = ["HilbertSpace", "make_space", "euclidean"]


def _frozen(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class HilbertSpace:
    """Real Hilbert space of dimension ``dim`` with inner product ``u^T gram v``.

    Construct through :func:`make_space`, which validates the Gram matrix.

    Attributes
    ----------
    gram : ndarray, shape (dim, dim)
        Symmetric positive definite matrix encoding the inner product.
    chol : ndarray, shape (dim, dim)
        Cached lower-triangular Cholesky factor, ``gram = chol @ chol.T``.
    """

    gram: np.ndarray
    chol: np.ndarray

    @property
    def dim(self) -> int:
        return self.gram.shape[0]

    def coeffs(self, u) -> np.ndarray:
        """Validate ``u`` as a coefficient vector of this space.

        Raises :class:`DimensionMismatch` if the length is wrong.
        """
        arr = np.asarray(u, dtype=float)
        if arr.ndim != 1 or arr.shape[0] != self.dim:
            raise DimensionMismatch(
                f"expected a vector of length {self.dim}, got shape {arr.shape}"
            )
        return arr

    def inner(self, u, v) -> float:
        """Inner product ``<u, v> = u^T gram v``."""
        cu = self.coeffs(u)
        cv = self.coeffs(v)
        return float(cu @ self.gram @ cv)

    def norm(self, u) -> float:
        """Norm ``sqrt(<u, u>)``, evaluated as ``||chol.T u||_2``.

        The triangular-factor form is algebraically identical and cannot go
        negative under the square root.
        """
        cu = self.coeffs(u)
        return float(np.linalg.norm(self.chol.T @ cu))

    def distance(self, u, v) -> float:
        """Distance ``||u - v||`` induced by the norm."""
        cu = self.coeffs(u)
        cv = self.coeffs(v)
        return float(np.linalg.norm(self.chol.T @ (cu - cv)))

    def zero(self) -> np.ndarray:
        return np.zeros(self.dim)

    def basis_vector(self, i: int) -> np.ndarray:
        e = np.zeros(self.dim)
        e[i] = 1.0
        return e

    def to_dict(self) -> dict:
        """JSON-ready representation ``{"dim": n, "gram": [[...]]}``."""
        return {"dim": self.dim, "gram": self.gram.tolist()}


def make_space(gram) -> HilbertSpace:
    """Build a :class:`HilbertSpace` from a Gram matrix.

    The matrix must be square with finite entries, bit-exact symmetric
    (callers symmetrize first, e.g. ``(A + A.T) / 2``), and positive
    definite as certified by a successful Cholesky factorization.

    Raises
    ------
    NotSymmetric
        If any entry differs from its transpose, even in the last bit.
    NotPositiveDefinite
        If the Cholesky factorization fails.
    """
    g = np.array(gram, dtype=float)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise NotSymmetric(f"gram matrix must be square, got shape {g.shape}")
    if not np.all(np.isfinite(g)):
        raise NotPositiveDefinite("gram matrix has non-finite entries")
    if not np.array_equal(g, g.T):
        asym = float(np.max(np.abs(g - g.T)))
        raise NotSymmetric(f"gram matrix is not symmetric (max |G_ij - G_ji| = {asym:g})")
    try:
        chol = np.linalg.cholesky(g)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(f"gram matrix is not positive definite: {exc}") from exc
    return HilbertSpace(gram=_frozen(g), chol=_frozen(chol))


def euclidean(dim: int) -> HilbertSpace:
    """The standard Euclidean space of the given dimension (identity Gram)."""
    return make_space(np.eye(dim))


def space_from_dict(data: dict) -> HilbertSpace:
    """Inverse of :meth:`HilbertSpace.to_dict`."""
    space = make_space(data["gram"])
    if "dim" in data and int(data["dim"]) != space.dim:
        raise DimensionMismatch(
            f"declared dim {data['dim']} does not match gram shape {space.dim}"
        )
    return space
