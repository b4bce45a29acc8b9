"""Banach fixed-point iteration for contractions on a Gram-vector space.

A :class:`ContractionMap` bundles a self-map of a :class:`~coercive.spaces.HilbertSpace`
with a claimed Lipschitz constant ``k``.  :func:`iterate` runs the classic
iteration ``x_{n+1} = f(x_n)`` and stops on the posterior step test

    d(x_n, x_{n+1}) * k / (1 - k) <= tol,

which bounds the remaining true error ``d(x_{n+1}, x*)`` by ``tol`` — the
geometric tail estimate ``k^p / (1 - k) * d(x_0, x_1)`` made a stopping rule.
A step that leaves the iterate bitwise unchanged means the sequence is
stationary and stops immediately.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import (
    DegenerateSample,
    InvalidContraction,
    MaxIterationsExceeded,
    NotAContraction,
)
from .spaces import HilbertSpace

__all__ = [
    "ContractionMap",
    "FixedPointReport",
    "estimate_lipschitz",
    "iterate",
    "a_priori_tail_bound",
]

MAX_ITER_FLOOR = 16
MAX_ITER_CEIL = 10**6


@dataclass(frozen=True)
class ContractionMap:
    """Self-map of a space together with a claimed Lipschitz constant.

    ``apply`` must be total and preserve the dimension; ``k`` is the caller's
    certificate (sampling can only bound it from below, see
    :func:`estimate_lipschitz`).
    """

    space: HilbertSpace
    apply: Callable[[np.ndarray], np.ndarray]
    k: float

    def __post_init__(self):
        if not (math.isfinite(self.k) and self.k >= 0.0):
            raise InvalidContraction(f"Lipschitz constant must be finite and >= 0, got {self.k}")


@dataclass(frozen=True)
class FixedPointReport:
    """Outcome of a fixed-point iteration.

    ``step_norms[n]`` is ``d(x_n, x_{n+1})``; ``residual`` is the distance
    from the returned point to its own image, ``d(x*, f(x*))``.
    """

    fixed_point: np.ndarray
    iterations: int
    step_norms: list[float] = field(default_factory=list)
    a_priori_bound_at_stop: float = 0.0
    residual: float = 0.0

    def to_dict(self) -> dict:
        return {
            "fixed_point": np.asarray(self.fixed_point).tolist(),
            "iterations": self.iterations,
            "step_norms": list(self.step_norms),
            "a_priori_bound_at_stop": self.a_priori_bound_at_stop,
            "residual": self.residual,
        }


def estimate_lipschitz(cmap: ContractionMap, sample_pairs: int, rng_seed: int = 0) -> float:
    """Sampled lower bound on the Lipschitz constant of ``cmap.apply``.

    Draws ``sample_pairs`` random pairs of points and returns the largest
    observed ratio ``d(f(x), f(x')) / d(x, x')``.  Coincident pairs are
    resampled; after 100 consecutive retries :class:`DegenerateSample` is
    raised.
    """
    if sample_pairs < 1:
        raise ValueError("sample_pairs must be >= 1")
    rng = np.random.default_rng(rng_seed)
    space = cmap.space
    best = 0.0
    for _ in range(sample_pairs):
        for attempt in range(101):
            x = rng.standard_normal(space.dim)
            y = rng.standard_normal(space.dim)
            dxy = space.distance(x, y)
            if dxy > 0.0:
                break
        else:
            raise DegenerateSample("sampled pairs kept coinciding after 100 retries")
        ratio = space.distance(cmap.apply(x), cmap.apply(y)) / dxy
        best = max(best, ratio)
    return best


def default_max_iter(k: float, d01: float, tol: float) -> int:
    """Iteration budget: ten times the a priori count, clamped to [16, 1e6]."""
    if k <= 0.0 or d01 <= tol * (1.0 - k):
        return MAX_ITER_FLOOR
    predicted = math.log(tol * (1.0 - k) / max(d01, tol)) / math.log(k)
    if not math.isfinite(predicted):
        return MAX_ITER_CEIL
    return int(min(max(10 * math.ceil(max(predicted, 0.0)), MAX_ITER_FLOOR), MAX_ITER_CEIL))


def iterate(
    cmap: ContractionMap,
    x0,
    tol: float,
    max_iter: int | None = None,
) -> FixedPointReport:
    """Iterate ``x_{n+1} = f(x_n)`` to the unique fixed point.

    Returns a report whose ``fixed_point`` satisfies
    ``d(x*, f(x*)) <= tol`` (guaranteed by the posterior step test when the
    claimed ``k`` is a true Lipschitz constant).

    Raises
    ------
    NotAContraction
        If ``cmap.k >= 1``.
    MaxIterationsExceeded
        If the budget is exhausted; the partial report rides on the exception.
    """
    if cmap.k >= 1.0:
        raise NotAContraction(f"need k < 1 for a contraction, got k = {cmap.k}")
    if tol <= 0.0:
        raise ValueError(f"tol must be positive, got {tol}")

    space = cmap.space
    k = cmap.k
    x = space.coeffs(x0).copy()
    fx = space.coeffs(cmap.apply(x))
    step_norms = [space.distance(x, fx)]
    d01 = step_norms[0]
    if max_iter is None:
        max_iter = default_max_iter(k, d01, tol)

    # k/(1-k) scales a step into a bound on the remaining distance to x*.
    posterior = k / (1.0 - k)
    while True:
        if x.tobytes() == fx.tobytes():
            break  # stationary sequence: x_{N+1} = f(x_N) = x_N
        if step_norms[-1] * posterior <= tol:
            break
        if len(step_norms) >= max_iter:
            partial = _finish(cmap, fx, len(step_norms), step_norms, d01)
            raise MaxIterationsExceeded(
                f"no convergence within {max_iter} iterations "
                f"(last step {step_norms[-1]:.3e}, tol {tol:.3e})",
                report=partial,
            )
        x = fx
        fx = space.coeffs(cmap.apply(x))
        step_norms.append(space.distance(x, fx))

    return _finish(cmap, fx, len(step_norms), step_norms, d01)


def _finish(cmap, point, iterations, step_norms, d01) -> FixedPointReport:
    residual = cmap.space.distance(point, cmap.apply(point))
    if cmap.k < 1.0:
        bound = a_priori_tail_bound(cmap.k, d01, iterations)
    else:
        bound = math.inf
    return FixedPointReport(
        fixed_point=point,
        iterations=iterations,
        step_norms=step_norms,
        a_priori_bound_at_stop=bound,
        residual=residual,
    )


def a_priori_tail_bound(k: float, d01: float, p: int) -> float:
    """Geometric tail bound ``k**p * d01 / (1 - k)``.

    For any iterated sequence of a ``k``-contraction with first step ``d01``,
    this bounds ``d(x_p, x*)`` from above.
    """
    if not 0.0 <= k < 1.0:
        raise InvalidContraction(f"need 0 <= k < 1, got k = {k}")
    if d01 < 0.0:
        raise ValueError(f"d01 must be nonnegative, got {d01}")
    if p < 0:
        raise ValueError(f"p must be nonnegative, got {p}")
    return (k**p) * d01 / (1.0 - k)
