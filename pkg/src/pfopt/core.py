"""Shared domain types: shape-tagged points, oracle handles, step schedules."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np


class DimensionError(ValueError):
    """Operand shapes are incompatible."""


class NumericError(RuntimeError):
    """A numerical routine failed to converge."""


class UnsupportedSetError(RuntimeError):
    """The requested operation needs a capability the set does not provide."""


class SolverError(RuntimeError):
    """A solver run failed; carries the offending iteration index."""

    def __init__(self, message: str, iteration: int):
        super().__init__(f"{message} (iteration {iteration})")
        self.iteration = iteration


def _as_flat(x) -> np.ndarray:
    """Coerce a Point or array-like to a flat float64 array."""
    if isinstance(x, Point):
        return x.data
    arr = np.asarray(x, dtype=float)
    return arr.ravel()


@dataclass(frozen=True)
class Point:
    """A dense point in R^n with a shape tag.

    ``shape`` is either ``("vector", n)`` or ``("matrix", m, n)``; matrix
    data is stored flattened row-major so set oracles can reshape.
    """

    data: np.ndarray
    shape: Tuple

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=float).ravel()
        if self.shape[0] == "vector":
            expected = self.shape[1]
        elif self.shape[0] == "matrix":
            expected = self.shape[1] * self.shape[2]
        else:
            raise DimensionError(f"unknown shape tag {self.shape!r}")
        if arr.size != expected:
            raise DimensionError(
                f"data length {arr.size} does not match shape {self.shape}"
            )
        if not np.all(np.isfinite(arr)):
            raise ValueError("point has non-finite entries")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def dim(self) -> int:
        return self.data.size

    def as_matrix(self) -> np.ndarray:
        if self.shape[0] != "matrix":
            raise DimensionError("not a matrix-shaped point")
        return self.data.reshape(self.shape[1], self.shape[2])

    def norm(self) -> float:
        return float(np.linalg.norm(self.data))


def vector(values) -> Point:
    arr = np.asarray(values, dtype=float).ravel()
    return Point(arr, ("vector", arr.size))


def matrix(values) -> Point:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 2:
        raise DimensionError("matrix() expects a 2-D array")
    return Point(arr.ravel(), ("matrix", arr.shape[0], arr.shape[1]))


def inner(a, b) -> float:
    """Euclidean inner product; Frobenius inner product for matrix points."""
    if isinstance(a, Point) and isinstance(b, Point) and a.shape != b.shape:
        raise DimensionError(f"shape mismatch: {a.shape} vs {b.shape}")
    fa, fb = _as_flat(a), _as_flat(b)
    if fa.size != fb.size:
        raise DimensionError(f"length mismatch: {fa.size} vs {fb.size}")
    return float(np.dot(fa, fb))


class FeasibleSet:
    """A convex set with an LMO, contained in a ball of radius R at `center`.

    Subclasses must implement :meth:`lmo` and :meth:`contains`; sets with a
    cheap Euclidean projection also implement :meth:`project` (left as None
    here so callers can test for the capability).
    """

    center: np.ndarray
    radius: float

    project: Optional[Callable[[np.ndarray], np.ndarray]] = None

    @property
    def diameter(self) -> float:
        return 2.0 * self.radius

    def lmo(self, direction) -> np.ndarray:
        """Return a minimizer of <direction, x> over the set."""
        raise NotImplementedError

    def contains(self, x, tol: float = 1e-9) -> bool:
        raise NotImplementedError


@dataclass(frozen=True)
class Objective:
    """Convex objective with an exact subgradient oracle.

    ``lipschitz`` bounds the norm of any returned subgradient.
    """

    value: Callable[[np.ndarray], float]
    subgrad: Callable[[np.ndarray], np.ndarray]
    lipschitz: float

    def __post_init__(self):
        if not self.lipschitz > 0:
            raise ValueError("lipschitz bound must be positive")


@dataclass(frozen=True)
class StochasticOracle:
    """Unbiased noisy subgradient oracle with bounded second moment.

    ``noisy_subgrad(x, rng)`` must be mean-equal to ``base.subgrad(x)`` and
    satisfy E||g||^2 <= second_moment**2.  All randomness flows through the
    generator built from ``seed``; no global RNG is touched.
    """

    base: Objective
    noisy_subgrad: Callable[[np.ndarray, np.random.Generator], np.ndarray]
    second_moment: float
    seed: int

    def __post_init__(self):
        if self.second_moment < self.base.lipschitz:
            raise ValueError(
                "second-moment bound must dominate the Lipschitz bound"
            )

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


@dataclass(frozen=True)
class PfwParams:
    """Constants of the drift-steered solver: weights alpha, eta and horizon T."""

    alpha: float
    eta: float
    horizon: int

    def __post_init__(self):
        if not (self.alpha > 0 and self.eta > 0):
            raise ValueError("alpha and eta must be positive")
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")


def params_deterministic(G: float, R: float, T: int) -> PfwParams:
    """Schedule for exact subgradients: alpha = G*sqrt(T)/R, eta = G/(2*R*sqrt(T))."""
    if not (G > 0 and R > 0 and T >= 1):
        raise ValueError("G, R must be positive and T >= 1")
    rt = np.sqrt(T)
    return PfwParams(alpha=G * rt / R, eta=G / (2.0 * R * rt), horizon=T)


def params_stochastic(
    G: float, B: float, R: float, T: int, mode: str = "with_G"
) -> PfwParams:
    """Schedule for noisy subgradients.

    mode "with_G":  alpha = B*sqrt(T)/R, eta = G/(2*R*sqrt(T))
    mode "B_only":  alpha = B*sqrt(T)/R, eta = 2*B/(R*sqrt(T))
    """
    if not (G > 0 and R > 0 and T >= 1):
        raise ValueError("G, R must be positive and T >= 1")
    if B < G:
        raise ValueError("second-moment bound B must satisfy B >= G")
    rt = np.sqrt(T)
    alpha = B * rt / R
    if mode == "with_G":
        eta = G / (2.0 * R * rt)
    elif mode == "B_only":
        eta = 2.0 * B / (R * rt)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return PfwParams(alpha=alpha, eta=eta, horizon=T)
