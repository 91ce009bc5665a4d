"""Dense real matrix kernel shared by the whole package.

Everything operates on square numpy arrays of float64 and is a pure
function; nothing mutates its arguments.  Index sets are 1-based in the
public API, matching the usual notation for principal submatrices; the
0-based conversion happens internally.  Rank and singularity decisions
are governed by a single :class:`TolerancePolicy` threaded through all
calls, so no operation hardcodes its own threshold.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy.linalg import LinAlgWarning, lu_factor, lu_solve

__all__ = [
    "TolerancePolicy",
    "DEFAULT_TOL",
    "SingularMatrixError",
    "as_matrix",
    "as_square",
    "index_set",
    "submatrix",
    "inf_norm",
    "spectral_radius",
    "perron_vector",
    "solve",
    "nullspace",
    "is_singular",
]


class SingularMatrixError(ArithmeticError):
    """A linear solve met a pivot at or below the singularity threshold."""


@dataclass(frozen=True)
class TolerancePolicy:
    """Thresholds controlling singularity, rank and eigenvalue decisions.

    Attributes
    ----------
    rel_sing:
        Relative singularity threshold, scaled by the infinity norm of the
        matrix under test.
    rel_eig:
        Relative accuracy target for eigenvalue-derived quantities; never
        larger than ``rel_sing``.
    abs_floor:
        Absolute floor so comparisons stay meaningful for zero matrices.
    """

    rel_sing: float = 1e-9
    rel_eig: float = 1e-10
    abs_floor: float = 1e-13

    def __post_init__(self) -> None:
        if min(self.rel_sing, self.rel_eig, self.abs_floor) <= 0.0:
            raise ValueError("all tolerances must be strictly positive")
        if self.rel_eig > self.rel_sing:
            raise ValueError("rel_eig must not exceed rel_sing")


DEFAULT_TOL = TolerancePolicy()


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Coerce to a float64 2-D array, rejecting NaN and Inf entries."""
    m = np.array(a, dtype=float)
    if m.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got ndim={m.ndim}")
    if m.size and not np.all(np.isfinite(m)):
        raise ValueError(f"{name} contains non-finite entries")
    return m


def as_square(a, name: str = "matrix") -> np.ndarray:
    """Like :func:`as_matrix` but additionally demands a nonempty square shape."""
    m = as_matrix(a, name)
    if m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise ValueError(f"{name} must be square and nonempty, got shape {m.shape}")
    return m


def index_set(J: Iterable[int], n: int) -> tuple[int, ...]:
    """Validate a 1-based index set against order ``n``; returns it sorted."""
    idx = tuple(int(j) for j in J)
    if not idx:
        raise ValueError("index set must be nonempty")
    if len(set(idx)) != len(idx):
        raise ValueError(f"duplicate indices in {idx}")
    if min(idx) < 1 or max(idx) > n:
        raise ValueError(f"indices {idx} out of range 1..{n}")
    return tuple(sorted(idx))


def submatrix(X, J: Iterable[int]) -> np.ndarray:
    """Principal submatrix of ``X`` in the rows and columns of 1-based ``J``."""
    m = as_square(X)
    idx = np.asarray(index_set(J, m.shape[0]), dtype=int) - 1
    return m[np.ix_(idx, idx)]


def inf_norm(a) -> float:
    """Infinity norm: max row sum for matrices, max absolute entry for vectors."""
    arr = np.asarray(a, dtype=float)
    if arr.size == 0:
        return 0.0
    if arr.ndim == 1:
        return float(np.max(np.abs(arr)))
    return float(np.max(np.sum(np.abs(arr), axis=1)))


def _as_nonnegative(P, tol: TolerancePolicy, name: str) -> np.ndarray:
    m = as_square(P, name)
    low = float(m.min())
    if low < -tol.abs_floor:
        raise ValueError(f"{name} has a negative entry ({low:.3e})")
    return np.maximum(m, 0.0)


def spectral_radius(P, tol: TolerancePolicy = DEFAULT_TOL) -> float:
    """Perron root of an entrywise nonnegative square matrix.

    For nonnegative matrices the spectral radius is attained by a real
    nonnegative eigenvalue, so it equals the largest real part over the
    spectrum; that is what is returned, clipped at zero against rounding
    noise.  Entries below ``-tol.abs_floor`` are rejected.
    """
    m = _as_nonnegative(P, tol, "spectral_radius input")
    eigs = np.linalg.eigvals(m)
    return max(0.0, float(np.max(eigs.real)))


def perron_vector(P, tol: TolerancePolicy = DEFAULT_TOL) -> np.ndarray:
    """Nonnegative eigenvector at the Perron root, infinity norm 1.

    Inverse iteration on a slightly shifted matrix: the shifted inverse is
    entrywise nonnegative, so iterates started from the all-ones vector
    stay in the nonnegative orthant, and the shift amplifies the true
    eigendirection even when the Perron root is defective.  Iterates until
    ``||P x - rho x||_inf <= tol.rel_sing * ||P||_inf`` (plus the absolute
    floor) or raises ``ArithmeticError``.
    """
    m = _as_nonnegative(P, tol, "perron_vector input")
    n = m.shape[0]
    scale = inf_norm(m)
    if scale == 0.0:
        return np.ones(n)
    work = m / scale  # eigenvectors are invariant under scaling
    rho = spectral_radius(work, tol)
    target = tol.rel_sing + tol.abs_floor
    eye = np.eye(n)
    best = np.ones(n)
    best_res = inf_norm(work @ best - rho * best)
    x = best
    for eps in (1e-8, 1e-10, 1e-12):
        if best_res <= target:
            break
        shifted = (rho + eps) * eye - work
        for _ in range(3):
            try:
                y = np.linalg.solve(shifted, x)
            except np.linalg.LinAlgError:
                break
            y = np.maximum(y, 0.0)
            top = float(y.max()) if y.size else 0.0
            if top <= 0.0 or not np.isfinite(top):
                break
            x = y / top
            res = inf_norm(work @ x - rho * x)
            if res < best_res:
                best, best_res = x, res
            if best_res <= target:
                break
    if best_res <= target:
        return best
    raise ArithmeticError(
        f"perron_vector residual {best_res:.3e} above target {target:.3e}"
    )


def solve(X, rhs, tol: TolerancePolicy = DEFAULT_TOL) -> np.ndarray:
    """Solve ``X y = rhs`` (vector or matrix right-hand side) by LU.

    Raises :class:`SingularMatrixError` when a pivot falls to or below
    ``tol.rel_sing * ||X||_inf`` during the factorization.
    """
    m = as_square(X)
    b = np.array(rhs, dtype=float)
    if b.ndim not in (1, 2) or b.shape[0] != m.shape[0]:
        raise ValueError(
            f"right-hand side shape {b.shape} incompatible with order {m.shape[0]}"
        )
    if b.size and not np.all(np.isfinite(b)):
        raise ValueError("right-hand side contains non-finite entries")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, piv = lu_factor(m, check_finite=False)
    smallest_pivot = float(np.min(np.abs(np.diag(lu))))
    if smallest_pivot <= tol.rel_sing * inf_norm(m):
        raise SingularMatrixError(
            f"pivot {smallest_pivot:.3e} at or below singularity threshold"
        )
    return lu_solve((lu, piv), b, check_finite=False)


def nullspace(X, tol: TolerancePolicy = DEFAULT_TOL) -> list[np.ndarray]:
    """Orthonormal basis of the numerical kernel of a square ``X``.

    Singular values at or below ``max(tol.rel_sing * sigma_max,
    tol.abs_floor)`` count as zero; the empty list means ``X`` is
    numerically nonsingular.
    """
    m = as_square(X)
    _, sv, vh = np.linalg.svd(m)
    cutoff = max(tol.rel_sing * float(sv[0]), tol.abs_floor)
    return [vh[i].copy() for i in range(len(sv)) if sv[i] <= cutoff]


def is_singular(X, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    """Whether the smallest singular value of ``X`` sits at or below
    ``tol.rel_sing * ||X||_inf + tol.abs_floor``."""
    m = as_square(X)
    sv = np.linalg.svd(m, compute_uv=False)
    return bool(sv[-1] <= tol.rel_sing * inf_norm(m) + tol.abs_floor)
