"""Deterministic pencil generation and definition-level oracles for the
test suites.

The generator builds pencils that satisfy all three admission conditions
by construction, so property suites never need rejection sampling.  The
oracles here deliberately avoid the code paths they are used to check:
pencil eigenvalues come from an explicit determinant-polynomial expansion,
and classification comes straight from the defining inequalities.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .linalg import DEFAULT_TOL, TolerancePolicy, as_square, inf_norm
from .pencil import Pencil
from .zmatrix import rho_s, z_decompose

__all__ = [
    "GenConfig",
    "PencilSpectrum",
    "gen_pencil",
    "oracle_pencil_eigs",
    "oracle_classify",
]

ORACLE_EIGS_MAX_ORDER = 6
ORACLE_CLASSIFY_MAX_ORDER = 8


@dataclass(frozen=True)
class GenConfig:
    """Knobs for the random pencil generator; same seed, same pencil.

    The PRNG is numpy's default_rng (PCG64) seeded with ``seed``, drawing
    in a fixed order: A values, A mask, N values, N mask.
    """

    n: int
    seed: int
    density: float = 0.5
    magnitude: float = 1.0
    dominance_slack: float = 0.1

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if not 0.0 < self.density <= 1.0:
            raise ValueError("density must be in (0, 1]")
        if self.magnitude <= 0.0 or self.dominance_slack <= 0.0:
            raise ValueError("magnitude and dominance_slack must be positive")


def gen_pencil(cfg: GenConfig) -> Pencil:
    """Random pencil satisfying all three admission conditions.

    A is nonnegative with the requested fill density; B = A + (D - N)
    where N is a nonnegative off-diagonal sample and D makes every row of
    D - N strictly dominant by ``dominance_slack``.  Then B - A is a
    nonsingular M-matrix by construction and the all-ones vector witnesses
    the positivity condition.
    """
    rng = np.random.default_rng(cfg.seed)
    n = cfg.n
    a_vals = rng.uniform(0.0, cfg.magnitude, size=(n, n))
    a_mask = rng.random((n, n)) < cfg.density
    A = np.where(a_mask, a_vals, 0.0)
    n_vals = rng.uniform(0.0, cfg.magnitude, size=(n, n))
    n_mask = rng.random((n, n)) < cfg.density
    N = np.where(n_mask, n_vals, 0.0)
    np.fill_diagonal(N, 0.0)
    M = np.diag(N.sum(axis=1) + cfg.dominance_slack) - N
    return Pencil(A=A, B=A + M)


def _parity(perm: tuple[int, ...]) -> int:
    visited = [False] * len(perm)
    sign = 1
    for start in range(len(perm)):
        if visited[start]:
            continue
        length = 0
        j = start
        while not visited[j]:
            visited[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@dataclass(frozen=True)
class PencilSpectrum:
    """Finite roots of det(t*B - A), plus the count of infinite
    eigenvalues (the degree deficit against n; nonzero iff det B = 0)."""

    finite: tuple[complex, ...]
    infinite_count: int


def oracle_pencil_eigs(p: Pencil) -> PencilSpectrum:
    """Pencil eigenvalues via symbolic-in-t determinant expansion.

    det(t*B - A) is assembled permutation by permutation as a degree-n
    polynomial with double-precision convolution; roots come from the
    companion-matrix root finder.  Independent of every solver used by the
    pencil module.
    """
    n = p.n
    if n > ORACLE_EIGS_MAX_ORDER:
        raise ValueError(f"order {n} above oracle limit {ORACLE_EIGS_MAX_ORDER}")
    coeffs = np.zeros(n + 1)
    for perm in itertools.permutations(range(n)):
        poly = np.ones(1)
        for i, j in enumerate(perm):
            poly = np.convolve(poly, np.array([-p.A[i, j], p.B[i, j]]))
        coeffs += _parity(perm) * poly
    cutoff = 1e-12 * max(1.0, float(np.max(np.abs(coeffs))))
    degree = -1
    for k in range(n, -1, -1):
        if abs(coeffs[k]) > cutoff:
            degree = k
            break
    if degree <= 0:
        # Constant (or numerically zero) determinant: no finite roots.
        return PencilSpectrum(finite=(), infinite_count=n - max(degree, 0))
    roots = np.roots(coeffs[degree::-1])
    finite = tuple(sorted((complex(r) for r in roots), key=lambda z: (z.real, z.imag)))
    return PencilSpectrum(finite=finite, infinite_count=n - degree)


def oracle_classify(X, tol: TolerancePolicy = DEFAULT_TOL) -> int:
    """Class index straight from the defining inequalities.

    Uses the canonical decomposition ``X = q*I - P`` and the full ladder
    ``rho_1 <= ... <= rho_n`` of submatrix maxima: the answer is the
    largest s with ``rho_s <= q`` (band-tolerant, so boundaries land on
    the M-matrix side; the sentinel ``rho_{n+1} = +inf`` needs no check).
    """
    m = as_square(X)
    n = m.shape[0]
    if n > ORACLE_CLASSIFY_MAX_ORDER:
        raise ValueError(f"order {n} above oracle limit {ORACLE_CLASSIFY_MAX_ORDER}")
    dec = z_decompose(m, tol)
    delta = tol.rel_sing * max(1.0, inf_norm(m))
    s = 0
    for k in range(1, n + 1):
        if rho_s(dec.P, k, tol) <= dec.q + delta:
            s = k
    return s
