"""Pencil-level analysis of the matrix family ``t*B - A`` on [0, 1].

A pencil is admitted when three conditions hold: A is entrywise
nonnegative (1); every off-diagonal entry of B is at most the matching
entry of A (2); some positive vector u has ``(B - A) u`` positive (3).
Conditions (2) and (3) make ``B - A`` a nonsingular M-matrix, so
``C = (B - A)^{-1} A`` is nonnegative and its Perron root ``mu`` yields
the critical value ``rho_ab = mu / (1 + mu)``: the largest real pencil
eigenvalue in [0, 1).  Each index set J contributes a subpencil threshold
``tau_J`` the same way, and the maxima ``sigma_s`` over sets of size s
give thresholds ``tau_s`` that partition [0, 1] into the Z-matrix classes
of ``t*B - A``: on ``[tau_s, tau_{s+1})`` every principal submatrix of
order at most s is an M-matrix and some submatrix of order s+1 is not.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import linalg, zmatrix
from .digraph import ClassPartition
from .linalg import DEFAULT_TOL, TolerancePolicy, as_square, submatrix
from .zmatrix import MAX_ENUMERATION_ORDER, MStatus

__all__ = [
    "Pencil",
    "Violation",
    "ValidationReport",
    "ValidationFailedError",
    "SpectralSummary",
    "ThresholdTable",
    "Segment",
    "IntervalPartition",
    "CriticalClassBound",
    "validate",
    "spectral_summary",
    "thresholds",
    "classify_at",
    "partition",
    "m_trichotomy",
    "zs_bound",
]


@dataclass(frozen=True, eq=False)
class Pencil:
    """The pair (A, B) defining the family ``t*B - A``.

    Both matrices are stored as read-only float64 copies; all operations
    on a pencil are pure functions, so instances can be shared freely.
    """

    A: np.ndarray
    B: np.ndarray

    def __post_init__(self) -> None:
        a = as_square(self.A, "A")
        b = as_square(self.B, "B")
        if a.shape != b.shape:
            raise ValueError(f"A and B must have equal order: {a.shape} vs {b.shape}")
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "A", a)
        object.__setattr__(self, "B", b)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    def matrix_at(self, t: float) -> np.ndarray:
        """The family member ``t*B - A``."""
        return float(t) * self.B - self.A


@dataclass(frozen=True)
class Violation:
    """One failed check: which condition, where (1-based entry, when an
    entry is to blame), and a human-readable message."""

    condition: int
    position: tuple[int, int] | None
    message: str


@dataclass(frozen=True, eq=False)
class ValidationReport:
    c1_holds: bool
    c2_holds: bool
    c3_holds: bool
    witness_u: np.ndarray | None
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return self.c1_holds and self.c2_holds and self.c3_holds


class ValidationFailedError(ValueError):
    """An operation requiring a valid pencil received one that fails a
    condition; carries the offending :class:`ValidationReport`."""

    def __init__(self, report: ValidationReport):
        self.report = report
        failed = sorted({v.condition for v in report.violations})
        super().__init__(
            "pencil fails condition(s) " + ", ".join(str(c) for c in failed)
        )


def validate(p: Pencil, tol: TolerancePolicy = DEFAULT_TOL) -> ValidationReport:
    """Check the three admission conditions, producing a witness vector.

    Condition 3 is decided via the nonsingular-M-matrix test on ``B - A``
    (equivalent whenever condition 2 holds); the concrete witness
    ``u = (B - A)^{-1} 1`` then satisfies ``u > 0`` and ``(B - A) u = 1``,
    so the report certifies itself.  If ``B - A`` is not even a Z-matrix,
    the witness attempt alone decides.
    """
    A, B, n = p.A, p.B, p.n
    floor = tol.abs_floor
    violations: list[Violation] = []

    c1 = True
    for i, j in zip(*np.nonzero(A < -floor)):
        c1 = False
        violations.append(
            Violation(1, (int(i) + 1, int(j) + 1),
                      f"A[{i + 1},{j + 1}] = {A[i, j]:.6g} is negative")
        )

    diff = B - A
    c2 = True
    for i, j in zip(*np.nonzero(diff > floor)):
        if i == j:
            continue
        c2 = False
        violations.append(
            Violation(2, (int(i) + 1, int(j) + 1),
                      f"B[{i + 1},{j + 1}] - A[{i + 1},{j + 1}] = "
                      f"{diff[i, j]:.6g} is positive")
        )

    c3 = False
    witness: np.ndarray | None = None
    if zmatrix.is_z_matrix(diff, tol):
        if zmatrix.m_status(diff, tol) is MStatus.NONSINGULAR_M:
            u = linalg.solve(diff, np.ones(n), tol)
            if float(u.min()) > floor:
                c3 = True
                witness = u
    else:
        # M-test inapplicable; a positive solution of (B-A)u = 1 still
        # certifies the condition directly.
        try:
            u = linalg.solve(diff, np.ones(n), tol)
            if float(u.min()) > floor:
                c3 = True
                witness = u
        except linalg.SingularMatrixError:
            pass
    if not c3:
        violations.append(
            Violation(3, None,
                      "no positive u with (B - A) u > 0 found; "
                      "B - A is not a nonsingular M-matrix")
        )

    return ValidationReport(
        c1_holds=c1, c2_holds=c2, c3_holds=c3,
        witness_u=witness, violations=tuple(violations),
    )


def _require_valid(p: Pencil, tol: TolerancePolicy) -> ValidationReport:
    report = validate(p, tol)
    if not report.ok:
        raise ValidationFailedError(report)
    return report


def _perron_of_transform(C) -> float:
    # C is nonnegative in exact arithmetic, so its Perron root equals the
    # largest real part over the spectrum.
    eigs = np.linalg.eigvals(C)
    return max(0.0, float(np.max(eigs.real)))


def _subpencil_perron(p: Pencil, J, tol: TolerancePolicy) -> float:
    AJ = submatrix(p.A, J)
    BJ = submatrix(p.B, J)
    return _perron_of_transform(linalg.solve(BJ - AJ, AJ, tol))


@dataclass(frozen=True, eq=False)
class SpectralSummary:
    """Eigenvalue data of the pencil through the transform ``C``.

    ``mu`` is the Perron root of ``C = (B - A)^{-1} A``;
    ``rho_ab = mu / (1 + mu)`` is the largest real pencil eigenvalue in
    [0, 1); ``eigenvalues`` is the image of the full spectrum of ``C``
    under ``m -> m / (1 + m)``, skipping values numerically at -1 (those
    correspond to infinite pencil eigenvalues).
    """

    mu: float
    rho_ab: float
    eigenvalues: tuple[complex, ...]


def spectral_summary(p: Pencil, tol: TolerancePolicy = DEFAULT_TOL) -> SpectralSummary:
    _require_valid(p, tol)
    C = linalg.solve(p.B - p.A, p.A, tol)
    spectrum = np.linalg.eigvals(C)
    mu = max(0.0, float(np.max(spectrum.real)))
    rho = mu / (1.0 + mu)
    mapped = [
        complex(m / (1.0 + m))
        for m in spectrum
        if abs(1.0 + m) > tol.rel_sing * max(1.0, abs(m))
    ]
    mapped.sort(key=lambda z: (z.real, z.imag))
    return SpectralSummary(mu=mu, rho_ab=rho, eigenvalues=tuple(mapped))


@dataclass(frozen=True, eq=False)
class ThresholdTable:
    """Subpencil maxima and the induced thresholds.

    ``sigma[s-1]`` is the largest subpencil Perron value over index sets
    of size s; ``tau[s] = sigma_s / (1 + sigma_s)`` with ``tau[0] = 0``;
    ``argmax_sets[s-1]`` is the lexicographically smallest set attaining
    ``sigma_s``.  ``tau[n]`` equals the critical value ``rho_ab``.
    """

    n: int
    sigma: tuple[float, ...]
    tau: tuple[float, ...]
    argmax_sets: tuple[tuple[int, ...], ...]

    @property
    def rho_ab(self) -> float:
        return self.tau[-1]


def thresholds(
    p: Pencil,
    tol: TolerancePolicy = DEFAULT_TOL,
    max_order: int = MAX_ENUMERATION_ORDER,
) -> ThresholdTable:
    """Exhaustive subpencil sweep: ``sigma_s`` and ``tau_s`` for every s.

    Every subpencil is well defined because principal submatrices of the
    nonsingular M-matrix ``B - A`` are themselves nonsingular M-matrices.
    Cost is one small solve-plus-eigenvalue problem per nonempty index set
    (2^n - 1 of them), guarded at ``max_order``.
    """
    _require_valid(p, tol)
    n = p.n
    if n > max_order:
        raise zmatrix.EnumerationLimitError(
            f"order {n} exceeds the enumeration guard {max_order}; "
            "pass max_order explicitly to override"
        )
    sigma: list[float] = []
    argmax: list[tuple[int, ...]] = []
    for s in range(1, n + 1):
        best = -np.inf
        best_set: tuple[int, ...] = ()
        for J in itertools.combinations(range(1, n + 1), s):
            value = _subpencil_perron(p, J, tol)
            if value > best:
                best, best_set = value, J
        sigma.append(best)
        argmax.append(best_set)
    tau = [0.0] + [v / (1.0 + v) for v in sigma]
    return ThresholdTable(
        n=n, sigma=tuple(sigma), tau=tuple(tau), argmax_sets=tuple(argmax)
    )


def classify_at(
    p: Pencil,
    t: float,
    tbl: ThresholdTable,
    tol: TolerancePolicy = DEFAULT_TOL,
) -> int:
    """Class index of ``t*B - A`` read off the threshold table.

    Returns the largest s with ``tau_s <= t`` (up to the tolerance band
    ``delta = tol.rel_sing * max(1, t)``), so coincident thresholds make
    the higher class win and the intermediate classes are skipped.

    The boundary point t = 0 is decided directly from ``-A``: when every
    diagonal entry of A vanishes the class function may jump there (``-A``
    can be a singular M-matrix even though the family leaves the top class
    immediately for t > 0), and the thresholds cannot see that.
    """
    t = float(t)
    delta = tol.rel_sing * max(1.0, abs(t))
    if t < -delta or t > 1.0 + delta:
        raise ValueError(f"t={t} outside [0, 1]")
    if t <= delta:
        return zmatrix.classify_direct(p.matrix_at(0.0), tol)
    s = 0
    for k in range(1, tbl.n + 1):
        if tbl.tau[k] <= t + delta:
            s = k
    return s


@dataclass(frozen=True)
class Segment:
    """One class interval: [lo, hi) except the final segment [lo, 1]."""

    lo: float
    hi: float
    lo_closed: bool
    hi_closed: bool
    s: int


@dataclass(frozen=True)
class IntervalPartition:
    """Contiguous, non-overlapping segments covering [0, 1] exactly."""

    segments: tuple[Segment, ...]

    def __post_init__(self) -> None:
        if not self.segments:
            raise ValueError("empty partition")
        if self.segments[0].lo != 0.0 or self.segments[-1].hi != 1.0:
            raise ValueError("partition must span [0, 1]")
        for a, b in zip(self.segments, self.segments[1:]):
            if a.hi != b.lo:
                raise ValueError("segments must be contiguous")
        if not self.segments[-1].hi_closed:
            raise ValueError("final segment must be closed at 1")


def partition(
    p: Pencil,
    tbl: ThresholdTable,
    tol: TolerancePolicy = DEFAULT_TOL,
) -> IntervalPartition:
    """Merge the thresholds into the class partition of [0, 1].

    Classes whose interval would be empty (coincident thresholds, within
    ``tol.rel_sing``) are omitted; each kept segment is closed at its left
    threshold, and the final segment is closed at 1.
    """
    coincide = tol.rel_sing
    cuts = [0.0]
    labels: list[int] = []
    for s in range(tbl.n):
        if tbl.tau[s + 1] - cuts[-1] > coincide:
            labels.append(s)
            cuts.append(tbl.tau[s + 1])
    labels.append(tbl.n)
    segments = []
    for i, s in enumerate(labels):
        last = i == len(labels) - 1
        segments.append(
            Segment(
                lo=cuts[i],
                hi=1.0 if last else cuts[i + 1],
                lo_closed=True,
                hi_closed=last,
                s=s,
            )
        )
    return IntervalPartition(tuple(segments))


def m_trichotomy(p: Pencil, t: float, tol: TolerancePolicy = DEFAULT_TOL) -> MStatus:
    """M-matrix status of ``t*B - A``: NonsingularM above the critical
    value, SingularM at it (within the band), NotM strictly below it on
    (0, rho_ab); at t = 0 either SingularM or NotM."""
    t = float(t)
    delta = tol.rel_sing * max(1.0, abs(t))
    if t < -delta or t > 1.0 + delta:
        raise ValueError(f"t={t} outside [0, 1]")
    _require_valid(p, tol)
    return zmatrix.m_status(p.matrix_at(min(max(t, 0.0), 1.0)), tol)


@dataclass(frozen=True)
class CriticalClassBound:
    """Class-size bound implied by a critical class: for every t in
    (0, rho_ab) the matrix ``t*B - A`` lies in a class of index at most
    ``s_upper``."""

    vertices: tuple[int, ...]
    m: int
    s_upper: int


def zs_bound(
    p: Pencil,
    tbl: ThresholdTable,
    part: ClassPartition,
    tol: TolerancePolicy = DEFAULT_TOL,
) -> tuple[CriticalClassBound, ...]:
    """Bounds from classes of the union digraph whose subpencil attains
    the critical value.

    For each class J of ``part`` whose subpencil threshold equals
    ``rho_ab`` (within ``tol.rel_eig``): the bound is ``s <= n - 1`` when
    J is the whole vertex set, else ``s <= |J| - 1``.  Classes not
    attaining the critical value are omitted.
    """
    _require_valid(p, tol)
    rho = tbl.rho_ab
    out: list[CriticalClassBound] = []
    for cls in part.classes:
        mu = _subpencil_perron(p, cls, tol)
        tau_cls = mu / (1.0 + mu)
        if abs(tau_cls - rho) <= tol.rel_eig:
            m = len(cls)
            out.append(
                CriticalClassBound(
                    vertices=cls,
                    m=m,
                    s_upper=p.n - 1 if m == p.n else m - 1,
                )
            )
    return tuple(out)
