"""Squared eigenvector component magnitudes computed from eigenvalues alone.

For a Hermitian A with eigenvalues l_1 <= ... <= l_n and minor M_j (row and
column j removed, eigenvalues m_1 <= ... <= m_{n-1}), the squared magnitude of
coordinate j of the unit eigenvector for a simple l_i is

    |v_{i,j}|^2 = prod_k (l_i - m_k) / prod_{k != i} (l_i - l_k).

Deleting row/column j instead of the first one is the same identity applied to
the transposition-permuted matrix, so the full n x n table needs one minor
eigensolve per coordinate.  Gap products are held in signed log space; a
degenerate (clustered) spectrum is handled by the limit form, which yields the
total eigenspace weight per cluster with the matched minor eigenvalues
cancelled.  The diagonal resolvent entry f(l) ties the two viewpoints
together: its determinant form is the ratio of the gap products and its
partial-fraction form has the squared magnitudes as residues.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .eigensolve import HermitianMatrix, Spectrum, eigenvalues
from .errors import (
    DegenerateEigenvalue,
    DimensionMismatch,
    DimensionTooSmall,
    MatchingFailure,
    NegativeWeight,
    PoleEvaluation,
)
from .logspace import SignedLogValue, signed_log_product

#: ratios below this are an input-consistency error, above it a rounding artifact
NEGATIVE_RATIO_TOL = -1e-9


def default_cluster_tol(spec: Spectrum) -> float:
    """Default absolute gap threshold separating generic and degenerate paths."""
    return 1e-8 * max(1.0, spec.scale())


@dataclass(frozen=True)
class EigenClustering:
    """Ordered partition of spectrum indices into contiguous near-degenerate groups."""

    clusters: tuple[tuple[int, ...], ...]
    representatives: tuple[float, ...]
    tol: float

    @property
    def has_degeneracy(self) -> bool:
        return any(len(c) > 1 for c in self.clusters)


@dataclass(frozen=True)
class MagnitudeTable:
    """Nonnegative weights[i][j] = |v_{i,j}|^2, rows by ascending eigenvalue.

    ``clustering`` records which rows hold an even split of a cluster total
    rather than an individual (non-canonical) eigenvector weight.
    """

    spectrum: Spectrum
    weights: np.ndarray
    clustering: EigenClustering

    def __post_init__(self):
        self.weights.setflags(write=False)

    @property
    def n(self) -> int:
        return self.weights.shape[0]


@dataclass(frozen=True)
class ResolventSample:
    """One evaluation of f(l) at a real point away from the poles."""

    lam: float
    value: float
    nearest_pole_gap: float


@dataclass(frozen=True)
class InterlacingReport:
    """Outcome of the Cauchy interlacing check; failure is data, not an error."""

    passed: bool
    worst_slack: float
    worst_constraint: str
    tol: float


def principal_minor(A: HermitianMatrix, j: int) -> HermitianMatrix:
    """The (n-1) x (n-1) matrix with row and column j removed (0-based), bit-exact."""
    if A.n == 1:
        raise DimensionTooSmall("cannot take a principal minor of a 1x1 matrix")
    if not 0 <= j < A.n:
        raise IndexError(f"coordinate {j} out of range for dimension {A.n}")
    sub = np.delete(np.delete(A.entries, j, axis=0), j, axis=1)
    return HermitianMatrix(sub, source=A.source)


def _require_minor_dim(specA: Spectrum, specM: Spectrum) -> None:
    if specM.source_dim != specA.source_dim - 1:
        raise DimensionMismatch(
            f"minor spectrum has dimension {specM.source_dim}, expected {specA.source_dim - 1}"
        )


def magnitude_squared(
    specA: Spectrum, specM: Spectrum, i: int, tol: float | None = None
) -> float:
    """Weight of one coordinate of the eigenvector for the simple eigenvalue l_i.

    ``i`` is a 0-based index into ``specA``.  Ratios in [-1e-9, 0) are clamped
    to zero; anything more negative means the two spectra do not belong to a
    matrix/minor pair and raises :class:`NegativeWeight`.
    """
    _require_minor_dim(specA, specM)
    if tol is None:
        tol = default_cluster_tol(specA)
    lam = float(specA.values[i])
    others = np.delete(specA.values, i)
    if others.size and np.min(np.abs(lam - others)) <= tol:
        raise DegenerateEigenvalue(
            f"eigenvalue {i} has a neighbor within cluster tolerance {tol:.3e}"
        )
    num = signed_log_product(lam - specM.values)
    if num.is_zero:
        return 0.0
    den = signed_log_product(lam - others)
    ratio = (num / den).to_float()
    if ratio < NEGATIVE_RATIO_TOL:
        raise NegativeWeight(f"weight {ratio:.3e} below {NEGATIVE_RATIO_TOL:.1e}: inconsistent spectra")
    return min(max(ratio, 0.0), 1.0)


def cluster_spectrum(spec: Spectrum, tol: float) -> EigenClustering:
    """Greedy contiguous clustering: adjacent values joining while gaps <= tol."""
    if tol < 0:
        raise ValueError("cluster tolerance must be nonnegative")
    values = spec.values
    clusters: list[tuple[int, ...]] = []
    start = 0
    for k in range(1, spec.n):
        if values[k] - values[k - 1] > tol:
            clusters.append(tuple(range(start, k)))
            start = k
    clusters.append(tuple(range(start, spec.n)))
    reps = tuple(float(np.mean(values[list(c)])) for c in clusters)
    return EigenClustering(tuple(clusters), reps, tol)


def cluster_weight(
    specA: Spectrum, specM: Spectrum, cluster, tol: float
) -> float:
    """Total weight of a coordinate over a whole eigenvalue cluster.

    Limit form of the per-eigenvalue identity as the cluster members coalesce
    at their mean: the m-1 minor eigenvalues nearest the mean (forced into the
    cluster interval by interlacing) cancel against the vanishing gaps and are
    excluded from the numerator, as are the in-cluster factors below.
    """
    _require_minor_dim(specA, specM)
    cluster = tuple(int(k) for k in cluster)
    m = len(cluster)
    if m < 1:
        raise ValueError("cluster must contain at least one index")
    rep = float(np.mean(specA.values[list(cluster)]))
    dist = np.abs(specM.values - rep)
    matched = np.argsort(dist, kind="stable")[: m - 1]
    radius = m * tol + 1e-9 * specA.scale()
    if m > 1 and float(dist[matched[-1]]) > radius:
        raise MatchingFailure(
            f"only {int(np.sum(dist <= radius))} minor eigenvalues within {radius:.3e} "
            f"of cluster at {rep:.6g}; need {m - 1}"
        )
    unmatched = np.delete(specM.values, matched)
    outside = np.delete(specA.values, list(cluster))
    num = signed_log_product(rep - unmatched)
    if num.is_zero:
        return 0.0
    den = signed_log_product(rep - outside)
    if den.is_zero:
        raise DegenerateEigenvalue(
            "cluster mean coincides exactly with an eigenvalue outside the cluster"
        )
    ratio = (num / den).to_float()
    return min(max(ratio, 0.0), 1.0)


def _column_weights(
    specA: Spectrum, specM: Spectrum, clustering: EigenClustering
) -> np.ndarray:
    """Weights of one coordinate for every eigenvalue row, clusters split evenly."""
    col = np.zeros(specA.n)
    for cluster in clustering.clusters:
        if len(cluster) == 1:
            col[cluster[0]] = magnitude_squared(specA, specM, cluster[0], clustering.tol)
        else:
            total = cluster_weight(specA, specM, cluster, clustering.tol)
            col[list(cluster)] = total / len(cluster)
    return col


def _table_and_minors(
    A: HermitianMatrix, tol: float | None = None, workers: int | None = None
):
    """Magnitude table plus the minor spectra it consumed (one per coordinate)."""
    if A.n < 2:
        raise DimensionTooSmall("magnitude table needs n >= 2 (principal minors required)")
    specA = eigenvalues(A)
    cluster_tol = default_cluster_tol(specA) if tol is None else tol
    clustering = cluster_spectrum(specA, cluster_tol)

    def column(j: int):
        specM = eigenvalues(principal_minor(A, j))
        return specM, _column_weights(specA, specM, clustering)

    if workers is not None and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(column, range(A.n)))
    else:
        results = [column(j) for j in range(A.n)]
    minors = [specM for specM, _ in results]
    weights = np.column_stack([col for _, col in results])
    return MagnitudeTable(specA, weights, clustering), minors


def magnitude_table(
    A: HermitianMatrix, tol: float | None = None, workers: int | None = None
) -> MagnitudeTable:
    """Full table of |v_{i,j}|^2 from eigenvalue spectra alone.

    Column j uses the spectra of A and of its j-th principal minor.  Columns
    are independent; pass ``workers`` to evaluate them concurrently (assembly
    is by column index, so results do not depend on completion order).
    """
    table, _ = _table_and_minors(A, tol=tol, workers=workers)
    return table


def magnitude_column(
    A: HermitianMatrix, j: int, tol: float | None = None
) -> tuple[MagnitudeTable, Spectrum]:
    """Single-coordinate table (n x 1 weights) plus the minor spectrum used."""
    if A.n < 2:
        raise DimensionTooSmall("magnitude column needs n >= 2 (principal minors required)")
    specA = eigenvalues(A)
    cluster_tol = default_cluster_tol(specA) if tol is None else tol
    clustering = cluster_spectrum(specA, cluster_tol)
    specM = eigenvalues(principal_minor(A, j))
    col = _column_weights(specA, specM, clustering)
    return MagnitudeTable(specA, col.reshape(-1, 1), clustering), specM


def _pole_gap(specA: Spectrum, lam: float) -> float:
    gap = float(np.min(np.abs(specA.values - lam)))
    if gap <= 1e-14 * specA.scale():
        raise PoleEvaluation(f"lambda {lam:.17g} coincides with an eigenvalue of A")
    return gap


def resolvent_det_form(specA: Spectrum, specM: Spectrum, lam: float) -> ResolventSample:
    """f(lam) as the ratio of characteristic polynomials, via signed log products."""
    _require_minor_dim(specA, specM)
    gap = _pole_gap(specA, lam)
    num = signed_log_product(specM.values - lam)
    den = signed_log_product(specA.values - lam)
    return ResolventSample(lam, (num / den).to_float(), gap)


def resolvent_pf_form(table_column, specA: Spectrum, lam: float) -> ResolventSample:
    """f(lam) as the partial-fraction sum of weights over eigenvalue gaps.

    Terms are accumulated smallest magnitude first so that the near-pole term
    cannot swallow the small corrections.
    """
    weights = np.asarray(table_column, dtype=np.float64).reshape(-1)
    if weights.shape[0] != specA.n:
        raise DimensionMismatch(
            f"column has {weights.shape[0]} weights for spectrum of size {specA.n}"
        )
    gap = _pole_gap(specA, lam)
    terms = weights / (specA.values - lam)
    order = np.argsort(np.abs(terms), kind="stable")
    value = float(np.sum(terms[order]))
    return ResolventSample(lam, value, gap)


def check_interlacing(specA: Spectrum, specM: Spectrum, tol: float) -> InterlacingReport:
    """Verify the Cauchy interlacing l_k(A) <= m_k <= l_{k+1}(A) within tol.

    Interlacing is what makes the identity's gap-product ratio nonnegative,
    so it doubles as a consistency certificate for a (spectrum, minor
    spectrum) pair.
    """
    _require_minor_dim(specA, specM)
    a = specA.values
    b = specM.values
    worst = math.inf
    constraint = "none"
    for k in range(specM.n):
        lower = float(b[k] - a[k])
        if lower < worst:
            worst, constraint = lower, f"l_{k + 1}(A) <= l_{k + 1}(M)"
        upper = float(a[k + 1] - b[k])
        if upper < worst:
            worst, constraint = upper, f"l_{k + 1}(M) <= l_{k + 2}(A)"
    if specM.n == 0:
        worst = 0.0
    return InterlacingReport(worst >= -tol, worst, constraint, tol)
