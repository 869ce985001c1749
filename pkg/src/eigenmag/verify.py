"""Brute-force oracle and differential harness for the magnitude identity.

The oracle takes the long way around: full spectral decomposition, squared
moduli of the eigenvector components.  ``compare`` runs both routes on the
same matrix and reports elementwise error statistics; ``campaign`` batches
comparisons over generator specs.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .eigensolve import HermitianMatrix, spectral_decomposition
from .errors import EigenmagError
from .magnitudes import (
    MagnitudeTable,
    check_interlacing,
    cluster_spectrum,
    default_cluster_tol,
    _table_and_minors,
)
from .matrixio import GeneratorSpec, fmt, generate

INTERLACING_REL_TOL = 1e-10


@dataclass(frozen=True)
class ComparisonReport:
    """Error statistics of identity-route weights against the oracle table."""

    n: int
    provenance: str
    max_abs_error: float
    mean_abs_error: float
    worst_cell: tuple[int, int]
    row_sum_error: float
    col_sum_error: float
    interlacing_pass: bool
    min_gap_normalized: float
    tol: float
    passed: bool
    error: str = ""


@dataclass(frozen=True)
class CampaignSummary:
    total: int
    pass_count: int
    worst_error: float
    worst_provenance: str
    smallest_normalized_gap: float
    smallest_gap_provenance: str


def oracle_magnitudes(A: HermitianMatrix, tol: float | None = None) -> MagnitudeTable:
    """|V[i][j]|^2 straight from the eigendecomposition, cluster rows even-split.

    Rows follow ascending eigenvalues, and degenerate clusters (same tolerance
    as the identity route) are replaced by the even split of their column
    totals, so the two tables share one convention and can be compared
    elementwise.
    """
    sd = spectral_decomposition(A)
    weights = np.abs(sd.vectors) ** 2
    cluster_tol = default_cluster_tol(sd.spectrum) if tol is None else tol
    clustering = cluster_spectrum(sd.spectrum, cluster_tol)
    for cluster in clustering.clusters:
        if len(cluster) > 1:
            rows = list(cluster)
            weights[rows] = np.sum(weights[rows], axis=0) / len(rows)
    return MagnitudeTable(sd.spectrum, weights, clustering)


def compare(A: HermitianMatrix, tol: float) -> ComparisonReport:
    """Differential run of the identity table against the oracle table."""
    table, minors = _table_and_minors(A)
    oracle = oracle_magnitudes(A)
    diff = np.abs(table.weights - oracle.weights)
    worst = np.unravel_index(int(np.argmax(diff)), diff.shape)
    scale = table.spectrum.scale()
    inter_tol = INTERLACING_REL_TOL * scale
    interlacing_pass = all(
        check_interlacing(table.spectrum, specM, inter_tol).passed for specM in minors
    )
    gaps = np.diff(table.spectrum.values)
    min_gap = float(np.min(gaps) / scale) if gaps.size and scale > 0 else 0.0
    max_err = float(np.max(diff))
    return ComparisonReport(
        n=A.n,
        provenance=A.source,
        max_abs_error=max_err,
        mean_abs_error=float(np.mean(diff)),
        worst_cell=(int(worst[0]), int(worst[1])),
        row_sum_error=float(np.max(np.abs(np.sum(table.weights, axis=1) - 1.0))),
        col_sum_error=float(np.max(np.abs(np.sum(table.weights, axis=0) - 1.0))),
        interlacing_pass=interlacing_pass,
        min_gap_normalized=min_gap,
        tol=tol,
        passed=bool(max_err <= tol and interlacing_pass),
    )


def _failed_report(spec: GeneratorSpec, tol: float, err: EigenmagError) -> ComparisonReport:
    return ComparisonReport(
        n=spec.n,
        provenance=spec.provenance(),
        max_abs_error=float("nan"),
        mean_abs_error=float("nan"),
        worst_cell=(0, 0),
        row_sum_error=float("nan"),
        col_sum_error=float("nan"),
        interlacing_pass=False,
        min_gap_normalized=float("nan"),
        tol=tol,
        passed=False,
        error=f"{err.kind}: {err}",
    )


def campaign(specs, tol: float, workers: int | None = None):
    """Batch of compare runs; failures are recorded in the reports, not raised."""
    specs = list(specs)
    if not specs:
        raise ValueError("campaign needs at least one generator spec")

    def run(spec: GeneratorSpec) -> ComparisonReport:
        try:
            return compare(generate(spec), tol)
        except EigenmagError as err:
            return _failed_report(spec, tol, err)

    if workers is not None and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(run, specs))
    else:
        reports = [run(spec) for spec in specs]

    ok = [r for r in reports if not r.error]
    worst = max(ok, key=lambda r: r.max_abs_error) if ok else None
    tightest = min(ok, key=lambda r: r.min_gap_normalized) if ok else None
    summary = CampaignSummary(
        total=len(reports),
        pass_count=sum(r.passed for r in reports),
        worst_error=worst.max_abs_error if worst else float("nan"),
        worst_provenance=worst.provenance if worst else "",
        smallest_normalized_gap=tightest.min_gap_normalized if tightest else float("nan"),
        smallest_gap_provenance=tightest.provenance if tightest else "",
    )
    return reports, summary


def _jnum(x: float) -> str:
    return "null" if np.isnan(x) else fmt(x)


def _report_json(r: ComparisonReport) -> str:
    return (
        "{"
        f'"n": {r.n}, "provenance": "{r.provenance}", '
        f'"max_abs_error": {_jnum(r.max_abs_error)}, "mean_abs_error": {_jnum(r.mean_abs_error)}, '
        f'"worst_cell": [{r.worst_cell[0] + 1}, {r.worst_cell[1] + 1}], '
        f'"row_sum_error": {_jnum(r.row_sum_error)}, "col_sum_error": {_jnum(r.col_sum_error)}, '
        f'"interlacing_pass": {"true" if r.interlacing_pass else "false"}, '
        f'"min_gap_normalized": {_jnum(r.min_gap_normalized)}, '
        f'"tol": {fmt(r.tol)}, "passed": {"true" if r.passed else "false"}, '
        f'"error": "{r.error}"'
        "}"
    )


def campaign_json(reports, summary: CampaignSummary) -> str:
    """Deterministic JSON rendering of a campaign (17-significant-digit decimals)."""
    body = ", ".join(_report_json(r) for r in reports)
    return (
        '{"reports": [' + body + "], "
        '"summary": {'
        f'"total": {summary.total}, "pass_count": {summary.pass_count}, '
        f'"worst_error": {_jnum(summary.worst_error)}, '
        f'"worst_provenance": "{summary.worst_provenance}", '
        f'"smallest_normalized_gap": {_jnum(summary.smallest_normalized_gap)}, '
        f'"smallest_gap_provenance": "{summary.smallest_gap_provenance}"'
        "}}\n"
    )
