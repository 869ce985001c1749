"""Service operations: one function per endpoint, shared by HTTP and CLI.

Handlers render the final output bytes themselves (CSV, JSON, matrix
documents, report text) so that every client sees identical content.
Domain errors propagate as :class:`eigenmag.errors.EigenmagError`; the app
and the CLI translate them to status codes / exit codes.
"""

from __future__ import annotations

import numpy as np

from ..eigensolve import HermitianMatrix, eigenvalues
from ..errors import InvalidSpec
from ..magnitudes import (
    check_interlacing,
    magnitude_column,
    magnitude_table,
    principal_minor,
    resolvent_det_form,
    resolvent_pf_form,
)
from ..matrixio import GeneratorSpec, fmt, generate, parse_matrix, serialize_matrix, write_table
from ..verify import INTERLACING_REL_TOL, ComparisonReport, compare
from . import schemas

#: grid points closer to a pole than this fraction of the spectral spread are skipped
RESOLVENT_SKIP_REL = 1e-9


def _to_spec(g: schemas.GeneratorModel) -> GeneratorSpec:
    mult = tuple(g.multiplicities) if g.multiplicities else None
    return GeneratorSpec(g.kind, g.n, g.seed, mult)


def _check_col(col: int, n: int) -> int:
    if not 1 <= col <= n:
        raise InvalidSpec(f"column {col} out of range for dimension {n}")
    return col - 1


def magnitudes(req: schemas.MagnitudesRequest) -> schemas.MagnitudesResponse:
    A = parse_matrix(req.matrix_text)
    if req.col is None:
        table = magnitude_table(A, tol=req.tol)
        labels = None
    else:
        j = _check_col(req.col, A.n)
        table, _ = magnitude_column(A, j, tol=req.tol)
        labels = [req.col]
    content = write_table(table, req.format, clustering_metadata=table.clustering, coord_labels=labels)
    media = "text/csv" if req.format == "csv" else "application/json"
    return schemas.MagnitudesResponse(content=content, media_type=media, n=A.n)


def resolvent(req: schemas.ResolventRequest) -> schemas.ResolventResponse:
    A = parse_matrix(req.matrix_text)
    j = _check_col(req.col, A.n)
    specA = eigenvalues(A)
    specM = eigenvalues(principal_minor(A, j))
    column = None
    if req.form in ("pf", "both"):
        table, _ = magnitude_column(A, j)
        column = table.weights[:, 0]
    grid = np.linspace(req.start, req.stop, req.samples)
    threshold = RESOLVENT_SKIP_REL * specA.spread()
    lines = ["lambda,det_form,pf_form,nearest_pole_gap"]
    skipped = 0
    for lam in grid:
        lam = float(lam)
        if np.min(np.abs(specA.values - lam)) < threshold:
            skipped += 1
            continue
        det_cell = pf_cell = ""
        gap = None
        if req.form in ("det", "both"):
            sample = resolvent_det_form(specA, specM, lam)
            det_cell, gap = fmt(sample.value), sample.nearest_pole_gap
        if req.form in ("pf", "both"):
            sample = resolvent_pf_form(column, specA, lam)
            pf_cell, gap = fmt(sample.value), sample.nearest_pole_gap
        lines.append(f"{fmt(lam)},{det_cell},{pf_cell},{fmt(gap)}")
    content = "\n".join(lines) + "\n"
    return schemas.ResolventResponse(content=content, emitted=len(lines) - 1, skipped=skipped)


def _report_model(r: ComparisonReport) -> schemas.ReportModel:
    return schemas.ReportModel(
        n=r.n,
        provenance=r.provenance,
        max_abs_error=r.max_abs_error,
        mean_abs_error=r.mean_abs_error,
        worst_cell=(r.worst_cell[0] + 1, r.worst_cell[1] + 1),
        row_sum_error=r.row_sum_error,
        col_sum_error=r.col_sum_error,
        interlacing_pass=r.interlacing_pass,
        min_gap_normalized=r.min_gap_normalized,
        tol=r.tol,
        passed=r.passed,
    )


def report_text(r: ComparisonReport) -> str:
    return (
        f"n = {r.n}\n"
        f"provenance = {r.provenance}\n"
        f"max_abs_error = {fmt(r.max_abs_error)}\n"
        f"mean_abs_error = {fmt(r.mean_abs_error)}\n"
        f"worst_cell = ({r.worst_cell[0] + 1}, {r.worst_cell[1] + 1})\n"
        f"row_sum_error = {fmt(r.row_sum_error)}\n"
        f"col_sum_error = {fmt(r.col_sum_error)}\n"
        f"interlacing_pass = {'true' if r.interlacing_pass else 'false'}\n"
        f"min_gap_normalized = {fmt(r.min_gap_normalized)}\n"
        f"tol = {fmt(r.tol)}\n"
        f"result = {'PASS' if r.passed else 'FAIL'}\n"
    )


def verify(req: schemas.VerifyRequest) -> schemas.VerifyResponse:
    if req.matrix_text is not None:
        A = parse_matrix(req.matrix_text, source=req.source)
    else:
        A = generate(_to_spec(req.generator))
    report = compare(A, req.tol)
    return schemas.VerifyResponse(
        content=report_text(report), passed=report.passed, report=_report_model(report)
    )


def generate_matrix(req: schemas.GenerateRequest) -> schemas.GenerateResponse:
    A = generate(_to_spec(req.generator))
    return schemas.GenerateResponse(content=serialize_matrix(A, req.layout))


def interlace(req: schemas.InterlaceRequest) -> schemas.InterlaceResponse:
    A = parse_matrix(req.matrix_text)
    j = _check_col(req.col, A.n)
    specA = eigenvalues(A)
    specM = eigenvalues(principal_minor(A, j))
    report = check_interlacing(specA, specM, INTERLACING_REL_TOL * specA.scale())
    content = (
        f"n = {A.n}\n"
        f"col = {req.col}\n"
        f"tol = {fmt(report.tol)}\n"
        f"worst_slack = {fmt(report.worst_slack)}\n"
        f"worst_constraint = {report.worst_constraint}\n"
        f"result = {'PASS' if report.passed else 'FAIL'}\n"
    )
    return schemas.InterlaceResponse(
        content=content, passed=report.passed, worst_slack=report.worst_slack
    )
