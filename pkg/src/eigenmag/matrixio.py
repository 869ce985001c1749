"""Matrix document parsing/serialization, seeded generators, table emission.

Text format, line 1 header, then the body:

    hermitian <dense|coordinate> <n> [complex]

dense body: n rows of n whitespace-separated values.  coordinate body:
``row col value`` lines for the lower triangle, 1-indexed, missing entries
zero.  Complex values are written ``a+bi`` (for example ``1.5-2e-3i``).
Serialization always uses 17 significant digits, which round-trips doubles
exactly, so emission is byte-deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import rng
from .eigensolve import HermitianMatrix
from .errors import DimensionMismatch, InvalidSpec, ParseError
from .magnitudes import EigenClustering, MagnitudeTable

GENERATOR_KINDS = ("goe", "gue", "jacobi", "diagonal", "clustered")


def fmt(x: float) -> str:
    """Canonical decimal rendering: 17 significant digits, round-trip exact."""
    return format(float(x), ".17g")


def _fmt_complex(z: complex) -> str:
    re, im = fmt(z.real), fmt(z.imag)
    return re + ("+" if not im.startswith("-") else "") + im + "i"


def _parse_real(token: str, line_no: int) -> float:
    try:
        return float(token)
    except ValueError:
        raise ParseError(f"cannot parse value {token!r}", line=line_no) from None


def _parse_value(token: str, line_no: int) -> complex | float:
    if not token.endswith("i"):
        return _parse_real(token, line_no)
    body = token[:-1]
    # split real and imaginary parts at the last sign not part of an exponent
    for pos in range(len(body) - 1, 0, -1):
        if body[pos] in "+-" and body[pos - 1] not in "eE":
            return complex(_parse_real(body[:pos], line_no), _parse_real(body[pos:], line_no))
    return complex(0.0, _parse_real(body, line_no))


@dataclass(frozen=True)
class MatrixDocument:
    """Parsed matrix file: kind, dimension, entries and provenance."""

    kind: str  # "real-symmetric" | "complex-hermitian"
    n: int
    entries: np.ndarray
    source: str = ""

    def to_matrix(self) -> HermitianMatrix:
        return HermitianMatrix.from_array(self.entries, source=self.source)


def parse_document(text: str | bytes, source: str = "") -> MatrixDocument:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    lines = text.splitlines()
    content = [(i + 1, ln.strip()) for i, ln in enumerate(lines) if ln.strip()]
    if not content:
        raise ParseError("empty document", line=1)
    line_no, header = content[0]
    fields = header.split()
    if len(fields) < 3 or fields[0] != "hermitian":
        raise ParseError("header must be 'hermitian <dense|coordinate> <n> [complex]'", line=line_no)
    layout = fields[1]
    if layout not in ("dense", "coordinate"):
        raise ParseError(f"unknown layout {layout!r}", line=line_no)
    try:
        n = int(fields[2])
    except ValueError:
        raise ParseError(f"bad dimension {fields[2]!r}", line=line_no) from None
    if n < 1:
        raise ParseError("dimension must be positive", line=line_no)
    is_complex = len(fields) > 3 and fields[3] == "complex"
    if len(fields) > 3 and fields[3] != "complex":
        raise ParseError(f"unknown header flag {fields[3]!r}", line=line_no)
    dtype = np.complex128 if is_complex else np.float64
    body = content[1:]

    if layout == "dense":
        if len(body) != n:
            raise DimensionMismatch(f"dense body has {len(body)} rows, header says {n}")
        a = np.zeros((n, n), dtype=dtype)
        for r, (ln_no, ln) in enumerate(body):
            tokens = ln.split()
            if len(tokens) != n:
                raise DimensionMismatch(f"row {r + 1} has {len(tokens)} values, expected {n}")
            for c, tok in enumerate(tokens):
                v = _parse_value(tok, ln_no)
                if isinstance(v, complex) and not is_complex:
                    raise ParseError("complex value in a real document", line=ln_no)
                a[r, c] = v
    else:
        a = np.zeros((n, n), dtype=dtype)
        seen = set()
        for ln_no, ln in body:
            tokens = ln.split()
            if len(tokens) != 3:
                raise ParseError("coordinate lines are 'row col value'", line=ln_no)
            try:
                r, c = int(tokens[0]), int(tokens[1])
            except ValueError:
                raise ParseError("coordinate indices must be integers", line=ln_no) from None
            if not (1 <= r <= n and 1 <= c <= n):
                raise DimensionMismatch(f"entry ({r},{c}) outside {n}x{n} matrix (line {ln_no})")
            if r < c:
                raise ParseError("coordinate entries must address the lower triangle", line=ln_no)
            if (r, c) in seen:
                raise ParseError(f"duplicate entry ({r},{c})", line=ln_no)
            seen.add((r, c))
            v = _parse_value(tokens[2], ln_no)
            if isinstance(v, complex) and not is_complex:
                raise ParseError("complex value in a real document", line=ln_no)
            a[r - 1, c - 1] = v
            if r != c:
                a[c - 1, r - 1] = np.conj(v) if is_complex else v
    kind = "complex-hermitian" if is_complex else "real-symmetric"
    return MatrixDocument(kind, n, a, source=source)


def parse_matrix(text: str | bytes, source: str = "") -> HermitianMatrix:
    """Parse a matrix document and validate/symmetrize it."""
    return parse_document(text, source=source).to_matrix()


def serialize_matrix(A: HermitianMatrix, layout: str = "dense") -> str:
    """Deterministic text form of A; parse(serialize(A)) is entry-exact."""
    if layout not in ("dense", "coordinate"):
        raise InvalidSpec(f"unknown layout {layout!r}")
    n = A.n
    cplx = A.is_complex
    header = f"hermitian {layout} {n}" + (" complex" if cplx else "")
    render = _fmt_complex if cplx else fmt
    lines = [header]
    if layout == "dense":
        for r in range(n):
            lines.append(" ".join(render(A.entries[r, c]) for c in range(n)))
    else:
        for r in range(n):
            for c in range(r + 1):
                v = A.entries[r, c]
                if v != 0:
                    lines.append(f"{r + 1} {c + 1} {render(v)}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class GeneratorSpec:
    """Deterministic test-matrix family: (kind, n, seed) fixes every entry."""

    kind: str
    n: int
    seed: int
    cluster_multiplicities: tuple[int, ...] | None = None

    def provenance(self) -> str:
        extra = ""
        if self.cluster_multiplicities:
            extra = " mult=" + ",".join(str(m) for m in self.cluster_multiplicities)
        return f"{self.kind} n={self.n} seed={self.seed}{extra}"


def _tri_index(i: np.ndarray, j: np.ndarray) -> np.ndarray:
    return i * (i + 1) // 2 + j


def generate(spec: GeneratorSpec) -> HermitianMatrix:
    """Instantiate a generator spec.

    goe: real symmetric, off-diagonal variance 1/2, diagonal variance 1.
    gue: complex Hermitian analogue (off-diagonal real/imag variance 1/2).
    jacobi: real tridiagonal, ramped diagonal plus noise, positive off-diagonal.
    diagonal: strictly increasing diagonal.
    clustered: Q diag(D) Q^H for Haar-ish unitary Q, D repeated per multiplicities.
    """
    kind, n, seed = spec.kind, spec.n, spec.seed
    if kind not in GENERATOR_KINDS:
        raise InvalidSpec(f"unknown generator kind {kind!r}")
    if n < 1:
        raise InvalidSpec("generator dimension must be positive")
    if not 0 <= seed < 2**64:
        raise InvalidSpec("seed must be an unsigned 64-bit integer")
    if kind == "clustered":
        mult = spec.cluster_multiplicities
        if not mult or any(m < 1 for m in mult) or sum(mult) != n:
            raise InvalidSpec("clustered kind needs positive multiplicities summing to n")
    elif spec.cluster_multiplicities:
        raise InvalidSpec(f"multiplicities are only valid for the clustered kind, not {kind!r}")
    source = spec.provenance()

    if kind in ("goe", "gue"):
        ii, jj = np.tril_indices(n)
        t = _tri_index(ii, jj)
        if kind == "goe":
            g = rng.gaussians(seed, t)
            a = np.zeros((n, n))
            a[ii, jj] = np.where(ii == jj, g, g / np.sqrt(2.0))
            a = a + np.tril(a, -1).T
        else:
            re = rng.gaussians(seed, 2 * t)
            im = rng.gaussians(seed, 2 * t + 1)
            a = np.zeros((n, n), dtype=np.complex128)
            vals = np.where(ii == jj, re.astype(np.complex128), (re + 1j * im) / np.sqrt(2.0))
            a[ii, jj] = vals
            a = a + np.tril(a, -1).conj().T
        return HermitianMatrix(a, source=source)

    if kind == "jacobi":
        g_diag = rng.gaussians(seed, np.arange(n))
        ramp = np.linspace(-2.0, 2.0, n) if n > 1 else np.zeros(1)
        d = ramp + 0.3 * g_diag
        a = np.diag(d)
        if n > 1:
            g_off = rng.gaussians(seed, n + np.arange(n - 1))
            off = 0.2 + 0.15 * np.abs(g_off)
            a += np.diag(off, 1) + np.diag(off, -1)
        return HermitianMatrix(a, source=source)

    if kind == "diagonal":
        vals = np.sort(rng.gaussians(seed, np.arange(n)))
        for k in range(1, n):  # strictness guard; exact ties have ~zero probability
            if vals[k] <= vals[k - 1]:
                vals[k] = np.nextafter(vals[k - 1], np.inf)
        return HermitianMatrix(np.diag(vals), source=source)

    # clustered
    mult = spec.cluster_multiplicities
    c = len(mult)
    steps = 1.0 + np.abs(rng.gaussians(seed, np.arange(c)))
    reps = np.cumsum(steps) - steps[0]
    d = np.repeat(reps, mult)
    base = c
    re = rng.gaussians(seed, base + 2 * np.arange(n * n)).reshape(n, n)
    im = rng.gaussians(seed, base + 2 * np.arange(n * n) + 1).reshape(n, n)
    z = (re + 1j * im) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diag_r = np.diag(r)
    q = q * (diag_r / np.abs(diag_r)).conj()[np.newaxis, :]
    a = (q * d) @ q.conj().T
    return HermitianMatrix.from_array(a, source=source)


def write_table(
    table: MagnitudeTable,
    format: str = "csv",
    clustering_metadata: EigenClustering | None = None,
    coord_labels: list[int] | None = None,
) -> str:
    """Render a magnitude table as CSV or JSON, byte-deterministically.

    ``coord_labels`` names the 1-based coordinates of the table columns
    (defaults to 1..k); cluster indices in the JSON form are 1-based too.
    """
    weights = table.weights
    n, k = weights.shape
    labels = coord_labels if coord_labels is not None else list(range(1, k + 1))
    if len(labels) != k:
        raise DimensionMismatch(f"{len(labels)} coordinate labels for {k} columns")
    eigvals = table.spectrum.values

    if format == "csv":
        lines = ["lambda," + ",".join(f"coord_{j}" for j in labels)]
        for i in range(n):
            lines.append(fmt(eigvals[i]) + "," + ",".join(fmt(w) for w in weights[i]))
        return "\n".join(lines) + "\n"
    if format == "json":
        ev = "[" + ", ".join(fmt(v) for v in eigvals) + "]"
        rows = ", ".join("[" + ", ".join(fmt(w) for w in row) + "]" for row in weights)
        clusters = []
        if clustering_metadata is not None:
            for cluster, rep in zip(clustering_metadata.clusters, clustering_metadata.representatives):
                idx = ", ".join(str(i + 1) for i in cluster)
                clusters.append(f'{{"indices": [{idx}], "representative": {fmt(rep)}}}')
        return (
            '{"eigenvalues": ' + ev + ', "weights": [' + rows + '], '
            '"clusters": [' + ", ".join(clusters) + "]}\n"
        )
    raise InvalidSpec(f"unknown table format {format!r}")


def read_table_csv(text: str):
    """Parse CSV emitted by :func:`write_table` back to (eigenvalues, weights)."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    rows = [[float(tok) for tok in ln.split(",")] for ln in lines[1:]]
    arr = np.asarray(rows, dtype=np.float64)
    return arr[:, 0], arr[:, 1:]
