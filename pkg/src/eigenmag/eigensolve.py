"""Self-contained Hermitian eigensolver.

Householder reduction to real symmetric tridiagonal form (complex phases are
absorbed into the transform, off-diagonals normalized nonnegative), followed
by implicit-shift QL iteration with Wilkinson shifts.  No external eigenvalue
routine is used anywhere: numpy supplies array storage and matrix products,
the iteration itself lives in :mod:`eigenmag._kernels`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._kernels import DUMMY_Z, tql_kernel
from .errors import ConvergenceFailure, NotHermitian

#: sweeps allowed per eigenvalue before ConvergenceFailure
DEFAULT_SWEEP_BUDGET = 50

#: relative Hermitian deviation accepted for parsed/raw input before symmetrization
HERMITIAN_TOL = 1e-12


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class HermitianMatrix:
    """Dense n x n complex Hermitian (or real symmetric) matrix.

    ``entries`` is exactly Hermitian with a real diagonal; build instances
    with :meth:`from_array`, which checks the deviation of raw input and
    symmetrizes it.  The array is marked read-only so instances can be shared
    across threads.
    """

    entries: np.ndarray
    source: str = ""

    def __post_init__(self):
        a = self.entries
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise NotHermitian(f"expected a square matrix, got shape {a.shape}")
        if np.any(a != a.conj().T):
            raise NotHermitian("entries are not exactly Hermitian; use from_array() for raw input")
        _freeze(a)

    @classmethod
    def from_array(cls, arr, tol: float = HERMITIAN_TOL, source: str = "") -> "HermitianMatrix":
        """Validate and symmetrize a raw array.

        Deviation from Hermitian symmetry beyond ``tol * max|entry|`` raises
        :class:`NotHermitian`; smaller deviation is removed by averaging with
        the conjugate transpose, which is exact in floating point.
        """
        a = np.asarray(arr)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise NotHermitian(f"expected a square matrix, got shape {a.shape}")
        a = a.astype(np.complex128 if np.iscomplexobj(a) else np.float64)
        scale = float(np.max(np.abs(a))) if a.size else 0.0
        dev = float(np.max(np.abs(a - a.conj().T)))
        if dev > tol * scale:
            i, j = np.unravel_index(np.argmax(np.abs(a - a.conj().T)), a.shape)
            raise NotHermitian(
                f"entries ({i + 1},{j + 1}) and ({j + 1},{i + 1}) are not conjugate "
                f"(deviation {dev:.3e} > {tol:.1e} * {scale:.3e})"
            )
        h = (a + a.conj().T) / 2.0
        if np.iscomplexobj(h) and not np.any(h.imag):
            h = h.real.copy()
        return cls(h, source=source)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self.entries)

    def maxabs(self) -> float:
        return float(np.max(np.abs(self.entries)))

    def frobenius(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.entries) ** 2)))


@dataclass(frozen=True)
class Tridiagonal:
    """Real symmetric tridiagonal matrix with nonnegative off-diagonal."""

    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        _freeze(self.diag)
        _freeze(self.offdiag)

    @property
    def n(self) -> int:
        return self.diag.shape[0]


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues sorted ascending, tagged with the dimension they came from."""

    values: np.ndarray
    source_dim: int

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 1 or v.shape[0] != self.source_dim:
            raise ValueError(f"spectrum length {v.shape} does not match source_dim {self.source_dim}")
        if np.any(np.diff(v) < 0):
            raise ValueError("spectrum values must be nondecreasing")
        object.__setattr__(self, "values", _freeze(v))

    @property
    def n(self) -> int:
        return self.source_dim

    def scale(self) -> float:
        """Spectral norm of the source matrix: max |eigenvalue|."""
        return float(max(abs(self.values[0]), abs(self.values[-1])))

    def spread(self) -> float:
        return float(self.values[-1] - self.values[0])


@dataclass(frozen=True)
class SpectralDecomposition:
    """Full eigendecomposition; row i of ``vectors`` is a unit eigenvector for values[i]."""

    spectrum: Spectrum
    vectors: np.ndarray

    def __post_init__(self):
        _freeze(self.vectors)


def _is_tridiagonal(a: np.ndarray) -> bool:
    n = a.shape[0]
    if n <= 2:
        return True
    i, j = np.indices(a.shape, sparse=True)
    return not np.any(a[np.abs(i - j) > 1])


def _phase_normalize(sub: np.ndarray, transform: np.ndarray | None):
    """Absorb subdiagonal phases into the transform, returning |sub| >= 0."""
    n1 = sub.shape[0]
    off = np.abs(sub).astype(np.float64)
    if transform is not None and n1 > 0:
        delta = np.ones(n1 + 1, dtype=sub.dtype if np.iscomplexobj(sub) else np.float64)
        for k in range(n1):
            ph = sub[k] / off[k] if off[k] != 0.0 else 1.0
            delta[k + 1] = delta[k] * ph
        transform = transform * delta[np.newaxis, :]
    return off, transform


def tridiagonalize(A: HermitianMatrix, accumulate: bool = False):
    """Reduce A to real symmetric tridiagonal form by unitary similarity.

    Returns ``(T, U)`` with ``U.conj().T @ A @ U == T`` when ``accumulate``
    is set, else ``(T, None)``.  Already-tridiagonal input is passed through
    (up to phase normalization of the off-diagonal) without reflector work.
    """
    a = A.entries
    n = A.n
    if _is_tridiagonal(a):
        d = np.real(np.diag(a)).astype(np.float64).copy()
        sub = np.diag(a, -1).copy() if n > 1 else np.zeros(0, dtype=a.dtype)
        U = np.eye(n, dtype=a.dtype) if accumulate else None
        off, U = _phase_normalize(sub, U)
        return Tridiagonal(d, off), U

    w = a.astype(np.complex128 if A.is_complex else np.float64, copy=True)
    U = np.eye(n, dtype=w.dtype) if accumulate else None
    sub = np.zeros(n - 1, dtype=w.dtype)
    for k in range(n - 2):
        x = w[k + 1:, k]
        xnorm = float(np.sqrt(np.sum(np.abs(x) ** 2)))
        if xnorm == 0.0:
            sub[k] = 0.0
            continue
        x0 = x[0]
        ph = x0 / abs(x0) if x0 != 0.0 else w.dtype.type(1.0)
        alpha = -ph * xnorm
        v = x.copy()
        v[0] -= alpha
        vnorm = float(np.sqrt(np.sum(np.abs(v) ** 2)))
        if vnorm == 0.0:  # x is already alpha*e1
            sub[k] = x0
            continue
        v /= vnorm
        block = w[k + 1:, k + 1:]
        p = 2.0 * (block @ v)
        w_vec = p - np.vdot(v, p).real * v
        block -= np.outer(w_vec, v.conj()) + np.outer(v, w_vec.conj())
        sub[k] = alpha
        if accumulate:
            U[:, k + 1:] -= 2.0 * np.outer(U[:, k + 1:] @ v, v.conj())
    if n > 1:
        sub[n - 2] = w[n - 1, n - 2]
    d = np.real(np.diag(w)).astype(np.float64).copy()
    off, U = _phase_normalize(sub, U)
    return Tridiagonal(d, off), U


def _iterate(trid: Tridiagonal, z: np.ndarray | None, sweep_budget: int) -> np.ndarray:
    n = trid.n
    d = trid.diag.copy()
    e = np.zeros(n, dtype=np.float64)
    if n > 1:
        e[: n - 1] = trid.offdiag
    if z is None:
        status = tql_kernel(d, e, DUMMY_Z, False, sweep_budget)
    else:
        status = tql_kernel(d, e, z, True, sweep_budget)
    if status != 0:
        raise ConvergenceFailure(
            f"eigenvalue {status} of {n} did not converge within {sweep_budget} sweeps"
        )
    return d


def eigenvalues(A: HermitianMatrix, sweep_budget: int = DEFAULT_SWEEP_BUDGET) -> Spectrum:
    """All eigenvalues of A, sorted ascending (stable under exact ties)."""
    trid, _ = tridiagonalize(A, accumulate=False)
    d = _iterate(trid, None, sweep_budget)
    order = np.argsort(d, kind="stable")
    return Spectrum(d[order], A.n)


def spectral_decomposition(
    A: HermitianMatrix, sweep_budget: int = DEFAULT_SWEEP_BUDGET
) -> SpectralDecomposition:
    """Eigenvalues and orthonormal eigenvectors of A.

    The returned eigenvalues are bit-identical to :func:`eigenvalues`: rotation
    accumulation adds work but never changes the d/e arithmetic sequence.
    """
    trid, U = tridiagonalize(A, accumulate=True)
    z = np.eye(A.n, dtype=np.float64)
    d = _iterate(trid, z, sweep_budget)
    columns = U @ z
    order = np.argsort(d, kind="stable")
    vectors = np.ascontiguousarray(columns[:, order].T)
    return SpectralDecomposition(Spectrum(d[order], A.n), vectors)
