"""Scalar iteration kernel for the symmetric tridiagonal eigenproblem.

The implicit-shift QL sweep is inherently sequential, so it is written as a
plain scalar loop and JIT-compiled with numba when available.  The pure-Python
definition below is the fallback and the reference: numba only compiles it,
the arithmetic is identical either way.
"""

import math

import numpy as np


def _tql_impl(d, e, z, accumulate, max_sweeps):
    """Implicit-shift QL iteration with Wilkinson shifts, in place.

    d (n,) holds the diagonal and is overwritten with eigenvalues; e (n,) holds
    the off-diagonal in e[0:n-1] (e[n-1] is workspace) and is destroyed.  When
    ``accumulate`` is set, the plane rotations are applied to the columns of z,
    so z @ diag(d) @ z.T reconstructs the input tridiagonal if z starts as the
    identity.  Returns 0 on success, or l+1 if eigenvalue slot l exceeded
    ``max_sweeps`` sweeps.
    """
    n = d.shape[0]
    if n <= 1:
        return 0
    eps = 2.220446049250313e-16
    for l in range(n):
        sweeps = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= eps * dd:
                    break
                m += 1
            if m == l:
                break
            sweeps += 1
            if sweeps > max_sweeps:
                return l + 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            if g >= 0.0:
                g = d[m] - d[l] + e[l] / (g + r)
            else:
                g = d[m] - d[l] + e[l] / (g - r)
            s = 1.0
            c = 1.0
            p = 0.0
            restart = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    # rotation underflow: deflate and retry the sweep
                    d[i + 1] -= p
                    e[m] = 0.0
                    restart = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if accumulate:
                    for k in range(n):
                        f = z[k, i + 1]
                        z[k, i + 1] = s * z[k, i] + c * f
                        z[k, i] = c * z[k, i] - s * f
            if not restart:
                d[l] -= p
                e[l] = g
                e[m] = 0.0
    return 0


try:
    from numba import njit

    tql_kernel = njit(cache=True, nogil=True)(_tql_impl)
except ImportError:  # pragma: no cover - numba is a declared dependency
    tql_kernel = _tql_impl

# shared read-only placeholder for eigenvalue-only calls
DUMMY_Z = np.zeros((1, 1), dtype=np.float64)
