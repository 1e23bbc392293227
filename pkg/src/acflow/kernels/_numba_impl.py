"""Numba-compiled implementation of the hot kernels.

Same contracts as ``_numpy_impl``; see there for semantics.  Loops are written
cache-friendly (row-major, angular index innermost).
"""

from __future__ import annotations

import numba
import numpy as np  # noqa: F401  (kept for signature parity with the fallback)


@numba.njit(cache=True)
def lap_periodic(u, out, inv_h1sq, inv_h2sq):
    n1, n2 = u.shape
    for i in range(n1):
        im = i - 1 if i > 0 else n1 - 1
        ip = i + 1 if i < n1 - 1 else 0
        for j in range(n2):
            jm = j - 1 if j > 0 else n2 - 1
            jp = j + 1 if j < n2 - 1 else 0
            out[i, j] = (u[ip, j] - 2.0 * u[i, j] + u[im, j]) * inv_h1sq + (
                u[i, jp] - 2.0 * u[i, j] + u[i, jm]
            ) * inv_h2sq
    return out


@numba.njit(cache=True)
def lap_polar(u, out, warp_face, rad_coef, ang_coef, dirichlet_top, far):
    n1, n2 = u.shape
    for i in range(n1):
        wlo = warp_face[i]
        whi = warp_face[i + 1]
        rc = rad_coef[i]
        ac = ang_coef[i]
        for j in range(n2):
            jm = j - 1 if j > 0 else n2 - 1
            jp = j + 1 if j < n2 - 1 else 0
            inner = wlo * (u[i, j] - u[i - 1, j]) if i > 0 else 0.0
            if i < n1 - 1:
                outer = whi * (u[i + 1, j] - u[i, j])
            elif dirichlet_top:
                outer = whi * 2.0 * (far - u[i, j])
            else:
                outer = 0.0
            out[i, j] = (outer - inner) * rc + (
                u[i, jp] - 2.0 * u[i, j] + u[i, jm]
            ) * ac
    return out


@numba.njit(cache=True)
def tridiag_solve_modes(w, binv, cup, rhs):
    n1, nm = rhs.shape
    for i in range(1, n1):
        for m in range(nm):
            rhs[i, m] -= w[i, m] * rhs[i - 1, m]
    for m in range(nm):
        rhs[n1 - 1, m] *= binv[n1 - 1, m]
    for i in range(n1 - 2, -1, -1):
        for m in range(nm):
            rhs[i, m] = (rhs[i, m] - cup[i] * rhs[i + 1, m]) * binv[i, m]
    return rhs
