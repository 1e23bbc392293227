"""Pure-numpy reference implementation of the hot kernels."""

from __future__ import annotations

import numpy as np


def lap_periodic(u, out, inv_h1sq, inv_h2sq):
    """Five-point Laplacian on the flat periodic chart, written into out."""
    np.multiply(u, -2.0 * (inv_h1sq + inv_h2sq), out=out)
    out += (np.roll(u, -1, axis=0) + np.roll(u, 1, axis=0)) * inv_h1sq
    out += (np.roll(u, -1, axis=1) + np.roll(u, 1, axis=1)) * inv_h2sq
    return out


def lap_polar(u, out, warp_face, rad_coef, ang_coef, dirichlet_top, far):
    """Flux-form Laplace-Beltrami on a geodesic polar chart.

    warp_face[0] = 0 closes the pole; warp_face[n1] = 0 closes the far pole
    on the sphere.  With dirichlet_top, the ghost row is the reflection
    2*far - u[-1] through the boundary value.
    """
    n1 = u.shape[0]
    flux = np.empty((n1 + 1, u.shape[1]), dtype=u.dtype)
    flux[0, :] = 0.0
    np.subtract(u[1:, :], u[:-1, :], out=flux[1:n1, :])
    flux[1:n1, :] *= warp_face[1:n1, None]
    if dirichlet_top:
        flux[n1, :] = warp_face[n1] * 2.0 * (far - u[n1 - 1, :])
    else:
        flux[n1, :] = 0.0
    np.subtract(flux[1:, :], flux[:-1, :], out=out)
    out *= rad_coef[:, None]
    out += (np.roll(u, -1, axis=1) - 2.0 * u + np.roll(u, 1, axis=1)) * ang_coef[:, None]
    return out


def tridiag_solve_modes(w, binv, cup, rhs):
    """Solve the prefactored tridiagonal systems, one per angular mode.

    w, binv: (n1, nm) forward-elimination multipliers and inverted pivots;
    cup: (n1-1,) upper diagonal (mode-independent); rhs: (n1, nm) complex,
    overwritten with the solution.
    """
    n1 = rhs.shape[0]
    for i in range(1, n1):
        rhs[i, :] -= w[i, :] * rhs[i - 1, :]
    rhs[n1 - 1, :] *= binv[n1 - 1, :]
    for i in range(n1 - 2, -1, -1):
        rhs[i, :] -= cup[i] * rhs[i + 1, :]
        rhs[i, :] *= binv[i, :]
    return rhs
