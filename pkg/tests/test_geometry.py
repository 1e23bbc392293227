"""Geometry operators against closed-form oracles and refinement studies."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from acflow import geometry as G


def _field(chart, values, far=None):
    return G.ScalarField(chart, values, far_value=far)


# --------------------------------------------------------------------------
# space forms and charts


def test_space_form_ricci_and_injectivity():
    assert G.flat_torus(1.0).lambda_ricci == 0.0
    assert G.unit_sphere().lambda_ricci == 1.0
    assert G.hyperbolic_disk(2.0).lambda_ricci == -1.0
    assert G.flat_torus(1.0).inj_radius == 0.5
    assert G.unit_sphere().inj_radius == math.pi
    assert G.hyperbolic_disk(2.0).inj_radius == 2.0


def test_space_form_rejects_bad_parameters():
    with pytest.raises(ValueError):
        G.SpaceForm(kappa=2, size=1.0)
    with pytest.raises(ValueError):
        G.SpaceForm(kappa=0, size=-1.0)
    with pytest.raises(ValueError):
        G.SpaceForm(kappa=1, size=2.0)


def test_polar_chart_requires_even_angular_count():
    with pytest.raises(ValueError):
        G.make_chart(G.unit_sphere(), 32, 31)


def test_chart_warp_vanishes_at_closed_poles():
    ch = G.make_chart(G.unit_sphere(), 32, 64)
    assert ch.warp_face[0] == 0.0
    assert ch.warp_face[-1] == 0.0
    ch2 = G.make_chart(G.hyperbolic_disk(1.5), 32, 64)
    assert ch2.warp_face[0] == 0.0
    assert ch2.warp_face[-1] > 0.0


# --------------------------------------------------------------------------
# geodesic distance


def test_torus_distance_wraps():
    form = G.flat_torus(1.0)
    assert G.geodesic_distance(form, (0.0, 0.0), (0.75, 0.0)) == pytest.approx(0.25)


def test_sphere_antipodal_distance():
    form = G.unit_sphere()
    assert G.geodesic_distance(form, (0.0, 0.0), (math.pi, 0.0)) == pytest.approx(math.pi)


def test_hyperbolic_diameter_through_origin():
    # law of cosines: cosh d = cosh^2 rho + sinh^2 rho = cosh(2 rho)
    form = G.hyperbolic_disk(2.0)
    for rho in (0.3, 0.9, 1.7):
        d = G.geodesic_distance(form, (rho, 0.0), (rho, math.pi))
        assert d == pytest.approx(2.0 * rho, rel=1e-12)


def test_distance_rejects_out_of_chart_points():
    with pytest.raises(ValueError):
        G.geodesic_distance(G.unit_sphere(), (0.0, 0.0), (3.5, 0.0))
    with pytest.raises(ValueError):
        G.geodesic_distance(G.hyperbolic_disk(1.0), (1.2, 0.0), (0.0, 0.0))


@settings(max_examples=60, deadline=None)
@given(
    st.integers(min_value=-1, max_value=1),
    st.tuples(st.floats(0.05, 0.95), st.floats(0.0, 6.2)),
    st.tuples(st.floats(0.05, 0.95), st.floats(0.0, 6.2)),
    st.tuples(st.floats(0.05, 0.95), st.floats(0.0, 6.2)),
)
def test_triangle_inequality(kappa, p, q, r):
    if kappa == 0:
        form = G.flat_torus(1.0)
    elif kappa == 1:
        form = G.unit_sphere()
        p, q, r = ((a * math.pi / 1.0, b) for a, b in (p, q, r))
    else:
        form = G.hyperbolic_disk(1.0)
    dpq = G.geodesic_distance(form, p, q)
    dqr = G.geodesic_distance(form, q, r)
    dpr = G.geodesic_distance(form, p, r)
    assert dpr <= dpq + dqr + 1e-12


def test_distance_field_matches_pointwise():
    ch = G.make_chart(G.unit_sphere(), 16, 32)
    center = (0.7, 1.3)
    d = G.distance_field(ch, center)
    i, j = 5, 11
    expect = G.geodesic_distance(ch.form, center, (ch.x1[i], ch.x2[j]))
    assert d[i, j] == pytest.approx(expect, rel=1e-12)


def test_distance_gradient_is_unit_norm():
    # analytic gradient of a distance function has unit metric norm
    for form, center in [
        (G.flat_torus(1.0), (0.3, 0.6)),
        (G.unit_sphere(), (0.9, 2.0)),
        (G.hyperbolic_disk(2.0), (0.8, 0.5)),
    ]:
        ch = G.make_chart(form, 48, 48 if form.kappa == 0 else 96)
        d, g1, g2 = G.distance_coordinate_gradient(ch, center)
        if form.kappa == 0:
            norm2 = g1**2 + g2**2
        else:
            norm2 = g1**2 + (g2 / ch.warp_center[:, None]) ** 2
        mask = (d > 0.05) & (d < form.inj_radius - 0.05)
        assert np.abs(norm2[mask] - 1.0).max() < 1e-10


# --------------------------------------------------------------------------
# Laplace-Beltrami


def test_laplacian_annihilates_constants_every_policy():
    charts = [
        G.make_chart(G.flat_torus(1.0), 32, 32),
        G.make_chart(G.unit_sphere(), 32, 64),
        G.make_chart(G.hyperbolic_disk(1.5), 32, 64),
    ]
    for ch in charts:
        f = _field(ch, np.full(ch.shape, 0.7), far=0.7)
        lap = G.laplace_beltrami(f)
        assert np.abs(lap.values).max() < 1e-12


def test_torus_fourier_eigenfunction():
    ch = G.make_chart(G.flat_torus(1.0), 128, 128)
    u = np.sin(2 * math.pi * ch.x1)[:, None] * np.ones((1, ch.n2))
    lap = G.laplace_beltrami(_field(ch, u))
    err = np.abs(lap.values + (2 * math.pi) ** 2 * u).max()
    assert err < (2 * math.pi) ** 2 * 1e-3


def test_sphere_harmonic_eigenvalue_refines_at_second_order():
    errs = []
    for n in (48, 96):
        ch = G.make_chart(G.unit_sphere(), n, 2 * n)
        u = np.cos(ch.x1)[:, None] * np.ones((1, ch.n2))
        lap = G.laplace_beltrami(_field(ch, u))
        errs.append(np.abs(lap.values + 2.0 * u).max())
    assert errs[1] < errs[0]
    assert 3.0 < errs[0] / errs[1] < 5.0


def test_integration_by_parts():
    # compactly supported bumps on the hyperbolic chart
    ch = G.make_chart(G.hyperbolic_disk(2.0), 256, 256)
    r = ch.x1[:, None]
    phi = ch.x2[None, :]
    bump = np.exp(-1.0 / np.maximum(1e-12, 1.0 - ((r - 0.9) / 0.5) ** 2))
    bump = np.where(np.abs(r - 0.9) < 0.5, bump, 0.0)
    f = bump * np.cos(phi)
    g = bump * np.sin(2 * phi)
    ff, gg = _field(ch, f, far=0.0), _field(ch, g, far=0.0)
    lhs = G.integrate(_field(ch, f * G.laplace_beltrami(gg).values))
    d1f, d2f = G.coordinate_gradient(ff)
    d1g, d2g = G.coordinate_gradient(gg)
    inner = d1f * d1g + d2f * d2g / ch.warp_center[:, None] ** 2
    rhs = G.integrate(_field(ch, inner))
    assert abs(lhs + rhs) < 5e-3 * max(1.0, abs(rhs))


# --------------------------------------------------------------------------
# gradient and Hessian


def test_gradient_norm_flat_linear():
    ch = G.make_chart(G.flat_torus(1.0), 64, 64)
    u = ch.x1[:, None] * np.ones((1, ch.n2))
    gn = G.gradient_norm_sq(_field(ch, u)).values
    interior = gn[2:-2, :]
    assert np.abs(interior - 1.0).max() < 1e-12


def test_gradient_norm_sphere_azimuth():
    # f = phi has |grad f|^2 = 1/sin^2(theta); mask the branch-cut columns
    ch = G.make_chart(G.unit_sphere(), 64, 128)
    u = ch.x2[None, :] * np.ones((ch.n1, 1))
    gn = G.gradient_norm_sq(_field(ch, u)).values
    expect = 1.0 / ch.warp_center[:, None] ** 2 * np.ones((1, ch.n2))
    rows, cols = slice(1, ch.n1 - 1), slice(2, ch.n2 - 1)
    assert np.abs(gn[rows, cols] - expect[rows, cols]).max() < 1e-10


def test_hessian_flat_quadratic():
    ch = G.make_chart(G.flat_torus(1.0), 64, 64)
    u = ch.x1[:, None] ** 2 * np.ones((1, ch.n2))
    v = (np.ones(ch.shape), np.zeros(ch.shape))
    q = G.hessian_quadratic_form(_field(ch, u), v).values
    assert np.abs(q[2:-2, :] - 2.0).max() < 1e-10


def test_hessian_zero_vector():
    ch = G.make_chart(G.unit_sphere(), 32, 64)
    u = np.cos(ch.x1)[:, None] * np.ones((1, ch.n2))
    v = (np.zeros(ch.shape), np.zeros(ch.shape))
    q = G.hessian_quadratic_form(_field(ch, u), v).values
    assert np.abs(q).max() == 0.0


def test_hessian_of_distance_squared_near_pole():
    # Hess d^2(X, X) -> 2 g(X, X) as d -> 0 (X the radial unit vector)
    ch = G.make_chart(G.unit_sphere(), 256, 512)
    u = ch.x1[:, None] ** 2 * np.ones((1, ch.n2))  # d^2 from the north pole
    v = (np.ones(ch.shape), np.zeros(ch.shape))
    q = G.hessian_quadratic_form(_field(ch, u), v).values
    near = ch.x1 < 0.2
    assert np.abs(q[near, :] - 2.0).max() < 2e-2


# --------------------------------------------------------------------------
# Bochner identity residual


def _bochner_sup(make_u, form, n1, n2, mask_margin=None):
    ch = G.make_chart(form, n1, n2)
    u = make_u(ch)
    res = np.abs(G.bochner_residual(_field(ch, u)).values)
    if mask_margin is not None:
        res = res[G.interior_mask(ch, mask_margin)]
    return float(res.max())


def test_bochner_constant_exact_zero():
    ch = G.make_chart(G.flat_torus(1.0), 32, 32)
    res = G.bochner_residual(_field(ch, np.ones(ch.shape)))
    assert np.abs(res.values).max() < 1e-12


def test_bochner_flat_refinement_ratio():
    make = lambda ch: np.sin(2 * math.pi * ch.x1)[:, None] * np.ones((1, ch.n2))
    a = _bochner_sup(make, G.flat_torus(1.0), 64, 64)
    b = _bochner_sup(make, G.flat_torus(1.0), 128, 128)
    assert 3.0 < a / b < 5.0


def test_bochner_sphere_refinement_ratio():
    make = lambda ch: np.cos(ch.x1)[:, None] * np.ones((1, ch.n2))
    a = _bochner_sup(make, G.unit_sphere(), 48, 96)
    b = _bochner_sup(make, G.unit_sphere(), 96, 192)
    assert 3.0 < a / b < 5.0


def test_bochner_hyperbolic_refinement_ratio():
    # sinh(rho) cos(phi) is smooth through the pole (the ambient x analogue);
    # mask keeps a margin off both the pole rings and the Dirichlet edge
    make = lambda ch: np.sinh(ch.x1)[:, None] * np.cos(ch.x2)[None, :]
    a = _bochner_sup(make, G.hyperbolic_disk(1.5), 64, 128, mask_margin=0.25)
    b = _bochner_sup(make, G.hyperbolic_disk(1.5), 128, 256, mask_margin=0.25)
    assert 3.0 < a / b < 5.0


# --------------------------------------------------------------------------
# integration


def test_integrate_unit_torus():
    ch = G.make_chart(G.flat_torus(1.0), 32, 32)
    assert G.integrate(_field(ch, np.ones(ch.shape))) == pytest.approx(1.0, rel=1e-12)


def test_integrate_sphere_area():
    ch = G.make_chart(G.unit_sphere(), 96, 192)
    area = G.integrate(_field(ch, np.ones(ch.shape)))
    assert area == pytest.approx(4 * math.pi, rel=1e-4)


def test_integrate_hyperbolic_disk_area():
    ch = G.make_chart(G.hyperbolic_disk(1.0), 200, 64)
    area = G.integrate(_field(ch, np.ones(ch.shape)))
    assert area == pytest.approx(2 * math.pi * (math.cosh(1.0) - 1.0), rel=1e-5)


# --------------------------------------------------------------------------
# Laplacian of squared distance


def test_lap_dist_sq_flat_is_four():
    form = G.flat_torus(1.0)
    d = np.linspace(0.0, 0.49, 200)
    vals = G.laplacian_of_distance_squared(form, d)
    assert np.abs(vals - 4.0).max() < 1e-12


def test_lap_dist_sq_sphere_equator():
    form = G.unit_sphere()
    val = G.laplacian_of_distance_squared(form, math.pi / 2 - 1e-12)
    assert val == pytest.approx(2.0, abs=1e-9)


def test_lap_dist_sq_small_distance_bound():
    # |(1/2) Delta d^2 - 2| <= d^2 / 2 for d <= 1 on the sphere
    form = G.unit_sphere()
    d = np.linspace(1e-8, 1.0, 500)
    vals = G.laplacian_of_distance_squared(form, d)
    assert np.all(np.abs(0.5 * vals - 2.0) <= 0.5 * d**2 + 1e-12)
    assert abs(G.laplacian_of_distance_squared(form, 0.0) - 4.0) < 1e-12


def test_lap_dist_sq_quadratic_defect_constant_each_geometry():
    # |(1/2) Delta d^2 - 2| <= C d^2 with one C over (0, inj/2]
    for form, C in [
        (G.unit_sphere(), 0.5),
        (G.hyperbolic_disk(2.0), 0.5),
        (G.flat_torus(1.0), 1e-12),
    ]:
        d = np.linspace(1e-6, form.inj_radius / 2, 400)
        vals = G.laplacian_of_distance_squared(form, d)
        assert np.all(np.abs(0.5 * vals - 2.0) <= C * d**2 + 1e-10)


def test_lap_dist_sq_domain_error():
    with pytest.raises(ValueError):
        G.laplacian_of_distance_squared(G.flat_torus(1.0), 0.6)
    with pytest.raises(ValueError):
        G.laplacian_of_distance_squared(G.unit_sphere(), -0.1)
