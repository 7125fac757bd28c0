import math

import numpy as np
import pytest

from boundaryqe.errors import CornerError, InvalidSpecError
from boundaryqe.geometry import (
    DomainSpec,
    boundary_eval,
    boundary_frames,
    build_domain,
    corner_arc_distance,
    is_inside,
    signed_distance,
)


def disk(R=1.0):
    return build_domain(DomainSpec("disk", radius=R))


def stadium(a=1.0, r=1.0):
    return build_domain(DomainSpec("stadium", a=a, r=r))


def rectangle(a=1.0, b=0.5):
    return build_domain(DomainSpec("rectangle", a=a, b=b))


def test_build_domain_examples():
    d = disk()
    assert d.length == pytest.approx(2 * math.pi, rel=1e-15)
    assert d.corners == ()

    st = stadium()
    assert st.length == pytest.approx(4 + 2 * math.pi, rel=1e-15)
    assert st.corners == ()
    assert [s.kind for s in st.segments] == ["line", "arc", "line", "arc"]
    assert st.area == pytest.approx(math.pi + 4)

    rc = rectangle()
    assert rc.length == pytest.approx(6.0)
    assert len(rc.corners) == 4


@pytest.mark.parametrize("spec", [
    DomainSpec("disk", radius=-1.0),
    DomainSpec("disk", radius=0.0),
    DomainSpec("rectangle", a=1.0, b=0.0),
    DomainSpec("stadium", a=-0.5, r=1.0),
    DomainSpec("triangle"),
])
def test_invalid_specs_rejected(spec):
    with pytest.raises(InvalidSpecError):
        build_domain(spec)


def test_disk_frame_at_origin_of_arclength():
    d = disk()
    p, t, n, k = boundary_eval(d, 0.0)
    assert p == pytest.approx((1.0, 0.0))
    assert t == pytest.approx((0.0, 1.0))
    assert n == pytest.approx((1.0, 0.0))
    assert k == pytest.approx(1.0)


def test_rectangle_corner_needs_side_flag():
    rc = rectangle()
    with pytest.raises(CornerError):
        boundary_eval(rc, 2.0)  # corner between bottom and right side
    p_plus, t_plus, _, _ = boundary_eval(rc, 2.0, side=+1)
    p_minus, t_minus, _, _ = boundary_eval(rc, 2.0, side=-1)
    assert p_plus == pytest.approx((1.0, -0.5), abs=1e-10)
    assert p_minus == pytest.approx((1.0, -0.5), abs=1e-10)
    assert t_plus == pytest.approx((0.0, 1.0), abs=1e-10)
    assert t_minus == pytest.approx((1.0, 0.0), abs=1e-10)


def test_stadium_junction_one_sided_curvature():
    st = stadium()
    s_junc = 2.0  # end of bottom straight, start of right cap
    eps = 1e-9
    p0, t0, _, k0 = boundary_eval(st, s_junc - eps)
    p1, t1, _, k1 = boundary_eval(st, s_junc + eps)
    assert np.allclose(p0, p1, atol=1e-8)
    assert np.allclose(t0, t1, atol=1e-8)
    assert k0 == 0.0 and k1 == pytest.approx(1.0)


def test_reparameterization_periodicity():
    st = stadium()
    rng = np.random.default_rng(1)
    for s in rng.uniform(0, st.length, 50):
        a = boundary_eval(st, s)
        b = boundary_eval(st, s + st.length)
        assert np.allclose(a[0], b[0], atol=1e-12)
        assert np.allclose(a[1], b[1], atol=1e-12)


@pytest.mark.parametrize("curve_fn", [disk, stadium, rectangle])
def test_normal_points_outward(curve_fn):
    curve = curve_fn()
    rng = np.random.default_rng(42)
    eps = 1e-6 * curve.length
    s = rng.uniform(0, curve.length, 1000)
    if curve.corners:
        # keep test points safely away from Sigma
        s = s[corner_arc_distance(curve, s) > 10 * eps]
    P, T, N, K = boundary_frames(curve, s)
    assert np.allclose(np.hypot(T[:, 0], T[:, 1]), 1.0, atol=1e-12)
    assert np.allclose((T * N).sum(axis=1), 0.0, atol=1e-12)
    outside, _ = is_inside(curve, P + eps * N)
    inside, _ = is_inside(curve, P - eps * N)
    assert not outside.any()
    assert inside.all()
    # points themselves lie on the boundary
    assert np.abs(signed_distance(curve, P)).max() < 1e-12 * curve.length


def test_curvature_values():
    st = stadium()
    s = np.array([1.0, 2.0 + 0.3, 2 + math.pi + 1.0, 2 + math.pi + 2 + 0.5])
    _, _, _, K = boundary_frames(st, s)
    assert np.allclose(K, [0.0, 1.0, 0.0, 1.0])
    d = build_domain(DomainSpec("disk", radius=2.0))
    _, _, _, K = boundary_frames(d, np.linspace(0, d.length, 17)[:-1])
    assert np.allclose(K, 0.5)


def test_is_inside_examples():
    d = disk()
    assert is_inside(d, (0.0, 0.0)) == (True, 1.0)
    inside, dist = is_inside(d, (2.0, 0.0))
    assert not inside and dist == pytest.approx(1.0)

    st = stadium()
    inside, dist = is_inside(st, (1.0, 0.0))
    assert inside and dist == pytest.approx(1.0)

    rc = rectangle()
    inside, dist = is_inside(rc, (0.0, 0.0))
    assert inside and dist == pytest.approx(0.5)
    inside, dist = is_inside(rc, (2.0, 0.0))
    assert not inside and dist == pytest.approx(1.0)
    inside, dist = is_inside(rc, (2.0, 1.5))
    assert not inside and dist == pytest.approx(math.hypot(1.0, 1.0))


def test_corner_arc_distance():
    st = stadium()
    assert corner_arc_distance(st, 1.23) == math.inf
    rc = rectangle()
    assert corner_arc_distance(rc, 1.0) == pytest.approx(1.0)   # midpoint of long side
    assert corner_arc_distance(rc, 2.0) == pytest.approx(0.0)   # at a corner
    assert corner_arc_distance(rc, 5.9) == pytest.approx(0.1)


def test_arclength_grid_avoids_corners():
    rc = rectangle()
    for M in (16, 64, 258):
        s = rc.arclength_grid(M)
        assert corner_arc_distance(rc, s).min() > 1e-6


def test_content_hash_stablity():
    s1 = DomainSpec("stadium", a=1.0, r=1.0)
    s2 = DomainSpec("stadium", a=1.0, r=1.0)
    s3 = DomainSpec("stadium", a=1.0, r=1.5)
    assert s1.content_hash() == s2.content_hash()
    assert s1.content_hash() != s3.content_hash()
