import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cornerlab.geometry import (
    Ball,
    Box,
    ConvexPolygon,
    GeometryError,
    SectorGeometry,
    TruncatedSector,
    UnsupportedGeometryError,
    contains,
    corner_sector,
    neighborhood_region,
    regular_polygon,
    square,
)

angles = st.floats(-math.pi, math.pi, allow_nan=False)


def test_contains_examples():
    s = SectorGeometry((0.0, 0.0), math.pi / 6)
    assert contains(s, (1.0, 0.0))
    assert not contains(s, (0.0, 1.0))
    assert contains(s, (math.cos(math.pi / 6), math.sin(math.pi / 6)))
    assert contains(s, (0.0, 0.0))


def test_sector_invariants():
    with pytest.raises(GeometryError):
        SectorGeometry((0, 0), math.pi / 2)
    with pytest.raises(GeometryError):
        SectorGeometry((0, 0), 0.0)
    s = SectorGeometry((0, 0), 0.4)
    assert s.beta == pytest.approx(math.pi / 2 - 0.4)
    o = SectorGeometry((0, 0, 0), 0.0, dimension=3)
    assert o.beta == pytest.approx(math.pi / 3)
    with pytest.raises(UnsupportedGeometryError):
        SectorGeometry((0, 0, 0), 0.0, dimension=3, frame=[[1, 0, 0], [1, 1, 0], [0, 0, 1]])


@settings(max_examples=80, deadline=None)
@given(phi0=st.floats(0.05, 1.5), orient=angles, rot=angles, tx=st.floats(-3, 3), ty=st.floats(-3, 3),
       px=st.floats(-2, 2), py=st.floats(-2, 2))
def test_contains_rigid_motion_invariance(phi0, orient, rot, tx, ty, px, py):
    s = SectorGeometry((0.2, -0.1), phi0, orient)
    x = np.array([px, py])
    # skip points within round-off of the boundary rays
    r, phi = s.polar(x)
    if r < 1e-9 or abs(abs(phi) - phi0) < 1e-9:
        return
    m = s.moved(rot, (tx, ty))
    c, sn = math.cos(rot), math.sin(rot)
    y = np.array([[c, -sn], [sn, c]]) @ x + np.array([tx, ty])
    assert contains(s, x) == contains(m, y)


@pytest.mark.parametrize("i", range(4))
def test_square_corners(i):
    ts = corner_sector(square(1.0), i, 0.3)
    assert ts.base.half_aperture == pytest.approx(math.pi / 4, abs=1e-12)
    # bisector points into the square
    centre = np.zeros(2)
    assert ts.base.to_local(centre)[0] > 0


def test_triangle_corner_and_errors():
    tri = regular_polygon(3, 1 / math.sqrt(3))  # side 1
    ts = corner_sector(tri, 0, 0.2)
    assert ts.base.half_aperture == pytest.approx(math.pi / 6, abs=1e-12)
    with pytest.raises(GeometryError):
        corner_sector(square(1.0), 0, 2.0)
    with pytest.raises(GeometryError):
        corner_sector(square(1.0), 7, 0.1)


@settings(max_examples=40, deadline=None)
@given(m=st.integers(3, 9), phase=angles, radius=st.floats(0.5, 3.0))
def test_polygon_edges_land_on_boundary_rays(m, phase, radius):
    poly = regular_polygon(m, radius, (0.3, -0.2), phase)
    v = poly.vertices
    side = np.linalg.norm(v[1] - v[0])
    for i in range(m):
        ts = corner_sector(poly, i, 0.2 * side)
        assert 0 < ts.base.half_aperture < math.pi / 2
        for j in ((i + 1) % m, (i - 1) % m):
            _, phi = ts.base.polar(v[j])
            assert abs(abs(phi) - ts.base.half_aperture) < 1e-12


def test_polygon_validation():
    with pytest.raises(GeometryError):
        ConvexPolygon([[0, 0], [1, 0], [2, 0], [1, 1]])  # collinear
    with pytest.raises(GeometryError):
        ConvexPolygon([[0, 0], [2, 0], [1, 0.3], [2, 2], [0, 2]])  # reflex vertex
    cw = ConvexPolygon([[0, 0], [0, 1], [1, 1], [1, 0]])
    assert np.allclose(cw.vertices[0], [1, 0])  # reversed to counterclockwise
    with pytest.raises(GeometryError):
        ConvexPolygon([[0, 0], [1, 0]])


def test_polygon_contains_closed():
    sq = square(2.0)
    assert sq.contains(np.array([1.0, 0.0]))
    assert not sq.contains(np.array([1.0 + 1e-9, 0.0]))
    assert sq.translated((5, 0)).contains(np.array([5.0, 0.0]))


def test_box_corners_3d():
    b = Box([1.0, 2.0, 3.0])
    assert b.n_corners == 8
    for i in range(8):
        ts = corner_sector(b, i, 0.5)
        centre = np.array([0.5, 1.0, 1.5])
        assert np.all(ts.base.to_local(centre) > 0)
    with pytest.raises(GeometryError):
        corner_sector(b, 0, 1.0)
    with pytest.raises(GeometryError):
        Box([1.0, -1.0])
    assert not Ball((0, 0), 1.0).n_corners


def test_neighborhood_region_examples():
    ts = TruncatedSector(SectorGeometry((0, 0), math.pi / 6), 1.0)
    d = neighborhood_region(ts, 0.1)
    assert d(np.array([0.5, 0.0]))
    assert not d(np.array([0.2, 0.0]))
    a = math.pi / 6 + 0.2
    assert not d(np.array([0.5 * math.cos(a), 0.5 * math.sin(a)]))
    with pytest.raises(GeometryError):
        neighborhood_region(ts, 0.6)
    with pytest.raises(GeometryError):
        neighborhood_region(ts, 0.0)


@settings(max_examples=30, deadline=None)
@given(e1=st.floats(0.01, 0.5), e2=st.floats(0.01, 0.5))
def test_neighborhood_nesting(e1, e2):
    ts = TruncatedSector(SectorGeometry((0.1, 0.2), 0.6, 0.4), 1.2)
    upper = min(ts.base.beta / 2, 0.6)
    small, big = sorted((min(e1, 0.99 * upper), min(e2, 0.99 * upper)))
    if small == big:
        return
    inner, outer = neighborhood_region(ts, small), neighborhood_region(ts, big)
    pts = inner.sample(500, np.random.default_rng(1))
    assert np.all(outer(pts))


def test_truncated_sector_arc():
    ts = TruncatedSector(SectorGeometry((1.0, 1.0), 0.5, 1.0), 2.0)
    pts = ts.arc_points(9)
    assert np.allclose(np.linalg.norm(pts - np.array([1.0, 1.0]), axis=1), 1.0)
    assert np.all(contains(ts.base, pts))
    assert ts.in_truncated(np.array([1.0, 1.0]) + 0.5 * np.array([math.cos(1.0), math.sin(1.0)]))
