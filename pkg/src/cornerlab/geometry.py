"""Sectors, convex polygons and boxes, and the truncated corner regions.

A 2D sector is stored as vertex + bisector orientation + half-aperture
``phi0``; its local frame puts the bisector on the positive x1-axis so the
two boundary rays sit at polar angle ``+-phi0``.  A 3D sector is always an
orthant ``[0, inf)^3`` seen through an orthonormal frame.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

ANGLE_SLACK = 1e-12


class GeometryError(ValueError):
    """Invalid or degenerate geometric input."""


class UnsupportedGeometryError(GeometryError):
    """A shape outside the supported classes (e.g. a non-orthant 3D cone)."""


def _rot2(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]])


@dataclass(frozen=True)
class SectorGeometry:
    vertex: tuple
    half_aperture: float
    orientation: float = 0.0
    dimension: int = 2
    frame: tuple | None = None  # 3D only: rows are the orthant edge directions

    def __post_init__(self):
        v = tuple(float(c) for c in self.vertex)
        object.__setattr__(self, "vertex", v)
        if self.dimension == 2:
            if len(v) != 2:
                raise GeometryError("2D sector needs a 2D vertex")
            if not 0.0 < self.half_aperture < math.pi / 2:
                raise GeometryError(
                    f"half-aperture {self.half_aperture} outside (0, pi/2): corner not convex"
                )
        elif self.dimension == 3:
            if len(v) != 3:
                raise GeometryError("3D sector needs a 3D vertex")
            frame = np.eye(3) if self.frame is None else np.asarray(self.frame, dtype=float)
            if frame.shape != (3, 3) or not np.allclose(frame @ frame.T, np.eye(3), atol=1e-12):
                raise UnsupportedGeometryError("3D cones must be orthants (orthonormal edge frame)")
            object.__setattr__(self, "frame", tuple(map(tuple, frame)))
            object.__setattr__(self, "half_aperture", math.acos(1.0 / math.sqrt(3.0)))
        else:
            raise GeometryError("dimension must be 2 or 3")

    @property
    def beta(self) -> float:
        """Admissibility angle: pi/2 - phi0 in 2D, pi/3 for the orthant."""
        if self.dimension == 2:
            return math.pi / 2 - self.half_aperture
        return math.pi / 3

    def to_local(self, x) -> np.ndarray:
        """Coordinates relative to the vertex in the sector's own frame."""
        x = np.asarray(x, dtype=float) - np.asarray(self.vertex)
        if self.dimension == 2:
            return x @ _rot2(self.orientation)
        return x @ np.asarray(self.frame).T

    def to_global(self, xl) -> np.ndarray:
        xl = np.asarray(xl, dtype=float)
        if self.dimension == 2:
            return xl @ _rot2(self.orientation).T + np.asarray(self.vertex)
        return xl @ np.asarray(self.frame) + np.asarray(self.vertex)

    def moved(self, rotation: float = 0.0, translation=(0.0, 0.0)) -> "SectorGeometry":
        """Image of the sector under x -> R(rotation) x + translation (2D)."""
        if self.dimension != 2:
            raise UnsupportedGeometryError("moved() is implemented for planar sectors")
        v = _rot2(rotation) @ np.asarray(self.vertex) + np.asarray(translation, dtype=float)
        return SectorGeometry(tuple(v), self.half_aperture, self.orientation + rotation)

    def polar(self, x):
        """Local polar coordinates (r, phi) with phi in (-pi, pi]."""
        xl = self.to_local(x)
        if self.dimension != 2:
            raise UnsupportedGeometryError("polar coordinates are planar only")
        return np.hypot(xl[..., 0], xl[..., 1]), np.arctan2(xl[..., 1], xl[..., 0])


def contains(sector: SectorGeometry, x) -> np.ndarray | bool:
    """True where x lies in the closed cone."""
    xl = sector.to_local(x)
    if sector.dimension == 3:
        out = np.all(xl >= -ANGLE_SLACK, axis=-1)
    else:
        r = np.hypot(xl[..., 0], xl[..., 1])
        phi = np.arctan2(xl[..., 1], xl[..., 0])
        out = (r == 0) | (np.abs(phi) <= sector.half_aperture + ANGLE_SLACK)
    return bool(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class TruncatedSector:
    """S_R = W cap B_R together with the arc Lambda_{R/2}."""

    base: SectorGeometry
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise GeometryError("truncation radius must be positive")

    def in_truncated(self, x, radius: float | None = None):
        """Membership in the open set W cap B_radius (default R)."""
        rad = self.radius if radius is None else radius
        xl = self.base.to_local(x)
        return contains(self.base, x) & (np.linalg.norm(xl, axis=-1) < rad)

    def arc_points(self, m: int) -> np.ndarray:
        """m points on Lambda_{R/2} (global coordinates), 2D only."""
        phi = np.linspace(-self.base.half_aperture, self.base.half_aperture, m)
        xl = 0.5 * self.radius * np.stack([np.cos(phi), np.sin(phi)], axis=-1)
        return self.base.to_global(xl)


@dataclass(frozen=True)
class NeighborhoodRegion:
    """D_{eps,R} = {R/2 - eps < r < R/2 + eps, |phi| < phi0 + eps} in the local frame."""

    sector: TruncatedSector
    eps: float

    @property
    def r_min(self) -> float:
        return 0.5 * self.sector.radius - self.eps

    @property
    def r_max(self) -> float:
        return 0.5 * self.sector.radius + self.eps

    @property
    def angle_max(self) -> float:
        return self.sector.base.half_aperture + self.eps

    def __call__(self, x):
        r, phi = self.sector.base.polar(x)
        return (r > self.r_min) & (r < self.r_max) & (np.abs(phi) < self.angle_max)

    def sample(self, m: int, rng=None) -> np.ndarray:
        """m random interior points, uniform in (r, phi)."""
        rng = np.random.default_rng(0) if rng is None else rng
        r = rng.uniform(self.r_min, self.r_max, m)
        phi = rng.uniform(-self.angle_max, self.angle_max, m)
        xl = np.stack([r * np.cos(phi), r * np.sin(phi)], axis=-1)
        return self.sector.base.to_global(xl)


def neighborhood_region(ts: TruncatedSector, eps: float) -> NeighborhoodRegion:
    if ts.base.dimension != 2:
        raise UnsupportedGeometryError("D_{eps,R} is defined for planar sectors")
    upper = min(ts.base.beta / 2, ts.radius / 2)
    if not 0.0 < eps < upper:
        raise GeometryError(f"eps={eps} outside (0, {upper})")
    return NeighborhoodRegion(ts, float(eps))


def _segment_distance(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    ab = b - a
    t = np.clip(np.dot(p - a, ab) / np.dot(ab, ab), 0.0, 1.0)
    return float(np.linalg.norm(p - (a + t * ab)))


def _cross(a, b) -> float:
    return float(a[0] * b[1] - a[1] * b[0])


class ConvexPolygon:
    """Strictly convex polygon with counterclockwise vertices."""

    dimension = 2

    def __init__(self, vertices: Sequence[Sequence[float]]):
        v = np.asarray(vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or len(v) < 3:
            raise GeometryError("polygon needs at least 3 planar vertices")
        edges = np.roll(v, -1, axis=0) - v
        if np.any(np.linalg.norm(edges, axis=1) == 0):
            raise GeometryError("repeated polygon vertex")
        turns = np.array([_cross(edges[i], edges[(i + 1) % len(v)]) for i in range(len(v))])
        scale = np.max(np.linalg.norm(edges, axis=1)) ** 2
        if np.any(np.abs(turns) <= 1e-12 * scale):
            raise GeometryError("collinear consecutive edges: not a genuine corner")
        if np.all(turns < 0):
            v = v[::-1].copy()
        elif not np.all(turns > 0):
            raise GeometryError("polygon is not convex")
        self.vertices = v
        self.vertices.setflags(write=False)

    def __repr__(self):
        return f"ConvexPolygon({self.vertices.tolist()})"

    @property
    def n_corners(self) -> int:
        return len(self.vertices)

    def corners(self) -> np.ndarray:
        return self.vertices

    def bounding_box(self):
        return self.vertices.min(axis=0), self.vertices.max(axis=0)

    def contains(self, x) -> np.ndarray:
        """Closed membership (points on the boundary count as inside)."""
        x = np.asarray(x, dtype=float)
        inside = np.ones(x.shape[:-1], dtype=bool)
        for a, b in zip(self.vertices, np.roll(self.vertices, -1, axis=0)):
            e = b - a
            inside &= (e[0] * (x[..., 1] - a[1]) - e[1] * (x[..., 0] - a[0])) >= -1e-14
        return inside

    def translated(self, t) -> "ConvexPolygon":
        return ConvexPolygon(self.vertices + np.asarray(t, dtype=float))

    def rotated(self, angle: float, center=(0.0, 0.0)) -> "ConvexPolygon":
        c = np.asarray(center, dtype=float)
        return ConvexPolygon((self.vertices - c) @ _rot2(angle).T + c)


class Box:
    """Closed box [0,a_1] x ... x [0,a_N] moved by a rotation and translation."""

    def __init__(self, extents, rotation=None, translation=None):
        a = np.asarray(extents, dtype=float)
        if a.ndim != 1 or len(a) < 2:
            raise GeometryError("box extents must be a vector")
        if np.any(a <= 0):
            raise GeometryError("box extents must be positive")
        n = len(a)
        rot = np.eye(n) if rotation is None else np.asarray(rotation, dtype=float)
        if rot.shape != (n, n) or not np.allclose(rot @ rot.T, np.eye(n), atol=1e-12):
            raise GeometryError("box rotation must be orthogonal")
        self.extents = a
        self.rotation = rot
        self.translation = np.zeros(n) if translation is None else np.asarray(translation, dtype=float)
        self.dimension = n

    def __repr__(self):
        return f"Box({self.extents.tolist()})"

    @property
    def n_corners(self) -> int:
        return 2**self.dimension

    def corners(self) -> np.ndarray:
        bits = (np.arange(self.n_corners)[:, None] >> np.arange(self.dimension)) & 1
        return (bits * self.extents) @ self.rotation.T + self.translation

    def bounding_box(self):
        c = self.corners()
        return c.min(axis=0), c.max(axis=0)

    def contains(self, x) -> np.ndarray:
        xl = (np.asarray(x, dtype=float) - self.translation) @ self.rotation
        tol = 1e-14 * np.max(self.extents)
        return np.all((xl >= -tol) & (xl <= self.extents + tol), axis=-1)

    def translated(self, t) -> "Box":
        return Box(self.extents, self.rotation, self.translation + np.asarray(t, dtype=float))


ConvexPolytope = ConvexPolygon | Box


def _polygon_corner(poly: ConvexPolygon, i: int, R: float) -> TruncatedSector:
    v = poly.vertices
    n = len(v)
    o, nxt, prv = v[i], v[(i + 1) % n], v[(i - 1) % n]
    e1 = (nxt - o) / np.linalg.norm(nxt - o)
    e2 = (prv - o) / np.linalg.norm(prv - o)
    if _cross(e1, e2) <= 0:
        raise GeometryError(f"vertex {i} is not a convex corner")
    interior = math.atan2(_cross(e1, e2), float(np.dot(e1, e2)))
    bis = e1 + e2
    orientation = math.atan2(bis[1], bis[0])
    for j in range(n):
        if j in (i, (i - 1) % n):
            continue
        if _segment_distance(o, v[j], v[(j + 1) % n]) <= R:
            raise GeometryError(f"R={R} too large: B_R(vertex {i}) meets a non-incident edge")
    return TruncatedSector(SectorGeometry(tuple(o), 0.5 * interior, orientation), float(R))


def _box_corner(box: Box, i: int, R: float) -> TruncatedSector:
    if box.dimension != 3:
        raise UnsupportedGeometryError("box corners are supported in 3D")
    if R >= np.min(box.extents):
        raise GeometryError(f"R={R} too large: B_R(corner {i}) meets a non-incident face")
    bits = (i >> np.arange(3)) & 1
    o = box.corners()[i]
    # edge directions leaving the corner into the box
    frame = ((1 - 2 * bits)[:, None] * box.rotation.T)
    return TruncatedSector(SectorGeometry(tuple(o), 0.0, dimension=3, frame=frame), float(R))


def corner_sector(poly, vertex_index: int, R: float) -> TruncatedSector:
    """Local truncated sector at a corner, bisector frame in 2D."""
    if not 0 <= vertex_index < poly.n_corners:
        raise GeometryError(f"vertex index {vertex_index} out of range")
    if isinstance(poly, ConvexPolygon):
        return _polygon_corner(poly, vertex_index, R)
    if isinstance(poly, Box):
        return _box_corner(poly, vertex_index, R)
    raise UnsupportedGeometryError(f"unsupported scatterer type {type(poly).__name__}")


def regular_polygon(m: int, circumradius: float = 1.0, center=(0.0, 0.0), phase: float = 0.0) -> ConvexPolygon:
    t = phase + 2 * np.pi * np.arange(m) / m
    return ConvexPolygon(np.stack([np.cos(t), np.sin(t)], axis=1) * circumradius + np.asarray(center))


def square(side: float = 1.0, center=(0.0, 0.0)) -> ConvexPolygon:
    h = 0.5 * side
    c = np.asarray(center, dtype=float)
    return ConvexPolygon(c + np.array([[-h, -h], [h, -h], [h, h], [-h, h]]))


class Ball:
    """Closed disk (2D) or ball (3D); has no corners."""

    n_corners = 0

    def __init__(self, center, radius: float):
        self.center = np.asarray(center, dtype=float)
        if not radius > 0:
            raise GeometryError("radius must be positive")
        self.radius = float(radius)
        self.dimension = len(self.center)

    def __repr__(self):
        return f"Ball({self.center.tolist()}, {self.radius})"

    def corners(self) -> np.ndarray:
        return np.empty((0, self.dimension))

    def bounding_box(self):
        return self.center - self.radius, self.center + self.radius

    def contains(self, x) -> np.ndarray:
        return np.linalg.norm(np.asarray(x, dtype=float) - self.center, axis=-1) <= self.radius

    def translated(self, t) -> "Ball":
        return Ball(self.center + np.asarray(t, dtype=float), self.radius)
