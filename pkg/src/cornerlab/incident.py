"""Incident fields: plane waves, Herglotz waves, point sources, Fourier-Bessel modes."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from .specfun import green, green_grad_radial

_CHUNK = 1 << 20  # max entries of a (points x directions) phase matrix


@dataclass(frozen=True)
class IncidentWave:
    """An entire (or point-singular) solution of Delta u + k^2 u = 0.

    ``kind`` is one of "plane", "herglotz", "point_source".  Herglotz waves
    carry quadrature nodes ``directions`` (M x dim), weights and density
    values; the field is sum_j w_j g_j exp(ik x.d_j).
    """

    kind: str
    k: float
    dimension: int = 2
    direction: tuple | None = None
    source: tuple | None = None
    directions: np.ndarray | None = field(default=None, repr=False)
    weights: np.ndarray | None = field(default=None, repr=False)
    density: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if not self.k > 0:
            raise ValueError("wavenumber must be positive")
        if self.kind == "plane":
            d = np.asarray(self.direction, dtype=float)
            if d.shape != (self.dimension,) or abs(np.linalg.norm(d) - 1.0) > 1e-12:
                raise ValueError("plane-wave direction must be a unit vector")
        elif self.kind == "point_source":
            if self.source is None or len(self.source) != self.dimension:
                raise ValueError("point source needs a location")
        elif self.kind == "herglotz":
            g = np.asarray(self.density)
            if not np.all(np.isfinite(g)):
                raise ValueError("Herglotz density must be finite")
        else:
            raise ValueError(f"unknown incident kind {self.kind!r}")

    def __call__(self, x):
        return eval_incident(self, x)

    def density_norm(self) -> float:
        """L2 norm of the Herglotz density on the unit sphere."""
        return float(np.sqrt(np.sum(self.weights * np.abs(self.density) ** 2)))


def plane_wave(k: float, direction) -> IncidentWave:
    d = np.asarray(direction, dtype=float)
    if d.ndim == 0:
        d = np.array([math.cos(float(d)), math.sin(float(d))])
    d = d / np.linalg.norm(d)
    return IncidentWave("plane", float(k), len(d), direction=tuple(d))


def point_source(k: float, z) -> IncidentWave:
    z = tuple(float(c) for c in z)
    return IncidentWave("point_source", float(k), len(z), source=z)


def sphere_rule(m: int):
    """Gauss-Legendre (m, in cos theta) x uniform (2m, in azimuth) rule on S^2."""
    ct, wt = np.polynomial.legendre.leggauss(m)
    az = 2 * np.pi * np.arange(2 * m) / (2 * m)
    st = np.sqrt(1 - ct**2)
    dirs = np.stack(
        [np.outer(st, np.cos(az)), np.outer(st, np.sin(az)), np.outer(ct, np.ones_like(az))], axis=-1
    ).reshape(-1, 3)
    w = np.outer(wt, np.full(2 * m, np.pi / m)).ravel()
    return dirs, w


def circle_rule(m: int):
    t = 2 * np.pi * np.arange(m) / m
    return np.stack([np.cos(t), np.sin(t)], axis=1), np.full(m, 2 * np.pi / m)


def herglotz_from_samples(samples, k: float) -> IncidentWave:
    """Herglotz wave from density samples.

    A 1D array of M values is read as g at angles 2 pi j / M (trapezoid
    rule on the circle).  A 2D array of shape (M, 2M) is read as g on the
    nodes of :func:`sphere_rule`.
    """
    g = np.asarray(samples, dtype=complex)
    if g.ndim == 1:
        if len(g) < 8:
            raise ValueError("need at least 8 density samples")
        dirs, w = circle_rule(len(g))
        dim = 2
    elif g.ndim == 2 and g.shape[1] == 2 * g.shape[0]:
        if g.shape[0] < 8:
            raise ValueError("need at least 8 polar nodes")
        dirs, w = sphere_rule(g.shape[0])
        g = g.ravel()
        dim = 3
    else:
        raise ValueError("density samples must be (M,) or (M, 2M)")
    return IncidentWave("herglotz", float(k), dim, directions=dirs, weights=w, density=g)


def herglotz_from_function(g, k: float, m: int = 64, dim: int = 2) -> IncidentWave:
    """Sample a callable density g(d) (d: (..., dim) unit vectors) and wrap it."""
    if dim == 2:
        dirs, _ = circle_rule(m)
        return herglotz_from_samples(g(dirs), k)
    dirs, _ = sphere_rule(m)
    return herglotz_from_samples(np.asarray(g(dirs)).reshape(m, 2 * m), k)


def _herglotz_apply(w: IncidentWave, x: np.ndarray, grad: bool):
    pts = x.reshape(-1, w.dimension)
    coef = w.weights * w.density
    out = np.empty(len(pts), dtype=complex)
    gout = np.empty((len(pts), w.dimension), dtype=complex) if grad else None
    step = max(1, _CHUNK // len(coef))
    for s in range(0, len(pts), step):
        e = np.exp(1j * w.k * (pts[s : s + step] @ w.directions.T))
        out[s : s + step] = e @ coef
        if grad:
            gout[s : s + step] = 1j * w.k * (e * coef) @ w.directions
    if grad:
        return gout.reshape(x.shape)
    return out.reshape(x.shape[:-1])


def eval_incident(w: IncidentWave, x):
    """Field values at points x (..., dim)."""
    x = np.asarray(x, dtype=float)
    if w.kind == "plane":
        return np.exp(1j * w.k * (x @ np.asarray(w.direction)))
    if w.kind == "herglotz":
        return _herglotz_apply(w, x, grad=False)
    z = np.asarray(w.source)
    if np.any(np.linalg.norm(x - z, axis=-1) == 0):
        raise ValueError("point source evaluated at its own location")
    return green(w.k, x, z, w.dimension)


def eval_incident_grad(w: IncidentWave, x):
    """Gradient of the field at x, shape (..., dim)."""
    x = np.asarray(x, dtype=float)
    if w.kind == "plane":
        d = np.asarray(w.direction)
        return (1j * w.k * np.exp(1j * w.k * (x @ d)))[..., None] * d
    if w.kind == "herglotz":
        return _herglotz_apply(w, x, grad=True)
    diff = x - np.asarray(w.source)
    r = np.linalg.norm(diff, axis=-1)
    if np.any(r == 0):
        raise ValueError("point source evaluated at its own location")
    return (green_grad_radial(w.k, r, w.dimension) / r)[..., None] * diff


@dataclass(frozen=True)
class FourierBesselMode:
    """amplitude * J_n(k r) exp(i n phi) about ``center`` (planar)."""

    k: float
    order: int
    amplitude: complex = 1.0
    center: tuple = (0.0, 0.0)

    def __call__(self, x):
        x = np.asarray(x, dtype=float) - np.asarray(self.center)
        r = np.hypot(x[..., 0], x[..., 1])
        phi = np.arctan2(x[..., 1], x[..., 0])
        return self.amplitude * special.jv(self.order, self.k * r) * np.exp(1j * self.order * phi)

    def leading_coefficient(self) -> complex:
        """c with amplitude*J_n(kr)e^{in phi} = c (x1 + i x2)^n + O(r^{n+2})."""
        n = abs(self.order)
        c = self.amplitude * (0.5 * self.k) ** n / math.factorial(n)
        return c if self.order >= 0 else c * (-1) ** n

    def leading_term(self, x):
        """The lowest-order homogeneous (harmonic) Taylor term at the center."""
        x = np.asarray(x, dtype=float) - np.asarray(self.center)
        z = x[..., 0] + 1j * x[..., 1] if self.order >= 0 else x[..., 0] - 1j * x[..., 1]
        return self.leading_coefficient() * z ** abs(self.order)


def helmholtz_residual(u, k: float, h: float, q=None) -> float:
    """max over interior nodes of |Delta_h u + k^2 q u| (second-order stencil)."""
    u = np.asarray(u)
    if u.ndim not in (2, 3) or min(u.shape) < 3:
        raise ValueError("need a 2D or 3D grid with at least 3 nodes per axis")
    inner = (slice(1, -1),) * u.ndim
    lap = -2.0 * u.ndim * u[inner]
    for ax in range(u.ndim):
        lo = list(inner)
        hi = list(inner)
        lo[ax] = slice(0, -2)
        hi[ax] = slice(2, None)
        lap = lap + u[tuple(lo)] + u[tuple(hi)]
    lap = lap / h**2
    qq = 1.0 if q is None else np.asarray(q)[inner]
    return float(np.max(np.abs(lap + k**2 * qq * u[inner]))) if lap.size else 0.0
