"""Lippmann-Schwinger forward solver on a uniform cell-centred grid.

The total field solves

    u - k^2 V[(q - 1) u] = u_in,    V[f](x) = int Phi(x - y) f(y) dy,

with V discretised as a discrete convolution: the density is piecewise
constant on the cells, the kernel weight for a cell offset is the integral
of Phi over that cell (exact radial integration for the self cell, tensor
Gauss rules for the nearest neighbours, midpoint beyond).  The convolution
is applied by FFT on the grid zero-padded to twice its size, which makes
the circular product coincide with the aperiodic sum.
"""

from __future__ import annotations

import logging
import math
import os
import time
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import scipy.fft as sfft
from scipy import integrate, special
from scipy.sparse.linalg import LinearOperator, gmres

from .geometry import Ball, Box, ConvexPolygon
from .incident import IncidentWave, circle_rule, eval_incident, sphere_rule
from .specfun import far_field_constant, green_radial

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-8
DEFAULT_RESTART = 50
DEFAULT_MAX_ITER = 2000
DEFAULT_PPW = 12
NEAR_STENCIL = 2  # cells with |offset|_inf <= this get an accurate cell integral


class SolverError(RuntimeError):
    """Non-convergence or an unresolvable discretisation."""


class ResolutionWarning(UserWarning):
    pass


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("CORNERLAB_THREADS", "")))
    except ValueError:
        return os.cpu_count() or 1


@dataclass(frozen=True)
class CornerInfo:
    point: tuple
    q_value: float  # limit of q from inside the cone
    alpha: float | None = None

    @property
    def eta(self) -> float:
        return self.q_value - 1.0


@dataclass(frozen=True, eq=False)
class ContrastField:
    """Refractive index q sampled on cell centres of an axis-aligned grid."""

    lower: tuple
    h: float
    q: np.ndarray = field(repr=False)
    corners: tuple = ()
    scatterer: object = None
    label: str = ""

    def __post_init__(self):
        q = np.array(self.q, dtype=float)
        if not np.all(np.isfinite(q)):
            raise ValueError("q must be finite")
        for c in self.corners:
            if c.q_value == 1.0:
                raise ValueError(f"q(O) = 1 at corner {c.point}: contrast vanishes at the corner")
        q.setflags(write=False)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "lower", tuple(float(v) for v in self.lower))

    @property
    def dimension(self) -> int:
        return self.q.ndim

    @property
    def shape(self) -> tuple:
        return self.q.shape

    @property
    def upper(self) -> tuple:
        return tuple(lo + n * self.h for lo, n in zip(self.lower, self.shape))

    @property
    def cell_volume(self) -> float:
        return self.h**self.dimension

    def axes(self) -> list:
        return [lo + self.h * (np.arange(n) + 0.5) for lo, n in zip(self.lower, self.shape)]

    def centers(self) -> np.ndarray:
        return np.stack(np.meshgrid(*self.axes(), indexing="ij"), axis=-1)

    @property
    def contrast(self) -> np.ndarray:
        return self.q - 1.0

    def support_mask(self) -> np.ndarray:
        return self.q != 1.0

    def translated(self, t) -> "ContrastField":
        t = np.asarray(t, dtype=float)
        corners = tuple(
            CornerInfo(tuple(np.asarray(c.point) + t), c.q_value, c.alpha) for c in self.corners
        )
        scat = self.scatterer.translated(t) if self.scatterer is not None else None
        return ContrastField(tuple(np.asarray(self.lower) + t), self.h, self.q, corners, scat, self.label)


@dataclass(frozen=True)
class ContrastSpec:
    """Scatterer shape plus index profile.

    kind:
      "constant"   q = 1 + eta
      "hoelder"    q = 1 + eta (1 + c d^alpha), d = distance to the nearest corner
      "polynomial" q = 1 + sum c * x1^i x2^j (...), terms given as (i, j, [l,] c)
    """

    scatterer: object
    kind: str = "constant"
    eta: float = 0.5
    alpha: float | None = None
    c: float = 1.0
    terms: tuple = ()

    def profile(self) -> Callable[[np.ndarray], np.ndarray]:
        if self.kind == "constant":
            return lambda x: np.full(x.shape[:-1], 1.0 + self.eta)
        if self.kind == "hoelder":
            if self.alpha is None or not self.alpha > 0:
                raise ValueError("hoelder profile needs alpha > 0")
            corners = np.asarray(self.scatterer.corners())

            def q(x):
                d = np.min(np.linalg.norm(x[..., None, :] - corners, axis=-1), axis=-1)
                return 1.0 + self.eta * (1.0 + self.c * d**self.alpha)

            return q
        if self.kind == "polynomial":
            terms = [tuple(t) for t in self.terms]

            def q(x):
                out = np.ones(x.shape[:-1])
                for t in terms:
                    powers, coef = t[:-1], t[-1]
                    mono = np.ones(x.shape[:-1])
                    for ax, p in enumerate(powers):
                        mono = mono * x[..., ax] ** p
                    out = out + coef * mono
                return out

            return q
        raise ValueError(f"unknown contrast kind {self.kind!r}")


def build_contrast(
    spec: ContrastSpec,
    n: int | None = None,
    k: float | None = None,
    points_per_wavelength: float = DEFAULT_PPW,
    lower=None,
    side: float | None = None,
    label: str = "",
    require_corner_contrast: bool = True,
) -> ContrastField:
    """Sample a contrast description on a grid covering the scatterer.

    The grid has ``n`` cells along the longest side of the bounding box
    (or of the cube ``lower + [0, side]^N`` when given).  Without ``n`` the
    resolution follows from ``k`` and ``points_per_wavelength`` measured
    inside the medium.  Cell values are the profile at the centre for
    centres inside the closed scatterer, 1 elsewhere.

    ``require_corner_contrast=False`` admits q(O) = 1 (control scenes); such
    corners are then left out of ``ContrastField.corners``.
    """
    scat = spec.scatterer
    prof = spec.profile()
    corners = np.asarray(scat.corners(), dtype=float)
    infos = []
    for c in corners:
        qo = float(prof(c[None, :])[0])
        if abs(qo - 1.0) < 1e-14:
            if require_corner_contrast:
                raise ValueError(f"hypothesis q(O) != 1 violated at corner {tuple(c)}")
            continue
        infos.append(CornerInfo(tuple(c), qo, spec.alpha if spec.kind == "hoelder" else None))
    lo, hi = (np.asarray(b, dtype=float) for b in scat.bounding_box())
    if lower is not None:
        lo = np.asarray(lower, dtype=float)
        hi = lo + side
    extent = float(np.max(hi - lo))
    if n is None:
        if k is None:
            raise ValueError("need either n or k")
        qmax = max(abs(1.0 + spec.eta), 1.0)
        probe = prof(corners) if len(corners) else np.array([1.0 + spec.eta])
        qmax = max(qmax, float(np.max(probe)))
        wavelength = 2 * np.pi / (k * math.sqrt(qmax))
        n = max(8, int(math.ceil(points_per_wavelength * extent / wavelength)))
    h = extent / n
    counts = [max(1, int(round((b - a) / h))) for a, b in zip(lo, hi)]
    # keep the grid centred on the bounding box
    start = 0.5 * (lo + hi) - 0.5 * h * np.asarray(counts)
    axes = [a + h * (np.arange(m) + 0.5) for a, m in zip(start, counts)]
    x = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
    inside = scat.contains(x)
    q = np.where(inside, prof(x), 1.0)
    return ContrastField(tuple(start), h, q, tuple(infos), scat, label)


# ----------------------------------------------------------------------------
# kernel weights
# ----------------------------------------------------------------------------


def _radial_primitive(k: float, rho, dim: int):
    """int_0^rho Phi(r) r^{dim-1} dr (angular measure excluded).

    The closed forms subtract O(1/k^2) terms, so small k rho switches to
    cancellation-free series.
    """
    rho = np.asarray(rho, dtype=float)
    x = k * rho
    small = x < 0.5
    xs = np.where(small, x, 1.0)
    if dim == 2:
        out = 0.25j * (rho * special.hankel1(1, k * rho) / k + 2j / (np.pi * k**2))
        # x Y_1(x) + 2/pi = (2/pi) x ln(x/2) J_1(x) - (x/pi) sum_m c_m (x/2)^{2m+1}
        m = np.arange(12)
        c = (special.digamma(m + 1) + special.digamma(m + 2)) * (-1.0) ** m / (
            special.factorial(m) * special.factorial(m + 1))
        series = np.sum(c * (xs[..., None] / 2) ** (2 * m + 1), axis=-1)
        ypart = (2 / np.pi) * xs * np.log(xs / 2) * special.j1(xs) - xs / np.pi * series
        alt = 0.25j * (rho * special.j1(xs) / k + 1j * ypart / k**2)
        return np.where(small, alt, out)
    e = np.exp(1j * x)
    out = (e * (rho / (1j * k) + 1.0 / k**2) - 1.0 / k**2) / (4 * np.pi)
    # int_0^rho e^{ikr} r dr = sum_n (ik)^n rho^{n+2} / (n! (n+2))
    n = np.arange(20)
    terms = (1j * xs[..., None]) ** n / (special.factorial(n) * (n + 2))
    alt = rho**2 * np.sum(terms, axis=-1) / (4 * np.pi)
    return np.where(small, alt, out)


def self_cell_integral(k: float, h: float, dim: int) -> complex:
    """Integral of Phi over the cell [-h/2, h/2]^dim centred at the singularity.

    The cell is swept radially from its centre: each face contributes
    int_face b/rho^dim * P(rho) dA with P the radial primitive and b = h/2.
    """
    b = 0.5 * h
    if dim == 2:
        t, w = np.polynomial.legendre.leggauss(64)
        s = b * t
        rho = np.hypot(b, s)
        face = np.sum(w * b * b / rho**2 * _radial_primitive(k, rho, 2))
        return complex(4 * face)
    t, w = np.polynomial.legendre.leggauss(48)
    s1, s2 = np.meshgrid(b * t, b * t, indexing="ij")
    ww = np.outer(w, w) * b * b
    rho = np.sqrt(b * b + s1**2 + s2**2)
    face = np.sum(ww * b / rho**3 * _radial_primitive(k, rho, 3))
    return complex(6 * face)


def _cell_integral(k: float, h: float, offset: np.ndarray, dim: int, sub: int = 4, order: int = 8) -> complex:
    t, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(-0.5, 0.5, sub + 1)
    nodes = ((edges[:-1, None] + edges[1:, None]) / 2 + t[None, :] / (2 * sub)).ravel() * h
    wts = np.tile(w / (2 * sub), sub) * h
    grids = np.meshgrid(*([nodes] * dim), indexing="ij")
    wgrid = np.ones_like(grids[0])
    for g in np.meshgrid(*([wts] * dim), indexing="ij"):
        wgrid = wgrid * g
    r = np.sqrt(sum((offset[i] * h + grids[i]) ** 2 for i in range(dim)))
    return complex(np.sum(wgrid * green_radial(k, r, dim)))


def kernel_fft(k: float, h: float, shape: Sequence[int]) -> np.ndarray:
    """FFT of the cell-integrated kernel on the doubled grid."""
    dim = len(shape)
    big = tuple(2 * m for m in shape)
    offs = [np.fft.fftfreq(m, 1.0 / m) for m in big]  # integer offsets, wrapped
    grids = np.meshgrid(*offs, indexing="ij")
    r = h * np.sqrt(sum(g**2 for g in grids))
    with np.errstate(divide="ignore", invalid="ignore"):
        ker = green_radial(k, np.where(r == 0, 1.0, r), dim) * h**dim
    near = range(-NEAR_STENCIL, NEAR_STENCIL + 1)
    for off in np.stack(np.meshgrid(*([list(near)] * dim), indexing="ij"), -1).reshape(-1, dim):
        idx = tuple(int(o) % m for o, m in zip(off, big))
        if np.all(off == 0):
            ker[idx] = self_cell_integral(k, h, dim)
        else:
            ker[idx] = _cell_integral(k, h, off.astype(float), dim)
    return sfft.fftn(ker, workers=_workers())


class VolumePotential:
    """Matrix-free application of f -> V[f] on a fixed grid."""

    def __init__(self, k: float, h: float, shape: Sequence[int]):
        self.k = float(k)
        self.h = float(h)
        self.shape = tuple(shape)
        self.kfft = kernel_fft(k, h, shape)

    def __call__(self, f: np.ndarray) -> np.ndarray:
        w = _workers()
        pad = sfft.fftn(f, s=self.kfft.shape, workers=w)
        out = sfft.ifftn(pad * self.kfft, workers=w)
        return out[tuple(slice(0, m) for m in self.shape)]


@dataclass(eq=False)
class TotalFieldSolution:
    contrast: ContrastField
    incident: IncidentWave
    u: np.ndarray = field(repr=False)
    u_in: np.ndarray = field(repr=False)
    residual: float = 0.0
    iterations: int = 0
    runtime: float = 0.0

    @property
    def k(self) -> float:
        return self.incident.k

    def density(self) -> np.ndarray:
        """(q - 1) u on the grid."""
        return self.contrast.contrast * self.u

    def scattered(self) -> np.ndarray:
        return self.u - self.u_in

    def ls_residual(self, potential: "VolumePotential | None" = None) -> float:
        """max |u - u_in - k^2 V[(q-1)u]| on the grid."""
        if not np.any(self.contrast.support_mask()):
            return float(np.max(np.abs(self.u - self.u_in)))
        V = potential or VolumePotential(self.k, self.contrast.h, self.contrast.shape)
        r = self.u - self.u_in - self.k**2 * V(self.density())
        return float(np.max(np.abs(r)))

    def diagnostics(self) -> dict:
        c = self.contrast
        return {
            "iterations": int(self.iterations),
            "residual": float(self.residual),
            "grid": list(c.shape),
            "h": float(c.h),
            "lower": list(c.lower),
            "runtime": float(self.runtime),
        }


class LippmannSchwingerSolver:
    """Reusable solver for one contrast and wavenumber (many right-hand sides)."""

    def __init__(self, contrast: ContrastField, k: float, tol: float = DEFAULT_TOL,
                 max_iter: int = DEFAULT_MAX_ITER, restart: int = DEFAULT_RESTART,
                 method: str = "gmres"):
        if not k > 0:
            raise ValueError("wavenumber must be positive")
        self.contrast = contrast
        self.k = float(k)
        self.tol = float(tol)
        self.max_iter = int(max_iter)
        self.restart = int(restart)
        self.method = method
        _check_resolution(contrast, k)
        self.trivial = not np.any(contrast.support_mask())
        self.V = None if self.trivial else VolumePotential(k, contrast.h, contrast.shape)

    def apply(self, u: np.ndarray) -> np.ndarray:
        """(I - k^2 V m) u with m = q - 1."""
        return u - self.k**2 * self.V(self.contrast.contrast * u)

    def solve_grid(self, u_in: np.ndarray):
        shape = self.contrast.shape
        if self.trivial:
            return u_in.copy(), 0.0, 0
        bnorm = np.linalg.norm(u_in)
        if bnorm == 0:
            return np.zeros_like(u_in, dtype=complex), 0.0, 0
        if self.method == "born":
            return self._born(u_in, bnorm)
        nn = int(np.prod(shape))
        op = LinearOperator((nn, nn), matvec=lambda v: self.apply(v.reshape(shape)).ravel(), dtype=complex)
        count = [0]

        def cb(_):
            count[0] += 1

        cycles = max(1, math.ceil(self.max_iter / self.restart))
        x, info = gmres(op, u_in.ravel().astype(complex), rtol=self.tol, atol=0.0, restart=self.restart,
                        maxiter=cycles, callback=cb, callback_type="pr_norm")
        u = x.reshape(shape)
        res = float(np.linalg.norm(self.apply(u) - u_in) / bnorm)
        if info != 0 and res > self.tol * 1.01:
            raise SolverError(f"GMRES did not reach tol {self.tol:g} in {count[0]} iterations (residual {res:.3g})")
        return u, res, count[0]

    def _born(self, u_in, bnorm):
        u = u_in.astype(complex)
        for it in range(1, self.max_iter + 1):
            u_new = u_in + self.k**2 * self.V(self.contrast.contrast * u)
            if not np.all(np.isfinite(u_new)):
                break
            u = u_new
            res = float(np.linalg.norm(self.apply(u) - u_in) / bnorm)
            if res <= self.tol:
                return u, res, it
            if res > 1e6:
                break
        raise SolverError("Born series did not converge (contrast too strong)")

    def solve(self, inc: IncidentWave) -> TotalFieldSolution:
        if inc.k != self.k:
            raise ValueError("incident wavenumber differs from the solver's")
        if inc.dimension != self.contrast.dimension:
            raise ValueError("incident wave dimension differs from the contrast's")
        if inc.kind == "point_source" and self.contrast.scatterer is not None:
            if bool(self.contrast.scatterer.contains(np.asarray(inc.source))):
                raise ValueError("point source must lie outside the scatterer")
        t0 = time.perf_counter()
        x = self.contrast.centers()
        u_in = np.asarray(eval_incident(inc, x), dtype=complex)
        u, res, its = self.solve_grid(u_in)
        sol = TotalFieldSolution(self.contrast, inc, u, u_in, res, its, time.perf_counter() - t0)
        logger.debug("LS solve: %d its, residual %.2e, %.2fs", its, res, sol.runtime)
        return sol


def _check_resolution(contrast: ContrastField, k: float):
    qmax = max(1.0, float(np.max(contrast.q)))
    ppw = 2 * np.pi / (k * math.sqrt(qmax)) / contrast.h
    if ppw < 4:
        raise SolverError(f"{ppw:.2f} points per wavelength (< 4): refine the grid")
    if ppw < 8:
        warnings.warn(f"only {ppw:.2f} points per wavelength", ResolutionWarning, stacklevel=3)


def solve_total_field(contrast: ContrastField, inc: IncidentWave, tol: float = DEFAULT_TOL, **kw) -> TotalFieldSolution:
    return LippmannSchwingerSolver(contrast, inc.k, tol=tol, **kw).solve(inc)


# ----------------------------------------------------------------------------
# far field and exterior evaluation
# ----------------------------------------------------------------------------

NORMALIZATION_2D = "gamma2=exp(i*pi/4)/sqrt(8*pi*k)"
NORMALIZATION_3D = "gamma3=1/(4*pi)"


@dataclass(frozen=True, eq=False)
class FarFieldPattern:
    k: float
    directions: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    normalization: str = NORMALIZATION_2D

    @property
    def dimension(self) -> int:
        return self.directions.shape[1]

    @property
    def theta(self) -> np.ndarray:
        """Polar angle in 2D (in [0, 2 pi)); colatitude in 3D."""
        d = self.directions
        if self.dimension == 2:
            return np.mod(np.arctan2(d[:, 1], d[:, 0]), 2 * np.pi)
        return np.arccos(np.clip(d[:, 2], -1, 1))

    @property
    def phi(self) -> np.ndarray:
        d = self.directions
        return np.mod(np.arctan2(d[:, 1], d[:, 0]), 2 * np.pi)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(self.weights * np.abs(self.values) ** 2)))

    def distance(self, other: "FarFieldPattern") -> float:
        return float(np.sqrt(np.sum(self.weights * np.abs(self.values - other.values) ** 2)))


def far_field_directions(m: int, dim: int = 2):
    """Default sample set: m uniform angles (2D) or the m x 2m sphere rule (3D)."""
    if dim == 2:
        if m < 32:
            raise ValueError("far-field patterns need at least 32 directions")
        return circle_rule(m)
    dirs, w = sphere_rule(m)
    if len(dirs) < 32:
        raise ValueError("far-field patterns need at least 32 directions")
    return dirs, w


def _as_directions(directions, dim):
    if isinstance(directions, (int, np.integer)):
        return far_field_directions(int(directions), dim)
    d = np.asarray(directions, dtype=float)
    if d.ndim == 1 and dim == 2:
        d = np.stack([np.cos(d), np.sin(d)], axis=1)
    d = d / np.linalg.norm(d, axis=1, keepdims=True)
    w = np.full(len(d), (2 * np.pi if dim == 2 else 4 * np.pi) / len(d))
    return d, w


def far_field(sol: TotalFieldSolution, directions=256) -> FarFieldPattern:
    """u_inf(xhat) = gamma_N k^2 sum_j exp(-ik xhat.y_j) (q-1)u(y_j) h^N."""
    c = sol.contrast
    dirs, w = _as_directions(directions, c.dimension)
    mask = c.support_mask()
    y = c.centers()[mask]
    f = sol.density()[mask] * c.cell_volume
    vals = np.zeros(len(dirs), dtype=complex)
    if len(y):
        step = max(1, (1 << 22) // len(y))
        for s in range(0, len(dirs), step):
            vals[s : s + step] = np.exp(-1j * sol.k * (dirs[s : s + step] @ y.T)) @ f
    vals *= far_field_constant(sol.k, c.dimension) * sol.k**2
    tag = NORMALIZATION_2D if c.dimension == 2 else NORMALIZATION_3D
    return FarFieldPattern(sol.k, dirs, vals, w, tag)


def scattered_field_at(sol: TotalFieldSolution, x) -> np.ndarray:
    """u_sc(x) = k^2 sum_j Phi(x - y_j) (q-1)u(y_j) h^N at exterior points."""
    c = sol.contrast
    x = np.atleast_2d(np.asarray(x, dtype=float))
    mask = c.support_mask()
    y = c.centers()[mask]
    f = sol.density()[mask] * c.cell_volume
    out = np.zeros(len(x), dtype=complex)
    if not len(y):
        return out
    for i, p in enumerate(x):
        r = np.linalg.norm(y - p, axis=1)
        if np.min(r) <= c.h:
            raise ValueError(f"point {p.tolist()} is inside the contrast support")
        out[i] = np.sum(green_radial(sol.k, r, c.dimension) * f)
    return sol.k**2 * out
