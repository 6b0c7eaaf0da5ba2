"""Complex geometrical optics vectors, decay margins and remainders.

All planar quantities are expressed in the sector's local frame (bisector on
the positive x1-axis, vertex at the origin) unless a non-zero
``orientation`` is given.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.fft as sfft
from scipy.sparse.linalg import LinearOperator, gmres

from .geometry import NeighborhoodRegion, SectorGeometry, TruncatedSector, neighborhood_region
from .lsolver import ContrastField, SolverError, _workers

ORTHANT_AXIS = np.full(3, 1 / math.sqrt(3))


class AdmissibilityError(ValueError):
    """CGO direction outside the range where decay on the cone is guaranteed."""


@dataclass(frozen=True)
class CgoParameters:
    tau: float
    k: float
    dimension: int = 2
    phi: float = 0.0
    sign: int = 1
    orientation: float = 0.0
    omega: tuple | None = None
    omega_perp: tuple | None = None
    harmonic: bool = False  # rho.rho = 0 instead of -k^2

    def __post_init__(self):
        if not self.tau > 0:
            raise ValueError("tau must be positive")
        if not self.k > 0:
            raise ValueError("k must be positive")
        if self.dimension == 2:
            if self.sign not in (1, -1):
                raise ValueError("sign must be +1 or -1")
        elif self.dimension == 3:
            om = np.asarray(self.omega, dtype=float)
            pp = np.asarray(self.omega_perp, dtype=float)
            if om.shape != (3,) or pp.shape != (3,):
                raise ValueError("3D parameters need omega and omega_perp")
            if abs(om @ om - 1) > 1e-12 or abs(pp @ pp - 1) > 1e-12 or abs(om @ pp) > 1e-12:
                raise ValueError("omega, omega_perp must be orthonormal")
        else:
            raise ValueError("dimension must be 2 or 3")

    def unit_vectors(self):
        if self.dimension == 3:
            return np.asarray(self.omega, dtype=float), np.asarray(self.omega_perp, dtype=float)
        t = self.orientation + self.phi
        om = np.array([math.cos(t), math.sin(t)])
        return om, self.sign * np.array([-math.sin(t), math.cos(t)])

    def imag_scale(self) -> float:
        return self.tau if self.harmonic else math.sqrt(self.tau**2 + self.k**2)


def make_rho(p: CgoParameters) -> np.ndarray:
    """rho = tau omega + i (tau^2 + k^2)^{1/2} omega_perp  (or i tau omega_perp if harmonic)."""
    om, perp = p.unit_vectors()
    return p.tau * om + 1j * p.imag_scale() * perp


def is_admissible(p: CgoParameters, sector: SectorGeometry) -> bool:
    if p.dimension == 2:
        return abs(p.phi) < sector.beta / 2
    a = np.asarray(sector.frame).T @ ORTHANT_AXIS  # orthant axis in global coordinates
    return float(np.asarray(p.omega) @ a) > math.cos(sector.beta / 2)


def decay_margin(ts: TruncatedSector, eps: float, phi: float) -> float:
    """delta0 = min of omega.x over the closure of D_{eps,R} (local frame).

    omega.x is linear and the region is an annular sector, so the minimum
    sits at one of its four corners: (R/2 - eps) cos(phi0 + eps + |phi|).
    """
    region = neighborhood_region(ts, eps)
    if abs(phi) >= ts.base.beta / 2:
        raise AdmissibilityError(f"phi={phi} not in (-beta/2, beta/2) = +-{ts.base.beta / 2:.6g}")
    om = np.array([math.cos(phi), math.sin(phi)])
    corners = [
        r * np.array([math.cos(s * region.angle_max), math.sin(s * region.angle_max)])
        for r in (region.r_min, region.r_max)
        for s in (1, -1)
    ]
    return float(min(om @ c for c in corners))


def _region_samples(region: NeighborhoodRegion, samples: int) -> np.ndarray:
    """Local-frame points: random interior points plus a polar grid on the closure."""
    rng = np.random.default_rng(12345)
    r = rng.uniform(region.r_min, region.r_max, samples)
    a = rng.uniform(-region.angle_max, region.angle_max, samples)
    m = max(4, int(math.sqrt(samples)))
    gr, ga = np.meshgrid(np.linspace(region.r_min, region.r_max, m),
                         np.linspace(-region.angle_max, region.angle_max, m), indexing="ij")
    r = np.concatenate([r, gr.ravel()])
    a = np.concatenate([a, ga.ravel()])
    return np.stack([r * np.cos(a), r * np.sin(a)], axis=-1)


def profile_decay_check(p: CgoParameters, region: NeighborhoodRegion, samples: int = 4096) -> dict:
    """Compare max |exp(-rho.x)| over D_{eps,R} with exp(-tau delta0)."""
    if p.dimension != 2 or p.orientation != 0.0:
        raise ValueError("profile_decay_check works in the planar local frame")
    delta0 = decay_margin(region.sector, region.eps, p.phi)
    x = _region_samples(region, samples)
    rho = make_rho(p)
    logmax = float(np.max(-(x @ rho.real)))
    bound = math.exp(-p.tau * delta0)
    measured = math.exp(logmax)
    return {
        "tau": p.tau,
        "phi": p.phi,
        "delta0": delta0,
        "max_profile": measured,
        "log_max_profile": logmax,
        "bound": bound,
        "ok": measured <= bound * (1 + 1e-12),
    }


# ----------------------------------------------------------------------------
# remainder psi (optional)
# ----------------------------------------------------------------------------


@dataclass(eq=False)
class CgoRemainder:
    psi: np.ndarray
    tau: float
    h: float
    lower: tuple
    norm_exponent: int
    psi_norm: float
    residual: float
    iterations: int

    def profile(self, rho: np.ndarray, x: np.ndarray) -> np.ndarray:
        return np.exp(-(x @ rho)) * (1 + self.psi)


def _lp_norm(f: np.ndarray, p: int, cell: float) -> float:
    return float((np.sum(np.abs(f) ** p) * cell) ** (1.0 / p))


def solve_cgo_remainder(contrast_ext: ContrastField, p: CgoParameters, tol: float = 1e-8,
                        max_iter: int = 500) -> CgoRemainder:
    """Solve Delta psi - 2 rho.grad psi = -k^2 (q - 1)(1 + psi) on the grid's box.

    psi is sought quasi-periodic, exp(i pi x_a / L) times an L-periodic
    function, with a the grid axis most aligned with omega.  The half-step
    shift keeps the Fourier symbol -|xi|^2 - 2i rho.xi away from zero
    (|Im| >= 2 tau |omega.xi|), so the equation is solved by GMRES on
    (I + k^2 P^{-1} m) psi = -k^2 P^{-1} m.
    """
    rho = make_rho(p)
    c = contrast_ext
    if c.dimension != p.dimension:
        raise ValueError("contrast and parameters differ in dimension")
    m = c.contrast
    shape = c.shape
    L = np.array([n * c.h for n in shape])
    om, _ = p.unit_vectors()
    axis = int(np.argmax(np.abs(om)))
    shift = np.zeros(c.dimension)
    shift[axis] = np.pi / L[axis]
    freqs = [2 * np.pi * np.fft.fftfreq(n, c.h) for n in shape]
    xi = np.stack(np.meshgrid(*freqs, indexing="ij"), axis=-1) + shift
    symbol = -np.sum(xi**2, axis=-1) - 2j * (xi @ rho)
    smin = float(np.min(np.abs(symbol)))
    if smin < 1e-10 * float(np.max(np.abs(symbol))):
        bad = np.unravel_index(np.argmin(np.abs(symbol)), symbol.shape)
        raise SolverError(f"symbol nearly vanishes at frequency {xi[bad].tolist()} (|xi|={np.linalg.norm(xi[bad]):.4g})")
    x = c.centers()
    ph = np.exp(1j * (x @ shift))
    w = _workers()

    def pinv(f):
        return ph * sfft.ifftn(sfft.fftn(f / ph, workers=w) / symbol, workers=w)

    def papply(f):
        return ph * sfft.ifftn(sfft.fftn(f / ph, workers=w) * symbol, workers=w)

    k2 = p.k**2
    rhs = -k2 * pinv(m.astype(complex))
    expo = 6 if c.dimension == 2 else 4
    if not np.any(m):
        z = np.zeros(shape, dtype=complex)
        return CgoRemainder(z, p.tau, c.h, c.lower, expo, 0.0, 0.0, 0)
    nn = int(np.prod(shape))
    op = LinearOperator((nn, nn), dtype=complex,
                        matvec=lambda v: (v.reshape(shape) + k2 * pinv(m * v.reshape(shape))).ravel())
    count = [0]

    def cb(_):
        count[0] += 1

    sol, info = gmres(op, rhs.ravel(), rtol=tol, atol=0.0, restart=50, maxiter=max(1, max_iter // 50),
                      callback=cb, callback_type="pr_norm")
    psi = sol.reshape(shape)
    pde = papply(psi) + k2 * m * (1 + psi)
    residual = float(np.linalg.norm(pde) / np.linalg.norm(k2 * m))
    if info != 0 and residual > 10 * tol:
        raise SolverError(f"CGO remainder iteration did not converge (residual {residual:.3g})")
    return CgoRemainder(psi, p.tau, c.h, c.lower, expo, _lp_norm(psi, expo, c.cell_volume), residual, count[0])
