"""Harmonic homogeneous polynomials and their Laplace transforms over cones.

For H homogeneous of degree n and a cone W with vertex v,

    F(z) = int_W exp(-z.(x - v)) H(x - v) dx
         = Gamma(n + N) int_{cap} h(theta) (z.theta)^{-(n + N)} dsigma(theta),

where h is H restricted to the unit sphere and the radial integral is done
in closed form (valid whenever Re z.theta > 0 on the cap).  Truncations to
|x - v| < rho replace Gamma(m) by the lower incomplete gamma function,
which is elementary for integer m.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .geometry import SectorGeometry, TruncatedSector


class LaplaceDomainError(ValueError):
    """z outside the half-space where the cone integral converges."""


class NumericallyZeroError(ValueError):
    pass


@dataclass(frozen=True)
class HarmonicHomogeneousPolynomial:
    """Degree-n harmonic polynomial.

    2D: coefficients (a, b) of Re (x1 + i x2)^n and Im (x1 + i x2)^n.
    3D: 2n + 1 coefficients of r^n Y_nm (real spherical harmonics, m = -n..n).
    Coefficients may be complex.
    """

    degree: int
    coefficients: tuple
    dimension: int = 2

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError("degree must be non-negative")
        c = tuple(complex(v) for v in self.coefficients)
        want = 2 if self.dimension == 2 else 2 * self.degree + 1
        if self.dimension not in (2, 3):
            raise ValueError("dimension must be 2 or 3")
        if len(c) != want:
            raise ValueError(f"expected {want} coefficients, got {len(c)}")
        object.__setattr__(self, "coefficients", c)

    @classmethod
    def zero(cls, degree: int = 0, dimension: int = 2):
        return cls(degree, (0,) * (2 if dimension == 2 else 2 * degree + 1), dimension)

    def is_zero(self) -> bool:
        if self.dimension == 2 and self.degree == 0:
            return self.coefficients[0] == 0
        return all(c == 0 for c in self.coefficients)

    def scaled(self, s: complex) -> "HarmonicHomogeneousPolynomial":
        return HarmonicHomogeneousPolynomial(self.degree, tuple(s * c for c in self.coefficients), self.dimension)

    def __add__(self, other):
        if other.degree != self.degree or other.dimension != self.dimension:
            raise ValueError("can only add polynomials of equal degree and dimension")
        c = tuple(a + b for a, b in zip(self.coefficients, other.coefficients))
        return HarmonicHomogeneousPolynomial(self.degree, c, self.dimension)

    def rotated(self, angle: float) -> "HarmonicHomogeneousPolynomial":
        """x -> H(R(-angle) x): the polynomial carried along by a planar rotation."""
        if self.dimension != 2:
            raise NotImplementedError("rotation of 3D harmonics is not provided")
        a, b = self.coefficients
        c = complex(np.exp(-1j * self.degree * angle))
        return HarmonicHomogeneousPolynomial(
            self.degree, (a * c.real + b * c.imag, b * c.real - a * c.imag), 2
        )

    def angular(self, theta) -> np.ndarray:
        """h on the unit sphere: theta is an angle array (2D) or unit vectors (..., 3)."""
        n = self.degree
        if self.dimension == 2:
            a, b = self.coefficients
            theta = np.asarray(theta, dtype=float)
            if n == 0:
                return a * np.ones_like(theta, dtype=complex)
            return a * np.cos(n * theta) + b * np.sin(n * theta)
        u = np.asarray(theta, dtype=float)
        pol = np.arccos(np.clip(u[..., 2], -1.0, 1.0))
        az = np.arctan2(u[..., 1], u[..., 0])
        out = np.zeros(u.shape[:-1], dtype=complex)
        for m, c in zip(range(-n, n + 1), self.coefficients):
            if c != 0:
                out = out + c * real_sph_harm(n, m, pol, az)
        return out

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.dimension == 2:
            z = x[..., 0] + 1j * x[..., 1]
            a, b = self.coefficients
            p = z**self.degree
            return a * p.real + b * p.imag
        r = np.linalg.norm(x, axis=-1)
        safe = np.where(r[..., None] > 0, x / np.where(r > 0, r, 1.0)[..., None], np.array([0.0, 0.0, 1.0]))
        return r**self.degree * self.angular(safe)


def real_sph_harm(n: int, m: int, polar, azimuth):
    """Orthonormal real spherical harmonic Y_nm."""
    if m == 0:
        return special.sph_harm_y(n, 0, polar, azimuth).real
    y = special.sph_harm_y(n, abs(m), polar, azimuth)
    sign = (-1) ** m
    return math.sqrt(2) * sign * (y.real if m > 0 else y.imag)


def monomial_x1(n: int = 1) -> HarmonicHomogeneousPolynomial:
    """Re (x1 + i x2)^n."""
    return HarmonicHomogeneousPolynomial(n, (1.0, 0.0))


# ----------------------------------------------------------------------------
# radial integrals
# ----------------------------------------------------------------------------


def _lower_gamma(m: int, s):
    """gamma(m, s) = int_0^s t^{m-1} e^{-t} dt for integer m >= 1, complex s."""
    s = np.asarray(s, dtype=complex)
    out = np.empty_like(s)
    small = np.abs(s) < 2.0
    if np.any(small):
        ss = s[small]
        term = np.ones_like(ss)
        acc = term / m
        for j in range(1, 60):
            term = term * (-ss) / j
            acc = acc + term / (m + j)
        out[small] = ss**m * acc
    big = ~small
    if np.any(big):
        out[big] = math.factorial(m - 1) - _upper_gamma(m, s[big])
    return out


def _upper_gamma(m: int, s):
    """Gamma(m, s) = (m-1)! e^{-s} sum_{j<m} s^j / j! for integer m >= 1."""
    s = np.asarray(s, dtype=complex)
    term = np.ones_like(s)
    acc = term.copy()
    for j in range(1, m):
        term = term * s / j
        acc = acc + term
    return math.factorial(m - 1) * np.exp(-s) * acc


def _check_domain(H: HarmonicHomogeneousPolynomial, W: SectorGeometry, z: np.ndarray):
    if W.dimension != H.dimension or len(z) != H.dimension:
        raise ValueError("dimension mismatch between H, W and z")
    if W.dimension == 2:
        edges = [W.orientation - W.half_aperture, W.orientation + W.half_aperture]
        probes = np.array([[math.cos(t), math.sin(t)] for t in edges])
    else:
        e = np.asarray(W.frame)
        probes = np.vstack([e, (e[[0, 0, 1]] + e[[1, 2, 2]]) / math.sqrt(2)])
    vals = probes @ z.real
    if np.any(vals <= 0):
        raise LaplaceDomainError(f"Re(z).theta = {vals.min():.3g} <= 0 on the cone cap: integral diverges")


def _angular_integral(f, a: float, b: float, epsrel: float = 1e-13) -> complex:
    # absolute floor from int |f|, so a part that cancels to ~0 does not
    # chase an unreachable relative tolerance
    t, w = np.polynomial.legendre.leggauss(64)
    x = 0.5 * (b - a) * (t + 1) + a
    scale = 0.5 * (b - a) * sum(wi * abs(f(xi)) for wi, xi in zip(w, x))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err = integrate.quad(f, a, b, complex_func=True, epsabs=1e-14 * scale, epsrel=epsrel, limit=2000)
    if abs(err) > 1e-10 * max(scale, abs(val)):
        warnings.warn(f"angular quadrature error estimate {abs(err):.2g} (scale {scale:.3g})",
                      integrate.IntegrationWarning, stacklevel=3)
    return complex(val)


def _octant_rule(order: int):
    """Product Gauss rule in (polar, azimuth) on the first-octant cap of S^2."""
    t, w = np.polynomial.legendre.leggauss(order)
    ang = 0.25 * np.pi * (t + 1)
    wa = 0.25 * np.pi * w
    pol, az = np.meshgrid(ang, ang, indexing="ij")
    wts = np.outer(wa, wa) * np.sin(pol)
    u = np.stack([np.sin(pol) * np.cos(az), np.sin(pol) * np.sin(az), np.cos(pol)], axis=-1)
    return u.reshape(-1, 3), wts.ravel()


def _radial_factor(m: int, w, rho, part: str):
    if part == "full":
        return math.factorial(m - 1) / w**m
    if part == "inner":
        return _lower_gamma(m, rho * w) / w**m
    return _upper_gamma(m, rho * w) / w**m


def _cone_transform(H, W, z, rho, part, order=40):
    z = np.asarray(z, dtype=complex)
    m = H.degree + H.dimension
    if W.dimension == 2:
        lo = W.orientation - W.half_aperture
        hi = W.orientation + W.half_aperture

        def f(t):
            w = z[0] * math.cos(t) + z[1] * math.sin(t)
            return complex(H.angular(t) * _radial_factor(m, np.array([w]), rho, part)[0])

        return _angular_integral(f, lo, hi)
    frame = np.asarray(W.frame)

    def cap(order):
        u, wts = _octant_rule(order)
        ug = u @ frame
        w = ug @ z
        return complex(np.sum(wts * H.angular(ug) * _radial_factor(m, w, rho, part)))

    val = cap(order)
    check = cap(2 * order)
    if abs(val - check) > 1e-10 * max(1.0, abs(check)):
        return cap(4 * order)
    return check


def sector_laplace(H: HarmonicHomogeneousPolynomial, W: SectorGeometry, z) -> complex:
    """F(z) = int_W exp(-z.(x - v)) H(x - v) dx."""
    z = np.asarray(z, dtype=complex)
    _check_domain(H, W, z)
    if H.is_zero():
        return 0j
    return _cone_transform(H, W, z, None, "full")


def truncated_sector_laplace(H: HarmonicHomogeneousPolynomial, ts: TruncatedSector, z) -> complex:
    """Same integral restricted to S_{R/2} = W cap B_{R/2}."""
    z = np.asarray(z, dtype=complex)
    if H.is_zero():
        return 0j
    return _cone_transform(H, ts.base, z, 0.5 * ts.radius, "inner")


def sector_laplace_tail(H: HarmonicHomogeneousPolynomial, ts: TruncatedSector, z) -> complex:
    """The complement W minus S_{R/2}, i.e. F - F_trunc without cancellation."""
    z = np.asarray(z, dtype=complex)
    _check_domain(H, ts.base, z)
    if H.is_zero():
        return 0j
    return _cone_transform(H, ts.base, z, 0.5 * ts.radius, "outer")


def harmonic_rho(tau: float, phi: float, sign: int = 1, orientation: float = 0.0) -> np.ndarray:
    """tau (omega + i omega_perp), the rho.rho = 0 vectors, relative to a bisector angle."""
    t = orientation + phi
    om = np.array([math.cos(t), math.sin(t)])
    perp = sign * np.array([-math.sin(t), math.cos(t)])
    return tau * (om + 1j * perp)


@dataclass
class ScanReport:
    max_abs: float
    argmax: tuple
    values: list  # (tau, phi, sign, F)

    def rows(self):
        for tau, phi, sign, f in self.values:
            yield tau, phi, sign, f.real, f.imag, abs(f)


def vanishing_scan(H: HarmonicHomogeneousPolynomial, W: SectorGeometry, tau_grid, phi_grid) -> ScanReport:
    """Evaluate F at tau (omega + i omega_perp_pm) over a parameter grid.

    In 2D ``phi_grid`` holds angles relative to the bisector; each must be
    inside (-beta/2, beta/2).  In 3D it holds (omega, omega_perp) pairs.
    """
    tau_grid = list(tau_grid)
    phi_grid = list(phi_grid)
    if not tau_grid or not phi_grid:
        raise ValueError("empty scan grid")
    values = []
    for tau in tau_grid:
        for p in phi_grid:
            if W.dimension == 2:
                if abs(p) >= W.beta / 2:
                    raise ValueError(f"phi={p} not admissible (|phi| < {W.beta / 2})")
                for sign in (1, -1):
                    z = harmonic_rho(tau, p, sign, W.orientation)
                    values.append((tau, p, sign, sector_laplace(H, W, z)))
            else:
                om, perp = (np.asarray(v, dtype=float) for v in p)
                z = tau * (om + 1j * perp)
                values.append((tau, tuple(om), 1, sector_laplace(H, W, z)))
    mags = [abs(v[3]) for v in values]
    i = int(np.argmax(mags))
    return ScanReport(float(mags[i]), values[i][:3], values)


def cube_characteristic_fourier(xi, half_width: float = 1.0):
    """Fourier transform int exp(-i xi.x) dx over the cube [-a, a]^3."""
    xi = np.asarray(xi, dtype=float)
    t = half_width * xi
    with np.errstate(divide="ignore", invalid="ignore"):
        f = np.where(np.abs(t) < 1e-4, 1 - t**2 / 6 + t**4 / 120, np.sin(t) / np.where(t == 0, 1, t))
    return np.prod(2 * half_width * f, axis=-1)


# ----------------------------------------------------------------------------
# lowest-order harmonic part of a Helmholtz solution
# ----------------------------------------------------------------------------

NOISE_FLOOR = 1e-9


def lowest_harmonic_part(field, k: float, n_max: int = 12, r0: float = 0.25, center=(0.0, 0.0), m_samples: int = 128):
    """Leading homogeneous Taylor term H of a planar Helmholtz solution near ``center``.

    The angular Fourier coefficients c_m(r) are measured on circles r0, r0/2,
    r0/4 and fitted to b_m J_m(kr); the lowest |m| whose coefficient clears
    the noise floor sets the degree.  Returns (H, remainder) where remainder
    is max |v - H| on the circle r0.
    """
    m_samples = max(m_samples, 4 * n_max + 8)
    c = np.asarray(center, dtype=float)
    t = 2 * np.pi * np.arange(m_samples) / m_samples
    radii = np.array([r0, r0 / 2, r0 / 4])
    circ = np.stack([np.cos(t), np.sin(t)], axis=-1)
    samples = np.array([np.asarray(field(c + r * circ), dtype=complex) for r in radii])
    amp = float(np.max(np.abs(samples)))
    if not amp > 1e-300:
        raise NumericallyZeroError("field is numerically zero near the centre")
    coef = np.fft.fft(samples, axis=1) / m_samples  # coef[:, m] ~ c_m(r)
    floor = NOISE_FLOOR * amp
    for n in range(n_max + 1):
        orders = [n] if n == 0 else [n, -n]
        b = {}
        for m in orders:
            cm = coef[:, m % m_samples]
            jm = special.jv(m, k * radii)
            b[m] = complex(np.sum(cm * jm) / np.sum(jm * jm))
        if max(abs(coef[0, m % m_samples]) for m in orders) > floor:
            lead = (0.5 * k) ** n / math.factorial(n)
            cp = b[n] * lead
            if n == 0:
                H = HarmonicHomogeneousPolynomial(0, (cp, 0))
            else:
                cm_ = b[-n] * (-1) ** n * lead
                H = HarmonicHomogeneousPolynomial(n, (cp + cm_, 1j * (cp - cm_)))
            rem = float(np.max(np.abs(samples[0] - H(r0 * circ))))
            return H, rem
    raise ValueError(f"no coefficient above the noise floor up to n_max={n_max}")
