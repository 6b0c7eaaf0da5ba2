"""Cylinder functions and free-space Helmholtz fundamental solutions.

Values are taken from ``scipy.special`` (AMOS/Cephes), wrapped with the
argument checks the rest of the package relies on.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import special

N_MAX_DEFAULT = 64


def bessel_j(n, x):
    """J_n(x) for integer n >= 0 and real x >= 0."""
    n = np.asarray(n)
    x = np.asarray(x, dtype=float)
    if np.any(n < 0):
        raise ValueError("order must be non-negative")
    if np.any(x < 0):
        raise ValueError("argument must be non-negative")
    return special.jv(n, x)


def bessel_y(n, x):
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("Y_n is singular at x <= 0")
    return special.yv(n, x)


def hankel1(n, x):
    """H_n^(1)(x) = J_n(x) + i Y_n(x) for real x > 0."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("hankel1 requires x > 0")
    # assembled from J and Y: AMOS hankel1 is accurate in modulus only, so
    # its real part drifts when |J_n| << |Y_n|
    return special.jv(n, x) + 1j * special.yv(n, x)


def hankel2(n, x):
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("hankel2 requires x > 0")
    return special.jv(n, x) - 1j * special.yv(n, x)


def bessel_jp(n, x):
    """First derivative J_n'(x)."""
    return special.jvp(n, np.asarray(x, dtype=float))


def hankel1p(n, x):
    """First derivative of H_n^(1)."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("hankel1p requires x > 0")
    return special.jvp(n, x) + 1j * special.yvp(n, x)


@dataclass(frozen=True)
class CylinderFunctionTable:
    """J_n, Y_n and their derivatives for n = 0..n_max at fixed points."""

    x: np.ndarray
    n_max: int = N_MAX_DEFAULT
    j: np.ndarray = field(init=False, repr=False)
    y: np.ndarray = field(init=False, repr=False)
    jp: np.ndarray = field(init=False, repr=False)
    yp: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        x = np.atleast_1d(np.asarray(self.x, dtype=float))
        if np.any(x <= 0):
            raise ValueError("table points must be positive")
        n = np.arange(self.n_max + 1)[:, None]
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "j", special.jv(n, x))
        object.__setattr__(self, "y", special.yv(n, x))
        object.__setattr__(self, "jp", special.jvp(n, x))
        object.__setattr__(self, "yp", special.yvp(n, x))

    def wronskian_defect(self) -> float:
        """max relative deviation of J Y' - J' Y from 2/(pi x)."""
        w = self.j * self.yp - self.jp * self.y
        ref = 2.0 / (np.pi * self.x)
        return float(np.max(np.abs(w / ref - 1.0)))


def green(k: float, x, y, dim: int = 2):
    """Outgoing fundamental solution of (Delta + k^2) evaluated at x - y.

    Broadcasts over leading axes; the last axis holds coordinates.
    """
    if k <= 0:
        raise ValueError("wavenumber must be positive")
    if dim not in (2, 3):
        raise ValueError("dim must be 2 or 3")
    d = np.asarray(x, dtype=float) - np.asarray(y, dtype=float)
    r = np.linalg.norm(d, axis=-1)
    if np.any(r == 0):
        raise ValueError("green is singular at x == y")
    return green_radial(k, r, dim)


def green_radial(k: float, r, dim: int = 2):
    r = np.asarray(r, dtype=float)
    if dim == 2:
        return 0.25j * special.hankel1(0, k * r)
    return np.exp(1j * k * r) / (4.0 * np.pi * r)


def green_grad_radial(k: float, r, dim: int = 2):
    """d/dr of the fundamental solution."""
    r = np.asarray(r, dtype=float)
    if dim == 2:
        return -0.25j * k * special.hankel1(1, k * r)
    return np.exp(1j * k * r) * (1j * k * r - 1.0) / (4.0 * np.pi * r**2)


def far_field_constant(k: float, dim: int) -> complex:
    """gamma_N such that Phi(x, y) ~ gamma_N e^{ik|x|} |x|^{-(N-1)/2} e^{-ik xhat.y}."""
    if dim == 2:
        return np.exp(0.25j * np.pi) / np.sqrt(8.0 * np.pi * k)
    return 1.0 / (4.0 * np.pi)
