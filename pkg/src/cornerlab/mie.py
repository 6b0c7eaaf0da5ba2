"""Separation-of-variables reference solution for a homogeneous disk.

With k1 = k sqrt(q0) and incident exp(ik x.d) = sum_n i^n J_n(kr) e^{in(phi - theta_d)},
the fields are

    r > a:  sum_n i^n [J_n(kr) + a_n H_n(kr)] e^{in(phi - theta_d)}
    r < a:  sum_n i^n  c_n J_n(k1 r)          e^{in(phi - theta_d)}

and continuity of u and du/dr at r = a gives

    a_n = (k1 J_n'(k1 a) J_n(ka) - k J_n(k1 a) J_n'(ka))
          / (k J_n(k1 a) H_n'(ka) - k1 J_n'(k1 a) H_n(ka)),
    c_n = (J_n(ka) + a_n H_n(ka)) / J_n(k1 a).

Since i^n H_n(kr) ~ sqrt(2/(pi k r)) e^{i(kr - pi/4)}, the far field is
sqrt(2/(pi k)) e^{-i pi/4} sum_n a_n e^{in(phi - theta_d)}; this equals the
gamma_2 = e^{i pi/4}/sqrt(8 pi k) volume convention of the grid solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .lsolver import NORMALIZATION_2D, FarFieldPattern, _as_directions


class MieResonanceError(ArithmeticError):
    pass


@dataclass(frozen=True)
class MieScene:
    radius: float
    q0: float
    k: float
    center: tuple = (0.0, 0.0)
    n_modes: int | None = None

    def __post_init__(self):
        if isinstance(self.q0, complex):
            raise ValueError("only real q0 is supported")
        if not (self.radius > 0 and self.q0 > 0 and self.k > 0):
            raise ValueError("radius, q0 and k must be positive")
        if self.n_modes is not None and self.n_modes < self.min_modes():
            raise ValueError(f"n_modes below the truncation floor {self.min_modes()}")

    def min_modes(self) -> int:
        ka = self.k * self.radius * max(1.0, math.sqrt(self.q0))
        return int(math.ceil(ka + 4 * ka ** (1 / 3) + 10))

    @property
    def modes(self) -> int:
        return self.n_modes if self.n_modes is not None else self.min_modes()

    @property
    def k1(self) -> float:
        return self.k * math.sqrt(self.q0)


def mie_coefficients(scene: MieScene):
    """(n, a_n, c_n) for n = -N..N."""
    n = np.arange(-scene.modes, scene.modes + 1)
    k, k1, a = scene.k, scene.k1, scene.radius
    jn, jnp_ = special.jv(n, k * a), special.jvp(n, k * a)
    hn, hnp = special.hankel1(n, k * a), special.h1vp(n, k * a)
    j1, j1p = special.jv(n, k1 * a), special.jvp(n, k1 * a)
    den = k * j1 * hnp - k1 * j1p * hn
    bad = np.abs(den) < 1e-300
    if np.any(bad):
        raise MieResonanceError(f"singular matching system at mode {int(n[bad][0])}")
    an = (k1 * j1p * jn - k * j1 * jnp_) / den
    with np.errstate(divide="ignore", invalid="ignore"):
        cn = np.where(j1 != 0, (jn + an * hn) / j1, (jnp_ * k + an * hnp * k) / (k1 * j1p))
    return n, an, cn


def _angle(d) -> float:
    d = np.asarray(d, dtype=float)
    if d.ndim == 0:
        return float(d)
    return math.atan2(d[1], d[0])


def mie_far_field(scene: MieScene, d, directions=256) -> FarFieldPattern:
    dirs, w = _as_directions(directions, 2)
    theta_d = _angle(d)
    dvec = np.array([math.cos(theta_d), math.sin(theta_d)])
    n, an, _ = mie_coefficients(scene)
    phi = np.arctan2(dirs[:, 1], dirs[:, 0])
    vals = np.exp(1j * np.outer(phi - theta_d, n)) @ an
    vals = vals * math.sqrt(2 / (math.pi * scene.k)) * np.exp(-0.25j * math.pi)
    # off-centre disk: translation phase law
    c = np.asarray(scene.center, dtype=float)
    vals = vals * np.exp(1j * scene.k * ((dvec - dirs) @ c))
    return FarFieldPattern(scene.k, dirs, vals, w, NORMALIZATION_2D)


def mie_total_field(scene: MieScene, d, x, side: str | None = None) -> np.ndarray:
    """Total field at points x (..., 2).

    ``side`` forces the interior ("in") or exterior ("out") series
    regardless of position, for checking the transmission conditions.
    """
    theta_d = _angle(d)
    dvec = np.array([math.cos(theta_d), math.sin(theta_d)])
    c = np.asarray(scene.center, dtype=float)
    xl = np.asarray(x, dtype=float) - c
    r = np.hypot(xl[..., 0], xl[..., 1])
    phi = np.arctan2(xl[..., 1], xl[..., 0])
    n, an, cn = mie_coefficients(scene)
    ang = (1j ** (n % 4)) * np.exp(1j * np.multiply.outer(phi - theta_d, n))
    rr = r[..., None]
    inner = np.sum(ang * cn * special.jv(n, scene.k1 * rr), axis=-1)
    with np.errstate(invalid="ignore", divide="ignore"):
        hank = np.where(rr > 0, special.hankel1(n, scene.k * np.where(rr > 0, rr, 1.0)), 0)
    outer = np.sum(ang * (special.jv(n, scene.k * rr) + an * hank), axis=-1)
    phase = np.exp(1j * scene.k * (c @ dvec))
    if side == "in":
        return phase * inner
    if side == "out":
        return phase * outer
    return phase * np.where(r < scene.radius, inner, outer)
