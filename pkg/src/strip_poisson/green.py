"""Green function of -Lap on the 1-periodic strip.

    G(y) = -(1/4pi) ln(2(cosh 2pi y2 - cos 2pi y1)) = G1(y) + G2(y),  G2 = -|y2|/2.

Every evaluation uses 2(cosh a - cos b) = 4(sinh^2(a/2) + sin^2(b/2)), which
keeps full relative accuracy close to the lattice singularities.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

TWO_PI = 2.0 * math.pi
FAR_SWITCH = 20.0
# value of G + (1/2pi) ln r at r -> 0
REGULAR_AT_ORIGIN = -math.log(TWO_PI) / TWO_PI


class SingularityError(ValueError):
    """Evaluation requested at a lattice point (j, 0)."""


@dataclass(frozen=True)
class GreenEval:
    value: float
    dist_to_singularity: float


def _wrap(y1):
    return (np.asarray(y1, dtype=float) + 0.5) % 1.0 - 0.5


def lattice_distance(y1, y2):
    return np.hypot(_wrap(y1), np.asarray(y2, dtype=float))


def green_values(y1, y2) -> np.ndarray:
    """Vectorized closed form; -inf at lattice points."""
    y1 = np.asarray(y1, dtype=float)
    y2 = np.asarray(y2, dtype=float)
    y1, y2 = np.broadcast_arrays(y1, y2)
    ay = np.abs(y2)
    out = np.empty(y1.shape)
    far = ay > FAR_SWITCH
    near = ~far
    if np.any(near):
        s = np.sinh(np.pi * ay[near]) ** 2 + np.sin(np.pi * y1[near]) ** 2
        with np.errstate(divide="ignore"):
            out[near] = -np.log(4.0 * s) / (4.0 * np.pi)
    if np.any(far):
        e = np.exp(-TWO_PI * ay[far])
        out[far] = -ay[far] / 2.0 - np.log1p(e * e - 2.0 * e * np.cos(TWO_PI * y1[far])) / (4.0 * np.pi)
    return out


def green_closed(y1: float, y2: float) -> GreenEval:
    d = float(lattice_distance(y1, y2))
    if d == 0.0:
        raise SingularityError(f"G is singular at ({y1}, {y2})")
    return GreenEval(float(green_values(y1, y2)), d)


def green_series(y1: float, y2: float, K: int) -> float:
    """G2 plus the partial sum of G1 over 0 < |k| <= K."""
    if y2 == 0:
        raise ValueError("the series is only used off the line y2 = 0")
    k = np.arange(1, K + 1)
    a = TWO_PI * abs(y2)
    terms = np.exp(-k * a) * np.cos(TWO_PI * k * y1) / (TWO_PI * k)
    # sum smallest terms first
    return float(-abs(y2) / 2.0 + np.sum(terms[::-1]))


def series_truncation_bound(y2: float, K: int) -> float:
    a = TWO_PI * abs(y2)
    return math.exp(-a * K) / (TWO_PI * K * (1.0 - math.exp(-a)))


def green_gradient(y1: float, y2: float) -> tuple[float, float]:
    if float(lattice_distance(y1, y2)) == 0.0:
        raise SingularityError(f"grad G is singular at ({y1}, {y2})")
    ay = abs(y2)
    if ay > FAR_SWITCH:
        e = math.exp(-TWO_PI * ay)
        den = 1.0 - 2.0 * e * math.cos(TWO_PI * y1) + e * e
        g1 = -e * math.sin(TWO_PI * y1) / den
        g2 = -0.5 * math.copysign(1.0, y2) * (1.0 - e * e) / den
        return g1, g2
    den = 2.0 * (math.sinh(math.pi * y2) ** 2 + math.sin(math.pi * y1) ** 2)
    return (-0.5 * math.sin(TWO_PI * y1) / den, -0.5 * math.sinh(TWO_PI * y2) / den)


def green_d22(y1, y2):
    """Second vertical derivative: -pi (1 - cos(2pi y1) cosh(2pi y2)) / (cosh - cos)^2."""
    y1 = np.asarray(y1, dtype=float)
    y2 = np.asarray(y2, dtype=float)
    c = np.cos(TWO_PI * y1)
    den = 2.0 * (np.sinh(np.pi * y2) ** 2 + np.sin(np.pi * y1) ** 2)
    return -np.pi * (1.0 - c * np.cosh(TWO_PI * y2)) / den ** 2


def mode_kernel(k: int, t):
    """F_k(G1)(t) = exp(-2 pi |k| |t|) / (4 pi |k|)."""
    if k == 0:
        raise ValueError("mode 0 has the kernel -|t|/2; use mean_kernel")
    a = TWO_PI * abs(k)
    return np.exp(-a * np.abs(t)) / (2.0 * a)


def mean_kernel(t):
    return -np.abs(t) / 2.0


# --- Ewald split -----------------------------------------------------------------
# G = Gs + S with S(y) = (1/4pi) sum_j E1(|y - (j,0)|^2 / s^2), Gs smooth.
# S is short ranged; its action on a field is applied through its symbol
# (1 - exp(-s^2 xi^2 / 4)) / xi^2.

IMAGES = (-2, -1, 0, 1, 2)


def ewald_singular(y1, y2, s: float):
    y1 = np.asarray(y1, dtype=float)
    y2 = np.asarray(y2, dtype=float)
    out = np.zeros(np.broadcast(y1, y2).shape)
    for j in IMAGES:
        x = ((y1 - j) ** 2 + y2 ** 2) / s ** 2
        with np.errstate(divide="ignore"):
            out = out + np.where(x < 700.0, special.exp1(np.maximum(x, 1e-300)), 0.0)
    return out / (4.0 * np.pi)


def ewald_smooth(y1, y2, s: float):
    """Gs = G - S, finite at the lattice point (0, 0)."""
    y1 = _wrap(y1)
    y2 = np.asarray(y2, dtype=float)
    y1, y2 = np.broadcast_arrays(y1, y2)
    out = np.empty(y1.shape)
    r2 = y1 ** 2 + y2 ** 2
    small = r2 < (0.05 * s) ** 2
    big = ~small
    if np.any(big):
        out[big] = green_values(y1[big], y2[big]) - ewald_singular(y1[big], y2[big], s)
    if np.any(small):
        # G + ln(r^2)/4pi -> REGULAR_AT_ORIGIN, and ln r^2 + E1(r^2/s^2) is
        # entire in r^2: -gamma + ln s^2 + x - x^2/4 + ...
        x = r2[small] / s ** 2
        entire = -np.euler_gamma + np.log(s ** 2) + x - x ** 2 / 4.0 + x ** 3 / 18.0
        others = sum(special.exp1(((y1[small] - j) ** 2 + y2[small] ** 2) / s ** 2)
                     for j in IMAGES if j != 0)
        out[small] = REGULAR_AT_ORIGIN - entire / (4.0 * np.pi) - others / (4.0 * np.pi)
    return out


def near_symbol_derivatives(a: float, s: float, order: int = 3) -> list[float]:
    """Derivatives in x of m(x) = (1 - exp(-c x)) / x at x = a, with c = s^2/4.

    Uses m^{(n)}(x) = (-1)^n c^{n+1} int_0^1 t^n exp(-c x t) dt.
    """
    c = s * s / 4.0
    nodes, weights = np.polynomial.legendre.leggauss(40)
    t = 0.5 * (nodes + 1.0)
    wt = 0.5 * weights
    e = np.exp(-c * a * t)
    return [(-1) ** n * c ** (n + 1) * float(wt @ (t ** n * e)) for n in range(order)]


# --- Dirac check ------------------------------------------------------------------

def _polar_log_integral(psi, rmax: float, n_theta: int = 512) -> float:
    theta = np.arange(n_theta) * (TWO_PI / n_theta)
    ct, st = np.cos(theta), np.sin(theta)

    def ring(r):
        return TWO_PI * float(np.mean(psi(r * ct, r * st)))

    val, _ = integrate.quad(lambda r: -r * math.log(r) * ring(r) / TWO_PI if r > 0 else 0.0,
                            0.0, rmax, limit=400, epsabs=1e-13, epsrel=1e-12)
    return val


def delta_reproduction(neg_laplacian, n1: int = 256, n2: int = 513, L: float = 1.0,
                       rmax: float = 0.5) -> float:
    """Quadrature of int_Z G (-Lap phi) for a test function supported in r < rmax < 1/2.

    G is split as R - (1/2pi) ln r near the origin. R is smooth there, so
    the periodic trapezoid rule on the grid is spectrally accurate for
    R * psi. The logarithmic part is integrated in polar coordinates, where
    r ln r is continuous.
    """
    y1 = np.arange(n1) / n1
    y2 = np.linspace(-L, L, n2)
    Y1, Y2 = np.meshgrid(y1, y2, indexing="ij")
    W1 = _wrap(Y1)
    psi = neg_laplacian(W1, Y2)
    r = np.hypot(W1, Y2)
    reg = np.full(r.shape, REGULAR_AT_ORIGIN)
    off = r > 0
    reg[off] = green_values(W1[off], Y2[off]) + np.log(r[off]) / TWO_PI
    h1, h2 = 1.0 / n1, 2.0 * L / (n2 - 1)
    smooth_part = float(np.sum(reg * psi) * h1 * h2)
    return smooth_part + _polar_log_integral(neg_laplacian, rmax)
