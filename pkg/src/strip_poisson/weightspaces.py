"""Weights, regularity/weight index calculus and the polynomial spaces P'_j.

Polynomials here depend on y2 only, so the harmonic subspace of P'_j is
span{1, y2} truncated at degree j.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

_HALF_TOL = 1e-12


def _is_integer(x: float) -> bool:
    return abs(x - round(x)) < _HALF_TOL


def compute_q(m: int, alpha: float) -> int:
    """Largest degree q with y2**q in H^m_alpha; negative means the space {0}."""
    if _is_integer(alpha + 0.5) and round(alpha + 0.5) <= 0:
        return int(round(m - 1.5 - alpha))
    return int(math.floor(m - 0.5 - alpha + _HALF_TOL))


def compute_k(m: int, alpha: float) -> int:
    """Highest derivative order carrying the logarithmic factor, or -1."""
    if m < 0:
        raise ValueError("compute_k needs m >= 0")
    if _is_integer(alpha - 0.5) and 0.5 - _HALF_TOL <= alpha <= m - 0.5 + _HALF_TOL:
        return int(round(m - 0.5 - alpha))
    return -1


@dataclass(frozen=True)
class WeightSpec:
    """The pair (m, alpha) identifying H^m_{alpha,#}(Z) with its derived indices."""

    m: int
    alpha: float
    k_crit: int = field(init=False)
    q_poly: int = field(init=False)
    is_critical: bool = field(init=False)
    is_half_integer_critical: bool = field(init=False)

    def __post_init__(self):
        k = compute_k(self.m, self.alpha) if self.m >= 0 else -1
        object.__setattr__(self, "k_crit", k)
        object.__setattr__(self, "q_poly", compute_q(self.m, self.alpha))
        object.__setattr__(self, "is_critical", k >= 0)
        object.__setattr__(
            self,
            "is_half_integer_critical",
            _is_integer(self.alpha + 0.5) and round(self.alpha + 0.5) <= 0,
        )


@dataclass(frozen=True)
class WeightFunction:
    """rho(y2)**alpha * ln(1 + rho**2)**log_power."""

    alpha: float
    log_power: int = 0

    def __call__(self, y2):
        y2 = np.asarray(y2, dtype=float)
        out = (1.0 + y2 * y2) ** (self.alpha / 2.0)
        if self.log_power:
            out = out * np.log(2.0 + y2 * y2) ** self.log_power
        return out


def rho(y2):
    return np.sqrt(1.0 + np.asarray(y2, dtype=float) ** 2)


@dataclass(frozen=True)
class PolyElement:
    """Element of P'_j; coeffs[i] multiplies y2**i."""

    coeffs: tuple[float, ...]

    def __init__(self, coeffs):
        c = tuple(float(x) for x in np.atleast_1d(np.asarray(coeffs, dtype=float)))
        object.__setattr__(self, "coeffs", c if c else (0.0,))

    @property
    def degree(self) -> int:
        nz = [i for i, c in enumerate(self.coeffs) if c != 0.0]
        return nz[-1] if nz else -1

    def __call__(self, y2):
        # np.polyval wants highest degree first
        return np.polyval(self.coeffs[::-1], np.asarray(y2, dtype=float))

    def laplacian(self) -> "PolyElement":
        c = self.coeffs
        if len(c) < 3:
            return PolyElement([0.0])
        return PolyElement([i * (i - 1) * c[i] for i in range(2, len(c))])

    @property
    def is_harmonic(self) -> bool:
        return all(c == 0.0 for c in self.coeffs[2:])

    def __add__(self, other: "PolyElement") -> "PolyElement":
        n = max(len(self.coeffs), len(other.coeffs))
        a = np.zeros(n)
        a[: len(self.coeffs)] += self.coeffs
        a[: len(other.coeffs)] += other.coeffs
        return PolyElement(a)

    def __neg__(self) -> "PolyElement":
        return PolyElement([-c for c in self.coeffs])

    def to_list(self) -> list[float]:
        return list(self.coeffs)


def poly_basis(j: int, harmonic_only: bool = False) -> list[PolyElement]:
    if j < 0:
        return []
    top = min(j, 1) if harmonic_only else j
    return [PolyElement([0.0] * i + [1.0]) for i in range(top + 1)]


# --- membership oracle -----------------------------------------------------
# One-dimensional evaluation of ||y2**degree||_{H^m_alpha} on [-L, L], by
# adaptive quadrature (independent of the grid machinery in stripfield).

def monomial_norm_sq(m: int, alpha: float, degree: int, L: float) -> float:
    k = compute_k(m, alpha)
    total = 0.0
    breaks = [0.0, 1.0] + [10.0 ** p for p in range(1, int(math.ceil(math.log10(L))) + 1)]
    breaks = sorted({b for b in breaks if b < L} | {L})
    for j in range(0, min(m, degree) + 1):
        c = math.factorial(degree) / math.factorial(degree - j)
        p = degree - j
        log_pow = -2 if j <= k else 0

        def integrand(y, c=c, p=p, log_pow=log_pow, j=j):
            r2 = 1.0 + y * y
            val = c * c * y ** (2 * p) * r2 ** (alpha - m + j)
            if log_pow:
                val *= math.log(1.0 + r2) ** log_pow
            return val

        for a, b in zip(breaks[:-1], breaks[1:]):
            val, _ = integrate.quad(integrand, a, b, limit=200, epsabs=0.0, epsrel=1e-11)
            total += 2.0 * val
    return total


def monomial_in_space(m: int, alpha: float, degree: int,
                      lengths=(10.0, 1e2, 1e3, 1e4)) -> bool:
    """Decide boundedness of the truncated norms of y2**degree as L grows.

    Exponents of the squared integrand are integers or half-integers, so a
    convergent sequence has per-decade increments shrinking at least like
    1/ln(L)**2 while divergent ones are at best constant per decade.
    """
    norms = [monomial_norm_sq(m, alpha, degree, L) for L in lengths]
    incs = np.diff(norms)
    if incs[0] <= 0.0:
        return True
    return bool(incs[-1] < 0.5 * incs[0])
