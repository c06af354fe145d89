"""Weighted norms, quotient norms, inequality checkers and decay fits.

Checkers return both sides of an inequality and leave tolerances to the
caller.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats
from scipy.integrate import simpson

from .stripfield import (NonIntegrableError, StripField, d_y2, integrate,
                         parse_decay, partial, simpson_weights)
from .weightspaces import PolyElement, WeightFunction, WeightSpec, poly_basis

MULTI_INDICES = {0: [(0, 0)], 1: [(1, 0), (0, 1)], 2: [(2, 0), (1, 1), (0, 2)]}
GRAM_COND_MAX = 1e12


@dataclass(frozen=True)
class NormValue:
    value: float
    tail: float

    def __float__(self) -> float:
        return self.value


def _term_weight(spec: WeightSpec, order: int) -> WeightFunction:
    """Squared weight rho^{2(alpha - m + |lambda|)} ln(1+rho^2)^{-2 if |lambda| <= k}."""
    lp = -2 if order <= spec.k_crit else 0
    return WeightFunction(2.0 * (spec.alpha - spec.m + order), lp)


def _squared(f: StripField) -> StripField:
    p = parse_decay(f.decay_class)
    return f.with_values(f.values ** 2, "schwartz" if p is None else f"poly:{2 * p:g}")


def weighted_norm(u: StripField, spec: WeightSpec) -> NormValue:
    """||u||_{H^m_alpha}: sum over |lambda| <= m of weighted L^2 squares of d^lambda u."""
    if spec.m not in MULTI_INDICES:
        raise ValueError(f"weighted_norm supports m in 0..2, got {spec.m}")
    total = 0.0
    tail = 0.0
    for order in range(spec.m + 1):
        w = _term_weight(spec, order)
        for lam in MULTI_INDICES[order]:
            q = integrate(_squared(partial(u, *lam)), w)
            total += q.value
            tail += q.tail
    value = math.sqrt(max(total, 0.0))
    # first-order propagation of the tail on the squared norm
    return NormValue(value, tail / (2.0 * value) if value > 0 else math.sqrt(tail))


def _bilinear(a: StripField, b: StripField, spec: WeightSpec) -> float:
    grid = a.grid
    sw = simpson_weights(grid.n2, grid.h2)
    total = 0.0
    for order in range(spec.m + 1):
        w = _term_weight(spec, order)(grid.y2)
        for lam in MULTI_INDICES[order]:
            prod = (partial(a, *lam).values * partial(b, *lam).values).mean(axis=0)
            total += float(sw @ (prod * w))
    return total


def quotient_norm(u: StripField, spec: WeightSpec, j: int) -> tuple[float, PolyElement]:
    """inf over p in P'_j of ||u + p|| on the grid window, with the minimizer.

    The minimization is a (j+1)x(j+1) Gram solve. It is carried out on the
    truncated window, so it stays well defined when some monomials leave the
    space; the minimizer then makes u + p decay.
    """
    if spec.m not in MULTI_INDICES:
        raise ValueError(f"quotient_norm supports m in 0..2, got {spec.m}")
    grid = u.grid
    uu = _bilinear(u, u, spec)
    basis = poly_basis(j)
    if not basis:
        return math.sqrt(max(uu, 0.0)), PolyElement([0.0])
    fields = [u.with_values(np.broadcast_to(p(grid.y2), grid.shape).copy(), f"poly:{i}")
              for i, p in enumerate(basis)]
    G = np.array([[_bilinear(a, b, spec) for b in fields] for a in fields])
    rhs = np.array([_bilinear(u, a, spec) for a in fields])
    # equilibrate before judging conditioning
    d = np.sqrt(np.diag(G))
    Gs = G / np.outer(d, d)
    cond = np.linalg.cond(Gs)
    if cond > GRAM_COND_MAX:
        raise ValueError(f"weighted Gram matrix is ill conditioned (cond {cond:.2e})")
    c = -np.linalg.solve(Gs, rhs / d) / d
    # evaluate the residual directly; expanding the quadratic form cancels badly
    resid = u.with_values(u.values + sum(ci * fi.values for ci, fi in zip(c, fields)), u.decay_class)
    return math.sqrt(max(_bilinear(resid, resid, spec), 0.0)), PolyElement(c)


def local_sobolev_norm(u: StripField, m: int, half_width: float = 1.0) -> float:
    """Unweighted H^m norm on (0,1) x (-half_width, half_width)."""
    grid = u.grid
    y = grid.y2
    mask = np.abs(y) <= half_width + 1e-12
    total = 0.0
    for order in range(m + 1):
        for lam in MULTI_INDICES[order]:
            g = (partial(u, *lam).values[:, mask] ** 2).mean(axis=0)
            total += float(simpson(g, x=y[mask]))
    return math.sqrt(total)


def x_space_norm(u: StripField, m: int, alpha_base: float, p: int) -> float:
    """Norm of X^{m+p}_{alpha+p}: sum over lambda <= p of ||y2^lambda u||^2 in H^{m+lambda}_alpha.

    For p >= 1 the local H^{m+p} norm on (0,1) x (-1,1) is added; at p = 0
    the space is H^m_alpha itself.
    """
    if alpha_base not in (-0.5, 0.5):
        raise ValueError("alpha_base must be -1/2 or 1/2")
    if p < 0 or p > 2 or m + p > 2:
        raise ValueError("x_space_norm needs 0 <= p and m + p <= 2")
    y = u.grid.y2
    total = 0.0
    for lam in range(p + 1):
        dp = parse_decay(u.decay_class)
        decay = "schwartz" if dp is None else f"poly:{dp + lam:g}"
        v = u.with_values(u.values * y[None, :] ** lam, decay)
        total += weighted_norm(v, WeightSpec(m + lam, alpha_base)).value ** 2
    if p >= 1:
        total += local_sobolev_norm(u, m + p) ** 2
    return math.sqrt(total)


# --- inequalities ----------------------------------------------------------------------

@dataclass(frozen=True)
class HardyResult:
    lhs: float
    rhs: float
    constant_used: float


def hardy_check(r: np.ndarray, f: np.ndarray, beta: float, R: float,
                require_vanishing: bool = True) -> HardyResult:
    """Both sides of the Hardy estimate on [R, r_max] for samples f(r) on a uniform grid.

    beta = -1 switches to the logarithmic form
    int f^2 / (r ln^2 r) <= (4/3)^2 int f'^2 r.
    """
    r = np.asarray(r, dtype=float)
    f = np.asarray(f, dtype=float)
    if abs(r[0] - R) > 1e-12 * max(1.0, R):
        raise ValueError("samples must start at r = R")
    if require_vanishing and abs(f[0]) > 1e-12 * max(1.0, float(np.max(np.abs(f)))):
        raise ValueError("f(R) must vanish")
    h = r[1] - r[0]
    fp = d_y2(f, h, 1)
    if f.size % 2 == 0:
        raise ValueError("use an odd number of samples")
    sw = simpson_weights(f.size, h)
    if beta == -1:
        if R <= 1.0:
            raise ValueError("the logarithmic form needs R > 1")
        C = (4.0 / 3.0) ** 2
        lhs = float(sw @ (f ** 2 / (r * np.log(r) ** 2)))
        rhs = C * float(sw @ (fp ** 2 * r))
    else:
        C = (2.0 / (beta + 1.0)) ** 2
        lhs = float(sw @ (f ** 2 * r ** beta))
        rhs = C * float(sw @ (fp ** 2 * r ** (beta + 2.0)))
    return HardyResult(lhs, rhs, C)


@dataclass(frozen=True)
class PoincareResult:
    lhs: float
    rhs: float
    d1_only: float


def poincare_wirtinger_check(u: StripField, alpha: float) -> PoincareResult:
    """||u - ubar||_{L^2_alpha} against |u|_{H^1_alpha} and against ||d1 u||_{L^2_alpha}."""
    w = WeightFunction(2.0 * alpha)
    osc = u.with_values(u.values - u.slice_mean()[None, :])
    lhs = integrate(_squared(osc), w).value
    d1 = integrate(_squared(partial(u, 1, 0)), w).value
    d2 = integrate(_squared(partial(u, 0, 1)), w).value
    return PoincareResult(math.sqrt(lhs), math.sqrt(d1 + d2), math.sqrt(d1))


# --- decay and errors --------------------------------------------------------------------

def slice_norms(u: StripField) -> np.ndarray:
    return np.sqrt((u.values ** 2).mean(axis=0))


def decay_fit(u: StripField, model: str, window: tuple[float, float]) -> tuple[float, float]:
    """Slope of ln ||u(., y2)|| against |y2| ('exp') or ln rho ('poly') on a <= |y2| <= b."""
    a, b = window
    y = u.grid.y2
    mask = (np.abs(y) >= a - 1e-12) & (np.abs(y) <= b + 1e-12)
    if not np.any(mask):
        raise ValueError("window contains no nodes")
    s = slice_norms(u)[mask]
    if np.any(s <= 0.0):
        raise ValueError("zero slice inside the fit window")
    if model == "exp":
        x = np.abs(y[mask])
    elif model == "poly":
        x = 0.5 * np.log1p(y[mask] ** 2)
    else:
        raise ValueError("model must be 'exp' or 'poly'")
    fit = stats.linregress(x, np.log(s))
    return float(fit.slope), float(fit.rvalue ** 2)


def l2_norm(values: np.ndarray, grid) -> float:
    sw = simpson_weights(grid.n2, grid.h2)
    return math.sqrt(max(float(sw @ (np.asarray(values) ** 2).mean(axis=0)), 0.0))


def relative_error_modulo(u: StripField, ref: np.ndarray, degree: int = -1) -> float:
    """min over p of degree <= degree in y2 of ||u - ref - p|| / ||ref||, grid L^2."""
    grid = u.grid
    diff = u.values - np.asarray(ref)
    if degree >= 0:
        sw = simpson_weights(grid.n2, grid.h2)
        A = np.vander(grid.y2, degree + 1, increasing=True)
        W = np.sqrt(sw)
        c, *_ = np.linalg.lstsq(A * W[:, None], diff.mean(axis=0) * W, rcond=None)
        diff = diff - (A @ c)[None, :]
    den = l2_norm(ref, grid)
    return l2_norm(diff, grid) / den if den > 0 else l2_norm(diff, grid)


def residual_error(u: StripField, f: StripField) -> float:
    """Relative L^2 misfit of the discrete -Lap u against f, away from the two end layers."""
    from .stripfield import laplacian

    r = -laplacian(u).values - f.values
    inner = slice(2, -2)
    num = np.sqrt(np.sum(r[:, inner] ** 2))
    den = np.sqrt(np.sum(f.values[:, inner] ** 2))
    return float(num / den) if den > 0 else float(num)


__all__ = [
    "NormValue", "weighted_norm", "quotient_norm", "x_space_norm", "local_sobolev_norm",
    "HardyResult", "hardy_check", "PoincareResult", "poincare_wirtinger_check",
    "slice_norms", "decay_fit", "relative_error_modulo", "residual_error", "l2_norm",
    "NonIntegrableError",
]
