"""Solvers for -Lap u = f on the periodic strip.

Three routes share the same grid and report type:

* per mode: horizontal FFT, then each row k != 0 is convolved in y2 with
  exp(-2 pi |k| |t|) / (4 pi |k|) and row 0 with -|t|/2;
* Green quadrature: direct discrete convolution with the closed-form kernel,
  Ewald-split so that the quadrature only ever sees a smooth kernel;
* constructive: Dirichlet solves on the two half-strips |y2| > R glued by an
  explicit single-layer lift of the derivative jumps.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.signal import lfilter

from . import green
from .mft import horizontal_inverse, horizontal_transform
from .stripfield import (ModeField, StripField, StripGrid, d_y2, fd_weights,
                         integrate, parse_decay)
from .weightspaces import PolyElement, WeightFunction

TWO_PI = 2.0 * math.pi
POLICIES = ("require_orthogonal", "project", "allow_growth")


class MomentViolation(ValueError):
    """Source is not orthogonal to the harmonic polynomials {1, y2}."""

    def __init__(self, moments, tol):
        self.moments = tuple(float(m) for m in moments)
        self.tol = float(tol)
        super().__init__(
            f"moments <f,1>={self.moments[0]:.3e}, <f,y2>={self.moments[1]:.3e} exceed tol {tol:.3e}")


class UndeclaredGrowth(ValueError):
    """Source decays too slowly for its moments to exist."""


class CostGuard(RuntimeError):
    """Quadratic-cost route refused for a grid above the configured budget."""


# --- exponential-kernel convolution -------------------------------------------------

_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)
_GL_T = 0.5 * (_GL_X + 1.0)
_GL_W = 0.5 * _GL_W

# cubic interpolation stencils for the cell between nodes j-1 and j, as offsets from j-1
_FIRST, _INNER, _LAST = (0, 1, 2, 3), (-1, 0, 1, 2), (-2, -1, 0, 1)


@lru_cache(maxsize=4096)
def _cell_weights(ah: float, offsets: tuple[int, ...]) -> np.ndarray:
    """w with int_0^1 exp(-ah (1 - t)) p(t) dt = sum_m w_m p(offsets[m]) for cubic p."""
    kern = np.exp(-ah * (1.0 - _GL_T)) * _GL_W
    out = np.empty(len(offsets))
    for m, om in enumerate(offsets):
        basis = np.ones_like(_GL_T)
        for o in offsets:
            if o != om:
                basis *= (_GL_T - o) / (om - o)
        out[m] = kern @ basis
    return out


def _cell_integrals(g: np.ndarray, h: float, a: float) -> np.ndarray:
    """int over cell [y_{j-1}, y_j] of exp(-a (y_j - s)) g(s) ds for j = 1..n-1."""
    n = g.shape[-1]
    if n < 4:
        raise ValueError("need at least 4 nodes for the cubic cell rule")
    out = np.empty(g.shape[:-1] + (n - 1,), dtype=g.dtype)
    ah = float(a * h)
    w = _cell_weights(ah, _INNER)
    acc = sum(c * g[..., 1 + o:n - 2 + o] for c, o in zip(w, _INNER))
    out[..., 1:n - 2] = acc
    for cell, offs in ((0, _FIRST), (n - 2, _LAST)):
        w = _cell_weights(ah, offs)
        out[..., cell] = sum(c * g[..., cell + o] for c, o in zip(w, offs))
    return h * out


def forward_accumulate(g: np.ndarray, h: float, a: float) -> np.ndarray:
    """F(y_j) = int_{y_0}^{y_j} exp(-a (y_j - s)) g(s) ds by a first-order recurrence."""
    cells = _cell_integrals(np.asarray(g), h, a)
    x = np.concatenate([np.zeros(cells.shape[:-1] + (1,), dtype=cells.dtype), cells], axis=-1)
    return lfilter([1.0], [1.0, -math.exp(-a * h)], x, axis=-1)


def backward_accumulate(g: np.ndarray, h: float, a: float) -> np.ndarray:
    return forward_accumulate(np.asarray(g)[..., ::-1], h, a)[..., ::-1]


def exp_convolve(g: np.ndarray, h: float, a: float) -> np.ndarray:
    """int exp(-a |y - s|) g(s) ds over the grid window, O(n) per row."""
    return forward_accumulate(g, h, a) + backward_accumulate(g, h, a)


def abs_convolve(g: np.ndarray, h: float) -> np.ndarray:
    """int |y - s| g(s) ds, as two nested cumulative integrals from each end."""
    fwd = forward_accumulate(forward_accumulate(g, h, 0.0), h, 0.0)
    bwd = backward_accumulate(backward_accumulate(g, h, 0.0), h, 0.0)
    return fwd + bwd


# --- reports -------------------------------------------------------------------------

@dataclass
class SolveReport:
    u: StripField
    method: str
    moments: tuple[float, float]
    representative: PolyElement
    norm_ratio: float | None = None
    policy: str | None = None
    tol_moment: float | None = None
    projection: tuple[float, float] = (0.0, 0.0)
    tail: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    def summary(self) -> dict:
        return {
            "method": self.method,
            "policy": self.policy,
            "moments": {"f_1": self.moments[0], "f_y2": self.moments[1]},
            "tol_moment": self.tol_moment,
            "projection": {"c_1": self.projection[0], "c_y2": self.projection[1]},
            "representative": self.representative.to_list(),
            "tail": dict(self.tail),
            "norm_ratio": self.norm_ratio,
            "decay_class": self.u.decay_class,
        }


@dataclass(frozen=True)
class JumpData:
    grid: StripGrid
    R: float
    h_plus: np.ndarray
    h_minus: np.ndarray

    @property
    def hbar_plus(self) -> float:
        return float(np.mean(self.h_plus))

    @property
    def hbar_minus(self) -> float:
        return float(np.mean(self.h_minus))


# --- moments and policies ------------------------------------------------------------

def moments(f: StripField) -> tuple[float, float]:
    """(<f, 1>, <f, y2>) by the grid quadrature."""
    y = f.grid.y2
    m0 = integrate(f).value
    m1 = integrate(f.with_values(f.values * y[None, :], "schwartz")).value
    return m0, m1


def default_tol_moment(f: StripField) -> float:
    """1e-8 times ||f||_{L^2_1}, the scale of the source space."""
    g = f.with_values(f.values ** 2, "schwartz")
    return 1e-8 * math.sqrt(max(integrate(g, WeightFunction(2.0)).value, 0.0))


def _check_decay(f: StripField) -> None:
    p = parse_decay(f.decay_class)
    if p is not None and p >= -2.0:
        raise UndeclaredGrowth(
            f"decay class {f.decay_class} has no first moment; the source must decay faster than |y2|^-2")


def _projection_profiles(y2: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    g = np.exp(-y2 ** 2) / math.sqrt(math.pi)
    return g, 2.0 * y2 * g


def project_moments(f: StripField) -> tuple[StripField, tuple[float, float]]:
    """Remove c0 g0 + c1 g1 (Gaussian profiles, constant in y1) so both discrete moments vanish."""
    y = f.grid.y2
    g0, g1 = _projection_profiles(y)
    prof = [f.with_values(np.broadcast_to(g, f.grid.shape).copy(), "schwartz") for g in (g0, g1)]
    A = np.array([moments(p) for p in prof]).T  # A[i, j] = moment i of profile j
    c = np.linalg.solve(A, np.array(moments(f)))
    vals = f.values - c[0] * g0[None, :] - c[1] * g1[None, :]
    return f.with_values(vals), (float(c[0]), float(c[1]))


def _growth_class(m0: float, m1: float, tol: float) -> str:
    if abs(m0) > tol:
        return "poly:1"
    if abs(m1) > tol:
        return "poly:0"
    return "schwartz"


def _normalize(u: np.ndarray, grid: StripGrid, normalize: str):
    if normalize == "decaying":
        return u, PolyElement([0.0])
    if normalize == "anchor":
        c = float(np.mean(u[:, grid.center]))
        return u - c, PolyElement([c])
    raise ValueError(f"unknown normalization {normalize!r}")


# --- per-mode route ------------------------------------------------------------------------

def _solve_row(k: int, row: np.ndarray, h: float) -> np.ndarray:
    if k == 0:
        return -0.5 * abs_convolve(row, h)
    a = TWO_PI * abs(k)
    return exp_convolve(row, h, a) / (2.0 * a)


def _map_rows(fn, ks, rows, workers):
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(fn, ks, rows))
    return [fn(k, r) for k, r in zip(ks, rows)]


def solve_per_mode(f: StripField, moment_policy: str = "require_orthogonal",
                   tol_moment: float | None = None, normalize: str = "decaying",
                   workers: int | None = None) -> SolveReport:
    """Per-mode Green convolution.

    Row 0 is the Green representation -1/2 int |y2 - s| f0(s) ds, which is
    the double integral of -f0 whose two constants make u decay whenever
    both moments vanish. Under allow_growth the far field is
    -(<f,1>/2)|y2| + (<f,y2>/2) sgn(y2), reported in ``tail``.
    """
    if moment_policy not in POLICIES:
        raise ValueError(f"moment_policy must be one of {POLICIES}")
    _check_decay(f)
    grid = f.grid
    m = moments(f)
    tol = default_tol_moment(f) if tol_moment is None else tol_moment
    proj = (0.0, 0.0)
    src = f
    if moment_policy == "require_orthogonal":
        if max(abs(m[0]), abs(m[1])) > tol:
            raise MomentViolation(m, tol)
    elif moment_policy == "project":
        src, proj = project_moments(f)
    F = horizontal_transform(src)
    h = grid.h2
    rows = _map_rows(lambda k, r: _solve_row(int(k), r, h), F.ks, list(F.modes), workers)
    U = ModeField(grid, np.array(rows))
    um = moments(src)
    decay = _growth_class(um[0], um[1], tol)
    u = horizontal_inverse(U, decay).values
    u, rep = _normalize(u, grid, normalize)
    tail = {"abs_y2_coefficient": -0.5 * um[0], "sign_y2_coefficient": 0.5 * um[1]}
    return SolveReport(StripField(grid, u, decay), "per_mode", m, rep, policy=moment_policy,
                       tol_moment=tol, projection=proj, tail=tail)


# --- Green quadrature route ------------------------------------------------------------------

def _apply_d2(rows: np.ndarray, h: float) -> np.ndarray:
    return d_y2(rows.real, h, 2) + 1j * d_y2(rows.imag, h, 2)


def solve_green_quadrature(f: StripField, tol_moment: float | None = None,
                           max_nodes: int = 200_000, ewald_s: float | None = None,
                           normalize: str = "decaying") -> SolveReport:
    """Discrete convolution of f with G, O((n1 n2)^2) work in the direct form.

    G is split into a smooth part Gs (trapezoid-summed on the grid, with the
    closed form supplying the values) and a short-range part whose action is
    applied through its symbol, expanded to second order in the vertical
    frequency.
    """
    grid = f.grid
    n1, n2 = grid.shape
    if n1 * n2 > max_nodes:
        raise CostGuard(f"grid has {n1 * n2} nodes; the quadrature budget is {max_nodes}")
    _check_decay(f)
    m = moments(f)
    tol = default_tol_moment(f) if tol_moment is None else tol_moment
    if max(abs(m[0]), abs(m[1])) > tol:
        raise MomentViolation(m, tol)
    h1, h2 = grid.h1, grid.h2
    s = ewald_s if ewald_s is not None else 1.6 * max(h1, h2)
    d = np.arange(-(n2 - 1), n2) * h2
    D1, D2 = np.meshgrid(grid.y1, d, indexing="ij")
    kernel = green.ewald_smooth(D1, D2, s)
    khat = np.fft.fft(kernel, axis=0)
    fhat = np.fft.fft(f.values, axis=0)
    smooth = np.empty_like(fhat)
    for r in range(n1):
        smooth[r] = np.convolve(khat[r], fhat[r], mode="valid")
    smooth *= h1 * h2
    # short-range part: symbol m(a + b), a = (2 pi k)^2, b <-> -d^2/dy2^2
    coeff = fhat / n1
    d2 = _apply_d2(coeff, h2)
    d4 = _apply_d2(d2, h2)
    near = np.empty_like(coeff)
    for r, k in enumerate(np.fft.fftfreq(n1, d=1.0 / n1)):
        m0, m1, m2 = green.near_symbol_derivatives((TWO_PI * k) ** 2, s, 3)
        near[r] = m0 * coeff[r] - m1 * d2[r] + 0.5 * m2 * d4[r]
    total = smooth / n1 + near
    u = np.fft.ifft(total * n1, axis=0).real
    u, rep = _normalize(u, grid, normalize)
    return SolveReport(StripField(grid, u, "schwartz"), "green_quadrature", m, rep,
                       policy="require_orthogonal", tol_moment=tol, extra={"ewald_s": s})


# --- constructive route ----------------------------------------------------------------------

def _upper_dirichlet_rows(rows: np.ndarray, ks: np.ndarray, h: float) -> np.ndarray:
    """Per-mode solves on [R, L] (rows start at y2 = R) with u(R) = 0, bounded at the top."""
    out = np.empty_like(rows)
    for r, k in enumerate(ks):
        g = rows[r]
        if k == 0:
            cum = forward_accumulate(g, h, 0.0)
            total = cum[-1]
            y = np.arange(g.shape[-1]) * h
            out[r] = y * total - forward_accumulate(cum, h, 0.0)
            continue
        a = TWO_PI * abs(k)
        fwd = forward_accumulate(g, h, a)
        bwd = backward_accumulate(g, h, a)
        y = np.arange(g.shape[-1]) * h
        out[r] = (fwd + bwd - np.exp(-a * y) * bwd[0]) / (2.0 * a)
    return out


def solve_half_strip_dirichlet(f: StripField, R: float, side: str) -> StripField:
    """Solve -Lap u = f on the half-strip beyond y2 = +R (above) or -R (below), u = 0 on the interface.

    Mode k != 0 uses the image kernel (exp(-a|y-s|) - exp(-a(y+s-2R))) / (2a);
    mode 0 uses u0(y) = int_R^y int_t^inf f0, bounded at infinity. The field is
    zero on the other side of the interface.
    """
    grid = f.grid
    if side not in ("above", "below"):
        raise ValueError("side must be 'above' or 'below'")
    if R <= 0:
        raise ValueError("R must be positive")
    jR = grid.node_index(R)
    vals = f.values if side == "above" else f.values[:, ::-1]
    F = horizontal_transform(StripField(grid, vals, f.decay_class))
    sub = F.modes[:, jR:]
    if sub.shape[1] < 4:
        raise ValueError("interface too close to the top of the grid")
    solved = _upper_dirichlet_rows(sub, F.ks, grid.h2)
    modes = np.zeros_like(F.modes)
    modes[:, jR:] = solved
    u = horizontal_inverse(ModeField(grid, modes), "poly:0").values.copy()
    u[:, :jR] = 0.0
    if side == "below":
        u = u[:, ::-1]
    return StripField(grid, u, "poly:0")


def _one_sided_d1(values: np.ndarray, j: int, h: float, direction: int) -> np.ndarray:
    offs = tuple(direction * o for o in range(5))
    w = fd_weights(offs, 1)
    return sum(c * values[:, j + o] for c, o in zip(w, offs)) / h


def extract_jump(u_above: StripField, u_below: StripField, R: float) -> JumpData:
    """[d u / d y2] = (limit from above) - (limit from below) at y2 = R and y2 = -R.

    u_above supplies the one-sided derivative from above at each interface,
    u_below the one from below.
    """
    grid = u_above.grid
    jp, jm = grid.node_index(R), grid.node_index(-R)
    if jm < 4 or jp + 4 > grid.n2 - 1 or jp - jm < 4:
        raise ValueError("need four nodes on each side of both interfaces")
    h = grid.h2
    hp = _one_sided_d1(u_above.values, jp, h, +1) - _one_sided_d1(u_below.values, jp, h, -1)
    hm = _one_sided_d1(u_above.values, jm, h, +1) - _one_sided_d1(u_below.values, jm, h, -1)
    return JumpData(grid, float(R), hp, hm)


def jump_lift(j: JumpData) -> StripField:
    """w = G * (h+ delta_{y2=R} + h- delta_{y2=-R}); its derivative jump is -h at each interface."""
    grid = j.grid
    n1 = grid.n1
    y = grid.y2
    modes = np.zeros((n1, grid.n2), dtype=complex)
    hat_p = np.fft.fftshift(np.fft.fft(j.h_plus)) / n1
    hat_m = np.fft.fftshift(np.fft.fft(j.h_minus)) / n1
    for r, k in enumerate(range(-n1 // 2, n1 // 2)):
        if k == 0:
            modes[r] = hat_p[r] * green.mean_kernel(y - j.R) + hat_m[r] * green.mean_kernel(y + j.R)
        else:
            modes[r] = hat_p[r] * green.mode_kernel(k, y - j.R) + hat_m[r] * green.mode_kernel(k, y + j.R)
    net = j.hbar_plus + j.hbar_minus
    decay = "poly:1" if abs(net) > 1e-12 * max(1.0, abs(j.hbar_plus)) else "poly:0"
    return horizontal_inverse(ModeField(grid, modes), decay)


def solve_constructive(f: StripField, R: float, support_tol: float = 1e-12) -> SolveReport:
    """u = u0 + w: half-strip Dirichlet solves, zero in |y2| < R, plus the jump lift."""
    grid = f.grid
    y = grid.y2
    inner = np.abs(y) <= R + 1e-12
    scale = max(float(np.max(np.abs(f.values))), 1e-300)
    if np.max(np.abs(f.values[:, inner])) > support_tol * scale:
        raise ValueError("the constructive route needs f = 0 on |y2| <= R")
    m = moments(f)
    u0 = solve_half_strip_dirichlet(f, R, "above") + solve_half_strip_dirichlet(f, R, "below")
    jumps = extract_jump(u0, u0, R)
    w = jump_lift(jumps)
    u = u0 + w
    extra = {"R": R, "hbar_plus": jumps.hbar_plus, "hbar_minus": jumps.hbar_minus,
             "jumps": jumps, "u0": u0, "lift": w}
    return SolveReport(u, "constructive", m, PolyElement([0.0]), policy="allow_growth",
                       extra=extra)
