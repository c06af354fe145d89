"""Acceptance bundles: each returns a list of Check records with measured values."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import hermite_e

from . import green
from .diagnostics import (decay_fit, hardy_check, poincare_wirtinger_check,
                          relative_error_modulo, weighted_norm)
from .presets import (BUMP_SUITE, EQUIVALENCE_SUITE, SUITE_12, bump, get_preset)
from .solver import (extract_jump, solve_constructive, solve_green_quadrature,
                     solve_per_mode)
from .stripfield import StripField, StripGrid, laplacian, sample
from .weightspaces import WeightSpec, compute_q, monomial_in_space, poly_basis

TWO_PI = 2.0 * math.pi


@dataclass
class Check:
    name: str
    passed: bool
    measured: float
    threshold: float
    detail: str = ""
    extra: dict = field(default_factory=dict)

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] {self.name}: measured={self.measured:.6g} threshold={self.threshold:.6g} {self.detail}".rstrip()


# --- polynomial-space table ---------------------------------------------------------------------------------

TABLE1_COLUMNS = ((-2.5, -1.5), (-1.5, -0.5), (-0.5, 0.5), (0.5, 1.5))
# degree of the largest polynomial space per cell, -1 for {0}
TABLE1 = {0: (1, 0, -1, -1), 1: (2, 1, 0, -1), 2: (3, 2, 1, 0)}


def table1_cells() -> list[Check]:
    checks = []
    for m, row in TABLE1.items():
        for (a, b), expected in zip(TABLE1_COLUMNS, row):
            probes = [a + 0.05, a + 0.25, 0.5 * (a + b), b - 0.25, b - 0.05]
            got = [max(compute_q(m, x), -1) for x in probes]
            bad = sum(g != expected for g in got)
            checks.append(Check(f"table1 m={m} alpha in [{a},{b})", bad == 0, bad, 0,
                                f"q={got[2]} expected={expected}"))
    return checks


def table1_oracle(alphas=None, degrees=range(5)) -> list[Check]:
    """compute_q against the integrability oracle at interval endpoints and midpoints."""
    if alphas is None:
        alphas = sorted({x for ab in TABLE1_COLUMNS for x in ab} | {0.5 * (a + b) for a, b in TABLE1_COLUMNS})
    checks = []
    for m in TABLE1:
        for alpha in alphas:
            q = compute_q(m, alpha)
            mism = [d for d in degrees if monomial_in_space(m, alpha, d) != (d <= q)]
            checks.append(Check(f"oracle m={m} alpha={alpha:g}", not mism, len(mism), 0,
                                f"q={q}" + (f" mismatched degrees {mism}" if mism else "")))
    return checks


def criterion_table1() -> list[Check]:
    cells = table1_cells()
    matched = sum(c.passed for c in cells)
    oracle = table1_oracle()
    agree = sum(c.passed for c in oracle)
    return [Check("C1 polynomial-space table cells matched", matched == 12, matched, 12, "of 12"),
            Check("C1 integrability oracle agreement", agree == len(oracle), agree, len(oracle),
                  f"of {len(oracle)} (m, alpha) probes")]


# --- Green function ------------------------------------------------------------------------

def criterion_green(seed: int = 7) -> list[Check]:
    rng = np.random.default_rng(seed)
    y1 = rng.uniform(0.0, 1.0, 1000)
    y2 = rng.uniform(0.25, 3.0, 1000) * rng.choice([-1.0, 1.0], 1000)
    err = max(abs(green.green_series(a, b, 20) - green.green_closed(a, b).value) for a, b in zip(y1, y2))
    out = [Check("C2a series K=20 vs closed form", err <= 1e-12, err, 1e-12, "1000 random points, |y2| >= 1/4")]
    for name in BUMP_SUITE:
        p = get_preset(name)
        val = green.delta_reproduction(p.neg_laplacian)
        e = abs(val - p.value_at_origin)
        out.append(Check(f"C2b delta reproduction {name}", e <= 1e-4, e, 1e-4))
    y = np.linspace(2.0, 6.0, 81)
    slope = np.polyfit(y, np.log(np.abs(green.green_d22(0.5, y))), 1)[0]
    rel = abs(slope / -TWO_PI - 1.0)
    out.append(Check("C2c d22 G decay slope at y1=1/2", rel <= 0.01, slope, -TWO_PI, f"relative deviation {rel:.2e}"))
    a = rng.uniform(0.0, 1.0, 1000)
    b = rng.uniform(-3.0, 3.0, 1000)
    g = green.green_values(a, b)
    ev = float(max(np.max(np.abs(g - green.green_values(1.0 - a, b))),
                   np.max(np.abs(g - green.green_values(a, -b)))))
    out.append(Check("C2d evenness", ev <= 1e-14, ev, 1e-14))
    return out


# --- solver ----------------------------------------------------------------------------------

def manufactured_error(n2: int, n1: int = 32, L: float = 8.0, name: str = "manufactured_mode1") -> float:
    grid = StripGrid(n1, L, n2)
    rep = solve_per_mode(sample(name, grid))
    Y1, Y2 = grid.mesh()
    return relative_error_modulo(rep.u, get_preset(name).exact_u(Y1, Y2), 0)


def criterion_manufactured() -> list[Check]:
    e1 = manufactured_error(1025)
    e2 = manufactured_error(2049)
    ratio = e1 / e2
    floor = e2 <= 1e-10
    return [Check("C3 manufactured error at (32, 8, 1025)", e1 <= 1e-6, e1, 1e-6),
            Check("C3 error reduction when n2 doubles", ratio >= 8.0 or floor, ratio, 8.0,
                  f"e(2049)={e2:.3e}")]


def criterion_equivalence(grid: StripGrid | None = None) -> list[Check]:
    grid = grid or StripGrid(16, 6.0, 385)
    out = []
    for name in EQUIVALENCE_SUITE:
        f = sample(name, grid)
        a = solve_per_mode(f).u
        b = solve_green_quadrature(f).u
        e = relative_error_modulo(b, a.values, 1)
        out.append(Check(f"C4 per-mode vs Green quadrature {name}", e <= 1e-5, e, 1e-5))
    return out


def _far_slope(u: StripField, lo: float, hi: float) -> tuple[float, float]:
    y = u.grid.y2
    m = u.slice_mean()
    up = (y >= lo) & (y <= hi)
    dn = (y <= -lo) & (y >= -hi)
    return float(np.polyfit(y[up], m[up], 1)[0]), float(np.polyfit(-y[dn], m[dn], 1)[0])


def criterion_dichotomy(grid: StripGrid | None = None) -> list[Check]:
    grid = grid or StripGrid(16, 12.0, 1537)
    out = []
    rep = solve_per_mode(sample("mass_gaussian", grid), "allow_growth")
    expected = -rep.moments[0] / 2.0
    sp, sn = _far_slope(rep.u, 4.0, 11.0)
    dev = max(abs(sp / expected - 1.0), abs(sn / expected - 1.0))
    out.append(Check("C5 linear growth slope for <f,1> != 0", dev <= 0.02, sp, expected,
                     f"slope in |y2| above/below {sp:.6f}/{sn:.6f}"))
    rep = solve_per_mode(sample("first_moment", grid), "allow_growth")
    sp, sn = _far_slope(rep.u, 4.0, 11.0)
    worst = max(abs(sp), abs(sn))
    out.append(Check("C5 bounded far field for <f,1> = 0 != <f,y2>", worst <= 1e-3, worst, 1e-3,
                     f"limits {rep.u.slice_mean()[-1]:.6f}, {rep.u.slice_mean()[0]:.6f}"))
    rep = solve_per_mode(sample("dipole_pair", grid), "allow_growth")
    rate, r2 = decay_fit(rep.u, "exp", (2.0, 6.0))
    bound = -TWO_PI * 0.95
    out.append(Check("C5 exponential decay for vanishing moments", rate <= bound, rate, bound,
                     f"r^2={r2:.6f}"))
    return out


def criterion_constructive(grid: StripGrid | None = None, R: float = 1.0) -> list[Check]:
    grid = grid or StripGrid(16, 8.0, 1025)
    f = sample("split_bumps", grid)
    rep = solve_constructive(f, R)
    s = rep.extra["hbar_plus"] + rep.extra["hbar_minus"]
    direct = solve_per_mode(f, "allow_growth").u
    e = relative_error_modulo(rep.u, direct.values, 0)
    jumps = rep.extra["jumps"]
    w = rep.extra["lift"]
    back = extract_jump(w, w, R)
    jerr = float(max(np.max(np.abs(back.h_plus + jumps.h_plus)), np.max(np.abs(back.h_minus + jumps.h_minus))))
    scale = float(max(np.max(np.abs(jumps.h_plus)), np.max(np.abs(jumps.h_minus))))
    jtol = grid.h2 ** 4 * scale
    return [Check("C6a hbar_plus + hbar_minus", abs(s) <= 1e-6, abs(s), 1e-6,
                  f"hbar_plus={rep.extra['hbar_plus']:.6f}"),
            Check("C6b u0 + lift vs per-mode modulo constants", e <= 1e-4, e, 1e-4),
            Check("C6c jump of the lift equals -h", jerr <= jtol, jerr, jtol, "h2^4 * max|h|")]


# --- inequalities ----------------------------------------------------------------------------

def random_hardy_sample(rng: np.random.Generator, R: float = 2.0, width: float = 10.0, n: int = 2001):
    r = np.linspace(R, R + width, n)
    mu = rng.uniform(R + 1.0, R + width - 1.0)
    sigma = rng.uniform(0.5, 3.0)
    coeffs = rng.normal(size=6)
    x = (r - mu) / sigma
    window = bump((r - (R + width / 2.0)) / (width / 2.0))
    return r, window * hermite_e.hermeval(x, coeffs) * np.exp(-x * x / 2.0)


def random_band_limited(rng: np.random.Generator, grid: StripGrid, kmax: int = 5) -> StripField:
    Y1, Y2 = grid.mesh()
    vals = np.zeros(grid.shape)
    for k in range(kmax + 1):
        a, b = rng.normal(size=2)
        mu = rng.uniform(-2.0, 2.0)
        sigma = rng.uniform(0.4, 1.5)
        prof = np.exp(-(Y2 - mu) ** 2 / (2 * sigma ** 2))
        vals += (a * np.cos(TWO_PI * k * Y1) + b * np.sin(TWO_PI * k * Y1)) * prof
    return StripField(grid, vals)


def criterion_inequalities(n_samples: int = 100, seed: int = 11) -> list[Check]:
    rng = np.random.default_rng(seed)
    out = []
    for beta in (-2.0, 0.0, 1.0, -1.0):
        bad = 0
        worst = 0.0
        for _ in range(n_samples):
            r, f = random_hardy_sample(rng)
            res = hardy_check(r, f, beta, r[0])
            worst = max(worst, res.lhs / res.rhs)
            bad += res.lhs > res.rhs
        label = "log form beta=-1" if beta == -1 else f"beta={beta:g}"
        out.append(Check(f"C7 Hardy {label}", bad == 0, bad, 0, f"max lhs/rhs={worst:.4f}"))
    grid = StripGrid(32, 8.0, 513)
    for alpha in (-1.0, 0.0, 1.0):
        bad = 0
        worst = 0.0
        for _ in range(n_samples):
            res = poincare_wirtinger_check(random_band_limited(rng, grid), alpha)
            worst = max(worst, res.lhs / res.d1_only)
            bad += res.lhs > res.d1_only
        out.append(Check(f"C7 Poincare-Wirtinger alpha={alpha:g}", bad == 0, bad, 0,
                         f"max lhs/||d1 u||={worst:.4f}"))
    return out


# --- kernel and norm ratio -----------------------------------------------------------------

def criterion_kernel(grid: StripGrid | None = None) -> list[Check]:
    grid = grid or StripGrid(16, 8.0, 1025)
    rep = solve_per_mode(sample("zero", grid), "allow_growth")
    A = np.stack([np.ones(grid.n2), grid.y2], axis=1)
    coef, *_ = np.linalg.lstsq(A, rep.u.slice_mean(), rcond=None)
    resid = float(np.max(np.abs(rep.u.values - (A @ coef)[None, :])))
    worst = max(resid, float(np.max(np.abs(coef))))
    out = [Check("C8 zero source gives an element of span{1,y2}", worst <= 1e-10, worst, 1e-10,
                 f"coefficients {coef.tolist()}")]
    Y1, Y2 = grid.mesh()
    lap_h = max(float(np.max(np.abs(laplacian(StripField(grid, p(Y2), "poly:1")).values[:, 2:-2])))
                for p in poly_basis(1, True))
    out.append(Check("C8 discrete Laplacian of 1 and y2", lap_h <= 1e-10, lap_h, 1e-10))
    lap2 = laplacian(sample("y2_squared", grid)).values[:, 2:-2]
    dev = float(np.max(np.abs(lap2 - 2.0)))
    out.append(Check("C8 discrete Laplacian of y2^2 equals 2", dev == 0.0, dev, 0.0,
                     "y2^2 is not discretely harmonic"))
    return out


def norm_ratios(grid: StripGrid, names=SUITE_12) -> dict[str, float]:
    target, source = WeightSpec(2, 1.0), WeightSpec(0, 1.0)
    out = {}
    for name in names:
        f = sample(name, grid)
        u = solve_per_mode(f, "allow_growth").u
        out[name] = weighted_norm(u, target).value / weighted_norm(f, source).value
    return out


def criterion_norm_ratio(n1: int = 16, L: float = 8.0, n2: int = 513) -> list[Check]:
    coarse = norm_ratios(StripGrid(n1, L, n2))
    fine = norm_ratios(StripGrid(n1, L, 2 * n2 - 1))
    spread = max(coarse.values()) / min(coarse.values())
    change = max(abs(fine[k] / coarse[k] - 1.0) for k in coarse)
    return [Check("C9 max/min of ||u||_X2 / ||f||_L2_1 over 12 presets", spread <= 1e3, spread, 1e3),
            Check("C9 ratio change under n2 doubling", change <= 0.05, change, 0.05)]


SUITES = {
    "table1": [criterion_table1],
    "green": [criterion_green],
    "manufactured": [criterion_manufactured],
    "solver_equivalence": [criterion_equivalence],
    "dichotomy": [criterion_dichotomy],
    "constructive": [criterion_constructive],
    "inequalities": [criterion_inequalities],
    "kernel": [criterion_kernel],
    "norm_ratio": [criterion_norm_ratio],
}
SUITES["all"] = [fn for key in list(SUITES) for fn in SUITES[key]]


def run_suite(name: str, echo=print) -> tuple[bool, list[Check]]:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; known: {sorted(SUITES)}")
    results = []
    for fn in SUITES[name]:
        t0 = time.perf_counter()
        checks = fn()
        dt = time.perf_counter() - t0
        for c in checks:
            c.extra["seconds"] = dt
            echo(c.line())
        results.extend(checks)
    passed = sum(c.passed for c in results)
    echo(f"{name}: {passed}/{len(results)} checks passed")
    return passed == len(results), results
