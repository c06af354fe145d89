"""Discretization of the periodic strip Z = (0,1) x R.

Horizontal nodes are y1 = i/n1 (periodic, spectral in y1); vertical nodes
are uniform on [-L, L] with n2 odd so that y2 = 0 is a node.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np
from scipy import integrate as _spi

from .weightspaces import WeightFunction


class NonIntegrableError(ValueError):
    """Declared decay of the integrand is not integrable at infinity."""


@dataclass(frozen=True)
class StripGrid:
    n1: int
    L: float
    n2: int

    def __post_init__(self):
        if self.n1 < 4 or self.n1 & (self.n1 - 1):
            raise ValueError(f"n1 must be a power of two >= 4, got {self.n1}")
        if not self.L > 0:
            raise ValueError("L must be positive")
        if self.n2 < 9 or self.n2 % 2 == 0:
            raise ValueError(f"n2 must be odd and >= 9, got {self.n2}")

    @property
    def h1(self) -> float:
        return 1.0 / self.n1

    @property
    def h2(self) -> float:
        return 2.0 * self.L / (self.n2 - 1)

    @property
    def y1(self) -> np.ndarray:
        return np.arange(self.n1) / self.n1

    @property
    def y2(self) -> np.ndarray:
        return -self.L + np.arange(self.n2) * self.h2

    @property
    def center(self) -> int:
        return (self.n2 - 1) // 2

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n1, self.n2)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.y1, self.y2, indexing="ij")

    def node_index(self, y2: float) -> int:
        j = (y2 + self.L) / self.h2
        if abs(j - round(j)) > 1e-9 or not 0 <= round(j) < self.n2:
            raise ValueError(f"y2={y2} is not a grid node")
        return int(round(j))


def parse_decay(decay_class: str) -> float | None:
    """Growth exponent p of a 'poly:p' tag (|f| ~ |y2|**p); None for schwartz."""
    if decay_class == "schwartz":
        return None
    if decay_class == "poly_plus_linear":
        return 1.0
    if decay_class.startswith("poly:"):
        return float(decay_class.split(":", 1)[1])
    raise ValueError(f"unknown decay class {decay_class!r}")


def decay_tag(p: float | None) -> str:
    return "schwartz" if p is None else f"poly:{p:g}"


@dataclass(frozen=True)
class StripField:
    grid: StripGrid
    values: np.ndarray
    decay_class: str = "schwartz"

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != self.grid.shape:
            raise ValueError(f"values shape {v.shape} does not match grid {self.grid.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("field values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        parse_decay(self.decay_class)

    def with_values(self, values, decay_class: str | None = None) -> "StripField":
        return StripField(self.grid, values, decay_class or self.decay_class)

    def __add__(self, other: "StripField") -> "StripField":
        return StripField(self.grid, self.values + other.values,
                          _wider(self.decay_class, other.decay_class))

    def __sub__(self, other: "StripField") -> "StripField":
        return StripField(self.grid, self.values - other.values,
                          _wider(self.decay_class, other.decay_class))

    def __neg__(self) -> "StripField":
        return StripField(self.grid, -self.values, self.decay_class)

    def __mul__(self, c: float) -> "StripField":
        return StripField(self.grid, c * self.values, self.decay_class)

    __rmul__ = __mul__

    def slice_mean(self) -> np.ndarray:
        """Horizontal average as a function of y2."""
        return self.values.mean(axis=0)


def _wider(a: str, b: str) -> str:
    pa, pb = parse_decay(a), parse_decay(b)
    if pa is None:
        return b
    if pb is None:
        return a
    return decay_tag(max(pa, pb))


@dataclass(frozen=True)
class ModeField:
    """Horizontal Fourier coefficients; row r holds mode k = r - n1/2."""

    grid: StripGrid
    modes: np.ndarray

    @property
    def ks(self) -> np.ndarray:
        n1 = self.grid.n1
        return np.arange(-n1 // 2, n1 // 2)

    def row(self, k: int) -> np.ndarray:
        return self.modes[k + self.grid.n1 // 2]


# --- quadrature --------------------------------------------------------------

@dataclass(frozen=True)
class QuadResult:
    value: float
    tail: float


def simpson_weights(n: int, h: float) -> np.ndarray:
    """Composite Simpson weights for an odd number of uniform nodes."""
    if n % 2 == 0:
        raise ValueError("Simpson weights need an odd node count")
    w = np.ones(n)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w * h / 3.0


def _tail_side(g_end: float, L: float, s: float, log_power: int) -> float:
    # g ~ C y**s ln(y)**b near infinity with b = log_power; returns int_L^inf
    if g_end == 0.0:
        return 0.0
    if s < -1.0:
        return g_end * L / (-s - 1.0)
    if s == -1.0 and log_power < -1:
        return g_end * L * math.log(L) / (-log_power - 1.0)
    raise NonIntegrableError(
        f"integrand ~ |y2|^{s:g} ln^{log_power} is not integrable at infinity")


def integrate(f: StripField, w: WeightFunction | None = None) -> QuadResult:
    """Integral of f * w over the truncated strip with a tail estimate.

    The y1 average is the trapezoid rule (exact for resolved periodic
    modes); y2 uses composite Simpson. The tail estimate assumes the declared
    decay class: exponential decay with unit length for 'schwartz', a power
    law |f| ~ |y2|**p otherwise.
    """
    grid = f.grid
    vals = f.values
    if w is not None:
        vals = vals * w(grid.y2)[None, :]
    g = vals.mean(axis=0)
    value = float(simpson_weights(grid.n2, grid.h2) @ g)
    ends = (abs(g[0]), abs(g[-1]))
    p = parse_decay(f.decay_class)
    if p is None:
        tail = sum(ends)
    else:
        s = p + (w.alpha if w is not None else 0.0)
        lp = w.log_power if w is not None else 0
        tail = sum(_tail_side(e, grid.L, s, lp) for e in ends)
    return QuadResult(value, float(tail))


def integrate_window(values: np.ndarray, grid: StripGrid, a: float, b: float) -> float:
    """Integral over (0,1) x [a, b] of a sampled field (Simpson in y2)."""
    y2 = grid.y2
    mask = (y2 >= a - 1e-12) & (y2 <= b + 1e-12)
    g = np.asarray(values)[:, mask].mean(axis=0)
    return float(_spi.simpson(g, x=y2[mask]))


# --- differentiation -----------------------------------------------------------

@lru_cache(maxsize=None)
def fd_weights(offsets: tuple[int, ...], order: int) -> np.ndarray:
    """Finite-difference weights (unit spacing) for the given stencil offsets."""
    n = len(offsets)
    V = np.vander(np.asarray(offsets, dtype=float), n, increasing=True).T
    rhs = np.zeros(n)
    rhs[order] = math.factorial(order)
    return np.linalg.solve(V, rhs)


# interior stencils as integer numerators over a common denominator so that
# low-degree polynomials are differentiated exactly on dyadic grids
_CENTERED = {
    1: ((-2, -1, 0, 1, 2), (1, -8, 0, 8, -1), 12),
    2: ((-2, -1, 0, 1, 2), (-1, 16, -30, 16, -1), 12),
}
# one-sided stencils keep fourth order: 5 points for d/dy, 6 for d2/dy2. They
# are also integer numerators over 12, so constants differentiate to exact zero
_ONE_SIDED = {
    1: [((0, 1, 2, 3, 4), (-25, 48, -36, 16, -3)),
        ((-1, 0, 1, 2, 3), (-3, -10, 18, -6, 1))],
    2: [((0, 1, 2, 3, 4, 5), (45, -154, 214, -156, 61, -10)),
        ((-1, 0, 1, 2, 3, 4), (10, -15, -4, 14, -6, 1))],
}
_ONE_SIDED_DEN = 12


def d_y2(values: np.ndarray, h: float, order: int) -> np.ndarray:
    """Fourth-order finite-difference derivative along the last axis."""
    v = np.asarray(values, dtype=float)
    n = v.shape[-1]
    out = np.empty_like(v)
    offs, nums, den = _CENTERED[order]
    # every stencil sums to zero, so differences against one node are used:
    # constants then give exactly zero whatever their binary expansion
    base = v[..., 2:-2]
    acc = np.zeros(base.shape)
    for c, off in zip(nums, offs):
        if c and off:
            acc = acc + c * (v[..., 2 + off:n - 2 + off] - base)
    out[..., 2:-2] = acc / (den * h ** order)
    scale = _ONE_SIDED_DEN * h ** order
    for j, (offs, nums) in enumerate(_ONE_SIDED[order]):
        out[..., j] = sum(c * (v[..., j + o] - v[..., j]) for c, o in zip(nums, offs)) / scale
        # mirrored stencil: offsets flip sign, odd derivatives flip sign too
        sgn = (-1) ** order
        k = n - 1 - j
        out[..., k] = sgn * sum(c * (v[..., k - o] - v[..., k]) for c, o in zip(nums, offs)) / scale
    return out


def d_y1(values: np.ndarray, order: int) -> np.ndarray:
    """Spectral y1-derivative; the Nyquist mode is dropped for odd orders."""
    n1 = values.shape[0]
    k = np.fft.fftfreq(n1, d=1.0 / n1)
    symbol = (2j * np.pi * k) ** order
    if order % 2 == 1:
        symbol[n1 // 2] = 0.0
    return np.real(np.fft.ifft(symbol[:, None] * np.fft.fft(values, axis=0), axis=0))


def _derived_decay(decay_class: str, direction: str, order: int) -> str:
    p = parse_decay(decay_class)
    if p is None:
        return "schwartz"
    if direction == "y1":
        # polynomial tails depend on y2 only
        return "schwartz"
    return decay_tag(p - order)


def differentiate(f: StripField, direction: str, order: int = 1) -> StripField:
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    if direction == "y1":
        vals = d_y1(f.values, order)
    elif direction == "y2":
        vals = d_y2(f.values, f.grid.h2, order)
    else:
        raise ValueError(f"direction must be 'y1' or 'y2', got {direction!r}")
    return StripField(f.grid, vals, _derived_decay(f.decay_class, direction, order))


def partial(f: StripField, n1: int, n2: int) -> StripField:
    """Mixed derivative d^n1/dy1^n1 d^n2/dy2^n2 (total order <= 2 per axis)."""
    out = f
    if n1:
        out = differentiate(out, "y1", n1)
    if n2:
        out = differentiate(out, "y2", n2)
    return out


def laplacian(f: StripField) -> StripField:
    v = d_y1(f.values, 2) + d_y2(f.values, f.grid.h2, 2)
    p = parse_decay(f.decay_class)
    return StripField(f.grid, v, "schwartz" if p is None else decay_tag(p - 2))


# --- sampling and tables --------------------------------------------------------

def sample(source, grid: StripGrid, **params) -> StripField:
    """Sample a registered preset (by name) or read a tabulated CSV file."""
    from .presets import get_preset

    if isinstance(source, (str, Path)) and str(source).endswith(".csv"):
        return read_table(source, grid)
    preset = get_preset(str(source))
    Y1, Y2 = grid.mesh()
    return StripField(grid, preset.f(Y1, Y2, **params), preset.decay_class)


TABLE_HEADER = ("y1_index", "y2_index", "value")


def write_table(f: StripField, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(table_text(f))


def table_text(f: StripField) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TABLE_HEADER)
    n1, n2 = f.grid.shape
    for i in range(n1):
        for j in range(n2):
            # repr gives the shortest round-trip decimal for binary64
            w.writerow((i, j, repr(float(f.values[i, j]))))
    return buf.getvalue()


def read_table(path, grid: StripGrid, decay_class: str = "schwartz") -> StripField:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header != TABLE_HEADER:
            raise ValueError(f"bad table header {header}")
        rows = list(reader)
    n1, n2 = grid.shape
    if len(rows) != n1 * n2:
        raise ValueError(f"table has {len(rows)} rows, grid needs {n1 * n2}")
    values = np.empty((n1, n2))
    for r, (i, j, v) in enumerate(rows):
        i, j = int(i), int(j)
        if (i, j) != divmod(r, n2):
            raise ValueError(f"table row {r} has indices ({i},{j}); expected row-major order")
        values[i, j] = float(v)
    return StripField(grid, values, decay_class)
