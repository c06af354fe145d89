"""Registry of analytic source fields on the strip.

Each preset maps node coordinates (Y1, Y2) to values. Manufactured presets
also carry the exact solution of -Lap u = f; the compact bumps used for the
Dirac test carry their exact -Lap.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

TWO_PI = 2.0 * np.pi
SQRT_PI = np.sqrt(np.pi)


@dataclass(frozen=True)
class Preset:
    name: str
    f: Callable
    decay_class: str = "schwartz"
    exact_u: Optional[Callable] = None
    neg_laplacian: Optional[Callable] = None
    value_at_origin: Optional[float] = None
    moments: Optional[tuple[float, float]] = None
    description: str = ""


def wrap(y1):
    """Periodic representative of y1 in [-1/2, 1/2)."""
    return (np.asarray(y1) + 0.5) % 1.0 - 0.5


def bump(t):
    """C-infinity bump exp(1 - 1/(1-t^2)) on |t| < 1, equal to 1 at t = 0."""
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    inside = np.abs(t) < 1.0
    s = 1.0 - t[inside] ** 2
    out[inside] = np.exp(1.0 - 1.0 / s)
    return out


def bump_d1(t):
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    inside = np.abs(t) < 1.0
    ti = t[inside]
    s = 1.0 - ti ** 2
    out[inside] = -2.0 * ti * np.exp(1.0 - 1.0 / s) / s ** 2
    return out


def bump_d2(t):
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    inside = np.abs(t) < 1.0
    ti = t[inside]
    s = 1.0 - ti ** 2
    b = np.exp(1.0 - 1.0 / s)
    out[inside] = b * (-2.0 / s ** 2 + 4.0 * ti ** 2 / s ** 4 - 8.0 * ti ** 2 / s ** 3)
    return out


def _bump_over_t(t):
    # b'(t)/t, finite at t = 0
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    inside = np.abs(t) < 1.0
    s = 1.0 - t[inside] ** 2
    out[inside] = -2.0 * np.exp(1.0 - 1.0 / s) / s ** 2
    return out


def _radial_bump(a):
    def f(Y1, Y2):
        return bump(np.hypot(wrap(Y1), Y2) / a)

    def neg_lap(Y1, Y2):
        t = np.hypot(wrap(Y1), Y2) / a
        return -(bump_d2(t) + _bump_over_t(t)) / a ** 2

    return f, neg_lap


def _box_bump(a1, a2):
    def f(Y1, Y2):
        return bump(wrap(Y1) / a1) * bump(Y2 / a2)

    def neg_lap(Y1, Y2):
        t1, t2 = wrap(Y1) / a1, Y2 / a2
        return -(bump_d2(t1) * bump(t2) / a1 ** 2 + bump(t1) * bump_d2(t2) / a2 ** 2)

    return f, neg_lap


def _g(y, c=0.0):
    return np.exp(-(y - c) ** 2)


def _manufactured_mode1(Y1, Y2):
    return (4 * np.pi ** 2 + 2 - 4 * Y2 ** 2) * np.cos(TWO_PI * Y1) * _g(Y2)


def _mixed_u(Y1, Y2):
    return (np.cos(TWO_PI * Y1) * _g(Y2)
            + 0.5 * np.sin(2 * TWO_PI * Y1) * Y2 * _g(Y2)
            + _g(Y2, 0.3))


def _mixed_f(Y1, Y2):
    return (np.cos(TWO_PI * Y1) * (4 * np.pi ** 2 + 2 - 4 * Y2 ** 2) * _g(Y2)
            + 0.5 * np.sin(2 * TWO_PI * Y1) * (16 * np.pi ** 2 * Y2 - 4 * Y2 ** 3 + 6 * Y2) * _g(Y2)
            + (2 - 4 * (Y2 - 0.3) ** 2) * _g(Y2, 0.3))


def _dipole_pair(Y1, Y2, sigma=0.1):
    d1 = wrap(Y1 - 0.25)
    d2 = wrap(Y1 - 0.75)
    norm = 1.0 / (TWO_PI * sigma ** 2)
    return norm * (np.exp(-(d1 ** 2 + Y2 ** 2) / (2 * sigma ** 2))
                   - np.exp(-(d2 ** 2 + Y2 ** 2) / (2 * sigma ** 2)))


def _split_bumps(Y1, Y2):
    up = bump((Y2 - 3.5) / 1.2)
    down = bump((Y2 + 3.5) / 1.2)
    return (up - down) * (1.0 + np.cos(TWO_PI * Y1)) + np.sin(2 * TWO_PI * Y1) * up


_disc03 = _radial_bump(0.3)
_disc045 = _radial_bump(0.45)
_box = _box_bump(0.35, 0.25)

PRESETS: dict[str, Preset] = {}


def register(p: Preset) -> Preset:
    PRESETS[p.name] = p
    return p


for _p in [
    Preset("zero", lambda Y1, Y2: np.zeros_like(Y1 + Y2), moments=(0.0, 0.0),
           exact_u=lambda Y1, Y2: np.zeros_like(Y1 + Y2)),
    Preset("gaussian_mode1", lambda Y1, Y2: np.cos(TWO_PI * Y1) * _g(Y2), moments=(0.0, 0.0),
           description="cos(2 pi y1) exp(-y2^2)"),
    Preset("hermite_mean", lambda Y1, Y2: (2 - 4 * Y2 ** 2) * _g(Y2) + 0 * Y1,
           exact_u=lambda Y1, Y2: _g(Y2) + 0 * Y1, moments=(0.0, 0.0),
           description="-(exp(-y2^2))'', constant in y1"),
    Preset("manufactured_mode1", _manufactured_mode1,
           exact_u=lambda Y1, Y2: np.cos(TWO_PI * Y1) * _g(Y2), moments=(0.0, 0.0)),
    Preset("manufactured_mixed", _mixed_f, exact_u=_mixed_u, moments=(0.0, 0.0),
           description="modes 0, 1, 2 with known solution"),
    Preset("mode2_gaussian", lambda Y1, Y2: np.sin(2 * TWO_PI * Y1) * np.exp(-2 * Y2 ** 2),
           moments=(0.0, 0.0)),
    Preset("hermite_odd", lambda Y1, Y2: (6 * Y2 - 4 * Y2 ** 3) * _g(Y2) + 0 * Y1,
           exact_u=lambda Y1, Y2: Y2 * _g(Y2) + 0 * Y1, moments=(0.0, 0.0)),
    Preset("first_moment", lambda Y1, Y2: 2 / SQRT_PI * Y2 * _g(Y2) + 0 * Y1,
           moments=(0.0, 1.0), description="<f,1> = 0, <f,y2> = 1"),
    Preset("mass_gaussian", lambda Y1, Y2: _g(Y2) / SQRT_PI + 0 * Y1,
           moments=(1.0, 0.0), description="<f,1> = 1, <f,y2> = 0"),
    Preset("dipole_pair", _dipole_pair, moments=(0.0, 0.0),
           description="narrow opposite bumps at (1/4, 0) and (3/4, 0)"),
    Preset("bump_mode1", lambda Y1, Y2: np.cos(TWO_PI * Y1) * bump(Y2), moments=(0.0, 0.0),
           description="mode 1 times a compact bump, support |y2| < 1"),
    Preset("split_bumps", _split_bumps, moments=(0.0, None),
           description="compact data in 2.3 <= |y2| <= 4.7 with zero mean"),
    Preset("shifted_mode3", lambda Y1, Y2: np.cos(3 * TWO_PI * Y1 + 0.3) * _g(Y2, 0.5),
           moments=(0.0, 0.0)),
    Preset("quartic_mean", lambda Y1, Y2: (0.75 * Y2 ** 2 - Y2 ** 6 / 16.0) * np.exp(-Y2 ** 4 / 16.0) + 0 * Y1,
           exact_u=lambda Y1, Y2: np.exp(-Y2 ** 4 / 16.0) + 0 * Y1, moments=(0.0, 0.0),
           description="-(exp(-y2^4/16))'', constant in y1"),
    Preset("bump_disc_03", _disc03[0], neg_laplacian=_disc03[1], value_at_origin=1.0),
    Preset("bump_disc_045", _disc045[0], neg_laplacian=_disc045[1], value_at_origin=1.0),
    Preset("bump_box", _box[0], neg_laplacian=_box[1], value_at_origin=1.0),
    Preset("ones", lambda Y1, Y2: np.ones_like(Y1 + Y2), decay_class="poly:0"),
    Preset("y2_linear", lambda Y1, Y2: Y2 + 0 * Y1, decay_class="poly:1"),
    Preset("y2_squared", lambda Y1, Y2: Y2 ** 2 + 0 * Y1, decay_class="poly:2"),
    Preset("exp_mode1", lambda Y1, Y2: np.exp(-TWO_PI * np.abs(Y2)) * np.cos(TWO_PI * Y1)),
    Preset("rho_cubed_inverse", lambda Y1, Y2: (1 + Y2 ** 2) ** -1.5 + 0 * Y1,
           decay_class="poly:-3"),
]:
    register(_p)

# Schwartz presets orthogonal to constants, used for fitted-constant checks
SUITE_12 = (
    "manufactured_mode1", "manufactured_mixed", "hermite_mean", "hermite_odd",
    "gaussian_mode1", "mode2_gaussian", "first_moment", "dipole_pair",
    "bump_mode1", "split_bumps", "shifted_mode3", "quartic_mean",
)

# zero-moment presets used for the two-route solver comparison
EQUIVALENCE_SUITE = (
    "manufactured_mode1", "hermite_mean", "mode2_gaussian", "manufactured_mixed", "hermite_odd",
)

BUMP_SUITE = ("bump_disc_03", "bump_disc_045", "bump_box")


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; known: {sorted(PRESETS)}") from None
