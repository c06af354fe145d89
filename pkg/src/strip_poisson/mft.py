"""Horizontal (discrete) half of the mixed Fourier transform.

Row k of a ModeField approximates F_k(f)(y2) = int_0^1 f(y1, y2) exp(-2 pi i k y1) dy1.
The vertical transform is never discretized; solvers work per mode in
physical y2.
"""
from __future__ import annotations

import numpy as np

from .stripfield import ModeField, StripField, simpson_weights
from .weightspaces import WeightFunction

IMAG_TOL = 1e-8


def horizontal_transform(f: StripField) -> ModeField:
    n1 = f.grid.n1
    coeffs = np.fft.fft(f.values, axis=0) / n1
    return ModeField(f.grid, np.fft.fftshift(coeffs, axes=0))


def horizontal_inverse(F: ModeField, decay_class: str = "schwartz") -> StripField:
    n1 = F.grid.n1
    vals = np.fft.ifft(np.fft.ifftshift(F.modes, axes=0), axis=0) * n1
    scale = max(1.0, float(np.max(np.abs(vals))))
    resid = float(np.max(np.abs(vals.imag))) if vals.size else 0.0
    if resid > IMAG_TOL * scale:
        raise ValueError(f"mode field is not conjugate symmetric (imaginary residue {resid:.3e})")
    return StripField(F.grid, vals.real, decay_class)


def conjugate_symmetry_defect(F: ModeField) -> float:
    """max |F_{-k} - conj(F_k)| over the modes with both k and -k stored."""
    n1 = F.grid.n1
    rows = F.modes[1:]  # k = -n1/2 + 1 ... n1/2 - 1
    return float(np.max(np.abs(rows - np.conj(rows[::-1])))) if n1 > 1 else 0.0


def mode_slice_norms(F: ModeField) -> np.ndarray:
    """|F_k(u)(y2)| for k = 0 .. n1/2 - 1, shape (n1/2, n2)."""
    n1 = F.grid.n1
    return np.abs(F.modes[n1 // 2:])


def parseval_check(f: StripField, beta: float = 0.0) -> tuple[float, float]:
    """Both sides of ||f||^2_{L^2_beta(Z)} = sum_k ||F_k f||^2_{L^2_beta(R)}.

    The left side averages |f|^2 over the y1 nodes, the right side sums
    squared mode moduli; both then use the same Simpson rule in y2, so the
    comparison isolates the discrete Parseval identity.
    """
    grid = f.grid
    w = WeightFunction(2.0 * beta)(grid.y2)
    sw = simpson_weights(grid.n2, grid.h2)
    lhs = float(sw @ ((f.values ** 2).mean(axis=0) * w))
    F = horizontal_transform(f)
    rhs = float(sw @ ((np.abs(F.modes) ** 2).sum(axis=0) * w))
    return lhs, rhs
