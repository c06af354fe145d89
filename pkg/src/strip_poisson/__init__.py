"""Poisson problems on the 1-periodic infinite strip Z = (0,1) x R.

Solves -Lap u = f with the explicit Green function of the strip and checks
weighted-Sobolev predictions: compatibility moments, uniqueness modulo
polynomials, decay rates and inequality constants.
"""
from .diagnostics import (decay_fit, hardy_check, poincare_wirtinger_check,
                          quotient_norm, weighted_norm, x_space_norm)
from .green import green_closed, green_gradient, green_series, mode_kernel
from .mft import horizontal_inverse, horizontal_transform, parseval_check
from .solver import (JumpData, MomentViolation, SolveReport, extract_jump, jump_lift,
                     solve_constructive, solve_green_quadrature,
                     solve_half_strip_dirichlet, solve_per_mode)
from .stripfield import (ModeField, StripField, StripGrid, differentiate, integrate,
                         sample)
from .weightspaces import (PolyElement, WeightFunction, WeightSpec, compute_k,
                           compute_q, poly_basis)

__all__ = [
    "StripGrid", "StripField", "ModeField", "sample", "integrate", "differentiate",
    "WeightSpec", "WeightFunction", "PolyElement", "compute_q", "compute_k", "poly_basis",
    "horizontal_transform", "horizontal_inverse", "parseval_check",
    "green_closed", "green_series", "green_gradient", "mode_kernel",
    "solve_per_mode", "solve_green_quadrature", "solve_half_strip_dirichlet",
    "solve_constructive", "extract_jump", "jump_lift", "SolveReport", "JumpData",
    "MomentViolation",
    "weighted_norm", "quotient_norm", "x_space_norm", "hardy_check",
    "poincare_wirtinger_check", "decay_fit",
]
