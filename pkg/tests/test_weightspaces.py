import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from strip_poisson.stripfield import StripField, StripGrid, laplacian
from strip_poisson.weightspaces import (PolyElement, WeightFunction, WeightSpec, compute_k,
                                        compute_q, monomial_in_space, monomial_norm_sq,
                                        poly_basis, rho)


@pytest.mark.parametrize("m, alpha, expected", [(0, -2.0, 1), (2, 0.0, 1), (0, -0.5, -1), (1, -0.5, 0)])
def test_compute_q_examples(m, alpha, expected):
    assert compute_q(m, alpha) == expected


def test_constant_not_in_l2_minus_half():
    # int (1+y^2)^(-1/2) grows like 2 ln L: truncated integrals never settle
    vals = [integrate.quad(lambda y: 1 / math.sqrt(1 + y * y), 0, L, limit=200)[0] for L in (1e2, 1e4, 1e6)]
    assert vals[2] - vals[1] == pytest.approx(vals[1] - vals[0], rel=1e-3)
    assert not monomial_in_space(0, -0.5, 0)


@pytest.mark.parametrize("m, alpha, expected", [(2, 0.5, 1), (1, 0.0, -1), (3, 2.5, 0), (2, 1.5, 0), (0, 0.5, -1)])
def test_compute_k_examples(m, alpha, expected):
    assert compute_k(m, alpha) == expected


def test_compute_k_rejects_negative_m():
    with pytest.raises(ValueError):
        compute_k(-1, 0.0)


def test_half_integer_branch_gives_integers():
    for i in range(0, 6):
        alpha = -0.5 - i
        for m in range(4):
            assert compute_q(m, alpha) == m - 1 + i


@given(st.integers(0, 4), st.floats(-6, 6, allow_nan=False))
def test_weightspec_invariants(m, alpha):
    s = WeightSpec(m, alpha)
    if s.is_critical:
        assert 0 <= s.k_crit <= m - 1
        assert s.k_crit == pytest.approx(m - 0.5 - alpha)
    else:
        assert s.k_crit == -1
    assert s.q_poly == compute_q(m, alpha)
    with pytest.raises(Exception):
        s.m = 3


def test_poly_basis_examples():
    assert [p.to_list() for p in poly_basis(1, True)] == [[1.0], [0.0, 1.0]]
    assert poly_basis(-1, False) == []
    assert [p.degree for p in poly_basis(3, False)] == [0, 1, 2, 3]
    assert len(poly_basis(5, True)) == 2


def test_poly_element_algebra():
    p = PolyElement([1.0, 2.0, 3.0])
    assert p.laplacian().to_list() == [6.0]
    assert not p.is_harmonic
    assert (p + (-p)).degree == -1
    assert PolyElement([4.0, -1.0]).is_harmonic
    y = np.linspace(-2, 2, 7)
    np.testing.assert_allclose(p(y), 1 + 2 * y + 3 * y ** 2)


@given(st.floats(-4, 4), st.integers(-1, 1), st.floats(-50, 50))
def test_weight_function_positive_even(alpha, lp, y):
    w = WeightFunction(alpha, lp)
    assert w(y) > 0
    assert w(y) == w(-y)
    expected = (1 + y * y) ** (alpha / 2) * math.log(2 + y * y) ** lp
    assert w(y) == pytest.approx(expected, rel=1e-12)


def test_rho():
    assert rho(0.0) == 1.0
    assert rho(3.0) == pytest.approx(math.sqrt(10.0))


ALPHAS = [x / 2 for x in range(-6, 7)]


@pytest.mark.parametrize("m", [0, 1, 2])
def test_membership_oracle_matches_q(m):
    # y2^q' has bounded truncated norms exactly when q' <= q(m, alpha)
    bad = []
    for alpha in ALPHAS:
        q = compute_q(m, alpha)
        for d in range(5):
            if monomial_in_space(m, alpha, d) != (d <= q):
                bad.append((alpha, d))
    assert bad == []


def test_monomial_norm_grows_without_bound_when_outside():
    a = monomial_norm_sq(0, -1.0, 1, 1e2)
    b = monomial_norm_sq(0, -1.0, 1, 1e4)
    assert b > 50 * a


def test_critical_cases_break_the_inclusion_chain():
    # noncritical: every monomial of H^m_alpha stays in H^{m-1}_{alpha-1}
    for m in (1, 2):
        for alpha in ALPHAS:
            if compute_k(m, alpha) < 0:
                assert compute_q(m - 1, alpha - 1) >= compute_q(m, alpha)
    # critical witnesses: y2^q lies in H^m_alpha but not in H^{m-1}_{alpha-1}
    for m, alpha in [(1, 0.5), (2, 0.5)]:
        q = compute_q(m, alpha)
        assert monomial_in_space(m, alpha, q)
        assert not monomial_in_space(m - 1, alpha - 1, q)


def test_harmonic_basis_discrete_laplacian():
    grid = StripGrid(8, 8.0, 513)
    _, Y2 = grid.mesh()
    for p in poly_basis(1, True):
        lap = laplacian(StripField(grid, p(Y2), "poly:1")).values[:, 2:-2]
        assert np.max(np.abs(lap)) <= 1e-10
    lap = laplacian(StripField(grid, Y2 ** 2, "poly:2")).values[:, 2:-2]
    assert np.all(lap == 2.0)
