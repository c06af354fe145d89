import math

import numpy as np
import pytest

from strip_poisson.green import green_values
from strip_poisson.mft import (conjugate_symmetry_defect, horizontal_inverse, horizontal_transform,
                               mode_slice_norms, parseval_check)
from strip_poisson.stripfield import ModeField, StripField, StripGrid, d_y1, sample


@pytest.fixture(scope="module")
def grid():
    return StripGrid(32, 8.0, 1025)


def test_single_mode_rows(grid):
    F = horizontal_transform(sample("gaussian_mode1", grid))
    g = np.exp(-grid.y2 ** 2)
    np.testing.assert_allclose(F.row(1).real, g / 2, atol=1e-15)
    np.testing.assert_allclose(F.row(-1).real, g / 2, atol=1e-15)
    others = [k for k in F.ks if abs(k) != 1]
    assert max(np.max(np.abs(F.row(k))) for k in others) <= 1e-12


def test_constant_field(grid):
    F = horizontal_transform(StripField(grid, np.ones(grid.shape), "poly:0"))
    assert np.allclose(F.row(0), 1.0)
    assert sum(np.max(np.abs(F.row(k))) for k in F.ks if k) == 0.0


def test_periodic_part_of_green_modes():
    # G1 = G + |y2|/2 has modes e^{-2 pi |k| |y2|} / (4 pi |k|) for k != 0
    grid = StripGrid(64, 2.0, 81)
    Y1, Y2 = grid.mesh()
    safe = np.where((Y1 == 0) & (Y2 == 0), 0.5, Y1)
    G1 = green_values(safe, Y2) + np.abs(Y2) / 2
    G1[0, grid.center] = 0.0
    F = horizontal_transform(StripField(grid, G1))
    j = grid.node_index(0.5)
    assert F.row(1)[j].real == pytest.approx(math.exp(-math.pi) / (4 * math.pi), rel=1e-12)
    assert F.row(1)[j].real == pytest.approx(3.4390e-3, rel=1e-4)
    for k in (2, 3, -5):
        assert F.row(k)[j].real == pytest.approx(math.exp(-2 * math.pi * abs(k) * 0.5) / (4 * math.pi * abs(k)), rel=1e-9)


def test_round_trip(grid):
    f = sample("manufactured_mixed", grid)
    back = horizontal_inverse(horizontal_transform(f))
    assert np.max(np.abs(back.values - f.values)) <= 1e-12
    g = sample("gaussian_mode1", grid)
    assert np.max(np.abs(horizontal_inverse(horizontal_transform(g)).values - g.values)) <= 1e-12


def test_inverse_examples(grid):
    coeffs = np.zeros((grid.n1, grid.n2), dtype=complex)
    F = ModeField(grid, coeffs)
    coeffs[grid.n1 // 2] = np.exp(-grid.y2 ** 2)
    u = horizontal_inverse(F)
    assert np.all(u.values == u.values[:1])
    coeffs[:] = 0
    coeffs[grid.n1 // 2 + 1] = coeffs[grid.n1 // 2 - 1] = 0.5
    Y1, _ = grid.mesh()
    np.testing.assert_allclose(horizontal_inverse(F, "poly:0").values, np.cos(2 * np.pi * Y1), atol=1e-15)


def test_inverse_rejects_non_hermitian(grid):
    coeffs = np.zeros((grid.n1, grid.n2), dtype=complex)
    coeffs[grid.n1 // 2 + 1] = 1.0
    with pytest.raises(ValueError):
        horizontal_inverse(ModeField(grid, coeffs))


@pytest.mark.parametrize("name", ["gaussian_mode1", "manufactured_mixed", "dipole_pair", "shifted_mode3"])
def test_conjugate_symmetry(grid, name):
    assert conjugate_symmetry_defect(horizontal_transform(sample(name, grid))) <= 1e-12


def test_parseval_examples(grid):
    lhs, rhs = parseval_check(sample("gaussian_mode1", grid), 0.0)
    assert abs(lhs - rhs) <= 1e-10
    assert lhs == pytest.approx(0.5 * math.sqrt(math.pi / 2), abs=1e-10)
    assert parseval_check(sample("zero", grid), 0.0) == (0.0, 0.0)
    lhs, rhs = parseval_check(sample("hermite_mean", grid), 1.0)
    assert abs(lhs - rhs) <= 1e-8 * max(1.0, lhs)


@pytest.mark.parametrize("name", ["manufactured_mixed", "bump_mode1", "shifted_mode3", "dipole_pair"])
@pytest.mark.parametrize("beta", [-1.0, 0.0, 2.0])
def test_plancherel_schwartz_presets(grid, name, beta):
    lhs, rhs = parseval_check(sample(name, grid), beta)
    assert abs(lhs - rhs) <= 1e-10 * max(1.0, lhs)


def test_derivative_rule(grid):
    # transform of d1 f is 2 pi i k times the transform of f
    f = sample("manufactured_mixed", grid)
    F = horizontal_transform(f)
    D = horizontal_transform(StripField(grid, d_y1(f.values, 1)))
    for k in (1, 2, -3):
        np.testing.assert_allclose(D.row(k), 2j * np.pi * k * F.row(k), atol=1e-12)


def test_translation_phase(grid):
    f = sample("shifted_mode3", grid)
    s = 5
    F = horizontal_transform(f)
    Fs = horizontal_transform(StripField(grid, np.roll(f.values, s, axis=0)))
    for k in (1, 3, -3):
        np.testing.assert_allclose(Fs.row(k), np.exp(-2j * np.pi * k * s / grid.n1) * F.row(k), atol=1e-13)
    np.testing.assert_allclose(mode_slice_norms(Fs), mode_slice_norms(F), atol=1e-13)
