"""Hypothesis property tests for the structural invariants."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mkdvlab.norms import modulation_norm, sobolev_norm
from mkdvlab.probes import resonance_identity
from mkdvlab.spectral import (
    Field,
    GridSpec,
    SpectralField,
    airy_propagator,
    forward_transform,
    inverse_transform,
    riesz_bilinear,
    unit_cube_project,
)

GRID = GridSpec(length=64.0, points=256)


def field_from_seed(seed: int, max_xi: float = 8.0) -> Field:
    rng = np.random.default_rng(seed)
    coef = np.exp(-((GRID.xi / 3.0) ** 2)) * (
        rng.standard_normal(GRID.points) + 1j * rng.standard_normal(GRID.points)
    )
    coef[np.abs(GRID.xi) > max_xi] = 0.0
    return inverse_transform(SpectralField(GRID, coef))


finite_t = st.floats(min_value=-5.0, max_value=5.0, allow_nan=False)
seeds = st.integers(min_value=0, max_value=2**31)


@settings(max_examples=25, deadline=None)
@given(seed=seeds)
def test_plancherel_for_arbitrary_fields(seed):
    f = field_from_seed(seed)
    coeffs = forward_transform(f).coefficients
    phys = np.sum(np.abs(f.values) ** 2) * GRID.dx
    spec = np.sum(np.abs(coeffs) ** 2) * GRID.dxi / (2 * np.pi)
    assert spec == pytest.approx(phys, rel=1e-12)


@settings(max_examples=25, deadline=None)
@given(seed=seeds, t1=finite_t, t2=finite_t)
def test_airy_group_law_and_unitarity(seed, t1, t2):
    f = field_from_seed(seed)
    ab = airy_propagator(airy_propagator(f, t1), t2)
    once = airy_propagator(f, t1 + t2)
    scale = max(np.max(np.abs(f.values)), 1e-30)
    assert np.max(np.abs(ab.values - once.values)) < 1e-11 * scale
    assert once.l2_norm() == pytest.approx(f.l2_norm(), rel=1e-12)


@settings(max_examples=25, deadline=None)
@given(
    seed=seeds,
    re=st.floats(min_value=-10, max_value=10, allow_nan=False),
    im=st.floats(min_value=-10, max_value=10, allow_nan=False),
    s=st.floats(min_value=-0.5, max_value=1.5, allow_nan=False),
    p=st.floats(min_value=1.0, max_value=16.0, allow_nan=False),
)
def test_norm_absolute_homogeneity(seed, re, im, s, p):
    c = complex(re, im)
    f = field_from_seed(seed)
    g = Field(GRID, c * f.values)
    assert modulation_norm(g, s, p) == pytest.approx(
        abs(c) * modulation_norm(f, s, p), rel=1e-12, abs=1e-300
    )
    assert sobolev_norm(g, s) == pytest.approx(
        abs(c) * sobolev_norm(f, s), rel=1e-12, abs=1e-300
    )


@settings(max_examples=25, deadline=None)
@given(
    seed=seeds,
    p=st.floats(min_value=1.0, max_value=8.0, allow_nan=False),
    bump=st.floats(min_value=0.1, max_value=8.0, allow_nan=False),
)
def test_modulation_lp_monotonicity(seed, p, bump):
    q = p + bump  # q > p: larger exponent never increases the norm
    f = field_from_seed(seed)
    assert modulation_norm(f, 0.25, q) <= modulation_norm(f, 0.25, p) + 1e-14


@settings(max_examples=50, deadline=None)
@given(
    xi1=st.floats(min_value=-50, max_value=50, allow_nan=False),
    xi2=st.floats(min_value=-50, max_value=50, allow_nan=False),
    xi3=st.floats(min_value=-50, max_value=50, allow_nan=False),
)
def test_resonance_identity_pointwise(xi1, xi2, xi3):
    lhs, rhs = resonance_identity(xi1, xi2, xi3)
    assert abs(lhs - rhs) <= 1e-12 * (1.0 + abs(rhs))


@settings(max_examples=20, deadline=None)
@given(
    seed=seeds,
    n=st.integers(min_value=-8, max_value=8),
    gap=st.integers(min_value=2, max_value=6),
)
def test_disjoint_cube_projectors_annihilate(seed, n, gap):
    f = field_from_seed(seed)
    m = n + gap
    if abs(m) + 1 > GRID.xi_max:
        return
    g = unit_cube_project(unit_cube_project(f, n), m)
    assert np.max(np.abs(g.values)) < 1e-13 * max(np.max(np.abs(f.values)), 1e-30)


@settings(max_examples=15, deadline=None)
@given(seed=seeds, theta=st.floats(min_value=0.05, max_value=1.0, allow_nan=False))
def test_riesz_bilinear_symmetric(seed, theta):
    f = field_from_seed(seed, max_xi=6.0)
    g = field_from_seed(seed + 1, max_xi=6.0)
    fg = riesz_bilinear(theta, f, g)
    gf = riesz_bilinear(theta, g, f)
    scale = max(np.max(np.abs(fg.values)), 1e-30)
    assert np.max(np.abs(fg.values - gf.values)) < 1e-12 * scale
