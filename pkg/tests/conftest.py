"""Shared fixtures: random field corpora on small reference grids."""

import numpy as np
import pytest

from mkdvlab.spectral import GridSpec, SpectralField, inverse_transform


def random_band_limited(grid, rng, max_xi=8.0, width=3.0, carrier=0.0):
    """Random smooth field: Gaussian-enveloped random spectrum, band-limited."""
    xi = grid.xi
    envelope = np.exp(-(((xi - carrier) / width) ** 2))
    coef = envelope * (
        rng.standard_normal(grid.points) + 1j * rng.standard_normal(grid.points)
    )
    coef[np.abs(xi - carrier) > max_xi] = 0.0
    return inverse_transform(SpectralField(grid, coef))


@pytest.fixture(scope="session")
def norm_grid():
    return GridSpec(length=64.0, points=512)


@pytest.fixture(scope="session")
def norm_corpus(norm_grid):
    """100 random band-limited fields with varied widths and carriers."""
    rng = np.random.default_rng(20240901)
    fields = []
    for i in range(100):
        width = 0.5 + 4.0 * rng.random()
        carrier = rng.uniform(-10.0, 10.0)
        fields.append(
            random_band_limited(norm_grid, rng, max_xi=8.0, width=width, carrier=carrier)
        )
    return fields


@pytest.fixture(scope="session")
def st_grid():
    # small grid for space-time norms: K = 256 resolves |xi|^3 up to ~640
    return GridSpec(length=64.0, points=256)


@pytest.fixture(scope="session")
def st_corpus(st_grid):
    rng = np.random.default_rng(77)
    # total band stays within |xi| <= 8 so K = 256 over T = 1 resolves xi^3
    return [
        random_band_limited(st_grid, rng, max_xi=5.0, width=1.0 + 2.0 * rng.random(),
                            carrier=rng.uniform(-3.0, 3.0))
        for _ in range(12)
    ]
