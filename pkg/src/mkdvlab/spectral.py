"""Periodic spectral substrate: grids, transforms, frequency projectors, propagators.

The real line is approximated by the torus [-L/2, L/2) sampled at M points.
All spectral coefficients use the continuum convention

    u_hat(xi) = integral u(x) exp(-i xi x) dx,

realized as the dx-weighted DFT, so that coefficients are grid-independent
approximations of the continuum transform and Parseval reads

    sum_j |u(x_j)|^2 dx = (2 pi)^{-1} sum_k |u_hat(xi_k)|^2 dxi.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * np.pi

#: relative magnitude below which a spectral bin counts as unoccupied
SUPPORT_TOL = 1e-13


class GridMismatchError(ValueError):
    """Two fields that must share a grid do not."""


class ResolutionError(ValueError):
    """The grid (or time window) cannot resolve the requested object."""


def _is_pow2(m: int) -> bool:
    return m >= 2 and (m & (m - 1)) == 0


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic grid on [-L/2, L/2) with M points (M a power of two).

    The frequency lattice is xi_k = 2 pi k / L for k = -M/2 .. M/2 - 1, stored
    in FFT order.  Construction enforces dxi <= 1/8 so every unit frequency
    cube carries at least 8 lattice samples.
    """

    length: float
    points: int

    def __post_init__(self) -> None:
        if not self.length > 0:
            raise ValueError(f"grid length must be positive, got {self.length}")
        if not _is_pow2(self.points):
            raise ValueError(f"grid points must be a power of two, got {self.points}")
        if self.dxi > 0.125 + 1e-15:
            raise ValueError(
                f"frequency spacing dxi={self.dxi:.4g} exceeds 1/8; "
                f"need length >= {16 * np.pi:.4g}"
            )

    @property
    def dx(self) -> float:
        return self.length / self.points

    @property
    def dxi(self) -> float:
        return TWO_PI / self.length

    @property
    def xi_nyquist(self) -> float:
        """Edge of the resolved band, pi/dx."""
        return np.pi / self.dx

    @property
    def xi_max(self) -> float:
        """Largest positive lattice frequency, xi_nyquist - dxi."""
        return self.xi_nyquist - self.dxi

    @property
    def x(self) -> np.ndarray:
        return -0.5 * self.length + self.dx * np.arange(self.points)

    @property
    def xi(self) -> np.ndarray:
        """Frequency lattice in FFT order."""
        return TWO_PI * np.fft.fftfreq(self.points, d=self.dx)

    def _phase(self) -> np.ndarray:
        # exp(+i xi_k L/2) = (-1)^k, accounting for the grid starting at -L/2
        ph = np.ones(self.points)
        ph[1::2] = -1.0
        return ph


def _freeze(values: np.ndarray) -> np.ndarray:
    out = np.array(values, dtype=np.complex128)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class Field:
    """One complex-valued spatial snapshot u(x_j) on a grid."""

    grid: GridSpec
    values: np.ndarray

    def __post_init__(self) -> None:
        vals = _freeze(self.values)
        if vals.shape != (self.grid.points,):
            raise ValueError(
                f"expected {self.grid.points} samples, got shape {vals.shape}"
            )
        if not np.all(np.isfinite(vals)):
            raise ValueError("field contains non-finite values")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_function(cls, grid: GridSpec, fn) -> "Field":
        return cls(grid, np.asarray(fn(grid.x), dtype=np.complex128))

    @classmethod
    def zero(cls, grid: GridSpec) -> "Field":
        return cls(grid, np.zeros(grid.points, dtype=np.complex128))

    def l2_norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.grid.dx))

    def inner(self, other: "Field") -> complex:
        """Discrete L^2 inner product <self, other> = sum self * conj(other) dx."""
        require_same_grid(self, other)
        return complex(np.sum(self.values * np.conj(other.values)) * self.grid.dx)


@dataclass(frozen=True, eq=False)
class SpectralField:
    """Frequency representation: coefficients approximating u_hat(xi_k), FFT order."""

    grid: GridSpec
    coefficients: np.ndarray

    def __post_init__(self) -> None:
        coef = _freeze(self.coefficients)
        if coef.shape != (self.grid.points,):
            raise ValueError(
                f"expected {self.grid.points} coefficients, got shape {coef.shape}"
            )
        object.__setattr__(self, "coefficients", coef)


def require_same_grid(a, b) -> None:
    if a.grid != b.grid:
        raise GridMismatchError(f"grids differ: {a.grid} vs {b.grid}")


def forward_transform(f: Field) -> SpectralField:
    """dx-weighted DFT approximating u_hat(xi) = integral u exp(-i xi x) dx."""
    g = f.grid
    coef = g.dx * g._phase() * np.fft.fft(f.values)
    return SpectralField(g, coef)


def inverse_transform(F: SpectralField) -> Field:
    """Exact inverse of :func:`forward_transform`."""
    g = F.grid
    vals = np.fft.ifft(g._phase() * F.coefficients) / g.dx
    return Field(g, vals)


def spatial_derivative(F: SpectralField, order: int) -> SpectralField:
    """Multiply coefficients by (i xi)^order."""
    if order < 0 or int(order) != order:
        raise ValueError(f"derivative order must be a nonnegative integer, got {order}")
    mult = (1j * F.grid.xi) ** order
    return SpectralField(F.grid, mult * F.coefficients)


def derivative(f: Field, order: int = 1) -> Field:
    """Spectral spatial derivative acting on physical snapshots."""
    return inverse_transform(spatial_derivative(forward_transform(f), order))


# ---------------------------------------------------------------------------
# Frequency projectors
# ---------------------------------------------------------------------------

def dyadic_mask(xi: np.ndarray, n_dyadic: float) -> np.ndarray:
    """Sharp annulus indicator: |xi| <= 1 for N = 1, N/2 < |xi| <= N for N >= 2."""
    a = np.abs(xi)
    if n_dyadic == 1:
        return a <= 1.0
    return (a > n_dyadic / 2) & (a <= n_dyadic)


def littlewood_paley(f: Field, n_dyadic: float) -> Field:
    """Sharp dyadic frequency projector onto {|xi| ~ N}.

    The masks over N = 1, 2, 4, ... tile the band |xi| <= N_max exactly, so
    band-limited fields are reconstructed by summing the pieces.
    """
    k = np.log2(n_dyadic)
    if n_dyadic < 1 or abs(k - round(k)) > 1e-12:
        raise ValueError(f"projector scale must be dyadic >= 1, got {n_dyadic}")
    if n_dyadic > f.grid.xi_nyquist:
        raise ResolutionError(
            f"dyadic scale {n_dyadic} above Nyquist {f.grid.xi_nyquist:.4g}"
        )
    F = forward_transform(f)
    coef = np.where(dyadic_mask(f.grid.xi, n_dyadic), F.coefficients, 0.0)
    return inverse_transform(SpectralField(f.grid, coef))


def cos2_window(u: np.ndarray) -> np.ndarray:
    """cos^2 unit-cube window: psi(u) = cos(pi u / 2)^2 on [-1, 1], 0 outside.

    Satisfies psi(0) = 1, psi(+-1) = 0 and the exact partition of unity
    sum_n psi(u - n) = 1.
    """
    u = np.asarray(u, dtype=float)
    inside = np.abs(u) <= 1.0
    return np.where(inside, np.cos(0.5 * np.pi * u) ** 2, 0.0)


def quartic_window(u: np.ndarray) -> np.ndarray:
    """Alternative admissible window: quartic bump renormalized to partition unity.

    Only the windows at n-1, n, n+1 overlap any point, so dividing the raw bump
    (1 - u^2)^2 by the sum of its three nearest shifts gives an exact partition.
    """
    u = np.asarray(u, dtype=float)

    def bump(v):
        inside = np.abs(v) < 1.0
        return np.where(inside, (1.0 - v**2) ** 2, 0.0)

    total = bump(u) + bump(u - 1.0) + bump(u + 1.0)
    out = np.zeros_like(u, dtype=float)
    nz = total > 0
    np.divide(bump(u), total, out=out, where=nz)
    return out


def unit_cube_project(f: Field, n: int, window=cos2_window) -> Field:
    """Apply the unit-cube Fourier multiplier psi(xi - n)."""
    g = f.grid
    if abs(n) + 1 > g.xi_max:
        raise ResolutionError(
            f"cube n={n} needs the band |xi| <= {abs(n) + 1}, grid resolves "
            f"|xi| <= {g.xi_max:.4g}"
        )
    F = forward_transform(f)
    coef = window(g.xi - n) * F.coefficients
    return inverse_transform(SpectralField(g, coef))


def airy_propagator(f: Field, t: float) -> Field:
    """Free evolution exp(-t d_x^3): the Fourier multiplier exp(i xi^3 t).

    Unitary on L^2 and a one-parameter group in t.
    """
    F = forward_transform(f)
    coef = np.exp(1j * f.grid.xi**3 * t) * F.coefficients
    return inverse_transform(SpectralField(f.grid, coef))


def riesz_potential(f: Field, theta: float) -> Field:
    """|xi|^theta multiplier, (-d_x^2)^(theta/2)."""
    if theta <= 0:
        raise ValueError(f"theta must be positive, got {theta}")
    F = forward_transform(f)
    return inverse_transform(SpectralField(f.grid, np.abs(f.grid.xi) ** theta * F.coefficients))


def _signed_support(coef: np.ndarray) -> np.ndarray:
    """Signed lattice indices of occupied bins (relative magnitude > SUPPORT_TOL)."""
    m = coef.shape[0]
    peak = np.max(np.abs(coef))
    if peak == 0.0:
        return np.empty(0, dtype=int)
    idx = np.nonzero(np.abs(coef) > SUPPORT_TOL * peak)[0]
    return np.where(idx < m // 2, idx, idx - m)


def riesz_bilinear(theta: float, f: Field, g: Field) -> Field:
    """Riesz-type bilinear operator: frequency convolution weighted by |xi1 - xi2|^theta.

    Output spectrum at xi:

        w_hat(xi) = (2 pi)^{-1} sum_{xi1 + xi2 = xi} |xi1 - xi2|^theta
                    f_hat(xi1) g_hat(xi2) dxi,

    the (2 pi)^{-1} dxi convolution measure matching the product convention
    (theta -> 0 degenerates toward the pointwise product f g).  Computed as a
    direct double sum over occupied bins: cost O(B^2) in the occupied bandwidth
    B, so inputs must be band-limited.  Both inputs must occupy strictly less
    than half the Nyquist band, else the output would alias back into the
    lattice.
    """
    if not 0.0 < theta <= 1.0:
        raise ValueError(f"theta must lie in (0, 1], got {theta}")
    require_same_grid(f, g)
    grid = f.grid
    m = grid.points
    fh = forward_transform(f).coefficients
    gh = forward_transform(g).coefficients
    kf = _signed_support(fh)
    kg = _signed_support(gh)
    if kf.size == 0 or kg.size == 0:
        return Field.zero(grid)
    cap = m // 4 - 1
    worst = max(np.max(np.abs(kf)), np.max(np.abs(kg)))
    if worst > cap:
        raise ResolutionError(
            f"inputs occupy |k| up to {worst}; the banded convolution needs "
            f"|k| <= {cap} (below half Nyquist) to stay alias-free"
        )
    xi_f = grid.dxi * kf
    xi_g = grid.dxi * kg
    weight = np.abs(xi_f[:, None] - xi_g[None, :]) ** theta
    terms = (grid.dxi / TWO_PI) * weight * fh[np.where(kf < 0, kf + m, kf)][:, None] \
        * gh[np.where(kg < 0, kg + m, kg)][None, :]
    out = np.zeros(m, dtype=np.complex128)
    k_out = (kf[:, None] + kg[None, :]) % m
    np.add.at(out, k_out.ravel(), terms.ravel())
    return inverse_transform(SpectralField(grid, out))
