"""Scalar norm functionals on fields and space-time trajectories.

Conventions
-----------
* Sobolev:    ||f||_{H^s}    = ((2 pi)^{-1} sum <xi>^{2s} |u_hat|^2 dxi)^{1/2}
* Fourier-Lebesgue: ||f||_{FL^{s,p}} = (sum (<xi>^s |u_hat|)^p dxi)^{1/p}
  (sup over the lattice at p = inf); at p = 2 this equals
  sqrt(2 pi) * sobolev_norm, the factor coming from the (2 pi)^{-1/2}
  normalization carried by the L^2-based norms.
* Modulation: ||f||_{M^{2,p}_s} = || <n>^s ||Pi_n f||_{L^2} ||_{l^p_n} with the
  smooth cos^2 unit-cube windows.
* Space-time norms weight the distance <tau - xi^3> to the dispersion surface.
  The frequency-cube blocks of the l^p variant use sharp cubes [n, n+1), while
  the modulation norm uses smooth windows; the two conventions are deliberate
  and kept distinct.

Space-time values are diagnostics tied to the fixed time window and its
cos^2 taper (10% shoulders); they are representative upper bounds, never
restriction-norm infima.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .spectral import (
    TWO_PI,
    Field,
    GridSpec,
    ResolutionError,
    cos2_window,
    forward_transform,
)

__all__ = [
    "NormParams",
    "SpaceTimeField",
    "sobolev_norm",
    "fourier_lebesgue_norm",
    "modulation_norm",
    "cube_l2_profile",
    "free_evolution",
    "cos2_taper",
    "xsb_norm",
    "xsb_p_norm",
]

#: admissible relative spectral mass outside the window-covered band
TAIL_TOL = 1e-10


@dataclass(frozen=True)
class NormParams:
    """Bundle of norm parameters: regularity s, summability p, optional b, eps."""

    s: float
    p: float
    b: float | None = None
    eps: float | None = None

    def __post_init__(self) -> None:
        if self.p < 1:
            raise ValueError(f"p must satisfy p >= 1, got {self.p}")
        if self.eps is not None and not self.eps > 0:
            raise ValueError(f"eps must be positive, got {self.eps}")


def _lp(values: np.ndarray, p: float) -> float:
    """l^p aggregation, sup for p = inf; values are nonnegative."""
    if math.isinf(p):
        return float(np.max(values)) if values.size else 0.0
    # scale out the peak so large p does not underflow
    peak = float(np.max(values)) if values.size else 0.0
    if peak == 0.0:
        return 0.0
    return peak * float(np.sum((values / peak) ** p) ** (1.0 / p))


def _jap(a: np.ndarray | float) -> np.ndarray | float:
    """Japanese bracket <a> = (1 + a^2)^(1/2)."""
    return np.sqrt(1.0 + np.asarray(a, dtype=float) ** 2)


def sobolev_norm(f: Field, s: float) -> float:
    """H^s norm from the weighted spectral sum."""
    F = forward_transform(f)
    xi = f.grid.xi
    total = np.sum(_jap(xi) ** (2.0 * s) * np.abs(F.coefficients) ** 2)
    return float(np.sqrt(total * f.grid.dxi / TWO_PI))


def fourier_lebesgue_norm(f: Field, s: float, p: float) -> float:
    """FL^{s,p} norm: discrete L^p_xi norm of <xi>^s u_hat."""
    if p < 1:
        raise ValueError(f"p must satisfy p >= 1, got {p}")
    F = forward_transform(f)
    weighted = _jap(f.grid.xi) ** s * np.abs(F.coefficients)
    if math.isinf(p):
        return float(np.max(weighted))
    return float(_lp(weighted, p) * f.grid.dxi ** (1.0 / p))


def cube_l2_profile(f: Field, window=cos2_window) -> tuple[np.ndarray, np.ndarray]:
    """L^2 masses ||Pi_n f||_{L^2} for every covered cube n.

    Returns (n_values, masses).  Computed on the spectral side via Parseval,
    so the cost is O(M): each lattice frequency meets exactly two windows.
    Raises :class:`ResolutionError` when the spectral tail beyond the covered
    band carries more than TAIL_TOL of the total mass.
    """
    g = f.grid
    F = forward_transform(f)
    xi = g.xi
    a2 = np.abs(F.coefficients) ** 2
    total = float(np.sum(a2))
    n_max = int(np.floor(g.xi_max - 1.0))
    if n_max < 1:
        raise ResolutionError("grid too small to cover any unit cube")
    if total > 0.0:
        outside = float(np.sum(a2[np.abs(xi) >= n_max]))
        if outside > TAIL_TOL * total:
            raise ResolutionError(
                f"spectral tail beyond the covered band |xi| < {n_max} holds "
                f"{outside / total:.3e} of the mass (> {TAIL_TOL:.0e}); "
                f"increase the resolved band above |xi| = {g.xi_max:.4g}"
            )
    # every xi lies in windows floor(xi) and floor(xi)+1
    n_lo = np.floor(xi).astype(int)
    n_values = np.arange(-n_max, n_max + 1)
    masses2 = np.zeros(n_values.size)
    for shift in (0, 1):
        n_tgt = n_lo + shift
        w2 = window(xi - n_tgt) ** 2 * a2
        sel = (n_tgt >= -n_max) & (n_tgt <= n_max)
        np.add.at(masses2, n_tgt[sel] + n_max, w2[sel])
    masses2 *= g.dxi / TWO_PI
    return n_values, np.sqrt(masses2)


def modulation_norm(f: Field, s: float, p: float, window=cos2_window) -> float:
    """M^{2,p}_s norm: l^p over <n>^s-weighted unit-cube L^2 masses."""
    if p < 1:
        raise ValueError(f"p must satisfy p >= 1, got {p}")
    n_values, masses = cube_l2_profile(f, window=window)
    return _lp(_jap(n_values) ** s * masses, p)


# ---------------------------------------------------------------------------
# Space-time fields and X^{s,b}-type norms
# ---------------------------------------------------------------------------

def cos2_taper(times: np.ndarray, t_window: float, shoulder: float = 0.1) -> np.ndarray:
    """Temporal cutoff: cos^2 ramps over the first and last `shoulder` fraction."""
    t = np.asarray(times, dtype=float)
    w = shoulder * t_window
    eta = np.ones_like(t)
    lo = t < w
    hi = t > t_window - w
    eta[lo] = 0.5 - 0.5 * np.cos(np.pi * t[lo] / w)
    eta[hi] = 0.5 - 0.5 * np.cos(np.pi * (t_window - t[hi]) / w)
    return eta


@dataclass(frozen=True, eq=False)
class SpaceTimeField:
    """K equispaced snapshots over the window [0, T_w), K a power of two.

    Snapshots are stored raw; the fixed cos^2 temporal taper is applied by the
    space-time transform (and exposed via :attr:`cutoff`).
    """

    grid: GridSpec
    t_window: float
    samples: np.ndarray  # (K, M) complex

    def __post_init__(self) -> None:
        arr = np.array(self.samples, dtype=np.complex128)
        k = arr.shape[0]
        if arr.ndim != 2 or arr.shape[1] != self.grid.points:
            raise ValueError(f"samples must be (K, {self.grid.points}), got {arr.shape}")
        if k < 2 or (k & (k - 1)) != 0:
            raise ValueError(f"snapshot count must be a power of two, got {k}")
        if not self.t_window > 0:
            raise ValueError("time window must be positive")
        if not np.all(np.isfinite(arr)):
            raise ValueError("space-time samples contain non-finite values")
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)

    @property
    def n_times(self) -> int:
        return self.samples.shape[0]

    @property
    def dt(self) -> float:
        return self.t_window / self.n_times

    @property
    def times(self) -> np.ndarray:
        return self.dt * np.arange(self.n_times)

    @property
    def cutoff(self) -> np.ndarray:
        return cos2_taper(self.times, self.t_window)

    def windowed_samples(self) -> np.ndarray:
        return self.cutoff[:, None] * self.samples

    def field_at(self, index: int) -> Field:
        return Field(self.grid, self.samples[index])

    def scaled(self, c: complex) -> "SpaceTimeField":
        return SpaceTimeField(self.grid, self.t_window, c * self.samples)


def free_evolution(f: Field, t_window: float, n_times: int) -> SpaceTimeField:
    """Trajectory of the free (Airy) flow sampled over [0, T_w)."""
    g = f.grid
    coef = forward_transform(f).coefficients
    t = (t_window / n_times) * np.arange(n_times)
    phases = np.exp(1j * np.outer(t, g.xi**3))
    samples = np.fft.ifft(g._phase()[None, :] * (phases * coef[None, :]), axis=1) / g.dx
    return SpaceTimeField(g, t_window, samples)


def _space_time_coefficients(u: SpaceTimeField) -> tuple[np.ndarray, np.ndarray]:
    """Windowed double transform: returns (tau lattice, coefficients (K, M)).

    Checks that the temporal band resolves the xi^3 dispersion of the occupied
    spatial band and reports the snapshot count that would.
    """
    g = u.grid
    k = u.n_times
    spatial = g.dx * g._phase()[None, :] * np.fft.fft(u.windowed_samples(), axis=1)
    col_peak = np.max(np.abs(spatial), axis=0)
    peak = float(np.max(col_peak))
    tau_nyq = np.pi * k / u.t_window
    if peak > 0.0:
        occupied = col_peak > 1e-13 * peak
        xi_occ = float(np.max(np.abs(g.xi[occupied])))
        if xi_occ**3 > 0.8 * tau_nyq:
            k_need = 1 << max(1, math.ceil(math.log2(u.t_window * xi_occ**3 / (0.8 * np.pi))))
            raise ResolutionError(
                f"temporal band tau_max = {tau_nyq:.4g} cannot resolve the "
                f"dispersion xi^3 = {xi_occ ** 3:.4g} of the occupied band; "
                f"need at least K = {k_need} snapshots"
            )
    st = u.dt * np.fft.fft(spatial, axis=0)
    tau = TWO_PI * np.fft.fftfreq(k, d=u.dt)
    return tau, st


def xsb_norm(u: SpaceTimeField, s: float, b: float) -> float:
    """X^{s,b} norm: <xi>^s <tau - xi^3>^b weighted space-time L^2."""
    tau, st = _space_time_coefficients(u)
    xi = u.grid.xi
    w_xi = _jap(xi) ** (2.0 * s)
    w_tau = (1.0 + (tau[:, None] - xi[None, :] ** 3) ** 2) ** b
    total = np.sum(w_xi[None, :] * w_tau * np.abs(st) ** 2)
    dtau = TWO_PI / u.t_window
    return float(np.sqrt(total * u.grid.dxi * dtau) / TWO_PI)


def xsb_p_norm(u: SpaceTimeField, s: float, b: float, p: float) -> float:
    """l^p-over-frequency-cubes X^{s,b} variant.

    Blocks are the sharp cubes [n, n+1): the L^2 content of each cube is
    weighted by <n>^s and aggregated in l^p_n.  At p = 2 this agrees with
    :func:`xsb_norm` up to the <n>-vs-<xi> weight equivalence on each cube.
    """
    if p < 1:
        raise ValueError(f"p must satisfy p >= 1, got {p}")
    tau, st = _space_time_coefficients(u)
    xi = u.grid.xi
    w_tau = (1.0 + (tau[:, None] - xi[None, :] ** 3) ** 2) ** b
    dtau = TWO_PI / u.t_window
    col = np.sum(w_tau * np.abs(st) ** 2, axis=0) * u.grid.dxi * dtau / TWO_PI**2
    cubes = np.floor(xi).astype(int)
    n_values = np.arange(cubes.min(), cubes.max() + 1)
    block2 = np.zeros(n_values.size)
    np.add.at(block2, cubes - cubes.min(), col)
    return _lp(_jap(n_values) ** s * np.sqrt(block2), p)
