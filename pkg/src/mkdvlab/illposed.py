"""Two-soliton sweeps probing failure of local uniform continuity below s = 1/4.

For each carrier N the harness builds a pair of soliton solutions whose
parameters follow the regime schedules

    nonneg-s (0 <= s < 1/4):  lam = N^{-2s},   |N1 - N2| = N^{2s-1+2theta} / T
    neg-s  (-1/p < s < 0):    lam = N^{-p s},  |N1 - N2| = N^{p s - 1 + (3/2) theta} / T

and measures, in M^{2,p}_s: the solution norms (time-independent), the
initial difference, the difference at time T, and the spectral remainder
outside |xi - N| < N^theta.  Evolution is analytic (the solitons are exact
solutions); the PDE solver is an optional cross-check on the smallest
carrier.  All norms are produced by the grid-free quadrature oracle and, when
grid sizing is feasible, re-produced by the grid pipeline and required to
agree.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .norms import modulation_norm, _jap, _lp
from .solitons import (
    SolitonParams,
    modulation_norm_of_spectrum,
    pair_difference_modsq,
    soliton_field,
    soliton_spectrum,
    spectral_support_halfwidth,
)
from .solver import SolverConfig, evolve_final
from .spectral import Field, GridSpec, ResolutionError

__all__ = [
    "ExperimentPlan",
    "ExperimentRecord",
    "ParameterChoice",
    "FitResult",
    "LemmaVerdict",
    "choose_parameters",
    "plan_grid",
    "run_point",
    "run_sweep",
    "fit_exponent",
    "verify_lemma",
]

REGIME_NONNEG = "nonneg-s"
REGIME_NEG = "neg-s"


def _default_theta(s: float, p: float) -> float:
    if s >= 0:
        return (1.0 - 4.0 * s) / 4.0
    # "sufficiently close to -ps from above"
    return -p * s + 0.05


def _validate_regime(s: float, p: float, theta: float) -> str:
    if p < 2:
        raise ValueError(f"the construction needs p >= 2, got p = {p}")
    if s >= 0:
        if s >= 0.25:
            raise ValueError(
                f"s = {s} is outside the instability range 0 <= s < 1/4"
            )
        if not (theta > 0 and 4.0 * s - 1.0 + 2.0 * theta < 0):
            raise ValueError(
                f"theta = {theta} violates 0 < theta and 4s - 1 + 2 theta < 0"
            )
        return REGIME_NONNEG
    if math.isinf(p):
        raise ValueError("the negative-regularity regime needs p < inf")
    if s <= -1.0 / p:
        raise ValueError(f"s = {s} is outside the range -1/p < s < 0 for p = {p}")
    if not (-p * s < theta < 1.0):
        raise ValueError(f"theta = {theta} violates -ps < theta < 1 (ps = {p * s})")
    return REGIME_NEG


@dataclass(frozen=True)
class ParameterChoice:
    lam: float
    theta: float
    n1: float
    n2: float

    @property
    def separation(self) -> float:
        return abs(self.n2 - self.n1)


def choose_parameters(
    s: float, p: float, t_final: float, n: float, theta: float | None = None
) -> ParameterChoice:
    """Scale, frequency-separation angle, and the two carriers for one sweep point."""
    if not t_final > 0:
        raise ValueError("T must be positive")
    if not n > 1:
        raise ValueError(f"carrier must exceed 1, got {n}")
    th = _default_theta(s, p) if theta is None else theta
    regime = _validate_regime(s, p, th)
    if regime == REGIME_NONNEG:
        lam = n ** (-2.0 * s)
        delta = n ** (2.0 * s - 1.0 + 2.0 * th) / t_final
    else:
        lam = n ** (-p * s)
        delta = n ** (p * s - 1.0 + 1.5 * th) / t_final
    return ParameterChoice(lam=lam, theta=th, n1=n, n2=n + delta)


@dataclass(frozen=True)
class ExperimentPlan:
    """One ill-posedness sweep: regularity, integrability, horizon, carriers."""

    s: float
    p: float
    t_final: float
    carriers: tuple[float, ...]
    theta: float | None = None
    use_solver: bool = False
    grid_check: bool = True
    norm_band: float = 3.0
    diff_floor: float = 0.3
    agreement_tol: float = 1e-4
    max_points_log2: int = 23

    def __post_init__(self) -> None:
        if not self.carriers:
            raise ValueError("carrier list must not be empty")
        if list(self.carriers) != sorted(self.carriers):
            raise ValueError("carriers must be ascending")
        _validate_regime(self.s, self.p, self.resolved_theta)

    @property
    def resolved_theta(self) -> float:
        return _default_theta(self.s, self.p) if self.theta is None else self.theta

    @property
    def regime(self) -> str:
        return REGIME_NONNEG if self.s >= 0 else REGIME_NEG

    @property
    def diff0_exponent(self) -> float:
        """Predicted log-log slope of the initial difference."""
        th = self.resolved_theta
        if self.regime == REGIME_NONNEG:
            return 4.0 * self.s - 1.0 + 2.0 * th
        return self.s + 1.5 * (th + self.p * self.s) - 1.0

    @property
    def tail_exponent(self) -> float:
        """The remainder decays like exp(-c N^{this exponent})."""
        th = self.resolved_theta
        return th + (2.0 * self.s if self.regime == REGIME_NONNEG else self.p * self.s)


@dataclass(frozen=True)
class ExperimentRecord:
    """Measured norms for one sweep point (quadrature values, grid cross-checks)."""

    carrier: float
    n1: float
    n2: float
    lam: float
    theta: float
    norm_u: float
    norm_v: float
    diff0: float
    difft: float
    tail: float
    grid_norm_u: float | None = None
    grid_diff0: float | None = None
    grid_difft: float | None = None
    solver_error: float | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def plan_grid(
    lam: float,
    xi_top: float,
    separation_x: float,
    cube_margin: float,
    max_points_log2: int = 23,
    for_solver: bool = False,
) -> GridSpec:
    """Auto-size a grid that resolves the pair: tails, separation, and spectra.

    xi_top: largest carrier (plus frequency offset) to resolve;
    separation_x: physical distance between the two soliton centers at time T
    (the spectral cross term oscillates at this rate, so dxi must undercut it);
    cube_margin: how many cubes beyond the carrier the norms need.
    """
    tail_len = 45.0 / lam
    length0 = max(
        16.0 * np.pi + 0.5,      # dxi <= 1/8
        16.0 * np.pi / lam,      # dxi <= lam / 8 resolves the spectrum shape
        4.0 * separation_x,      # dxi resolves the difference oscillation
        2.0 * separation_x + 2.0 * tail_len + 16.0,
    )
    length = 2.0 ** math.ceil(math.log2(length0))
    xi_need = xi_top + cube_margin + 24.0 * lam + 2.0
    factor = 2.0 if for_solver else 1.3  # solver needs dealias-band headroom
    points = 2 ** math.ceil(math.log2(length * factor * xi_need / np.pi))
    if points > 2**max_points_log2:
        cap = np.pi * 2.0**max_points_log2 / (factor * length)
        raise ResolutionError(
            f"grid sizing infeasible: {points} points needed "
            f"(cap 2^{max_points_log2}); with this box the feasible carrier "
            f"cap is about {cap:.3g}"
        )
    return GridSpec(length=length, points=points)


def _solver_cross_check(params: SolitonParams, t_final: float, grid: GridSpec) -> float:
    u0 = soliton_field(params, 0.0, grid)
    peak2 = params.scale**2 / 6.0
    band = (2.0 / 3.0) * grid.xi_nyquist
    dt_cfl = 0.4 / (36.0 * peak2 * band)
    # dominant interaction-picture rates: nonlinear rotation 6 lam^2 N,
    # phase detuning 3 N lam^2, profile drift lam^3
    slow_rate = 9.0 * params.carrier * params.scale**2 + 6.0 * params.scale**3
    dt_acc = 0.04 / slow_rate
    n_steps = max(64, math.ceil(t_final / min(dt_cfl, dt_acc)))
    got = evolve_final(
        u0, t_final, SolverConfig(dt=t_final / n_steps, mass_tol=1e-7)
    )
    exact = soliton_field(params, t_final, grid)
    num = np.sqrt(np.sum(np.abs(got.values - exact.values) ** 2) * grid.dx)
    den = np.sqrt(np.sum(np.abs(exact.values) ** 2) * grid.dx)
    return float(num / den)


def run_point(plan: ExperimentPlan, n: float) -> ExperimentRecord:
    """Measure one sweep point: norms, differences, tail, optional cross-checks."""
    choice = choose_parameters(plan.s, plan.p, plan.t_final, n, plan.theta)
    lam, th = choice.lam, choice.theta
    pa = SolitonParams(carrier=choice.n1, scale=lam)
    pb = SolitonParams(carrier=choice.n2, scale=lam)
    hw = spectral_support_halfwidth(lam)
    n_lo = int(np.floor(choice.n1 - hw))
    n_hi = int(np.ceil(choice.n2 + hw))
    s, p = plan.s, plan.p

    def modsq_single(params):
        def modsq(xi):
            return soliton_spectrum(params, xi) ** 2

        return modsq

    norm_u, n_values, masses_u = modulation_norm_of_spectrum(
        modsq_single(pa), s, p, n_lo, n_hi
    )
    norm_v, _, _ = modulation_norm_of_spectrum(modsq_single(pb), s, p, n_lo, n_hi)
    diff0, _, _ = modulation_norm_of_spectrum(
        pair_difference_modsq(pa, pb, 0.0), s, p, n_lo, n_hi
    )
    difft, _, _ = modulation_norm_of_spectrum(
        pair_difference_modsq(pa, pb, plan.t_final), s, p, n_lo, n_hi
    )
    # spectral remainder outside the core |n - N| < N^theta
    outside = np.abs(n_values - n) >= n**th
    tail = _lp(_jap(n_values[outside]) ** s * masses_u[outside], p)

    grid_norm_u = grid_diff0 = grid_difft = solver_error = None
    solver_here = plan.use_solver and n == min(plan.carriers)
    if plan.grid_check or solver_here:
        separation = 3.0 * abs(pb.carrier**2 - pa.carrier**2) * plan.t_final
        cube_margin = max(n**th, 4.0)
        grid = plan_grid(
            lam,
            max(pa.carrier, pb.carrier),
            separation,
            cube_margin,
            plan.max_points_log2,
            for_solver=solver_here,
        )
        if plan.grid_check:
            ua0 = soliton_field(pa, 0.0, grid)
            ub0 = soliton_field(pb, 0.0, grid)
            uat = soliton_field(pa, plan.t_final, grid)
            ubt = soliton_field(pb, plan.t_final, grid)
            grid_norm_u = modulation_norm(ua0, s, p)
            grid_diff0 = modulation_norm(Field(grid, ua0.values - ub0.values), s, p)
            grid_difft = modulation_norm(Field(grid, uat.values - ubt.values), s, p)
            for got, want, label in (
                (grid_norm_u, norm_u, "norm_u"),
                (grid_diff0, diff0, "diff0"),
                (grid_difft, difft, "diffT"),
            ):
                if abs(got - want) > plan.agreement_tol * want:
                    raise RuntimeError(
                        f"grid/quadrature disagreement on {label} at N = {n}: "
                        f"{got!r} vs {want!r}"
                    )
        if solver_here:
            solver_error = _solver_cross_check(pa, plan.t_final, grid)
            if solver_error > 1e-4:
                raise RuntimeError(
                    f"solver cross-check failed at N = {n}: relative error "
                    f"{solver_error:.3e} > 1e-4"
                )

    return ExperimentRecord(
        carrier=n,
        n1=choice.n1,
        n2=choice.n2,
        lam=lam,
        theta=th,
        norm_u=norm_u,
        norm_v=norm_v,
        diff0=diff0,
        difft=difft,
        tail=tail,
        grid_norm_u=grid_norm_u,
        grid_diff0=grid_diff0,
        grid_difft=grid_difft,
        solver_error=solver_error,
    )


def run_sweep(plan: ExperimentPlan, jobs: int = 1) -> list[ExperimentRecord]:
    """All sweep points, optionally in parallel; records ordered by carrier."""
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(run_point, [plan] * len(plan.carriers), plan.carriers))
    else:
        records = [run_point(plan, n) for n in plan.carriers]
    return sorted(records, key=lambda r: r.carrier)


@dataclass(frozen=True)
class FitResult:
    slope: float
    r_squared: float


def fit_exponent(records: list[ExperimentRecord], field_name: str) -> FitResult:
    """Least-squares slope of log(field) against log(carrier)."""
    if len(records) < 4:
        raise ValueError(f"need at least 4 records to fit, got {len(records)}")
    n = np.array([r.carrier for r in records], dtype=float)
    if np.max(n) / np.min(n) < 8.0:
        raise ValueError("carriers must span at least 3 octaves")
    y = np.array([getattr(r, field_name) for r in records], dtype=float)
    if np.any(y <= 0):
        raise ValueError(f"cannot fit a power law: {field_name} has nonpositive values")
    logn, logy = np.log(n), np.log(y)
    slope, intercept = np.polyfit(logn, logy, 1)
    fitted = slope * logn + intercept
    ss_res = float(np.sum((logy - fitted) ** 2))
    ss_tot = float(np.sum((logy - np.mean(logy)) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return FitResult(slope=float(slope), r_squared=r2)


@dataclass(frozen=True)
class LemmaVerdict:
    """Structured pass/fail against the three instability statements."""

    passed: bool
    regime: str
    bounded_norms: bool
    norm_ratio: float
    diff0_decreasing: bool
    diff0_slope: float
    diff0_r_squared: float
    expected_exponent: float
    slope_matches_norm: bool
    slope_matches_square: bool
    squared_convention: str
    difft_floor_ok: bool
    difft_min_top_half: float
    norm_median: float
    tail_decay_rate: float
    tail_decay_ok: bool
    initial_bound_constant: float
    thresholds: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def verify_lemma(records: list[ExperimentRecord], plan: ExperimentPlan) -> LemmaVerdict:
    """PASS iff norms sit in a band, diff0 vanishes with the predicted rate,
    and diffT stays bounded below on the top half of the sweep."""
    records = sorted(records, key=lambda r: r.carrier)
    pooled = np.array([r.norm_u for r in records] + [r.norm_v for r in records])
    norm_ratio = float(np.max(pooled) / np.min(pooled))
    bounded = norm_ratio <= plan.norm_band

    diff0 = np.array([r.diff0 for r in records])
    decreasing = bool(np.all(np.diff(diff0) < 0))
    fit = fit_exponent(records, "diff0")
    slope_ok = fit.slope < 0

    expected = plan.diff0_exponent
    tol = 0.15 * abs(expected)
    matches_norm = abs(fit.slope - expected) <= tol
    matches_square = abs(2.0 * fit.slope - expected) <= tol
    convention = {
        (True, True): "both",
        (True, False): "norm",
        (False, True): "square",
        (False, False): "neither",
    }[(matches_norm, matches_square)]

    half = len(records) // 2
    top = records[half:]
    difft_min = float(min(r.difft for r in top))
    median = float(np.median([r.norm_u for r in records]))
    floor_ok = difft_min >= plan.diff_floor * median

    # remainder decay: ln(tail) against N^{tail_exponent}, fitted rate c > 0
    n = np.array([r.carrier for r in records])
    tails = np.array([max(r.tail, 1e-300) for r in records])
    rate, _ = np.polyfit(n**plan.tail_exponent, np.log(tails), 1)
    tail_rate = float(-rate)

    # one fitted constant for the initial-difference upper bound
    if plan.regime == REGIME_NONNEG:
        bound = np.array([r.carrier ** (2 * plan.s) * (r.n2 - r.n1) for r in records])
    else:
        bound = np.array(
            [r.carrier**plan.s * r.lam**-0.5 * (r.n2 - r.n1) for r in records]
        )
    c_init = float(np.max(diff0 / bound))

    return LemmaVerdict(
        passed=bool(bounded and decreasing and slope_ok and floor_ok),
        regime=plan.regime,
        bounded_norms=bounded,
        norm_ratio=norm_ratio,
        diff0_decreasing=decreasing,
        diff0_slope=fit.slope,
        diff0_r_squared=fit.r_squared,
        expected_exponent=expected,
        slope_matches_norm=matches_norm,
        slope_matches_square=matches_square,
        squared_convention=convention,
        difft_floor_ok=floor_ok,
        difft_min_top_half=difft_min,
        norm_median=median,
        tail_decay_rate=tail_rate,
        tail_decay_ok=tail_rate > 0,
        initial_bound_constant=c_init,
        thresholds={
            "norm_band": plan.norm_band,
            "diff_floor": plan.diff_floor,
            "slope_tolerance": 0.15,
        },
    )
