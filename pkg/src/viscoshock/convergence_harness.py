"""Small-viscosity sweeps: sup errors against the inviscid shock.

Errors are measured over the wedge that excludes a strip of half-width h
around the shock ray and times before h (in unscaled coordinates).  Two
error notions are computed per viscosity strength: the analytic
traveling-wave tail error (no PDE solve, the supremum sits exactly at
distance h from the ray) and the full-solution error from an actual
stretched-frame run sampled back onto the unscaled lattice.  A sweep fits
the tail model error ~ C * exp(-c/alpha) and reports monotonicity.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .euler_waves import PressureLaw, ShockData, riemann_shock_eval
from .lagrangian_solver import Grid1D, init_state, run
from .shock_profile import ViscousProfile, compute_profile, tail_rates

__all__ = [
    "OmegaSpec",
    "SolverSizing",
    "FullErrorResult",
    "SweepResult",
    "omega_positions",
    "profile_only_error",
    "full_error",
    "alpha_sweep",
]


@dataclass(frozen=True)
class OmegaSpec:
    """Sampling wedge: |x - s*t| >= h and h <= t <= t_final."""

    h: float
    t_final: float
    x_samples: int = 801
    t_samples: int = 5

    def __post_init__(self):
        if not 0.0 < self.h < self.t_final:
            raise ValidationError("require 0 < h < t_final")
        if self.x_samples < 2 or self.t_samples < 2:
            raise ValidationError("need at least 2 samples per axis")


@dataclass(frozen=True)
class SolverSizing:
    """Automatic grid sizing for full-solution error runs.

    The stretched-frame tail scale is 1/mu with mu the stretched decay
    rate; margin_efolds of that scale separate the wave from either
    boundary and cells_per_width cells resolve one scale.
    """

    cells_per_width: float = 26.0
    margin_efolds: float = 20.0
    cfl: float = 0.4
    tau_max: float = 200.0
    profile_n: int = 20001
    profile_tol: float = 1e-12

    def __post_init__(self):
        if self.cells_per_width < 20.0:
            raise ValidationError("need at least 20 cells per profile width")
        if self.tau_max <= 0.0:
            raise ValidationError("tau_max must be positive")


def _tail_pair_error(profile: ViscousProfile, xi: float, side: str) -> float:
    shock = profile.shock
    V = profile.eval_V(xi)
    ref = shock.v_minus if side == "left" else shock.v_plus
    # velocity deviation is |s| times the volume deviation (integrated
    # mass equation), so the pair error carries the factor 1 + |s|
    return (1.0 + abs(shock.s)) * abs(V - ref)


def profile_only_error(shock: ShockData, alpha: float, law: PressureLaw,
                       omega: OmegaSpec,
                       profile: ViscousProfile | None = None,
                       tol: float = 1e-12) -> float:
    """Sup of |v - v_shock| + |u - u_shock| outside the strip, from the
    traveling-wave tails alone.

    The wave error depends only on the distance to the ray and decays
    monotonically, so the supremum over the wedge is attained at
    distance h on whichever side decays slower.
    """
    if profile is None:
        profile = compute_profile(shock, alpha, law, tol=tol)
    return max(_tail_pair_error(profile, -omega.h, "left"),
               _tail_pair_error(profile, omega.h, "right"))


def omega_positions(shock: ShockData, omega: OmegaSpec, t: float,
                    x_lo: float, x_hi: float) -> np.ndarray:
    """Sample positions at time t: a uniform lattice over [x_lo, x_hi]
    plus the two points exactly at distance h from the ray, everything
    inside the strip |x - s*t| < h excluded."""
    if t < omega.h:
        raise ValidationError("wedge sampling starts at t = h")
    xs = np.concatenate((np.linspace(x_lo, x_hi, omega.x_samples),
                         [shock.s * t - omega.h, shock.s * t + omega.h]))
    keep = np.abs(xs - shock.s * t) >= omega.h * (1.0 - 1e-12)
    keep &= (xs >= x_lo) & (xs <= x_hi)
    return xs[keep]


@dataclass(frozen=True)
class FullErrorResult:
    error: float
    capped: bool
    n_cells: int
    tau_end: float
    v_min: float
    v_max: float
    window_ok: bool     # volumes stayed within [v_plus/4, 2*v_plus]


def full_error(shock: ShockData, alpha: float, law: PressureLaw,
               omega: OmegaSpec,
               sizing: SolverSizing = SolverSizing()) -> FullErrorResult:
    """Sup error of an actual viscous run over the wedge lattice.

    The solver runs in stretched coordinates to t_final/alpha (capped at
    sizing.tau_max), snapshots at the wedge's time lattice, and the
    fields are linearly interpolated at the unscaled sample positions,
    always including the two points exactly at distance h from the ray
    where the supremum of the wave error sits.
    """
    profile = compute_profile(shock, alpha, law, tol=sizing.profile_tol,
                              n=sizing.profile_n)
    lam_m, lam_p = tail_rates(shock, alpha, law)
    mu = alpha * min(lam_m, -lam_p)          # stretched-frame tail rate
    margin = sizing.margin_efolds / mu
    tau_end = omega.t_final / alpha
    capped = tau_end > sizing.tau_max
    if capped:
        tau_end = sizing.tau_max
        if alpha * tau_end < omega.h:
            raise ValidationError(
                "tau_max caps the run before the sampling window opens")
    y_min = shock.s * tau_end - margin - 2.0 / mu
    y_max = max(margin, omega.h / alpha + 6.0 / mu)
    dy_target = 1.0 / (mu * sizing.cells_per_width)
    n_cells = int(np.ceil((y_max - y_min) / dy_target))
    grid = Grid1D(y_min=y_min, y_max=y_max, n_cells=n_cells)

    state = init_state(profile, grid)
    t_hi = min(omega.t_final, alpha * tau_end)
    t_lattice = np.linspace(omega.h, t_hi, omega.t_samples)
    snaps = []
    _, record = run(state, tau_end,
                    observer=lambda s: snaps.append(s),
                    observe_at=list(t_lattice / alpha), cfl=sizing.cfl)

    yc, yi = grid.centers(), grid.interfaces()
    err = 0.0
    for snap in snaps:
        t = alpha * snap.tau
        if t < omega.h - 1e-9:
            continue                        # final-state call below h
        xs = omega_positions(shock, omega, t,
                             alpha * grid.y_min, alpha * grid.y_max)
        ys = xs / alpha
        v_num = np.interp(ys, yc, snap.v)
        u_num = np.interp(ys, yi, snap.u)
        v_ref, u_ref = riemann_shock_eval(shock, xs, t)
        err = max(err, float(np.max(np.abs(v_num - v_ref)
                                    + np.abs(u_num - u_ref))))
    window_ok = (record.v_min >= shock.v_plus / 4.0
                 and record.v_max <= 2.0 * shock.v_plus)
    return FullErrorResult(error=err, capped=capped, n_cells=n_cells,
                           tau_end=tau_end, v_min=record.v_min,
                           v_max=record.v_max, window_ok=window_ok)


@dataclass
class SweepResult:
    """Assembled sweep: one entry per viscosity strength, finest last."""

    alphas: list
    e_profile: list
    e_full: list                 # NaN entries when full runs were skipped
    capped: list
    failures: dict               # alpha -> error message
    c_fit: float = float("nan")
    big_c_fit: float = float("nan")
    r_squared: float = float("nan")
    monotone_flag: bool = False
    window_ok: bool = True
    extra: dict = field(default_factory=dict)


def _fit_exponential(alphas, errors):
    x = 1.0 / np.asarray(alphas, dtype=float)
    y = np.log(np.asarray(errors, dtype=float))
    slope, intercept = np.polyfit(x, y, 1)
    fitted = slope * x + intercept
    ss_res = float(np.sum((y - fitted) ** 2))
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0.0 else 1.0
    return -float(slope), float(np.exp(intercept)), r2


def alpha_sweep(shock: ShockData, law: PressureLaw, alphas,
                omega: OmegaSpec, include_full: bool = True,
                sizing: SolverSizing = SolverSizing(),
                jobs: int = 1) -> SweepResult:
    """Run the error measurements over a strictly decreasing alpha list.

    Entries run independently (optionally in a thread pool; the result
    assembly is ordered by alpha so serial and concurrent sweeps agree
    bitwise).  Per-entry failures are recorded and the sweep continues.
    """
    alphas = [float(a) for a in alphas]
    if len(alphas) < 3:
        raise ValidationError("sweep needs at least 3 alpha values")
    if any(a2 >= a1 for a1, a2 in zip(alphas, alphas[1:])) or alphas[-1] <= 0:
        raise ValidationError("alphas must be strictly decreasing and positive")
    if jobs < 1:
        raise ValidationError("jobs must be >= 1")

    def task(a):
        e_p = profile_only_error(shock, a, law, omega, tol=sizing.profile_tol)
        if include_full:
            res = full_error(shock, a, law, omega, sizing)
            return e_p, res.error, res.capped, res.window_ok
        return e_p, float("nan"), False, True

    results = {}
    failures = {}
    if jobs == 1:
        for a in alphas:
            try:
                results[a] = task(a)
            except Exception as exc:
                failures[a] = f"{type(exc).__name__}: {exc}"
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futures = {a: pool.submit(task, a) for a in alphas}
        for a, fut in futures.items():
            try:
                results[a] = fut.result()
            except Exception as exc:
                failures[a] = f"{type(exc).__name__}: {exc}"

    nan = float("nan")
    e_profile = [results[a][0] if a in results else nan for a in alphas]
    e_full = [results[a][1] if a in results else nan for a in alphas]
    capped = [results[a][2] if a in results else False for a in alphas]
    window_ok = all(results[a][3] for a in results)

    out = SweepResult(alphas=alphas, e_profile=e_profile, e_full=e_full,
                      capped=capped, failures=failures, window_ok=window_ok)
    valid = [(a, e) for a, e in zip(alphas, e_profile)
             if np.isfinite(e) and e > 0.0]
    if len(valid) >= 2:
        out.c_fit, out.big_c_fit, out.r_squared = _fit_exponential(
            [a for a, _ in valid], [e for _, e in valid])
    finite = [e for e in e_profile if np.isfinite(e)]
    out.monotone_flag = (len(finite) == len(alphas)
                         and all(b < a for a, b in zip(finite, finite[1:])))
    return out
