"""Staggered conservative scheme for the stretched viscous system.

The PDE is solved in stretched coordinates (y, tau) in which the
dissipative coefficient is order one and the viscosity strength alpha
enters only through the exponent of 1/v**(1+alpha):

    v_tau - u_y = 0,
    u_tau + p(v)_y = (u_y / v**(1+alpha))_y.

Volumes live at cell centers and velocities at cell interfaces, so both
conservation laws telescope exactly.  The pressure gradient is explicit,
the dissipative term is backward Euler with the coefficient frozen at the
current volume field, which removes the parabolic step restriction; the
remaining constraint is the acoustic CFL limit.  Velocities at the two
boundary interfaces are held at their initial values (domains are sized
so the wave never comes near the boundary), and volumes evolve
conservatively everywhere so that the discrete mass identity is exact to
rounding.
"""

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.linalg import solve_banded

from .errors import NumericalError, ValidationError
from .euler_waves import PressureLaw, ShockData, d_pressure, pressure
from .shock_profile import ViscousProfile, rescaled_profile_eval

__all__ = [
    "Grid1D",
    "SolverState",
    "RunRecord",
    "init_state",
    "init_constant",
    "step",
    "run",
    "step_flux_balance",
]

DTAU_FLOOR = 1e-12


@dataclass(frozen=True)
class Grid1D:
    """Uniform 1-D grid: volumes at the n_cells centers, velocities at
    the n_cells + 1 interfaces."""

    y_min: float
    y_max: float
    n_cells: int

    def __post_init__(self):
        if not self.y_min < self.y_max:
            raise ValidationError("require y_min < y_max")
        if self.n_cells < 16:
            raise ValidationError("n_cells must be at least 16")

    @property
    def dy(self) -> float:
        return (self.y_max - self.y_min) / self.n_cells

    def centers(self) -> np.ndarray:
        return self.y_min + (np.arange(self.n_cells) + 0.5) * self.dy

    def interfaces(self) -> np.ndarray:
        return self.y_min + np.arange(self.n_cells + 1) * self.dy


@dataclass(frozen=True)
class SolverState:
    """Immutable snapshot of the discrete fields at one instant.

    bc_u holds the pinned boundary velocities, bc_v the reference end
    volumes used for the positivity window and reporting.
    """

    grid: Grid1D
    v: np.ndarray
    u: np.ndarray
    tau: float
    alpha: float
    law: PressureLaw
    step_count: int = 0
    bc_u: tuple = (0.0, 0.0)
    bc_v: tuple = (1.0, 1.0)
    shock: ShockData | None = field(default=None, repr=False)

    def max_wave_speed(self) -> float:
        return float(np.sqrt(np.max(-d_pressure(self.v, self.law))))


def _freeze(arr):
    arr = np.ascontiguousarray(arr, dtype=float)
    arr.setflags(write=False)
    return arr


def init_state(profile: ViscousProfile, grid: Grid1D) -> SolverState:
    """Sample the traveling wave at tau = 0 as initial data.

    Fails if the grid is too narrow for the wave tails: the sampled end
    values must sit within 1e-8 * delta of the far-field states.
    """
    shock = profile.shock
    v, _ = rescaled_profile_eval(profile, grid.centers(), 0.0)
    _, u = rescaled_profile_eval(profile, grid.interfaces(), 0.0)
    vl, _ = rescaled_profile_eval(profile, grid.y_min, 0.0)
    vr, _ = rescaled_profile_eval(profile, grid.y_max, 0.0)
    tail_tol = 1e-8 * shock.delta
    if abs(vl - shock.v_minus) >= tail_tol or abs(vr - shock.v_plus) >= tail_tol:
        raise ValidationError(
            "grid too narrow: wave tails exceed 1e-8*delta at the boundary")
    return SolverState(grid=grid, v=_freeze(v), u=_freeze(u), tau=0.0,
                       alpha=profile.alpha, law=profile.law, step_count=0,
                       bc_u=(float(u[0]), float(u[-1])),
                       bc_v=(shock.v_minus, shock.v_plus), shock=shock)


def init_constant(grid: Grid1D, v0: float, u0: float, alpha: float,
                  law: PressureLaw) -> SolverState:
    """Uniform state, handy for exactness and conservation tests."""
    if v0 <= 0.0:
        raise ValidationError("v0 must be positive")
    v = np.full(grid.n_cells, float(v0))
    u = np.full(grid.n_cells + 1, float(u0))
    return SolverState(grid=grid, v=_freeze(v), u=_freeze(u), tau=0.0,
                       alpha=alpha, law=law, step_count=0,
                       bc_u=(float(u0), float(u0)), bc_v=(float(v0), float(v0)))


def step(state: SolverState, dtau: float) -> SolverState:
    """Advance one time step of size dtau.

    Velocity first: explicit pressure gradient plus implicit dissipation
    through a tridiagonal solve (coefficient 1/v**(1+alpha) frozen at the
    current volumes, boundary interfaces pinned).  Volumes then update
    from the new interface velocities, which makes the mass budget
    telescope exactly.  The caller is responsible for respecting the
    acoustic CFL limit.
    """
    if not np.isfinite(dtau) or dtau < DTAU_FLOOR:
        raise NumericalError(f"time step {dtau} below the {DTAU_FLOOR} floor")
    grid = state.grid
    n = grid.n_cells
    dy = grid.dy
    v, u = state.v, state.u
    ubl, ubr = state.bc_u

    c = v ** (1.0 + state.alpha)
    p = pressure(v, state.law)
    r = dtau / dy ** 2

    diag = 1.0 + r / c[:-1] + r / c[1:]
    lower = -r / c[1:-1]
    upper = -r / c[1:-1]
    rhs = u[1:-1] - (dtau / dy) * (p[1:] - p[:-1])
    rhs[0] += r / c[0] * ubl
    rhs[-1] += r / c[-1] * ubr

    ab = np.zeros((3, n - 1))
    ab[0, 1:] = upper
    ab[1, :] = diag
    ab[2, :-1] = lower
    try:
        interior = solve_banded((1, 1), ab, rhs)
    except Exception as exc:  # LinAlgError or LAPACK failure
        raise NumericalError(f"tridiagonal solve failed: {exc}") from exc
    if not np.all(np.isfinite(interior)):
        raise NumericalError("tridiagonal solve produced non-finite values")

    u_new = np.concatenate(([ubl], interior, [ubr]))
    v_new = v + (dtau / dy) * (u_new[1:] - u_new[:-1])
    if np.any(v_new <= 0.0):
        raise NumericalError(
            f"volume became non-positive at tau={state.tau + dtau:.6g}")

    return replace(state, v=_freeze(v_new), u=_freeze(u_new),
                   tau=state.tau + dtau, step_count=state.step_count + 1)


def step_flux_balance(before: SolverState, after: SolverState):
    """Exact boundary-flux bookkeeping for one step (for conservation
    tests): returns (mass change, mass flux, momentum change, momentum
    flux) where the changes are over interior degrees of freedom and the
    fluxes are the telescoped boundary terms of the update."""
    grid = before.grid
    dy = grid.dy
    dtau = after.tau - before.tau
    ubl, ubr = before.bc_u
    mass_change = float(np.sum(after.v - before.v) * dy)
    mass_flux = dtau * (ubr - ubl)
    p = pressure(before.v, before.law)
    c = before.v ** (1.0 + before.alpha)
    flux_l = (after.u[1] - after.u[0]) / (dy * c[0])
    flux_r = (after.u[-1] - after.u[-2]) / (dy * c[-1])
    mom_change = float(np.sum(after.u[1:-1] - before.u[1:-1]) * dy)
    mom_flux = dtau * (-(p[-1] - p[0]) + (flux_r - flux_l))
    return mass_change, mass_flux, mom_change, mom_flux


@dataclass
class RunRecord:
    """Trajectory metadata collected by run()."""

    observed_taus: list
    n_steps: int
    v_min: float
    v_max: float


def run(state: SolverState, tau_end: float, observer=None,
        observe_every: float | None = None, cfl: float = 0.4,
        max_dtau: float | None = None,
        observe_at: list | None = None):
    """March the state to tau_end with automatic step selection.

    The step is the acoustic CFL limit cfl*dy/max|wave speed| recomputed
    from the current volumes, optionally capped by max_dtau (the
    convergence tests tie the step to dy**2 this way), and clipped so
    observation times and tau_end are hit exactly.  The observer, if
    given, receives the read-only state at each multiple of
    observe_every and at tau_end; an interval longer than the run yields
    exactly one call at the end.  observe_at replaces the uniform
    schedule with explicit times.  Returns (final state, RunRecord).
    """
    if tau_end < state.tau - 1e-15:
        raise ValidationError("tau_end must not precede the current time")
    if not 0.0 < cfl < 1.0:
        raise ValidationError("cfl must be in (0, 1)")
    if observe_every is not None and observe_every <= 0.0:
        raise ValidationError("observe_every must be positive")
    if max_dtau is not None and max_dtau <= 0.0:
        raise ValidationError("max_dtau must be positive")

    record = RunRecord(observed_taus=[], n_steps=0,
                       v_min=float(np.min(state.v)),
                       v_max=float(np.max(state.v)))
    if tau_end <= state.tau + 1e-15:
        return state, record

    targets = []
    if observe_at is not None:
        targets = [t for t in sorted(observe_at)
                   if state.tau < t < tau_end - 1e-12 * max(1.0, tau_end)]
    elif observer is not None and observe_every is not None:
        k = 1
        while k * observe_every < tau_end - 1e-12 * max(1.0, tau_end):
            targets.append(state.tau + k * observe_every)
            k += 1
    targets.append(tau_end)

    dy = state.grid.dy
    t_idx = 0
    while t_idx < len(targets):
        target = targets[t_idx]
        while state.tau < target - 1e-12 * max(1.0, target):
            dt = cfl * dy / state.max_wave_speed()
            if max_dtau is not None:
                dt = min(dt, max_dtau)
            dt = min(dt, target - state.tau)
            try:
                state = step(state, dt)
            except NumericalError as exc:
                raise NumericalError(
                    f"run aborted at tau={state.tau:.6g}: {exc}") from exc
            record.n_steps += 1
            record.v_min = min(record.v_min, float(np.min(state.v)))
            record.v_max = max(record.v_max, float(np.max(state.v)))
        if observer is not None:
            observer(state)
        record.observed_taus.append(state.tau)
        t_idx += 1
    return state, record
