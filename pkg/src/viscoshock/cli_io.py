"""Flat-file configuration, deterministic emission and the subcommands.

Config files are flat ``key = value`` lines with ``#`` comments; unknown
keys are hard errors so typos cannot silently fall back to defaults.
All emitted files are byte-reproducible: reals carry 17 significant
digits (lossless double round trip), line endings are LF, JSON keys are
sorted.  Nothing in the package consumes randomness.

Exit codes: 0 success, 1 validation error, 2 numerical failure,
3 I/O error.
"""

import argparse
import json
import sys
import time
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from . import convergence_harness as ch
from . import energy_diagnostics as ed
from . import euler_waves as ew
from . import lagrangian_solver as ls
from . import shock_profile as sp
from .errors import NumericalError, ValidationError

__all__ = [
    "RunConfig",
    "parse_config",
    "load_config",
    "emit_csv",
    "emit_json",
    "main",
]


# ---------------------------------------------------------------------------
# configuration

@dataclass(frozen=True)
class RunConfig:
    """Typed union of every key the subcommands understand."""

    gamma: float = 2.0
    v_minus: float = 1.2
    v_plus: float = 1.0
    u_minus: float = 0.0
    alpha: float = 0.1
    tol: float = 1e-10
    span: float = 0.0            # 0 picks the automatic span
    n: int = 4001
    y_min: float = -70.0
    y_max: float = 52.0
    n_cells: int = 1600
    cfl: float = 0.4
    tau_end: float = 8.0
    observe_every: float = 0.25
    dy2_step_factor: float = 0.0  # >0 caps the step at factor*dy**2
    inject_amplitude: float = 0.0
    inject_center: float = 25.0
    inject_width: float = 2.0
    h: float = 1.0
    t_final: float = 2.0
    x_samples: int = 801
    t_samples: int = 5
    alphas: tuple = (0.4, 0.2, 0.1, 0.05)
    tau_max: float = 200.0
    jobs: int = 1
    cells_per_width: float = 26.0
    margin_efolds: float = 20.0
    deterministic: bool = True


def _parse_bool(text):
    t = text.strip().lower()
    if t in ("true", "yes", "1"):
        return True
    if t in ("false", "no", "0"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_float_list(text):
    parts = text.replace(",", " ").split()
    if not parts:
        raise ValueError("empty list")
    return tuple(float(p) for p in parts)


_PARSERS = {float: float, int: int, bool: _parse_bool, tuple: _parse_float_list}

_RANGE_CHECKS = {
    "gamma": (lambda v: v >= 1.0, "must be >= 1"),
    "v_minus": (lambda v: v > 0.0, "must be positive"),
    "v_plus": (lambda v: v > 0.0, "must be positive"),
    "alpha": (lambda v: v > 0.0, "must be positive"),
    "tol": (lambda v: v > 0.0, "must be positive"),
    "span": (lambda v: v >= 0.0, "must be nonnegative (0 = automatic)"),
    "n": (lambda v: v >= 33, "must be at least 33"),
    "n_cells": (lambda v: v >= 16, "must be at least 16"),
    "cfl": (lambda v: 0.0 < v < 1.0, "must lie in (0, 1)"),
    "tau_end": (lambda v: v >= 0.0, "must be nonnegative"),
    "observe_every": (lambda v: v > 0.0, "must be positive"),
    "dy2_step_factor": (lambda v: v >= 0.0, "must be nonnegative"),
    "inject_amplitude": (lambda v: v >= 0.0, "must be nonnegative"),
    "inject_width": (lambda v: v > 0.0, "must be positive"),
    "h": (lambda v: v > 0.0, "must be positive"),
    "x_samples": (lambda v: v >= 2, "must be at least 2"),
    "t_samples": (lambda v: v >= 2, "must be at least 2"),
    "alphas": (lambda v: len(v) > 0 and all(a > 0 for a in v)
               and all(b < a for a, b in zip(v, v[1:])),
               "must be strictly decreasing positive reals"),
    "tau_max": (lambda v: v > 0.0, "must be positive"),
    "jobs": (lambda v: v >= 1, "must be at least 1"),
    "cells_per_width": (lambda v: v >= 20.0, "must be at least 20"),
    "margin_efolds": (lambda v: v > 0.0, "must be positive"),
}


def parse_config(text: str) -> RunConfig:
    """Parse and validate flat ``key = value`` configuration text."""
    types = {f.name: f.type for f in fields(RunConfig)}
    defaults = RunConfig()
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"line {lineno}: expected 'key = value'")
        key, _, val = line.partition("=")
        key = key.strip()
        val = val.strip()
        if key not in types:
            raise ValidationError(f"unknown key: {key}")
        if key in values:
            raise ValidationError(f"duplicate key: {key}")
        ftype = type(getattr(defaults, key))
        try:
            values[key] = _PARSERS[ftype](val)
        except ValueError as exc:
            raise ValidationError(
                f"key {key}: cannot parse {val!r} ({exc})") from exc

    cfg = RunConfig(**values)
    for key, (ok, msg) in _RANGE_CHECKS.items():
        if not ok(getattr(cfg, key)):
            raise ValidationError(f"key {key}: {msg}")
    if cfg.v_plus >= cfg.v_minus:
        raise ValidationError(
            "key v_plus: backward-shock ordering requires v_minus > v_plus")
    if cfg.t_final <= cfg.h:
        raise ValidationError("key t_final: must exceed h")
    if cfg.y_min >= cfg.y_max:
        raise ValidationError("key y_min: must be below y_max")
    return cfg


def load_config(path) -> RunConfig:
    return parse_config(Path(path).read_text(encoding="utf-8"))


# ---------------------------------------------------------------------------
# deterministic emission

def _fmt(value) -> str:
    if isinstance(value, bool) or isinstance(value, np.bool_):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def emit_csv(rows, schema, path):
    """Write rows under a header with lossless real formatting."""
    schema = list(schema)
    lines = [",".join(schema)]
    for i, row in enumerate(rows):
        row = list(row)
        if len(row) != len(schema):
            raise ValidationError(
                f"row {i} has {len(row)} fields, schema has {len(schema)}")
        lines.append(",".join(_fmt(x) for x in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8",
                          newline="\n")


def emit_json(summary, path):
    """Write a JSON object with sorted keys and a trailing newline."""
    Path(path).write_text(
        json.dumps(summary, sort_keys=True, indent=2) + "\n",
        encoding="utf-8", newline="\n")


# ---------------------------------------------------------------------------
# shared builders

def _law_and_shock(gamma, v_minus, v_plus, u_minus):
    law = ew.PressureLaw(gamma=gamma)
    shock = ew.build_shock(v_minus, v_plus, u_minus, law)
    return law, shock


def _profile_from_config(cfg: RunConfig, law, shock, n=None, tol=None):
    span = None if cfg.span == 0.0 else cfg.span
    return sp.compute_profile(shock, cfg.alpha, law,
                              tol=tol if tol is not None else cfg.tol,
                              span=span, n=n if n is not None else cfg.n)


def _initial_state(cfg: RunConfig, profile):
    grid = ls.Grid1D(y_min=cfg.y_min, y_max=cfg.y_max, n_cells=cfg.n_cells)
    state = ls.init_state(profile, grid)
    if cfg.inject_amplitude > 0.0:
        z = (grid.interfaces() - cfg.inject_center) / cfg.inject_width
        bump = cfg.inject_amplitude * np.sqrt(2.0 * np.e) * z * np.exp(-z * z)
        u = np.array(state.u) + bump
        u.setflags(write=False)
        state = ls.SolverState(grid=grid, v=state.v, u=u, tau=0.0,
                               alpha=state.alpha, law=state.law,
                               bc_u=(float(u[0]), float(u[-1])),
                               bc_v=state.bc_v, shock=state.shock)
    return state


def _max_dtau(cfg: RunConfig, grid):
    if cfg.dy2_step_factor > 0.0:
        return cfg.dy2_step_factor * grid.dy ** 2
    return None


# ---------------------------------------------------------------------------
# subcommands

def cmd_shock(args) -> int:
    law, shock = _law_and_shock(args.gamma, args.v_minus, args.v_plus,
                                args.u_minus)
    r1, r2 = ew.rh_residuals(shock, law)
    lax = ew.check_lax(shock, law)
    payload = {
        "s": shock.s, "u_plus": shock.u_plus, "delta": shock.delta,
        "lambda1_minus": lax.lambda_minus, "lambda1_plus": lax.lambda_plus,
        "rh_residual_mass": r1, "rh_residual_momentum": r2,
        "lax_satisfied": lax.satisfied,
    }
    if args.json:
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        for key in ("s", "u_plus", "delta", "lambda1_minus", "lambda1_plus",
                    "rh_residual_mass", "rh_residual_momentum"):
            print(f"{key:22s} {_fmt(payload[key])}")
        print(f"{'lax_satisfied':22s} {_fmt(payload['lax_satisfied'])}")
    return 0


def cmd_profile(args) -> int:
    law, shock = _law_and_shock(args.gamma, args.v_minus, args.v_plus,
                                args.u_minus)
    span = None if args.span == 0.0 else args.span
    profile = sp.compute_profile(shock, args.alpha, law, tol=args.tol,
                                 span=span, n=args.n)
    residual = sp.profile_residual(profile)
    report = sp.verify_profile_properties(profile, h_probe=0.0)
    dv = profile.eval_dV(profile.xi_grid)
    out = Path(args.out)
    emit_csv(zip(profile.xi_grid, profile.V, profile.U, dv),
             ["xi", "V", "U", "dV_dxi"], out)
    sidecar = out.with_suffix(".json") if out.suffix == ".csv" \
        else Path(str(out) + ".json")
    emit_json({
        "s": shock.s, "delta": shock.delta, "u_plus": shock.u_plus,
        "alpha": profile.alpha, "gamma": law.gamma,
        "lambda_minus": profile.lambda_minus,
        "lambda_plus": profile.lambda_plus,
        "normalization": profile.normalization,
        "residual": residual,
        "span_warning": profile.span_warning,
        "properties": {
            "bounds_ok": report.bounds_ok,
            "monotone_ok": report.monotone_ok,
            "du_negative_ok": report.du_negative_ok,
            "fitted_rate_left": report.fitted_rate_left,
            "fitted_rate_right": report.fitted_rate_right,
            "rate_rel_err_left": report.rate_rel_err_left,
            "rate_rel_err_right": report.rate_rel_err_right,
            "rates_ok": report.rates_ok,
            "sup_d1": report.sup_d1, "sup_d2": report.sup_d2,
            "scaled_d1": report.scaled_d1, "scaled_d2": report.scaled_d2,
            "all_ok": report.all_ok,
        },
    }, sidecar)
    print(f"wrote {out} and {sidecar}")
    return 0


def cmd_solve(args) -> int:
    cfg = load_config(args.config)
    law, shock = _law_and_shock(cfg.gamma, cfg.v_minus, cfg.v_plus,
                                cfg.u_minus)
    profile = _profile_from_config(cfg, law, shock)
    state = _initial_state(cfg, profile)
    grid = state.grid
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    yc = grid.centers()
    observations = []

    def observer(snap):
        idx = len(observations)
        u_c = 0.5 * (snap.u[1:] + snap.u[:-1])
        emit_csv(zip(yc, snap.v, u_c), ["y", "v", "u"],
                 out_dir / f"obs_{idx:04d}.csv")
        observations.append(snap.tau)

    t0 = time.perf_counter()
    final, record = ls.run(state, cfg.tau_end, observer=observer,
                           observe_every=cfg.observe_every, cfl=cfg.cfl,
                           max_dtau=_max_dtau(cfg, grid))
    wallclock = time.perf_counter() - t0

    v_ref, _ = sp.rescaled_profile_eval(profile, yc, final.tau)
    _, u_ref = sp.rescaled_profile_eval(profile, grid.interfaces(), final.tau)
    emit_json({
        "steps": record.n_steps,
        "wallclock_s": wallclock,
        "tau_end": final.tau,
        "observations": observations,
        "final_sup_dv": float(np.max(np.abs(final.v - v_ref))),
        "final_sup_du": float(np.max(np.abs(final.u - u_ref))),
        "v_min": record.v_min, "v_max": record.v_max,
        "positivity_window_ok": bool(record.v_min >= shock.v_plus / 4.0
                                     and record.v_max <= 2.0 * shock.v_plus),
    }, out_dir / "summary.json")
    print(f"wrote {len(observations)} observations to {out_dir}")
    return 0


_ENERGY_COLUMNS = ["tau", "N", "l2", "h1", "h2", "diss_weighted",
                   "diss_phi", "diss_psi", "grad_norm", "q_max", "q_margin"]


def _energy_rows(report: ed.EnergyReport):
    for i, tau in enumerate(report.tau_series):
        yield (tau, report.peak_h2_sq[i], report.l2_sq_series[i],
               report.h1_sq_series[i], report.h2_sq_series[i],
               report.diss_weighted[i], report.diss_phi[i],
               report.diss_psi[i], report.grad_sq_series[i],
               report.remainder_max[i], report.remainder_margin[i])


def cmd_energy(args) -> int:
    cfg = load_config(args.config)
    law, shock = _law_and_shock(cfg.gamma, cfg.v_minus, cfg.v_plus,
                                cfg.u_minus)
    profile = _profile_from_config(cfg, law, shock)
    state = _initial_state(cfg, profile)
    report = ed.EnergyReport()
    ed.energy_snapshot(state, profile, report)
    ls.run(state, cfg.tau_end,
           observer=lambda snap: ed.energy_snapshot(snap, profile, report),
           observe_every=cfg.observe_every, cfl=cfg.cfl,
           max_dtau=_max_dtau(cfg, state.grid))
    emit_csv(_energy_rows(report), _ENERGY_COLUMNS, args.out)
    print(f"wrote {len(report.tau_series)} rows to {args.out}")
    return 0


def cmd_converge(args) -> int:
    cfg = load_config(args.config)
    law, shock = _law_and_shock(cfg.gamma, cfg.v_minus, cfg.v_plus,
                                cfg.u_minus)
    omega = ch.OmegaSpec(h=cfg.h, t_final=cfg.t_final,
                         x_samples=cfg.x_samples, t_samples=cfg.t_samples)
    sizing = ch.SolverSizing(cells_per_width=cfg.cells_per_width,
                             margin_efolds=cfg.margin_efolds, cfl=cfg.cfl,
                             tau_max=cfg.tau_max)
    jobs = args.jobs if args.jobs is not None else cfg.jobs
    result = ch.alpha_sweep(shock, law, cfg.alphas, omega,
                            include_full=not args.profile_only,
                            sizing=sizing, jobs=jobs)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    emit_csv(zip(result.alphas, result.e_profile, result.e_full,
                 result.capped),
             ["alpha", "E_profile", "E_full", "capped"],
             out_dir / "sweep.csv")
    emit_json({
        "c_fit": result.c_fit,
        "C_fit": result.big_c_fit,
        "r_squared": result.r_squared,
        "monotone_flag": result.monotone_flag,
        "volume_window_ok": result.window_ok,
        "time_window": [cfg.h, cfg.t_final],
        "note": ("sup errors are measured on the finite time window "
                 "[h, t_final] only"),
        "failures": {str(k): v for k, v in result.failures.items()},
    }, out_dir / "fit_summary.json")
    print(f"wrote sweep results to {out_dir}")
    return 0


def cmd_selftest(args) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    checks = []

    def check(name, ok):
        checks.append((name, bool(ok)))
        print(f"[{'ok' if ok else 'FAIL'}] {name}")

    law, shock = _law_and_shock(2.0, 1.2, 1.0, 0.0)
    r1, r2 = ew.rh_residuals(shock, law)
    lax = ew.check_lax(shock, law)
    check("jump relations close", abs(r1) <= 1e-12 and abs(r2) <= 1e-12)
    check("admissibility", lax.satisfied)
    emit_json({"s": shock.s, "u_plus": shock.u_plus, "delta": shock.delta,
               "rh_residual_mass": r1, "rh_residual_momentum": r2,
               "lambda1_minus": lax.lambda_minus,
               "lambda1_plus": lax.lambda_plus,
               "lax_satisfied": lax.satisfied}, out_dir / "shock.json")

    profile = sp.compute_profile(shock, 0.1, law, tol=1e-10, n=2001)
    residual = sp.profile_residual(profile)
    report = sp.verify_profile_properties(profile, h_probe=0.0)
    check("profile bounds and monotonicity",
          report.bounds_ok and report.monotone_ok and report.du_negative_ok)
    check("profile tail rates", report.rates_ok)
    check("profile residual small", residual < 1e-4)
    emit_csv(zip(profile.xi_grid[::20], profile.V[::20], profile.U[::20]),
             ["xi", "V", "U"], out_dir / "profile.csv")
    emit_json({"residual": residual, "lambda_minus": profile.lambda_minus,
               "lambda_plus": profile.lambda_plus,
               "rate_rel_err_left": report.rate_rel_err_left,
               "rate_rel_err_right": report.rate_rel_err_right,
               "span_warning": profile.span_warning},
              out_dir / "profile.json")

    grid = ls.Grid1D(y_min=-70.0, y_max=52.0, n_cells=600)
    state = ls.init_state(profile, grid)
    nxt = ls.step(state, 0.02)
    dm, fm, dp, fp = ls.step_flux_balance(state, nxt)
    mass_ok = abs(dm - fm) <= 1e-12 * max(1.0, abs(dm))
    mom_ok = abs(dp - fp) <= 1e-12 * max(1.0, abs(dp))
    check("conservation telescoping", mass_ok and mom_ok)
    final, record = ls.run(nxt, 2.0, cfl=0.4)
    window_ok = (record.v_min >= shock.v_plus / 4.0
                 and record.v_max <= 2.0 * shock.v_plus)
    check("volume window", window_ok)
    emit_json({"mass_gap": dm - fm, "momentum_gap": dp - fp,
               "steps": record.n_steps + 1, "v_min": record.v_min,
               "v_max": record.v_max, "volume_window_ok": window_ok},
              out_dir / "conservation.json")

    rep = ed.EnergyReport()
    ed.energy_snapshot(ls.init_state(profile, grid), profile, rep)
    ed.energy_snapshot(final, profile, rep)
    check("prepared data starts at zero", rep.peak_h2_sq[0] == 0.0)
    emit_csv(_energy_rows(rep), _ENERGY_COLUMNS, out_dir / "energy.csv")

    omega = ch.OmegaSpec(h=1.0, t_final=2.0, x_samples=401, t_samples=3)
    sweep = ch.alpha_sweep(shock, law, [0.4, 0.2, 0.1], omega,
                           include_full=False)
    check("tail error monotone in viscosity", sweep.monotone_flag)
    check("tail error fit", sweep.r_squared >= 0.99)
    emit_csv(zip(sweep.alphas, sweep.e_profile),
             ["alpha", "E_profile"], out_dir / "sweep.csv")
    emit_json({"c_fit": sweep.c_fit, "C_fit": sweep.big_c_fit,
               "r_squared": sweep.r_squared,
               "monotone_flag": sweep.monotone_flag},
              out_dir / "fit.json")

    failed = [name for name, ok in checks if not ok]
    if failed:
        raise NumericalError("selftest failures: " + ", ".join(failed))
    print(f"selftest passed ({len(checks)} checks), outputs in {out_dir}")
    return 0


# ---------------------------------------------------------------------------
# entry point

def _build_parser():
    parser = argparse.ArgumentParser(
        prog="viscoshock",
        description=("Viscous shock profiles, stretched-frame runs and "
                     "small-viscosity convergence measurements for 1-D "
                     "Lagrangian gas dynamics"))
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("shock", help="inviscid jump states and speed")
    p.add_argument("--gamma", type=float, default=2.0)
    p.add_argument("--v-minus", type=float, required=True)
    p.add_argument("--v-plus", type=float, required=True)
    p.add_argument("--u-minus", type=float, default=0.0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_shock)

    p = sub.add_parser("profile", help="compute a traveling-wave profile")
    p.add_argument("--gamma", type=float, default=2.0)
    p.add_argument("--v-minus", type=float, required=True)
    p.add_argument("--v-plus", type=float, required=True)
    p.add_argument("--u-minus", type=float, default=0.0)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--span", type=float, default=0.0)
    p.add_argument("--n", type=int, default=4001)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("solve", help="evolve profile-prepared data")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default="solve_out")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("energy", help="energy diagnostics time series")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_energy)

    p = sub.add_parser("converge", help="small-viscosity error sweep")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--profile-only", action="store_true")
    p.add_argument("--jobs", type=int, default=None)
    p.set_defaults(func=cmd_converge)

    p = sub.add_parser("selftest", help="run the invariant battery")
    p.add_argument("--out", default="selftest_out")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
