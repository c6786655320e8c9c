"""Acceptance suite: one test per exit criterion, each printing a
verdict line.  Tolerances are fixed here, not tuned at run time.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the verdict
lines alongside the pytest output.
"""

import subprocess
import sys

import numpy as np
import pytest

import viscoshock as vs

GAMMA = 2.0
V_MINUS, V_PLUS, U_MINUS = 1.2, 1.0, 0.0


@pytest.fixture(scope="module")
def law():
    return vs.PressureLaw(gamma=GAMMA)


@pytest.fixture(scope="module")
def shock(law):
    return vs.build_shock(V_MINUS, V_PLUS, U_MINUS, law)


@pytest.fixture(scope="module")
def dense_profiles(shock, law):
    # tight-tolerance traveling waves reused across criteria
    return {alpha: vs.compute_profile(shock, alpha, law, tol=1e-12, n=20001)
            for alpha in (0.05, 0.1, 0.2)}


def _verdict(num, text):
    print(f"\n[PASS] criterion {num}: {text}")


# ---------------------------------------------------------------------------

def test_criterion_1_jump_closure_and_admissibility():
    """100 randomized shocks: jump residuals <= 1e-12, admissibility."""
    rng = np.random.default_rng(20240817)
    worst = 0.0
    for _ in range(100):
        gamma = rng.uniform(1.0, 3.0)
        v_plus = rng.uniform(0.5, 2.0)
        delta = rng.uniform(0.01, 0.5 * v_plus)
        u_minus = rng.uniform(-1.0, 1.0)
        law = vs.PressureLaw(gamma=gamma)
        sh = vs.build_shock(v_plus + delta, v_plus, u_minus, law)
        r1, r2 = vs.rh_residuals(sh, law)
        worst = max(worst, abs(r1), abs(r2))
        assert abs(r1) <= 1e-12 and abs(r2) <= 1e-12
        rep = vs.check_lax(sh, law)
        assert rep.satisfied
        assert rep.lambda_plus < sh.s < rep.lambda_minus
        assert sh.u_plus < sh.u_minus
    _verdict(1, f"jump closure and admissibility over 100 draws "
                f"(worst residual {worst:.2e})")


def test_criterion_2_profile_correctness(shock, law, dense_profiles):
    """Monotone bounded profiles, first integral, second-order residual
    refinement, tail rates within 5%, rate ~ strength/viscosity."""
    for alpha in (0.05, 0.1, 0.2):
        prof = vs.compute_profile(shock, alpha, law, tol=1e-10)
        assert np.all(np.diff(prof.V) < 0.0)
        assert np.all(np.diff(prof.U) < 0.0)
        assert np.all((prof.V > shock.v_plus) & (prof.V < shock.v_minus))
        assert np.all((prof.U > shock.u_plus) & (prof.U < shock.u_minus))
        gap = prof.U - (shock.u_minus - shock.s * (prof.V - shock.v_minus))
        assert np.max(np.abs(gap)) <= 10.0 * prof.tol

        base = vs.compute_profile(shock, alpha, law, tol=1e-12, n=1001)
        span = float(base.xi_grid[-1])
        res = [vs.profile_residual(base)]
        for n in (2001, 4001):
            res.append(vs.profile_residual(
                vs.compute_profile(shock, alpha, law, tol=1e-12, span=span,
                                   n=n)))
        for coarse, fine in zip(res, res[1:]):
            assert coarse / fine >= 3.2, f"alpha={alpha}: ratio {coarse/fine}"

        report = vs.verify_profile_properties(dense_profiles[alpha],
                                              h_probe=0.0)
        assert report.rates_ok
        assert report.rate_rel_err_left <= 0.05
        assert report.rate_rel_err_right <= 0.05

    # fitted rate * viscosity / strength varies <= 15% across strengths
    for alpha in (0.05, 0.1, 0.2):
        scaled = []
        for v_minus in (1.1, 1.2):
            sh = vs.build_shock(v_minus, V_PLUS, U_MINUS, law)
            prof = vs.compute_profile(sh, alpha, law, tol=1e-10)
            rep = vs.verify_profile_properties(prof, h_probe=0.0)
            scaled.append(abs(rep.fitted_rate_left) * alpha / sh.delta)
            scaled.append(abs(rep.fitted_rate_right) * alpha / sh.delta)
        spread = max(scaled) / min(scaled) - 1.0
        assert spread <= 0.15, f"alpha={alpha}: rate scaling spread {spread}"
    _verdict(2, "profile bounds, first integral, order-2 residual "
                "refinement, tail rates within 5%, rate ~ strength/viscosity")


def test_criterion_3_derivative_scalings(law):
    """Scaled derivative sups within a factor 3 of the grid median."""
    scaled1, scaled2 = [], []
    for v_minus in (1.1, 1.2):
        sh = vs.build_shock(v_minus, V_PLUS, U_MINUS, law)
        for alpha in (0.05, 0.1, 0.2):
            prof = vs.compute_profile(sh, alpha, law, tol=1e-10)
            rep = vs.verify_profile_properties(prof, h_probe=0.0)
            scaled1.append(rep.scaled_d1)
            scaled2.append(rep.scaled_d2)
    for scaled in (scaled1, scaled2):
        med = float(np.median(scaled))
        assert max(scaled) <= 3.0 * med
        assert min(scaled) >= med / 3.0
    _verdict(3, f"derivative sups scale with strength^2/viscosity "
                f"(spread {max(scaled1)/min(scaled1):.2f}x, "
                f"{max(scaled2)/min(scaled2):.2f}x within factor 3)")


@pytest.fixture(scope="module")
def order_runs(dense_profiles):
    # traveling-wave runs reused by criteria 4 and 5
    out = {}
    for alpha in (0.1, 0.2):
        prof = dense_profiles[alpha]
        rows = []
        for n in (400, 800, 1600):
            grid = vs.Grid1D(y_min=-65.0, y_max=55.0, n_cells=n)
            state = vs.init_state(prof, grid)
            final, record = vs.run(state, 5.0, cfl=0.4,
                                   max_dtau=0.5 * grid.dy ** 2)
            v_ref, _ = vs.rescaled_profile_eval(prof, grid.centers(),
                                                final.tau)
            _, u_ref = vs.rescaled_profile_eval(prof, grid.interfaces(),
                                                final.tau)
            err = max(float(np.max(np.abs(final.v - v_ref))),
                      float(np.max(np.abs(final.u - u_ref))))
            rows.append((n, err, record))
        out[alpha] = rows
    return out


def test_criterion_4_solver_order(order_runs):
    """Sup-error ratios in [3.2, 4.8] per refinement with dt ~ dy**2."""
    ratios = []
    for alpha, rows in order_runs.items():
        errs = [e for _, e, _ in rows]
        for coarse, fine in zip(errs, errs[1:]):
            r = coarse / fine
            ratios.append(r)
            assert 3.2 <= r <= 4.8, f"alpha={alpha}: ratio {r}"
    _verdict(4, "manufactured-solution refinement ratios "
                + ", ".join(f"{r:.2f}" for r in ratios))


def test_criterion_5_conservation_and_positivity(dense_profiles, shock,
                                                 order_runs):
    """Per-step flux balance to 1e-12 relative; volume window held."""
    grid = vs.Grid1D(y_min=-65.0, y_max=55.0, n_cells=800)
    state = vs.init_state(dense_profiles[0.1], grid)
    worst = 0.0
    for _ in range(50):
        nxt = vs.step(state, 0.01)
        dm, fm, dp, fp = vs.step_flux_balance(state, nxt)
        gm = abs(dm - fm) / max(1.0, abs(dm))
        gp = abs(dp - fp) / max(1.0, abs(dp))
        worst = max(worst, gm, gp)
        assert gm <= 1e-12 and gp <= 1e-12
        state = nxt

    for alpha, rows in order_runs.items():
        for _, _, record in rows:
            assert record.v_min >= shock.v_plus / 4.0
            assert record.v_max <= 2.0 * shock.v_plus
    _verdict(5, f"conservation telescoping (worst gap {worst:.2e}) and "
                f"volume window on all default runs")


def _energy_run(profile, n_cells, tau_end, amp):
    grid = vs.Grid1D(y_min=-70.0, y_max=52.0, n_cells=n_cells)
    state = vs.init_state(profile, grid)
    if amp > 0.0:
        z = (grid.interfaces() - 25.0) / 2.0
        u = np.array(state.u) + amp * np.sqrt(2 * np.e) * z * np.exp(-z * z)
        u.setflags(write=False)
        state = vs.SolverState(grid=grid, v=state.v, u=u, tau=0.0,
                               alpha=state.alpha, law=state.law,
                               bc_u=(float(u[0]), float(u[-1])),
                               bc_v=state.bc_v, shock=state.shock)
    report = vs.EnergyReport()
    vs.energy_snapshot(state, profile, report)
    vs.run(state, tau_end,
           observer=lambda s: vs.energy_snapshot(s, profile, report),
           observe_every=0.25, cfl=0.4, max_dtau=0.25 * grid.dy ** 2)
    return report


def test_criterion_6_energy_structure(dense_profiles, shock):
    """Prepared data stays at the truncation floor; an injected bump's
    gradient energy decays to <= 10% with the peak norm in bounds."""
    prof = dense_profiles[0.1]

    prepared = _energy_run(prof, 1600, 8.0, 0.0)
    n_floor = max(prepared.peak_h2_sq)
    assert n_floor <= 1e-6, f"floor {n_floor}"
    for series in (prepared.diss_weighted, prepared.diss_phi,
                   prepared.diss_psi):
        assert all(np.isfinite(series))
        assert all(b >= a for a, b in zip(series, series[1:]))

    amp = 1e-3 * shock.delta
    bump = _energy_run(prof, 1600, 10.0, amp)
    g = np.asarray(bump.grad_sq_series)
    assert g[-1] <= 0.1 * g.max(), f"decay ratio {g[-1]/g.max():.3f}"
    assert vs.longtime_decay_check(bump, tau_min=5.0) == "pass"
    eta = shock.delta ** 0.25
    assert max(bump.peak_h2_sq) <= eta

    # simulation is its own oracle: a finer companion run agrees
    finer = _energy_run(prof, 2400, 10.0, amp)
    g_f = np.asarray(finer.grad_sq_series)
    assert np.max(np.abs(g - g_f)) <= 0.05 * g.max()
    _verdict(6, f"prepared floor {n_floor:.2e} <= 1e-6; bump gradient "
                f"decays to {g[-1]/g.max():.3f} of max (peak norm "
                f"{max(bump.peak_h2_sq):.2e} <= {eta:.3f}); two-resolution "
                f"agreement {np.max(np.abs(g-g_f))/g.max():.3f}")


def test_criterion_7_vanishing_viscosity(shock, law):
    """Tail error strictly decreasing and log-linear in 1/viscosity;
    full error decreasing to the scheme floor."""
    omega = vs.OmegaSpec(h=1.0, t_final=2.0, x_samples=801, t_samples=5)
    sweep = vs.alpha_sweep(shock, law, [0.4, 0.2, 0.1, 0.05], omega,
                           include_full=True)
    assert not sweep.failures
    assert sweep.monotone_flag
    assert sweep.r_squared >= 0.99
    assert sweep.c_fit > 0.0
    assert sweep.window_ok

    e_full = sweep.e_full
    assert all(np.isfinite(e_full))
    # floor from a finer companion run at the smallest viscosity
    fine = vs.full_error(shock, 0.05, law, omega,
                         vs.SolverSizing(cells_per_width=40.0))
    floor = 2.0 * abs(e_full[-1] - fine.error) + 1e-6
    for coarse, finer_e in zip(e_full, e_full[1:]):
        assert finer_e < coarse or finer_e <= floor
    assert e_full[-1] <= 0.25 * e_full[0]
    _verdict(7, f"tail error r2={sweep.r_squared:.4f}, full error "
                f"{e_full[0]:.3e} -> {e_full[-1]:.3e} "
                f"(ratio {e_full[-1]/e_full[0]:.4f} <= 0.25, "
                f"floor {floor:.1e})")


def test_criterion_8_selftest_determinism(tmp_path):
    """Two selftest invocations produce byte-identical output trees."""
    trees = []
    for name in ("a", "b"):
        out = tmp_path / name
        proc = subprocess.run(
            [sys.executable, "-m", "viscoshock.cli_io", "selftest",
             "--out", str(out)],
            capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
        trees.append(out)
    files_a = sorted(p.relative_to(trees[0]) for p in trees[0].rglob("*"))
    files_b = sorted(p.relative_to(trees[1]) for p in trees[1].rglob("*"))
    assert files_a == files_b and files_a
    for rel in files_a:
        assert (trees[0] / rel).read_bytes() == (trees[1] / rel).read_bytes()
    _verdict(8, f"selftest trees byte-identical ({len(files_a)} files)")
