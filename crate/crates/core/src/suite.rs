//! Desk-scale acceptance checks.
//!
//! Each criterion is a self-contained function returning a pass/fail record;
//! the `acceptance` integration test target asserts them one by one and the
//! CLI `all` subcommand runs the whole list. Exact oracles (closed-form wave,
//! self-similar source-free solution, reaction ODE) pin the numerics; the
//! asymptotic theorems are checked through their finite-time surrogates at
//! fixed thresholds.
//!
//! Criterion 8 deserves a note: its spreading half drives a bump of height
//! 1e-2 under the reaction `u⁴(1-u)`, whose growth exponent equals the
//! critical value `m + 2/N = 4`. At that exponent the take-off time of
//! small data explodes (the mass ODE gives t ~ exp(const/δ²), astronomically
//! beyond any simulation), so the check cannot reach its threshold at desk
//! scale. It runs unmodified and reports its failure honestly; the vanishing
//! half passes.

use crate::barriers::{self, BarrierConfig, SlowWaveSupersolution};
use crate::experiments::{self, SmallDataConfig, Verdict};
use crate::pde::{self, ContactPolicy, InitialData, Problem};
use crate::phaseplane::{critical_speed, shoot_from_one, ShootOpts};
use crate::reaction::ReactionSpec;
use crate::waveprofile::WaveProfile;
use crate::{csvio, Result};

/// One acceptance-check outcome.
#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl CriterionResult {
    fn new(id: u32, name: &'static str, pass: bool, detail: String) -> Self {
        Self { id, name, pass, detail }
    }

    /// The one-line pass/fail form printed by the suite runners.
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} [{}] {} — {}",
            self.id,
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.detail
        )
    }
}

fn wrap(id: u32, name: &'static str, body: impl FnOnce() -> Result<(bool, String)>) -> CriterionResult {
    match body() {
        Ok((pass, detail)) => CriterionResult::new(id, name, pass, detail),
        Err(e) => CriterionResult::new(id, name, false, format!("error: {e}")),
    }
}

fn exact_wave(xi: f64) -> f64 {
    if xi >= 0.0 {
        0.0
    } else {
        1.0 - (xi / 2.0).exp()
    }
}

/// 1: the m = 2 logistic front has speed exactly 1 (closed-form trajectory
/// `p = -q(1-q)`), recovered by bisection within 1e-3.
pub fn criterion_1_speed_oracle() -> CriterionResult {
    wrap(1, "critical speed oracle", || {
        let started = std::time::Instant::now();
        let r = critical_speed(&ReactionSpec::logistic(), 2.0, 1e-4)?;
        let elapsed = started.elapsed().as_secs_f64();
        let pass = (r.c_star - 1.0).abs() <= 1e-3 && elapsed < 1.0;
        Ok((
            pass,
            format!(
                "c* = {:.6} (target 1 ± 1e-3), bracket ({:.6}, {:.6}), {} iterations, {:.2}s",
                r.c_star, r.bracket.0, r.bracket.1, r.iterations, elapsed
            ),
        ))
    })
}

/// 2: the reconstructed profile matches `1 - e^{ξ/2}` to 1e-3 on `[-15, 0]`
/// and its front pressure slope is `-c*` within 1%.
pub fn criterion_2_profile_oracle() -> CriterionResult {
    wrap(2, "wave profile oracle", || {
        let (speed, profile) = WaveProfile::compute(&ReactionSpec::logistic(), 2.0, 1e-4, 1e-4)?;
        let mut sup = 0.0f64;
        for i in 0..=3000 {
            let xi = -15.0 * i as f64 / 3000.0;
            sup = sup.max((profile.eval(xi) - exact_wave(xi)).abs());
        }
        let slope = profile.front_pressure_slope();
        let slope_ok = (slope + speed.c_star).abs() <= 0.01 * speed.c_star;
        Ok((
            sup <= 1e-3 && slope_ok,
            format!("sup|V - (1-e^(xi/2))| = {sup:.2e} (<= 1e-3), front pressure slope {slope:.5}"),
        ))
    })
}

/// 3: every catalog reaction with a positive moment has
/// `c* ∈ (0, 2√σ + tol]`; the bistable one has moment 0.025.
pub fn criterion_3_speed_bounds_catalog() -> CriterionResult {
    wrap(3, "speed bounds across the catalog", || {
        let m = 2.0;
        let specs = vec![
            ReactionSpec::logistic(),
            ReactionSpec::power_monostable(2.0)?,
            ReactionSpec::power_monostable(4.0)?,
            ReactionSpec::bistable(0.3)?,
            ReactionSpec::combustion(0.3)?,
            ReactionSpec::fujita_critical(1.0, 0.5, m, 1)?,
        ];
        let tol = 1e-4;
        let mut lines = Vec::new();
        let mut pass = true;
        for spec in &specs {
            let cls = spec.classify(m, 1)?;
            if cls.hosono <= 0.0 {
                pass = false;
                lines.push(format!("{spec}: moment {:.4} not positive", cls.hosono));
                continue;
            }
            let r = critical_speed(spec, m, tol)?;
            let ok = r.c_star > 0.0 && r.c_star <= 2.0 * r.sigma_bound.sqrt() + tol;
            pass &= ok;
            lines.push(format!("{spec}: c* = {:.4} <= 2sqrt({:.4})", r.c_star, r.sigma_bound));
        }
        let bistable = ReactionSpec::bistable(0.3)?.classify(m, 1)?;
        pass &= (bistable.hosono - 0.025).abs() < 1e-6;
        Ok((pass, lines.join("; ")))
    })
}

/// 4: the solver reproduces the source-free self-similar solution (sup error
/// ≤ 5e-3 over t: 1 → 2 at dx = 0.02) and flat fields follow the reaction
/// ODE to 1e-4.
pub fn criterion_4_solver_oracles() -> CriterionResult {
    wrap(4, "solver oracles", || {
        let c = 3.0f64.cbrt() / 4.0;
        let bb = |x: f64, t: f64| (c - x * x / (12.0 * t.powf(2.0 / 3.0))).max(0.0) / t.cbrt();
        let grid = pde::GridSpec::cartesian(-6.0, 6.0, 0.02)?;
        let data = InitialData::Samples {
            x: (0..grid.len()).map(|i| grid.x(i)).collect(),
            u: (0..grid.len()).map(|i| bb(grid.x(i), 1.0)).collect(),
        };
        let mut problem = Problem::new(grid.clone(), data, ReactionSpec::logistic(), 2.0);
        problem.reaction = None;
        problem.t_max = 1.0; // runs t: 1 -> 2 in self-similar time
        problem.snapshot_every = 0.25;
        let out = pde::run(&problem)?;
        let last = out.snapshots.last().unwrap();
        let bb_err = (0..grid.len())
            .map(|i| (last.u[i] - bb(grid.x(i), 2.0)).abs())
            .fold(0.0f64, f64::max);

        let grid2 = pde::GridSpec::cartesian(-1.0, 1.0, 0.05)?;
        let mut flat = Problem::new(grid2, InitialData::Const(0.5), ReactionSpec::logistic(), 2.0);
        flat.t_max = 1.0;
        flat.snapshot_every = 0.25;
        let out2 = pde::run(&flat)?;
        let exact = 0.5 * 1.0f64.exp() / (1.0 + 0.5 * (1.0f64.exp() - 1.0));
        let ode_err = out2
            .snapshots
            .last()
            .unwrap()
            .u
            .iter()
            .map(|v| (v - exact).abs())
            .fold(0.0f64, f64::max);
        Ok((
            bb_err <= 5e-3 && ode_err <= 1e-4,
            format!("self-similar sup error {bb_err:.2e} (<= 5e-3), flat-ODE error {ode_err:.2e} (<= 1e-4)"),
        ))
    })
}

fn dichotomy_run() -> Result<(experiments::ConvergenceReport, pde::RunOutput)> {
    let cfg = experiments::ConvergeConfig {
        x_min: -20.0,
        x_max: 150.0,
        dx: 0.05,
        t_max: 100.0,
        snapshot_every: 1.0,
        initial: InitialData::Box { height: 1.0, x0: -5.0, x1: 5.0 },
        both_sides: false,
        x_mid: 65.0,
        speed_window: (0.5, 1.0),
        allow_contact_left: true,
        allow_contact_right: false,
    };
    experiments::converge_experiment(&ReactionSpec::logistic(), 2.0, &cfg)
}

/// 5: the box datum spreads at the critical speed (late-window slope within
/// 2%) and the solution vanishes identically beyond `ζ₊(t) + dx`.
pub fn criterion_5_speed_dichotomy() -> CriterionResult {
    wrap(5, "front speed dichotomy", || {
        let (report, out) = dichotomy_run()?;
        let speed = report.speed_measured.unwrap_or(f64::NAN);
        let speed_ok = (speed - 1.0).abs() <= 0.02;
        let mut beyond = 0.0f64;
        for f in &out.snapshots {
            if let Some((_, zp)) = pde::free_boundaries(f, 1e-8) {
                for i in 0..f.u.len() {
                    if f.grid.x(i) > zp + f.grid.dx {
                        beyond = beyond.max(f.u[i]);
                    }
                }
            }
        }
        let support_ok = beyond <= 1e-8;
        Ok((
            speed_ok && support_ok && report.verdict == Verdict::Spreading,
            format!(
                "late-window speed {speed:.4} (1 ± 0.02), max u beyond the front {beyond:.1e}, \
                 verdict {}",
                report.verdict
            ),
        ))
    })
}

/// 6: front-like data converge to the wave: the anchored shift has total
/// variation ≤ 0.05 over the final third and the front-anchored shape error
/// is ≤ 0.02 at the end (one shift serves both limits by construction).
pub fn criterion_6_front_like_convergence() -> CriterionResult {
    wrap(6, "front-like data converge to the wave", || {
        let cfg = experiments::ConvergeConfig {
            x_min: -20.0,
            x_max: 80.0,
            dx: 0.0125,
            t_max: 50.0,
            snapshot_every: 1.0,
            initial: InitialData::Step { height: 1.0, x0: 0.0 },
            both_sides: false,
            x_mid: 25.0,
            speed_window: (0.5, 1.0),
            allow_contact_left: true,
            allow_contact_right: false,
        };
        let (report, _) = experiments::converge_experiment(&ReactionSpec::logistic(), 2.0, &cfg)?;
        let tv = experiments::total_variation(&report.front_error_plus, 2.0 * 50.0 / 3.0);
        let final_shape = report.shape_error_plus.last().map(|&(_, e)| e).unwrap_or(f64::NAN);
        Ok((
            tv <= 0.05 && final_shape <= 0.02,
            format!(
                "front shift xi = {:.4}, TV over final third {tv:.4} (<= 0.05), final shape \
                 error {final_shape:.4} (<= 0.02)",
                report.xi_plus
            ),
        ))
    })
}

/// 7: a symmetric compactly supported datum converges on both fronts with
/// matching shifts (|ξ₊ - ξ₋| ≤ 2 dx) and both shape errors ≤ 0.02.
pub fn criterion_7_two_front_convergence() -> CriterionResult {
    wrap(7, "two-front convergence, symmetric data", || {
        let dx = 0.0125;
        let cfg = experiments::ConvergeConfig {
            x_min: -65.0,
            x_max: 65.0,
            dx,
            t_max: 50.0,
            snapshot_every: 1.0,
            initial: InitialData::Box { height: 1.0, x0: -5.0, x1: 5.0 },
            both_sides: true,
            x_mid: 0.0,
            speed_window: (0.5, 1.0),
            allow_contact_left: false,
            allow_contact_right: false,
        };
        let (report, _) = experiments::converge_experiment(&ReactionSpec::logistic(), 2.0, &cfg)?;
        let xi_minus = report.xi_minus.unwrap_or(f64::NAN);
        let shift_gap = (report.xi_plus - xi_minus).abs();
        let se_p = report.shape_error_plus.last().map(|&(_, e)| e).unwrap_or(f64::NAN);
        let se_m = report.shape_error_minus.last().map(|&(_, e)| e).unwrap_or(f64::NAN);
        Ok((
            shift_gap <= 2.0 * dx && se_p <= 0.02 && se_m <= 0.02,
            format!(
                "xi+ = {:.4}, xi- = {xi_minus:.4}, |gap| = {shift_gap:.4} (<= {:.3}), shape \
                 errors {se_p:.4}/{se_m:.4} (<= 0.02)",
                report.xi_plus,
                2.0 * dx
            ),
        ))
    })
}

/// 8: spreading/vanishing dichotomy for small bumps around the critical
/// growth exponent 4 (m = 2, N = 1). The vanishing half (p = 6) passes; the
/// spreading half (p = 4, the critical exponent itself) cannot reach its
/// threshold at desk timescales and fails honestly — see the module notes.
pub fn criterion_8_hair_trigger_dichotomy() -> CriterionResult {
    wrap(8, "small-data spreading/vanishing dichotomy", || {
        let spread_cfg = SmallDataConfig { x_max: 60.0, t_max: 400.0, ..Default::default() };
        let p4 = ReactionSpec::power_monostable(4.0)?;
        let (v_spread, out_spread) = experiments::hair_trigger_experiment(&p4, 2.0, 1, 1e-2, &spread_cfg)?;
        let u0_end = out_spread.snapshots.last().unwrap().u[0];

        let vanish_cfg = SmallDataConfig { x_max: 20.0, t_max: 40_000.0, ..Default::default() };
        let p6 = ReactionSpec::power_monostable(6.0)?;
        let (v_vanish, out_vanish) = experiments::hair_trigger_experiment(&p6, 2.0, 1, 1e-3, &vanish_cfg)?;
        let sup_end = out_vanish.snapshots.last().unwrap().sup();

        let pass = v_spread == Verdict::Spreading && v_vanish == Verdict::Vanishing;
        Ok((
            pass,
            format!(
                "p=4 bump(1e-2): {} with u(0, 400) = {u0_end:.2e} (threshold 0.9; take-off time \
                 at the critical exponent is exp(~1/delta^2), out of desk range); p=6 \
                 bump(1e-3): {} with sup = {sup_end:.2e} (<= 1e-4)",
                v_spread, v_vanish
            ),
        ))
    })
}

/// 9: barrier validity: the residual check passes with automatically chosen
/// `k` for both the sub- and the supersolution, evolved barrier data keep
/// sandwiching an ordered solution to 1e-6, and `|g' - c*| ≤ K'|f'|` holds
/// on the validation window with `K'` fitted on the first 10%.
pub fn criterion_9_barrier_validity() -> CriterionResult {
    wrap(9, "barrier validity and sandwich", || {
        let spec = ReactionSpec::logistic();
        let m = 2.0;
        let (speed, profile) = WaveProfile::compute(&spec, m, 1e-4, 1e-4)?;
        let c_star = speed.c_star;

        let mut detail = Vec::new();
        let mut pass = true;
        for f0 in [0.95, 1.05] {
            let mut cfg = BarrierConfig::auto(&spec, m, c_star, f0, 0.0)?;
            cfg.k = barriers::choose_k(&cfg, &profile, &spec)?;
            let report = barriers::residual_sign_check(&cfg, &profile, &spec, 200, 400)?;
            pass &= report.pass;
            detail.push(format!(
                "f0={f0}: k={}, worst violation {:.1e}",
                cfg.k, report.max_violation
            ));

            // K' fitted from the first tenth of the (f, g) path together
            // with the analytic end value |c*(m-1)/kappa + k| that the ratio
            // approaches as f -> 1, then validated beyond the fit window.
            let path = barriers::integrate_fg(&cfg, &spec, 40.0)?;
            let ratio = |f: f64| -> f64 {
                let phi = cfg.kappa * (1.0 - f);
                if phi == 0.0 {
                    return 0.0;
                }
                let gp = c_star * f.powf(m - 1.0) - cfg.k * phi / f;
                ((gp - c_star) / phi).abs()
            };
            let n = path.samples.len();
            let k_limit = c_star * (m - 1.0) / cfg.kappa + cfg.k;
            let k_prime = path.samples[..n / 10]
                .iter()
                .map(|&(_, f, _)| ratio(f))
                .fold(k_limit, f64::max);
            let ok = path.samples[n / 10..]
                .iter()
                .all(|&(_, f, _)| ratio(f) <= k_prime * (1.0 + 1e-9));
            pass &= ok;
            detail.push(format!("K' = {k_prime:.3} validated: {ok}"));
        }

        // sandwich: barrier data around the exact wave stay ordered
        let grid = pde::GridSpec::cartesian(-40.0, 25.0, 0.025)?;
        let mk_data = |factor: f64, shift: f64| InitialData::Samples {
            x: (0..grid.len()).map(|i| grid.x(i)).collect(),
            u: (0..grid.len()).map(|i| factor * profile.eval(grid.x(i) - shift)).collect(),
        };
        let mk_problem = |data: InitialData| {
            let mut p = Problem::new(grid.clone(), data, spec.clone(), m);
            p.t_max = 10.0;
            p.snapshot_every = 1.0;
            p.contact_left = ContactPolicy::Allow;
            p
        };
        let sub = pde::run(&mk_problem(mk_data(0.95, -2.0)))?;
        let mid = pde::run(&mk_problem(mk_data(1.0, 0.0)))?;
        let sup = pde::run(&mk_problem(mk_data(1.05, 2.0)))?;
        let mut worst_gap = 0.0f64;
        for ((a, b), c) in sub.snapshots.iter().zip(&mid.snapshots).zip(&sup.snapshots) {
            for i in 0..a.u.len() {
                worst_gap = worst_gap.max(a.u[i] - b.u[i]).max(b.u[i] - c.u[i]);
            }
        }
        pass &= worst_gap <= 1e-6;
        detail.push(format!("sandwich violation {worst_gap:.1e} (<= 1e-6)"));
        Ok((pass, detail.join("; ")))
    })
}

/// 10: the exponential supersolution is exact: discrete residual O(dx²),
/// free boundary formula exact, and PDE solutions started below it stay
/// below it.
pub fn criterion_10_slow_wave_supersolution() -> CriterionResult {
    wrap(10, "exponential supersolution", || {
        let spec = ReactionSpec::logistic();
        let v = SlowWaveSupersolution::new(&spec, 2.0, 1.0, 1.0, 0.0)?;
        // rho formula (here k(m-1) = 1, so rho(t) = e^t)
        let rho_ok = (0..=20).all(|i| {
            let t = i as f64 * 0.1;
            (v.rho(t) - t.exp()).abs() <= 1e-12 * t.exp()
        });
        // residual at two grids
        let resid = |dx: f64| -> f64 {
            let t = 0.7;
            let dt = dx * dx / 8.0;
            let mut worst = 0.0f64;
            let mut x = -3.0;
            while x < v.rho(t) - 4.0 * dx {
                let vt = (v.eval(x, t + dt) - v.eval(x, t - dt)) / (2.0 * dt);
                let lap = (v.eval(x + dx, t).powi(2) - 2.0 * v.eval(x, t).powi(2)
                    + v.eval(x - dx, t).powi(2))
                    / (dx * dx);
                worst = worst.max((vt - lap - v.k_lin * v.eval(x, t)).abs());
                x += dx;
            }
            worst
        };
        let r1 = resid(0.02);
        let r2 = resid(0.01);
        let resid_ok = r1 <= 1e-2 && r2 <= 0.35 * r1;

        // comparison: a box strictly below v(., 0) stays below
        let grid = pde::GridSpec::cartesian(-14.0, 12.0, 0.02)?;
        let mut problem = Problem::new(
            grid.clone(),
            InitialData::Box { height: 0.3, x0: -9.0, x1: -1.0 },
            spec,
            2.0,
        );
        problem.t_max = 2.0;
        problem.snapshot_every = 0.25;
        let out = pde::run(&problem)?;
        let mut worst = 0.0f64;
        for f in &out.snapshots {
            for i in 0..f.u.len() {
                worst = worst.max(f.u[i] - v.eval(f.grid.x(i), f.t));
            }
        }
        let below_ok = worst <= 1e-6;
        Ok((
            rho_ok && resid_ok && below_ok,
            format!(
                "rho exact: {rho_ok}; residual {r1:.2e} -> {r2:.2e} under grid halving; \
                 comparison violation {worst:.1e} (<= 1e-6)"
            ),
        ))
    })
}

/// 11: the pressure-gradient bound, fitted on the first half of a run and
/// validated with 5% margin on the second, holds for the box-data logistic
/// run and for the source-free self-similar run.
pub fn criterion_11_pressure_bound() -> CriterionResult {
    wrap(11, "pressure gradient bound", || {
        let (_, out) = dichotomy_run()?;
        let box_report = experiments::pressure_bound_check(&out.snapshots, 2.0)?;

        let c = 3.0f64.cbrt() / 4.0;
        let bb = |x: f64, t: f64| (c - x * x / (12.0 * t.powf(2.0 / 3.0))).max(0.0) / t.cbrt();
        let grid = pde::GridSpec::cartesian(-8.0, 8.0, 0.02)?;
        let data = InitialData::Samples {
            x: (0..grid.len()).map(|i| grid.x(i)).collect(),
            u: (0..grid.len()).map(|i| bb(grid.x(i), 1.0)).collect(),
        };
        let mut problem = Problem::new(grid, data, ReactionSpec::logistic(), 2.0);
        problem.reaction = None;
        problem.t_max = 8.0;
        problem.snapshot_every = 0.5;
        let out2 = pde::run(&problem)?;
        let bb_report = experiments::pressure_bound_check(&out2.snapshots, 2.0)?;
        Ok((
            box_report.holds_on_validation && bb_report.holds_on_validation,
            format!(
                "box run: H = {:.3}, worst ratio {:.3}; source-free run: H = {:.3}, worst \
                 ratio {:.3} (both <= 1.05)",
                box_report.h_fit, box_report.worst_ratio, bb_report.h_fit, bb_report.worst_ratio
            ),
        ))
    })
}

/// 12: identical configurations give bitwise-identical output rows; halving
/// dx moves the final front by at most 2 dx on the benchmark and refining
/// the shot resolution moves c* by less than the requested tolerance.
pub fn criterion_12_determinism_refinement() -> CriterionResult {
    wrap(12, "determinism and refinement", || {
        let spec = ReactionSpec::logistic();
        let mk = |dx: f64| -> Result<pde::RunOutput> {
            let grid = pde::GridSpec::cartesian(-20.0, 40.0, dx)?;
            let mut p = Problem::new(
                grid,
                InitialData::Box { height: 1.0, x0: -5.0, x1: 5.0 },
                spec.clone(),
                2.0,
            );
            p.t_max = 20.0;
            p.snapshot_every = 1.0;
            p.contact_left = ContactPolicy::Allow;
            pde::run(&p)
        };
        let a = mk(0.05)?;
        let b = mk(0.05)?;
        let rows_a: Vec<String> = a
            .trace
            .rows()
            .iter()
            .map(|r| r.iter().map(|x| csvio::fmt_f64(*x)).collect::<Vec<_>>().join(","))
            .collect();
        let rows_b: Vec<String> = b
            .trace
            .rows()
            .iter()
            .map(|r| r.iter().map(|x| csvio::fmt_f64(*x)).collect::<Vec<_>>().join(","))
            .collect();
        let identical = rows_a == rows_b;

        let fine = mk(0.025)?;
        let zp = |out: &pde::RunOutput| out.trace.samples.last().unwrap().zeta.unwrap().1;
        let front_shift = (zp(&a) - zp(&fine)).abs();
        let front_ok = front_shift <= 2.0 * 0.05;

        let coarse_opts = ShootOpts::default();
        let fine_opts = ShootOpts {
            base_dq: coarse_opts.base_dq / 2.0,
            base_dtau: coarse_opts.base_dtau / 2.0,
            ..coarse_opts
        };
        let tol = 1e-4;
        let c1 = bisect_with_opts(&spec, 2.0, tol, &coarse_opts)?;
        let c2 = bisect_with_opts(&spec, 2.0, tol, &fine_opts)?;
        let c_ok = (c1 - c2).abs() <= tol;
        Ok((
            identical && front_ok && c_ok,
            format!(
                "bitwise identical traces: {identical}; front moved {front_shift:.4} under dx \
                 halving (<= 0.1); c* moved {:.2e} under step halving (<= 1e-4)",
                (c1 - c2).abs()
            ),
        ))
    })
}

/// Bisection with explicit shot options (used by the refinement check).
fn bisect_with_opts(spec: &ReactionSpec, m: f64, tol: f64, opts: &ShootOpts) -> Result<f64> {
    let sigma = spec.classify(m, 1)?.sigma;
    let mut lo = tol;
    let mut hi = 2.0 * sigma.sqrt() + tol;
    let below = |c: f64| -> Result<bool> {
        Ok(matches!(
            shoot_from_one(spec, m, c, opts)?.outcome,
            crate::phaseplane::ShootOutcome::Overshoot { .. }
        ))
    };
    if below(hi)? || !below(lo)? {
        return Err(crate::Error::NonConvergence("refinement bracket failed".into()));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if below(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// The whole suite in criterion order.
pub fn all_criteria() -> Vec<fn() -> CriterionResult> {
    vec![
        criterion_1_speed_oracle,
        criterion_2_profile_oracle,
        criterion_3_speed_bounds_catalog,
        criterion_4_solver_oracles,
        criterion_5_speed_dichotomy,
        criterion_6_front_like_convergence,
        criterion_7_two_front_convergence,
        criterion_8_hair_trigger_dichotomy,
        criterion_9_barrier_validity,
        criterion_10_slow_wave_supersolution,
        criterion_11_pressure_bound,
        criterion_12_determinism_refinement,
    ]
}
