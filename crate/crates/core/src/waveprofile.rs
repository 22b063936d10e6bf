//! Physical wave profile `V(ξ)` reconstructed from a phase-plane trajectory.
//!
//! The wave coordinate is recovered from `dξ = m q^{m-1}/p dq`, anchored so
//! the front sits at `ξ = 0`: the profile vanishes identically for `ξ ≥ 0`
//! and increases toward 1 as `ξ → -∞`. Near the front the flux obeys
//! `p → -c q`, so the pressure `(m/(m-1)) V^{m-1}` has slope exactly `-c`
//! there; that law also supplies the analytic piece of the quadrature on the
//! last sliver of density where the shot itself is below resolution.

use crate::numerics::MonotoneCubic;
use crate::phaseplane::{PhasePoint, ShootOutcome, Trajectory};
use crate::reaction::{powf, ReactionSpec};
use crate::{Error, Result};

/// Tabulated finite front with evaluation by monotone interpolation.
/// Immutable after construction.
#[derive(Debug, Clone)]
pub struct WaveProfile {
    xi: Vec<f64>,
    v: Vec<f64>,
    /// Flux `p = (V^m)'` at the same nodes; gives `V' = p/(m V^{m-1})`.
    flux: Vec<f64>,
    pub speed: f64,
    pub m: f64,
    /// The stored tail stops where `v` reaches this level (`1 - ε_profile`).
    pub truncation_level: f64,
    interp: MonotoneCubic,
}

/// ξ-length of a stored arc (the quadrature is accumulated point by point
/// during integration).
pub fn xi_quadrature_width(points: &[PhasePoint], _m: f64) -> f64 {
    match (points.first(), points.last()) {
        (Some(a), Some(b)) => b.xi - a.xi,
        _ => 0.0,
    }
}

/// Convert a trajectory at (or bracketing-close to) the critical speed into
/// the physical profile. Accepts a connected shot, or a just-off-critical
/// one whose exit defect is small (`ν ≤ 0.05 c` or `q_turn ≤ 0.05`), since
/// bisection produces speeds within tolerance of `c*` rather than exact
/// connections.
pub fn reconstruct_profile(traj: &Trajectory, m: f64, eps_profile: f64) -> Result<WaveProfile> {
    if !(traj.speed_c > 0.0) {
        return Err(Error::Contract("profile requires a positive wave speed".into()));
    }
    if !(eps_profile > 0.0 && eps_profile < 0.1) {
        return Err(Error::Domain(format!(
            "profile truncation must lie in (0, 0.1), got {eps_profile}"
        )));
    }
    let c = traj.speed_c;
    match traj.outcome {
        ShootOutcome::Connected { .. } => {}
        ShootOutcome::Overshoot { nu } if nu <= 0.05 * c => {}
        ShootOutcome::Undershoot { q_turn } if q_turn <= 0.05 => {}
        ref other => {
            return Err(Error::Contract(format!(
                "profile requires a trajectory at the critical speed, got {other}"
            )))
        }
    }

    // Ascending in q; drop the terminal interpolated event point if it left S.
    let mut pts: Vec<&PhasePoint> =
        traj.points.iter().filter(|pt| pt.p < 0.0 && pt.q > 0.0).collect();
    pts.sort_by(|a, b| a.q.partial_cmp(&b.q).unwrap());
    pts.dedup_by(|a, b| a.q == b.q);
    if pts.len() < 16 {
        return Err(Error::Contract("trajectory too short to tabulate a profile".into()));
    }

    // First point where the front law p = -c q holds within 5%; below it the
    // analytic law replaces the data.
    let q_cut_idx = pts
        .iter()
        .position(|pt| (pt.p + c * pt.q).abs() <= 0.05 * c * pt.q)
        .ok_or_else(|| {
            Error::Contract("trajectory never enters the front regime p ~ -c q".into())
        })?;
    let cut = pts[q_cut_idx];
    // ξ(q_cut) from the law: ξ = -(m/(m-1)) q_cut^{m-1} / c.
    let patch_xi = -(m / (m - 1.0)) * powf(cut.q, m - 1.0) / c;

    let v_top = 1.0 - eps_profile;
    let mut xs: Vec<f64> = Vec::new();
    let mut vs: Vec<f64> = Vec::new();
    let mut ps: Vec<f64> = Vec::new();
    // Analytic nodes on the front sliver (ξ in (patch_xi, 0)): the law gives
    // v(ξ) = ((m-1) c |ξ| / m)^{1/(m-1)}.
    let n_front = 8;
    for k in 0..n_front {
        let xi = patch_xi * (1.0 - k as f64 / n_front as f64).powi(2);
        if xi >= 0.0 {
            continue;
        }
        let v = ((m - 1.0) * c * (-xi) / m).powf(1.0 / (m - 1.0));
        xs.push(xi);
        vs.push(v);
        ps.push(-c * v);
    }
    // Tabulated arc above the sliver, re-anchored so the front is at 0.
    let shift = patch_xi - cut.xi;
    for pt in &pts[q_cut_idx..] {
        if pt.q > v_top {
            // keep one extra node beyond the truncation level so the cut
            // lands inside the table, then stop
            xs.push(pt.xi + shift);
            vs.push(pt.q);
            ps.push(pt.p);
            break;
        }
        xs.push(pt.xi + shift);
        vs.push(pt.q);
        ps.push(pt.p);
    }
    // Ascending ξ means descending q: reverse.
    xs.reverse();
    vs.reverse();
    ps.reverse();
    // Append the exact front node.
    xs.push(0.0);
    vs.push(0.0);
    ps.push(0.0);
    dedup_nodes(&mut xs, &mut vs, &mut ps);
    if xs.len() < 8 {
        return Err(Error::Contract("profile table degenerate after deduplication".into()));
    }

    // Locate xi_min where v = v_top by interpolation on the raw table.
    let xi_min = {
        let k = vs
            .iter()
            .position(|&v| v <= v_top)
            .ok_or_else(|| Error::Contract("trajectory never reaches the truncation level".into()))?;
        if k == 0 {
            xs[0]
        } else {
            let (v0, v1) = (vs[k - 1], vs[k]);
            let t = (v_top - v0) / (v1 - v0);
            xs[k - 1] + t * (xs[k] - xs[k - 1])
        }
    };

    // Resample on a uniform ξ grid, spacing ≤ 1e-3 |xi_min|.
    let raw_v = MonotoneCubic::new(xs.clone(), vs.clone())?;
    let n = 1000usize;
    let mut xi_grid = Vec::with_capacity(n + 1);
    let mut v_grid = Vec::with_capacity(n + 1);
    let mut p_grid = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let xi = xi_min * (1.0 - i as f64 / n as f64);
        let v = if i == n { 0.0 } else { raw_v.eval(xi).clamp(0.0, 1.0) };
        xi_grid.push(xi);
        v_grid.push(v);
        p_grid.push(lin_interp(&xs, &ps, xi));
    }
    // Strict monotonicity of the stored profile (interpolation cannot
    // overshoot, but flat spots would break evaluation contracts).
    for w in v_grid.windows(2) {
        if !(w[1] < w[0] + 1e-15) {
            return Err(Error::Numeric(format!(
                "reconstructed profile is not decreasing near v = {}",
                w[0]
            )));
        }
    }
    let interp = MonotoneCubic::new(xi_grid.clone(), v_grid.clone())?;
    let profile = WaveProfile {
        xi: xi_grid,
        v: v_grid,
        flux: p_grid,
        speed: c,
        m,
        truncation_level: v_top,
        interp,
    };
    if profile.v[0] < 1.0 - 2.0 * eps_profile {
        return Err(Error::Numeric(format!(
            "profile tail only reaches {} < 1 - 2 eps",
            profile.v[0]
        )));
    }
    Ok(profile)
}

fn dedup_nodes(xs: &mut Vec<f64>, vs: &mut Vec<f64>, ps: &mut Vec<f64>) {
    let mut i = 1;
    while i < xs.len() {
        if xs[i] <= xs[i - 1] + 1e-15 || vs[i] >= vs[i - 1] {
            xs.remove(i);
            vs.remove(i);
            ps.remove(i);
        } else {
            i += 1;
        }
    }
}

fn lin_interp(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    if x <= xs[0] {
        return ys[0];
    }
    if x >= *xs.last().unwrap() {
        return *ys.last().unwrap();
    }
    let i = match xs.partition_point(|&v| v <= x) {
        0 => 0,
        k => k - 1,
    };
    let t = (x - xs[i]) / (xs[i + 1] - xs[i]);
    ys[i] + t * (ys[i + 1] - ys[i])
}

impl WaveProfile {
    /// Compute the critical speed, shoot at it, and reconstruct the profile.
    pub fn compute(
        spec: &ReactionSpec,
        m: f64,
        tol: f64,
        eps_profile: f64,
    ) -> Result<(crate::phaseplane::SpeedResult, WaveProfile)> {
        let speed = crate::phaseplane::critical_speed(spec, m, tol)?;
        let opts = crate::phaseplane::ShootOpts::default();
        let traj = crate::phaseplane::shoot_from_one(spec, m, speed.c_star, &opts)?;
        let profile = reconstruct_profile(&traj, m, eps_profile)?;
        Ok((speed, profile))
    }

    /// Profile value: zero ahead of the front, interpolated inside the table,
    /// clamped to the truncation value behind it.
    pub fn eval(&self, xi: f64) -> f64 {
        self.eval_flagged(xi).0
    }

    /// Like [`Self::eval`] but reports when the tail clamp was applied.
    pub fn eval_flagged(&self, xi: f64) -> (f64, bool) {
        if xi >= 0.0 {
            (0.0, false)
        } else if xi < self.xi_min() {
            (self.v[0], true)
        } else {
            (self.interp.eval(xi).clamp(0.0, 1.0 - f64::EPSILON), false)
        }
    }

    /// Profile slope `V'(ξ) = p/(m V^{m-1})`, zero ahead of the front.
    pub fn slope(&self, xi: f64) -> f64 {
        if xi >= 0.0 {
            return 0.0;
        }
        let v = self.eval(xi);
        if v <= 0.0 {
            return 0.0;
        }
        let p = lin_interp(&self.xi, &self.flux, xi.max(self.xi_min()));
        p / (self.m * powf(v, self.m - 1.0))
    }

    pub fn xi_min(&self) -> f64 {
        self.xi[0]
    }

    /// Stored nodes `(ξ_i, v_i)`, ascending in ξ with the final row `(0, 0)`.
    pub fn nodes(&self) -> (&[f64], &[f64]) {
        (&self.xi, &self.v)
    }

    /// Flux `p = (V^m)'` at the stored nodes.
    pub fn flux(&self) -> &[f64] {
        &self.flux
    }

    /// Pressure slope at the front: the quadratic through the pressure
    /// `(m/(m-1)) v^{m-1}` at the last three pre-front nodes, differentiated
    /// at `ξ = 0`. The limit value is `-speed`.
    pub fn front_pressure_slope(&self) -> f64 {
        let n = self.xi.len();
        let idx = [n - 4, n - 3, n - 2];
        let x: Vec<f64> = idx.iter().map(|&i| self.xi[i]).collect();
        let y: Vec<f64> = idx
            .iter()
            .map(|&i| self.m / (self.m - 1.0) * powf(self.v[i], self.m - 1.0))
            .collect();
        // derivative at 0 of the Lagrange quadratic through the three nodes
        let mut slope = 0.0;
        for i in 0..3 {
            let (xj, xk) = (x[(i + 1) % 3], x[(i + 2) % 3]);
            let denom = (x[i] - xj) * (x[i] - xk);
            slope += y[i] * (0.0 - xj + 0.0 - xk) / denom;
        }
        slope
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phaseplane::{critical_speed, shoot_from_one, ShootOpts};
    use crate::reaction::ReactionSpec;
    use rand::{Rng, SeedableRng};

    fn logistic_profile(tol: f64) -> (f64, WaveProfile) {
        let spec = ReactionSpec::logistic();
        let (speed, profile) = WaveProfile::compute(&spec, 2.0, tol, 1e-4).unwrap();
        (speed.c_star, profile)
    }

    fn exact_v(xi: f64) -> f64 {
        if xi >= 0.0 {
            0.0
        } else {
            1.0 - (xi / 2.0).exp()
        }
    }

    #[test]
    fn logistic_profile_matches_closed_form() {
        // V(ξ) = 1 - e^{ξ/2} for the m = 2 logistic front at c = 1.
        let (c, profile) = logistic_profile(1e-4);
        assert!((c - 1.0).abs() < 1e-3);
        let mut sup = 0.0f64;
        for i in 0..=3000 {
            let xi = -15.0 * i as f64 / 3000.0;
            sup = sup.max((profile.eval(xi) - exact_v(xi)).abs());
        }
        assert!(sup <= 1e-3, "sup error {sup}");
        assert!((profile.eval(-2.0) - (1.0 - (-1.0f64).exp())).abs() <= 1e-3);
    }

    #[test]
    fn eval_contracts() {
        let (_, profile) = logistic_profile(1e-4);
        assert_eq!(profile.eval(0.0), 0.0);
        assert_eq!(profile.eval(5.0), 0.0);
        let (v, clamped) = profile.eval_flagged(profile.xi_min() - 1.0);
        assert!(clamped && (v - profile.v[0]).abs() < 1e-15);
        assert!(profile.v[0] >= 1.0 - 2e-4);
    }

    #[test]
    fn front_pressure_slope_is_minus_speed() {
        let (c, profile) = logistic_profile(1e-4);
        let s = profile.front_pressure_slope();
        assert!(
            (s + c).abs() <= 0.01 * c,
            "pressure slope {s} vs -c = {}",
            -c
        );
    }

    #[test]
    fn interpolated_profile_is_monotone() {
        let (_, profile) = logistic_profile(1e-4);
        let mut prev = f64::INFINITY;
        for i in 0..=10_000 {
            let xi = profile.xi_min() * (1.0 - i as f64 / 10_000.0);
            let v = profile.eval(xi);
            assert!(v <= prev + 1e-12, "profile not monotone at xi={xi}");
            assert!((0.0..1.0).contains(&v));
            prev = v;
        }
    }

    #[test]
    fn doubling_resolution_barely_moves_profile() {
        let spec = ReactionSpec::logistic();
        let speed = critical_speed(&spec, 2.0, 1e-5).unwrap();
        let coarse = ShootOpts::default();
        let fine = ShootOpts {
            base_dq: coarse.base_dq / 2.0,
            base_dtau: coarse.base_dtau / 2.0,
            ..coarse
        };
        let p1 = reconstruct_profile(
            &shoot_from_one(&spec, 2.0, speed.c_star, &coarse).unwrap(),
            2.0,
            1e-4,
        )
        .unwrap();
        let p2 = reconstruct_profile(
            &shoot_from_one(&spec, 2.0, speed.c_star, &fine).unwrap(),
            2.0,
            1e-4,
        )
        .unwrap();
        let mut sup = 0.0f64;
        for i in 0..=2000 {
            let xi = -16.0 * i as f64 / 2000.0;
            sup = sup.max((p1.eval(xi) - p2.eval(xi)).abs());
        }
        assert!(sup <= 1e-4, "resolution sensitivity {sup}");
    }

    #[test]
    fn rejects_clearly_subcritical_trajectory() {
        let spec = ReactionSpec::logistic();
        let traj = shoot_from_one(&spec, 2.0, 0.5, &ShootOpts::default()).unwrap();
        assert!(matches!(
            reconstruct_profile(&traj, 2.0, 1e-4),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn weak_form_of_the_wave_equation_holds() {
        // ∫ ((V^m)' φ' + c V φ' - h(V) φ) = 0 for smooth compactly supported
        // test functions. Seeded bumps, discrete quadrature on the grid.
        let spec = ReactionSpec::logistic();
        let (c, profile) = logistic_profile(1e-4);
        let (xi, v) = profile.nodes();
        let flux = profile.flux();
        let dxi = xi[1] - xi[0];
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let center = rng.gen_range(xi[0] * 0.8..-0.5);
            let half = rng.gen_range(0.5..3.0);
            let bump = |x: f64| {
                let s = (x - center) / half;
                if s.abs() >= 1.0 {
                    0.0
                } else {
                    (-1.0 / (1.0 - s * s)).exp()
                }
            };
            let bump_prime = |x: f64| {
                let s = (x - center) / half;
                if s.abs() >= 1.0 {
                    0.0
                } else {
                    bump(x) * (-2.0 * s / ((1.0 - s * s) * (1.0 - s * s))) / half
                }
            };
            let sup_phi_prime = (0..=400)
                .map(|i| bump_prime(center - half + 2.0 * half * i as f64 / 400.0).abs())
                .fold(0.0f64, f64::max);
            let integral: f64 = (0..xi.len())
                .map(|i| {
                    let w = if i == 0 || i == xi.len() - 1 { 0.5 } else { 1.0 };
                    let phi_p = bump_prime(xi[i]);
                    let phi = bump(xi[i]);
                    w * dxi
                        * (flux[i] * phi_p + c * v[i] * phi_p
                            - spec.eval(v[i]).unwrap() * phi)
                })
                .sum();
            assert!(
                integral.abs() <= 1e-4 * sup_phi_prime,
                "weak residual {integral} vs bound {}",
                1e-4 * sup_phi_prime
            );
        }
    }
}
