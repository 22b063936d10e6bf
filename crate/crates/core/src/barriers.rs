//! Explicit sub- and supersolutions.
//!
//! Three constructions bracket solutions between translates of the critical
//! wave:
//!
//! 1. `w(x, t) = f(t) V(x - g(t))` where `(f, g)` solve
//!    `f' = φ(f)`, `g' = c* f^{m-1} - k φ(f)/f` with `φ(f) = κ(1 - f)`;
//!    starting `f` below 1 gives a subsolution, above 1 a supersolution,
//!    provided `k` is large enough. The parabolic operator applied to such a
//!    `w` reduces exactly to
//!    `R(f, V) = φ(f)(V + k V') + f^m h(V) - h(f V)`,
//!    so validity is certified by checking the sign of `R` on an `(f, V)`
//!    grid with `V'` taken from the phase plane.
//! 2. An exponentially growing travelling wave that solves
//!    `v_t = (v^m)_xx + k v` exactly; since `k u ≥ h(u)`, it is a
//!    supersolution with an explicit free boundary `ρ(t)`.
//! 3. The plateau subsolution: height `η` on a ball of radius `ρ`, joined to
//!    zero by a phase-plane leg at speed `c < c*`, translated outward at any
//!    `c₁ ∈ (0, c - (N-1)/ρ)`.

use crate::numerics::MonotoneCubic;
use crate::reaction::{powf, ReactionSpec};
use crate::waveprofile::WaveProfile;
use crate::{Error, Result};

/// Parameters of the `f(t) V(x - g(t))` family with `φ(f) = κ(1 - f)`.
#[derive(Debug, Clone, Copy)]
pub struct BarrierConfig {
    /// Initial height factor; below 1 builds a subsolution, above 1 a
    /// supersolution, 1 reproduces the exact wave.
    pub f0: f64,
    /// Initial front position.
    pub g0: f64,
    /// Front-lag constant `k` in the `g` equation.
    pub k: f64,
    /// Slope of `φ(f) = κ(1 - f)`; admissibility demands
    /// `κ ≤ H (1 - δ)^m` with `H = inf |h'|` on `[1-δ, 1+δ]`.
    pub kappa: f64,
    /// Stability half-width actually used (`h' < 0` on `(1-δ, 1+δ)`).
    pub delta: f64,
    pub c_star: f64,
    pub m: f64,
}

impl BarrierConfig {
    /// Pick a working `δ` and admissible `κ` for a given `f0`. The largest
    /// stability half-width often has `inf |h'| = 0` at its edge (the slope
    /// vanishes there), which would force `κ = 0`; a tighter `δ` keeps a
    /// positive margin, so take the smallest width that still contains `f0`
    /// with 50% slack, and set `κ` to half its admissible bound.
    pub fn auto(spec: &ReactionSpec, m: f64, c_star: f64, f0: f64, g0: f64) -> Result<Self> {
        let cls = spec.classify(m, 1)?;
        if !(f0 > 0.0) || (f0 - 1.0).abs() >= cls.delta_stable {
            return Err(Error::Parameter(format!(
                "f0 = {f0} must lie in (1-δ, 1+δ) with δ = {}",
                cls.delta_stable
            )));
        }
        let delta = (1.5 * (f0 - 1.0).abs()).max(0.05).min(cls.delta_stable * 0.999);
        let h_inf = slope_infimum(spec, delta)?;
        if !(h_inf > 0.0) {
            return Err(Error::Parameter(format!(
                "no negative-slope margin on (1-δ, 1+δ) for δ = {delta}"
            )));
        }
        let kappa = 0.5 * h_inf * powf(1.0 - delta, m);
        let cfg = Self { f0, g0, k: 1.0, kappa, delta, c_star, m };
        cfg.validate(spec)?;
        Ok(cfg)
    }

    /// Check the φ admissibility conditions against the reaction.
    pub fn validate(&self, spec: &ReactionSpec) -> Result<()> {
        if !(self.m > 1.0) {
            return Err(Error::Domain(format!("m must exceed 1, got {}", self.m)));
        }
        if !(self.kappa > 0.0) || !(self.k > 0.0) || !(self.c_star > 0.0) {
            return Err(Error::Parameter("kappa, k and c_star must be positive".into()));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::Parameter(format!("delta = {} out of (0, 1)", self.delta)));
        }
        if (self.f0 - 1.0).abs() >= self.delta || self.f0 <= 0.0 {
            return Err(Error::Parameter(format!(
                "f0 = {} must lie in (1-δ, 1+δ) with δ = {}",
                self.f0, self.delta
            )));
        }
        let h_inf = slope_infimum(spec, self.delta)?;
        let bound = h_inf * powf(1.0 - self.delta, self.m);
        if self.kappa > bound {
            return Err(Error::Parameter(format!(
                "kappa = {} exceeds the admissible bound H(1-δ)^m = {bound}",
                self.kappa
            )));
        }
        Ok(())
    }
}

/// `inf |h'|` over `[1-δ, 1+δ]`, requiring `h' < 0` throughout.
fn slope_infimum(spec: &ReactionSpec, delta: f64) -> Result<f64> {
    let n = 512;
    let mut inf = f64::INFINITY;
    for i in 0..=n {
        let u = 1.0 - delta + 2.0 * delta * i as f64 / n as f64;
        let hp = spec.eval_prime(u)?;
        if hp >= 0.0 {
            return Err(Error::Parameter(format!(
                "h' is not negative at u = {u}; shrink delta"
            )));
        }
        inf = inf.min(-hp);
    }
    Ok(inf)
}

/// Sampled solution of the `(f, g)` system plus the fitted front-shift limit.
#[derive(Debug, Clone)]
pub struct BarrierPath {
    /// Rows `(t, f, g)`.
    pub samples: Vec<(f64, f64, f64)>,
    /// Extrapolated limit of `g(t) - c* t`.
    pub xi_limit: f64,
}

/// Integrate the `(f, g)` system with fixed-step RK4 (`h_t ≤ 1e-3`). With
/// the linear `φ` the height has the closed form `f = 1 + (f0-1)e^{-κt}`,
/// which the integration must reproduce; `g - c* t` is then monotone with a
/// finite limit, estimated by exponential extrapolation at rate `κ`.
pub fn integrate_fg(config: &BarrierConfig, spec: &ReactionSpec, t_max: f64) -> Result<BarrierPath> {
    config.validate(spec)?;
    if !(t_max > 0.0) {
        return Err(Error::Domain(format!("t_max must be positive, got {t_max}")));
    }
    let steps = (t_max / 1e-3).ceil() as usize;
    let ht = t_max / steps as f64;
    let (kappa, k, cs, m) = (config.kappa, config.k, config.c_star, config.m);
    let rhs = |f: f64| -> (f64, f64) {
        let phi = kappa * (1.0 - f);
        (phi, cs * powf(f, m - 1.0) - k * phi / f)
    };
    let mut f = config.f0;
    let mut g = config.g0;
    let mut samples = Vec::with_capacity(steps + 1);
    samples.push((0.0, f, g));
    for i in 1..=steps {
        let (k1f, k1g) = rhs(f);
        let (k2f, k2g) = rhs(f + 0.5 * ht * k1f);
        let (k3f, k3g) = rhs(f + 0.5 * ht * k2f);
        let (k4f, k4g) = rhs(f + ht * k3f);
        f += ht / 6.0 * (k1f + 2.0 * k2f + 2.0 * k3f + k4f);
        g += ht / 6.0 * (k1g + 2.0 * k2g + 2.0 * k3g + k4g);
        if (f - 1.0).abs() >= config.delta {
            return Err(Error::Parameter(format!(
                "height factor left (1-δ, 1+δ) at t = {}: f = {f}",
                i as f64 * ht
            )));
        }
        samples.push((i as f64 * ht, f, g));
    }
    // r(t) = g - c* t approaches its limit like e^{-κt}; two samples a lag
    // apart give the limit r(T) - (r(T-Δ) - r(T)) / (e^{κΔ} - 1).
    let (t_end, _, g_end) = *samples.last().unwrap();
    let r_end = g_end - cs * t_end;
    let lag = (2.0 / kappa).min(0.5 * t_max);
    let idx = ((t_end - lag) / ht).round().max(0.0) as usize;
    let (t_lag, _, g_lag) = samples[idx.min(samples.len() - 1)];
    let r_lag = g_lag - cs * t_lag;
    let xi_limit = if (t_end - t_lag) * kappa > 1e-12 {
        r_end - (r_lag - r_end) / ((kappa * (t_end - t_lag)).exp() - 1.0)
    } else {
        r_end
    };
    Ok(BarrierPath { samples, xi_limit })
}

/// Which side of the comparison a barrier certifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BarrierSide {
    Sub,
    Super,
}

/// Outcome of the reduced-residual sign check on an `(f, V)` grid.
#[derive(Debug, Clone)]
pub struct ResidualReport {
    pub side: BarrierSide,
    /// Sign violation magnitude: max of `R` (sub) or `-R` (super), clamped
    /// at zero.
    pub max_violation: f64,
    /// Grid point realizing it.
    pub worst: (f64, f64),
    pub pass: bool,
}

/// Evaluate `R(f, V) = φ(f)(V + k V') + f^m h(V) - h(f V)` on an
/// `n_f × n_v` grid of height factors and profile values, with
/// `V' = p/(m V^{m-1})` from the stored phase-plane flux. A subsolution
/// requires `R ≤ 0`, a supersolution `R ≥ 0`; violations beyond 1e-10 fail.
pub fn residual_sign_check(
    config: &BarrierConfig,
    profile: &WaveProfile,
    spec: &ReactionSpec,
    n_f: usize,
    n_v: usize,
) -> Result<ResidualReport> {
    if (profile.speed - config.c_star).abs() > 1e-6 * config.c_star.max(1.0) {
        return Err(Error::Contract(format!(
            "profile speed {} does not match the barrier speed {}",
            profile.speed, config.c_star
        )));
    }
    let side = if config.f0 < 1.0 { BarrierSide::Sub } else { BarrierSide::Super };
    let (xi, v) = profile.nodes();
    let flux = profile.flux();
    let m = config.m;
    let mut max_violation = 0.0f64;
    let mut worst = (config.f0, 0.0);
    let stride = (xi.len() / n_v).max(1);
    for j in 0..n_f {
        let f = config.f0 + (1.0 - config.f0) * j as f64 / n_f as f64;
        let phi = config.kappa * (1.0 - f);
        let fm = powf(f, m);
        for i in (0..xi.len() - 1).step_by(stride) {
            let vv = v[i];
            if vv <= 0.0 {
                continue;
            }
            let vp = flux[i] / (m * powf(vv, m - 1.0));
            let r = phi * (vv + config.k * vp) + fm * spec.eval(vv)? - spec.eval(f * vv)?;
            let violation = match side {
                BarrierSide::Sub => r,
                BarrierSide::Super => -r,
            };
            if violation > max_violation {
                max_violation = violation;
                worst = (f, vv);
            }
        }
    }
    Ok(ResidualReport { side, max_violation, worst, pass: max_violation <= 1e-10 })
}

/// Find the smallest `k = 2^j` for which the residual check passes on a
/// 200 × 400 grid; the `k V'/V → -∞` behavior at the front guarantees one
/// exists for admissible `κ`.
pub fn choose_k(
    config_sans_k: &BarrierConfig,
    profile: &WaveProfile,
    spec: &ReactionSpec,
) -> Result<f64> {
    let mut config = *config_sans_k;
    config.k = 1.0;
    config.validate(spec)?;
    loop {
        let report = residual_sign_check(&config, profile, spec, 200, 400)?;
        if report.pass {
            return Ok(config.k);
        }
        config.k *= 2.0;
        if config.k > (1 << 20) as f64 {
            return Err(Error::Parameter(format!(
                "no admissible front-lag constant up to 2^20; worst violation {:.3e} at \
                 (f, V) = ({:.6}, {:.6e})",
                report.max_violation, report.worst.0, report.worst.1
            )));
        }
    }
}

/// The exponential slow-wave supersolution: an exact solution of
/// `v_t = (v^m)_xx + k v` whose free boundary runs off exponentially. A
/// supersolution of the full problem whenever `k u ≥ h(u)`.
#[derive(Debug, Clone, Copy)]
pub struct SlowWaveSupersolution {
    pub k_lin: f64,
    pub c1: f64,
    pub c2: f64,
    pub m: f64,
}

impl SlowWaveSupersolution {
    /// Validates `k_lin · u ≥ h(u)` on `(0, 1+δ]` by sampling.
    pub fn new(spec: &ReactionSpec, m: f64, k_lin: f64, c1: f64, c2: f64) -> Result<Self> {
        if !(m > 1.0) || !(c1 > 0.0) {
            return Err(Error::Domain("need m > 1 and C1 > 0".into()));
        }
        let delta = spec.classify(m, 1)?.delta_stable;
        let n = 1024;
        for i in 1..=n {
            let u = (1.0 + delta) * i as f64 / n as f64;
            let h = spec.eval(u)?;
            if k_lin * u < h {
                return Err(Error::Precondition(format!(
                    "k u >= h(u) fails at u = {u}: {} < {h}; raise k_lin",
                    k_lin * u
                )));
            }
        }
        Ok(Self { k_lin, c1, c2, m })
    }

    fn gamma_pow(&self, t: f64) -> f64 {
        ((self.m - 1.0) * self.k_lin * t).exp()
    }

    /// Free boundary `ρ(t) = C₂ + C₁ e^{k(m-1)t} / (k(m-1))`.
    pub fn rho(&self, t: f64) -> f64 {
        self.c2 + self.c1 * self.gamma_pow(t) / (self.k_lin * (self.m - 1.0))
    }

    /// `v(x, t)`; nonincreasing in `x` on its support, nondecreasing in `t`.
    /// In pressure form `P = C₁ γ^{m-1}(t) (ρ(t) - x)₊` with `γ = e^{kt}`,
    /// which solves the pressure equation of the `k u` reaction exactly.
    pub fn eval(&self, x: f64, t: f64) -> f64 {
        let gp = self.gamma_pow(t);
        let arg = (self.m - 1.0) / self.m * gp * self.c1 * (self.rho(t) - x).max(0.0);
        arg.powf(1.0 / (self.m - 1.0))
    }
}

/// Plateau subsolution: `v₀` equals `η` inside radius `ρ`, descends to zero
/// along the phase-plane leg over `[ρ, ρ+b]`, and `W(x, t) = v₀(|x| - c₁ t)`
/// translates it outward.
#[derive(Debug, Clone)]
pub struct PlateauSubsolution {
    pub eta: f64,
    pub rho: f64,
    /// Leg width.
    pub b: f64,
    /// Exit flux of the leg.
    pub nu: f64,
    /// Translation speed, strictly inside `(0, c - (N-1)/ρ)` (midpoint by
    /// default).
    pub c1: f64,
    /// Leg construction speed.
    pub c: f64,
    pub dim: u32,
    leg: MonotoneCubic,
}

impl PlateauSubsolution {
    pub fn new(
        spec: &ReactionSpec,
        m: f64,
        eta: f64,
        rho: f64,
        c: f64,
        dim: u32,
    ) -> Result<Self> {
        let nm1 = (dim as f64) - 1.0;
        if !(c > 0.0) || !(rho > nm1 / c) {
            return Err(Error::Parameter(format!(
                "plateau radius rho = {rho} must exceed (N-1)/c = {}",
                nm1 / c.max(1e-300)
            )));
        }
        let opts = crate::phaseplane::ShootOpts::default();
        let (traj, nu, b) = crate::phaseplane::subsolution_leg(spec, m, c, eta, &opts)?;
        let (mut xis, mut qs): (Vec<f64>, Vec<f64>) = traj
            .points
            .iter()
            .filter(|pt| pt.q > 0.0)
            .map(|pt| (pt.xi, pt.q))
            .unzip();
        xis.push(b.max(xis.last().copied().unwrap_or(0.0) + 1e-12));
        qs.push(0.0);
        let leg = MonotoneCubic::new(xis, qs)?;
        let c1 = 0.5 * (c - nm1 / rho);
        Ok(Self { eta, rho, b, nu, c1, c, dim, leg })
    }

    /// The radial profile `v₀(r)`.
    pub fn v0(&self, r: f64) -> f64 {
        if r <= self.rho {
            self.eta
        } else if r <= self.rho + self.b {
            self.leg.eval(r - self.rho).clamp(0.0, self.eta)
        } else {
            0.0
        }
    }

    /// The travelling barrier `W(x, t) = v₀(|x| - c₁ t)`.
    pub fn eval(&self, x: f64, t: f64) -> f64 {
        self.v0((x.abs() - self.c1 * t).max(0.0))
    }

    /// Discrete residual `W_t - Δ(W^m) - h(W)` on each of the three regions
    /// (plateau, leg, outside), sampled away from the junctions where `W` is
    /// only continuous. A valid subsolution keeps all three nonpositive up
    /// to discretization error.
    pub fn residual_report(
        &self,
        spec: &ReactionSpec,
        m: f64,
        t: f64,
        dx: f64,
    ) -> Result<[f64; 3]> {
        let guard = 4.0 * dx;
        let dt = 1e-6;
        let lap = |x: f64, t: f64| -> f64 {
            let wm = |y: f64| powf(self.eval(y, t), m);
            let nm1 = (self.dim as f64) - 1.0;
            let second = (wm(x + dx) - 2.0 * wm(x) + wm(x - dx)) / (dx * dx);
            if nm1 == 0.0 || x == 0.0 {
                second
            } else {
                second + nm1 / x.abs() * (wm(x + dx) - wm(x - dx)) / (2.0 * dx)
            }
        };
        let residual = |x: f64| -> Result<f64> {
            let wt = (self.eval(x, t + dt) - self.eval(x, t - dt)) / (2.0 * dt);
            Ok(wt - lap(x, t) - spec.eval(self.eval(x, t))?)
        };
        let edge1 = self.rho + self.c1 * t;
        let edge2 = self.rho + self.b + self.c1 * t;
        let mut worst = [f64::NEG_INFINITY; 3];
        let n = 200;
        for i in 0..=n {
            let x = guard + (edge1 - 2.0 * guard) * i as f64 / n as f64;
            if x > guard && x < edge1 - guard {
                worst[0] = worst[0].max(residual(x)?);
            }
            let y = edge1 + guard + (edge2 - edge1 - 2.0 * guard) * i as f64 / n as f64;
            if y > edge1 + guard && y < edge2 - guard {
                worst[1] = worst[1].max(residual(y)?);
            }
            let z = edge2 + guard + 5.0 * i as f64 / n as f64;
            worst[2] = worst[2].max(residual(z)?);
        }
        Ok(worst)
    }
}

/// Shift bounds of the stability sandwich: a solution ε-close to the wave
/// stays between `(1∓ε)`-scaled translates shifted by at most
/// `σ₁ ≤ Kε + log(1/(1-ε))` and `σ₂ ≤ Kε + log(1+ε)`.
pub fn stability_shift_bounds(eps: f64, k_const: f64) -> Result<(f64, f64)> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain(format!("eps must lie in (0, 1), got {eps}")));
    }
    Ok((
        k_const * eps + (1.0 / (1.0 - eps)).ln(),
        k_const * eps + (1.0 + eps).ln(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phaseplane::critical_speed;
    use crate::reaction::ReactionSpec;

    fn logistic_setup() -> (ReactionSpec, f64, WaveProfile) {
        let spec = ReactionSpec::logistic();
        let (speed, profile) = WaveProfile::compute(&spec, 2.0, 1e-4, 1e-4).unwrap();
        (spec, speed.c_star, profile)
    }

    #[test]
    fn fg_matches_closed_form_height() {
        let spec = ReactionSpec::logistic();
        let c_star = critical_speed(&spec, 2.0, 1e-4).unwrap().c_star;
        let mut cfg = BarrierConfig::auto(&spec, 2.0, c_star, 0.95, 0.0).unwrap();
        cfg.kappa = 0.1;
        cfg.validate(&spec).unwrap();
        let path = integrate_fg(&cfg, &spec, 20.0).unwrap();
        for &(t, f, _) in path.samples.iter().step_by(500) {
            let exact = 1.0 - 0.05 * (-0.1 * t).exp();
            assert!((f - exact).abs() <= 1e-8, "f({t}) = {f} vs {exact}");
        }
    }

    #[test]
    fn fg_monotonicity_and_limit() {
        let spec = ReactionSpec::logistic();
        let c_star = critical_speed(&spec, 2.0, 1e-4).unwrap().c_star;
        let cfg = BarrierConfig::auto(&spec, 2.0, c_star, 0.95, 0.0).unwrap();
        let path = integrate_fg(&cfg, &spec, 60.0).unwrap();
        // f increases toward 1, g - c*t decreases toward a finite limit
        for w in path.samples.windows(2) {
            assert!(w[1].1 >= w[0].1);
            let r0 = w[0].2 - c_star * w[0].0;
            let r1 = w[1].2 - c_star * w[1].0;
            assert!(r1 <= r0 + 1e-12);
        }
        let last = path.samples.last().unwrap();
        let r_end = last.2 - c_star * last.0;
        assert!(path.xi_limit <= r_end && path.xi_limit.is_finite());
        // closed form for m = 2: xi_limit = g0 + c* eps/kappa + k ln(1+eps)
        let eps = cfg.f0 - 1.0;
        let exact = cfg.g0 + c_star * eps / cfg.kappa + cfg.k * (1.0 + eps).ln();
        assert!((path.xi_limit - exact).abs() < 1e-4, "{} vs {exact}", path.xi_limit);
    }

    #[test]
    fn fg_shift_collapses_to_g0_as_f0_tends_to_one() {
        let spec = ReactionSpec::logistic();
        let c_star = critical_speed(&spec, 2.0, 1e-4).unwrap().c_star;
        let mut prev_gap = f64::INFINITY;
        for f0 in [0.99, 0.999, 0.9999] {
            let cfg = BarrierConfig::auto(&spec, 2.0, c_star, f0, 3.0).unwrap();
            let path = integrate_fg(&cfg, &spec, 40.0).unwrap();
            let gap = (path.xi_limit - 3.0).abs();
            assert!(gap < prev_gap, "shift gap {gap} did not shrink");
            prev_gap = gap;
        }
        assert!(prev_gap < 1e-3);
    }

    #[test]
    fn residual_sign_for_sub_and_super() {
        let (spec, c_star, profile) = logistic_setup();
        for (f0, side) in [(0.95, BarrierSide::Sub), (1.05, BarrierSide::Super)] {
            let mut cfg = BarrierConfig::auto(&spec, 2.0, c_star, f0, 0.0).unwrap();
            cfg.k = choose_k(&cfg, &profile, &spec).unwrap();
            let report = residual_sign_check(&cfg, &profile, &spec, 200, 400).unwrap();
            assert_eq!(report.side, side);
            assert!(report.pass, "violation {:.3e} at {:?}", report.max_violation, report.worst);
            // doubling k keeps the check passing
            cfg.k *= 2.0;
            assert!(residual_sign_check(&cfg, &profile, &spec, 200, 400).unwrap().pass);
        }
    }

    #[test]
    fn kappa_above_bound_rejected_before_search() {
        let (spec, c_star, profile) = logistic_setup();
        let mut cfg = BarrierConfig::auto(&spec, 2.0, c_star, 0.95, 0.0).unwrap();
        cfg.kappa = 10.0;
        match choose_k(&cfg, &profile, &spec) {
            Err(Error::Parameter(msg)) => assert!(msg.contains("bound"), "{msg}"),
            other => panic!("expected parameter error, got {other:?}"),
        }
    }

    #[test]
    fn slow_wave_formulas() {
        let spec = ReactionSpec::logistic();
        let v = SlowWaveSupersolution::new(&spec, 2.0, 1.0, 1.0, 0.0).unwrap();
        for t in [0.0, 0.5, 1.0, 2.0] {
            assert!((v.rho(t) - t.exp()).abs() <= 1e-12 * t.exp());
            assert_eq!(v.eval(v.rho(t), t), 0.0);
            assert!(v.eval(v.rho(t) - 0.5, t) > 0.0);
        }
        // k too small fails the precondition
        assert!(matches!(
            SlowWaveSupersolution::new(&spec, 2.0, 0.2, 1.0, 0.0),
            Err(Error::Precondition(_))
        ));
        // nonincreasing in x, nondecreasing in t
        for i in 0..50 {
            let x = -2.0 + 4.0 * i as f64 / 50.0;
            assert!(v.eval(x, 0.5) >= v.eval(x + 0.1, 0.5));
            assert!(v.eval(x, 0.6) >= v.eval(x, 0.5));
        }
    }

    #[test]
    fn slow_wave_discrete_residual_second_order() {
        // v solves v_t = (v^m)_xx + k v exactly; the centered discrete
        // residual decays like dx^2 away from the front kink.
        let spec = ReactionSpec::logistic();
        let v = SlowWaveSupersolution::new(&spec, 2.0, 1.0, 1.0, 0.0).unwrap();
        let t = 0.7;
        let resid_sup = |dx: f64| -> f64 {
            let dt = dx * dx / 8.0;
            let mut worst = 0.0f64;
            let rho = v.rho(t);
            let mut x = -3.0;
            while x < rho - 4.0 * dx {
                let vt = (v.eval(x, t + dt) - v.eval(x, t - dt)) / (2.0 * dt);
                let lap = (powf(v.eval(x + dx, t), 2.0) - 2.0 * powf(v.eval(x, t), 2.0)
                    + powf(v.eval(x - dx, t), 2.0))
                    / (dx * dx);
                worst = worst.max((vt - lap - v.k_lin * v.eval(x, t)).abs());
                x += dx;
            }
            worst
        };
        let r1 = resid_sup(0.02);
        let r2 = resid_sup(0.01);
        assert!(r1 < 1e-2, "residual too large: {r1}");
        assert!(r2 < 0.35 * r1, "no second-order decay: {r1} -> {r2}");
    }

    #[test]
    fn plateau_regions_and_residual_signs() {
        let spec = ReactionSpec::bistable(0.3).unwrap();
        let c_star = critical_speed(&spec, 2.0, 1e-4).unwrap().c_star;
        let c = 0.5 * c_star;
        let p = PlateauSubsolution::new(&spec, 2.0, 0.9, 20.0, c, 1).unwrap();
        assert_eq!(p.v0(0.0), 0.9);
        assert_eq!(p.v0(25.0 + p.b), 0.0);
        assert!(p.c1 > 0.0 && p.c1 < c);
        let worst = p.residual_report(&spec, 2.0, 1.0, 1e-3).unwrap();
        // plateau region: residual is exactly -h(eta) < 0
        let h_eta = spec.eval(0.9).unwrap();
        assert!((worst[0] + h_eta).abs() <= 1e-5, "plateau residual {}", worst[0]);
        // the exact leg residual is strictly negative in the interior; the
        // positive excess is tabulation noise near the square-root foot
        assert!(worst[1] <= 2e-3, "leg residual {}", worst[1]);
        assert!(worst[2].abs() <= 1e-12, "outer residual {}", worst[2]);
    }

    #[test]
    fn plateau_rejects_small_radius() {
        let spec = ReactionSpec::bistable(0.3).unwrap();
        // N = 2 with tiny rho violates rho > (N-1)/c
        match PlateauSubsolution::new(&spec, 2.0, 0.9, 0.5, 0.19, 2) {
            Err(Error::Parameter(msg)) => assert!(msg.contains("rho")),
            other => panic!("expected parameter error, got {other:?}"),
        }
    }

    #[test]
    fn sub_barrier_sits_below_super_barrier() {
        // with ordered front offsets, f0 V(x - g_sub) <= f0' V(x - g_super)
        let (_, _, profile) = logistic_setup();
        let (g_sub, g_super) = (-1.5, 1.5);
        for i in 0..=400 {
            let x = -30.0 + 40.0 * i as f64 / 400.0;
            let w_sub = 0.95 * profile.eval(x - g_sub);
            let w_super = 1.05 * profile.eval(x - g_super);
            assert!(w_sub <= w_super + 1e-12, "ordering violated at x={x}");
        }
    }

    #[test]
    fn shift_bound_values() {
        let (s1, s2) = stability_shift_bounds(0.1, 2.0).unwrap();
        assert!((s2 - (0.2 + 1.1f64.ln())).abs() < 1e-15);
        assert!((s1 - (0.2 + (1.0 / 0.9f64).ln())).abs() < 1e-15);
        for i in 1..100 {
            let eps = i as f64 / 100.0;
            let (a, b) = stability_shift_bounds(eps, 2.0).unwrap();
            assert!(a >= b);
        }
        let (a, b) = stability_shift_bounds(1e-12, 2.0).unwrap();
        assert!(a < 1e-10 && b < 1e-10);
    }
}
