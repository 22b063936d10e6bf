//! Catalog of reaction nonlinearities `h` for `u_t = Δu^m + h(u)`.
//!
//! Every admissible reaction vanishes at 0 and 1, is nonpositive on `[0, a]`
//! for some sign-change point `a ∈ [0, 1)`, positive on `(a, 1)`, negative
//! above 1, and has `h'(1) < 0`. Monostable reactions have `a = 0`; bistable
//! ones are negative on `(0, a)`; combustion ones vanish identically on
//! `[0, a]`.

use std::fmt;
use std::path::Path;

use crate::numerics::{adaptive_simpson, grid_maximize};
use crate::{Error, Result};

/// Functional form of the reaction term.
#[derive(Debug, Clone, PartialEq)]
pub enum ReactionKind {
    /// `h(u) = u(1 - u)`.
    Logistic,
    /// `h(u) = u^p (1 - u)` with `p ≥ 1`.
    PowerMonostable { p: f64 },
    /// `h(u) = u(u - a)(1 - u)` with `a ∈ (0, 1)`.
    Bistable { a: f64 },
    /// `h(u) = (u - a)^2 (1 - u)` for `u > a`, zero on `[0, a]`.
    Combustion { a: f64 },
    /// `h(u) = k u^e (1 - u)` with `e = m + 2/N` fixed at construction; `b`
    /// records the range on which the pure-power comparison is meant to hold.
    FujitaCritical { k: f64, b: f64, exponent: f64 },
    /// Piecewise-linear table `(u_i, h_i)` with strictly increasing `u_i`.
    CustomTable { u: Vec<f64>, h: Vec<f64>, a: f64 },
}

/// A reaction nonlinearity together with its derived sign-change point.
/// Immutable after construction and safe to share across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct ReactionSpec {
    kind: ReactionKind,
    description: String,
}

/// Derived constants of a reaction for a given diffusion exponent `m` and
/// spatial dimension `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReactionClassification {
    /// Sign-change point `a ∈ [0, 1)`.
    pub a: f64,
    /// `∫_0^1 h(u) u^{m-1} du`; wave-speed computations require this to be
    /// positive (Hosono condition), otherwise the critical speed is not
    /// positive and a different analysis applies.
    pub hosono: f64,
    /// `sup_{q ∈ (0,1]} m q^{m-2} h(q)`, the slope bound entering the
    /// bisection bracket `c* ≤ 2√σ`.
    pub sigma: f64,
    /// Fujita exponent `m + 2/N`.
    pub fujita_exponent: f64,
    /// Whether `liminf_{u→0} h(u)/u^{m+2/N} > 0`, i.e. every nontrivial
    /// nonnegative datum spreads.
    pub hair_trigger: bool,
    /// Set when `hair_trigger` was estimated from tabulated data rather than
    /// decided from the functional form.
    pub hair_trigger_heuristic: bool,
    /// Largest `δ ≤ 0.5` with `h' < 0 on (1-δ, 1+δ)`.
    pub delta_stable: f64,
    pub h_prime_at_1: f64,
}

impl fmt::Display for ReactionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.description)
    }
}

impl ReactionSpec {
    pub fn logistic() -> Self {
        Self {
            kind: ReactionKind::Logistic,
            description: "logistic u(1-u)".into(),
        }
    }

    pub fn power_monostable(p: f64) -> Result<Self> {
        if !(p >= 1.0) || !p.is_finite() {
            return Err(Error::Domain(format!(
                "power reaction needs exponent p >= 1, got {p}"
            )));
        }
        Ok(Self {
            kind: ReactionKind::PowerMonostable { p },
            description: format!("power u^{p}(1-u)"),
        })
    }

    pub fn bistable(a: f64) -> Result<Self> {
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::Domain(format!(
                "bistable sign-change point must lie in (0, 1), got {a}"
            )));
        }
        Ok(Self {
            kind: ReactionKind::Bistable { a },
            description: format!("bistable u(u-{a})(1-u)"),
        })
    }

    pub fn combustion(a: f64) -> Result<Self> {
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::Domain(format!(
                "combustion ignition point must lie in (0, 1), got {a}"
            )));
        }
        Ok(Self {
            kind: ReactionKind::Combustion { a },
            description: format!("combustion (u-{a})^2(1-u) above {a}"),
        })
    }

    /// Reaction growing exactly at the Fujita exponent `m + 2/N` near zero.
    pub fn fujita_critical(k: f64, b: f64, m: f64, n_dim: u32) -> Result<Self> {
        if !(k > 0.0) || !(b > 0.0 && b < 1.0) {
            return Err(Error::Domain(format!(
                "fujita reaction needs k > 0 and b in (0, 1), got k={k}, b={b}"
            )));
        }
        check_m(m)?;
        let exponent = m + 2.0 / n_dim as f64;
        Ok(Self {
            kind: ReactionKind::FujitaCritical { k, b, exponent },
            description: format!("fujita {k}*u^{exponent}(1-u)"),
        })
    }

    /// Tabulated reaction; `u` must be strictly increasing and cover `[0, 1]`.
    pub fn from_table(u: Vec<f64>, h: Vec<f64>) -> Result<Self> {
        if u.len() != h.len() || u.len() < 3 {
            return Err(Error::Domain("reaction table needs at least 3 rows".into()));
        }
        if u.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Domain("table abscissae must be strictly increasing".into()));
        }
        if u[0] > 0.0 || *u.last().unwrap() < 1.0 {
            return Err(Error::Domain("reaction table must cover [0, 1]".into()));
        }
        let a = table_sign_change(&u, &h)?;
        let spec = Self {
            kind: ReactionKind::CustomTable { u, h, a },
            description: "tabulated reaction".into(),
        };
        if spec.eval(0.0)?.abs() > 1e-9 || spec.eval(1.0)?.abs() > 1e-9 {
            return Err(Error::Domain(
                "tabulated reaction must vanish at u = 0 and u = 1".into(),
            ));
        }
        Ok(spec)
    }

    /// Parse the CLI grammar: `logistic`, `power:<p>`, `bistable:<a>`,
    /// `combustion:<a>`, `fujita:<k>,<b>`, `table:<path.csv>`. `m` and `N`
    /// fix the Fujita exponent at parse time.
    pub fn parse(s: &str, m: f64, n_dim: u32) -> Result<Self> {
        let bad_num = |tok: &str| Error::Domain(format!("malformed number `{tok}` in reaction spec `{s}`"));
        let spec = match s.split_once(':') {
            None if s == "logistic" => Self::logistic(),
            Some(("power", p)) => Self::power_monostable(p.trim().parse().map_err(|_| bad_num(p))?)?,
            Some(("bistable", a)) => Self::bistable(a.trim().parse().map_err(|_| bad_num(a))?)?,
            Some(("combustion", a)) => Self::combustion(a.trim().parse().map_err(|_| bad_num(a))?)?,
            Some(("fujita", rest)) => {
                let (k, b) = rest.split_once(',').ok_or_else(|| {
                    Error::Domain(format!("fujita spec needs `fujita:<k>,<b>`, got `{s}`"))
                })?;
                Self::fujita_critical(
                    k.trim().parse().map_err(|_| bad_num(k))?,
                    b.trim().parse().map_err(|_| bad_num(b))?,
                    m,
                    n_dim,
                )?
            }
            Some(("table", path)) => Self::from_table_csv(Path::new(path.trim()))?,
            _ => {
                return Err(Error::Domain(format!(
                    "unknown reaction spec `{s}` (expected logistic, power:<p>, bistable:<a>, \
                     combustion:<a>, fujita:<k>,<b> or table:<path.csv>)"
                )))
            }
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Load a two-column CSV with header `u,h`.
    pub fn from_table_csv(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })?;
        let mut lines = text.lines();
        match lines.next() {
            Some(h) if h.trim() == "u,h" => {}
            other => {
                return Err(Error::Domain(format!(
                    "reaction table must start with header `u,h`, got {other:?}"
                )))
            }
        }
        let mut us = Vec::new();
        let mut hs = Vec::new();
        for (i, line) in lines.enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (u, h) = line.split_once(',').ok_or_else(|| {
                Error::Domain(format!("table row {} is not `u,h`: `{line}`", i + 2))
            })?;
            let parse = |tok: &str| -> Result<f64> {
                tok.trim()
                    .parse()
                    .map_err(|_| Error::Domain(format!("malformed number `{tok}` in table row {}", i + 2)))
            };
            us.push(parse(u)?);
            hs.push(parse(h)?);
        }
        Self::from_table(us, hs)
    }

    pub fn kind(&self) -> &ReactionKind {
        &self.kind
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    /// Sign-change point `a`; zero for monostable kinds. For tables this was
    /// located by bisection on the last sign change below 1.
    pub fn sign_change(&self) -> f64 {
        match &self.kind {
            ReactionKind::Logistic
            | ReactionKind::PowerMonostable { .. }
            | ReactionKind::FujitaCritical { .. } => 0.0,
            ReactionKind::Bistable { a } | ReactionKind::Combustion { a } => *a,
            ReactionKind::CustomTable { a, .. } => *a,
        }
    }

    /// Evaluate `h(u)` for `u ≥ 0`.
    pub fn eval(&self, u: f64) -> Result<f64> {
        if u < 0.0 || !u.is_finite() {
            return Err(Error::Domain(format!("reaction evaluated at u = {u} < 0")));
        }
        Ok(match &self.kind {
            ReactionKind::Logistic => u * (1.0 - u),
            ReactionKind::PowerMonostable { p } => powf(u, *p) * (1.0 - u),
            ReactionKind::Bistable { a } => u * (u - a) * (1.0 - u),
            ReactionKind::Combustion { a } => {
                if u <= *a {
                    0.0
                } else {
                    (u - a) * (u - a) * (1.0 - u)
                }
            }
            ReactionKind::FujitaCritical { k, exponent, .. } => k * powf(u, *exponent) * (1.0 - u),
            ReactionKind::CustomTable { u: us, h: hs, .. } => table_eval(us, hs, u)?,
        })
    }

    /// Hot-loop evaluation: assumes `u ≥ 0` (the solver clips negatives) and
    /// clamps tabulated reactions to their range instead of erroring.
    #[inline]
    pub(crate) fn eval_unchecked(&self, u: f64) -> f64 {
        match &self.kind {
            ReactionKind::Logistic => u * (1.0 - u),
            ReactionKind::PowerMonostable { p } => powf(u, *p) * (1.0 - u),
            ReactionKind::Bistable { a } => u * (u - a) * (1.0 - u),
            ReactionKind::Combustion { a } => {
                if u <= *a {
                    0.0
                } else {
                    (u - a) * (u - a) * (1.0 - u)
                }
            }
            ReactionKind::FujitaCritical { k, exponent, .. } => k * powf(u, *exponent) * (1.0 - u),
            ReactionKind::CustomTable { u: us, h: hs, .. } => {
                let uc = u.clamp(us[0], *us.last().unwrap());
                table_eval(us, hs, uc).unwrap_or(0.0)
            }
        }
    }

    /// Evaluate `h'(u)` with the same domain contract as [`Self::eval`]. For
    /// tables this is the piecewise-linear slope.
    pub fn eval_prime(&self, u: f64) -> Result<f64> {
        if u < 0.0 || !u.is_finite() {
            return Err(Error::Domain(format!("reaction slope evaluated at u = {u} < 0")));
        }
        Ok(match &self.kind {
            ReactionKind::Logistic => 1.0 - 2.0 * u,
            ReactionKind::PowerMonostable { p } => {
                p * powf(u, p - 1.0) - (p + 1.0) * powf(u, *p)
            }
            ReactionKind::Bistable { a } => -3.0 * u * u + 2.0 * (1.0 + a) * u - a,
            ReactionKind::Combustion { a } => {
                if u <= *a {
                    0.0
                } else {
                    2.0 * (u - a) * (1.0 - u) - (u - a) * (u - a)
                }
            }
            ReactionKind::FujitaCritical { k, exponent, .. } => {
                k * (exponent * powf(u, exponent - 1.0) - (exponent + 1.0) * powf(u, *exponent))
            }
            ReactionKind::CustomTable { u: us, h: hs, .. } => table_slope(us, hs, u)?,
        })
    }

    /// Phase-plane forcing `f(q) = m q^{m-1} h(q)`; vanishes at `q = 0` (the
    /// factor `q^{m-1}` with `m > 1`) and at `q = 1`.
    pub fn phase_force(&self, m: f64, q: f64) -> Result<f64> {
        check_m(m)?;
        if q < 0.0 {
            return Err(Error::Domain(format!("phase forcing evaluated at q = {q} < 0")));
        }
        if q > 1.5 {
            return Err(Error::Domain(format!(
                "phase forcing evaluated at q = {q} outside [0, 1.5]"
            )));
        }
        Ok(m * powf(q, m - 1.0) * self.eval(q)?)
    }

    /// Check the admissibility requirements by evaluation: roots at 0 and 1,
    /// `h'(1) < 0`, and the sign pattern on a 1000-point grid over `[0, 2]`
    /// (negative part clipped to the table range for tabulated reactions).
    pub fn validate(&self) -> Result<()> {
        let tol = match self.kind {
            ReactionKind::CustomTable { .. } => 1e-9,
            _ => 0.0,
        };
        if self.eval(0.0)?.abs() > tol || self.eval(1.0)?.abs() > tol {
            return Err(Error::Domain("reaction must vanish at u = 0 and u = 1".into()));
        }
        if !(self.eval_prime(1.0)? < 0.0) {
            return Err(Error::Domain(format!(
                "reaction must be exponentially stable at 1: h'(1) = {} is not negative",
                self.eval_prime(1.0)?
            )));
        }
        let a = self.sign_change();
        let hi = match &self.kind {
            ReactionKind::CustomTable { u, .. } => u.last().copied().unwrap().min(2.0),
            _ => 2.0,
        };
        let n = 1000;
        for i in 0..=n {
            let u = hi * i as f64 / n as f64;
            let v = self.eval(u)?;
            let ok = if u <= a + 1e-12 {
                v <= tol + 1e-12
            } else if u < 1.0 - 1e-9 {
                // positivity on (a, 1) is sampled strictly inside
                if u > a + 1e-6 && u < 1.0 - 1e-6 {
                    v > -tol
                } else {
                    true
                }
            } else if u > 1.0 + 1e-9 {
                v < tol + 1e-12
            } else {
                true
            };
            if !ok {
                return Err(Error::Domain(format!(
                    "reaction sign pattern violated at u = {u}: h = {v}"
                )));
            }
        }
        Ok(())
    }

    /// Derived constants for diffusion exponent `m` and dimension `N`.
    pub fn classify(&self, m: f64, n_dim: u32) -> Result<ReactionClassification> {
        check_m(m)?;
        if n_dim == 0 {
            return Err(Error::Domain("dimension must be at least 1".into()));
        }
        let hosono = adaptive_simpson(
            &|u: f64| self.eval(u).unwrap_or(f64::NAN) * powf(u, m - 1.0),
            0.0,
            1.0,
            1e-8,
        )?;
        let (_, sigma) = grid_maximize(
            &|q: f64| m * powf(q, m - 2.0) * self.eval(q).unwrap_or(f64::NAN),
            1e-9,
            1.0,
            1000,
            1e-12,
        );
        let fujita_exponent = m + 2.0 / n_dim as f64;
        let (hair_trigger, hair_trigger_heuristic) = self.hair_trigger(fujita_exponent);
        let delta_stable = self.delta_stable()?;
        Ok(ReactionClassification {
            a: self.sign_change(),
            hosono,
            sigma,
            fujita_exponent,
            hair_trigger,
            hair_trigger_heuristic,
            delta_stable,
            h_prime_at_1: self.eval_prime(1.0)?,
        })
    }

    fn hair_trigger(&self, fujita_exponent: f64) -> (bool, bool) {
        match &self.kind {
            ReactionKind::Logistic => (true, false),
            ReactionKind::PowerMonostable { p } => (*p <= fujita_exponent, false),
            ReactionKind::Bistable { .. } | ReactionKind::Combustion { .. } => (false, false),
            ReactionKind::FujitaCritical { exponent, .. } => {
                (*exponent <= fujita_exponent + 1e-12, false)
            }
            ReactionKind::CustomTable { u, h, .. } => {
                // The liminf is not computable from finite data; estimate a
                // growth exponent from the smallest three positive abscissae.
                let pts: Vec<(f64, f64)> = u
                    .iter()
                    .zip(h)
                    .filter(|(u, _)| **u > 0.0)
                    .take(3)
                    .map(|(u, h)| (*u, *h))
                    .collect();
                if pts.len() < 3 || pts.iter().any(|(_, h)| *h <= 0.0) {
                    return (false, true);
                }
                let xs: Vec<f64> = pts.iter().map(|(u, _)| u.ln()).collect();
                let ys: Vec<f64> = pts.iter().map(|(_, h)| h.ln()).collect();
                match crate::numerics::linear_fit(&xs, &ys) {
                    Ok((slope, _)) => (slope <= fujita_exponent + 1e-9, true),
                    Err(_) => (false, true),
                }
            }
        }
    }

    /// Largest `δ ≤ 0.5` with `h' < 0` on `(1-δ, 1+δ)`, found by scanning for
    /// the first slope sign change on each side of 1 and bisecting.
    fn delta_stable(&self) -> Result<f64> {
        let first_nonneg = |lo: f64, hi: f64, ascending: bool| -> Result<f64> {
            let n = 4096;
            let at = |i: usize| {
                let s = i as f64 / n as f64;
                if ascending {
                    lo + (hi - lo) * s
                } else {
                    hi - (hi - lo) * s
                }
            };
            for i in 1..=n {
                if self.eval_prime(at(i))? >= 0.0 {
                    let (mut good, mut bad) = (at(i - 1), at(i));
                    for _ in 0..60 {
                        let mid = 0.5 * (good + bad);
                        if self.eval_prime(mid)? >= 0.0 {
                            bad = mid;
                        } else {
                            good = mid;
                        }
                    }
                    return Ok(bad);
                }
            }
            Ok(if ascending { hi } else { lo })
        };
        let up = first_nonneg(1.0, 1.5, true)?;
        let down = first_nonneg(0.5, 1.0, false)?;
        let delta = (up - 1.0).min(1.0 - down).min(0.5);
        if !(delta > 0.0) {
            return Err(Error::Domain(
                "no stability interval around u = 1: h'(1) must be negative".into(),
            ));
        }
        Ok(delta)
    }
}

fn check_m(m: f64) -> Result<()> {
    if !(m > 1.0) || !m.is_finite() {
        return Err(Error::Domain(format!("diffusion exponent must satisfy m > 1, got {m}")));
    }
    Ok(())
}

/// `u^e` with exact fast paths for the common small integer exponents that
/// dominate the solver hot loops.
#[inline]
pub(crate) fn powf(u: f64, e: f64) -> f64 {
    if e == 1.0 {
        u
    } else if e == 2.0 {
        u * u
    } else if e == 3.0 {
        u * u * u
    } else {
        u.powf(e)
    }
}

fn table_eval(us: &[f64], hs: &[f64], u: f64) -> Result<f64> {
    if u < us[0] || u > *us.last().unwrap() {
        return Err(Error::Range(format!(
            "u = {u} outside tabulated range [{}, {}]",
            us[0],
            us.last().unwrap()
        )));
    }
    let i = match us.partition_point(|&v| v <= u) {
        0 => 0,
        k if k >= us.len() => us.len() - 2,
        k => k - 1,
    };
    let t = (u - us[i]) / (us[i + 1] - us[i]);
    Ok(hs[i] + t * (hs[i + 1] - hs[i]))
}

fn table_slope(us: &[f64], hs: &[f64], u: f64) -> Result<f64> {
    if u < us[0] || u > *us.last().unwrap() {
        return Err(Error::Range(format!(
            "u = {u} outside tabulated range [{}, {}]",
            us[0],
            us.last().unwrap()
        )));
    }
    let i = match us.partition_point(|&v| v < u) {
        0 => 0,
        k if k >= us.len() => us.len() - 2,
        k => k - 1,
    };
    Ok((hs[i + 1] - hs[i]) / (us[i + 1] - us[i]))
}

/// Locate the last sign change of the tabulated reaction below 1 by bisection
/// on the piecewise-linear interpolant, to absolute tolerance 1e-10.
fn table_sign_change(us: &[f64], hs: &[f64]) -> Result<f64> {
    let mut a = 0.0;
    for w in us.windows(2).zip(hs.windows(2)) {
        let ((u0, u1), (h0, h1)) = ((w.0[0], w.0[1]), (w.1[0], w.1[1]));
        if u0 >= 1.0 {
            break;
        }
        if h0 <= 0.0 && h1 > 0.0 {
            let (mut lo, mut hi) = (u0, u1.min(1.0));
            while hi - lo > 1e-10 {
                let mid = 0.5 * (lo + hi);
                let v = table_eval(us, hs, mid)?;
                if v <= 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            a = 0.5 * (lo + hi);
        }
    }
    if a >= 1.0 {
        return Err(Error::Domain("tabulated reaction has no positive part below 1".into()));
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn logistic_values() {
        let r = ReactionSpec::logistic();
        assert_eq!(r.eval(0.0).unwrap(), 0.0);
        assert_eq!(r.eval(0.5).unwrap(), 0.25);
        assert!(r.eval(-0.1).is_err());
    }

    #[test]
    fn bistable_root_at_a() {
        let r = ReactionSpec::bistable(0.3).unwrap();
        assert!(r.eval(0.3).unwrap().abs() < 1e-16);
        assert!(r.eval(0.15).unwrap() < 0.0);
        assert!(r.eval(0.6).unwrap() > 0.0);
    }

    #[test]
    fn phase_force_values() {
        let r = ReactionSpec::logistic();
        assert!((r.phase_force(2.0, 0.5).unwrap() - 0.25).abs() < 1e-15);
        assert_eq!(r.phase_force(2.0, 0.0).unwrap(), 0.0);
        let b = ReactionSpec::bistable(0.3).unwrap();
        assert!(b.phase_force(2.0, 0.3).unwrap().abs() < 1e-16);
        assert!(r.phase_force(2.0, -0.1).is_err());
        assert!(r.phase_force(1.0, 0.5).is_err());
    }

    #[test]
    fn classify_logistic_m2() {
        let c = ReactionSpec::logistic().classify(2.0, 1).unwrap();
        assert!((c.hosono - 1.0 / 12.0).abs() < 1e-9, "hosono = {}", c.hosono);
        assert!((c.sigma - 0.5).abs() < 1e-9, "sigma = {}", c.sigma);
        assert_eq!(c.fujita_exponent, 4.0);
        assert!(c.hair_trigger && !c.hair_trigger_heuristic);
        assert!((c.delta_stable - 0.5).abs() < 1e-6);
        assert_eq!(c.h_prime_at_1, -1.0);
    }

    #[test]
    fn classify_bistable_m2() {
        let c = ReactionSpec::bistable(0.3).unwrap().classify(2.0, 1).unwrap();
        // exact: ∫_0^1 u^2(u-0.3)(1-u) du = 0.025
        assert!((c.hosono - 0.025).abs() < 1e-9, "hosono = {}", c.hosono);
        assert!(c.a == 0.3 && !c.hair_trigger);
        assert!(c.delta_stable > 0.0 && c.delta_stable <= 0.5);
    }

    #[test]
    fn hair_trigger_cutoff_at_fujita_exponent() {
        let p4 = ReactionSpec::power_monostable(4.0).unwrap().classify(2.0, 1).unwrap();
        let p6 = ReactionSpec::power_monostable(6.0).unwrap().classify(2.0, 1).unwrap();
        assert!(p4.hair_trigger);
        assert!(!p6.hair_trigger);
    }

    #[test]
    fn fujita_hosono_positive_for_all_k() {
        for k in [0.1, 1.0, 10.0] {
            let r = ReactionSpec::fujita_critical(k, 0.5, 2.0, 1).unwrap();
            assert!(r.classify(2.0, 1).unwrap().hosono > 0.0);
        }
    }

    #[test]
    fn classify_is_bitwise_deterministic() {
        let r = ReactionSpec::bistable(0.3).unwrap();
        let c1 = r.classify(2.0, 1).unwrap();
        let c2 = r.classify(2.0, 1).unwrap();
        assert_eq!(c1.hosono.to_bits(), c2.hosono.to_bits());
        assert_eq!(c1.sigma.to_bits(), c2.sigma.to_bits());
        assert_eq!(c1.delta_stable.to_bits(), c2.delta_stable.to_bits());
    }

    #[test]
    fn catalog_sign_pattern_and_stability() {
        let specs = [
            ReactionSpec::logistic(),
            ReactionSpec::power_monostable(2.0).unwrap(),
            ReactionSpec::power_monostable(6.0).unwrap(),
            ReactionSpec::bistable(0.3).unwrap(),
            ReactionSpec::combustion(0.3).unwrap(),
            ReactionSpec::fujita_critical(1.0, 0.5, 2.0, 1).unwrap(),
        ];
        for s in &specs {
            s.validate().unwrap_or_else(|e| panic!("{s}: {e}"));
            assert!(s.eval_prime(1.0).unwrap() < 0.0, "{s}");
        }
    }

    #[test]
    fn parse_grammar() {
        assert!(ReactionSpec::parse("logistic", 2.0, 1).is_ok());
        assert!(ReactionSpec::parse("power:4", 2.0, 1).is_ok());
        assert!(ReactionSpec::parse("bistable:0.3", 2.0, 1).is_ok());
        assert!(ReactionSpec::parse("combustion:0.25", 2.0, 1).is_ok());
        assert!(ReactionSpec::parse("fujita:1,0.5", 2.0, 1).is_ok());
        assert!(ReactionSpec::parse("nope", 2.0, 1).is_err());
        assert!(ReactionSpec::parse("power:x", 2.0, 1).is_err());
    }

    #[test]
    fn custom_table_sign_change_located() {
        // piecewise-linear caricature of a bistable reaction with a = 0.4
        let u: Vec<f64> = (0..=100).map(|i| 2.0 * i as f64 / 100.0).collect();
        let h: Vec<f64> = u.iter().map(|&v| v * (v - 0.4) * (1.0 - v)).collect();
        let r = ReactionSpec::from_table(u, h).unwrap();
        assert!((r.sign_change() - 0.4).abs() < 1e-6);
        assert!(r.eval(2.5).is_err(), "extrapolation must be a range error");
    }
}
