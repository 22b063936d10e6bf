//! Small deterministic numerical utilities shared across the crate.

use crate::{Error, Result};

/// Adaptive Simpson quadrature of `f` over `[a, b]` to relative tolerance
/// `rel_tol` (with an absolute floor for integrals near zero).
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let scale = whole.abs().max(1e-12);
    let v = simpson_rec(f, a, b, fa, fm, fb, whole, rel_tol * scale, 50)?;
    if !v.is_finite() {
        return Err(Error::Numeric(format!(
            "quadrature over [{a}, {b}] produced a non-finite value"
        )));
    }
    Ok(v)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * eps {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::Numeric(format!(
            "quadrature did not converge on [{a}, {b}]: residual {:.3e} above {:.3e}",
            delta.abs(),
            15.0 * eps
        )));
    }
    Ok(simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1)?
        + simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1)?)
}

/// Maximize `f` on `[a, b]` by a coarse grid scan followed by golden-section
/// refinement of the bracketing interval. Returns `(argmax, max)`.
pub fn grid_maximize<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, grid: usize, tol: f64) -> (f64, f64) {
    let mut best_i = 0;
    let mut best = f64::NEG_INFINITY;
    for i in 0..=grid {
        let x = a + (b - a) * i as f64 / grid as f64;
        let v = f(x);
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let lo = a + (b - a) * best_i.saturating_sub(1) as f64 / grid as f64;
    let hi = a + (b - a) * (best_i + 1).min(grid) as f64 / grid as f64;
    golden_max(f, lo, hi, tol)
}

fn golden_max<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Least-squares slope and intercept of `y` against `x`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::Domain(format!(
            "linear fit needs at least two paired samples, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    let n = x.len() as f64;
    let sx: f64 = x.iter().sum();
    let sy: f64 = y.iter().sum();
    let sxx: f64 = x.iter().map(|v| v * v).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-300 {
        return Err(Error::Numeric("degenerate abscissae in linear fit".into()));
    }
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    Ok((slope, intercept))
}

/// Monotone piecewise-cubic interpolant (Fritsch–Carlson slopes). Built once,
/// evaluated many times; does not overshoot the data.
#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    x: Vec<f64>,
    y: Vec<f64>,
    d: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() || x.len() < 2 {
            return Err(Error::Domain("interpolant needs at least two nodes".into()));
        }
        if x.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Domain("interpolation nodes must be strictly increasing".into()));
        }
        let n = x.len();
        let mut slopes = vec![0.0; n - 1];
        for i in 0..n - 1 {
            slopes[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
        }
        let mut d = vec![0.0; n];
        d[0] = slopes[0];
        d[n - 1] = slopes[n - 2];
        for i in 1..n - 1 {
            if slopes[i - 1] * slopes[i] <= 0.0 {
                d[i] = 0.0;
            } else {
                let w1 = 2.0 * (x[i + 1] - x[i]) + (x[i] - x[i - 1]);
                let w2 = (x[i + 1] - x[i]) + 2.0 * (x[i] - x[i - 1]);
                d[i] = (w1 + w2) / (w1 / slopes[i - 1] + w2 / slopes[i]);
            }
        }
        // Clamp endpoint slopes so the first and last pieces stay monotone.
        for (i, s) in [(0usize, 0usize), (n - 1, n - 2)] {
            if d[i] * slopes[s] <= 0.0 {
                d[i] = 0.0;
            } else if d[i].abs() > 3.0 * slopes[s].abs() {
                d[i] = 3.0 * slopes[s];
            }
        }
        Ok(Self { x, y, d })
    }

    /// Evaluate at `t`; clamps outside the node range.
    pub fn eval(&self, t: f64) -> f64 {
        let n = self.x.len();
        if t <= self.x[0] {
            return self.y[0];
        }
        if t >= self.x[n - 1] {
            return self.y[n - 1];
        }
        let i = match self.x.partition_point(|&v| v <= t) {
            0 => 0,
            k => k - 1,
        };
        let h = self.x[i + 1] - self.x[i];
        let s = (t - self.x[i]) / h;
        let (y0, y1) = (self.y[i], self.y[i + 1]);
        let (d0, d1) = (self.d[i], self.d[i + 1]);
        let s2 = s * s;
        let s3 = s2 * s;
        y0 * (2.0 * s3 - 3.0 * s2 + 1.0)
            + d0 * h * (s3 - 2.0 * s2 + s)
            + y1 * (-2.0 * s3 + 3.0 * s2)
            + d1 * h * (s3 - s2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_polynomial_is_near_exact() {
        let v = adaptive_simpson(&|u: f64| u * u - u * u * u, 0.0, 1.0, 1e-10).unwrap();
        assert!((v - (1.0 / 3.0 - 1.0 / 4.0)).abs() < 1e-12);
    }

    #[test]
    fn grid_maximize_finds_parabola_peak() {
        let (x, v) = grid_maximize(&|q: f64| 2.0 * q * (1.0 - q), 0.0, 1.0, 1000, 1e-12);
        assert!((x - 0.5).abs() < 1e-6);
        assert!((v - 0.5).abs() < 1e-12);
    }

    #[test]
    fn linear_fit_recovers_line() {
        let x: Vec<f64> = (0..20).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| 3.0 * v - 7.0).collect();
        let (s, b) = linear_fit(&x, &y).unwrap();
        assert!((s - 3.0).abs() < 1e-12 && (b + 7.0).abs() < 1e-10);
    }

    #[test]
    fn monotone_cubic_does_not_overshoot() {
        let x = vec![0.0, 1.0, 2.0, 3.0];
        let y = vec![0.0, 0.0, 1.0, 1.0];
        let c = MonotoneCubic::new(x, y).unwrap();
        for i in 0..=300 {
            let t = 3.0 * i as f64 / 300.0;
            let v = c.eval(t);
            assert!((-1e-12..=1.0 + 1e-12).contains(&v), "overshoot at {t}: {v}");
        }
    }
}

