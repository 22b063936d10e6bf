//! Explicit finite-difference solver for `u_t = Δu^m + h(u)` in 1D Cartesian
//! geometry and in radial symmetry.
//!
//! The scheme is the conservative form of the degenerate diffusion: advance
//! `u` (not the pressure) with the standard three-point stencil applied to
//! `u^m`, plus the pointwise reaction. Explicit time stepping keeps the
//! update monotone under the step bound of [`cfl_dt`], which gives discrete
//! comparison, positivity up to roundoff clipping, and exact reproducibility.
//! Compactly supported data keep compact support and the support edges are
//! tracked as free boundaries.

use crate::reaction::{powf, ReactionSpec};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Geometry {
    Cartesian1d,
    /// Radially symmetric in `dim` space dimensions; the grid covers
    /// `r ∈ [0, x_max]` with the symmetry condition at `r = 0`.
    Radial { dim: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    NeumannZero,
    DirichletZero,
}

/// What to do when a free boundary reaches the edge of the domain: abort the
/// run (default: results near a wall are not the free-space solution) or let
/// the support attach to the wall (used when only the opposite front is
/// analyzed).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContactPolicy {
    Abort,
    Allow,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub dx: f64,
    pub geometry: Geometry,
    pub bc_left: Boundary,
    pub bc_right: Boundary,
}

impl GridSpec {
    pub fn cartesian(x_min: f64, x_max: f64, dx: f64) -> Result<Self> {
        Self::new(x_min, x_max, dx, Geometry::Cartesian1d)
    }

    pub fn radial(x_max: f64, dx: f64, dim: u32) -> Result<Self> {
        Self::new(0.0, x_max, dx, Geometry::Radial { dim })
    }

    pub fn new(x_min: f64, x_max: f64, dx: f64, geometry: Geometry) -> Result<Self> {
        if !(dx > 0.0) || !dx.is_finite() {
            return Err(Error::Domain(format!("grid spacing must be positive, got {dx}")));
        }
        let span = x_max - x_min;
        let n = span / dx;
        if !(n.round() >= 16.0) || (n - n.round()).abs() > 1e-9 * n.round().max(1.0) {
            return Err(Error::Domain(format!(
                "(x_max - x_min)/dx must be an integer of at least 16, got {n}"
            )));
        }
        if let Geometry::Radial { dim } = geometry {
            if x_min != 0.0 {
                return Err(Error::Domain("radial grids start at r = 0".into()));
            }
            if dim == 0 {
                return Err(Error::Domain("radial dimension must be at least 1".into()));
            }
        }
        Ok(Self {
            x_min,
            x_max,
            dx,
            geometry,
            bc_left: Boundary::NeumannZero,
            bc_right: Boundary::NeumannZero,
        })
    }

    /// Number of nodes (cells + 1).
    pub fn len(&self) -> usize {
        ((self.x_max - self.x_min) / self.dx).round() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx
    }

    fn diffusion_factor(&self) -> f64 {
        match self.geometry {
            Geometry::Cartesian1d => 1.0,
            Geometry::Radial { dim } => dim as f64,
        }
    }
}

/// Grid state at one time. `clipped_mass` accumulates the (tiny) negative
/// roundoff mass removed by positivity clipping since the initial time.
#[derive(Debug, Clone)]
pub struct Field {
    pub grid: GridSpec,
    pub t: f64,
    pub u: Vec<f64>,
    pub clipped_mass: f64,
}

impl Field {
    pub fn new(grid: GridSpec, t: f64, u: Vec<f64>) -> Result<Self> {
        if u.len() != grid.len() {
            return Err(Error::Domain(format!(
                "field has {} values for a grid of {} nodes",
                u.len(),
                grid.len()
            )));
        }
        if u.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::Domain("field values must be finite and nonnegative".into()));
        }
        Ok(Self { grid, t, u, clipped_mass: 0.0 })
    }

    pub fn sup(&self) -> f64 {
        self.u.iter().cloned().fold(0.0, f64::max)
    }

    /// Discrete mass: trapezoid of `u` (Cartesian) or of `u r^{N-1}`
    /// (radial).
    pub fn mass(&self) -> f64 {
        let n = self.u.len();
        let weight = |i: usize| -> f64 {
            let end = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
            match self.grid.geometry {
                Geometry::Cartesian1d => end,
                Geometry::Radial { dim } => end * powf(self.grid.x(i), dim as f64 - 1.0),
            }
        };
        self.u
            .iter()
            .enumerate()
            .map(|(i, v)| v * weight(i) * self.grid.dx)
            .sum()
    }
}

/// Free-boundary pair `(ζ₋, ζ₊)`; `None` when the support is empty at the
/// threshold. The edges are refined by interpolating `u` against the
/// threshold between the bracketing nodes.
pub fn free_boundaries(field: &Field, u_tol: f64) -> Option<(f64, f64)> {
    let u = &field.u;
    let first = u.iter().position(|&v| v >= u_tol)?;
    let last = u.iter().rposition(|&v| v >= u_tol)?;
    let g = &field.grid;
    let zeta_plus = if last + 1 < u.len() {
        g.x(last) + (u[last] - u_tol) / (u[last] - u[last + 1]) * g.dx
    } else {
        g.x(last)
    };
    let zeta_minus = if first > 0 {
        g.x(first) - (u[first] - u_tol) / (u[first] - u[first - 1]) * g.dx
    } else {
        g.x(first)
    };
    Some((zeta_minus, zeta_plus))
}

/// Stability-limited time step:
/// `dt = safety · min(dx²/(2 G m (max u)^{m-1}), 1/(1 + max|h'|))` with
/// `G = 1` (Cartesian) or `N` (radial) and the slope bound taken over
/// `[0, max u]`. Strictly positive.
pub fn cfl_dt(field: &Field, spec: Option<&ReactionSpec>, m: f64, safety: f64) -> f64 {
    let max_u = field.sup();
    let g = field.grid.diffusion_factor();
    let diff_bound = if max_u > 0.0 {
        field.grid.dx * field.grid.dx / (2.0 * g * m * powf(max_u, m - 1.0))
    } else {
        f64::INFINITY
    };
    let slope = spec.map_or(0.0, |s| max_abs_slope(s, max_u));
    safety * diff_bound.min(1.0 / (1.0 + slope))
}

fn max_abs_slope(spec: &ReactionSpec, hi: f64) -> f64 {
    if hi <= 0.0 {
        return spec.eval_prime(0.0).map(f64::abs).unwrap_or(0.0);
    }
    let n = 512;
    (0..=n)
        .map(|i| hi * i as f64 / n as f64)
        .map(|u| spec.eval_prime(u).map(f64::abs).unwrap_or(0.0))
        .fold(0.0, f64::max)
}

/// One explicit step. `spec = None` disables the reaction (pure degenerate
/// diffusion, used for scheme validation).
pub fn step(field: &Field, spec: Option<&ReactionSpec>, m: f64, dt: f64) -> Result<Field> {
    let bound = cfl_dt(field, spec, m, 1.0);
    if dt > bound * (1.0 + 1e-12) {
        return Err(Error::Stability { dt, bound });
    }
    let mut next = field.clone();
    let mut w = vec![0.0; field.u.len()];
    advance_in_place(&mut next, &mut w, spec, m, dt)?;
    Ok(next)
}

/// The shared update kernel: fills `w = u^m`, applies the stencil and the
/// reaction in place, clips negative roundoff, advances the clock. Returns
/// the new sup so the driver can notice growth that erodes the CFL margin.
fn advance_in_place(
    field: &mut Field,
    w: &mut [f64],
    spec: Option<&ReactionSpec>,
    m: f64,
    dt: f64,
) -> Result<f64> {
    let grid = field.grid.clone();
    let u = &mut field.u;
    let n = u.len();
    let dx2 = grid.dx * grid.dx;
    for (wi, ui) in w.iter_mut().zip(u.iter()) {
        *wi = powf(*ui, m);
    }
    let lap_left = match grid.bc_left {
        Boundary::NeumannZero => match grid.geometry {
            Geometry::Cartesian1d => 2.0 * (w[1] - w[0]) / dx2,
            // symmetry cell at r = 0: Δw|_0 = 2N (w_1 - w_0)/dr²
            Geometry::Radial { dim } => 2.0 * dim as f64 * (w[1] - w[0]) / dx2,
        },
        Boundary::DirichletZero => (w[1] - 2.0 * w[0]) / dx2,
    };
    let lap_right = match grid.bc_right {
        Boundary::NeumannZero => 2.0 * (w[n - 2] - w[n - 1]) / dx2,
        Boundary::DirichletZero => (w[n - 2] - 2.0 * w[n - 1]) / dx2,
    };
    match grid.geometry {
        Geometry::Cartesian1d => match spec {
            Some(s) => {
                for i in 1..n - 1 {
                    let lap = (w[i + 1] - 2.0 * w[i] + w[i - 1]) / dx2;
                    u[i] += dt * (lap + s.eval_unchecked(u[i]));
                }
            }
            None => {
                for i in 1..n - 1 {
                    u[i] += dt * (w[i + 1] - 2.0 * w[i] + w[i - 1]) / dx2;
                }
            }
        },
        Geometry::Radial { dim } => {
            let nm1 = (dim - 1) as f64;
            for i in 1..n - 1 {
                let r = grid.x(i);
                let lap = (w[i + 1] - 2.0 * w[i] + w[i - 1]) / dx2
                    + nm1 / r * (w[i + 1] - w[i - 1]) / (2.0 * grid.dx);
                let h = spec.map_or(0.0, |s| s.eval_unchecked(u[i]));
                u[i] += dt * (lap + h);
            }
        }
    }
    let h0 = spec.map_or(0.0, |s| s.eval_unchecked(u[0]));
    u[0] += dt * (lap_left + h0);
    let hn = spec.map_or(0.0, |s| s.eval_unchecked(u[n - 1]));
    u[n - 1] += dt * (lap_right + hn);
    let mut clipped = 0.0;
    let mut sup = 0.0f64;
    for (i, v) in u.iter_mut().enumerate() {
        if !v.is_finite() {
            return Err(Error::Numeric(format!(
                "non-finite value at cell {i} (x = {}) at t = {}",
                grid.x(i),
                field.t
            )));
        }
        if *v < 0.0 {
            clipped -= *v;
            *v = 0.0;
        }
        sup = sup.max(*v);
    }
    field.clipped_mass += clipped * grid.dx;
    field.t += dt;
    Ok(sup)
}

/// One row of the free-boundary trace.
#[derive(Debug, Clone, Copy)]
pub struct FrontSample {
    pub t: f64,
    /// `None` when the support is empty at the trace threshold.
    pub zeta: Option<(f64, f64)>,
    pub sup_u: f64,
    pub mass: f64,
}

/// Time series of free boundaries and bulk diagnostics, sampled at snapshot
/// times (strictly increasing).
#[derive(Debug, Clone, Default)]
pub struct FrontTrace {
    pub samples: Vec<FrontSample>,
}

impl FrontTrace {
    /// Rows `(t, ζ₋, ζ₊, sup u, mass)`; empty support becomes NaN columns.
    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.samples
            .iter()
            .map(|s| {
                let (zm, zp) = s.zeta.unwrap_or((f64::NAN, f64::NAN));
                vec![s.t, zm, zp, s.sup_u, s.mass]
            })
            .collect()
    }
}

/// Initial data families.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialData {
    Const(f64),
    Box { height: f64, x0: f64, x1: f64 },
    /// `δ (1 - r²)³` on `r ≤ 1`, zero beyond.
    Bump { delta: f64 },
    /// Flat plateau of height `η` on `|x| ≤ ρ` joined to zero by the
    /// phase-plane leg at speed `c` (default `c*/2`).
    Plateau { eta: f64, rho: f64, c: Option<f64> },
    /// `height` for `x ≤ x0`, zero beyond (front-like data).
    Step { height: f64, x0: f64 },
    /// Tabulated `(x, u)` samples, linearly interpolated, zero outside.
    Samples { x: Vec<f64>, u: Vec<f64> },
}

/// Parse `cartesian` or `radial:<N>`.
pub fn parse_geometry(s: &str) -> Result<Geometry> {
    if s == "cartesian" {
        return Ok(Geometry::Cartesian1d);
    }
    if let Some(n) = s.strip_prefix("radial:") {
        let dim: u32 = n
            .parse()
            .map_err(|_| Error::Domain(format!("malformed radial dimension `{n}`")))?;
        if dim == 0 {
            return Err(Error::Domain("radial dimension must be at least 1".into()));
        }
        return Ok(Geometry::Radial { dim });
    }
    Err(Error::Domain(format!("unknown geometry `{s}` (cartesian or radial:<N>)")))
}

impl InitialData {
    /// Parse the interface grammar: `const:<v>`, `box:<h>,<x0>,<x1>`,
    /// `bump:<delta>`, `plateau:<eta>,<rho>[,<c>]`, `step:<h>,<x0>`,
    /// `file:<path.csv>` (two columns with header `x,u`).
    pub fn parse(s: &str) -> Result<Self> {
        let nums = |rest: &str, want: usize, name: &str| -> Result<Vec<f64>> {
            let vals: std::result::Result<Vec<f64>, _> =
                rest.split(',').map(|t| t.trim().parse::<f64>()).collect();
            match vals {
                Ok(v) if v.len() == want => Ok(v),
                Ok(v) => Err(Error::Domain(format!(
                    "{name} takes {want} numbers, got {}",
                    v.len()
                ))),
                Err(_) => Err(Error::Domain(format!("malformed number in `{rest}` for {name}"))),
            }
        };
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        match kind {
            "const" => Ok(InitialData::Const(nums(rest, 1, "const")?[0])),
            "box" => {
                let v = nums(rest, 3, "box")?;
                Ok(InitialData::Box { height: v[0], x0: v[1], x1: v[2] })
            }
            "bump" => Ok(InitialData::Bump { delta: nums(rest, 1, "bump")?[0] }),
            "plateau" => match rest.split(',').count() {
                2 => {
                    let v = nums(rest, 2, "plateau")?;
                    Ok(InitialData::Plateau { eta: v[0], rho: v[1], c: None })
                }
                3 => {
                    let v = nums(rest, 3, "plateau")?;
                    Ok(InitialData::Plateau { eta: v[0], rho: v[1], c: Some(v[2]) })
                }
                n => Err(Error::Domain(format!("plateau takes 2 or 3 numbers, got {n}"))),
            },
            "step" => {
                let v = nums(rest, 2, "step")?;
                Ok(InitialData::Step { height: v[0], x0: v[1] })
            }
            "file" => {
                let path = std::path::Path::new(rest.trim());
                let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
                    path: path.to_owned(),
                    source,
                })?;
                let mut lines = text.lines();
                match lines.next() {
                    Some(h) if h.trim() == "x,u" => {}
                    other => {
                        return Err(Error::Domain(format!(
                            "initial-data CSV must start with header `x,u`, got {other:?}"
                        )))
                    }
                }
                let mut xs = Vec::new();
                let mut us = Vec::new();
                for line in lines {
                    let line = line.trim();
                    if line.is_empty() || line.starts_with('#') {
                        continue;
                    }
                    let (x, u) = line.split_once(',').ok_or_else(|| {
                        Error::Domain(format!("bad row `{line}` in {}", path.display()))
                    })?;
                    let parse = |tok: &str| -> Result<f64> {
                        tok.trim()
                            .parse()
                            .map_err(|_| Error::Domain(format!("malformed number `{tok}`")))
                    };
                    xs.push(parse(x)?);
                    us.push(parse(u)?);
                }
                Ok(InitialData::Samples { x: xs, u: us })
            }
            other => Err(Error::Domain(format!(
                "unknown initial data `{other}` (const, box, bump, plateau, step, file)"
            ))),
        }
    }
}

/// Materialize initial data on a grid. The reaction enters through the
/// plateau family (its joining leg comes from the phase plane) and through
/// the bump validity warning for the Fujita-critical reaction.
pub fn build_initial(
    grid: &GridSpec,
    data: &InitialData,
    spec: &ReactionSpec,
    m: f64,
) -> Result<Vec<f64>> {
    let n = grid.len();
    let abs_x = |i: usize| match grid.geometry {
        Geometry::Cartesian1d => grid.x(i).abs(),
        Geometry::Radial { .. } => grid.x(i),
    };
    match data {
        InitialData::Const(v) => {
            if !(*v >= 0.0) {
                return Err(Error::Domain(format!("constant data must be nonnegative, got {v}")));
            }
            Ok(vec![*v; n])
        }
        InitialData::Box { height, x0, x1 } => {
            if !(*height >= 0.0) || x1 <= x0 {
                return Err(Error::Domain("box data needs height >= 0 and x0 < x1".into()));
            }
            Ok((0..n)
                .map(|i| {
                    let x = grid.x(i);
                    if x >= *x0 - 1e-12 && x <= *x1 + 1e-12 {
                        *height
                    } else {
                        0.0
                    }
                })
                .collect())
        }
        InitialData::Bump { delta } => {
            if !(*delta > 0.0) {
                return Err(Error::Domain(format!("bump height must be positive, got {delta}")));
            }
            if let crate::reaction::ReactionKind::FujitaCritical { k, b, .. } = spec.kind() {
                let dim = match grid.geometry {
                    Geometry::Radial { dim } => dim as f64,
                    Geometry::Cartesian1d => 1.0,
                };
                let cap = b.min((3.0 * dim / k).powf(dim / 2.0));
                if *delta >= cap {
                    log::warn!(
                        "bump height {delta} is outside (0, {cap:.6}); the small-data \
                         comparison argument does not cover it"
                    );
                }
            }
            Ok((0..n)
                .map(|i| {
                    let r = abs_x(i);
                    if r <= 1.0 {
                        delta * (1.0 - r * r).powi(3)
                    } else {
                        0.0
                    }
                })
                .collect())
        }
        InitialData::Plateau { eta, rho, c } => {
            let speed = crate::phaseplane::critical_speed(spec, m, 1e-5)?;
            let c = c.unwrap_or(0.5 * speed.c_star);
            let dim = match grid.geometry {
                Geometry::Radial { dim } => dim as f64,
                Geometry::Cartesian1d => 1.0,
            };
            if !(*rho > (dim - 1.0) / c) {
                return Err(Error::Parameter(format!(
                    "plateau radius rho={rho} must exceed (N-1)/c = {}",
                    (dim - 1.0) / c
                )));
            }
            let opts = crate::phaseplane::ShootOpts::default();
            let (traj, _nu, b) = crate::phaseplane::subsolution_leg(spec, m, c, *eta, &opts)?;
            let (mut xis, mut qs): (Vec<f64>, Vec<f64>) = traj
                .points
                .iter()
                .filter(|pt| pt.q > 0.0)
                .map(|pt| (pt.xi, pt.q))
                .unzip();
            xis.push(b.max(xis.last().copied().unwrap_or(0.0) + 1e-12));
            qs.push(0.0);
            let leg = crate::numerics::MonotoneCubic::new(xis, qs)?;
            Ok((0..n)
                .map(|i| {
                    let r = abs_x(i);
                    if r <= *rho {
                        *eta
                    } else if r <= rho + b {
                        leg.eval(r - rho).clamp(0.0, *eta)
                    } else {
                        0.0
                    }
                })
                .collect())
        }
        InitialData::Step { height, x0 } => {
            if !(*height > 0.0) {
                return Err(Error::Domain(format!("step height must be positive, got {height}")));
            }
            Ok((0..n)
                .map(|i| if grid.x(i) <= *x0 + 1e-12 { *height } else { 0.0 })
                .collect())
        }
        InitialData::Samples { x, u } => {
            if x.len() != u.len() || x.len() < 2 || x.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::Domain(
                    "sample data needs strictly increasing abscissae".into(),
                ));
            }
            if u.iter().any(|v| *v < 0.0 || !v.is_finite()) {
                return Err(Error::Domain("sample data must be nonnegative".into()));
            }
            Ok((0..n)
                .map(|i| {
                    let xi = grid.x(i);
                    if xi < x[0] || xi > *x.last().unwrap() {
                        0.0
                    } else {
                        let k = match x.partition_point(|&v| v <= xi) {
                            0 => 0,
                            k if k >= x.len() => x.len() - 2,
                            k => k - 1,
                        };
                        let t = (xi - x[k]) / (x[k + 1] - x[k]);
                        u[k] + t * (u[k + 1] - u[k])
                    }
                })
                .collect())
        }
    }
}

/// A complete simulation request.
#[derive(Debug, Clone)]
pub struct Problem {
    pub grid: GridSpec,
    pub initial: InitialData,
    /// `None` disables the reaction (pure degenerate diffusion).
    pub reaction: Option<ReactionSpec>,
    pub m: f64,
    pub t_max: f64,
    pub snapshot_every: f64,
    pub safety: f64,
    pub contact_left: ContactPolicy,
    pub contact_right: ContactPolicy,
    /// Support threshold for the free-boundary extraction.
    pub u_tol: f64,
}

impl Problem {
    pub fn new(grid: GridSpec, initial: InitialData, reaction: ReactionSpec, m: f64) -> Self {
        let contact_left = match grid.geometry {
            // the origin of a radial grid is a symmetry axis, not a wall
            Geometry::Radial { .. } => ContactPolicy::Allow,
            Geometry::Cartesian1d => ContactPolicy::Abort,
        };
        Self {
            grid,
            initial,
            reaction: Some(reaction),
            m,
            t_max: 1.0,
            snapshot_every: 1.0,
            safety: 0.5,
            contact_left,
            contact_right: ContactPolicy::Abort,
            u_tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub snapshots: Vec<Field>,
    pub trace: FrontTrace,
}

/// Run the explicit solver with snapshots every `snapshot_every` time units.
/// The step is re-evaluated from the CFL bound at each snapshot interval, and
/// the whole evolution is a pure function of the problem, so repeated runs
/// are bitwise identical. A front entering the five-cell collar of a wall
/// aborts unless that side's policy allows contact.
pub fn run(problem: &Problem) -> Result<RunOutput> {
    if !(problem.m > 1.0) {
        return Err(Error::Domain(format!(
            "diffusion exponent must exceed 1, got {}",
            problem.m
        )));
    }
    if !(problem.t_max >= 0.0) || !(problem.snapshot_every > 0.0) {
        return Err(Error::Domain("run needs t_max >= 0 and snapshot_every > 0".into()));
    }
    let spec_for_init = problem
        .reaction
        .clone()
        .unwrap_or_else(crate::reaction::ReactionSpec::logistic);
    let u0 = build_initial(&problem.grid, &problem.initial, &spec_for_init, problem.m)?;
    let mut field = Field::new(problem.grid.clone(), 0.0, u0)?;
    let mut w = vec![0.0; field.u.len()];

    let mut snapshots = Vec::new();
    let mut trace = FrontTrace::default();
    let sample = |f: &Field| FrontSample {
        t: f.t,
        zeta: free_boundaries(f, problem.u_tol),
        sup_u: f.sup(),
        mass: f.mass(),
    };
    snapshots.push(field.clone());
    trace.samples.push(sample(&field));
    if problem.t_max == 0.0 {
        return Ok(RunOutput { snapshots, trace });
    }

    // Collision is only meaningful for fronts that start away from a wall;
    // data whose support already touches it (constant or step data) keep
    // that side as a plain boundary condition.
    let collar = 5.0 * problem.grid.dx;
    let (watch_left, watch_right) = match trace.samples[0].zeta {
        Some((zm0, zp0)) => (
            problem.contact_left == ContactPolicy::Abort && zm0 > problem.grid.x_min + collar,
            problem.contact_right == ContactPolicy::Abort && zp0 < problem.grid.x_max - collar,
        ),
        None => (false, false),
    };

    let n_snaps = (problem.t_max / problem.snapshot_every).ceil() as usize;
    for k in 1..=n_snaps {
        let t_target = (k as f64 * problem.snapshot_every).min(problem.t_max);
        // Fixed dt between re-evaluation events; a fresh event occurs at
        // every snapshot boundary and whenever the sup grows past 5% of its
        // value at the last evaluation (growth erodes the CFL margin, e.g.
        // during the take-off of small data).
        loop {
            let interval = t_target - field.t;
            if interval <= 1e-12 * t_target.abs().max(1.0) {
                break;
            }
            let dt_bound = cfl_dt(&field, problem.reaction.as_ref(), problem.m, problem.safety);
            let sup_eval = field.sup().max(1e-300);
            let substeps = (interval / dt_bound).ceil().max(1.0) as usize;
            let dt = interval / substeps as f64;
            let mut regrew = false;
            for _ in 0..substeps {
                let sup =
                    advance_in_place(&mut field, &mut w, problem.reaction.as_ref(), problem.m, dt)?;
                if sup > 1.05 * sup_eval {
                    regrew = true;
                    break;
                }
            }
            if !regrew {
                break;
            }
        }
        field.t = t_target; // keep the clock free of accumulation drift
        snapshots.push(field.clone());
        trace.samples.push(sample(&field));

        if let Some((zm, zp)) = trace.samples.last().and_then(|s| s.zeta) {
            if watch_right && zp >= problem.grid.x_max - collar {
                return Err(Error::BoundaryCollision { side: "right", t: field.t });
            }
            if watch_left && zm <= problem.grid.x_min + collar {
                return Err(Error::BoundaryCollision { side: "left", t: field.t });
            }
        }
    }
    Ok(RunOutput { snapshots, trace })
}

/// Sup of `|∂_x p|` with `p = (m/(m-1)) u^{m-1}`, central differences over
/// the interior of the support. 1D Cartesian fields only.
pub fn pressure_gradient_sup(field: &Field, m: f64) -> Result<f64> {
    if field.grid.geometry != Geometry::Cartesian1d {
        return Err(Error::Domain("pressure gradient diagnostic is 1D Cartesian only".into()));
    }
    let coef = m / (m - 1.0);
    let p: Vec<f64> = field.u.iter().map(|&u| coef * powf(u, m - 1.0)).collect();
    let mut sup = 0.0f64;
    for i in 1..p.len() - 1 {
        if field.u[i - 1] > 0.0 && field.u[i] > 0.0 && field.u[i + 1] > 0.0 {
            sup = sup.max(((p[i + 1] - p[i - 1]) / (2.0 * field.grid.dx)).abs());
        }
    }
    Ok(sup)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reaction::ReactionSpec;

    /// Source-free self-similar solution for m = 2 with unit mass:
    /// `u(x, t) = t^{-1/3} (C - x²/(12 t^{2/3}))₊`, `C = 3^{1/3}/4`.
    fn barenblatt(x: f64, t: f64, c: f64) -> f64 {
        (c - x * x / (12.0 * t.powf(2.0 / 3.0))).max(0.0) / t.cbrt()
    }

    #[test]
    fn grid_rejects_bad_shapes() {
        assert!(GridSpec::cartesian(0.0, 1.0, 0.3).is_err()); // non-integer count
        assert!(GridSpec::cartesian(0.0, 1.0, 0.1).is_err()); // only 10 cells
        assert!(GridSpec::new(-1.0, 1.0, 0.05, Geometry::Radial { dim: 1 }).is_err());
        assert!(GridSpec::cartesian(0.0, 2.0, 0.05).is_ok());
    }

    #[test]
    fn cfl_example_values() {
        let grid = GridSpec::cartesian(-1.0, 1.0, 0.05).unwrap();
        let n = grid.len();
        let field = Field::new(grid, 0.0, vec![1.0; n]).unwrap();
        let spec = ReactionSpec::logistic();
        let dt = cfl_dt(&field, Some(&spec), 2.0, 0.5);
        assert!((dt - 3.125e-4).abs() < 1e-18, "dt = {dt}");
        // zero field: reaction bound dominates
        let field0 = Field::new(field.grid.clone(), 0.0, vec![0.0; n]).unwrap();
        let dt0 = cfl_dt(&field0, Some(&spec), 2.0, 0.5);
        assert!((dt0 - 0.25).abs() < 1e-15, "dt0 = {dt0}");
        // halving dx quarters the diffusion-limited dt
        let grid2 = GridSpec::cartesian(-1.0, 1.0, 0.025).unwrap();
        let field2 = Field::new(grid2.clone(), 0.0, vec![1.0; grid2.len()]).unwrap();
        let dt2 = cfl_dt(&field2, Some(&spec), 2.0, 0.5);
        assert!((dt2 - dt / 4.0).abs() < 1e-18);
    }

    #[test]
    fn step_rejects_unstable_dt() {
        let grid = GridSpec::cartesian(-1.0, 1.0, 0.05).unwrap();
        let n = grid.len();
        let field = Field::new(grid, 0.0, vec![1.0; n]).unwrap();
        let spec = ReactionSpec::logistic();
        let err = step(&field, Some(&spec), 2.0, 1e-2);
        assert!(matches!(err, Err(Error::Stability { .. })));
    }

    #[test]
    fn barenblatt_advance_matches_self_similar_form() {
        let c = 3.0f64.cbrt() / 4.0;
        let grid = GridSpec::cartesian(-6.0, 6.0, 0.02).unwrap();
        let u0: Vec<f64> = (0..grid.len()).map(|i| barenblatt(grid.x(i), 1.0, c)).collect();
        let mut field = Field::new(grid.clone(), 1.0, u0).unwrap();
        let mut w = vec![0.0; field.u.len()];
        while field.t < 2.0 {
            let dt = cfl_dt(&field, None, 2.0, 0.5).min(2.0 - field.t);
            advance_in_place(&mut field, &mut w, None, 2.0, dt).unwrap();
        }
        let sup_err = (0..grid.len())
            .map(|i| (field.u[i] - barenblatt(grid.x(i), 2.0, c)).abs())
            .fold(0.0f64, f64::max);
        assert!(sup_err <= 5e-3, "sup error {sup_err}");
    }

    #[test]
    fn flat_field_follows_reaction_ode() {
        // logistic: u(t) = u0 e^t / (1 + u0 (e^t - 1))
        let grid = GridSpec::cartesian(-1.0, 1.0, 0.05).unwrap();
        let spec = ReactionSpec::logistic();
        let mut problem = Problem::new(grid, InitialData::Const(0.5), spec, 2.0);
        problem.t_max = 1.0;
        problem.snapshot_every = 0.5;
        let out = run(&problem).unwrap();
        let exact = 0.5 * 1.0f64.exp() / (1.0 + 0.5 * (1.0f64.exp() - 1.0));
        let last = out.snapshots.last().unwrap();
        for v in &last.u {
            assert!((v - exact).abs() <= 1e-4, "{v} vs {exact}");
        }
        // const 0 stays identically 0
        let mut p0 = Problem::new(
            last.grid.clone(),
            InitialData::Const(0.0),
            ReactionSpec::logistic(),
            2.0,
        );
        p0.t_max = 0.5;
        let out0 = run(&p0).unwrap();
        assert!(out0.snapshots.last().unwrap().u.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn box_support_detected_and_zero_field_empty() {
        let grid = GridSpec::cartesian(-5.0, 5.0, 0.05).unwrap();
        let spec = ReactionSpec::logistic();
        let u0 =
            build_initial(&grid, &InitialData::Box { height: 0.5, x0: -1.0, x1: 1.0 }, &spec, 2.0)
                .unwrap();
        let f = Field::new(grid.clone(), 0.0, u0).unwrap();
        let (zm, zp) = free_boundaries(&f, 1e-8).unwrap();
        assert!((zm + 1.0).abs() <= 0.05 + 1e-9 && (zp - 1.0).abs() <= 0.05 + 1e-9);
        let empty = Field::new(grid, 0.0, vec![0.0; f.u.len()]).unwrap();
        assert!(free_boundaries(&empty, 1e-8).is_none());
    }

    #[test]
    fn runs_are_bitwise_deterministic() {
        let grid = GridSpec::cartesian(-10.0, 10.0, 0.1).unwrap();
        let spec = ReactionSpec::logistic();
        let mut problem =
            Problem::new(grid, InitialData::Box { height: 1.0, x0: -2.0, x1: 2.0 }, spec, 2.0);
        problem.t_max = 3.0;
        problem.snapshot_every = 1.0;
        let a = run(&problem).unwrap();
        let b = run(&problem).unwrap();
        for (fa, fb) in a.snapshots.iter().zip(&b.snapshots) {
            assert!(fa.u.iter().zip(&fb.u).all(|(x, y)| x.to_bits() == y.to_bits()));
        }
    }

    #[test]
    fn t_max_zero_returns_initial_only() {
        let grid = GridSpec::cartesian(-5.0, 5.0, 0.1).unwrap();
        let spec = ReactionSpec::logistic();
        let mut problem = Problem::new(grid, InitialData::Const(0.3), spec, 2.0);
        problem.t_max = 0.0;
        let out = run(&problem).unwrap();
        assert_eq!(out.snapshots.len(), 1);
        assert_eq!(out.trace.samples.len(), 1);
    }

    #[test]
    fn discrete_comparison_principle_holds() {
        // ordered data stay ordered under the same settings
        let grid = GridSpec::cartesian(-10.0, 10.0, 0.1).unwrap();
        let spec = ReactionSpec::logistic();
        let mk = |h: f64| {
            let mut p = Problem::new(
                grid.clone(),
                InitialData::Box { height: h, x0: -2.0, x1: 2.0 },
                spec.clone(),
                2.0,
            );
            p.t_max = 4.0;
            p.snapshot_every = 0.5;
            p.contact_left = ContactPolicy::Allow;
            p.contact_right = ContactPolicy::Allow;
            p
        };
        let lo = run(&mk(0.4)).unwrap();
        let hi = run(&mk(0.8)).unwrap();
        for (fl, fh) in lo.snapshots.iter().zip(&hi.snapshots) {
            for (a, b) in fl.u.iter().zip(&fh.u) {
                assert!(a <= &(b + 1e-9), "ordering violated: {a} > {b}");
            }
        }
    }

    #[test]
    fn flat_supersolution_bounds_sup() {
        // sup u(t) <= z(t) + tol where z' = h(z), z(0) = sup u0
        let grid = GridSpec::cartesian(-10.0, 10.0, 0.1).unwrap();
        let spec = ReactionSpec::logistic();
        let mut problem =
            Problem::new(grid, InitialData::Box { height: 0.6, x0: -3.0, x1: 3.0 }, spec, 2.0);
        problem.t_max = 5.0;
        problem.snapshot_every = 0.5;
        problem.contact_left = ContactPolicy::Allow;
        problem.contact_right = ContactPolicy::Allow;
        let out = run(&problem).unwrap();
        for s in &out.trace.samples {
            let z = 0.6 * s.t.exp() / (1.0 + 0.6 * (s.t.exp() - 1.0));
            assert!(s.sup_u <= z + 1e-6, "sup {} above flat bound {z}", s.sup_u);
        }
    }

    #[test]
    fn positivity_after_steps() {
        let grid = GridSpec::cartesian(-6.0, 6.0, 0.05).unwrap();
        let spec = ReactionSpec::bistable(0.3).unwrap();
        let mut problem =
            Problem::new(grid, InitialData::Box { height: 0.9, x0: -1.0, x1: 1.0 }, spec, 2.0);
        problem.t_max = 2.0;
        problem.snapshot_every = 0.25;
        let out = run(&problem).unwrap();
        for f in &out.snapshots {
            assert!(f.u.iter().all(|&v| v >= 0.0));
            assert!(f.clipped_mass <= 1e-10, "clipped {}", f.clipped_mass);
        }
    }

    #[test]
    fn boundary_collision_aborts_unless_allowed() {
        let grid = GridSpec::cartesian(-5.0, 5.0, 0.1).unwrap();
        let spec = ReactionSpec::logistic();
        let mut problem =
            Problem::new(grid, InitialData::Box { height: 1.0, x0: -1.0, x1: 1.0 }, spec, 2.0);
        problem.t_max = 12.0;
        problem.snapshot_every = 0.5;
        match run(&problem) {
            Err(Error::BoundaryCollision { .. }) => {}
            other => panic!("expected collision abort, got {:?}", other.map(|_| ())),
        }
        problem.contact_left = ContactPolicy::Allow;
        problem.contact_right = ContactPolicy::Allow;
        assert!(run(&problem).is_ok());
    }

    #[test]
    fn pressure_gradient_examples() {
        let grid = GridSpec::cartesian(-6.0, 6.0, 0.02).unwrap();
        let n = grid.len();
        let flat = Field::new(grid.clone(), 0.0, vec![0.5; n]).unwrap();
        assert_eq!(pressure_gradient_sup(&flat, 2.0).unwrap(), 0.0);
        // self-similar field at t = 1: the pressure 2u is parabolic with
        // slope magnitude |x|/(3t) inside the support
        let c = 3.0f64.cbrt() / 4.0;
        let u: Vec<f64> = (0..n).map(|i| barenblatt(grid.x(i), 1.0, c)).collect();
        let f = Field::new(grid, 0.0, u).unwrap();
        let sup = pressure_gradient_sup(&f, 2.0).unwrap();
        let expect = (12.0 * c).sqrt() / 3.0;
        assert!((sup - expect).abs() <= 0.02 * expect, "{sup} vs {expect}");
    }

    #[test]
    fn finite_propagation_bound() {
        // the support edge advances no faster than (c* + 0.1) t + 1
        for (spec, c_star) in [
            (ReactionSpec::logistic(), 1.0),
            (ReactionSpec::bistable(0.3).unwrap(), 0.39705),
        ] {
            let grid = GridSpec::cartesian(-12.0, 12.0, 0.05).unwrap();
            let mut problem =
                Problem::new(grid, InitialData::Box { height: 1.0, x0: -2.0, x1: 2.0 }, spec, 2.0);
            problem.t_max = 6.0;
            problem.snapshot_every = 0.5;
            let out = run(&problem).unwrap();
            let z0 = out.trace.samples[0].zeta.unwrap().1;
            for s in &out.trace.samples {
                let zp = s.zeta.unwrap().1;
                assert!(
                    zp - z0 <= (c_star + 0.1) * s.t + 1.0,
                    "front outran the bound at t={}: {} vs {}",
                    s.t,
                    zp - z0,
                    (c_star + 0.1) * s.t + 1.0
                );
            }
        }
    }

    #[test]
    fn radial_bump_spreads_mass_symmetrically() {
        // radial N = 3 with reaction off: total r²-moment is conserved up to
        // the clipping and boundary fluxes
        let grid = GridSpec::radial(4.0, 0.02, 3).unwrap();
        let spec = ReactionSpec::logistic();
        let u0 = build_initial(&grid, &InitialData::Bump { delta: 0.5 }, &spec, 2.0).unwrap();
        let mut field = Field::new(grid, 0.0, u0).unwrap();
        let m0 = field.mass();
        let mut w = vec![0.0; field.u.len()];
        for _ in 0..2000 {
            let dt = cfl_dt(&field, None, 2.0, 0.5);
            advance_in_place(&mut field, &mut w, None, 2.0, dt).unwrap();
        }
        let m1 = field.mass();
        assert!((m1 - m0).abs() <= 1e-6 * m0.max(1.0), "mass drifted {m0} -> {m1}");
        assert!(field.u.iter().all(|&v| v >= 0.0));
    }
}
