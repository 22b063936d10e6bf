//! Python bindings: the critical-speed computation, the wave profile, the
//! PDE solver with free-boundary tracking, and the reaction classification.
//!
//! The module is built as `_frontlab`; see `python/smoke_test.py` at the
//! repository root for a build-and-use walkthrough.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use frontlab::pde::{self, InitialData, Problem};
use frontlab::phaseplane;
use frontlab::reaction::ReactionSpec;
use frontlab::Error;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Domain(_) | Error::Range(_) | Error::Parameter(_) | Error::Precondition(_) => {
            PyValueError::new_err(e.to_string())
        }
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

fn parse_reaction(s: &str, m: f64, dim: u32) -> PyResult<ReactionSpec> {
    ReactionSpec::parse(s, m, dim).map_err(to_py)
}

/// Derived constants of a reaction for given `m` and dimension.
#[pyclass(name = "Classification", frozen)]
struct Classification {
    #[pyo3(get)]
    a: f64,
    #[pyo3(get)]
    hosono: f64,
    #[pyo3(get)]
    sigma: f64,
    #[pyo3(get)]
    fujita_exponent: f64,
    #[pyo3(get)]
    hair_trigger: bool,
    #[pyo3(get)]
    hair_trigger_heuristic: bool,
    #[pyo3(get)]
    delta_stable: f64,
    #[pyo3(get)]
    h_prime_at_1: f64,
}

#[pyfunction]
#[pyo3(signature = (reaction, m, dim = 1))]
fn classify(reaction: &str, m: f64, dim: u32) -> PyResult<Classification> {
    let spec = parse_reaction(reaction, m, dim)?;
    let c = spec.classify(m, dim).map_err(to_py)?;
    Ok(Classification {
        a: c.a,
        hosono: c.hosono,
        sigma: c.sigma,
        fujita_exponent: c.fujita_exponent,
        hair_trigger: c.hair_trigger,
        hair_trigger_heuristic: c.hair_trigger_heuristic,
        delta_stable: c.delta_stable,
        h_prime_at_1: c.h_prime_at_1,
    })
}

/// Critical-speed bisection result.
#[pyclass(name = "SpeedResult", frozen)]
struct SpeedResult {
    #[pyo3(get)]
    c_star: f64,
    #[pyo3(get)]
    bracket: (f64, f64),
    #[pyo3(get)]
    iterations: u32,
    #[pyo3(get)]
    sigma_bound: f64,
}

#[pyfunction]
#[pyo3(signature = (reaction, m, tol = 1e-6))]
fn critical_speed(reaction: &str, m: f64, tol: f64) -> PyResult<SpeedResult> {
    let spec = parse_reaction(reaction, m, 1)?;
    let r = phaseplane::critical_speed(&spec, m, tol).map_err(to_py)?;
    Ok(SpeedResult {
        c_star: r.c_star,
        bracket: r.bracket,
        iterations: r.iterations,
        sigma_bound: r.sigma_bound,
    })
}

/// Finite wave profile with the front at `xi = 0`.
#[pyclass(name = "WaveProfile", frozen)]
struct WaveProfile {
    inner: frontlab::WaveProfile,
    #[pyo3(get)]
    c_star: f64,
}

#[pymethods]
impl WaveProfile {
    /// Profile value at `xi` (zero ahead of the front, clamped behind the
    /// stored tail).
    fn eval(&self, xi: f64) -> f64 {
        self.inner.eval(xi)
    }

    /// Profile slope `V'(xi)`.
    fn slope(&self, xi: f64) -> f64 {
        self.inner.slope(xi)
    }

    fn xi_min(&self) -> f64 {
        self.inner.xi_min()
    }

    /// Pressure slope at the front (approaches `-c_star`).
    fn front_pressure_slope(&self) -> f64 {
        self.inner.front_pressure_slope()
    }

    /// Stored nodes as `(xi_list, v_list)`, final row `(0, 0)`.
    fn nodes(&self) -> (Vec<f64>, Vec<f64>) {
        let (xi, v) = self.inner.nodes();
        (xi.to_vec(), v.to_vec())
    }
}

#[pyfunction]
#[pyo3(signature = (reaction, m, tol = 1e-4, eps_profile = 1e-4))]
fn wave_profile(reaction: &str, m: f64, tol: f64, eps_profile: f64) -> PyResult<WaveProfile> {
    let spec = parse_reaction(reaction, m, 1)?;
    let (speed, profile) =
        frontlab::WaveProfile::compute(&spec, m, tol, eps_profile).map_err(to_py)?;
    Ok(WaveProfile { inner: profile, c_star: speed.c_star })
}

/// Result of a PDE run: snapshot times, free boundaries, bulk diagnostics
/// and the final state.
#[pyclass(name = "Simulation", frozen)]
struct Simulation {
    #[pyo3(get)]
    times: Vec<f64>,
    /// `(zeta_minus, zeta_plus)` per snapshot; `None` for empty support.
    #[pyo3(get)]
    fronts: Vec<Option<(f64, f64)>>,
    #[pyo3(get)]
    sup_u: Vec<f64>,
    #[pyo3(get)]
    mass: Vec<f64>,
    #[pyo3(get)]
    x: Vec<f64>,
    #[pyo3(get)]
    final_u: Vec<f64>,
}

#[pyfunction]
#[pyo3(signature = (reaction, m, ic, x_min, x_max, dx, t_max, snapshot_every,
                    geometry = "cartesian", allow_contact = false))]
#[allow(clippy::too_many_arguments)]
fn simulate(
    reaction: &str,
    m: f64,
    ic: &str,
    x_min: f64,
    x_max: f64,
    dx: f64,
    t_max: f64,
    snapshot_every: f64,
    geometry: &str,
    allow_contact: bool,
) -> PyResult<Simulation> {
    let geom = pde::parse_geometry(geometry).map_err(to_py)?;
    let dim = match geom {
        pde::Geometry::Cartesian1d => 1,
        pde::Geometry::Radial { dim } => dim,
    };
    let spec = parse_reaction(reaction, m, dim)?;
    let grid = match geom {
        pde::Geometry::Cartesian1d => pde::GridSpec::cartesian(x_min, x_max, dx),
        pde::Geometry::Radial { dim } => pde::GridSpec::radial(x_max, dx, dim),
    }
    .map_err(to_py)?;
    let initial = InitialData::parse(ic).map_err(to_py)?;
    let mut problem = Problem::new(grid.clone(), initial, spec, m);
    problem.t_max = t_max;
    problem.snapshot_every = snapshot_every;
    if allow_contact {
        problem.contact_left = pde::ContactPolicy::Allow;
        problem.contact_right = pde::ContactPolicy::Allow;
    }
    let out = pde::run(&problem).map_err(to_py)?;
    let last = out.snapshots.last().unwrap();
    Ok(Simulation {
        times: out.trace.samples.iter().map(|s| s.t).collect(),
        fronts: out.trace.samples.iter().map(|s| s.zeta).collect(),
        sup_u: out.trace.samples.iter().map(|s| s.sup_u).collect(),
        mass: out.trace.samples.iter().map(|s| s.mass).collect(),
        x: (0..grid.len()).map(|i| grid.x(i)).collect(),
        final_u: last.u.clone(),
    })
}

/// Shoot from the saddle at speed `c`; returns `(outcome, value)` where
/// `outcome` is one of `overshoot`, `undershoot`, `connected`, `stalled`
/// and `value` the exit flux, turning point, front slope, or plateau level.
#[pyfunction]
fn shoot(reaction: &str, m: f64, c: f64) -> PyResult<(String, f64)> {
    let spec = parse_reaction(reaction, m, 1)?;
    let t = phaseplane::shoot_from_one(&spec, m, c, &phaseplane::ShootOpts::default())
        .map_err(to_py)?;
    Ok(match t.outcome {
        phaseplane::ShootOutcome::Overshoot { nu } => ("overshoot".into(), nu),
        phaseplane::ShootOutcome::Undershoot { q_turn } => ("undershoot".into(), q_turn),
        phaseplane::ShootOutcome::Connected { front_slope } => ("connected".into(), front_slope),
        phaseplane::ShootOutcome::Stalled { q_plateau } => ("stalled".into(), q_plateau),
    })
}

#[pymodule]
fn _frontlab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Classification>()?;
    m.add_class::<SpeedResult>()?;
    m.add_class::<WaveProfile>()?;
    m.add_class::<Simulation>()?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(critical_speed, m)?)?;
    m.add_function(wrap_pyfunction!(wave_profile, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(shoot, m)?)?;
    Ok(())
}
