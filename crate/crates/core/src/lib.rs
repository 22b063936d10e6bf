//! Travelling fronts and free boundaries for the degenerate reaction-diffusion
//! equation `u_t = Δu^m + h(u)` with `m > 1`.
//!
//! The slow diffusion makes solutions with compactly supported data keep
//! compact support, so spreading states develop sharp fronts that travel at a
//! critical speed `c*` determined by the reaction `h` and the exponent `m`.
//! This crate computes that speed from the phase plane of the wave equation,
//! reconstructs the finite wave profile, simulates the PDE in 1D and radial
//! geometry with free-boundary tracking, builds explicit sub/supersolutions,
//! and packages desk-scale verification experiments for the whole machinery.
//!
//! Module map:
//! - [`reaction`]: catalog of admissible nonlinearities and their derived
//!   constants (sign-change point, stability interval, growth classification).
//! - [`phaseplane`]: shooting in the desingularized `(q, p)` plane, outcome
//!   classification, bisection for the critical speed, subsolution legs.
//! - [`waveprofile`]: conversion of a connected trajectory into the physical
//!   profile `V(ξ)` with the front at `ξ = 0`.
//! - [`pde`]: explicit finite-difference solver with positivity control and
//!   free-boundary extraction.
//! - [`barriers`]: the `f(t)·V(x − g(t))` sub/supersolution family, the
//!   exponential slow-wave supersolution, and the plateau subsolution.
//! - [`experiments`]: front-speed measurement, shape-convergence fits,
//!   spreading/vanishing verdicts, decay-rate and pressure-bound diagnostics.
//! - [`suite`]: the desk-scale acceptance checks run by the CLI and the
//!   integration tests.

pub mod barriers;
pub mod csvio;
mod error;
pub mod experiments;
mod numerics;
pub mod pde;
pub mod phaseplane;
pub mod reaction;
pub mod suite;
pub mod waveprofile;

pub use error::{Error, Result};
pub use phaseplane::{ShootOutcome, SpeedResult, Trajectory};
pub use reaction::{ReactionClassification, ReactionSpec};
pub use waveprofile::WaveProfile;
