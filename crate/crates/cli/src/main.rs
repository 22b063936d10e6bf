//! `frontlab` — travelling fronts and free boundaries for
//! `u_t = Δu^m + h(u)` from the command line.
//!
//! Exit codes: 0 all checks passed, 2 usage error, 3 numeric or convergence
//! failure, 4 acceptance-check failure. Runs are seedless and deterministic:
//! identical configurations produce bitwise-identical output files.

mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use config::{resolve_f64, resolve_str, resolved_snapshot, FileConfig};
use frontlab::barriers::{self, BarrierConfig, BarrierSide};
use frontlab::experiments::{self, SmallDataConfig, Verdict};
use frontlab::pde::{self, Geometry, InitialData, Problem};
use frontlab::reaction::ReactionSpec;
use frontlab::waveprofile::WaveProfile;
use frontlab::{csvio, suite, Error};

const EXIT_USAGE: u8 = 2;
const EXIT_NUMERIC: u8 = 3;
const EXIT_CHECK_FAILED: u8 = 4;

#[derive(Parser)]
#[command(
    name = "frontlab",
    about = "Critical front speeds, finite wave profiles, and free-boundary \
             simulation for u_t = div(grad u^m) + h(u), m > 1",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Reaction: logistic | power:<p> | bistable:<a> | combustion:<a> |
    /// fujita:<k>,<b> | table:<path.csv>
    #[arg(long)]
    reaction: Option<String>,
    /// Diffusion exponent m > 1
    #[arg(long)]
    m: Option<f64>,
    /// Flat `key = value` configuration file; flags override file values
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Derived constants of a reaction (sign change, moment, slope bound, ...)
    Classify {
        #[command(flatten)]
        common: Common,
        /// Spatial dimension N for the critical growth exponent
        #[arg(long)]
        dim: Option<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Critical wave speed by phase-plane bisection
    Speed {
        #[command(flatten)]
        common: Common,
        /// Bisection tolerance (>= 1e-6)
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Reconstruct the finite wave profile V(xi) (front at xi = 0)
    Profile {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        tol: Option<f64>,
        /// Tail truncation level 1 - eps
        #[arg(long)]
        eps_profile: Option<f64>,
        /// Output CSV path (header xi,v; final row 0,0)
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Evolve the PDE and track the free boundaries
    Simulate {
        #[command(flatten)]
        common: Common,
        /// cartesian | radial:<N>
        #[arg(long)]
        geometry: Option<String>,
        /// const:<v> | box:<h>,<x0>,<x1> | bump:<d> | plateau:<eta>,<rho>[,<c>]
        /// | step:<h>,<x0> | file:<path.csv>
        #[arg(long)]
        ic: Option<String>,
        #[arg(long, allow_negative_numbers = true)]
        xmin: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        xmax: Option<f64>,
        #[arg(long)]
        dx: Option<f64>,
        #[arg(long)]
        tmax: Option<f64>,
        /// Snapshot interval
        #[arg(long)]
        snap: Option<f64>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Build and certify a sub/supersolution of the wave-sandwich family
    Barrier {
        #[command(flatten)]
        common: Common,
        /// sub | super
        #[arg(long = "type")]
        barrier_type: Option<String>,
        #[arg(long)]
        f0: Option<f64>,
        /// Slope of phi(f) = kappa (1 - f); omit for an automatic choice
        #[arg(long)]
        kappa: Option<f64>,
        /// Front-lag constant; omit to search for the smallest power of two
        #[arg(long)]
        k: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        g0: Option<f64>,
        #[arg(long)]
        tmax: Option<f64>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Spreading run analyzed against the critical wave (speed, shifts, shape)
    Converge {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        ic: Option<String>,
        #[arg(long, allow_negative_numbers = true)]
        xmin: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        xmax: Option<f64>,
        #[arg(long)]
        dx: Option<f64>,
        #[arg(long)]
        tmax: Option<f64>,
        #[arg(long)]
        snap: Option<f64>,
        /// Also analyze the left front (needs a symmetric domain)
        #[arg(long)]
        both_sides: bool,
        /// Dividing abscissa between left and right analyses
        #[arg(long, allow_negative_numbers = true)]
        xmid: Option<f64>,
        /// Relative speed tolerance of the pass check
        #[arg(long)]
        speed_tol: Option<f64>,
        /// Final shape-error threshold of the pass check
        #[arg(long)]
        shape_tol: Option<f64>,
        /// Shift total-variation threshold over the final third
        #[arg(long)]
        tv_tol: Option<f64>,
        /// Let the left wall absorb the leftward front instead of aborting
        #[arg(long)]
        allow_left_contact: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Small-bump spreading/vanishing experiment in radial symmetry
    HairTrigger {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        dim: Option<f64>,
        /// Bump height
        #[arg(long)]
        delta0: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        xmax: Option<f64>,
        #[arg(long)]
        dx: Option<f64>,
        #[arg(long)]
        tmax: Option<f64>,
        #[arg(long)]
        snap: Option<f64>,
        /// Pass condition: spreading | vanishing | decided | any
        #[arg(long)]
        expect: Option<String>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Plateau-threshold experiment: spreading plus the growing lower bound
    Threshold {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        dim: Option<f64>,
        #[arg(long)]
        eta: Option<f64>,
        #[arg(long)]
        rho: Option<f64>,
        /// Leg speed (defaults to c*/2)
        #[arg(long)]
        c: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        xmax: Option<f64>,
        #[arg(long)]
        dx: Option<f64>,
        #[arg(long)]
        tmax: Option<f64>,
        #[arg(long)]
        snap: Option<f64>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Run the desk-scale acceptance suite
    All {
        /// Suite name (only `desk` exists)
        #[arg(long, default_value = "desk")]
        suite: String,
        /// Worker threads
        #[arg(long, default_value_t = 2)]
        jobs: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(EXIT_USAGE);
            }
            print!("{e}"); // help and version leave through the error path
            return ExitCode::SUCCESS;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(AppError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(AppError::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Domain(_)
                | Error::Range(_)
                | Error::Parameter(_)
                | Error::Precondition(_) => EXIT_USAGE,
                _ => EXIT_NUMERIC,
            })
        }
    }
}

enum AppError {
    Usage(String),
    Lib(Error),
}

impl From<Error> for AppError {
    fn from(e: Error) -> Self {
        AppError::Lib(e)
    }
}

impl From<config::ConfigError> for AppError {
    fn from(e: config::ConfigError) -> Self {
        AppError::Usage(e.to_string())
    }
}

type AppResult<T> = Result<T, AppError>;

fn usage(msg: impl Into<String>) -> AppError {
    AppError::Usage(msg.into())
}

/// Keys accepted in configuration files (the union over subcommands).
const CONFIG_KEYS: &[&str] = &[
    "reaction", "m", "dim", "tol", "eps_profile", "geometry", "ic", "xmin", "xmax", "dx",
    "tmax", "snap", "type", "f0", "kappa", "k", "g0", "delta0", "eta", "rho", "c", "xmid",
    "speed_tol", "shape_tol", "tv_tol", "expect",
];

struct Resolved {
    file: FileConfig,
    reaction_str: String,
    m: f64,
}

fn resolve_common(common: &Common) -> AppResult<Resolved> {
    let file = match &common.config {
        Some(path) => FileConfig::load(path, CONFIG_KEYS)?,
        None => FileConfig::default(),
    };
    let reaction_str = resolve_str(common.reaction.clone(), &file, "reaction", "logistic");
    let m = resolve_f64(common.m, &file, "m", 2.0)?;
    if !(m > 1.0) {
        return Err(usage(format!("the diffusion exponent must satisfy m > 1, got {m}")));
    }
    Ok(Resolved { file, reaction_str, m })
}

fn parse_dim(dim: f64) -> AppResult<u32> {
    if dim < 1.0 || dim.fract() != 0.0 || dim > 16.0 {
        return Err(usage(format!("dimension must be an integer in [1, 16], got {dim}")));
    }
    Ok(dim as u32)
}

fn parse_geometry(s: &str) -> AppResult<(Geometry, u32)> {
    let geom = pde::parse_geometry(s)?;
    let dim = match geom {
        Geometry::Cartesian1d => 1,
        Geometry::Radial { dim } => dim,
    };
    Ok((geom, dim))
}

fn parse_ic(s: &str) -> AppResult<InitialData> {
    Ok(InitialData::parse(s)?)
}

fn ensure_dir(path: &Path) -> AppResult<()> {
    std::fs::create_dir_all(path)
        .map_err(|e| usage(format!("cannot create {}: {e}", path.display())))
}

fn write_text(path: &Path, body: &str) -> AppResult<()> {
    std::fs::write(path, body)
        .map_err(|e| AppError::Lib(Error::Io { path: path.to_owned(), source: e }))
}

#[derive(Serialize)]
struct SpeedJson {
    c_star: f64,
    bracket: [f64; 2],
    iterations: u32,
    sigma_bound: f64,
}

fn dispatch(cmd: Command) -> AppResult<ExitCode> {
    match cmd {
        Command::Classify { common, dim, json } => {
            let r = resolve_common(&common)?;
            let dim = parse_dim(resolve_f64(dim, &r.file, "dim", 1.0)?)?;
            let spec = ReactionSpec::parse(&r.reaction_str, r.m, dim)?;
            let cls = spec.classify(r.m, dim)?;
            if json {
                #[derive(Serialize)]
                struct ClsJson {
                    reaction: String,
                    m: f64,
                    dim: u32,
                    a: f64,
                    hosono: f64,
                    sigma: f64,
                    fujita_exponent: f64,
                    hair_trigger: bool,
                    hair_trigger_heuristic: bool,
                    delta_stable: f64,
                    h_prime_at_1: f64,
                }
                let out = ClsJson {
                    reaction: spec.description().to_string(),
                    m: r.m,
                    dim,
                    a: cls.a,
                    hosono: cls.hosono,
                    sigma: cls.sigma,
                    fujita_exponent: cls.fujita_exponent,
                    hair_trigger: cls.hair_trigger,
                    hair_trigger_heuristic: cls.hair_trigger_heuristic,
                    delta_stable: cls.delta_stable,
                    h_prime_at_1: cls.h_prime_at_1,
                };
                println!("{}", serde_json::to_string_pretty(&out).unwrap());
            } else {
                println!("reaction             : {spec}");
                println!("sign change a        : {}", csvio::fmt_f64(cls.a));
                println!("moment int h u^(m-1) : {}", csvio::fmt_f64(cls.hosono));
                println!("sigma                : {}", csvio::fmt_f64(cls.sigma));
                println!("critical exponent    : {}", csvio::fmt_f64(cls.fujita_exponent));
                println!(
                    "hair trigger         : {}{}",
                    cls.hair_trigger,
                    if cls.hair_trigger_heuristic { " (heuristic)" } else { "" }
                );
                println!("delta stable         : {}", csvio::fmt_f64(cls.delta_stable));
                println!("h'(1)                : {}", csvio::fmt_f64(cls.h_prime_at_1));
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Speed { common, tol, json } => {
            let r = resolve_common(&common)?;
            let tol = resolve_f64(tol, &r.file, "tol", 1e-6)?;
            let spec = ReactionSpec::parse(&r.reaction_str, r.m, 1)?;
            let result = frontlab::phaseplane::critical_speed(&spec, r.m, tol)?;
            if json {
                let out = SpeedJson {
                    c_star: result.c_star,
                    bracket: [result.bracket.0, result.bracket.1],
                    iterations: result.iterations,
                    sigma_bound: result.sigma_bound,
                };
                println!("{}", serde_json::to_string_pretty(&out).unwrap());
            } else {
                println!("c_star      : {}", csvio::fmt_f64(result.c_star));
                println!(
                    "bracket     : [{}, {}]",
                    csvio::fmt_f64(result.bracket.0),
                    csvio::fmt_f64(result.bracket.1)
                );
                println!("sigma bound : {}", csvio::fmt_f64(result.sigma_bound));
                println!("iterations  : {}", result.iterations);
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Profile { common, tol, eps_profile, out } => {
            let r = resolve_common(&common)?;
            let tol = resolve_f64(tol, &r.file, "tol", 1e-4)?;
            let eps = resolve_f64(eps_profile, &r.file, "eps_profile", 1e-4)?;
            let spec = ReactionSpec::parse(&r.reaction_str, r.m, 1)?;
            let (speed, profile) = WaveProfile::compute(&spec, r.m, tol, eps)?;
            let path = out.unwrap_or_else(|| PathBuf::from("profile.csv"));
            let (xi, v) = profile.nodes();
            let rows: Vec<Vec<f64>> = xi.iter().zip(v).map(|(&a, &b)| vec![a, b]).collect();
            csvio::write_csv(&path, "xi,v", &rows)?;
            if let Some(dir) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                write_text(
                    &dir.join("resolved_config.txt"),
                    &resolved_snapshot(&[
                        ("command", "profile".into()),
                        ("reaction", r.reaction_str.clone()),
                        ("m", csvio::fmt_f64(r.m)),
                        ("tol", csvio::fmt_f64(tol)),
                        ("eps_profile", csvio::fmt_f64(eps)),
                    ]),
                )?;
            }
            println!(
                "wrote {} ({} nodes, c* = {}, front pressure slope {})",
                path.display(),
                xi.len(),
                csvio::fmt_f64(speed.c_star),
                csvio::fmt_f64(profile.front_pressure_slope())
            );
            Ok(ExitCode::SUCCESS)
        }

        Command::Simulate { common, geometry, ic, xmin, xmax, dx, tmax, snap, out } => {
            let r = resolve_common(&common)?;
            let geometry_str = resolve_str(geometry, &r.file, "geometry", "cartesian");
            let (geom, dim) = parse_geometry(&geometry_str)?;
            let ic_str = resolve_str(ic, &r.file, "ic", "box:1,-5,5");
            let initial = parse_ic(&ic_str)?;
            let xmin = resolve_f64(xmin, &r.file, "xmin", 0.0)?;
            let xmax = resolve_f64(xmax, &r.file, "xmax", 40.0)?;
            let dx = resolve_f64(dx, &r.file, "dx", 0.05)?;
            let tmax = resolve_f64(tmax, &r.file, "tmax", 10.0)?;
            let snap = resolve_f64(snap, &r.file, "snap", 1.0)?;
            let spec = ReactionSpec::parse(&r.reaction_str, r.m, dim)?;
            let grid = match geom {
                Geometry::Cartesian1d => pde::GridSpec::cartesian(xmin, xmax, dx)?,
                Geometry::Radial { dim } => pde::GridSpec::radial(xmax, dx, dim)?,
            };
            let mut problem = Problem::new(grid, initial, spec, r.m);
            problem.t_max = tmax;
            problem.snapshot_every = snap;
            let out_dir = out.unwrap_or_else(|| PathBuf::from("simulate_out"));
            ensure_dir(&out_dir)?;
            write_text(
                &out_dir.join("resolved_config.txt"),
                &resolved_snapshot(&[
                    ("command", "simulate".into()),
                    ("reaction", r.reaction_str.clone()),
                    ("m", csvio::fmt_f64(r.m)),
                    ("geometry", geometry_str.clone()),
                    ("ic", ic_str.clone()),
                    ("xmin", csvio::fmt_f64(xmin)),
                    ("xmax", csvio::fmt_f64(xmax)),
                    ("dx", csvio::fmt_f64(dx)),
                    ("tmax", csvio::fmt_f64(tmax)),
                    ("snap", csvio::fmt_f64(snap)),
                ]),
            )?;
            let output = pde::run(&problem)?;
            write_run_output(&out_dir, &output)?;
            println!(
                "wrote {} snapshots and trace.csv to {}",
                output.snapshots.len(),
                out_dir.display()
            );
            Ok(ExitCode::SUCCESS)
        }

        Command::Barrier { common, barrier_type, f0, kappa, k, g0, tmax, out } => {
            let r = resolve_common(&common)?;
            let btype = resolve_str(barrier_type, &r.file, "type", "sub");
            let f0_default = match btype.as_str() {
                "sub" => 0.95,
                "super" => 1.05,
                other => {
                    return Err(usage(format!("barrier type must be sub or super, got `{other}`")))
                }
            };
            let f0 = resolve_f64(f0, &r.file, "f0", f0_default)?;
            if (btype == "sub" && f0 >= 1.0) || (btype == "super" && f0 <= 1.0) {
                return Err(usage(format!(
                    "f0 = {f0} is on the wrong side of 1 for a {btype}solution"
                )));
            }
            let g0 = resolve_f64(g0, &r.file, "g0", 0.0)?;
            let tmax = resolve_f64(tmax, &r.file, "tmax", 40.0)?;
            let spec = ReactionSpec::parse(&r.reaction_str, r.m, 1)?;
            let (speed, profile) = WaveProfile::compute(&spec, r.m, 1e-4, 1e-4)?;
            let mut cfg = BarrierConfig::auto(&spec, r.m, speed.c_star, f0, g0)?;
            if let Some(kappa) = kappa.or(r.file.get_f64("kappa")?) {
                cfg.kappa = kappa;
                cfg.validate(&spec)?;
            }
            cfg.k = match k.or(r.file.get_f64("k")?) {
                Some(k) => k,
                None => barriers::choose_k(&cfg, &profile, &spec)?,
            };
            let report = barriers::residual_sign_check(&cfg, &profile, &spec, 200, 400)?;
            let path = barriers::integrate_fg(&cfg, &spec, tmax)?;
            let out_dir = out.unwrap_or_else(|| PathBuf::from("barrier_out"));
            ensure_dir(&out_dir)?;
            let rows: Vec<Vec<f64>> = path
                .samples
                .iter()
                .map(|&(t, f, g)| vec![t, f, g, g - cfg.c_star * t])
                .collect();
            csvio::write_csv(&out_dir.join("barrier.csv"), "t,f,g,g_minus_ct", &rows)?;
            let side = match report.side {
                BarrierSide::Sub => "subsolution (residual must be <= 0)",
                BarrierSide::Super => "supersolution (residual must be >= 0)",
            };
            let summary = format!(
                "type            : {side}\nf0              : {}\nkappa           : {}\n\
                 k               : {}\ndelta           : {}\nc_star          : {}\n\
                 xi_limit        : {}\nresidual check  : {}\nworst violation : {} at (f, V) = ({}, {})\n",
                csvio::fmt_f64(cfg.f0),
                csvio::fmt_f64(cfg.kappa),
                csvio::fmt_f64(cfg.k),
                csvio::fmt_f64(cfg.delta),
                csvio::fmt_f64(cfg.c_star),
                csvio::fmt_f64(path.xi_limit),
                if report.pass { "pass" } else { "FAIL" },
                csvio::fmt_f64(report.max_violation),
                csvio::fmt_f64(report.worst.0),
                csvio::fmt_f64(report.worst.1),
            );
            write_text(&out_dir.join("residual_report.txt"), &summary)?;
            write_text(
                &out_dir.join("resolved_config.txt"),
                &resolved_snapshot(&[
                    ("command", "barrier".into()),
                    ("type", btype.clone()),
                    ("reaction", r.reaction_str.clone()),
                    ("m", csvio::fmt_f64(r.m)),
                    ("f0", csvio::fmt_f64(cfg.f0)),
                    ("kappa", csvio::fmt_f64(cfg.kappa)),
                    ("k", csvio::fmt_f64(cfg.k)),
                    ("g0", csvio::fmt_f64(g0)),
                    ("tmax", csvio::fmt_f64(tmax)),
                ]),
            )?;
            print!("{summary}");
            if report.pass {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(EXIT_CHECK_FAILED))
            }
        }

        Command::Converge {
            common,
            ic,
            xmin,
            xmax,
            dx,
            tmax,
            snap,
            both_sides,
            xmid,
            speed_tol,
            shape_tol,
            tv_tol,
            allow_left_contact,
            out,
        } => {
            let r = resolve_common(&common)?;
            let ic_str = resolve_str(ic, &r.file, "ic", "step:1,0");
            let xmin = resolve_f64(xmin, &r.file, "xmin", -20.0)?;
            let xmax = resolve_f64(xmax, &r.file, "xmax", 80.0)?;
            let dx = resolve_f64(dx, &r.file, "dx", 0.025)?;
            let tmax = resolve_f64(tmax, &r.file, "tmax", 50.0)?;
            let snap = resolve_f64(snap, &r.file, "snap", 1.0)?;
            let xmid = resolve_f64(xmid, &r.file, "xmid", 0.5 * (xmin + xmax))?;
            let speed_tol = resolve_f64(speed_tol, &r.file, "speed_tol", 0.02)?;
            let shape_tol = resolve_f64(shape_tol, &r.file, "shape_tol", 0.05)?;
            let tv_tol = resolve_f64(tv_tol, &r.file, "tv_tol", 0.05)?;
            let spec = ReactionSpec::parse(&r.reaction_str, r.m, 1)?;
            let cfg = experiments::ConvergeConfig {
                x_min: xmin,
                x_max: xmax,
                dx,
                t_max: tmax,
                snapshot_every: snap,
                initial: parse_ic(&ic_str)?,
                both_sides,
                x_mid: xmid,
                speed_window: (0.5, 1.0),
                allow_contact_left: allow_left_contact || ic_str.starts_with("step"),
                allow_contact_right: false,
            };
            let (report, output) = experiments::converge_experiment(&spec, r.m, &cfg)?;
            let out_dir = out.unwrap_or_else(|| PathBuf::from("converge_out"));
            ensure_dir(&out_dir)?;
            let mut rows: Vec<Vec<f64>> = Vec::new();
            let mut metric = |id: f64, series: &[(f64, f64)]| {
                for &(t, v) in series {
                    rows.push(vec![id, t, v]);
                }
            };
            metric(1.0, &report.shape_error_plus);
            metric(2.0, &report.front_error_plus);
            metric(3.0, &report.shape_error_minus);
            metric(4.0, &report.front_error_minus);
            csvio::write_csv(&out_dir.join("report.csv"), "metric,t,value", &rows)?;
            write_run_output(&out_dir, &output)?;

            let tv = experiments::total_variation(&report.front_error_plus, 2.0 * tmax / 3.0);
            let final_shape =
                report.shape_error_plus.last().map(|&(_, e)| e).unwrap_or(f64::NAN);
            let speed = report.speed_measured.unwrap_or(f64::NAN);
            let speed_ok = (speed - report.c_star).abs() <= speed_tol * report.c_star;
            let shape_ok = final_shape <= shape_tol;
            let tv_ok = tv <= tv_tol;
            let spreading = report.verdict == Verdict::Spreading;
            let pass = speed_ok && shape_ok && tv_ok && spreading;
            let summary = format!(
                "verdict        : {}\nc_star         : {}\nmeasured speed : {} (tolerance {})\n\
                 xi_plus        : {}\nxi_minus       : {}\nfinal shape err: {} (tolerance {})\n\
                 shift TV (last third): {} (tolerance {})\nchecks         : {}\n\
                 report.csv metric ids: 1 shape_error_plus, 2 front_error_plus, \
                 3 shape_error_minus, 4 front_error_minus\n",
                report.verdict,
                csvio::fmt_f64(report.c_star),
                csvio::fmt_f64(speed),
                csvio::fmt_f64(speed_tol),
                csvio::fmt_f64(report.xi_plus),
                report.xi_minus.map(csvio::fmt_f64).unwrap_or_else(|| "n/a".into()),
                csvio::fmt_f64(final_shape),
                csvio::fmt_f64(shape_tol),
                csvio::fmt_f64(tv),
                csvio::fmt_f64(tv_tol),
                if pass { "pass" } else { "FAIL" },
            );
            write_text(&out_dir.join("summary.txt"), &summary)?;
            write_text(
                &out_dir.join("resolved_config.txt"),
                &resolved_snapshot(&[
                    ("command", "converge".into()),
                    ("reaction", r.reaction_str.clone()),
                    ("m", csvio::fmt_f64(r.m)),
                    ("ic", ic_str.clone()),
                    ("xmin", csvio::fmt_f64(xmin)),
                    ("xmax", csvio::fmt_f64(xmax)),
                    ("dx", csvio::fmt_f64(dx)),
                    ("tmax", csvio::fmt_f64(tmax)),
                    ("snap", csvio::fmt_f64(snap)),
                    ("xmid", csvio::fmt_f64(xmid)),
                    ("speed_tol", csvio::fmt_f64(speed_tol)),
                    ("shape_tol", csvio::fmt_f64(shape_tol)),
                    ("tv_tol", csvio::fmt_f64(tv_tol)),
                ]),
            )?;
            print!("{summary}");
            Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(EXIT_CHECK_FAILED) })
        }

        Command::HairTrigger { common, dim, delta0, xmax, dx, tmax, snap, expect, out } => {
            let r = resolve_common(&common)?;
            let dim = parse_dim(resolve_f64(dim, &r.file, "dim", 1.0)?)?;
            let delta0 = resolve_f64(delta0, &r.file, "delta0", 1e-2)?;
            let cfg = SmallDataConfig {
                x_max: resolve_f64(xmax, &r.file, "xmax", 60.0)?,
                dx: resolve_f64(dx, &r.file, "dx", 0.05)?,
                t_max: resolve_f64(tmax, &r.file, "tmax", 400.0)?,
                snapshot_every: resolve_f64(snap, &r.file, "snap", 5.0)?,
                ..Default::default()
            };
            let expect = resolve_str(expect, &r.file, "expect", "any");
            let spec = ReactionSpec::parse(&r.reaction_str, r.m, dim)?;
            let (verdict, output) =
                experiments::hair_trigger_experiment(&spec, r.m, dim, delta0, &cfg)?;
            let out_dir = out.unwrap_or_else(|| PathBuf::from("hair_trigger_out"));
            ensure_dir(&out_dir)?;
            write_small_data_report(&out_dir, &output)?;
            let last = output.snapshots.last().unwrap();
            let summary = format!(
                "verdict  : {verdict}\nu(0, {}) : {}\nsup u    : {}\n",
                last.t,
                csvio::fmt_f64(last.u[0]),
                csvio::fmt_f64(last.sup())
            );
            write_text(&out_dir.join("summary.txt"), &summary)?;
            write_text(
                &out_dir.join("resolved_config.txt"),
                &resolved_snapshot(&[
                    ("command", "hair-trigger".into()),
                    ("reaction", r.reaction_str.clone()),
                    ("m", csvio::fmt_f64(r.m)),
                    ("dim", format!("{dim}")),
                    ("delta0", csvio::fmt_f64(delta0)),
                    ("xmax", csvio::fmt_f64(cfg.x_max)),
                    ("dx", csvio::fmt_f64(cfg.dx)),
                    ("tmax", csvio::fmt_f64(cfg.t_max)),
                    ("snap", csvio::fmt_f64(cfg.snapshot_every)),
                    ("expect", expect.clone()),
                ]),
            )?;
            print!("{summary}");
            let pass = match expect.as_str() {
                "any" => true,
                "decided" => verdict != Verdict::Undecided,
                "spreading" => verdict == Verdict::Spreading,
                "vanishing" => verdict == Verdict::Vanishing,
                other => return Err(usage(format!("unknown expectation `{other}`"))),
            };
            Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(EXIT_CHECK_FAILED) })
        }

        Command::Threshold { common, dim, eta, rho, c, xmax, dx, tmax, snap, out } => {
            let r = resolve_common(&common)?;
            let dim = parse_dim(resolve_f64(dim, &r.file, "dim", 1.0)?)?;
            let eta = resolve_f64(eta, &r.file, "eta", 0.9)?;
            let rho = resolve_f64(rho, &r.file, "rho", 20.0)?;
            let c = match c {
                Some(v) => Some(v),
                None => r.file.get_f64("c")?,
            };
            let cfg = SmallDataConfig {
                x_max: resolve_f64(xmax, &r.file, "xmax", 60.0)?,
                dx: resolve_f64(dx, &r.file, "dx", 0.05)?,
                t_max: resolve_f64(tmax, &r.file, "tmax", 40.0)?,
                snapshot_every: resolve_f64(snap, &r.file, "snap", 2.0)?,
                ..Default::default()
            };
            let spec = ReactionSpec::parse(&r.reaction_str, r.m, dim)?;
            let (report, output) =
                experiments::threshold_experiment(&spec, r.m, dim, eta, rho, c, &cfg)?;
            let out_dir = out.unwrap_or_else(|| PathBuf::from("threshold_out"));
            ensure_dir(&out_dir)?;
            write_small_data_report(&out_dir, &output)?;
            let pass = report.verdict == Verdict::Spreading && report.ball_bound_held;
            let summary = format!(
                "verdict         : {}\nleg speed c     : {}\nball bound held : {} (worst min {})\n\
                 checks          : {}\n",
                report.verdict,
                csvio::fmt_f64(report.c),
                report.ball_bound_held,
                csvio::fmt_f64(report.worst_ball_min),
                if pass { "pass" } else { "FAIL" },
            );
            write_text(&out_dir.join("summary.txt"), &summary)?;
            write_text(
                &out_dir.join("resolved_config.txt"),
                &resolved_snapshot(&[
                    ("command", "threshold".into()),
                    ("reaction", r.reaction_str.clone()),
                    ("m", csvio::fmt_f64(r.m)),
                    ("dim", format!("{dim}")),
                    ("eta", csvio::fmt_f64(eta)),
                    ("rho", csvio::fmt_f64(rho)),
                    ("c", csvio::fmt_f64(report.c)),
                    ("xmax", csvio::fmt_f64(cfg.x_max)),
                    ("dx", csvio::fmt_f64(cfg.dx)),
                    ("tmax", csvio::fmt_f64(cfg.t_max)),
                ]),
            )?;
            print!("{summary}");
            Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(EXIT_CHECK_FAILED) })
        }

        Command::All { suite: suite_name, jobs, out } => {
            if suite_name != "desk" {
                return Err(usage(format!("unknown suite `{suite_name}` (only `desk`)")));
            }
            let criteria = suite::all_criteria();
            let jobs = jobs.clamp(1, criteria.len());
            let results = run_pool(criteria, jobs);
            let mut lines = Vec::new();
            let mut all_pass = true;
            for r in &results {
                println!("{}", r.line());
                lines.push(r.line());
                all_pass &= r.pass;
            }
            if let Some(dir) = out {
                ensure_dir(&dir)?;
                write_text(&dir.join("acceptance.txt"), &(lines.join("\n") + "\n"))?;
            }
            println!(
                "{}/{} criteria passed",
                results.iter().filter(|r| r.pass).count(),
                results.len()
            );
            Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::from(EXIT_CHECK_FAILED) })
        }
    }
}

/// Run the criterion jobs on a bounded worker pool; results are merged back
/// in criterion order so the report is deterministic.
fn run_pool(
    criteria: Vec<fn() -> suite::CriterionResult>,
    jobs: usize,
) -> Vec<suite::CriterionResult> {
    use std::sync::atomic::{AtomicUsize, Ordering};
    use std::sync::Mutex;
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<suite::CriterionResult>>> =
        Mutex::new(vec![None; criteria.len()]);
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= criteria.len() {
                    break;
                }
                let r = criteria[i]();
                results.lock().unwrap()[i] = Some(r);
            });
        }
    });
    results.into_inner().unwrap().into_iter().flatten().collect()
}

fn write_run_output(dir: &Path, output: &pde::RunOutput) -> AppResult<()> {
    csvio::write_csv(
        &dir.join("trace.csv"),
        "t,zeta_minus,zeta_plus,sup_u,mass",
        &output.trace.rows(),
    )?;
    for (k, field) in output.snapshots.iter().enumerate() {
        let rows: Vec<Vec<f64>> =
            (0..field.u.len()).map(|i| vec![field.grid.x(i), field.u[i]]).collect();
        csvio::write_csv_with_comment(
            &dir.join(format!("snap_{k}.csv")),
            Some(&format!("t={}", csvio::fmt_f64(field.t))),
            "x,u",
            &rows,
        )?;
    }
    Ok(())
}

/// Long-format report for the small-data experiments: origin value, sup and
/// front radius per snapshot (metric ids 1, 2, 3).
fn write_small_data_report(dir: &Path, output: &pde::RunOutput) -> AppResult<()> {
    let mut rows = Vec::new();
    for (f, s) in output.snapshots.iter().zip(&output.trace.samples) {
        rows.push(vec![1.0, f.t, f.u[0]]);
        rows.push(vec![2.0, f.t, s.sup_u]);
        if let Some((_, zp)) = s.zeta {
            rows.push(vec![3.0, f.t, zp]);
        }
    }
    csvio::write_csv(&dir.join("report.csv"), "metric,t,value", &rows)?;
    csvio::write_csv(
        &dir.join("trace.csv"),
        "t,zeta_minus,zeta_plus,sup_u,mass",
        &output.trace.rows(),
    )?;
    Ok(())
}
