//! `pentagram`: generate polygons, iterate the maps and run the
//! verification suites from the command line.
//!
//! Exit status: 0 pass, 2 invariant violation, 3 degenerate input,
//! 4 configuration error. Verbosity comes from `PENTAGRAM_LOG`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{info, warn};
use rayon::prelude::*;

use pentagram_core::codes::code_integrals;
use pentagram_core::continuum::{
    envelope_family, epsilon_grid, epsilon_sweep, fit_epsilon2, fundamental_solutions, is_symmetric,
    kdv24_drift_check, predicted_constant, predicted_direction, symmetric_offsets, CurveOperator,
};
use pentagram_core::coords::{abc_from_polygon, explicit_step, xyz_geometric, Abc3, Xyz3};
use pentagram_core::io::{continuum_csv, orbit_csv, polygon_from_str, polygon_to_string, sweep_csv};
use pentagram_core::lax::{scaling_invariance_defect, verify_lax};
use pentagram_core::maps::{duality_defect, general_map, MapParams};
use pentagram_core::projective::TwistedPolygon;
use pentagram_core::random::{random_closed_polygon, random_coeffs, random_twisted_polygon, random_xyz, seeded};
use pentagram_core::scalar::{format_scalar, max_abs, parse_scalar};
use pentagram_core::spectral::{
    closedness_residuals, expected_genus, extract_integrals, finite_branch_count, integrals_xyz_f64,
    spectral_function_abc, spectral_function_xyz_unscaled, Integrals3D,
};
use pentagram_core::{Error, Rational, Scalar};

const EXIT_VIOLATION: u8 = 2;
const EXIT_DEGENERATE: u8 = 3;
const EXIT_CONFIG: u8 = 4;

/// Redraws allowed per cell when an exact random draw is degenerate.
const MAX_REDRAWS: usize = 20;

#[derive(Parser, Debug)]
#[command(name = "pentagram", version, about = "Higher pentagram maps: generation, iteration and verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Random twisted (or closed) polygon as JSON.
    Gen {
        #[command(flatten)]
        cfg: RunConfig,
        /// Identity monodromy.
        #[arg(long)]
        closed: bool,
    },
    /// Iterate T_{p,r} and emit the vertex trace as CSV.
    Map {
        #[command(flatten)]
        cfg: RunConfig,
        /// Start from this polygon JSON instead of a random one.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Centered index convention (p = 2, r = 1 only).
        #[arg(long)]
        centered: bool,
        /// Emit the (x, y, z) coordinate trace instead (d = 3).
        #[arg(long)]
        xyz: bool,
    },
    /// Run one of the verification suites; emits a residual CSV.
    Verify {
        #[arg(value_enum)]
        check: Check,
        #[command(flatten)]
        cfg: RunConfig,
        /// Scale factors for `scaling`, comma separated.
        #[arg(long, default_value = "1/2,3/2,3")]
        scales: String,
    },
    /// Finite branch census of the spectral curve (exact).
    Genus {
        #[command(flatten)]
        cfg: RunConfig,
    },
    /// Envelope sweep towards the continuous limit and the C_d fit.
    Continuum {
        #[command(flatten)]
        cfg: RunConfig,
        /// Sample offsets, comma separated; symmetric by default.
        #[arg(long)]
        offsets: Option<String>,
        #[arg(long, default_value_t = pentagram_core::continuum::DEFAULT_GRID)]
        grid: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Check {
    Lax,
    Integrals,
    Duality,
    Scaling,
    Codes,
    Closed,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Backend {
    Exact,
    Float,
}

/// Flags shared by every subcommand. The seed alone determines all random
/// draws, so identical flags give identical output.
#[derive(Args, Debug, Clone)]
struct RunConfig {
    #[arg(long, default_value_t = 3)]
    d: usize,
    #[arg(long, default_value_t = 7)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    p: usize,
    #[arg(long, default_value_t = 1)]
    r: usize,
    /// Iterations; the default depends on the command.
    #[arg(long)]
    steps: Option<usize>,
    /// Random instances; 10 for `verify`, 1 for `genus`.
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, value_enum, default_value_t = Backend::Exact)]
    backend: Backend,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Tolerance for float checks (relative tolerance on C_d for `continuum`).
    #[arg(long)]
    tol: Option<f64>,
    /// Output file (a directory for `continuum`); stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Outcome of a command that ran to completion.
enum Verdict {
    Pass,
    Violation(String),
}

#[derive(Debug)]
struct ConfigError(String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn config(msg: impl Into<String>) -> anyhow::Error {
    ConfigError(msg.into()).into()
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<ConfigError>().is_some() {
        return EXIT_CONFIG;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::InvalidInput(_) | Error::GcdObstruction { .. }) => EXIT_CONFIG,
        Some(Error::InconsistentLift { .. } | Error::UnexpectedSupport(_) | Error::PoorConditioning { .. }) => {
            EXIT_VIOLATION
        }
        Some(_) => EXIT_DEGENERATE,
        // I/O failures come from bad paths.
        None => EXIT_CONFIG,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().filter_or("PENTAGRAM_LOG", "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_CONFIG) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(Verdict::Pass) => ExitCode::SUCCESS,
        Ok(Verdict::Violation(msg)) => {
            eprintln!("FAIL: {msg}");
            ExitCode::from(EXIT_VIOLATION)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

/// Run a generic command with the scalar type picked by `--backend`.
macro_rules! dispatch {
    ($backend:expr, $f:ident ( $($arg:expr),* )) => {
        match $backend {
            Backend::Exact => $f::<Rational>($($arg),*),
            Backend::Float => $f::<f64>($($arg),*),
        }
    };
}

fn run(cmd: Command) -> anyhow::Result<Verdict> {
    match cmd {
        Command::Gen { cfg, closed } => dispatch!(cfg.backend, gen(&cfg, closed)),
        Command::Map { cfg, input, centered, xyz } => {
            dispatch!(cfg.backend, map_trace(&cfg, input.as_deref(), centered, xyz))
        }
        Command::Verify { check, cfg, scales } => match check {
            Check::Lax => dispatch!(cfg.backend, verify_lax_cmd(&cfg)),
            Check::Integrals => match cfg.backend {
                Backend::Exact => verify_integrals_exact(&cfg),
                Backend::Float => verify_integrals_float(&cfg),
            },
            Check::Duality => dispatch!(cfg.backend, verify_duality(&cfg)),
            Check::Scaling => dispatch!(cfg.backend, verify_scaling(&cfg, &scales)),
            Check::Codes => dispatch!(cfg.backend, verify_codes(&cfg)),
            Check::Closed => dispatch!(cfg.backend, verify_closed(&cfg)),
        },
        Command::Genus { cfg } => genus(&cfg),
        Command::Continuum { cfg, offsets, grid } => continuum(&cfg, offsets.as_deref(), grid),
    }
}


fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Residual as printed in CSV columns: exact values verbatim, so a vanishing
/// defect reads "0".
fn residual<S: Scalar>(v: &S) -> String {
    if S::EXACT {
        v.to_string()
    } else {
        format!("{:e}", v.to_f64())
    }
}

fn magnitude(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else {
        format!("{v:e}")
    }
}

/// Exact: identically zero. Float: within `tol`.
fn within<S: Scalar>(v: &S, tol: f64) -> bool {
    if S::EXACT {
        v.is_zero()
    } else {
        v.to_f64().abs() <= tol
    }
}

fn require_3d(cfg: &RunConfig, what: &str) -> anyhow::Result<()> {
    if cfg.d != 3 {
        bail!(config(format!("{what} is defined for d = 3, got d = {}", cfg.d)));
    }
    Ok(())
}

fn require_odd(cfg: &RunConfig, what: &str) -> anyhow::Result<()> {
    if cfg.n.is_multiple_of(2) {
        bail!(config(format!("{what} needs odd n, got n = {}", cfg.n)));
    }
    Ok(())
}

fn require_dims(cfg: &RunConfig) -> anyhow::Result<()> {
    if cfg.d < 2 || cfg.n < cfg.d + 2 {
        bail!(config(format!("need d >= 2 and n >= d + 2, got d = {}, n = {}", cfg.d, cfg.n)));
    }
    Ok(())
}

/// Collect per-trial CSV rows, write them, and turn the first failing row
/// into a violation.
fn finish(cfg: &RunConfig, header: &str, rows: Vec<(String, bool)>, label: &str) -> anyhow::Result<Verdict> {
    let mut text = String::from(header);
    text.push('\n');
    for (row, _) in &rows {
        let _ = writeln!(text, "{row}");
    }
    emit(cfg.out.as_deref(), &text)?;
    match rows.iter().position(|(_, ok)| !ok) {
        Some(k) => Ok(Verdict::Violation(format!("{label}: row {k} out of tolerance ({})", rows[k].0))),
        None => {
            eprintln!("PASS {label}: {} rows", rows.len());
            Ok(Verdict::Pass)
        }
    }
}

fn gen<S: Scalar>(cfg: &RunConfig, closed: bool) -> anyhow::Result<Verdict> {
    require_dims(cfg)?;
    let mut rng = seeded(cfg.seed);
    let poly: TwistedPolygon<S> =
        if closed { random_closed_polygon(cfg.d, cfg.n, &mut rng) } else { random_twisted_polygon(cfg.d, cfg.n, &mut rng) };
    emit(cfg.out.as_deref(), &polygon_to_string(&poly))?;
    Ok(Verdict::Pass)
}

/// Small representatives of every vertex; keeps exact entries from growing
/// without changing the projective polygon.
fn normalize<S: Scalar>(poly: &TwistedPolygon<S>) -> anyhow::Result<TwistedPolygon<S>> {
    let verts = poly.vertices.iter().map(|v| S::projective_normalize(&v.coords)).collect();
    Ok(TwistedPolygon::new(verts, poly.monodromy.clone())?)
}

fn map_trace<S: Scalar>(cfg: &RunConfig, input: Option<&Path>, centered: bool, xyz: bool) -> anyhow::Result<Verdict> {
    let mut poly: TwistedPolygon<S> = match input {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            polygon_from_str(&text)?
        }
        None => {
            require_dims(cfg)?;
            random_twisted_polygon(cfg.d, cfg.n, &mut seeded(cfg.seed))
        }
    };
    if xyz && poly.d != 3 {
        bail!(config("--xyz needs a polygon in projective 3-space"));
    }
    let params = if centered {
        if (cfg.p, cfg.r) != (2, 1) {
            bail!(config("--centered is defined for p = 2, r = 1"));
        }
        MapParams::centered()
    } else {
        MapParams::new(cfg.p, cfg.r)
    };
    // Exact heights grow geometrically under the map, so the exact default
    // is short.
    let steps = cfg.steps.unwrap_or(if S::EXACT { 3 } else { 20 });
    let mut trace = vec![poly.clone()];
    for step in 1..=steps {
        poly = normalize(&general_map(&poly, params).with_context(|| format!("map step {step}"))?)?;
        info!("map step {step} done");
        trace.push(poly.clone());
    }
    let text = if xyz {
        let coords = trace.iter().map(xyz_geometric).collect::<Result<Vec<Xyz3<S>>, _>>()?;
        orbit_csv(&coords)
    } else {
        let mut text = String::from("step,i");
        for c in 0..=poly.d {
            let _ = write!(text, ",v{c}");
        }
        text.push('\n');
        for (step, p) in trace.iter().enumerate() {
            for (i, v) in p.vertices.iter().enumerate() {
                let cells: Vec<String> = v.coords.iter().map(format_scalar).collect();
                let _ = writeln!(text, "{step},{i},{}", cells.join(","));
            }
        }
        text
    };
    emit(cfg.out.as_deref(), &text)?;
    Ok(Verdict::Pass)
}

fn verify_lax_cmd<S: Scalar>(cfg: &RunConfig) -> anyhow::Result<Verdict> {
    require_3d(cfg, "the (x, y, z) Lax equation")?;
    require_dims(cfg)?;
    let tol = cfg.tol.unwrap_or(1e-9);
    let mut rng = seeded(cfg.seed);
    let polys: Vec<TwistedPolygon<S>> = (0..cfg.trials.unwrap_or(10)).map(|_| random_twisted_polygon(3, cfg.n, &mut rng)).collect();
    let rows = polys
        .par_iter()
        .enumerate()
        .map(|(t, poly)| {
            let defect = verify_lax(&xyz_geometric(poly)?)?;
            Ok((format!("{t},{},{}", cfg.n, residual(&defect)), within(&defect, tol)))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    finish(cfg, "trial,n,defect", rows, "Lax equation")
}

fn verify_integrals_exact(cfg: &RunConfig) -> anyhow::Result<Verdict> {
    require_3d(cfg, "the (x, y, z) integrals")?;
    require_dims(cfg)?;
    let steps = cfg.steps.unwrap_or(5);
    let mut rng = seeded(cfg.seed);
    let polys: Vec<TwistedPolygon<Rational>> = (0..cfg.trials.unwrap_or(10)).map(|_| random_twisted_polygon(3, cfg.n, &mut rng)).collect();
    // The unscaled integrals together with prod x^2 y z determine the
    // scaled ones; the drift is the largest change among them.
    let snapshot = |xyz: &Xyz3<Rational>| -> Result<Vec<Rational>, Error> {
        let mut v = extract_integrals(&spectral_function_xyz_unscaled(xyz)?)?.flatten();
        v.push(xyz.weight_product());
        Ok(v)
    };
    let per_trial = polys
        .par_iter()
        .enumerate()
        .map(|(t, poly)| {
            let mut xyz = xyz_geometric(poly)?;
            let first = snapshot(&xyz)?;
            let mut rows = Vec::with_capacity(steps);
            for step in 1..=steps {
                xyz = explicit_step(&xyz)?;
                let now = snapshot(&xyz)?;
                let drift = first.iter().zip(&now).map(|(a, b)| (a - b).abs()).fold(Rational::zero(), Rational::max_of);
                rows.push((format!("{t},{step},{}", residual(&drift)), drift.is_zero()));
            }
            Ok(rows)
        })
        .collect::<Result<Vec<_>, Error>>()?;
    finish(cfg, "trial,step,drift", per_trial.into_iter().flatten().collect(), "conservation of integrals")
}

fn rel_drift(a: &Integrals3D<f64>, b: &Integrals3D<f64>) -> f64 {
    let (a, b) = (a.flatten(), b.flatten());
    let scale = max_abs(&a).max(f64::MIN_POSITIVE);
    a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max) / scale
}

fn verify_integrals_float(cfg: &RunConfig) -> anyhow::Result<Verdict> {
    require_3d(cfg, "the (x, y, z) integrals")?;
    require_dims(cfg)?;
    let steps = cfg.steps.unwrap_or(50);
    let tol = cfg.tol.unwrap_or(1e-9);
    let mut rng = seeded(cfg.seed);
    // Start from exact data rounded once, so trials match the exact backend.
    let polys: Vec<TwistedPolygon<Rational>> = (0..cfg.trials.unwrap_or(10)).map(|_| random_twisted_polygon(3, cfg.n, &mut rng)).collect();
    let per_trial = polys
        .par_iter()
        .enumerate()
        .map(|(t, poly)| {
            let exact = xyz_geometric(poly)?;
            let f = |v: &[Rational]| v.iter().map(Scalar::to_f64).collect();
            let mut xyz = Xyz3 { x: f(&exact.x), y: f(&exact.y), z: f(&exact.z) };
            let first = integrals_xyz_f64(&xyz)?;
            let mut rows = Vec::with_capacity(steps);
            for step in 1..=steps {
                xyz = explicit_step(&xyz)?;
                let drift = rel_drift(&first, &integrals_xyz_f64(&xyz)?);
                rows.push((format!("{t},{step},{drift:e}"), drift <= tol));
            }
            Ok(rows)
        })
        .collect::<Result<Vec<_>, Error>>()?;
    finish(cfg, "trial,step,relative_drift", per_trial.into_iter().flatten().collect(), "conservation of integrals")
}

fn verify_duality<S: Scalar>(cfg: &RunConfig) -> anyhow::Result<Verdict> {
    require_dims(cfg)?;
    let tol = cfg.tol.unwrap_or(1e-9);
    let mut rng = seeded(cfg.seed);
    let polys: Vec<TwistedPolygon<S>> = (0..cfg.trials.unwrap_or(10)).map(|_| random_twisted_polygon(cfg.d, cfg.n, &mut rng)).collect();
    let rows = polys
        .par_iter()
        .enumerate()
        .map(|(t, poly)| {
            let (defect, shift) = duality_defect(poly, cfg.p, cfg.r)?;
            Ok((format!("{t},{},{},{},{},{}", cfg.d, cfg.p, cfg.r, shift, residual(&defect)), within(&defect, tol)))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    finish(cfg, "trial,d,p,r,shift,defect", rows, "duality")
}

fn verify_scaling<S: Scalar>(cfg: &RunConfig, scales: &str) -> anyhow::Result<Verdict> {
    // Coefficient sequences need no general-position room, only a period.
    if cfg.d < 2 || cfg.n == 0 {
        bail!(config(format!("need d >= 2 and n >= 1, got d = {}, n = {}", cfg.d, cfg.n)));
    }
    let tol = cfg.tol.unwrap_or(1e-8);
    let scales = scales
        .split(',')
        .map(|s| parse_scalar::<S>(s).filter(|v| !v.is_zero()).ok_or_else(|| config(format!("bad scale factor {s:?}"))))
        .collect::<anyhow::Result<Vec<S>>>()?;
    let mut rng = seeded(cfg.seed);
    let mut redrawn = 0;
    let mut rows = Vec::new();
    for t in 0..cfg.trials.unwrap_or(10) {
        for s in &scales {
            let defect = loop {
                let c = random_coeffs::<S>(cfg.d, cfg.n, &mut rng);
                match scaling_invariance_defect(&c, s) {
                    Ok(v) => break v,
                    Err(e) if redrawn < MAX_REDRAWS => {
                        warn!("trial {t}: degenerate draw redrawn ({e})");
                        redrawn += 1;
                    }
                    Err(e) => return Err(e.into()),
                }
            };
            rows.push((format!("{t},{},{}", format_scalar(s), residual(&defect)), within(&defect, tol)));
        }
    }
    finish(cfg, "trial,s,defect", rows, "scaling invariance")
}

/// Compares every odd weight `w` with the spectral integral of index
/// `q - (w - 1) / 2`.
fn verify_codes<S: Scalar>(cfg: &RunConfig) -> anyhow::Result<Verdict> {
    require_3d(cfg, "the code expansion")?;
    require_odd(cfg, "the code expansion")?;
    require_dims(cfg)?;
    let tol = cfg.tol.unwrap_or(1e-9);
    let q = cfg.n / 2;
    let mut rng = seeded(cfg.seed);
    let draws: Vec<_> = (0..cfg.trials.unwrap_or(10)).map(|_| random_coeffs::<S>(3, cfg.n, &mut rng)).collect();
    let per_trial = draws
        .par_iter()
        .enumerate()
        .map(|(t, c)| {
            let abc = Abc3::from_coeffs(c)?;
            let ints = extract_integrals(&spectral_function_abc(&abc))?;
            let mut rows = Vec::new();
            for w in (1..=cfg.n).step_by(2) {
                let idx = q - (w - 1) / 2;
                let (ih, gh) = code_integrals(&abc, w)?;
                let (di, dg) = (ih - ints.i[idx].clone(), gh - ints.g[idx].clone());
                let scale = 1.0 + ints.i[idx].to_f64().abs().max(ints.g[idx].to_f64().abs());
                let ok = within(&di, tol * scale) && within(&dg, tol * scale);
                rows.push((format!("{t},{w},{idx},{},{}", residual(&di), residual(&dg)), ok));
            }
            Ok(rows)
        })
        .collect::<Result<Vec<_>, Error>>()?;
    finish(cfg, "trial,weight,index,I_defect,G_defect", per_trial.into_iter().flatten().collect(), "admissible codes")
}

fn verify_closed<S: Scalar>(cfg: &RunConfig) -> anyhow::Result<Verdict> {
    require_3d(cfg, "the closedness conditions")?;
    require_odd(cfg, "the (a, b, c) spectral function")?;
    require_dims(cfg)?;
    let tol = cfg.tol.unwrap_or(1e-9);
    let mut rng = seeded(cfg.seed);
    let polys: Vec<TwistedPolygon<S>> = (0..cfg.trials.unwrap_or(10)).map(|_| random_closed_polygon(3, cfg.n, &mut rng)).collect();
    let rows = polys
        .par_iter()
        .enumerate()
        .map(|(t, poly)| {
            let r = spectral_function_abc(&abc_from_polygon(poly)?);
            let rep = closedness_residuals(&r);
            let ok = if S::EXACT {
                rep.quadruple_point() && rep.identity.iter().all(Scalar::is_zero)
            } else {
                let scale = 1.0 + r.coeffs.iter().map(|c| c.max_abs_coeff().to_f64()).fold(0.0, f64::max);
                let worst = max_abs(&rep.at_plus).min(max_abs(&rep.at_minus)).max(max_abs(&rep.identity));
                worst <= tol * scale
            };
            let row = format!(
                "{t},{},{},{},{}",
                magnitude(max_abs(&rep.at_plus)),
                magnitude(max_abs(&rep.at_minus)),
                residual(&rep.identity[0]),
                residual(&rep.identity[1])
            );
            Ok((row, ok))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    finish(cfg, "trial,max_residual_plus,max_residual_minus,identity_plus,identity_minus", rows, "closed polygons")
}

fn genus(cfg: &RunConfig) -> anyhow::Result<Verdict> {
    if cfg.backend != Backend::Exact {
        bail!(config("the branch census needs the exact backend"));
    }
    if cfg.n < 5 {
        bail!(config(format!("genus census needs n >= 5, got {}", cfg.n)));
    }
    let mut rng = seeded(cfg.seed);
    let mut rows = Vec::new();
    for t in 0..cfg.trials.unwrap_or(1) {
        let start = Instant::now();
        let bc = finite_branch_count(&spectral_function_xyz_unscaled(&random_xyz::<Rational>(cfg.n, &mut rng))?)?;
        info!("census {t} took {:.1?}", start.elapsed());
        let expect = expected_genus(cfg.n);
        eprintln!("n = {}: nu_fin = {}, g = {} (expected {expect})", cfg.n, bc.nu_fin, bc.genus);
        let ok = bc.nu_fin == 3 * cfg.n && bc.genus == expect;
        rows.push((format!("{t},{},{},{},{},{}", cfg.n, bc.nu_fin, bc.genus, expect, bc.squarefree), ok));
    }
    finish(cfg, "trial,n,nu_fin,genus,expected_genus,squarefree", rows, "genus census")
}

fn continuum(cfg: &RunConfig, offsets: Option<&str>, grid: usize) -> anyhow::Result<Verdict> {
    if cfg.d < 2 {
        bail!(config(format!("continuum needs d >= 2, got {}", cfg.d)));
    }
    if grid < 8 {
        bail!(config("grid needs at least 8 points"));
    }
    let offsets: Vec<f64> = match offsets {
        None => symmetric_offsets(cfg.d),
        Some(s) => s.split(',').map(|v| v.trim().parse::<f64>().map_err(|_| config(format!("bad offset {v:?}")))).collect::<anyhow::Result<_>>()?,
    };
    if offsets.len() != cfg.d || offsets.iter().sum::<f64>().abs() > 1e-12 {
        bail!(config(format!("need {} offsets summing to zero", cfg.d)));
    }
    let tol = cfg.tol.unwrap_or(0.01);
    let start = Instant::now();
    let op = CurveOperator::standard(cfg.d)?;
    let samples = fundamental_solutions(&op, grid)?;
    let eps = epsilon_grid();
    let family = envelope_family(&samples, &eps, &offsets)?;
    let fit = fit_epsilon2(&samples, &family, 1e-3)?;
    let predicted = predicted_constant(&offsets);
    let mut report = String::new();
    let _ = writeln!(report, "d = {}", cfg.d);
    let _ = writeln!(report, "offsets = {offsets:?}");
    let _ = writeln!(report, "C_d estimate = {:.6}", fit.c_d);
    let _ = writeln!(report, "C_d predicted = {predicted:.6}");
    let _ = writeln!(report, "fit residual = {:.3e}", fit.residual);
    let _ = writeln!(report, "remainder order = {}", fit.remainder_order);
    let mut ok = (fit.c_d - predicted).abs() <= tol * predicted.abs();
    if cfg.d == 3 && is_symmetric(&offsets) {
        let kdv = kdv24_drift_check(&samples, &family, 1.0 / 6.0)?;
        let _ = writeln!(report, "(2,4)-KdV residuals = {:.3e}, {:.3e}, {:.3e}", kdv.residuals[0], kdv.residuals[1], kdv.residuals[2]);
        ok &= kdv.residuals.iter().all(|r| *r < 0.02);
    }
    report.push_str(&sweep_csv(&epsilon_sweep(&samples, &family)));
    print!("{report}");
    info!("continuum run took {:.1?}", start.elapsed());
    if let Some(dir) = cfg.out.as_deref() {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let csv = continuum_csv(&samples, &family[0], &fit, &predicted_direction(&samples));
        emit(Some(&dir.join("continuum.csv")), &csv)?;
        emit(Some(&dir.join("sweep.csv")), &sweep_csv(&epsilon_sweep(&samples, &family)))?;
    }
    if ok {
        Ok(Verdict::Pass)
    } else {
        Ok(Verdict::Violation(format!("C_d estimate {:.6} vs predicted {predicted:.6}", fit.c_d)))
    }
}
