//! `hq`: command-line front end for the multipole checks in `hq-core`.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 a tolerance check failed.

mod config;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hq_core::angmom::{conservation_check, one_cycle_times};
use hq_core::angular::degeneracy_table;
use hq_core::energy::{k0_independence_scan, RadialMode};
use hq_core::output::{
    write_beta_csv, write_degeneracy_csv, write_deviation_csv, write_json, write_spin_csv,
};
use hq_core::radial::asymptotic_deviation_scan;
use hq_core::verify::{run_suite, Profile};
use hq_core::{FieldSpec, PhysicalSetup, Polarization, QuadratureSpec, Vec3};

use config::{parse_list, Config};

#[derive(Parser, Debug)]
#[command(
    name = "hq",
    version,
    about = "Multipole mode quantization checks",
    allow_negative_numbers = true
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Text,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        <Format as ValueEnum>::from_str(s, true)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Units {
    Natural,
    Si,
}

impl std::str::FromStr for Units {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        <Units as ValueEnum>::from_str(s, true)
    }
}

#[derive(Args, Debug)]
struct Global {
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// `key = value` file; flags given on the command line win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Unit system for epsilon0 and c [default: natural].
    #[arg(long, global = true, value_enum)]
    units: Option<Units>,
    /// Shorthand for `--units si`.
    #[arg(long, global = true, conflicts_with = "units")]
    si: bool,
    #[arg(long, global = true)]
    epsilon0: Option<f64>,
    #[arg(long, global = true)]
    c: Option<f64>,
    /// Sphere radius R.
    #[arg(long, global = true)]
    radius: Option<f64>,
    /// Quantization volume V.
    #[arg(long, global = true)]
    volume: Option<f64>,
    /// Field amplitude E0.
    #[arg(long, global = true)]
    e0: Option<f64>,
    #[arg(long, global = true)]
    theta_order: Option<usize>,
    #[arg(long, global = true)]
    phi_points: Option<usize>,
    #[arg(long, global = true)]
    radial_panels: Option<usize>,
    #[arg(long, global = true)]
    radial_order: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Degeneracy sums for n = 0..=n_max; exits 2 if any error exceeds --tol.
    #[command(allow_negative_numbers = true)]
    Degeneracy {
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Closed-form radial integral against its large-kR limit.
    #[command(allow_negative_numbers = true)]
    Radial {
        #[arg(long)]
        n_max: Option<usize>,
        /// Comma-separated, strictly ascending kR values.
        #[arg(long)]
        kr: Option<String>,
    },
    /// Band energy and recovered beta for a list of k0.
    #[command(allow_negative_numbers = true)]
    Energy {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        omega: Option<f64>,
        /// Comma-separated band starts.
        #[arg(long)]
        k0: Option<String>,
        /// numeric, closed or asymptotic.
        #[arg(long)]
        radial_mode: Option<String>,
    },
    /// Time samples of the intrinsic angular momentum over one cycle.
    #[command(allow_negative_numbers = true)]
    Angmom {
        #[arg(long)]
        n: Option<usize>,
        /// k R; the wavenumber is kr / radius.
        #[arg(long)]
        kr: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        polarization: Option<String>,
        /// Time samples per cycle.
        #[arg(long)]
        samples: Option<usize>,
        /// Propagation direction as x,y,z (normalized before use).
        #[arg(long, allow_hyphen_values = true)]
        khat: Option<String>,
    },
    /// Runs every acceptance check; exits 2 unless all pass.
    VerifyAll {
        /// quick or full.
        #[arg(long)]
        profile: Option<String>,
    },
}

/// Failure of a run, carrying its exit code.
enum Failure {
    Usage(String),
    Check,
}

impl From<hq_core::HqError> for Failure {
    fn from(e: hq_core::HqError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<String> for Failure {
    fn from(e: String) -> Self {
        Failure::Usage(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(1),
            };
        }
    };
    match init_threads().and_then(|_| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(2),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn init_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("HQ_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| format!("HQ_THREADS must be a positive integer, got `{v}`"))?;
    if n == 0 {
        return Err("HQ_THREADS must be a positive integer".to_string().into());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn setup_from(g: &Global, cfg: &Config) -> Result<PhysicalSetup, Failure> {
    let units = if g.si {
        Some(Units::Si)
    } else {
        cfg.pick(g.units, "units")?
    };
    let radius = cfg.pick(g.radius, "radius")?.unwrap_or(1.0);
    let volume = cfg.pick(g.volume, "volume")?.unwrap_or(1.0);
    let e0 = cfg.pick(g.e0, "e0")?.unwrap_or(1.0);
    let mut s = match units.unwrap_or(Units::Natural) {
        Units::Natural => PhysicalSetup::natural(radius, volume, e0),
        Units::Si => PhysicalSetup::si(radius, volume, e0),
    };
    if let Some(eps) = cfg.pick(g.epsilon0, "epsilon0")? {
        s.epsilon0 = eps;
    }
    if let Some(c) = cfg.pick(g.c, "c")? {
        s.c = c;
    }
    Ok(s.validate()?)
}

fn quadrature_from(g: &Global, cfg: &Config) -> Result<QuadratureSpec, Failure> {
    let d = QuadratureSpec::default();
    let spec = QuadratureSpec {
        theta_order: cfg
            .pick(g.theta_order, "theta-order")?
            .unwrap_or(d.theta_order),
        phi_points: cfg
            .pick(g.phi_points, "phi-points")?
            .unwrap_or(d.phi_points),
        radial_panels: cfg
            .pick(g.radial_panels, "radial-panels")?
            .unwrap_or(d.radial_panels),
        radial_order: cfg
            .pick(g.radial_order, "radial-order")?
            .unwrap_or(d.radial_order),
    };
    spec.validate()?;
    Ok(spec)
}

/// Quadrature for a mode of order `n`: the configured rule, raised to the
/// minimal exact angular rule unless the user fixed the angular sizes.
fn quadrature_for(g: &Global, cfg: &Config, n: usize) -> Result<QuadratureSpec, Failure> {
    let mut spec = quadrature_from(g, cfg)?;
    let min = QuadratureSpec::sufficient_for(n);
    if cfg.pick(g.theta_order, "theta-order")?.is_none() {
        spec.theta_order = spec.theta_order.max(min.theta_order);
    }
    if cfg.pick(g.phi_points, "phi-points")?.is_none() {
        spec.phi_points = spec.phi_points.max(min.phi_points);
    }
    Ok(spec)
}

fn parse_khat(s: &str) -> Result<Vec3, Failure> {
    let v = parse_list(s)?;
    if v.len() != 3 {
        return Err(format!("khat needs three components, got {}", v.len()).into());
    }
    let k = Vec3::new(v[0], v[1], v[2]);
    if !(k.norm() > 0.0) || !k.norm().is_finite() {
        return Err("khat must be a finite non-zero vector".to_string().into());
    }
    Ok(k.normalized())
}

fn sink(path: Option<&PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| format!("cannot create {}: {e}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> Result<(), Failure> {
    let g = &cli.global;
    let cfg = match &g.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let output = cfg.pick(g.output.clone(), "output")?;
    let format = cfg.pick(g.format, "format")?;
    let mut out = sink(output.as_ref())?;

    let status = match &cli.command {
        Command::Degeneracy { n_max, tol } => {
            let n_max = cfg.pick(*n_max, "n-max")?.unwrap_or(20);
            let tol = cfg
                .pick(*tol, "tol")?
                .unwrap_or(hq_core::verify::TOL_DEGENERACY);
            if !(tol >= 0.0) {
                return Err(format!("tol must be non-negative, got {tol}").into());
            }
            let rows = degeneracy_table(n_max)?;
            match format.unwrap_or(Format::Csv) {
                Format::Csv => write_degeneracy_csv(&rows, &mut out)?,
                Format::Json => write_json(&rows, &mut out)?,
                Format::Text => {
                    return Err("text format is only available for verify-all"
                        .to_string()
                        .into())
                }
            }
            if rows.iter().all(|r| r.error <= tol) {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
        Command::Radial { n_max, kr } => {
            let n_max = cfg.pick(*n_max, "n-max")?.unwrap_or(10);
            let kr = cfg
                .pick(kr.clone(), "kr")?
                .unwrap_or_else(|| "1e2,1e3,1e4,1e5".into());
            let rows = asymptotic_deviation_scan(n_max, &parse_list(&kr)?)?;
            match format.unwrap_or(Format::Csv) {
                Format::Csv => write_deviation_csv(&rows, &mut out)?,
                Format::Json => write_json(&rows, &mut out)?,
                Format::Text => {
                    return Err("text format is only available for verify-all"
                        .to_string()
                        .into())
                }
            }
            Ok(())
        }
        Command::Energy {
            n,
            omega,
            k0,
            radial_mode,
        } => {
            let n = cfg.pick(*n, "n")?.unwrap_or(0);
            let omega = cfg.pick(*omega, "omega")?.unwrap_or(1.0);
            let k0 = cfg
                .pick(k0.clone(), "k0")?
                .unwrap_or_else(|| "1,10,100".into());
            let mode: RadialMode = cfg
                .pick(radial_mode.clone(), "radial-mode")?
                .unwrap_or_else(|| "asymptotic".into())
                .parse()
                .map_err(|e: hq_core::HqError| e.to_string())?;
            let setup = setup_from(g, &cfg)?;
            let spec = quadrature_for(g, &cfg, n)?;
            let report = k0_independence_scan(n, omega, &parse_list(&k0)?, &setup, mode, &spec)?;
            match format.unwrap_or(Format::Json) {
                Format::Csv => write_beta_csv(&report, &mut out)?,
                Format::Json => write_json(&report, &mut out)?,
                Format::Text => {
                    return Err("text format is only available for verify-all"
                        .to_string()
                        .into())
                }
            }
            Ok(())
        }
        Command::Angmom {
            n,
            kr,
            polarization,
            samples,
            khat,
        } => {
            let n = cfg.pick(*n, "n")?.unwrap_or(1);
            let kr = cfg.pick(*kr, "kr")?.unwrap_or(10.0);
            let pol: Polarization = cfg
                .pick(polarization.clone(), "polarization")?
                .unwrap_or_else(|| "circular+".into())
                .parse()
                .map_err(|e: hq_core::HqError| e.to_string())?;
            let samples = cfg.pick(*samples, "samples")?.unwrap_or(8);
            if samples == 0 {
                return Err("samples must be at least 1".to_string().into());
            }
            let khat = match cfg.pick(khat.clone(), "khat")? {
                Some(s) => parse_khat(&s)?,
                None => Vec3::new(0.0, 0.0, 1.0),
            };
            let setup = setup_from(g, &cfg)?;
            if !(kr > 0.0) || !kr.is_finite() {
                return Err(format!("kr must be positive and finite, got {kr}").into());
            }
            let k = kr / setup.radius;
            let fs = FieldSpec::new(n, k, setup.e0, pol, khat)?;
            let spec = quadrature_for(g, &cfg, n)?;
            let times = one_cycle_times(fs.omega(setup.c), samples);
            let report = conservation_check(&fs, &setup, setup.radius, &times, &spec)?;
            match format.unwrap_or(Format::Json) {
                Format::Csv => write_spin_csv(&report, &mut out)?,
                Format::Json => write_json(&report, &mut out)?,
                Format::Text => {
                    return Err("text format is only available for verify-all"
                        .to_string()
                        .into())
                }
            }
            Ok(())
        }
        Command::VerifyAll { profile } => {
            let profile: Profile = cfg
                .pick(profile.clone(), "profile")?
                .unwrap_or_else(|| "full".into())
                .parse()?;
            let summary = run_suite(profile);
            match format.unwrap_or(Format::Text) {
                Format::Text => out.write_all(summary.render().as_bytes())?,
                Format::Json => write_json(&summary, &mut out)?,
                Format::Csv => {
                    return Err("verify-all supports text and json output"
                        .to_string()
                        .into())
                }
            }
            if summary.all_passed {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
    };
    out.flush()?;
    status
}
