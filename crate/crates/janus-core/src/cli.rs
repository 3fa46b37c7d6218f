//! Command-line surface of the `janus` binary.
//!
//! Subcommands: `gsp table` (polynomial coefficient table), `moments` and
//! `gk` (photon statistics of a spec file), `wigner` (phase-space grids),
//! `qfi` (quantum Fisher information), `scan` (1D/2D parameter sweeps) and
//! `selftest` (seeded closed-form vs oracle audit).
//!
//! Conventions shared by all subcommands: specs are flat JSON files and are
//! weight-normalized on ingestion; JSON output is a single compact line;
//! tabular output is CSV with `#`-prefixed meta lines (suppressed by
//! `--no-meta`); `--out` redirects the payload to a file; `--oracle`
//! appends an independent Fock-oracle cross-check where one is defined;
//! `--dump-spec` embeds the normalized spec in the output.  The
//! `JANUS_CUTOFF` environment variable overrides the oracle cutoff
//! heuristic.  Exit codes: 0 success, 1 usage or I/O error, 2 numerical
//! failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use num::complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::JanusError;
use crate::fock_oracle;
use crate::gsp;
use crate::metrology::{self, FidelityParameter, QfiResult};
use crate::moments;
use crate::params::{polar_displacement, JanusSpec, SqueezeParam};
use crate::wigner;

#[derive(Parser)]
#[command(
    name = "janus",
    version,
    about = "Photon statistics, Wigner functions, and QFI of displaced Janus states"
)]
struct Cli {
    /// Append an independent Fock-oracle cross-check to the output.
    #[arg(long, global = true)]
    oracle: bool,

    /// Embed the normalized spec in the output.
    #[arg(long, global = true)]
    dump_spec: bool,

    /// Suppress `#` meta lines in tabular output.
    #[arg(long, global = true)]
    no_meta: bool,

    /// Write the payload to a file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generalized squeezing polynomial utilities.
    Gsp {
        #[command(subcommand)]
        command: GspCommand,
    },
    /// Photon moment ⟨a†ᵏaᵏ⟩ of a spec.
    Moments {
        /// Spec file (flat JSON).
        #[arg(long, value_name = "FILE")]
        spec: PathBuf,
        /// Moment order.
        #[arg(long)]
        k: u32,
    },
    /// Correlation function g⁽ᵏ⁾(0) of a spec.
    Gk {
        /// Spec file (flat JSON).
        #[arg(long, value_name = "FILE")]
        spec: PathBuf,
        /// Correlation order.
        #[arg(long)]
        k: u32,
    },
    /// Wigner function on a square grid around the displacement center.
    Wigner {
        /// Spec file (flat JSON).
        #[arg(long, value_name = "FILE")]
        spec: PathBuf,
        /// Half-width of the grid (default: six standard deviations).
        #[arg(long)]
        extent: Option<f64>,
        /// Grid spacing (default: extent/150).
        #[arg(long)]
        step: Option<f64>,
        /// Emit mixture, interference, and total sections.
        #[arg(long)]
        decompose: bool,
    },
    /// Quantum Fisher information of a spec.
    Qfi {
        /// Spec file (flat JSON).
        #[arg(long, value_name = "FILE")]
        spec: PathBuf,
        /// Probe parameter.
        #[arg(long, value_enum)]
        parameter: QfiParamArg,
        /// Use the fidelity-based numeric route where available.
        #[arg(long)]
        numeric: bool,
        /// Finite-difference step for the numeric route.
        #[arg(long, default_value_t = 1e-3)]
        dl: f64,
        /// Generator phase θ_g for `gsq`.
        #[arg(long, default_value_t = 0.0)]
        theta_g: f64,
    },
    /// Sweep a quantity over one or two spec axes.
    Scan {
        /// Quantity: gk:K, moment:K, wigner_min, qfi_dphase, qfi_sangle.
        #[arg(long)]
        quantity: String,
        /// Outer axis as name:start:stop:count.
        #[arg(long)]
        axis1: String,
        /// Optional inner axis as name:start:stop:count.
        #[arg(long)]
        axis2: Option<String>,
        /// Base spec file; defaults to the antisymmetric state at r = 0.5.
        #[arg(long, value_name = "FILE")]
        spec: Option<PathBuf>,
        /// Override the base squeezing magnitude r.
        #[arg(long)]
        r: Option<f64>,
        /// Override the base squeezing phase θ.
        #[arg(long)]
        theta: Option<f64>,
        /// Override the base squeezing magnitude s.
        #[arg(long)]
        s: Option<f64>,
        /// Override the base squeezing phase φ.
        #[arg(long)]
        phi: Option<f64>,
        /// Override the base displacement magnitude |α|.
        #[arg(long)]
        alpha_mag: Option<f64>,
        /// Override the base displacement phase arg α.
        #[arg(long)]
        alpha_phase: Option<f64>,
        /// Override the base weight ratio |χ/η|.
        #[arg(long)]
        weight_ratio: Option<f64>,
    },
    /// Seeded audit of every closed form against the Fock oracle.
    Selftest,
}

#[derive(Subcommand)]
enum GspCommand {
    /// CSV table of polynomial core coefficients for p, q ≤ max.
    Table {
        /// Largest index on both axes.
        #[arg(long, default_value_t = 8)]
        max: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum QfiParamArg {
    /// Displacement phase (closed form 4 Var n̂).
    Dphase,
    /// Co-rotating squeezing angle.
    Sangle,
    /// Quadratic generator ½(e^{−iθ_g}a² + h.c.).
    Gsq,
}

enum CliError {
    Usage(String),
    Compute(JanusError),
}

impl From<JanusError> for CliError {
    fn from(e: JanusError) -> Self {
        CliError::Compute(e)
    }
}

struct Output {
    text: String,
    code: i32,
}

impl Output {
    fn ok(text: String) -> Self {
        Self { text, code: 0 }
    }
}

/// Entry point for the binary: parses `std::env::args_os` and writes to
/// stdout.
pub fn main_entry() -> i32 {
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    run_with(std::env::args_os(), &mut lock)
}

/// Runs the CLI against explicit arguments and an explicit output stream;
/// returns the process exit code.  Errors and usage text go to stderr.
pub fn run_with<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    eprint!("{e}");
                    1
                }
            };
        }
    };
    match dispatch(&cli) {
        Ok(output) => {
            if let Some(path) = &cli.out {
                if let Err(e) = fs::write(path, output.text.as_bytes()) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return 1;
                }
            } else if out.write_all(output.text.as_bytes()).is_err() {
                return 1;
            }
            output.code
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(CliError::Compute(e)) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Gsp { command } => {
            reject_oracle(cli, "gsp")?;
            let GspCommand::Table { max } = command;
            Ok(Output::ok(gsp_table(*max, cli.no_meta)))
        }
        Command::Moments { spec, k } => {
            let spec = load_spec(spec)?;
            moments_json(&spec, *k, false, cli)
        }
        Command::Gk { spec, k } => {
            let spec = load_spec(spec)?;
            moments_json(&spec, *k, true, cli)
        }
        Command::Wigner {
            spec,
            extent,
            step,
            decompose,
        } => {
            let spec = load_spec(spec)?;
            wigner_csv(&spec, *extent, *step, *decompose, cli)
        }
        Command::Qfi {
            spec,
            parameter,
            numeric,
            dl,
            theta_g,
        } => {
            let spec = load_spec(spec)?;
            qfi_json(&spec, *parameter, *numeric, *dl, *theta_g, cli)
        }
        Command::Scan {
            quantity,
            axis1,
            axis2,
            spec,
            r,
            theta,
            s,
            phi,
            alpha_mag,
            alpha_phase,
            weight_ratio,
        } => {
            reject_oracle(cli, "scan")?;
            let mut base = match spec {
                Some(path) => load_spec(path)?,
                None => JanusSpec::antisymmetric(0.5, Complex64::ZERO),
            };
            if let Some(v) = r {
                base.xi = SqueezeParam::new(*v, base.xi.theta());
            }
            if let Some(v) = theta {
                base.xi = SqueezeParam::new(base.xi.r(), *v);
            }
            if let Some(v) = s {
                base.zeta = SqueezeParam::new(*v, base.zeta.theta());
            }
            if let Some(v) = phi {
                base.zeta = SqueezeParam::new(base.zeta.r(), *v);
            }
            if let Some(v) = alpha_mag {
                base.alpha = polar_displacement(*v, base.alpha.arg());
            }
            if let Some(v) = alpha_phase {
                base.alpha = polar_displacement(base.alpha.norm(), *v);
            }
            if let Some(v) = weight_ratio {
                base.set_weight_ratio(*v);
            }
            let scan_spec = ScanSpec {
                base,
                quantity: quantity.parse().map_err(CliError::Usage)?,
                axis1: axis1.parse().map_err(CliError::Usage)?,
                axis2: axis2
                    .as_ref()
                    .map(|a| a.parse().map_err(CliError::Usage))
                    .transpose()?,
            };
            Ok(Output::ok(scan_csv(&scan_spec, cli)))
        }
        Command::Selftest => {
            reject_oracle(cli, "selftest")?;
            Ok(selftest())
        }
    }
}

fn reject_oracle(cli: &Cli, what: &str) -> Result<(), CliError> {
    if cli.oracle {
        return Err(CliError::Usage(format!(
            "--oracle is not available for `{what}`"
        )));
    }
    Ok(())
}

/// Reads, parses, and weight-normalizes a spec file.
fn load_spec(path: &PathBuf) -> Result<JanusSpec, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let spec: JanusSpec = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("bad spec {}: {e}", path.display())))?;
    Ok(spec.normalized()?)
}

fn spec_json(spec: &JanusSpec) -> serde_json::Value {
    serde_json::to_value(spec).expect("spec serialization is infallible")
}

// ---------------------------------------------------------------- gsp table

fn gsp_table(max: u32, no_meta: bool) -> String {
    let mut text = String::new();
    if !no_meta {
        let _ = writeln!(text, "# janus gsp table");
        let _ = writeln!(text, "# max = {max}");
    }
    let _ = writeln!(text, "p,q,coeffs");
    for p in 0..=max {
        for q in 0..=max {
            if (p + q) % 2 != 0 {
                continue;
            }
            let _ = writeln!(text, "{p},{q},{}", gsp::poly(p, q).coeff_line());
        }
    }
    text
}

// ------------------------------------------------------------- moments / gk

fn moments_json(spec: &JanusSpec, k: u32, as_gk: bool, cli: &Cli) -> Result<Output, CliError> {
    let mk = moments::janus_moment(k, spec)?;
    let (value, residual) = if as_gk {
        let m1 = moments::janus_moment(1, spec)?;
        if m1.value < 1e-12 {
            return Err(JanusError::VacuumState { n1: m1.value }.into());
        }
        (
            mk.value / m1.value.powi(k as i32),
            mk.branch_residual.max(m1.branch_residual),
        )
    } else {
        (mk.value, mk.branch_residual)
    };
    let mut obj = serde_json::json!({
        "k": k,
        "value": value,
        "branch_residual": residual,
    });
    if cli.oracle {
        let (v, _) = fock_oracle::build_janus_fock_auto(spec)?;
        let oracle = if as_gk {
            fock_oracle::moment_fock(&v, k) / fock_oracle::moment_fock(&v, 1).powi(k as i32)
        } else {
            fock_oracle::moment_fock(&v, k)
        };
        obj["oracle_value"] = oracle.into();
        obj["abs_diff"] = (value - oracle).abs().into();
    }
    if cli.dump_spec {
        obj["spec"] = spec_json(spec);
    }
    Ok(Output::ok(format!("{obj}\n")))
}

// ----------------------------------------------------------------- wigner

fn write_grid_section(text: &mut String, grid: &wigner::WignerGrid) {
    let _ = writeln!(text, "q,p,w");
    let np = grid.ps.len();
    for (iq, q) in grid.qs.iter().enumerate() {
        for (ip, p) in grid.ps.iter().enumerate() {
            let _ = writeln!(text, "{q},{p},{}", grid.values[iq * np + ip]);
        }
    }
}

fn wigner_csv(
    spec: &JanusSpec,
    extent: Option<f64>,
    step: Option<f64>,
    decompose: bool,
    cli: &Cli,
) -> Result<Output, CliError> {
    let extent = extent.unwrap_or_else(|| wigner::default_extent(spec));
    let step = step.unwrap_or_else(|| wigner::default_step(extent));
    if !(extent > 0.0) || !(step > 0.0) {
        return Err(CliError::Usage("extent and step must be positive".into()));
    }
    let parts = wigner::wigner_grid_parts(spec, extent, step)?;

    let mut text = String::new();
    if !cli.no_meta {
        let _ = writeln!(text, "# janus wigner");
        let _ = writeln!(text, "# extent = {extent}");
        let _ = writeln!(text, "# step = {step}");
    }
    if decompose {
        for (name, grid) in [
            ("mixture", &parts.mixture),
            ("interference", &parts.interference),
            ("total", &parts.total),
        ] {
            let _ = writeln!(text, "# part: {name}");
            write_grid_section(&mut text, grid);
        }
    } else {
        write_grid_section(&mut text, &parts.total);
    }

    let total = &parts.total;
    let mut summary = serde_json::json!({
        "integral": total.integral,
        "min_value": total.min_value,
        "min_q": total.min_q,
        "min_p": total.min_p,
        "negativity_volume": total.negativity_volume,
    });
    if cli.oracle {
        let (v, _) = fock_oracle::build_janus_fock_auto(spec)?;
        let oracle = fock_oracle::wigner_fock(&v, total.min_q, total.min_p);
        summary["oracle_value"] = oracle.into();
        summary["abs_diff"] = (total.min_value - oracle).abs().into();
    }
    if cli.dump_spec {
        summary["spec"] = spec_json(spec);
    }
    let _ = writeln!(text, "# summary {summary}");
    Ok(Output::ok(text))
}

// -------------------------------------------------------------------- qfi

fn qfi_json(
    spec: &JanusSpec,
    parameter: QfiParamArg,
    numeric: bool,
    dl: f64,
    theta_g: f64,
    cli: &Cli,
) -> Result<Output, CliError> {
    if !(dl > 0.0) {
        return Err(CliError::Usage("--dl must be positive".into()));
    }
    let result: QfiResult = match (parameter, numeric) {
        (QfiParamArg::Dphase, false) => metrology::qfi_displacement_phase(spec)?,
        (QfiParamArg::Dphase, true) => {
            metrology::fidelity_qfi(spec, FidelityParameter::DisplacementPhase, dl, None)?
        }
        (QfiParamArg::Sangle, false) => QfiResult {
            parameter: metrology::QfiParameter::SqueezingAngle,
            method: metrology::QfiMethod::Expansion,
            value: metrology::qfi_squeezing_angle_leading(spec.xi.r()),
            sensitivity: None,
        },
        (QfiParamArg::Sangle, true) => {
            metrology::fidelity_qfi(spec, FidelityParameter::SqueezingAngle, dl, None)?
        }
        // The quadratic generator has no fidelity family here; both routes
        // evaluate 4 Var(G) on the oracle.
        (QfiParamArg::Gsq, _) => metrology::qfi_gsq(spec, theta_g, None)?,
    };
    let mut obj = serde_json::json!({
        "parameter": result.parameter.label(),
        "method": result.method.label(),
        "value": result.value,
        "sensitivity": result.sensitivity,
    });
    if cli.oracle {
        let oracle = match parameter {
            QfiParamArg::Dphase => {
                let (v, _) = fock_oracle::build_janus_fock_auto(spec)?;
                4.0 * v.var_n()
            }
            QfiParamArg::Sangle => {
                metrology::fidelity_qfi(spec, FidelityParameter::SqueezingAngle, 5e-3, None)?.value
            }
            QfiParamArg::Gsq => {
                let cutoff = fock_oracle::cutoff_heuristic(spec.max_r(), spec.alpha.norm());
                4.0 * metrology::var_gsq(spec, theta_g, Some(cutoff * 3 / 2))?
            }
        };
        obj["oracle_value"] = oracle.into();
        obj["abs_diff"] = (result.value - oracle).abs().into();
    }
    if cli.dump_spec {
        obj["spec"] = spec_json(spec);
    }
    Ok(Output::ok(format!("{obj}\n")))
}

// -------------------------------------------------------------------- scan

/// One sweep axis: `count` evenly spaced values from `start` to `stop`.
#[derive(Clone, Copy, Debug)]
pub struct AxisSpec {
    pub axis: ScanAxis,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl AxisSpec {
    /// The sampled values (a singleton when count = 1).
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let h = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count).map(|i| self.start + i as f64 * h).collect()
    }
}

impl std::str::FromStr for AxisSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 4 {
            return Err(format!("axis `{s}` is not name:start:stop:count"));
        }
        let axis: ScanAxis = parts[0].parse()?;
        let parse_f = |x: &str, what: &str| {
            x.parse::<f64>()
                .map_err(|_| format!("bad {what} in axis `{s}`"))
        };
        let start = parse_f(parts[1], "start")?;
        let stop = parse_f(parts[2], "stop")?;
        let count: usize = parts[3]
            .parse()
            .ok()
            .filter(|&c| c >= 1)
            .ok_or_else(|| format!("bad count in axis `{s}`"))?;
        if !start.is_finite() || !stop.is_finite() {
            return Err(format!("non-finite bounds in axis `{s}`"));
        }
        Ok(Self {
            axis,
            start,
            stop,
            count,
        })
    }
}

/// Spec field driven by a sweep axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanAxis {
    R,
    S,
    Theta,
    Phi,
    AlphaMag,
    AlphaPhase,
    WeightRatio,
}

impl ScanAxis {
    /// Stable axis name as used on the command line and in CSV headers.
    pub fn label(&self) -> &'static str {
        match self {
            Self::R => "r",
            Self::S => "s",
            Self::Theta => "theta",
            Self::Phi => "phi",
            Self::AlphaMag => "alpha_mag",
            Self::AlphaPhase => "alpha_phase",
            Self::WeightRatio => "weight_ratio",
        }
    }

    /// Writes the axis value into the spec.
    pub fn apply(&self, spec: &mut JanusSpec, value: f64) {
        match self {
            Self::R => spec.xi = SqueezeParam::new(value, spec.xi.theta()),
            Self::Theta => spec.xi = SqueezeParam::new(spec.xi.r(), value),
            Self::S => spec.zeta = SqueezeParam::new(value, spec.zeta.theta()),
            Self::Phi => spec.zeta = SqueezeParam::new(spec.zeta.r(), value),
            Self::AlphaMag => spec.alpha = polar_displacement(value, spec.alpha.arg()),
            Self::AlphaPhase => spec.alpha = polar_displacement(spec.alpha.norm(), value),
            Self::WeightRatio => spec.set_weight_ratio(value),
        }
    }
}

impl std::str::FromStr for ScanAxis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "r" => Self::R,
            "s" => Self::S,
            "theta" => Self::Theta,
            "phi" => Self::Phi,
            "alpha_mag" => Self::AlphaMag,
            "alpha_phase" => Self::AlphaPhase,
            "weight_ratio" => Self::WeightRatio,
            _ => return Err(format!("unknown axis `{s}`")),
        })
    }
}

/// Quantity evaluated in each scan cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanQuantity {
    Gk(u32),
    Moment(u32),
    WignerMin,
    QfiDphase,
    QfiSangle,
}

impl ScanQuantity {
    /// Stable quantity name as used on the command line and in headers.
    pub fn label(&self) -> String {
        match self {
            Self::Gk(k) => format!("gk:{k}"),
            Self::Moment(k) => format!("moment:{k}"),
            Self::WignerMin => "wigner_min".into(),
            Self::QfiDphase => "qfi_dphase".into(),
            Self::QfiSangle => "qfi_sangle".into(),
        }
    }

    fn evaluate(&self, spec: &JanusSpec) -> crate::error::Result<f64> {
        match self {
            Self::Gk(k) => moments::gk(*k, spec),
            Self::Moment(k) => Ok(moments::janus_moment(*k, &spec.normalized()?)?.value),
            Self::WignerMin => {
                let spec = spec.normalized()?;
                let extent = wigner::default_extent(&spec);
                // Coarser than the wigner subcommand default: scans trade
                // pinpoint minima for cell count.
                Ok(wigner::wigner_grid(&spec, extent, extent / 60.0)?.min_value)
            }
            Self::QfiDphase => Ok(metrology::qfi_displacement_phase(spec)?.value),
            Self::QfiSangle => {
                Ok(metrology::fidelity_qfi(spec, FidelityParameter::SqueezingAngle, 1e-2, None)?
                    .value)
            }
        }
    }
}

impl std::str::FromStr for ScanQuantity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let order = |rest: &str| {
            rest.parse::<u32>()
                .map_err(|_| format!("bad order in quantity `{s}`"))
        };
        Ok(match s.split_once(':') {
            Some(("gk", rest)) => Self::Gk(order(rest)?),
            Some(("moment", rest)) => Self::Moment(order(rest)?),
            None if s == "wigner_min" => Self::WignerMin,
            None if s == "qfi_dphase" => Self::QfiDphase,
            None if s == "qfi_sangle" => Self::QfiSangle,
            _ => return Err(format!("unknown quantity `{s}`")),
        })
    }
}

/// A full sweep description.
#[derive(Clone, Debug)]
pub struct ScanSpec {
    pub base: JanusSpec,
    pub quantity: ScanQuantity,
    pub axis1: AxisSpec,
    pub axis2: Option<AxisSpec>,
}

/// Sweep results: one row per cell, axis1 outer, axis2 inner.
#[derive(Clone, Debug)]
pub struct ScanTable {
    pub rows: Vec<(f64, Option<f64>, f64)>,
    /// Cells that failed to evaluate (reported as NaN).
    pub warnings: usize,
}

/// Evaluates the sweep; failed cells yield NaN and are counted, never
/// aborting the sweep.
pub fn scan(spec: &ScanSpec) -> ScanTable {
    let v1 = spec.axis1.values();
    let v2 = spec.axis2.map(|a| a.values());
    let cells: Vec<(f64, Option<f64>)> = match &v2 {
        Some(inner) => v1
            .iter()
            .flat_map(|&a| inner.iter().map(move |&b| (a, Some(b))))
            .collect(),
        None => v1.iter().map(|&a| (a, None)).collect(),
    };
    let values: Vec<f64> = cells
        .par_iter()
        .map(|&(a, b)| {
            let mut cell_spec = spec.base;
            spec.axis1.axis.apply(&mut cell_spec, a);
            if let (Some(axis2), Some(bv)) = (&spec.axis2, b) {
                axis2.axis.apply(&mut cell_spec, bv);
            }
            spec.quantity.evaluate(&cell_spec).unwrap_or(f64::NAN)
        })
        .collect();
    let warnings = values.iter().filter(|v| v.is_nan()).count();
    ScanTable {
        rows: cells
            .into_iter()
            .zip(values)
            .map(|((a, b), v)| (a, b, v))
            .collect(),
        warnings,
    }
}

fn scan_csv(spec: &ScanSpec, cli: &Cli) -> String {
    let table = scan(spec);
    let mut text = String::new();
    if !cli.no_meta {
        let _ = writeln!(text, "# janus scan");
        let _ = writeln!(text, "# quantity = {}", spec.quantity.label());
    }
    match &spec.axis2 {
        Some(a2) => {
            let _ = writeln!(
                text,
                "{},{},{}",
                spec.axis1.axis.label(),
                a2.axis.label(),
                spec.quantity.label()
            );
            for (a, b, v) in &table.rows {
                let _ = writeln!(text, "{a},{},{v}", b.unwrap());
            }
        }
        None => {
            let _ = writeln!(text, "{},{}", spec.axis1.axis.label(), spec.quantity.label());
            for (a, _, v) in &table.rows {
                let _ = writeln!(text, "{a},{v}");
            }
        }
    }
    if cli.dump_spec {
        let _ = writeln!(text, "# spec {}", spec_json(&spec.base));
    }
    let _ = writeln!(text, "# warnings: {}", table.warnings);
    text
}

// ---------------------------------------------------------------- selftest

fn draw_spec(rng: &mut ChaCha8Rng) -> JanusSpec {
    loop {
        let spec = JanusSpec::new(
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
            SqueezeParam::new(
                rng.random_range(0.05..1.2),
                rng.random_range(0.0..std::f64::consts::TAU),
            ),
            SqueezeParam::new(
                rng.random_range(0.05..1.2),
                rng.random_range(0.0..std::f64::consts::TAU),
            ),
            Complex64::new(rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5)),
        );
        if spec.norm_form() > 1e-3 {
            return spec;
        }
    }
}

fn selftest() -> Output {
    let mut text = String::new();
    let mut all_ok = true;
    let mut report = |name: &str, detail: String, ok: bool| {
        all_ok &= ok;
        let verdict = if ok { "PASS" } else { "FAIL" };
        let _ = writeln!(text, "{name:<26} {detail:<40} {verdict}");
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0x4a41_4e55_53);

    // 1: frozen low-order table entries reproduce exactly.
    let frozen: &[(u32, u32, &[i64])] = &[
        (2, 2, &[0, 1, 2]),
        (3, 3, &[0, 0, 9, 6]),
        (5, 1, &[0, 0, 0, 15]),
        (4, 4, &[0, 0, 9, 72, 24]),
        (5, 5, &[0, 0, 0, 225, 600, 120]),
        (0, 4, &[3]),
    ];
    let table_ok = frozen.iter().all(|&(p, q, want)| {
        let got = gsp::poly(p, q);
        got.coeffs().len() == want.len()
            && got
                .coeffs()
                .iter()
                .zip(want)
                .all(|(c, &w)| c.is_integer() && *c.numer() == w.into())
    });
    report(
        "polynomial table",
        format!("{} frozen entries, exact", frozen.len()),
        table_ok,
    );

    // 2: reflection identity in exact arithmetic.
    let mut reflect_ok = true;
    for p in 0..=8u32 {
        for q in 0..=8u32 {
            if (p + q) % 2 == 0 {
                reflect_ok &= gsp::symmetry_residual(p, q).is_zero();
            }
        }
    }
    report(
        "reflection identity",
        "p, q <= 8, exact rational".into(),
        reflect_ok,
    );

    // 3: series vs closed form.
    let ctl = gsp::SeriesControl::default();
    let mut worst = 0.0f64;
    for _ in 0..60 {
        let p = rng.random_range(0..=6u32);
        let q = rng.random_range(0..=6u32);
        let z = Complex64::from_polar(
            rng.random_range(0.0..0.85),
            rng.random_range(0.0..std::f64::consts::TAU),
        );
        let series = match gsp::f_series(p, q, z, &ctl) {
            Ok(v) => v,
            Err(_) => {
                worst = f64::INFINITY;
                break;
            }
        };
        let closed = gsp::f_closed(p, q, z);
        worst = worst.max((series - closed).norm() / closed.norm().max(1.0));
    }
    report(
        "series vs closed",
        format!("60 draws, max rel {worst:.3e}, tol 1e-10"),
        worst < 1e-10,
    );

    // 4: closed moments vs Fock oracle.
    let mut worst = 0.0f64;
    let mut failed = false;
    for _ in 0..8 {
        let spec = match draw_spec(&mut rng).normalized() {
            Ok(s) => s,
            Err(_) => continue,
        };
        match fock_oracle::build_janus_fock_auto(&spec) {
            Ok((v, _)) => {
                for k in 1..=3 {
                    let closed = match moments::janus_moment(k, &spec) {
                        Ok(m) => m.value,
                        Err(_) => {
                            failed = true;
                            continue;
                        }
                    };
                    let oracle = fock_oracle::moment_fock(&v, k);
                    worst = worst.max((closed - oracle).abs() / oracle.abs().max(1.0));
                }
            }
            Err(_) => failed = true,
        }
    }
    report(
        "moments vs oracle",
        format!("8 specs, k <= 3, max rel {worst:.3e}, tol 1e-8"),
        !failed && worst < 1e-8,
    );

    // 5: conjugation symmetry of the cross element.
    let mut worst = 0.0f64;
    for _ in 0..8 {
        let spec = draw_spec(&mut rng);
        for k in 0..=4 {
            let fwd = moments::matrix_element(k, &spec.xi, &spec.zeta, spec.alpha);
            let rev = moments::matrix_element(k, &spec.zeta, &spec.xi, spec.alpha);
            match (fwd, rev) {
                (Ok(f), Ok(r)) => {
                    worst = worst.max((f.conj() - r).norm() / r.norm().max(1.0))
                }
                _ => worst = f64::INFINITY,
            }
        }
    }
    report(
        "element conjugation",
        format!("8 specs, k <= 4, max rel {worst:.3e}, tol 1e-12"),
        worst < 1e-12,
    );

    // 6: closed Wigner vs Fock oracle.
    let mut worst = 0.0f64;
    let mut failed = false;
    for _ in 0..4 {
        let spec = match draw_spec(&mut rng).normalized() {
            Ok(s) => s,
            Err(_) => continue,
        };
        let eval = match wigner::JanusWigner::new(&spec) {
            Ok(e) => e,
            Err(_) => {
                failed = true;
                continue;
            }
        };
        match fock_oracle::build_janus_fock_auto(&spec) {
            Ok((v, _)) => {
                for _ in 0..5 {
                    let q = rng.random_range(-2.5..2.5);
                    let p = rng.random_range(-2.5..2.5);
                    worst = worst.max((eval.evaluate(q, p) - fock_oracle::wigner_fock(&v, q, p)).abs());
                }
            }
            Err(_) => failed = true,
        }
    }
    report(
        "wigner vs oracle",
        format!("4 specs x 5 points, max abs {worst:.3e}, tol 1e-8"),
        !failed && worst < 1e-8,
    );

    // 7: fidelity route vs variance route for the displacement phase.
    let mut worst = 0.0f64;
    let mut failed = false;
    for _ in 0..3 {
        let spec = draw_spec(&mut rng);
        let closed = metrology::qfi_displacement_phase(&spec);
        let numeric = metrology::fidelity_qfi(&spec, FidelityParameter::DisplacementPhase, 1e-3, None);
        match (closed, numeric) {
            (Ok(c), Ok(n)) => {
                worst = worst.max((c.value - n.value).abs() / c.value.abs().max(1.0))
            }
            _ => failed = true,
        }
    }
    report(
        "qfi fidelity vs variance",
        format!("3 specs, max rel {worst:.3e}, tol 1e-3"),
        !failed && worst < 1e-3,
    );

    let _ = writeln!(text, "selftest: {}", if all_ok { "PASS" } else { "FAIL" });
    Output {
        text,
        code: if all_ok { 0 } else { 2 },
    }
}
