//! Command-line front end for the verification engine.
//!
//! Every subcommand builds a [`RunConfig`], executes it, and emits the
//! report in the requested format. Exit codes: 0 when every gating check
//! passes, 1 when the report verdict is fail, 2 for usage and input errors
//! (unknown flags, malformed specs, inconsistent parameters, existence
//! violations, I/O failures).

use std::collections::BTreeMap;
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use vaidya_core::{emit, run, Command, Error, RunConfig, SolitonParams, Tolerances, Verdict};

#[derive(Parser)]
#[command(
    name = "vaidya",
    version,
    about = "Residual verification for soliton structures on a radiating spherically symmetric metric"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compare numeric curvature against closed forms and symmetry identities
    Curvature(RunOpts),
    /// Compare the generic Lie derivative against the transcribed component table
    Lie(RunOpts),
    /// Check that the solved field zeroes the soliton residual and the component system
    SolitonVerify(RunOpts),
    /// Check that the scalar potential's gradient reproduces the solved field
    PotentialVerify(RunOpts),
    /// Classify the flow from the expansion parameter
    Classify(RunOpts),
    /// Fit a vector-field ansatz and measure the residual floor per mass profile
    FitProbe(RunOpts),
    /// Verify the angular separation family and its forcing obstruction
    SeparationVerify(RunOpts),
    /// Run every section and aggregate a single verdict
    ReportAll(RunOpts),
}

impl Cmd {
    fn split(&self) -> (Command, &RunOpts) {
        match self {
            Cmd::Curvature(o) => (Command::Curvature, o),
            Cmd::Lie(o) => (Command::Lie, o),
            Cmd::SolitonVerify(o) => (Command::SolitonVerify, o),
            Cmd::PotentialVerify(o) => (Command::PotentialVerify, o),
            Cmd::Classify(o) => (Command::Classify, o),
            Cmd::FitProbe(o) => (Command::FitProbe, o),
            Cmd::SeparationVerify(o) => (Command::SeparationVerify, o),
            Cmd::ReportAll(o) => (Command::ReportAll, o),
        }
    }
}

#[derive(Args)]
struct RunOpts {
    /// Mass profile (repeatable): zero | const:<m> | linear:<a>,<b> |
    /// poly:<c0>,<c1>,... | sinoff:<amp>,<offset>
    #[arg(long = "mass", value_name = "SPEC")]
    mass: Vec<String>,
    /// Flow expansion parameter (pairs with --p; alternative to --kappa)
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    /// Coupling offset parameter (pairs with --beta)
    #[arg(long, allow_negative_numbers = true)]
    p: Option<f64>,
    /// Scalar-curvature coupling weight
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    /// Coupling constant kappa = 2*beta - (p + 1/2) (alternative to --beta/--p)
    #[arg(long, allow_negative_numbers = true)]
    kappa: Option<f64>,
    /// Linear amplitude of the solved field's retarded-time component
    #[arg(long = "Psi", value_name = "VALUE", allow_negative_numbers = true)]
    psi_cap: Option<f64>,
    /// Azimuthal amplitude of the solved field (nonzero blocks the potential)
    #[arg(long, allow_negative_numbers = true)]
    psi3: Option<f64>,
    /// Additive gauge constant of the scalar potential
    #[arg(long = "Psi2", value_name = "VALUE", allow_negative_numbers = true)]
    psi2_cap: Option<f64>,
    /// Separation constant (>= 0)
    #[arg(long = "Gamma", value_name = "VALUE", allow_negative_numbers = true)]
    gamma: Option<f64>,
    /// Separation amplitude for the growing azimuthal branch
    #[arg(long, allow_negative_numbers = true)]
    psi1: Option<f64>,
    /// Separation amplitude for the decaying azimuthal branch
    #[arg(long, allow_negative_numbers = true)]
    psi2: Option<f64>,
    /// Sample grid: four 'axis:lo,hi,n' entries joined by ';', axes u,r,theta,phi
    #[arg(long)]
    grid: Option<String>,
    /// Ansatz basis: minimal | extended
    #[arg(long)]
    basis: Option<String>,
    /// Gradient sign convention: g2 | r5
    #[arg(long)]
    convention: Option<String>,
    /// Tolerance override name=value (repeatable; later wins)
    #[arg(long = "tol", value_name = "NAME=VALUE")]
    tol: Vec<String>,
    /// Output format: json | csv | text
    #[arg(long)]
    format: Option<String>,
    /// Write the report to this file instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<String>,
}

fn build_config(command: Command, o: &RunOpts) -> Result<RunConfig, Error> {
    let mut config = RunConfig::defaults(command);
    if !o.mass.is_empty() {
        config.masses = o.mass.clone();
    }
    if let Some(alpha) = o.alpha {
        config.alpha = alpha;
    }
    match (o.beta, o.p, o.kappa) {
        (None, None, None) => {}
        (beta, p, None) => {
            config.beta = beta.unwrap_or(config.beta);
            config.p = p.unwrap_or(config.p);
            config.kappa = SolitonParams::new(config.beta, config.p, config.alpha)?.kappa();
        }
        (None, None, Some(kappa)) => {
            config.kappa = kappa;
            config.p = 0.0;
            config.beta = (kappa + 0.5) / 2.0;
        }
        // Both routes given: pass through and let the engine enforce
        // kappa = 2*beta - (p + 1/2).
        (beta, p, Some(kappa)) => {
            config.beta = beta.unwrap_or(0.0);
            config.p = p.unwrap_or(0.0);
            config.kappa = kappa;
        }
    }
    if let Some(v) = o.psi_cap {
        config.psi = v;
    }
    if let Some(v) = o.psi3 {
        config.psi3 = v;
    }
    if let Some(v) = o.psi2_cap {
        config.psi2_potential = v;
    }
    if let Some(v) = o.gamma {
        config.gamma = v;
    }
    if let Some(v) = o.psi1 {
        config.psi1 = v;
    }
    if let Some(v) = o.psi2 {
        config.psi2 = v;
    }
    if let Some(grid) = &o.grid {
        config.grid = grid.clone();
    }
    if let Some(basis) = &o.basis {
        config.basis = basis.clone();
    }
    if let Some(convention) = &o.convention {
        config.convention = convention.clone();
    }
    let mut overrides = BTreeMap::new();
    for spec in &o.tol {
        let (name, value) = Tolerances::parse_override(spec)?;
        overrides.insert(name, value);
    }
    // Surface unknown tolerance names before the run starts.
    Tolerances::from_overrides(overrides.clone())?;
    config.tolerance_overrides = overrides;
    if let Some(format) = &o.format {
        config.format = format.parse()?;
    }
    config.out = o.out.clone();
    Ok(config)
}

fn execute(command: Command, opts: &RunOpts) -> Result<ExitCode, Error> {
    let config = build_config(command, opts)?;
    let report = run(&config)?;
    emit(&report, config.format, config.out.as_deref().map(Path::new))?;
    Ok(match report.verdict {
        Verdict::Pass => ExitCode::SUCCESS,
        _ => ExitCode::from(1),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, opts) = cli.command.split();
    match execute(command, opts) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
