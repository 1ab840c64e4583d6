//! Verification runs and machine-readable reports.
//!
//! A [`RunConfig`] names a command plus every knob it can use (mass
//! profiles, coupling parameters, grid, basis, tolerances); [`run`] executes
//! the command's checks and returns a [`ResidualReport`] holding one
//! [`CheckResult`] per check. Reports serialize to JSON (full-precision,
//! round-trippable), CSV (one row per check), or plain text.
//!
//! Check semantics: for ordinary residual checks the verdict is pass iff
//! `max <= tolerance`. Probe checks compare the fit's RMS floor against the
//! tolerance column instead: `probe_baseline` passes when the zero-mass
//! floor is below it, `probe_separation` when a nonzero-mass floor EXCEEDS
//! it (the tolerance column then holds separation_factor * baseline), and
//! `gamma_forcing_floor` likewise passes when the obstruction magnitude
//! exceeds the threshold. Checks with no configured tolerance (the listed
//! Riemann comparison, and whichever potential convention is not selected)
//! carry verdict `info`: they are findings, recorded but not gating.
//!
//! Determinism: identical configs produce identical reports except for
//! `wall_time_seconds`. Randomized checks use a fixed internal seed.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::curvature::{closed_form_ricci, compare_riemann_oracle, curvature};
use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::grid::SampleGrid;
use crate::jet::{Coord, Point4};
use crate::lie::{advection_gap_11, lie_derivative, lie_vaidya_transcribed, VectorField4};
use crate::lsq::{nonexistence_probe, BasisSpec, ProbeReport, UPPER_TRIANGLE};
use crate::mass::MassFunction;
use crate::metric::{invert_values, mat_mul, Metric4};
use crate::potential::{verify_gradient_soliton, GradientConvention, PotentialSpec};
use crate::separation::{gamma_forcing_residual, separation_pde_residual, SeparationFamily};
use crate::soliton::{
    classify, correspondence_factors, pde_system_residuals, soliton_residual, solved_vector_field,
    SolitonParams, SolvedSolution,
};

pub const REPORT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Number of seeded random fields in the CLI lie check (the library test
/// suite runs a larger certificate).
const LIE_SAMPLE_FIELDS: usize = 8;
const LIE_SEED: u64 = 0x5eed_11e5;

const COORD_NAMES: [&str; 4] = ["u", "r", "theta", "phi"];

fn pair_label(i: usize, j: usize) -> String {
    format!("({},{})", COORD_NAMES[i], COORD_NAMES[j])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Curvature,
    Lie,
    SolitonVerify,
    PotentialVerify,
    Classify,
    FitProbe,
    SeparationVerify,
    ReportAll,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Curvature => "curvature",
            Command::Lie => "lie",
            Command::SolitonVerify => "soliton-verify",
            Command::PotentialVerify => "potential-verify",
            Command::Classify => "classify",
            Command::FitProbe => "fit-probe",
            Command::SeparationVerify => "separation-verify",
            Command::ReportAll => "report-all",
        }
    }

    /// Mass profiles a command runs over when none are given explicitly.
    pub fn default_masses(self) -> Vec<String> {
        match self {
            Command::Curvature | Command::Lie | Command::ReportAll => vec![
                "zero".into(),
                "const:1".into(),
                "linear:1,0".into(),
                "sinoff:1,2".into(),
            ],
            Command::FitProbe => vec!["zero".into(), "const:1".into()],
            _ => vec!["zero".into()],
        }
    }

    /// The default sample grid; the separation command confines the polar
    /// axis to the band where the tan-power family is regular.
    pub fn default_grid(self) -> SampleGrid {
        match self {
            Command::SeparationVerify => SampleGrid::separation_default(),
            _ => SampleGrid::default_grid(),
        }
    }
}

impl std::fmt::Display for Command {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "curvature" => Ok(Command::Curvature),
            "lie" => Ok(Command::Lie),
            "soliton-verify" => Ok(Command::SolitonVerify),
            "potential-verify" => Ok(Command::PotentialVerify),
            "classify" => Ok(Command::Classify),
            "fit-probe" => Ok(Command::FitProbe),
            "separation-verify" => Ok(Command::SeparationVerify),
            "report-all" => Ok(Command::ReportAll),
            other => Err(Error::Parse(format!("unknown command '{other}'"))),
        }
    }
}

/// Named tolerance categories with their defaults; any of them can be
/// overridden per run with `--tol <name>=<value>`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub overrides: BTreeMap<String, f64>,
}

impl Tolerances {
    pub const NAMES: [&'static str; 11] = [
        "curvature",
        "consistency",
        "lie",
        "soliton",
        "pde",
        "potential",
        "separation",
        "probe_baseline",
        "probe_separation",
        "forcing_floor",
        "riemann_listed",
    ];

    pub fn named_default(name: &str) -> Option<f64> {
        match name {
            "curvature" => Some(1e-9),
            "consistency" => Some(1e-12),
            "lie" => Some(1e-9),
            "soliton" => Some(1e-10),
            "pde" => Some(1e-12),
            "potential" => Some(1e-10),
            "separation" => Some(1e-10),
            "probe_baseline" => Some(1e-8),
            "probe_separation" => Some(1e3),
            "forcing_floor" => Some(1e-3),
            // The listed-table comparison is informational by default: the
            // dimensionally inconsistent listed entry makes one component a
            // documented finding rather than a gate.
            "riemann_listed" => None,
            _ => None,
        }
    }

    pub fn from_overrides(overrides: BTreeMap<String, f64>) -> Result<Self> {
        for name in overrides.keys() {
            if !Self::NAMES.contains(&name.as_str()) {
                return Err(Error::Parse(format!(
                    "unknown tolerance '{name}'; known: {}",
                    Self::NAMES.join(", ")
                )));
            }
        }
        Ok(Tolerances { overrides })
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.overrides
            .get(name)
            .copied()
            .or_else(|| Self::named_default(name))
    }

    /// Parses one `name=value` override.
    pub fn parse_override(s: &str) -> Result<(String, f64)> {
        let (name, value) = s.split_once('=').ok_or_else(|| {
            Error::Parse(format!("tolerance override '{s}': expected name=value"))
        })?;
        let v: f64 = value
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("tolerance override '{s}': bad number '{value}'")))?;
        if !v.is_finite() || v < 0.0 {
            return Err(Error::Parse(format!(
                "tolerance override '{s}': value must be finite and >= 0"
            )));
        }
        Ok((name.trim().to_string(), v))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "text" => Ok(OutputFormat::Text),
            other => Err(Error::Parse(format!(
                "unknown format '{other}', expected json, csv or text"
            ))),
        }
    }
}

impl std::fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
            OutputFormat::Text => "text",
        })
    }
}

/// Full configuration of one verification run, echoed into the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub masses: Vec<String>,
    pub beta: f64,
    pub p: f64,
    pub alpha: f64,
    pub kappa: f64,
    /// Linear amplitude of the solved field's u-component.
    pub psi: f64,
    /// Constant azimuthal amplitude of the solved field.
    pub psi3: f64,
    /// Additive gauge constant of the scalar potential.
    pub psi2_potential: f64,
    /// Separation constant.
    pub gamma: f64,
    /// Separation amplitudes.
    pub psi1: f64,
    pub psi2: f64,
    pub grid: String,
    pub basis: String,
    pub convention: String,
    pub tolerance_overrides: BTreeMap<String, f64>,
    pub format: OutputFormat,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub out: Option<String>,
}

impl RunConfig {
    /// Baseline configuration for a command: kappa = 2 (beta = 1.25, p = 0),
    /// alpha = 1, solved amplitudes zero, separation (Gamma, psi1, psi2) =
    /// (1, 1, 0.5), minimal basis, consistent gradient convention.
    pub fn defaults(command: Command) -> Self {
        let params = SolitonParams::new(1.25, 0.0, 1.0).expect("finite defaults");
        RunConfig {
            command,
            masses: command.default_masses(),
            beta: 1.25,
            p: 0.0,
            alpha: 1.0,
            kappa: params.kappa(),
            psi: 0.0,
            psi3: 0.0,
            psi2_potential: 0.0,
            gamma: 1.0,
            psi1: 1.0,
            psi2: 0.5,
            grid: command.default_grid().spec_string(),
            basis: "minimal".into(),
            convention: "g2".into(),
            tolerance_overrides: BTreeMap::new(),
            format: OutputFormat::Json,
            out: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Info,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Info => "info",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub max: f64,
    pub rms: f64,
    pub worst_point: [f64; 4],
    pub worst_component: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tolerance: Option<f64>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub config: RunConfig,
    pub checks: Vec<CheckResult>,
    pub verdict: Verdict,
    pub version: String,
    pub wall_time_seconds: f64,
    /// Full fit details when the run includes the nonexistence probe.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub probe: Option<ProbeReport>,
}

/// Accumulates |residual| samples with worst-offender tracking.
struct Agg {
    max: f64,
    sum_sq: f64,
    n: usize,
    worst_point: [f64; 4],
    worst_component: String,
}

impl Agg {
    fn new() -> Self {
        Agg {
            max: 0.0,
            sum_sq: 0.0,
            n: 0,
            worst_point: [0.0; 4],
            worst_component: "none".into(),
        }
    }

    fn add(&mut self, value: f64, p: &Point4, component: &str) {
        self.sum_sq += value * value;
        self.n += 1;
        if value > self.max || self.n == 1 {
            self.max = value;
            self.worst_point = p.coords();
            self.worst_component = component.to_string();
        }
    }

    fn rms(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            (self.sum_sq / self.n as f64).sqrt()
        }
    }

    /// Pass iff max <= tolerance; no tolerance means informational.
    fn ceiling(self, name: impl Into<String>, tolerance: Option<f64>) -> CheckResult {
        let verdict = match tolerance {
            Some(tol) => {
                if self.max <= tol {
                    Verdict::Pass
                } else {
                    Verdict::Fail
                }
            }
            None => Verdict::Info,
        };
        CheckResult {
            name: name.into(),
            max: self.max,
            rms: self.rms(),
            worst_point: self.worst_point,
            worst_component: self.worst_component,
            tolerance,
            verdict,
        }
    }

    /// Pass iff max EXCEEDS the threshold (obstruction-style check).
    fn floor(self, name: impl Into<String>, threshold: f64) -> CheckResult {
        let verdict = if self.max > threshold {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        CheckResult {
            name: name.into(),
            max: self.max,
            rms: self.rms(),
            worst_point: self.worst_point,
            worst_component: self.worst_component,
            tolerance: Some(threshold),
            verdict,
        }
    }
}

struct Ctx {
    masses: Vec<MassFunction>,
    grid: SampleGrid,
    params: SolitonParams,
    beta: f64,
    tols: Tolerances,
}

/// Executes the configured command and gathers its checks.
pub fn run(config: &RunConfig) -> Result<ResidualReport> {
    let start = Instant::now();

    let derived = SolitonParams::new(config.beta, config.p, config.alpha)?;
    if (derived.kappa() - config.kappa).abs() > 1e-12 * config.kappa.abs().max(1.0) {
        return Err(Error::InconsistentKappa {
            kappa: config.kappa,
            derived: derived.kappa(),
        });
    }
    let params = SolitonParams::from_kappa(config.kappa, config.alpha)?;

    let masses = config
        .masses
        .iter()
        .map(|s| MassFunction::parse(s))
        .collect::<Result<Vec<_>>>()?;
    if masses.is_empty() {
        return Err(Error::InvalidInput(
            "at least one mass profile required".into(),
        ));
    }
    let grid = SampleGrid::parse(&config.grid)?;
    let tols = Tolerances::from_overrides(config.tolerance_overrides.clone())?;
    let ctx = Ctx {
        masses,
        grid,
        params,
        beta: config.beta,
        tols,
    };

    let mut checks = Vec::new();
    let mut probe = None;
    match config.command {
        Command::Curvature => curvature_checks(&ctx, &mut checks)?,
        Command::Lie => lie_checks(&ctx, &ctx.masses, config, &mut checks)?,
        Command::SolitonVerify => soliton_checks(&ctx, &ctx.masses, config, &mut checks)?,
        Command::PotentialVerify => {
            if ctx.masses.iter().any(|m| !m.is_zero()) {
                return Err(Error::InvalidInput(
                    "potential verification requires the zero mass profile".into(),
                ));
            }
            potential_checks(&ctx, config, &mut checks)?;
        }
        Command::Classify => classify_checks(&ctx, &mut checks)?,
        Command::SeparationVerify => separation_checks(&ctx, &ctx.grid, config, &mut checks)?,
        Command::FitProbe => probe = Some(probe_checks(&ctx, config, &mut checks)?),
        Command::ReportAll => {
            let zero = vec![MassFunction::Zero];
            curvature_checks(&ctx, &mut checks)?;
            lie_checks(&ctx, &ctx.masses, config, &mut checks)?;
            soliton_checks(&ctx, &zero, config, &mut checks)?;
            potential_checks(&ctx, config, &mut checks)?;
            classify_checks(&ctx, &mut checks)?;
            // The default report grid spans polar angles outside the
            // tan-power band, so the separation section always runs on the
            // band-restricted default grid.
            separation_checks(&ctx, &SampleGrid::separation_default(), config, &mut checks)?;
            probe = Some(probe_checks(&ctx, config, &mut checks)?);
        }
    }

    let verdict = if checks.iter().any(|c| c.verdict == Verdict::Fail) {
        Verdict::Fail
    } else {
        Verdict::Pass
    };
    Ok(ResidualReport {
        config: config.clone(),
        checks,
        verdict,
        version: REPORT_VERSION.into(),
        wall_time_seconds: start.elapsed().as_secs_f64(),
        probe,
    })
}

fn curvature_checks(ctx: &Ctx, checks: &mut Vec<CheckResult>) -> Result<()> {
    for m in &ctx.masses {
        let g = Metric4::vaidya(m);
        let tag = m.spec_string();
        let mut ricci = Agg::new();
        let mut scalar = Agg::new();
        let mut symmetry = Agg::new();
        let mut inverse = Agg::new();
        let mut listed = Agg::new();

        for p in ctx.grid.points()? {
            let bundle = curvature(&g, &p)?;
            let closed = closed_form_ricci(m, &p);
            for i in 0..4 {
                for j in 0..4 {
                    ricci.add(
                        (bundle.ricci[i][j] - closed[i][j]).abs(),
                        &p,
                        &pair_label(i, j),
                    );
                }
            }
            scalar.add(bundle.scalar.abs(), &p, "scalar");

            let rl = &bundle.riemann_lowered;
            for a in 0..4 {
                for b in 0..4 {
                    for c in 0..4 {
                        for d in 0..4 {
                            symmetry.add(
                                (rl[a][b][c][d] + rl[b][a][c][d]).abs(),
                                &p,
                                "antisymmetry_first_pair",
                            );
                            symmetry.add(
                                (rl[a][b][c][d] + rl[a][b][d][c]).abs(),
                                &p,
                                "antisymmetry_second_pair",
                            );
                            symmetry.add(
                                (rl[a][b][c][d] - rl[c][d][a][b]).abs(),
                                &p,
                                "pair_exchange",
                            );
                            symmetry.add(
                                (rl[a][b][c][d] + rl[a][c][d][b] + rl[a][d][b][c]).abs(),
                                &p,
                                "first_bianchi",
                            );
                        }
                    }
                }
            }

            let gv = g.values(&p)?;
            let (inv, _) = invert_values(&gv, &p)?;
            let prod = mat_mul(&gv, &inv);
            for i in 0..4 {
                for j in 0..4 {
                    let delta = if i == j { 1.0 } else { 0.0 };
                    inverse.add((prod[i][j] - delta).abs(), &p, &pair_label(i, j));
                }
            }

            let cmp = compare_riemann_oracle(m, &p)?;
            for comp in &cmp.components {
                listed.add(comp.abs_diff_best, &p, &comp.component);
            }
        }

        checks.push(ricci.ceiling(
            format!("ricci_closed_form({tag})"),
            ctx.tols.get("curvature"),
        ));
        checks.push(scalar.ceiling(
            format!("scalar_curvature({tag})"),
            ctx.tols.get("curvature"),
        ));
        checks.push(symmetry.ceiling(
            format!("riemann_symmetry({tag})"),
            ctx.tols.get("curvature"),
        ));
        checks.push(inverse.ceiling(
            format!("inverse_identity({tag})"),
            ctx.tols.get("consistency"),
        ));
        checks.push(listed.ceiling(
            format!("riemann_listed({tag})"),
            ctx.tols.get("riemann_listed"),
        ));
    }
    Ok(())
}

/// Deterministic polynomial-trig field: every component draws coefficients
/// for a fixed profile dictionary from the seeded generator.
fn random_polytrig_field(rng: &mut ChaCha8Rng) -> VectorField4 {
    let profiles: [fn() -> ScalarField; 8] = [
        || ScalarField::constant(1.0),
        || ScalarField::coord(Coord::U),
        || ScalarField::coord(Coord::R),
        || ScalarField::coord(Coord::U).sin(),
        || ScalarField::coord(Coord::Theta).sin(),
        || ScalarField::coord(Coord::Theta).cos(),
        || ScalarField::coord(Coord::Phi).sin(),
        || ScalarField::coord(Coord::Phi).cos(),
    ];
    let mut component = || {
        let mut acc = ScalarField::zero();
        for make in profiles {
            let c: f64 = rng.gen_range(-1.0..1.0);
            acc = &acc + &make().scale(c);
        }
        acc
    };
    VectorField4::new(component(), component(), component(), component())
}

/// Fixed representative field for the correspondence-factor checks; the
/// factors are field-independent identities, so one rich sample suffices.
fn correspondence_sample_field() -> VectorField4 {
    let u = ScalarField::coord(Coord::U);
    let r = ScalarField::coord(Coord::R);
    let theta = ScalarField::coord(Coord::Theta);
    let phi = ScalarField::coord(Coord::Phi);
    VectorField4::new(
        &(&ScalarField::constant(0.4) + &u.scale(0.3)) + &theta.sin().scale(0.2),
        &r.scale(0.5) + &u.cos().scale(0.2),
        &theta.cos().scale(0.3) + &u.scale(0.1),
        &ScalarField::constant(0.25) + &phi.cos().scale(0.15),
    )
}

fn lie_checks(
    ctx: &Ctx,
    masses: &[MassFunction],
    _config: &RunConfig,
    checks: &mut Vec<CheckResult>,
) -> Result<()> {
    let points = ctx.grid.points()?;
    for m in masses {
        let g = Metric4::vaidya(m);
        let tag = m.spec_string();
        let mut rng = ChaCha8Rng::seed_from_u64(LIE_SEED);
        let mut table = Agg::new();
        let mut advection = Agg::new();

        for field_idx in 0..LIE_SAMPLE_FIELDS {
            let x = random_polytrig_field(&mut rng);
            for p in &points {
                let generic = lie_derivative(&g, &x, p)?;
                let transcribed = lie_vaidya_transcribed(&x, m, p)?;
                let gap = advection_gap_11(&x, m, p)?;
                for i in 0..4 {
                    for j in i..4 {
                        if (i, j) == (0, 0) {
                            advection.add(
                                (generic[0][0] - (transcribed[0][0] + gap)).abs(),
                                p,
                                &format!("field_{field_idx}"),
                            );
                        } else {
                            table.add(
                                (generic[i][j] - transcribed[i][j]).abs(),
                                p,
                                &format!("{} field_{field_idx}", pair_label(i, j)),
                            );
                        }
                    }
                }
            }
        }
        checks.push(table.ceiling(
            format!("lie_generic_vs_transcribed({tag})"),
            ctx.tols.get("lie"),
        ));
        checks.push(advection.ceiling(format!("lie_advection_gap({tag})"), ctx.tols.get("lie")));

        // Correspondence factors: the first listed equation is half the
        // (u,u) residual and the fifth is exactly the (u,r) residual.
        let x = correspondence_sample_field();
        let entries = correspondence_factors(&x, m, &ctx.params, &ctx.grid)?;
        for (index, expected, name) in [
            (0usize, 0.5, "correspondence_eq1_half"),
            (4usize, 1.0, "correspondence_eq5_unit"),
        ] {
            let e = &entries[index];
            let mut agg = Agg::new();
            let origin = points[0];
            agg.add((e.factor - expected).abs(), &origin, "factor");
            agg.add(e.fit_rms, &origin, "fit_rms");
            checks.push(agg.ceiling(format!("{name}({tag})"), ctx.tols.get("lie")));
        }
    }
    Ok(())
}

fn soliton_checks(
    ctx: &Ctx,
    masses: &[MassFunction],
    config: &RunConfig,
    checks: &mut Vec<CheckResult>,
) -> Result<()> {
    let sol = SolvedSolution {
        psi: config.psi,
        psi3: config.psi3,
    };
    let x = solved_vector_field(ctx.params.kappa(), &sol);
    for m in masses {
        let tag = m.spec_string();
        let mut residual = Agg::new();
        let mut pde = Agg::new();
        for p in ctx.grid.points()? {
            let res = soliton_residual(m, &x, &ctx.params, &p)?;
            for i in 0..4 {
                for j in i..4 {
                    residual.add(res[i][j].abs(), &p, &pair_label(i, j));
                }
            }
            let eqs = pde_system_residuals(&x, m, ctx.params.kappa(), &p)?;
            for (k, e) in eqs.iter().enumerate() {
                pde.add(e.abs(), &p, &format!("eq{}", k + 1));
            }
        }
        checks.push(residual.ceiling(format!("soliton_residual({tag})"), ctx.tols.get("soliton")));
        checks.push(pde.ceiling(format!("pde_system({tag})"), ctx.tols.get("pde")));
    }
    Ok(())
}

fn potential_checks(ctx: &Ctx, config: &RunConfig, checks: &mut Vec<CheckResult>) -> Result<()> {
    let chosen: GradientConvention = config.convention.parse()?;
    let sol = SolvedSolution {
        psi: config.psi,
        psi3: config.psi3,
    };
    let mut route_gap = Agg::new();
    let origin = ctx.grid.points()?[0];

    for convention in [GradientConvention::G2, GradientConvention::R5] {
        let spec = PotentialSpec::new(config.kappa, config.psi, config.psi2_potential, convention)?;
        let dev = verify_gradient_soliton(&spec, &sol, &ctx.grid)?;
        let mut agg = Agg::new();
        agg.max = dev.max;
        agg.sum_sq = dev.rms * dev.rms;
        agg.n = 1;
        agg.worst_point = dev.worst_point;
        agg.worst_component = COORD_NAMES[dev.worst_component].to_string();
        let tolerance = if convention == chosen {
            ctx.tols.get("potential")
        } else {
            None
        };
        checks.push(agg.ceiling(
            format!("potential_gradient_{}", convention.name()),
            tolerance,
        ));
        route_gap.add(dev.route_gap, &origin, convention.name());
    }
    checks.push(route_gap.ceiling("gradient_route_gap", ctx.tols.get("consistency")));
    Ok(())
}

fn classify_checks(ctx: &Ctx, checks: &mut Vec<CheckResult>) -> Result<()> {
    let class = classify(ctx.beta)?;
    checks.push(CheckResult {
        name: format!("classify_{}", class.name()),
        max: 0.0,
        rms: 0.0,
        worst_point: [0.0; 4],
        worst_component: class.name().into(),
        tolerance: None,
        verdict: Verdict::Pass,
    });
    Ok(())
}

fn separation_checks(
    ctx: &Ctx,
    grid: &SampleGrid,
    config: &RunConfig,
    checks: &mut Vec<CheckResult>,
) -> Result<()> {
    let fam = SeparationFamily::new(config.gamma, config.psi1, config.psi2)?;
    let mut pde = Agg::new();
    let mut forcing = Agg::new();
    for p in grid.points()? {
        pde.add(separation_pde_residual(&fam, &p)?.abs(), &p, "pde");
        forcing.add(
            gamma_forcing_residual(&fam, ctx.params.kappa(), &p)?.abs(),
            &p,
            "forcing",
        );
    }
    checks.push(pde.ceiling("separation_pde", ctx.tols.get("separation")));

    let forced_zero = config.gamma == 0.0 || (config.psi1 == 0.0 && config.psi2 == 0.0);
    if forced_zero {
        checks.push(forcing.ceiling("gamma_forcing_zero", ctx.tols.get("consistency")));
    } else {
        let threshold = ctx.tols.get("forcing_floor").unwrap_or(1e-3);
        checks.push(forcing.floor("gamma_forcing_floor", threshold));
    }
    Ok(())
}

fn probe_checks(
    ctx: &Ctx,
    config: &RunConfig,
    checks: &mut Vec<CheckResult>,
) -> Result<ProbeReport> {
    let basis = BasisSpec::parse(&config.basis)?;
    let report = nonexistence_probe(&ctx.masses, &basis, &ctx.grid, &ctx.params)?;
    let points = ctx.grid.points()?;

    for entry in &report.entries {
        let fit = &entry.fit;
        let p = points[fit.worst_row / 10];
        let (i, j) = UPPER_TRIANGLE[fit.worst_row % 10];
        let check = |name: String, tolerance: f64, pass: bool| CheckResult {
            name,
            max: fit.residual_max,
            rms: fit.residual_rms,
            worst_point: p.coords(),
            worst_component: pair_label(i, j),
            tolerance: Some(tolerance),
            verdict: if pass { Verdict::Pass } else { Verdict::Fail },
        };
        if entry.zero_mass {
            let tol = ctx.tols.get("probe_baseline").unwrap_or(1e-8);
            checks.push(check(
                format!("probe_baseline({})", entry.mass),
                tol,
                fit.residual_rms < tol,
            ));
        } else {
            let factor = ctx.tols.get("probe_separation").unwrap_or(1e3);
            let threshold = factor * report.baseline_floor;
            checks.push(check(
                format!("probe_separation({})", entry.mass),
                threshold,
                fit.residual_rms > threshold,
            ));
        }
    }
    Ok(report)
}

/// Renders a report in the requested format.
pub fn render(report: &ResidualReport, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(report)
                .map_err(|e| Error::InvalidInput(format!("serialization failed: {e}")))?;
            s.push('\n');
            Ok(s)
        }
        OutputFormat::Csv => Ok(render_csv(report)),
        OutputFormat::Text => Ok(render_text(report)),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn render_csv(report: &ResidualReport) -> String {
    let mut out = String::from(
        "name,max,rms,worst_u,worst_r,worst_theta,worst_phi,worst_component,tolerance,verdict\n",
    );
    for c in &report.checks {
        let tol = c.tolerance.map(|t| t.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            csv_field(&c.name),
            c.max,
            c.rms,
            c.worst_point[0],
            c.worst_point[1],
            c.worst_point[2],
            c.worst_point[3],
            csv_field(&c.worst_component),
            tol,
            c.verdict.name(),
        ));
    }
    out
}

fn render_text(report: &ResidualReport) -> String {
    let cfg = &report.config;
    let mut out = String::new();
    out.push_str(&format!("command: {}\n", cfg.command));
    out.push_str(&format!("version: {}\n", report.version));
    out.push_str(&format!(
        "config: masses=[{}] kappa={} beta={} p={} alpha={} grid={} basis={} convention={}\n",
        cfg.masses.join(" "),
        cfg.kappa,
        cfg.beta,
        cfg.p,
        cfg.alpha,
        cfg.grid,
        cfg.basis,
        cfg.convention,
    ));
    out.push_str(&format!("checks: {}\n", report.checks.len()));
    for c in &report.checks {
        let tol = c
            .tolerance
            .map(|t| format!("{t:.3e}"))
            .unwrap_or_else(|| "-".into());
        out.push_str(&format!(
            "  [{:<4}] {:<44} max={:<12.4e} rms={:<12.4e} tol={:<10} worst={} @ ({}, {}, {}, {})\n",
            c.verdict.name(),
            c.name,
            c.max,
            c.rms,
            tol,
            c.worst_component,
            c.worst_point[0],
            c.worst_point[1],
            c.worst_point[2],
            c.worst_point[3],
        ));
    }
    let failed = report
        .checks
        .iter()
        .filter(|c| c.verdict == Verdict::Fail)
        .count();
    out.push_str(&format!(
        "verdict: {} ({} checks, {} failed)\n",
        report.verdict.name(),
        report.checks.len(),
        failed,
    ));
    out.push_str(&format!(
        "wall_time_seconds: {:.3}\n",
        report.wall_time_seconds
    ));
    out
}

/// Renders and writes the report; returns bytes written. Without a path the
/// report goes to stdout.
pub fn emit(
    report: &ResidualReport,
    format: OutputFormat,
    out: Option<&std::path::Path>,
) -> Result<usize> {
    let rendered = render(report, format)?;
    match out {
        Some(path) => {
            std::fs::write(path, &rendered)?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(rendered.as_bytes())?;
        }
    }
    Ok(rendered.len())
}
