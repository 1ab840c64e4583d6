//! Scalar potential for the gradient form of the solved flow field: a
//! function f whose metric gradient reproduces the solved vector field.
//!
//! Two sign conventions for the u^2 term of f circulate; they differ only in
//! that sign, and only one of them satisfies grad(f) = X:
//!
//! ```text
//! g2-consistent:  f = -kappa u r / 2 - kappa u^2 / 4 - Psi (r + u) + Psi2
//! as-printed-r5:  f = -kappa u r / 2 + kappa u^2 / 4 - Psi (r + u) + Psi2
//! ```
//!
//! The g2-consistent form passes exactly; the as-printed form leaves a
//! radial deviation of |kappa u|, which [`verify_gradient_soliton`] reports
//! rather than hides. Existence also requires the azimuthal amplitude of the
//! solved field to vanish (psi3 = 0) and the mass to be identically zero;
//! both are enforced.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::grid::SampleGrid;
use crate::jet::{Coord, Jet2, Point4};
use crate::mass::MassFunction;
use crate::metric::{invert_values, Metric4};
use crate::soliton::{solved_vector_field, SolvedSolution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GradientConvention {
    /// The u^2 sign that makes grad(f) = X hold exactly (the default).
    G2,
    /// The u^2 sign as printed alongside the factored potential.
    R5,
}

impl GradientConvention {
    pub fn name(self) -> &'static str {
        match self {
            GradientConvention::G2 => "g2",
            GradientConvention::R5 => "r5",
        }
    }

    /// Sign of the kappa u^2 / 4 term.
    fn quadratic_sign(self) -> f64 {
        match self {
            GradientConvention::G2 => -1.0,
            GradientConvention::R5 => 1.0,
        }
    }
}

impl std::str::FromStr for GradientConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "g2" => Ok(GradientConvention::G2),
            "r5" => Ok(GradientConvention::R5),
            other => Err(Error::Parse(format!(
                "unknown gradient convention '{other}', expected g2 or r5"
            ))),
        }
    }
}

impl std::fmt::Display for GradientConvention {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialSpec {
    pub kappa: f64,
    /// Linear amplitude shared with the solved field's A component.
    pub psi: f64,
    /// Additive gauge constant; drops out of every gradient.
    pub psi2: f64,
    pub convention: GradientConvention,
}

impl PotentialSpec {
    pub fn new(kappa: f64, psi: f64, psi2: f64, convention: GradientConvention) -> Result<Self> {
        if !(kappa.is_finite() && psi.is_finite() && psi2.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "potential parameters must be finite, got kappa={kappa}, psi={psi}, psi2={psi2}"
            )));
        }
        Ok(PotentialSpec {
            kappa,
            psi,
            psi2,
            convention,
        })
    }

    /// The potential f as a scalar field.
    pub fn field(&self) -> ScalarField {
        let (kappa, psi, psi2) = (self.kappa, self.psi, self.psi2);
        let sign = self.convention.quadratic_sign();
        ScalarField::from_fn(move |p| {
            let u = Jet2::coord(Coord::U, p);
            let r = Jet2::coord(Coord::R, p);
            Ok((u * r).scale(-0.5 * kappa)
                + (u * u).scale(sign * 0.25 * kappa)
                + (r + u).scale(-psi)
                + Jet2::constant(psi2))
        })
    }
}

/// Gradient of f with the index raised through the inverse metric:
/// (grad f)^j = g^{jk} d_k f, as values along (d_u, d_r, d_theta, d_phi).
pub fn metric_gradient(g: &Metric4, f: &ScalarField, p: &Point4) -> Result<[f64; 4]> {
    let gv = g.values(p)?;
    let (inv, _det) = invert_values(&gv, p)?;
    let df = f.eval(p)?.grad;
    let mut out = [0.0; 4];
    for j in 0..4 {
        out[j] = (0..4).map(|k| inv[j][k] * df[k]).sum();
    }
    Ok(out)
}

/// The same gradient through the chart-specific closed form
/// (-d_r f, -(d_u f + ((2m - r)/r) d_r f), d_theta f / r^2,
/// d_phi f / (r^2 sin^2 theta)); independent route used for cross-checks.
pub fn gradient_closed_form(m: &MassFunction, f: &ScalarField, p: &Point4) -> Result<[f64; 4]> {
    let df = f.eval(p)?.grad;
    let (mv, _, _) = m.eval(p.u);
    let r2 = p.r * p.r;
    let s = p.theta.sin();
    Ok([
        -df[1],
        -(df[0] + (2.0 * mv - p.r) / p.r * df[1]),
        df[2] / r2,
        df[3] / (r2 * s * s),
    ])
}

/// Per-component deviation of grad(f) from the solved field over a grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GradientDeviation {
    /// Max |(grad f)^i - X^i| over the grid, per component.
    pub per_component: [f64; 4],
    pub max: f64,
    pub rms: f64,
    pub worst_point: [f64; 4],
    pub worst_component: usize,
    /// Max gap between the contraction route and the closed-form route.
    pub route_gap: f64,
}

/// Checks grad(f) = X for the solved field on a grid, in flat mass
/// (the potential construction assumes m identically zero) and only when
/// the azimuthal amplitude vanishes, which is the existence condition.
pub fn verify_gradient_soliton(
    spec: &PotentialSpec,
    s: &SolvedSolution,
    grid: &SampleGrid,
) -> Result<GradientDeviation> {
    if s.psi3 != 0.0 {
        return Err(Error::PotentialExistence { psi3: s.psi3 });
    }
    let mass = MassFunction::Zero;
    let g = Metric4::vaidya(&mass);
    let f = spec.field();
    let x = solved_vector_field(spec.kappa, s);

    let mut per_component = [0.0_f64; 4];
    let mut max = 0.0_f64;
    let mut sum_sq = 0.0_f64;
    let mut count = 0usize;
    let mut worst_point = [0.0; 4];
    let mut worst_component = 0usize;
    let mut route_gap = 0.0_f64;

    for p in grid.points()? {
        let grad = metric_gradient(&g, &f, &p)?;
        let closed = gradient_closed_form(&mass, &f, &p)?;
        let xv = x.eval(&p)?;
        for i in 0..4 {
            route_gap = route_gap.max((grad[i] - closed[i]).abs());
            let dev = (grad[i] - xv[i].val).abs();
            per_component[i] = per_component[i].max(dev);
            sum_sq += dev * dev;
            count += 1;
            if dev > max {
                max = dev;
                worst_point = p.coords();
                worst_component = i;
            }
        }
    }

    Ok(GradientDeviation {
        per_component,
        max,
        rms: (sum_sq / count.max(1) as f64).sqrt(),
        worst_point,
        worst_component,
        route_gap,
    })
}
