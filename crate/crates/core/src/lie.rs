//! Lie derivative of the metric along a vector field, two ways: the generic
//! coordinate formula
//!
//!   (L_X g)_ij = X^k d_k g_ij + g_kj d_i X^k + g_ik d_j X^k
//!
//! and the transcribed component table specific to the radiating metric.
//! The generic formula is ground truth. The transcription reproduces the
//! published table, whose (1,1) entry omits the advection term
//! X^k d_k g_11 = 2 m' A / r - 2 m B / r^2; that gap is deliberate and
//! exposed via [`advection_gap_11`] so callers can verify it exactly.

use crate::error::Result;
use crate::field::ScalarField;
use crate::jet::{Coord, Jet2, Point4};
use crate::mass::MassFunction;
use crate::metric::{Mat4, Metric4};

/// Contravariant vector field with components (A, B, C, D) along
/// (d_u, d_r, d_theta, d_phi).
#[derive(Clone, Debug)]
pub struct VectorField4 {
    pub a: ScalarField,
    pub b: ScalarField,
    pub c: ScalarField,
    pub d: ScalarField,
}

impl VectorField4 {
    pub fn new(a: ScalarField, b: ScalarField, c: ScalarField, d: ScalarField) -> Self {
        VectorField4 { a, b, c, d }
    }

    pub fn zero() -> Self {
        VectorField4 {
            a: ScalarField::zero(),
            b: ScalarField::zero(),
            c: ScalarField::zero(),
            d: ScalarField::zero(),
        }
    }

    /// The unit coordinate field along `c` (e.g. d_u or d_phi).
    pub fn coordinate(c: Coord) -> Self {
        let mut v = Self::zero();
        *v.component_mut(c.index()) = ScalarField::constant(1.0);
        v
    }

    /// A field with a single nonzero component.
    pub fn single(index: usize, f: ScalarField) -> Self {
        let mut v = Self::zero();
        *v.component_mut(index) = f;
        v
    }

    pub fn component(&self, index: usize) -> &ScalarField {
        match index {
            0 => &self.a,
            1 => &self.b,
            2 => &self.c,
            3 => &self.d,
            _ => panic!("component index {index} out of range"),
        }
    }

    fn component_mut(&mut self, index: usize) -> &mut ScalarField {
        match index {
            0 => &mut self.a,
            1 => &mut self.b,
            2 => &mut self.c,
            3 => &mut self.d,
            _ => panic!("component index {index} out of range"),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        VectorField4 {
            a: self.a.scale(s),
            b: self.b.scale(s),
            c: self.c.scale(s),
            d: self.d.scale(s),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        VectorField4 {
            a: &self.a + &other.a,
            b: &self.b + &other.b,
            c: &self.c + &other.c,
            d: &self.d + &other.d,
        }
    }

    pub fn eval(&self, p: &Point4) -> Result<[Jet2; 4]> {
        Ok([
            self.a.eval(p)?,
            self.b.eval(p)?,
            self.c.eval(p)?,
            self.d.eval(p)?,
        ])
    }
}

/// Generic coordinate formula; symmetric by construction of the summands.
pub fn lie_derivative(g: &Metric4, x: &VectorField4, p: &Point4) -> Result<Mat4> {
    let gj = g.eval(p)?;
    let xj = x.eval(p)?;
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in i..4 {
            let mut s = 0.0;
            for k in 0..4 {
                s += xj[k].val * gj[i][j].grad[k]
                    + gj[k][j].val * xj[k].grad[i]
                    + gj[i][k].val * xj[k].grad[j];
            }
            out[i][j] = s;
            out[j][i] = s;
        }
    }
    Ok(out)
}

/// The transcribed component table for the radiating metric. Off-diagonal
/// slots are filled by their printed symmetry aliases. The (1,1) slot keeps
/// the published form (no advection term); the (4,4) slot carries the
/// intended r^2 sin^2(theta) weight on d_phi D, which the printed table
/// abbreviates but its own PDE list confirms.
pub fn lie_vaidya_transcribed(x: &VectorField4, m: &MassFunction, p: &Point4) -> Result<Mat4> {
    let xj = x.eval(p)?;
    let (a, b, c, d) = (xj[0], xj[1], xj[2], xj[3]);
    let (mv, _, _) = m.eval(p.u);
    let r = p.r;
    let (st, ct) = p.theta.sin_cos();
    let s2 = st * st;
    let f = (2.0 * mv - r) / r;
    let r2 = r * r;

    let mut l = [[0.0; 4]; 4];
    l[0][0] = 2.0 * f * a.grad[0] - 2.0 * b.grad[0];
    l[0][1] = f * a.grad[1] - b.grad[1] - a.grad[0];
    l[0][2] = f * a.grad[2] - b.grad[2] + r2 * c.grad[0];
    l[0][3] = f * a.grad[3] - b.grad[3] + r2 * s2 * d.grad[0];
    l[1][1] = -2.0 * a.grad[1];
    l[1][2] = r2 * c.grad[1] - a.grad[2];
    l[1][3] = r2 * s2 * d.grad[1] - a.grad[3];
    l[2][2] = 2.0 * (r * b.val + r2 * c.grad[2]);
    l[2][3] = r2 * c.grad[3] + r2 * s2 * d.grad[2];
    l[3][3] = 2.0 * r * b.val * s2 + 2.0 * r2 * c.val * st * ct + 2.0 * r2 * s2 * d.grad[3];
    for i in 0..4 {
        for j in 0..i {
            l[i][j] = l[j][i];
        }
    }
    Ok(l)
}

/// The advection term X^k d_k g_11 = 2 m' A / r - 2 m B / r^2 that the
/// transcribed (1,1) entry drops.
pub fn advection_gap_11(x: &VectorField4, m: &MassFunction, p: &Point4) -> Result<f64> {
    let (mv, m1, _) = m.eval(p.u);
    let a = x.a.value(p)?;
    let b = x.b.value(p)?;
    Ok(2.0 * m1 * a / p.r - 2.0 * mv * b / (p.r * p.r))
}
