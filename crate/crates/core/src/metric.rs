//! The radiating spherically symmetric metric in outgoing null coordinates
//! and its inverse.
//!
//! Entries are scalar fields, so a single evaluation yields the metric, its
//! first partials and its second partials at once. The inverse is computed
//! per point by Gauss-Jordan elimination with partial pivoting on values
//! only; derivatives of the inverse come from the analytic identities
//!
//!   dG = -G (dg) G
//!   d2G_kl = G (d_l g) G (d_k g) G + G (d_k g) G (d_l g) G - G (d2_kl g) G
//!
//! where G = g^{-1}. The elimination itself is never differentiated.

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::jet::{Coord, Jet2, Point4};
use crate::mass::MassFunction;

pub type Mat4 = [[f64; 4]; 4];
pub type MetricJets = [[Jet2; 4]; 4];

/// Nondegeneracy floor for |det g| at an evaluation point.
pub const DET_MIN: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct Metric4 {
    entries: [[ScalarField; 4]; 4],
}

impl Metric4 {
    /// Builds a symmetric metric from an upper-triangle entry factory.
    /// Slots (i, j) and (j, i) share the same field, so symmetry is
    /// structural.
    pub fn from_upper<F>(mut entry: F) -> Self
    where
        F: FnMut(usize, usize) -> ScalarField,
    {
        let mut upper: Vec<Vec<ScalarField>> = Vec::new();
        for i in 0..4 {
            let mut row = Vec::new();
            for j in i..4 {
                row.push(entry(i, j));
            }
            upper.push(row);
        }
        let entries = std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let (a, b) = if i <= j { (i, j) } else { (j, i) };
                upper[a][b - a].clone()
            })
        });
        Metric4 { entries }
    }

    /// The line element g11 = (2m - r)/r, g12 = g21 = -1, g33 = r^2,
    /// g44 = r^2 sin^2(theta), all other entries zero.
    pub fn vaidya(m: &MassFunction) -> Self {
        let mf = m.field();
        let r = ScalarField::coord(Coord::R);
        let sin_theta = ScalarField::coord(Coord::Theta).sin();
        Self::from_upper(|i, j| match (i, j) {
            (0, 0) => &(&mf.scale(2.0) - &r) / &r,
            (0, 1) => ScalarField::constant(-1.0),
            (1, 1) => ScalarField::zero(),
            (2, 2) => r.powi(2),
            (3, 3) => &r.powi(2) * &sin_theta.powi(2),
            _ => ScalarField::zero(),
        })
    }

    pub fn entry(&self, i: usize, j: usize) -> &ScalarField {
        &self.entries[i][j]
    }

    /// All sixteen entries as jets. Symmetric slots evaluate the same field.
    pub fn eval(&self, p: &Point4) -> Result<MetricJets> {
        let mut out = [[Jet2::constant(0.0); 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                out[i][j] = self.entries[i][j].eval(p)?;
            }
        }
        Ok(out)
    }

    pub fn values(&self, p: &Point4) -> Result<Mat4> {
        let jets = self.eval(p)?;
        Ok(jet_values(&jets))
    }
}

pub fn jet_values(jets: &MetricJets) -> Mat4 {
    let mut v = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            v[i][j] = jets[i][j].val;
        }
    }
    v
}

pub fn mat_mul(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut c = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let mut s = 0.0;
            for k in 0..4 {
                s += a[i][k] * b[k][j];
            }
            c[i][j] = s;
        }
    }
    c
}

/// Gauss-Jordan inverse with partial pivoting; also returns det(g) from the
/// pivot product so degeneracy is detected before any division blows up.
pub fn invert_values(g: &Mat4, p: &Point4) -> Result<(Mat4, f64)> {
    let mut a = *g;
    let mut inv = [[0.0; 4]; 4];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let mut det = 1.0;
    for col in 0..4 {
        let pivot_row = (col..4)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[pivot_row][col].abs() <= DET_MIN {
            return Err(Error::DegenerateMetric {
                point: *p,
                det: 0.0,
            });
        }
        if pivot_row != col {
            a.swap(col, pivot_row);
            inv.swap(col, pivot_row);
            det = -det;
        }
        let pivot = a[col][col];
        det *= pivot;
        for j in 0..4 {
            a[col][j] /= pivot;
            inv[col][j] /= pivot;
        }
        for i in 0..4 {
            if i != col {
                let f = a[i][col];
                if f != 0.0 {
                    for j in 0..4 {
                        a[i][j] -= f * a[col][j];
                        inv[i][j] -= f * inv[col][j];
                    }
                }
            }
        }
    }
    if det.abs() <= DET_MIN {
        return Err(Error::DegenerateMetric { point: *p, det });
    }
    Ok((inv, det))
}

/// Inverse metric as jets: values from elimination, derivatives from the
/// analytic inverse-derivative identities.
pub fn inverse_metric(g: &Metric4, p: &Point4) -> Result<MetricJets> {
    let jets = g.eval(p)?;
    inverse_from_jets(&jets, p)
}

pub fn inverse_from_jets(jets: &MetricJets, p: &Point4) -> Result<MetricJets> {
    let gv = jet_values(jets);
    let (ginv, _det) = invert_values(&gv, p)?;

    // First partials of g and of G.
    let mut dg = [[[0.0; 4]; 4]; 4]; // [k][i][j] = d_k g_ij
    for k in 0..4 {
        for i in 0..4 {
            for j in 0..4 {
                dg[k][i][j] = jets[i][j].grad[k];
            }
        }
    }
    let mut dginv = [[[0.0; 4]; 4]; 4];
    for k in 0..4 {
        let m = mat_mul(&ginv, &mat_mul(&dg[k], &ginv));
        for i in 0..4 {
            for j in 0..4 {
                dginv[k][i][j] = -m[i][j];
            }
        }
    }

    let mut out = [[Jet2::constant(0.0); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j].val = ginv[i][j];
            for k in 0..4 {
                out[i][j].grad[k] = dginv[k][i][j];
            }
        }
    }

    // Second partials, symmetric in (k, l).
    for k in 0..4 {
        for l in k..4 {
            let mut d2g = [[0.0; 4]; 4];
            for i in 0..4 {
                for j in 0..4 {
                    d2g[i][j] = jets[i][j].hess(k, l);
                }
            }
            let gl = mat_mul(&ginv, &mat_mul(&dg[l], &ginv));
            let gk = mat_mul(&ginv, &mat_mul(&dg[k], &ginv));
            let t1 = mat_mul(&gl, &mat_mul(&dg[k], &ginv));
            let t2 = mat_mul(&gk, &mat_mul(&dg[l], &ginv));
            let t3 = mat_mul(&ginv, &mat_mul(&d2g, &ginv));
            for i in 0..4 {
                for j in 0..4 {
                    let idx = tri_index(k, l);
                    out[i][j].hess[idx] = t1[i][j] + t2[i][j] - t3[i][j];
                }
            }
        }
    }
    Ok(out)
}

/// Upper-triangle slot for (k, l); mirrors the layout in [`Jet2`].
fn tri_index(k: usize, l: usize) -> usize {
    let (k, l) = if k <= l { (k, l) } else { (l, k) };
    k * 4 - (k * k - k) / 2 + (l - k)
}

/// Independent closed-form inverse used as an oracle in tests: the 2x2
/// null block inverts to [[0, -1], [-1, 1 - 2m/r]] and the angular block
/// to diag(1/r^2, 1/(r^2 sin^2 theta)).
pub fn vaidya_inverse_closed_form(m: &MassFunction, p: &Point4) -> Mat4 {
    let (mv, _, _) = m.eval(p.u);
    let r = p.r;
    let s = p.theta.sin();
    let mut g = [[0.0; 4]; 4];
    g[0][1] = -1.0;
    g[1][0] = -1.0;
    g[1][1] = 1.0 - 2.0 * mv / r;
    g[2][2] = 1.0 / (r * r);
    g[3][3] = 1.0 / (r * r * s * s);
    g
}

/// det g = -r^4 sin^2(theta), independent of the mass profile.
pub fn vaidya_det_closed_form(p: &Point4) -> f64 {
    let s = p.theta.sin();
    -p.r.powi(4) * s * s
}
