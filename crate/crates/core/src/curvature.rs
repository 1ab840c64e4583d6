//! Christoffel symbols, Riemann tensor, Ricci tensor and scalar curvature,
//! assembled numerically per point from metric jets.
//!
//! Convention: Ricci is the contraction Ric_bd = R^a_{bad} over the first
//! and third slots, with the overall Riemann sign fixed so that the
//! radiating metric yields Ric = +2 m'(u)/r^2 du (x) du. Flipping the sign
//! convention flips Riemann and Ricci together, so every symmetry identity
//! below is convention-independent; the fixed choice just pins which of the
//! two self-consistent conventions the numbers are reported in.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::jet::Point4;
use crate::mass::MassFunction;
use crate::metric::{inverse_from_jets, jet_values, Mat4, Metric4};

/// Overall Riemann sign; see the module docs.
const RIEMANN_SIGN: f64 = -1.0;

pub type Rank3 = [[[f64; 4]; 4]; 4];
pub type Rank4 = [[[[f64; 4]; 4]; 4]; 4];

/// Everything curvature-shaped at one point.
#[derive(Debug, Clone)]
pub struct CurvatureBundle {
    /// Gamma^a_{bc}, symmetric in (b, c).
    pub christoffel: Rank3,
    /// [d][a][b][c] = d_d Gamma^a_{bc}.
    pub christoffel_grad: [Rank3; 4],
    /// Fully lowered R_{abcd}.
    pub riemann_lowered: Rank4,
    /// Mixed R^a_{bcd} (same sign convention as the lowered form).
    pub riemann_mixed: Rank4,
    pub ricci: Mat4,
    pub scalar: f64,
}

pub fn curvature(g: &Metric4, p: &Point4) -> Result<CurvatureBundle> {
    let jets = g.eval(p)?;
    let inv = inverse_from_jets(&jets, p)?;
    let gv = jet_values(&jets);
    let giv = jet_values(&inv);

    // Christoffel of the first kind: Gamma_{a,bc} = (d_b g_ac + d_c g_ab - d_a g_bc)/2,
    // and its coordinate gradient from the metric Hessians.
    let mut lower: Rank3 = [[[0.0; 4]; 4]; 4];
    let mut dlower: [Rank3; 4] = [[[[0.0; 4]; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                lower[a][b][c] =
                    0.5 * (jets[a][c].grad[b] + jets[a][b].grad[c] - jets[b][c].grad[a]);
                for d in 0..4 {
                    dlower[d][a][b][c] = 0.5
                        * (jets[a][c].hess(d, b) + jets[a][b].hess(d, c) - jets[b][c].hess(d, a));
                }
            }
        }
    }

    // Raise the first index; product rule for the gradient.
    let mut christoffel: Rank3 = [[[0.0; 4]; 4]; 4];
    let mut christoffel_grad: [Rank3; 4] = [[[[0.0; 4]; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                let mut s = 0.0;
                for m in 0..4 {
                    s += giv[a][m] * lower[m][b][c];
                }
                christoffel[a][b][c] = s;
                for d in 0..4 {
                    let mut ds = 0.0;
                    for m in 0..4 {
                        ds += inv[a][m].grad[d] * lower[m][b][c] + giv[a][m] * dlower[d][m][b][c];
                    }
                    christoffel_grad[d][a][b][c] = ds;
                }
            }
        }
    }

    // R^a_{bcd} = sign * (d_c Gamma^a_{db} - d_d Gamma^a_{cb}
    //                     + Gamma^a_{ce} Gamma^e_{db} - Gamma^a_{de} Gamma^e_{cb}).
    let mut riemann_mixed: Rank4 = [[[[0.0; 4]; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let mut s = christoffel_grad[c][a][d][b] - christoffel_grad[d][a][c][b];
                    for e in 0..4 {
                        s += christoffel[a][c][e] * christoffel[e][d][b]
                            - christoffel[a][d][e] * christoffel[e][c][b];
                    }
                    riemann_mixed[a][b][c][d] = RIEMANN_SIGN * s;
                }
            }
        }
    }

    let mut riemann_lowered: Rank4 = [[[[0.0; 4]; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let mut s = 0.0;
                    for e in 0..4 {
                        s += gv[a][e] * riemann_mixed[e][b][c][d];
                    }
                    riemann_lowered[a][b][c][d] = s;
                }
            }
        }
    }

    // Contraction over the first and third slots.
    let mut ricci: Mat4 = [[0.0; 4]; 4];
    for b in 0..4 {
        for d in 0..4 {
            let mut s = 0.0;
            for a in 0..4 {
                s += riemann_mixed[a][b][a][d];
            }
            ricci[b][d] = s;
        }
    }

    let mut scalar = 0.0;
    for b in 0..4 {
        for d in 0..4 {
            scalar += giv[b][d] * ricci[b][d];
        }
    }

    Ok(CurvatureBundle {
        christoffel,
        christoffel_grad,
        riemann_lowered,
        riemann_mixed,
        ricci,
        scalar,
    })
}

/// The closed-form Ricci tensor of the radiating metric: the single
/// nonvanishing component is the uu slot, 2 m'(u)/r^2.
pub fn closed_form_ricci(m: &MassFunction, p: &Point4) -> Mat4 {
    let (_, m1, _) = m.eval(p.u);
    let mut ric = [[0.0; 4]; 4];
    ric[0][0] = 2.0 * m1 / (p.r * p.r);
    ric
}

/// One row of the printed-closed-form comparison.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RiemannComponentReport {
    /// 1-based index label, e.g. "R_1212".
    pub component: String,
    /// Closed form exactly as listed in the source table.
    pub listed: f64,
    /// Numeric lowered Riemann under this crate's sign convention.
    pub numeric: f64,
    /// |numeric - listed| and |-numeric - listed|.
    pub abs_diff_plus: f64,
    pub abs_diff_minus: f64,
    /// |best_sign * numeric - listed| for the globally best sign.
    pub abs_diff_best: f64,
}

/// Comparison of the six listed closed-form components against the numeric
/// tensor, under both overall sign conventions.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RiemannComparison {
    /// Sign (+1/-1) minimizing the summed per-component differences.
    pub best_sign: f64,
    pub components: Vec<RiemannComponentReport>,
}

impl RiemannComparison {
    pub fn max_diff_best(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.abs_diff_best)
            .fold(0.0, f64::max)
    }
}

/// Evaluates the six listed closed forms (transcribed verbatim, including
/// the dimensionally inconsistent 1313 entry, which is expected to disagree)
/// and compares them with the numeric tensor.
pub fn compare_riemann_oracle(m: &MassFunction, p: &Point4) -> Result<RiemannComparison> {
    let g = Metric4::vaidya(m);
    let bundle = curvature(&g, p)?;
    let (mv, m1, _) = m.eval(p.u);
    let r = p.r;
    let s2 = p.theta.sin().powi(2);

    // (label, 0-based indices, listed closed form as printed)
    let listed: [(&str, [usize; 4], f64); 6] = [
        ("R_1212", [0, 1, 0, 1], -2.0 * mv / r.powi(3)),
        (
            "R_1313",
            [0, 2, 0, 2],
            (-2.0 * mv + r * r * m1 - mv) / (r * r),
        ),
        ("R_1323", [0, 2, 1, 2], mv / r),
        ("R_1424", [0, 3, 1, 3], mv * s2 / r),
        (
            "R_1414",
            [0, 3, 0, 3],
            -(2.0 * mv * mv - mv * r + r * r * m1) * s2 / (r * r),
        ),
        ("R_3434", [2, 3, 2, 3], 2.0 * mv * r * s2),
    ];

    let mut sum_plus = 0.0;
    let mut sum_minus = 0.0;
    let mut rows = Vec::new();
    for (component, [a, b, c, d], lv) in listed {
        let nv = bundle.riemann_lowered[a][b][c][d];
        let dp = (nv - lv).abs();
        let dm = (-nv - lv).abs();
        sum_plus += dp;
        sum_minus += dm;
        rows.push(RiemannComponentReport {
            component: component.to_string(),
            listed: lv,
            numeric: nv,
            abs_diff_plus: dp,
            abs_diff_minus: dm,
            abs_diff_best: 0.0,
        });
    }
    let best_sign = if sum_plus <= sum_minus { 1.0 } else { -1.0 };
    for row in &mut rows {
        row.abs_diff_best = if best_sign > 0.0 {
            row.abs_diff_plus
        } else {
            row.abs_diff_minus
        };
    }
    Ok(RiemannComparison {
        best_sign,
        components: rows,
    })
}
