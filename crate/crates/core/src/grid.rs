//! Cartesian sample grids over the chart, with the CLI grid grammar
//! `u:<lo>,<hi>,<n>;r:<lo>,<hi>,<n>;theta:<lo>,<hi>,<n>;phi:<lo>,<hi>,<n>`.
//!
//! Points enumerate in a fixed order (u outermost, phi innermost, each axis
//! an inclusive low-to-high linspace), so every aggregation downstream is
//! deterministic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::Point4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisSpec {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl AxisSpec {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo > hi || n == 0 {
            return Err(Error::InvalidInput(format!(
                "axis requires finite lo <= hi and n >= 1, got lo={lo}, hi={hi}, n={n}"
            )));
        }
        Ok(AxisSpec { lo, hi, n })
    }

    /// Inclusive linspace; a single-sample axis sits at `lo`.
    pub fn samples(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.lo];
        }
        let step = (self.hi - self.lo) / (self.n - 1) as f64;
        (0..self.n).map(|i| self.lo + step * i as f64).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleGrid {
    pub u: AxisSpec,
    pub r: AxisSpec,
    pub theta: AxisSpec,
    pub phi: AxisSpec,
}

impl SampleGrid {
    pub fn new(u: AxisSpec, r: AxisSpec, theta: AxisSpec, phi: AxisSpec) -> Self {
        SampleGrid { u, r, theta, phi }
    }

    /// The default verification grid: 4 x 4 x 3 x 3 = 144 points.
    pub fn default_grid() -> Self {
        use std::f64::consts::PI;
        SampleGrid {
            u: AxisSpec {
                lo: 0.0,
                hi: 2.0,
                n: 4,
            },
            r: AxisSpec {
                lo: 1.0,
                hi: 4.0,
                n: 4,
            },
            theta: AxisSpec {
                lo: PI / 4.0,
                hi: 3.0 * PI / 4.0,
                n: 3,
            },
            phi: AxisSpec {
                lo: 0.0,
                hi: 3.0 * PI / 2.0,
                n: 3,
            },
        }
    }

    /// Default grid with theta confined to the open first-quadrant band
    /// where tan-power profiles are regular.
    pub fn separation_default() -> Self {
        use std::f64::consts::PI;
        let mut g = Self::default_grid();
        g.theta = AxisSpec {
            lo: PI / 8.0,
            hi: 3.0 * PI / 8.0,
            n: 3,
        };
        g
    }

    pub fn len(&self) -> usize {
        self.u.n * self.r.n * self.theta.n * self.phi.n
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All grid points in enumeration order; fails if any sample violates
    /// the domain guards.
    pub fn points(&self) -> Result<Vec<Point4>> {
        let mut out = Vec::with_capacity(self.len());
        for &u in &self.u.samples() {
            for &r in &self.r.samples() {
                for &theta in &self.theta.samples() {
                    for &phi in &self.phi.samples() {
                        out.push(Point4::new(u, r, theta, phi)?);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Parses the CLI grammar; all four axes required, any order, once each.
    pub fn parse(spec: &str) -> Result<Self> {
        let mut axes: [Option<AxisSpec>; 4] = [None; 4];
        for part in spec.split(';') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (name, rest) = part.split_once(':').ok_or_else(|| {
                Error::Parse(format!(
                    "grid spec '{spec}': expected axis:lo,hi,n in '{part}'"
                ))
            })?;
            let idx = match name.trim() {
                "u" => 0,
                "r" => 1,
                "theta" => 2,
                "phi" => 3,
                other => {
                    return Err(Error::Parse(format!(
                        "grid spec '{spec}': unknown axis '{other}'"
                    )))
                }
            };
            if axes[idx].is_some() {
                return Err(Error::Parse(format!(
                    "grid spec '{spec}': axis '{name}' given twice"
                )));
            }
            let fields: Vec<&str> = rest.split(',').map(str::trim).collect();
            if fields.len() != 3 {
                return Err(Error::Parse(format!(
                    "grid spec '{spec}': axis '{name}' needs lo,hi,n"
                )));
            }
            let lo: f64 = fields[0].parse().map_err(|_| {
                Error::Parse(format!("grid spec '{spec}': bad number '{}'", fields[0]))
            })?;
            let hi: f64 = fields[1].parse().map_err(|_| {
                Error::Parse(format!("grid spec '{spec}': bad number '{}'", fields[1]))
            })?;
            let n: usize = fields[2].parse().map_err(|_| {
                Error::Parse(format!("grid spec '{spec}': bad count '{}'", fields[2]))
            })?;
            axes[idx] = Some(AxisSpec::new(lo, hi, n)?);
        }
        match axes {
            [Some(u), Some(r), Some(theta), Some(phi)] => Ok(SampleGrid { u, r, theta, phi }),
            _ => Err(Error::Parse(format!(
                "grid spec '{spec}': all of u, r, theta, phi required"
            ))),
        }
    }

    /// Inverse of [`parse`](Self::parse), for config echoes.
    pub fn spec_string(&self) -> String {
        format!(
            "u:{},{},{};r:{},{},{};theta:{},{},{};phi:{},{},{}",
            self.u.lo,
            self.u.hi,
            self.u.n,
            self.r.lo,
            self.r.hi,
            self.r.n,
            self.theta.lo,
            self.theta.hi,
            self.theta.n,
            self.phi.lo,
            self.phi.hi,
            self.phi.n,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_has_the_documented_point_count() {
        let g = SampleGrid::default_grid();
        assert_eq!(g.len(), 144);
        assert_eq!(g.points().unwrap().len(), 144);
    }

    #[test]
    fn enumeration_order_is_u_major() {
        let g = SampleGrid::new(
            AxisSpec::new(0.0, 1.0, 2).unwrap(),
            AxisSpec::new(1.0, 2.0, 2).unwrap(),
            AxisSpec::new(1.0, 1.0, 1).unwrap(),
            AxisSpec::new(0.0, 0.0, 1).unwrap(),
        );
        let pts = g.points().unwrap();
        assert_eq!(pts.len(), 4);
        assert_eq!((pts[0].u, pts[0].r), (0.0, 1.0));
        assert_eq!((pts[1].u, pts[1].r), (0.0, 2.0));
        assert_eq!((pts[2].u, pts[2].r), (1.0, 1.0));
        assert_eq!((pts[3].u, pts[3].r), (1.0, 2.0));
    }

    #[test]
    fn grammar_round_trips() {
        let g = SampleGrid::parse("u:0,2,4;r:1,4,4;theta:0.8,2.3,3;phi:0,4.7,3").unwrap();
        let again = SampleGrid::parse(&g.spec_string()).unwrap();
        assert_eq!(g, again);
        assert_eq!(g.u.n, 4);
        assert_eq!(g.phi.hi, 4.7);
    }

    #[test]
    fn grammar_accepts_any_axis_order() {
        let g = SampleGrid::parse("phi:0,1,2;theta:1,2,2;r:1,4,2;u:0,2,2").unwrap();
        assert_eq!(g.len(), 16);
    }

    #[test]
    fn grammar_rejects_malformed_specs() {
        for s in [
            "",
            "u:0,2,4",
            "u:0,2,4;r:1,4,4;theta:0.8,2.3,3",
            "u:0,2,4;u:0,2,4;r:1,4,4;theta:0.8,2.3,3;phi:0,4.7,3",
            "u:0,2,x;r:1,4,4;theta:0.8,2.3,3;phi:0,4.7,3",
            "u:2,0,4;r:1,4,4;theta:0.8,2.3,3;phi:0,4.7,3",
            "u:0,2,0;r:1,4,4;theta:0.8,2.3,3;phi:0,4.7,3",
            "q:0,2,4;r:1,4,4;theta:0.8,2.3,3;phi:0,4.7,3",
        ] {
            assert!(SampleGrid::parse(s).is_err(), "accepted {s:?}");
        }
    }

    #[test]
    fn out_of_domain_axes_fail_at_point_generation() {
        let g = SampleGrid::new(
            AxisSpec::new(0.0, 1.0, 2).unwrap(),
            AxisSpec::new(0.0, 4.0, 2).unwrap(), // r = 0 below r_min
            AxisSpec::new(1.0, 1.0, 1).unwrap(),
            AxisSpec::new(0.0, 0.0, 1).unwrap(),
        );
        assert!(g.points().is_err());
    }
}
