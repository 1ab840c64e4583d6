//! Mass profiles m(u) for the radiating metric, with exact first and second
//! derivatives and a small textual grammar used by the CLI:
//!
//! ```text
//! zero | const:<v> | linear:<a>,<b> | poly:<c0>,<c1>,... | sinoff:<amp>,<offset>
//! ```
//!
//! `linear:a,b` means m(u) = a*u + b; `poly` lists coefficients from degree
//! zero upward; `sinoff:amp,offset` means m(u) = amp*sin(u) + offset.

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::jet::{Coord, Jet2};

#[derive(Debug, Clone, PartialEq)]
pub enum MassFunction {
    Zero,
    Constant(f64),
    Linear { slope: f64, intercept: f64 },
    Polynomial(Vec<f64>),
    SinusoidalOffset { amplitude: f64, offset: f64 },
}

impl MassFunction {
    /// (m, m', m'') at retarded time u. The zero profile returns exact zeros.
    pub fn eval(&self, u: f64) -> (f64, f64, f64) {
        match self {
            MassFunction::Zero => (0.0, 0.0, 0.0),
            MassFunction::Constant(c) => (*c, 0.0, 0.0),
            MassFunction::Linear { slope, intercept } => (slope * u + intercept, *slope, 0.0),
            MassFunction::Polynomial(coeffs) => {
                // Horner pass carrying (p, p', p'') together.
                let (mut m, mut d1, mut d2) = (0.0, 0.0, 0.0);
                for &c in coeffs.iter().rev() {
                    d2 = d2 * u + 2.0 * d1;
                    d1 = d1 * u + m;
                    m = m * u + c;
                }
                (m, d1, d2)
            }
            MassFunction::SinusoidalOffset { amplitude, offset } => {
                let (s, c) = u.sin_cos();
                (amplitude * s + offset, amplitude * c, -amplitude * s)
            }
        }
    }

    /// m as a scalar field of the u coordinate (chain rule through the jet).
    pub fn field(&self) -> ScalarField {
        let m = self.clone();
        ScalarField::from_fn(move |p| {
            let u = Jet2::coord(Coord::U, p);
            let (m0, m1, m2) = m.eval(u.val);
            Ok(u.chain(m0, m1, m2))
        })
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, MassFunction::Zero)
    }

    /// Parses the CLI grammar. Numbers must be finite.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "zero" {
            return Ok(MassFunction::Zero);
        }
        let (kind, args) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("mass spec '{s}': expected kind:args")))?;
        let nums = parse_numbers(s, args)?;
        match (kind, nums.as_slice()) {
            ("const", [v]) => Ok(MassFunction::Constant(*v)),
            ("linear", [a, b]) => Ok(MassFunction::Linear {
                slope: *a,
                intercept: *b,
            }),
            ("poly", coeffs) if !coeffs.is_empty() => Ok(MassFunction::Polynomial(coeffs.to_vec())),
            ("sinoff", [amp, off]) => Ok(MassFunction::SinusoidalOffset {
                amplitude: *amp,
                offset: *off,
            }),
            ("const", _) | ("linear", _) | ("poly", _) | ("sinoff", _) => Err(Error::Parse(
                format!("mass spec '{s}': wrong number of arguments for '{kind}'"),
            )),
            _ => Err(Error::Parse(format!(
                "mass spec '{s}': unknown kind '{kind}'"
            ))),
        }
    }

    /// Inverse of [`parse`](Self::parse); used for config echoes.
    pub fn spec_string(&self) -> String {
        match self {
            MassFunction::Zero => "zero".to_string(),
            MassFunction::Constant(v) => format!("const:{v}"),
            MassFunction::Linear { slope, intercept } => format!("linear:{slope},{intercept}"),
            MassFunction::Polynomial(coeffs) => {
                let list: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
                format!("poly:{}", list.join(","))
            }
            MassFunction::SinusoidalOffset { amplitude, offset } => {
                format!("sinoff:{amplitude},{offset}")
            }
        }
    }
}

fn parse_numbers(spec: &str, args: &str) -> Result<Vec<f64>> {
    args.split(',')
        .map(|tok| {
            let v: f64 = tok
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("mass spec '{spec}': bad number '{tok}'")))?;
            if !v.is_finite() {
                return Err(Error::Parse(format!(
                    "mass spec '{spec}': non-finite number '{tok}'"
                )));
            }
            Ok(v)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::Point4;

    #[test]
    fn zero_profile_is_exactly_zero() {
        assert_eq!(MassFunction::Zero.eval(1.7), (0.0, 0.0, 0.0));
    }

    #[test]
    fn constant_profile() {
        assert_eq!(MassFunction::Constant(1.0).eval(5.0), (1.0, 0.0, 0.0));
    }

    #[test]
    fn linear_profile() {
        let m = MassFunction::Linear {
            slope: 1.0,
            intercept: 0.0,
        };
        assert_eq!(m.eval(3.0), (3.0, 1.0, 0.0));
    }

    #[test]
    fn polynomial_horner_derivatives() {
        // 1 + 2u^2: at u=1 -> (3, 4, 4).
        let m = MassFunction::Polynomial(vec![1.0, 0.0, 2.0]);
        let (v, d1, d2) = m.eval(1.0);
        assert!((v - 3.0).abs() < 1e-15);
        assert!((d1 - 4.0).abs() < 1e-15);
        assert!((d2 - 4.0).abs() < 1e-15);
    }

    #[test]
    fn sinusoidal_offset_profile() {
        let m = MassFunction::SinusoidalOffset {
            amplitude: 1.0,
            offset: 2.0,
        };
        let (v, d1, d2) = m.eval(0.0);
        assert_eq!((v, d1, d2), (2.0, 1.0, 0.0));
    }

    #[test]
    fn field_composes_through_the_u_jet() {
        let m = MassFunction::SinusoidalOffset {
            amplitude: 2.0,
            offset: 0.5,
        };
        let p = Point4::new(0.7, 2.0, 1.0, 0.0).unwrap();
        let j = m.field().eval(&p).unwrap();
        let (v, d1, d2) = m.eval(0.7);
        assert_eq!(j.val, v);
        assert_eq!(j.grad, [d1, 0.0, 0.0, 0.0]);
        assert_eq!(j.hess(0, 0), d2);
        for (i, jj) in [(0, 1), (0, 2), (1, 1), (2, 3), (3, 3)] {
            if (i, jj) != (0, 0) {
                assert_eq!(j.hess(i, jj), 0.0);
            }
        }
    }

    #[test]
    fn grammar_round_trips() {
        let specs = [
            "zero",
            "const:1",
            "linear:1,0",
            "poly:1,0,2",
            "sinoff:1,2",
            "const:-0.125",
            "poly:0.1,0.2,0.30000000000000004",
        ];
        for s in specs {
            let m = MassFunction::parse(s).unwrap();
            assert_eq!(MassFunction::parse(&m.spec_string()).unwrap(), m);
        }
    }

    #[test]
    fn grammar_rejects_malformed_specs() {
        for s in [
            "",
            "konst:1",
            "const:",
            "const:a",
            "linear:1",
            "poly:",
            "sinoff:1",
            "const:inf",
            "const:nan",
        ] {
            assert!(MassFunction::parse(s).is_err(), "accepted {s:?}");
        }
    }
}
