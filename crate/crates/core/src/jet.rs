//! Second-order forward-mode jets over the four chart coordinates.
//!
//! A [`Jet2`] carries a value, the 4-gradient and the symmetric 4x4 Hessian
//! of a scalar expression with respect to (u, r, theta, phi). Arithmetic on
//! jets propagates both derivative orders exactly (product, quotient and
//! chain rules), so curvature and Lie-derivative formulas downstream never
//! need finite differencing.
//!
//! The Hessian is stored as its upper triangle (10 entries); symmetry is
//! therefore structural, not a numerical accident.

use std::fmt;

use crate::error::{Error, Result};

/// Chart coordinate labels, in index order (u, r, theta, phi).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coord {
    U,
    R,
    Theta,
    Phi,
}

pub const COORDS: [Coord; 4] = [Coord::U, Coord::R, Coord::Theta, Coord::Phi];

impl Coord {
    #[inline]
    pub fn index(self) -> usize {
        match self {
            Coord::U => 0,
            Coord::R => 1,
            Coord::Theta => 2,
            Coord::Phi => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Coord::U => "u",
            Coord::R => "r",
            Coord::Theta => "theta",
            Coord::Phi => "phi",
        }
    }
}

/// Evaluation-domain guards. Radius and polar angle are kept away from the
/// coordinate singularities of the spherical chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainLimits {
    pub r_min: f64,
    pub theta_min: f64,
}

impl Default for DomainLimits {
    fn default() -> Self {
        DomainLimits {
            r_min: 1e-3,
            theta_min: 1e-3,
        }
    }
}

/// A point of the chart: retarded time u, radius r, polar angle theta,
/// azimuth phi. Constructors reject points outside the guarded domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point4 {
    pub u: f64,
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
}

impl Point4 {
    /// Builds a point under the default domain limits.
    pub fn new(u: f64, r: f64, theta: f64, phi: f64) -> Result<Self> {
        Self::new_in(&DomainLimits::default(), u, r, theta, phi)
    }

    /// Builds a point under explicit domain limits.
    pub fn new_in(limits: &DomainLimits, u: f64, r: f64, theta: f64, phi: f64) -> Result<Self> {
        if !(u.is_finite() && r.is_finite() && theta.is_finite() && phi.is_finite()) {
            return Err(Error::OutOfDomain(format!(
                "coordinates must be finite, got (u={u}, r={r}, theta={theta}, phi={phi})"
            )));
        }
        if r < limits.r_min {
            return Err(Error::OutOfDomain(format!(
                "r = {r} below r_min = {}",
                limits.r_min
            )));
        }
        if theta < limits.theta_min || theta > std::f64::consts::PI - limits.theta_min {
            return Err(Error::OutOfDomain(format!(
                "theta = {theta} outside [{}, pi - {}]",
                limits.theta_min, limits.theta_min
            )));
        }
        Ok(Point4 { u, r, theta, phi })
    }

    #[inline]
    pub fn coords(&self) -> [f64; 4] {
        [self.u, self.r, self.theta, self.phi]
    }

    #[inline]
    pub fn coord(&self, c: Coord) -> f64 {
        self.coords()[c.index()]
    }

    /// The same point with one coordinate shifted; used by finite-difference
    /// cross-checks. The shifted point is re-validated.
    pub fn shifted(&self, c: Coord, h: f64) -> Result<Self> {
        let mut x = self.coords();
        x[c.index()] += h;
        Point4::new(x[0], x[1], x[2], x[3])
    }
}

impl fmt::Display for Point4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(u={}, r={}, theta={}, phi={})",
            self.u, self.r, self.theta, self.phi
        )
    }
}

/// Arithmetic failures inside jet operations. These carry no position; the
/// field layer attaches the evaluation point.
#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum JetError {
    #[error("division by zero value")]
    DivisionByZero,

    #[error("{op} outside its domain (value {value})")]
    Domain { op: &'static str, value: f64 },
}

/// tan is rejected when |cos| falls below this, i.e. within ~1e-12 of a pole.
pub const TAN_COS_MIN: f64 = 1e-12;

/// Upper-triangle index for the symmetric Hessian: (i, j) with i <= j.
#[inline(always)]
fn tri(i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    // Row i starts after rows 0..i, which hold (4 - k) entries each.
    i * 4 - (i * i - i) / 2 + (j - i)
}

/// Value, gradient and Hessian of a scalar expression at one chart point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet2 {
    pub val: f64,
    pub grad: [f64; 4],
    /// Upper triangle of the Hessian, rows (0,0)..(0,3),(1,1)..(1,3),(2,2),(2,3),(3,3).
    pub hess: [f64; 10],
}

impl Jet2 {
    /// Constant jet: zero derivatives of both orders.
    #[inline]
    pub fn constant(c: f64) -> Self {
        Jet2 {
            val: c,
            grad: [0.0; 4],
            hess: [0.0; 10],
        }
    }

    /// Coordinate jet at `p`: unit gradient along `c`, zero Hessian.
    #[inline]
    pub fn coord(c: Coord, p: &Point4) -> Self {
        let mut grad = [0.0; 4];
        grad[c.index()] = 1.0;
        Jet2 {
            val: p.coord(c),
            grad,
            hess: [0.0; 10],
        }
    }

    /// Symmetric Hessian access; (i, j) and (j, i) read the same slot.
    #[inline]
    pub fn hess(&self, i: usize, j: usize) -> f64 {
        self.hess[tri(i, j)]
    }

    #[inline]
    pub fn is_finite(&self) -> bool {
        self.val.is_finite()
            && self.grad.iter().all(|g| g.is_finite())
            && self.hess.iter().all(|h| h.is_finite())
    }

    /// Composes a univariate function through this jet given its value and
    /// first two derivatives at `self.val`:
    ///
    ///   (g o f)_i  = g' f_i
    ///   (g o f)_ij = g'' f_i f_j + g' f_ij
    #[inline]
    pub fn chain(&self, g0: f64, g1: f64, g2: f64) -> Self {
        let mut grad = [0.0; 4];
        for i in 0..4 {
            grad[i] = g1 * self.grad[i];
        }
        let mut hess = [0.0; 10];
        for i in 0..4 {
            for j in i..4 {
                hess[tri(i, j)] = g2 * self.grad[i] * self.grad[j] + g1 * self.hess(i, j);
            }
        }
        Jet2 {
            val: g0,
            grad,
            hess,
        }
    }

    #[inline]
    pub fn scale(self, c: f64) -> Self {
        self.chain(c * self.val, c, 0.0)
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.val.sin_cos();
        // (sin f)' = cos f, (sin f)'' = -sin f.
        self.chain(s, c, -s)
    }

    pub fn cos(self) -> Self {
        let (s, c) = self.val.sin_cos();
        // (cos f)' = -sin f, (cos f)'' = -cos f.
        self.chain(c, -s, -c)
    }

    /// tan as sin/cos; rejected within [`TAN_COS_MIN`] of a pole.
    pub fn tan(self) -> std::result::Result<Self, JetError> {
        if self.val.cos().abs() <= TAN_COS_MIN {
            return Err(JetError::Domain {
                op: "tan",
                value: self.val,
            });
        }
        self.sin().try_div(self.cos())
    }

    pub fn exp(self) -> Self {
        let e = self.val.exp();
        self.chain(e, e, e)
    }

    /// Natural log; requires a strictly positive value.
    pub fn ln(self) -> std::result::Result<Self, JetError> {
        if self.val <= 0.0 {
            return Err(JetError::Domain {
                op: "ln",
                value: self.val,
            });
        }
        let inv = 1.0 / self.val;
        Ok(self.chain(self.val.ln(), inv, -inv * inv))
    }

    /// Square root; requires a strictly positive value (the derivatives
    /// blow up at zero).
    pub fn sqrt(self) -> std::result::Result<Self, JetError> {
        if self.val <= 0.0 {
            return Err(JetError::Domain {
                op: "sqrt",
                value: self.val,
            });
        }
        let s = self.val.sqrt();
        Ok(self.chain(s, 0.5 / s, -0.25 / (s * self.val)))
    }

    /// Integer power. Negative exponents reject a zero value; exponents 0
    /// and 1 short-circuit the derivative coefficients so no 0 * inf forms.
    pub fn powi(self, k: i32) -> std::result::Result<Self, JetError> {
        if k < 0 && self.val == 0.0 {
            return Err(JetError::Domain {
                op: "powi",
                value: self.val,
            });
        }
        let g0 = self.val.powi(k);
        let g1 = if k == 0 {
            0.0
        } else {
            f64::from(k) * self.val.powi(k - 1)
        };
        let g2 = if k == 0 || k == 1 {
            0.0
        } else {
            f64::from(k) * f64::from(k - 1) * self.val.powi(k - 2)
        };
        Ok(self.chain(g0, g1, g2))
    }

    /// Reciprocal, the building block of the quotient rule.
    pub fn recip(self) -> std::result::Result<Self, JetError> {
        if self.val == 0.0 {
            return Err(JetError::DivisionByZero);
        }
        let inv = 1.0 / self.val;
        // (1/f)' = -1/f^2, (1/f)'' = 2/f^3.
        Ok(self.chain(inv, -inv * inv, 2.0 * inv * inv * inv))
    }

    /// Quotient rule via `self * rhs.recip()`.
    pub fn try_div(self, rhs: Jet2) -> std::result::Result<Self, JetError> {
        Ok(self * rhs.recip()?)
    }
}

impl std::ops::Add for Jet2 {
    type Output = Jet2;

    #[inline]
    fn add(self, rhs: Jet2) -> Jet2 {
        let mut grad = [0.0; 4];
        for i in 0..4 {
            grad[i] = self.grad[i] + rhs.grad[i];
        }
        let mut hess = [0.0; 10];
        for k in 0..10 {
            hess[k] = self.hess[k] + rhs.hess[k];
        }
        Jet2 {
            val: self.val + rhs.val,
            grad,
            hess,
        }
    }
}

impl std::ops::Sub for Jet2 {
    type Output = Jet2;

    #[inline]
    fn sub(self, rhs: Jet2) -> Jet2 {
        let mut grad = [0.0; 4];
        for i in 0..4 {
            grad[i] = self.grad[i] - rhs.grad[i];
        }
        let mut hess = [0.0; 10];
        for k in 0..10 {
            hess[k] = self.hess[k] - rhs.hess[k];
        }
        Jet2 {
            val: self.val - rhs.val,
            grad,
            hess,
        }
    }
}

impl std::ops::Mul for Jet2 {
    type Output = Jet2;

    #[inline]
    fn mul(self, rhs: Jet2) -> Jet2 {
        let mut grad = [0.0; 4];
        for i in 0..4 {
            // Product rule: (f g)_i = f_i g + f g_i.
            grad[i] = self.grad[i] * rhs.val + self.val * rhs.grad[i];
        }
        let mut hess = [0.0; 10];
        for i in 0..4 {
            for j in i..4 {
                // Second order: (f g)_ij = f_ij g + f_i g_j + f_j g_i + f g_ij.
                // Grouped so each sub-sum is invariant under swapping the
                // operands, keeping multiplication bit-commutative.
                hess[tri(i, j)] = (self.hess(i, j) * rhs.val + self.val * rhs.hess(i, j))
                    + (self.grad[i] * rhs.grad[j] + self.grad[j] * rhs.grad[i]);
            }
        }
        Jet2 {
            val: self.val * rhs.val,
            grad,
            hess,
        }
    }
}

impl std::ops::Neg for Jet2 {
    type Output = Jet2;

    #[inline]
    fn neg(self) -> Jet2 {
        self.scale(-1.0)
    }
}
